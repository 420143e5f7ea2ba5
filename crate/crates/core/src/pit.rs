//! Polynomial identity testing: Schwartz–Zippel sampling, testing through a
//! generator, and hit/fooled classification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, DEFAULT_TERM_BUDGET};
use crate::encoding::{EncodingError, PolynomialMap};
use crate::field::{Field, FieldElement};
use crate::poly::{PolyError, Polynomial, Var};

/// Default cap on the number of points in a deterministic grid run.
pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PitError {
    #[error("grid of size {grid} does not fit in a field of order {order}")]
    GridTooLarge { grid: u64, order: u64 },
    #[error("grid size and trials must be positive")]
    EmptyGrid,
    #[error("{points} grid points exceed the budget of {budget}")]
    PointBudgetExceeded { points: String, budget: u64 },
    #[error("circuit reads {inputs} inputs but the map has {outputs} outputs")]
    TooManyInputs { inputs: usize, outputs: usize },
    #[error("circuit and map are over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Zero,
    NonZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PitVerdict {
    pub verdict: Verdict,
    pub trials_run: u64,
    /// Probability that a `Zero` verdict is wrong; zero for exact methods and
    /// for `NonZero` verdicts.
    pub failure_bound: BigRational,
    /// A point where the tested polynomial is nonzero.
    pub witness: Option<Vec<FieldElement>>,
    pub warnings: Vec<String>,
}

impl PitVerdict {
    fn exact(nonzero: bool, witness: Option<Vec<FieldElement>>, trials_run: u64) -> Self {
        PitVerdict {
            verdict: if nonzero { Verdict::NonZero } else { Verdict::Zero },
            trials_run,
            failure_bound: BigRational::zero(),
            witness,
            warnings: Vec::new(),
        }
    }
}

/// `min(1, (d / g)^trials)`.
pub fn sz_failure_bound(degree: u64, grid: u64, trials: u64) -> BigRational {
    let base = BigRational::new(BigInt::from(degree), BigInt::from(grid));
    if base >= BigRational::one() {
        return BigRational::one();
    }
    let mut acc = BigRational::one();
    for _ in 0..trials {
        acc *= &base;
    }
    acc
}

fn check_grid(field: Field, grid: u64) -> Result<(), PitError> {
    if grid == 0 {
        return Err(PitError::EmptyGrid);
    }
    if let Some(order) = field.order() {
        if grid > order {
            return Err(PitError::GridTooLarge { grid, order });
        }
    }
    Ok(())
}

/// Default Schwartz–Zippel grid side `2d + 1` for degree bound `d`.
pub fn default_grid(degree: u64) -> u64 {
    degree.saturating_mul(2).saturating_add(1)
}

/// Evaluates `c` (over `field`) at `trials` uniform points of
/// `{0, ..., grid_size - 1}^n`. A `NonZero` verdict carries a witness that has
/// been re-checked exactly.
pub fn sz_pit(c: &Circuit, trials: u64, grid_size: u64, field: Field, seed: u64) -> Result<PitVerdict, PitError> {
    if trials == 0 {
        return Err(PitError::EmptyGrid);
    }
    check_grid(field, grid_size)?;
    let c = if c.field() == field { c.clone() } else { c.to_field(field)? };
    let d = c.metrics().degree_bound;
    let mut warnings = Vec::new();
    if grid_size < d.saturating_mul(2) {
        warnings.push(format!("grid size {grid_size} is below twice the degree bound {d}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let point: Vec<FieldElement> = (0..c.n_inputs()).map(|_| field.from_u64(rng.gen_range(0..grid_size))).collect();
        if !c.evaluate(&point)?.is_zero() {
            let mut v = PitVerdict::exact(true, Some(point), t + 1);
            v.warnings = warnings;
            return Ok(v);
        }
    }
    Ok(PitVerdict {
        verdict: Verdict::Zero,
        trials_run: trials,
        failure_bound: sz_failure_bound(d, grid_size, trials),
        witness: None,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorMode {
    /// Expand `c`, compose with the map, compare with zero.
    Symbolic { term_budget: usize },
    /// Sample seeds uniformly from `{0..grid-1}^l`; `grid = None` uses
    /// `2 deg(c) deg(m) + 1`.
    Randomized { trials: u64, grid: Option<u64>, seed: u64 },
    /// Every point of `{0..D}^l` with `D = deg(c) deg(m)`.
    DeterministicGrid { point_budget: u64 },
}

impl Default for GeneratorMode {
    fn default() -> Self {
        GeneratorMode::Symbolic { term_budget: DEFAULT_TERM_BUDGET }
    }
}

/// Tests whether `c(m)` vanishes, feeding output `i` of `m` to input `i` of `c`.
pub fn generator_pit(c: &Circuit, m: &PolynomialMap, mode: &GeneratorMode) -> Result<PitVerdict, PitError> {
    if c.n_inputs() > m.out_len() {
        return Err(PitError::TooManyInputs { inputs: c.n_inputs(), outputs: m.out_len() });
    }
    if c.field() != m.field() {
        return Err(PitError::FieldMismatch);
    }
    let field = m.field();
    let outs = &m.outputs()[..c.n_inputs()];
    let composed_degree = c.metrics().degree_bound.saturating_mul(m.degree() as u64);
    match *mode {
        GeneratorMode::Symbolic { term_budget } => {
            let p = c.expand(term_budget)?;
            let subst = c.inputs().iter().copied().zip(outs.iter().cloned()).collect();
            let composed = p.compose(&subst)?;
            let witness = if composed.is_zero() { None } else { Some(find_witness(&composed, m.seed_vars())) };
            Ok(PitVerdict::exact(!composed.is_zero(), witness, 0))
        }
        GeneratorMode::Randomized { trials, grid, seed } => {
            let grid = grid.unwrap_or_else(|| default_grid(composed_degree));
            check_grid(field, grid)?;
            if trials == 0 {
                return Err(PitError::EmptyGrid);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for t in 0..trials {
                let point: Vec<FieldElement> =
                    (0..m.seed_len()).map(|_| field.from_u64(rng.gen_range(0..grid))).collect();
                if eval_through(c, outs, m.seed_vars(), &point)? {
                    return Ok(PitVerdict::exact(true, Some(point), t + 1));
                }
            }
            Ok(PitVerdict {
                verdict: Verdict::Zero,
                trials_run: trials,
                failure_bound: sz_failure_bound(composed_degree, grid, trials),
                witness: None,
                warnings: Vec::new(),
            })
        }
        GeneratorMode::DeterministicGrid { point_budget } => {
            let side = composed_degree.saturating_add(1);
            check_grid(field, side)?;
            let l = m.seed_len() as u32;
            let points = BigInt::from(side).pow(l);
            if points > BigInt::from(point_budget) {
                return Err(PitError::PointBudgetExceeded { points: points.to_string(), budget: point_budget });
            }
            let total: u64 = side.pow(l);
            for idx in 0..total {
                let mut k = idx;
                let point: Vec<FieldElement> = (0..l)
                    .map(|_| {
                        let v = k % side;
                        k /= side;
                        field.from_u64(v)
                    })
                    .collect();
                if eval_through(c, outs, m.seed_vars(), &point)? {
                    return Ok(PitVerdict::exact(true, Some(point), idx + 1));
                }
            }
            Ok(PitVerdict::exact(false, None, total))
        }
    }
}

fn eval_through(c: &Circuit, outs: &[Polynomial], seed: &[Var], point: &[FieldElement]) -> Result<bool, PitError> {
    let vals = outs.iter().map(|o| o.evaluate_at(seed, point)).collect::<Result<Vec<_>, _>>()?;
    Ok(!c.evaluate(&vals)?.is_zero())
}

// Some point of {0..D}^l where a nonzero polynomial of degree D is nonzero.
fn find_witness(p: &Polynomial, seed: &[Var]) -> Vec<FieldElement> {
    let f = p.field();
    let side = p.total_degree() as u64 + 1;
    let mut idx: u64 = 0;
    loop {
        let mut k = idx;
        let point: Vec<FieldElement> = seed
            .iter()
            .map(|_| {
                let v = k % side;
                k /= side;
                f.from_u64(v)
            })
            .collect();
        if !p.evaluate_at(seed, &point).expect("support is inside the seed").is_zero() {
            return point;
        }
        idx += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HitResult {
    Hit,
    Fooled,
    ZeroInput,
}

/// `ZeroInput` for `p = 0`, otherwise `Hit` iff `p(m) != 0`.
pub fn hit_test(m: &PolynomialMap, p: &Polynomial) -> Result<HitResult, PitError> {
    if p.is_zero() {
        return Ok(HitResult::ZeroInput);
    }
    Ok(if m.compose_polynomial(p)?.is_zero() { HitResult::Fooled } else { HitResult::Hit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annihilator::{annihilator_basis_search, principal_generator, DEFAULT_MONOMIAL_CEILING};
    use crate::circuit::{standard_inputs, CircuitBuilder, RandomCircuitParams};
    use crate::encoding::local_encode;
    use crate::instances::{difference_of_squares, kayal_map};

    fn q(v: i64) -> FieldElement {
        Field::Rational.from_i64(v)
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(Field::Rational, s).unwrap()
    }

    fn zero_circuit() -> Circuit {
        let mut b = CircuitBuilder::new("zero", Field::Rational, standard_inputs(1));
        let m = b.mul(b.input(0), b.constant(-1));
        let g = b.add(b.input(0), m);
        b.finish(g).unwrap()
    }

    #[test]
    fn sz_on_zero_and_nonzero() {
        let v = sz_pit(&zero_circuit(), 5, 3, Field::Rational, 1).unwrap();
        assert_eq!(v.verdict, Verdict::Zero);
        assert_eq!(v.failure_bound, BigRational::new(1.into(), 243.into()));
        let v = sz_pit(&difference_of_squares(), 10, 5, Field::Rational, 1).unwrap();
        assert_eq!(v.verdict, Verdict::NonZero);
        let w = v.witness.unwrap();
        assert!(!difference_of_squares().evaluate(&w).unwrap().is_zero());
        let small = sz_pit(&difference_of_squares(), 1, 2, Field::Rational, 1).unwrap();
        assert_eq!(small.warnings.len(), 1);
        assert!(matches!(
            sz_pit(&difference_of_squares(), 1, 20, Field::prime(7).unwrap(), 1),
            Err(PitError::GridTooLarge { .. })
        ));
        let over_p = sz_pit(&difference_of_squares(), 4, 5, Field::prime(7).unwrap(), 3).unwrap();
        assert_eq!(over_p.verdict, Verdict::NonZero);
    }

    #[test]
    fn generator_modes() {
        let e = local_encode(&difference_of_squares(), &[q(1), q(0)], &q(0)).unwrap();
        let hc = crate::annihilator::lift_program(&e).to_circuit();
        let sym = generator_pit(&hc, e.map(), &GeneratorMode::default()).unwrap();
        assert_eq!(sym.verdict, Verdict::Zero);
        assert!(sym.failure_bound.is_zero());
        let rnd = generator_pit(&hc, e.map(), &GeneratorMode::Randomized { trials: 5, grid: None, seed: 2 }).unwrap();
        assert_eq!(rnd.verdict, Verdict::Zero);

        let mut b = CircuitBuilder::new("proj", Field::Rational, standard_inputs(1));
        let g = b.add(b.input(0), b.constant(0));
        let proj = b.finish(g).unwrap();
        let v = generator_pit(&proj, e.map(), &GeneratorMode::default()).unwrap();
        assert_eq!(v.verdict, Verdict::NonZero);
        let v = generator_pit(&proj, e.map(), &GeneratorMode::Randomized { trials: 8, grid: None, seed: 0 }).unwrap();
        assert_eq!(v.verdict, Verdict::NonZero);
    }

    #[test]
    fn deterministic_grid_on_two_seeds() {
        let m = PolynomialMap::new(
            Field::Rational,
            vec![Var::x(1), Var::x(2)],
            vec![p("x1^2 - x2"), p("x1*x2"), p("x2^2 + 1")],
        )
        .unwrap();
        let mut b = CircuitBuilder::new("sq", Field::Rational, standard_inputs(2));
        let sq = b.mul(b.input(0), b.input(0));
        let t = b.mul(sq, b.constant(1));
        let u = b.add(t, b.input(1));
        let c = b.finish(u).unwrap();
        assert_eq!(c.metrics().degree_bound, 2);
        let v = generator_pit(&c, &m, &GeneratorMode::DeterministicGrid { point_budget: 25 }).unwrap();
        let s = generator_pit(&c, &m, &GeneratorMode::default()).unwrap();
        assert_eq!(v.verdict, s.verdict);
        assert!(v.trials_run <= 25);
        assert!(matches!(
            generator_pit(&c, &m, &GeneratorMode::DeterministicGrid { point_budget: 24 }),
            Err(PitError::PointBudgetExceeded { .. })
        ));
    }

    #[test]
    fn symbolic_and_randomized_agree() {
        for seed in 0..40 {
            let c = RandomCircuitParams::new(3, 6, seed).max_degree(4).build();
            let gen = RandomCircuitParams::new(2, 3, seed + 1000).max_degree(2).build();
            let e = local_encode(&gen, &[q(1), q(-1)], &q(2)).unwrap();
            let sym = generator_pit(&c, e.map(), &GeneratorMode::default()).unwrap();
            let rnd = generator_pit(&c, e.map(), &GeneratorMode::Randomized { trials: 3, grid: None, seed }).unwrap();
            if rnd.verdict == Verdict::NonZero {
                assert_eq!(sym.verdict, Verdict::NonZero, "seed {seed}");
            }
        }
    }

    #[test]
    fn hits_and_fools() {
        let e = local_encode(&difference_of_squares(), &[q(0), q(0)], &q(0)).unwrap();
        let h = principal_generator(&e).unwrap().h;
        assert_eq!(hit_test(e.map(), &h).unwrap(), HitResult::Fooled);
        assert_eq!(hit_test(e.map(), &(&h * &p("z1 - 4*z7^2"))).unwrap(), HitResult::Fooled);
        assert_eq!(hit_test(e.map(), &p("z1 + z2")).unwrap(), HitResult::Hit);
        assert_eq!(hit_test(e.map(), &p("0")).unwrap(), HitResult::ZeroInput);
    }

    #[test]
    fn kayal_map_is_hit_below_its_annihilator_degree() {
        let m = kayal_map(2, 2).unwrap();
        assert!(annihilator_basis_search(&m, 3, DEFAULT_MONOMIAL_CEILING).unwrap().is_empty());
        for t in ["z1", "z3^3 - z1*z2", "z1^2*z2 + z3 + 1", "z2^3 - z3^3"] {
            assert_eq!(hit_test(&m, &p(t)).unwrap(), HitResult::Hit, "{t}");
        }
    }
}
