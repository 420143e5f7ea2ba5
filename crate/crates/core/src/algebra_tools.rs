//! Jacobian ranks and Sylvester resultants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::linalg::{bareiss_rank, det_cofactor, rank_mod_p, MatrixTooLarge, MAX_SYMBOLIC_SIZE};
use crate::poly::{PolyError, Polynomial, Var};

/// `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;
pub const DEFAULT_TRIALS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("both polynomials are constant in {0}")]
    BothConstant(Var),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("matrix over {matrix} cannot be evaluated modulo {p}")]
    PrimeMismatch { matrix: Field, p: u64 },
    #[error(transparent)]
    TooLarge(#[from] MatrixTooLarge),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn new(field: Field, entries: Vec<Vec<Polynomial>>) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        assert!(entries.iter().all(|r| r.len() == cols), "ragged matrix");
        assert!(entries.iter().flatten().all(|p| p.field() == field), "mixed fields");
        PolyMatrix { field, rows, cols, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<Polynomial>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    /// Largest total degree of an entry.
    pub fn max_degree(&self) -> u32 {
        self.entries.iter().flatten().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    pub fn determinant(&self) -> Result<Polynomial, AlgebraError> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        Ok(det_cofactor(self.field, &self.entries)?)
    }

    /// Rank over the rational function field, exactly.
    pub fn exact_rank(&self) -> Result<usize, AlgebraError> {
        Ok(bareiss_rank(&self.entries)?)
    }
}

/// `(∂f_i/∂x_j)`.
pub fn jacobian(field: Field, polys: &[Polynomial], vars: &[Var]) -> PolyMatrix {
    PolyMatrix::new(field, polys.iter().map(|f| vars.iter().map(|&v| f.partial_derivative(v)).collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    /// Bound on the probability that `rank` is below the true rank:
    /// `(r * deg / p)^trials` for the true rank `r`, stated here with `r`
    /// replaced by `min(rows, cols)`.
    pub failure_bound: String,
}

/// Largest rank seen over `trials` uniform points of `F_p^k`. Never exceeds
/// the true rank; successive trials reuse one seeded stream, so more trials
/// never lower the result.
pub fn rank_random_eval(m: &PolyMatrix, trials: usize, p: u64, seed: u64) -> Result<RankReport, AlgebraError> {
    if trials == 0 {
        return Err(AlgebraError::NoTrials);
    }
    Field::prime(p)?;
    if let Some(q) = m.field.modulus() {
        if q != p {
            return Err(AlgebraError::PrimeMismatch { matrix: m.field, p });
        }
    }
    let vars: Vec<Var> = {
        let mut s = std::collections::BTreeSet::new();
        for e in m.entries.iter().flatten() {
            s.extend(e.support());
        }
        s.into_iter().collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials {
        let point: std::collections::HashMap<Var, u64> = vars.iter().map(|&v| (v, rng.gen_range(0..p))).collect();
        let rows = m
            .entries
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate_mod_p(p, |v| point.get(&v).copied())).collect())
            .collect::<Result<Vec<Vec<u64>>, _>>()?;
        best = best.max(rank_mod_p(rows, p));
    }
    let r = m.rows.min(m.cols) as u64;
    let per_trial = BigRational::new(BigInt::from(r * m.max_degree() as u64), BigInt::from(p));
    let per_trial = if per_trial > BigRational::one() { BigRational::one() } else { per_trial };
    let mut bound = BigRational::one();
    for _ in 0..trials {
        bound *= &per_trial;
    }
    if r == 0 || m.max_degree() == 0 {
        bound = BigRational::zero();
    }
    Ok(RankReport { rank: best, trials, prime: p, seed, failure_bound: bound.to_string() })
}

/// Lower bound on the transcendence degree of `polys`: the randomized rank of
/// their Jacobian over all variables they mention (exact in characteristic
/// zero up to the stated failure probability).
pub fn trdeg_lower_bound(polys: &[Polynomial]) -> Result<usize, AlgebraError> {
    let Some(first) = polys.first() else {
        return Ok(0);
    };
    let field = first.field();
    let mut vars = std::collections::BTreeSet::new();
    for p in polys {
        vars.extend(p.support());
    }
    let vars: Vec<Var> = vars.into_iter().collect();
    let j = jacobian(field, polys, &vars);
    let p = field.modulus().unwrap_or(DEFAULT_PRIME);
    Ok(rank_random_eval(&j, DEFAULT_TRIALS, p, 0)?.rank)
}

/// The Sylvester matrix of `f` (degree `n` in `var`) and `g` (degree `m`):
/// `(n+m) x (n+m)`, the first `m` columns holding shifted coefficients of `f`
/// from the leading one down, the last `n` those of `g`.
pub fn sylvester(f: &Polynomial, g: &Polynomial, var: Var) -> Result<PolyMatrix, AlgebraError> {
    let field = f.field();
    if g.field() != field {
        return Err(PolyError::FieldMismatch(field, g.field()).into());
    }
    let n = f.degree_in(var) as usize;
    let m = g.degree_in(var) as usize;
    if n == 0 && m == 0 {
        return Err(AlgebraError::BothConstant(var));
    }
    let size = n + m;
    if size > MAX_SYMBOLIC_SIZE {
        return Err(MatrixTooLarge { size, limit: MAX_SYMBOLIC_SIZE }.into());
    }
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let mut s = vec![vec![Polynomial::zero(field); size]; size];
    for j in 0..m {
        for (i, c) in fc.iter().enumerate() {
            s[j + n - i][j] = c.clone();
        }
    }
    for k in 0..n {
        for (i, c) in gc.iter().enumerate() {
            s[k + m - i][m + k] = c.clone();
        }
    }
    Ok(PolyMatrix::new(field, s))
}

/// `res_var(f, g)`, the determinant of the Sylvester matrix.
pub fn resultant(f: &Polynomial, g: &Polynomial, var: Var) -> Result<Polynomial, AlgebraError> {
    sylvester(f, g, var)?.determinant()
}

/// `(res, u, v)` with `u f + v g = res`, `deg u < deg g`, `deg v < deg f`
/// (degrees in `var`). The coefficient vector of `(u, v)` is the last column
/// of the adjugate of the Sylvester matrix, which solves `S c = res e_last`
/// without leaving the polynomial ring.
pub fn resultant_with_cofactors(
    f: &Polynomial,
    g: &Polynomial,
    var: Var,
) -> Result<(Polynomial, Polynomial, Polynomial), AlgebraError> {
    let s = sylvester(f, g, var)?;
    let field = s.field;
    let size = s.rows;
    let n = f.degree_in(var) as usize;
    let m = g.degree_in(var) as usize;
    let last = size - 1;
    let res = s.determinant()?;
    let minor_rows: Vec<&Vec<Polynomial>> = s.entries[..last].iter().collect();
    let mut c = Vec::with_capacity(size);
    for j in 0..size {
        let minor: Vec<Vec<Polynomial>> = minor_rows
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let d = det_cofactor(field, &minor)?;
        c.push(if (last + j) % 2 == 0 { d } else { -d });
    }
    let x = Polynomial::var(field, var);
    let assemble = |coeffs: &[Polynomial]| {
        let deg = coeffs.len();
        coeffs.iter().enumerate().fold(Polynomial::zero(field), |acc, (i, co)| acc + co * &x.pow((deg - 1 - i) as u32))
    };
    let u = assemble(&c[..m]);
    let v = assemble(&c[m..]);
    debug_assert_eq!(n + m, size);
    Ok((res, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::random_circuit;
    use crate::encoding::local_encode;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(Field::Rational, s).unwrap()
    }

    fn pm(rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::new(Field::Rational, rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect())
    }

    #[test]
    fn jacobians() {
        let j = jacobian(Field::Rational, &[p("x1^2"), p("x2^2")], &[Var::x(1), Var::x(2)]);
        assert_eq!(j, pm(&[&["2*x1", "0"], &["0", "2*x2"]]));
        assert_eq!(rank_random_eval(&j, 2, DEFAULT_PRIME, 1).unwrap().rank, 2);
        let zero_row = jacobian(Field::Rational, &[p("7")], &[Var::x(1), Var::x(2)]);
        assert!(zero_row.get(0, 0).is_zero() && zero_row.get(0, 1).is_zero());
        let dep = pm(&[&["x1"], &["x1"]]);
        assert_eq!(rank_random_eval(&dep, 3, DEFAULT_PRIME, 9).unwrap().rank, 1);
        assert_eq!(dep.exact_rank().unwrap(), 1);
        assert!(rank_random_eval(&dep, 0, DEFAULT_PRIME, 9).is_err());
        assert!(rank_random_eval(&dep, 1, 15, 9).is_err());
    }

    #[test]
    fn transcendence_degree_bounds() {
        assert_eq!(trdeg_lower_bound(&[p("x1"), p("x2"), p("x1 + x2")]).unwrap(), 2);
        assert_eq!(trdeg_lower_bound(&[p("x1^3*x2 + 1")]).unwrap(), 1);
        let c = random_circuit(3, 8, 2, &[-1, 2]);
        let e = local_encode(
            &c,
            &[p("1").constant_term(), p("0").constant_term(), p("2").constant_term()],
            &p("1").constant_term(),
        )
        .unwrap();
        assert_eq!(trdeg_lower_bound(e.map().outputs()).unwrap(), 3 + 8);
    }

    #[test]
    fn rank_is_monotone_in_trials() {
        let m = pm(&[&["x1 - 3", "x2"], &["x2", "x1*x2"]]);
        let mut prev = 0;
        for t in 1..6 {
            let r = rank_random_eval(&m, t, 101, 5).unwrap().rank;
            assert!(r >= prev && r <= 2);
            prev = r;
        }
    }

    #[test]
    fn sylvester_layouts() {
        let x = Var::x(1);
        let s = sylvester(&p("x1 - a1"), &p("x1 - b1"), x);
        // letters other than x/y/z are fine as coefficient symbols
        let s = s.unwrap();
        assert_eq!(s, pm(&[&["1", "1"], &["-a1", "-b1"]]));
        let s = sylvester(&p("x1^2"), &p("x1"), x).unwrap();
        assert_eq!(s, pm(&[&["1", "1", "0"], &["0", "0", "1"], &["0", "0", "0"]]));
        assert_eq!(s.cols(), 3);
        assert!(matches!(sylvester(&p("a1"), &p("b1"), x), Err(AlgebraError::BothConstant(_))));
    }

    #[test]
    fn resultants() {
        let x = Var::x(1);
        assert_eq!(resultant(&p("x1 - a1"), &p("x1 - b1"), x).unwrap(), p("a1 - b1"));
        let y = Var::y(1);
        assert_eq!(resultant(&p("y1 - x1"), &p("y1 - x2"), y).unwrap(), p("x1 - x2"));
        let shared = p("y1 - x1");
        let r = resultant(&(&shared * &p("y1^2 + x2")), &(&shared * &p("x1*y1 - 3")), y).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn cofactors() {
        let x = Var::x(1);
        let (res, u, v) = resultant_with_cofactors(&p("x1 - a1"), &p("x1 - b1"), x).unwrap();
        assert_eq!((res.clone(), u.clone(), v.clone()), (p("a1 - b1"), p("-1"), p("1")));
        let f = p("x1^3 - 2*x1 + 5");
        let g = p("3*x1^2 + x1 - 1");
        let (res, u, v) = resultant_with_cofactors(&f, &g, x).unwrap();
        assert_eq!(&(&u * &f) + &(&v * &g), res);
        assert!(u.degree_in(x) < 2 && v.degree_in(x) < 3);
        let (res, u, v) = resultant_with_cofactors(&p("(x1 - 1)*(x1 + 2)"), &p("(x1 - 1)*x1"), x).unwrap();
        assert!(res.is_zero());
        assert!((&(&u * &p("(x1 - 1)*(x1 + 2)")) + &(&v * &p("(x1 - 1)*x1"))).is_zero());
    }
}
