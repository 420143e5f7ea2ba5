//! The annihilator ideal of a local encoding.
//!
//! For a local encoding `G` of `Φ(α) = β` with `n` inputs and `s` internal
//! gates, the lifts `h_k` satisfy `h_k(G) = y_k` and the generator
//! `h = z_{n+s+1} - h_s + β` spans `Ann(G)`. The lifts are built as a
//! straight-line program over `z1..z_{n+s+1}`, so they can be checked against
//! `G` without ever expanding `h`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{eval_straight_line, Circuit, CircuitError, Gate, GateId, DEFAULT_TERM_BUDGET};
use crate::encoding::{output_var, EncodingError, LocalEncoding, MapJson, PolynomialMap};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::{Monomial, PolyError, Polynomial, Var};

/// Default cap on the number of candidate monomials in a kernel search.
pub const DEFAULT_MONOMIAL_CEILING: usize = 5000;

/// `lift_gate_count <= LIFT_GATES_PER_GATE * s + LIFT_GATES_PER_GATE`.
pub const LIFT_GATES_PER_GATE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnihilatorError {
    #[error("expansion exceeded the term budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("{count} candidate monomials exceed the ceiling of {ceiling}")]
    SearchSpaceTooLarge { count: u128, ceiling: usize },
    #[error("the polynomial does not annihilate the encoding")]
    NotAnAnnihilator,
    #[error("the zero polynomial has no hard multiple")]
    ZeroPolynomial,
    #[error("decomposition mismatch: {0}")]
    DecompositionMismatch(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<CircuitError> for AnnihilatorError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::BudgetExceeded { budget } => AnnihilatorError::BudgetExceeded { budget },
            other => AnnihilatorError::Encoding(other.into()),
        }
    }
}

/// Straight-line program computing every lift `h_1..h_s` and `h` from the
/// inputs `z1..z_{n+s+1}` (gates `0..n+s+1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftProgram {
    field: Field,
    n_vars: usize,
    gates: Vec<Gate>,
    lifts: Vec<GateId>,
    h: GateId,
}

impl LiftProgram {
    /// Number of add/mul gates.
    pub fn gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_internal()).count()
    }

    pub fn lift_ids(&self) -> &[GateId] {
        &self.lifts
    }

    /// Runs the program on arbitrary values for `z1..z_{n+s+1}`; returns the
    /// lift values and the value of `h`.
    pub fn run<T: Clone>(
        &self,
        inputs: &[T],
        constant: impl Fn(&crate::field::FieldElement) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> (Vec<T>, T) {
        assert_eq!(inputs.len(), self.n_vars, "lift program arity");
        let mut vals = eval_straight_line(&self.gates, inputs, constant, add, mul);
        let lifts = self.lifts.iter().map(|&g| vals[g].clone()).collect();
        (lifts, vals.swap_remove(self.h))
    }

    /// Composes the program with the outputs of `m`, gate by gate. Every
    /// intermediate is a polynomial in the seed variables, so this stays small
    /// even when the expanded `h` would not.
    pub fn compose_with(&self, m: &PolynomialMap) -> Result<(Vec<Polynomial>, Polynomial), AnnihilatorError> {
        if m.out_len() != self.n_vars || m.field() != self.field {
            return Err(AnnihilatorError::Malformed("map does not match the lift program".into()));
        }
        let f = self.field;
        Ok(self.run(m.outputs(), |c| Polynomial::constant(f, c.clone()), |a, b| a + b, |a, b| a * b))
    }

    /// Expanded lifts and `h`, aborting when any intermediate exceeds the budget.
    pub fn expand(&self, term_budget: usize) -> Result<(Vec<Polynomial>, Polynomial), AnnihilatorError> {
        let f = self.field;
        let mut vals: Vec<Polynomial> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let p = match g {
                Gate::Input(i) => Polynomial::var(f, output_var(*i)),
                Gate::Const(c) => Polynomial::constant(f, c.clone()),
                Gate::Add(a, b) => &vals[*a] + &vals[*b],
                Gate::Mul(a, b) => &vals[*a] * &vals[*b],
            };
            if p.num_terms() > term_budget {
                return Err(AnnihilatorError::BudgetExceeded { budget: term_budget });
            }
            vals.push(p);
        }
        let lifts = self.lifts.iter().map(|&g| vals[g].clone()).collect();
        Ok((lifts, vals.swap_remove(self.h)))
    }

    /// `h` as a single-output circuit over `z1..z_{n+s+1}`.
    pub fn to_circuit(&self) -> Circuit {
        let inputs = (0..self.n_vars).map(output_var).collect();
        Circuit::from_parts("annihilator", self.field, inputs, self.gates.clone(), self.h)
            .expect("lift programs end with h")
    }
}

/// Builds the lift program: for gate `k` with children `u, w`,
/// `h_k = z_{n+k} + L̂(u) op L̂(w)` where `L̂` sends input `i` to `z_i + α_i`,
/// a constant to itself and internal gate `j` to `h_j`.
pub fn lift_program(e: &LocalEncoding) -> LiftProgram {
    let c = e.circuit();
    let f = e.field();
    let n = e.n();
    let s = e.s();
    let n_vars = n + s + 1;
    let mut gates: Vec<Gate> = (0..n_vars).map(Gate::Input).collect();
    fn push(gates: &mut Vec<Gate>, g: Gate) -> GateId {
        gates.push(g);
        gates.len() - 1
    }
    // lhat[g] = program gate holding L̂ of circuit gate g
    let mut lhat: Vec<Option<GateId>> = vec![None; c.gates().len()];
    let resolve = |gates: &mut Vec<Gate>, lhat: &mut Vec<Option<GateId>>, g: GateId| -> GateId {
        if let Some(id) = lhat[g] {
            return id;
        }
        let id = match c.gate(g) {
            Gate::Input(i) => {
                let a = &e.alpha()[*i];
                if a.is_zero() {
                    *i
                } else {
                    let k = push(gates, Gate::Const(a.clone()));
                    push(gates, Gate::Add(*i, k))
                }
            }
            Gate::Const(k) => push(gates, Gate::Const(k.clone())),
            _ => unreachable!("internal gates are resolved in order"),
        };
        lhat[g] = Some(id);
        id
    };
    let mut lifts = Vec::with_capacity(s);
    for (k, g) in c.internal_order().into_iter().enumerate() {
        let (u, w) = c.gate(g).children().unwrap();
        let lu = resolve(&mut gates, &mut lhat, u);
        let lw = resolve(&mut gates, &mut lhat, w);
        let t = match c.gate(g) {
            Gate::Add(..) => push(&mut gates, Gate::Add(lu, lw)),
            _ => push(&mut gates, Gate::Mul(lu, lw)),
        };
        let hk = push(&mut gates, Gate::Add(n + k, t));
        lhat[g] = Some(hk);
        lifts.push(hk);
    }
    let out = resolve(&mut gates, &mut lhat, c.output());
    let m1 = push(&mut gates, Gate::Const(f.from_i64(-1)));
    let neg = push(&mut gates, Gate::Mul(out, m1));
    let mut h = push(&mut gates, Gate::Add(n + s, neg));
    if !e.beta().is_zero() {
        let b = push(&mut gates, Gate::Const(e.beta().clone()));
        h = push(&mut gates, Gate::Add(h, b));
    }
    LiftProgram { field: f, n_vars, gates, lifts, h }
}

/// The expanded lifts of [`lift_program`].
pub fn synthesize_gate_lifts(e: &LocalEncoding) -> Result<Vec<Polynomial>, AnnihilatorError> {
    Ok(lift_program(e).expand(DEFAULT_TERM_BUDGET)?.0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorCertificate {
    pub h: Polynomial,
    pub gate_lifts: Vec<Polynomial>,
    pub lift_gate_count: usize,
    pub program: LiftProgram,
    pub encoding: LocalEncoding,
}

impl AnnihilatorCertificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            h: self.h.to_string(),
            lifts: self.gate_lifts.iter().map(|p| p.to_string()).collect(),
            lift_gate_count: self.lift_gate_count,
            encoding: self.encoding.to_json(),
        }
    }

    /// Re-synthesizes from the embedded encoding and checks the stored fields.
    pub fn from_json(json: &CertificateJson) -> Result<Self, AnnihilatorError> {
        let enc = LocalEncoding::from_json(&json.encoding)?;
        let cert = principal_generator(&enc)?;
        let f = enc.field();
        let h = Polynomial::parse(f, &json.h)?;
        let lifts = json.lifts.iter().map(|t| Polynomial::parse(f, t)).collect::<Result<Vec<_>, _>>()?;
        if h != cert.h || lifts != cert.gate_lifts || json.lift_gate_count != cert.lift_gate_count {
            return Err(AnnihilatorError::Malformed("certificate does not match its encoding".into()));
        }
        Ok(cert)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub h: String,
    pub lifts: Vec<String>,
    pub lift_gate_count: usize,
    pub encoding: MapJson,
}

/// `h = z_{n+s+1} - h_s + β` with its lifts, expanded within the default budget.
pub fn principal_generator(e: &LocalEncoding) -> Result<AnnihilatorCertificate, AnnihilatorError> {
    principal_generator_with_budget(e, DEFAULT_TERM_BUDGET)
}

pub fn principal_generator_with_budget(
    e: &LocalEncoding,
    term_budget: usize,
) -> Result<AnnihilatorCertificate, AnnihilatorError> {
    let program = lift_program(e);
    let (gate_lifts, h) = program.expand(term_budget)?;
    Ok(AnnihilatorCertificate { h, gate_lifts, lift_gate_count: program.gate_count(), program, encoding: e.clone() })
}

/// Whether `p(m) = 0` exactly.
pub fn verify_annihilates(p: &Polynomial, m: &PolynomialMap) -> Result<bool, AnnihilatorError> {
    Ok(m.compose_polynomial(p)?.is_zero())
}

/// Checks `h_k(G) = y_k` for every lift and `h(G) = 0` through the program.
pub fn verify_program(program: &LiftProgram, e: &LocalEncoding) -> Result<bool, AnnihilatorError> {
    let (lifts, h) = program.compose_with(e.map())?;
    let f = e.field();
    let lifts_ok = lifts.iter().enumerate().all(|(k, l)| *l == Polynomial::var(f, LocalEncoding::internal_var(k + 1)));
    Ok(lifts_ok && h.is_zero())
}

/// `f(z1..zn) - β` for the encoded circuit, over the output variables.
pub fn hard_target(e: &LocalEncoding, term_budget: usize) -> Result<Polynomial, AnnihilatorError> {
    let c = e.circuit();
    let f = e.field();
    let renaming: HashMap<Var, Var> = c.inputs().iter().enumerate().map(|(i, v)| (*v, output_var(i))).collect();
    let fz = c.expand(term_budget)?.rename(|v| renaming[&v]);
    Ok(fz - Polynomial::constant(f, e.beta().clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `f(z1 + α1, ..., zn + αn)`.
    pub f_shifted: Polynomial,
    /// `h - z_{n+s+1} + f_shifted - β`, which lies in `<z_{n+1}, ..., z_{n+s}>`.
    pub g: Polynomial,
}

/// Splits `h` into its restriction to `z_{n+1} = ... = z_{n+s} = 0` and the
/// remainder `g`, checking both identities exactly.
pub fn decompose(
    cert: &AnnihilatorCertificate,
    e: &LocalEncoding,
    term_budget: usize,
) -> Result<Decomposition, AnnihilatorError> {
    let f = e.field();
    let (n, s) = (e.n(), e.s());
    let shift: HashMap<Var, Polynomial> = (0..n)
        .map(|i| (output_var(i), Polynomial::var(f, output_var(i)) + Polynomial::constant(f, e.alpha()[i].clone())))
        .collect();
    let f_shifted = hard_target(e, term_budget)?.substitute(&shift)? + Polynomial::constant(f, e.beta().clone());
    let last = Polynomial::var(f, output_var(n + s));
    let beta = Polynomial::constant(f, e.beta().clone());
    let g = &(&(&cert.h - &last) + &f_shifted) - &beta;

    let zero_internal: HashMap<Var, _> = (n..n + s).map(|i| (output_var(i), f.zero())).collect();
    if !g.restrict(&zero_internal).is_zero() {
        return Err(AnnihilatorError::DecompositionMismatch("g does not vanish on the internal variables".into()));
    }
    if cert.h.restrict(&zero_internal) != &(&last - &f_shifted) + &beta {
        return Err(AnnihilatorError::DecompositionMismatch("restriction of h is not z - f + beta".into()));
    }
    Ok(Decomposition { f_shifted, g })
}

/// Number of monomials of degree at most `d` in `k` variables, saturating.
pub fn monomial_count(k: usize, d: u32) -> u128 {
    // C(k + d, d)
    let mut acc: u128 = 1;
    for i in 1..=d as u128 {
        acc = match acc.checked_mul(k as u128 + i) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// All monomials of degree at most `d` in `vars`, by increasing degree.
pub fn monomials_up_to(vars: &[Var], d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut layer = vec![(Monomial::one(), 0usize)];
    for _ in 0..d {
        let mut next = Vec::new();
        for (m, start) in &layer {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                next.push((m.mul(&Monomial::var(*v)), i));
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        layer = next;
    }
    out
}

/// Basis of all annihilators of `m` of degree at most `max_total_degree`,
/// from the exact kernel of `p ↦ p(m)` on coefficient vectors.
pub fn annihilator_basis_search(
    m: &PolynomialMap,
    max_total_degree: u32,
    monomial_ceiling: usize,
) -> Result<Vec<Polynomial>, AnnihilatorError> {
    let f = m.field();
    let zs = m.output_vars();
    let count = monomial_count(zs.len(), max_total_degree);
    if count > monomial_ceiling as u128 {
        return Err(AnnihilatorError::SearchSpaceTooLarge { count, ceiling: monomial_ceiling });
    }
    let cols = monomials_up_to(&zs, max_total_degree);
    let index_of: HashMap<Var, usize> = zs.iter().enumerate().map(|(i, v)| (*v, i)).collect();

    // image of each monomial under m, built from a smaller one times an output
    let mut images: HashMap<Monomial, Polynomial> = HashMap::new();
    images.insert(Monomial::one(), Polynomial::one(f));
    for mono in &cols {
        if mono.is_one() {
            continue;
        }
        let v = mono.vars().next().unwrap();
        let rest = mono.div(&Monomial::var(v)).unwrap();
        let img = &images[&rest] * &m.outputs()[index_of[&v]];
        images.insert(mono.clone(), img);
    }

    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, crate::field::FieldElement)> = Vec::new();
    for (j, mono) in cols.iter().enumerate() {
        for (t, c) in images[mono].terms() {
            let next = rows.len();
            let r = *rows.entry(t.clone()).or_insert(next);
            entries.push((r, j, c.clone()));
        }
    }
    let mut a = Matrix::zeros(f, rows.len(), cols.len());
    for (r, j, c) in entries {
        a.set(r, j, c);
    }
    Ok(a.kernel()
        .into_iter()
        .map(|v| Polynomial::from_terms(f, cols.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero())))
        .collect())
}

/// Substitutes `z_i -> z_i - α_i` (`i <= n`) and `z_i -> w z_i` (`i > n`) in an
/// annihilator and returns the lowest nonzero coefficient in `w`, a nonzero
/// multiple of `f(z1..zn) - β`.
pub fn extract_hard_multiple(p: &Polynomial, e: &LocalEncoding) -> Result<Polynomial, AnnihilatorError> {
    if p.is_zero() {
        return Err(AnnihilatorError::ZeroPolynomial);
    }
    if !verify_annihilates(p, e.map())? {
        return Err(AnnihilatorError::NotAnAnnihilator);
    }
    let f = e.field();
    let n = e.n();
    let w = Var::plain('w');
    let mut subst: HashMap<Var, Polynomial> = HashMap::new();
    for i in 0..e.map().out_len() {
        let z = Polynomial::var(f, output_var(i));
        let image = if i < n { z - Polynomial::constant(f, e.alpha()[i].clone()) } else { Polynomial::var(f, w) * z };
        subst.insert(output_var(i), image);
    }
    let shifted = p.substitute(&subst)?;
    Ok(shifted
        .coefficients_in(w)
        .into_iter()
        .find(|c| !c.is_zero())
        .expect("substitution is invertible, so the result is nonzero"))
}
