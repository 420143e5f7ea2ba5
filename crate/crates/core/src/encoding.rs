//! Polynomial maps and the local encoding of a circuit claim `Φ(α) = β`.
//!
//! A [`PolynomialMap`] is a tuple of polynomials over an ordered list of seed
//! variables. Its outputs are addressed by `z1, z2, ...` when a polynomial is
//! composed with the map.

use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{parse_circuit, Circuit, CircuitError, Gate};
use crate::field::{Field, FieldElement, FieldError};
use crate::poly::{PolyError, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("output {index} uses {var}, which is not a seed variable")]
    ForeignVariable { index: usize, var: Var },
    #[error("variable {0} is not one of the map's output variables")]
    SupportOverflow(Var),
    #[error("target length {target} is below the current output length {current}")]
    PadTooSmall { target: usize, current: usize },
    #[error("at least one copy is required")]
    ZeroCopies,
    #[error("circuit input {0} clashes with the internal-gate variables")]
    InputNameClash(Var),
    #[error("seed variable {0} uses the letter reserved for outputs")]
    ReservedSeed(Var),
    #[error("duplicate seed variable {0}")]
    DuplicateSeed(Var),
    #[error("stored outputs do not match the re-encoded provenance")]
    ProvenanceMismatch,
    #[error("malformed map: {0}")]
    Malformed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

impl From<FieldError> for EncodingError {
    fn from(e: FieldError) -> Self {
        EncodingError::Poly(e.into())
    }
}

/// Output variable `z_{i+1}` for the 0-based output index `i`.
pub fn output_var(i: usize) -> Var {
    Var::z(i as u32 + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialMap {
    field: Field,
    seed_vars: Vec<Var>,
    outputs: Vec<Polynomial>,
}

impl PolynomialMap {
    pub fn new(field: Field, seed_vars: Vec<Var>, outputs: Vec<Polynomial>) -> Result<Self, EncodingError> {
        let mut seen = std::collections::HashSet::new();
        for v in &seed_vars {
            if v.letter() == 'z' {
                return Err(EncodingError::ReservedSeed(*v));
            }
            if !seen.insert(*v) {
                return Err(EncodingError::DuplicateSeed(*v));
            }
        }
        for (index, p) in outputs.iter().enumerate() {
            if p.field() != field {
                return Err(PolyError::FieldMismatch(field, p.field()).into());
            }
            if let Some(var) = p.support().into_iter().find(|v| !seen.contains(v)) {
                return Err(EncodingError::ForeignVariable { index, var });
            }
        }
        Ok(PolynomialMap { field, seed_vars, outputs })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn seed_vars(&self) -> &[Var] {
        &self.seed_vars
    }

    pub fn outputs(&self) -> &[Polynomial] {
        &self.outputs
    }

    pub fn seed_len(&self) -> usize {
        self.seed_vars.len()
    }

    pub fn out_len(&self) -> usize {
        self.outputs.len()
    }

    /// `out_len - seed_len`; negative for maps that shrink.
    pub fn stretch(&self) -> i64 {
        self.out_len() as i64 - self.seed_len() as i64
    }

    /// Largest total degree among the outputs (0 for an all-zero map).
    pub fn degree(&self) -> u32 {
        self.outputs.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    /// `z1, ..., z_out`.
    pub fn output_vars(&self) -> Vec<Var> {
        (0..self.out_len()).map(output_var).collect()
    }

    /// Substitution `z_i -> outputs[i-1]`.
    pub fn substitution(&self) -> HashMap<Var, Polynomial> {
        self.outputs.iter().enumerate().map(|(i, p)| (output_var(i), p.clone())).collect()
    }

    fn check_support(&self, p: &Polynomial) -> Result<(), EncodingError> {
        let outs = self.out_len();
        for v in p.support() {
            let ok = v.letter() == 'z' && v.index().is_some_and(|i| i >= 1 && (i as usize) <= outs);
            if !ok {
                return Err(EncodingError::SupportOverflow(v));
            }
        }
        Ok(())
    }

    /// `p(outputs)` as a polynomial in the seed variables.
    pub fn compose_polynomial(&self, p: &Polynomial) -> Result<Polynomial, EncodingError> {
        self.check_support(p)?;
        Ok(p.compose(&self.substitution())?)
    }

    /// Adds `q - out_len` fresh seed variables, each copied verbatim to a new
    /// output. Fresh names are `p<k>` continuing after any existing `p` index.
    pub fn pad(&self, q: usize) -> Result<PolynomialMap, EncodingError> {
        if q < self.out_len() {
            return Err(EncodingError::PadTooSmall { target: q, current: self.out_len() });
        }
        let start = self.seed_vars.iter().filter(|v| v.letter() == 'p').filter_map(|v| v.index()).max().unwrap_or(0);
        let mut seed_vars = self.seed_vars.clone();
        let mut outputs = self.outputs.clone();
        for k in 0..(q - self.out_len()) as u32 {
            let v = Var::new('p', start + k + 1);
            seed_vars.push(v);
            outputs.push(Polynomial::var(self.field, v));
        }
        PolynomialMap::new(self.field, seed_vars, outputs)
    }

    /// `k` copies on disjoint seeds, block-major: seed variable `j` (0-based)
    /// of copy `c` becomes `u_{c*seed_len + j + 1}`, and output `i` of copy `c`
    /// becomes output `c*out_len + i`.
    pub fn parallel_compose(&self, k: usize) -> Result<PolynomialMap, EncodingError> {
        if k == 0 {
            return Err(EncodingError::ZeroCopies);
        }
        let l = self.seed_len();
        let mut seed_vars = Vec::with_capacity(k * l);
        let mut outputs = Vec::with_capacity(k * self.out_len());
        for c in 0..k {
            let renaming: HashMap<Var, Var> =
                self.seed_vars.iter().enumerate().map(|(j, v)| (*v, Var::new('u', (c * l + j + 1) as u32))).collect();
            seed_vars.extend(self.seed_vars.iter().map(|v| renaming[v]));
            outputs.extend(self.outputs.iter().map(|p| p.rename(|v| renaming[&v])));
        }
        PolynomialMap::new(self.field, seed_vars, outputs)
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            seed_len: self.seed_len(),
            seed_vars: Some(self.seed_vars.clone()),
            outputs: self.outputs.iter().map(|p| p.to_string()).collect(),
            blocks: None,
            provenance: None,
            field: Some(self.field),
        }
    }

    /// Reads a map; without `seed_vars` the seed is `x1..x_seed_len`.
    pub fn from_json(json: &MapJson) -> Result<PolynomialMap, EncodingError> {
        let field = json.field.unwrap_or(Field::Rational);
        let seed_vars = match &json.seed_vars {
            Some(vs) => vs.clone(),
            None => (1..=json.seed_len as u32).map(Var::x).collect(),
        };
        if seed_vars.len() != json.seed_len {
            return Err(EncodingError::Malformed(format!(
                "seed_len is {} but {} seed variables are listed",
                json.seed_len,
                seed_vars.len()
            )));
        }
        let outputs = json.outputs.iter().map(|t| Polynomial::parse(field, t)).collect::<Result<Vec<_>, _>>()?;
        PolynomialMap::new(field, seed_vars, outputs)
    }
}

/// Output index ranges of a local encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocks {
    pub input: Range<usize>,
    pub internal: Range<usize>,
    pub output: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceJson {
    pub circuit: String,
    pub alpha: Vec<String>,
    pub beta: String,
}

/// On-disk form of a [`PolynomialMap`] or [`LocalEncoding`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub seed_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_vars: Option<Vec<Var>>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Blocks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
}

/// The map `G(x, y)` whose outputs are the input block `x_i - α_i`, one
/// constraint per internal gate, and the output constraint `y_s - β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalEncoding {
    map: PolynomialMap,
    circuit: Circuit,
    alpha: Vec<FieldElement>,
    beta: FieldElement,
    blocks: Blocks,
}

impl LocalEncoding {
    pub fn map(&self) -> &PolynomialMap {
        &self.map
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn alpha(&self) -> &[FieldElement] {
        &self.alpha
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn field(&self) -> Field {
        self.map.field
    }

    /// Circuit inputs `n`.
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// Circuit size `s`.
    pub fn s(&self) -> usize {
        self.blocks.internal.len()
    }

    /// `y_j` for the 1-based internal gate position `j`.
    pub fn internal_var(j: usize) -> Var {
        Var::y(j as u32)
    }

    /// `f(α) - β`, computed gate by gate.
    pub fn discrepancy(&self) -> FieldElement {
        let f = self.field();
        let v = self.circuit.evaluate(&self.alpha).expect("alpha matches the circuit arity");
        f.sub(&v, &self.beta)
    }

    pub fn to_json(&self) -> MapJson {
        let mut json = self.map.to_json();
        json.blocks = Some(self.blocks.clone());
        json.provenance = Some(ProvenanceJson {
            circuit: self.circuit.to_dsl(),
            alpha: self.alpha.iter().map(|a| a.to_string()).collect(),
            beta: self.beta.to_string(),
        });
        json
    }

    /// Rebuilds the encoding from its provenance and checks that the stored
    /// outputs agree with it.
    pub fn from_json(json: &MapJson) -> Result<LocalEncoding, EncodingError> {
        let field = json.field.unwrap_or(Field::Rational);
        let prov = json
            .provenance
            .as_ref()
            .ok_or_else(|| EncodingError::Malformed("a local encoding needs provenance".into()))?;
        let circuit = parse_circuit(&prov.circuit, field)?;
        let alpha = prov.alpha.iter().map(|a| field.parse_element(a)).collect::<Result<Vec<_>, _>>()?;
        let beta = field.parse_element(&prov.beta)?;
        let enc = local_encode(&circuit, &alpha, &beta)?;
        let stored = PolynomialMap::from_json(json)?;
        if stored != enc.map || json.blocks.as_ref().is_some_and(|b| *b != enc.blocks) {
            return Err(EncodingError::ProvenanceMismatch);
        }
        Ok(enc)
    }
}

/// Builds the local encoding of `Φ(α) = β`.
///
/// Seed variables are the circuit's inputs followed by `y1..ys`, one per
/// internal gate in topological order.
pub fn local_encode(c: &Circuit, alpha: &[FieldElement], beta: &FieldElement) -> Result<LocalEncoding, EncodingError> {
    let f = c.field();
    let n = c.n_inputs();
    if alpha.len() != n {
        return Err(EncodingError::ArityMismatch { expected: n, got: alpha.len() });
    }
    if let Some(v) = c.inputs().iter().find(|v| v.letter() == 'y') {
        return Err(EncodingError::InputNameClash(*v));
    }
    let order = c.internal_order();
    let s = order.len();
    let mut position = vec![usize::MAX; c.gates().len()];
    for (j, &g) in order.iter().enumerate() {
        position[g] = j + 1;
    }
    let l = |g: usize| -> Polynomial {
        match c.gate(g) {
            Gate::Input(i) => Polynomial::var(f, c.inputs()[*i]),
            Gate::Const(k) => Polynomial::constant(f, k.clone()),
            _ => Polynomial::var(f, LocalEncoding::internal_var(position[g])),
        }
    };

    let mut outputs = Vec::with_capacity(n + s + 1);
    for (i, a) in alpha.iter().enumerate() {
        outputs.push(Polynomial::var(f, c.inputs()[i]) - Polynomial::constant(f, a.clone()));
    }
    for &g in &order {
        let rhs = match *c.gate(g) {
            Gate::Add(u, w) => l(u) + l(w),
            Gate::Mul(u, w) => l(u) * l(w),
            _ => unreachable!("internal_order yields internal gates"),
        };
        outputs.push(l(g) - rhs);
    }
    // With no internal gates the output is an input or constant gate.
    outputs.push(l(c.output()) - Polynomial::constant(f, beta.clone()));

    let mut seed_vars = c.inputs().to_vec();
    seed_vars.extend((1..=s).map(LocalEncoding::internal_var));
    let map = PolynomialMap::new(f, seed_vars, outputs)?;
    Ok(LocalEncoding {
        map,
        circuit: c.clone(),
        alpha: alpha.to_vec(),
        beta: beta.clone(),
        blocks: Blocks { input: 0..n, internal: n..n + s, output: n + s..n + s + 1 },
    })
}

/// Additions plus multiplications needed to write `p` as a formula over its
/// variables, with scalar multiples free: `(terms - 1) + Σ (deg(term) - 1)`.
pub fn formula_size(p: &Polynomial) -> usize {
    if p.is_zero() {
        return 0;
    }
    let adds = p.num_terms() - 1;
    let muls: usize = p.terms().iter().map(|(m, _)| (m.degree() as usize).saturating_sub(1)).sum();
    adds + muls
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodingReport {
    pub seed_len: usize,
    pub out_len: usize,
    pub stretch: i64,
    pub degree: u32,
    pub max_formula_size: usize,
}

/// Parameters of a local encoding. Panics if the construction invariants
/// (seed `n+s`, stretch 1, degree and per-output formula size at most 2) fail.
pub fn encoding_metrics(e: &LocalEncoding) -> EncodingReport {
    let m = &e.map;
    let report = EncodingReport {
        seed_len: m.seed_len(),
        out_len: m.out_len(),
        stretch: m.stretch(),
        degree: m.degree(),
        max_formula_size: m.outputs.iter().map(formula_size).max().unwrap_or(0),
    };
    assert_eq!(report.seed_len, e.n() + e.s(), "seed length must be n+s");
    assert_eq!(report.stretch, 1, "a local encoding has stretch 1");
    assert!(report.degree <= 2, "local encoding of degree {}", report.degree);
    assert!(report.max_formula_size <= 2, "output of formula size {}", report.max_formula_size);
    report
}
