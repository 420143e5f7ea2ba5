//! Ideal-proof-system refutations of polynomial systems.
//!
//! A system `f_1 = ... = f_m = 0` is written over any variables except `z`,
//! which is reserved for the placeholders `z_1..z_m` standing for the `f_j`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annihilator::{principal_generator_with_budget, AnnihilatorError};
use crate::circuit::DEFAULT_TERM_BUDGET;
use crate::encoding::{output_var, LocalEncoding, PolynomialMap};
use crate::field::Field;
use crate::poly::{PolyError, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IpsError {
    #[error("a system needs at least one equation")]
    EmptySystem,
    #[error("refutation mentions {var}, but the system has {m} equations")]
    ArityMismatch { var: Var, m: usize },
    #[error("a geometric refutation may only use z variables, found {0}")]
    NotGeometric(Var),
    #[error("system equations may not use the reserved variable {0}")]
    ReservedVariable(Var),
    #[error("expected a {expected:?} refutation")]
    WrongKind { expected: RefutationKind },
    #[error("the encoded claim holds, so the system is satisfiable")]
    SystemSatisfiable,
    #[error(transparent)]
    Annihilator(#[from] AnnihilatorError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    name: String,
    field: Field,
    equations: Vec<Polynomial>,
}

impl EquationSystem {
    pub fn new(name: impl Into<String>, field: Field, equations: Vec<Polynomial>) -> Result<Self, IpsError> {
        if equations.is_empty() {
            return Err(IpsError::EmptySystem);
        }
        for p in &equations {
            if p.field() != field {
                return Err(PolyError::FieldMismatch(field, p.field()).into());
            }
            if let Some(v) = p.support().into_iter().find(|v| v.letter() == 'z') {
                return Err(IpsError::ReservedVariable(v));
            }
        }
        Ok(EquationSystem { name: name.into(), field, equations })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    fn placeholders(&self) -> HashMap<Var, Polynomial> {
        self.equations.iter().enumerate().map(|(j, p)| (output_var(j), p.clone())).collect()
    }

    pub fn to_json(&self) -> SystemJson {
        SystemJson {
            name: Some(self.name.clone()),
            equations: self.equations.iter().map(|p| p.to_string()).collect(),
            field: Some(self.field),
        }
    }

    pub fn from_json(json: &SystemJson) -> Result<Self, IpsError> {
        let field = json.field.unwrap_or(Field::Rational);
        let eqs = json.equations.iter().map(|t| Polynomial::parse(field, t)).collect::<Result<Vec<_>, _>>()?;
        EquationSystem::new(json.name.clone().unwrap_or_else(|| "system".into()), field, eqs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub equations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefutationKind {
    /// `r(z)` with `r(f) = 0` and `r(0) = 1`.
    Geometric,
    /// `r(x, z)` with `r(x, f(x)) = 1` and `r(x, 0) = 0`.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub kind: RefutationKind,
    pub r: Polynomial,
}

impl Refutation {
    pub fn to_json(&self) -> RefutationJson {
        RefutationJson { kind: self.kind, r: self.r.to_string() }
    }

    pub fn from_json(json: &RefutationJson, field: Field) -> Result<Self, IpsError> {
        Ok(Refutation { kind: json.kind, r: Polynomial::parse(field, &json.r)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationJson {
    pub kind: RefutationKind,
    pub r: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// `r(f_1, ..., f_m) != 0`.
    CompositionNonzero,
    /// `r(0) != 1`.
    ConstantTerm,
    /// `r(x, f(x)) != 1`.
    NotOne,
    /// `r(x, 0) != 0`.
    ZeroSubstitutionNonzero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum IpsVerdict {
    Accept { degree: u32 },
    Reject { reason: RejectReason },
}

impl IpsVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, IpsVerdict::Accept { .. })
    }
}

fn check_placeholders(r: &Polynomial, sys: &EquationSystem, geometric: bool) -> Result<(), IpsError> {
    for v in r.support() {
        if v.letter() == 'z' {
            let ok = v.index().is_some_and(|i| i >= 1 && i as usize <= sys.len());
            if !ok {
                return Err(IpsError::ArityMismatch { var: v, m: sys.len() });
            }
        } else if geometric {
            return Err(IpsError::NotGeometric(v));
        }
    }
    if r.field() != sys.field {
        return Err(PolyError::FieldMismatch(sys.field, r.field()).into());
    }
    Ok(())
}

/// Accepts iff `r(f_1, ..., f_m) = 0` and `r(0) = 1`, both exactly.
pub fn verify_geometric(refutation: &Refutation, sys: &EquationSystem) -> Result<IpsVerdict, IpsError> {
    if refutation.kind != RefutationKind::Geometric {
        return Err(IpsError::WrongKind { expected: RefutationKind::Geometric });
    }
    let r = &refutation.r;
    check_placeholders(r, sys, true)?;
    if !r.constant_term().is_one() {
        return Ok(IpsVerdict::Reject { reason: RejectReason::ConstantTerm });
    }
    if !r.compose(&sys.placeholders())?.is_zero() {
        return Ok(IpsVerdict::Reject { reason: RejectReason::CompositionNonzero });
    }
    Ok(IpsVerdict::Accept { degree: r.total_degree() })
}

/// Accepts iff `r(x, f(x)) = 1` and `r(x, 0) = 0`, both exactly.
pub fn verify_full_ips(refutation: &Refutation, sys: &EquationSystem) -> Result<IpsVerdict, IpsError> {
    if refutation.kind != RefutationKind::Full {
        return Err(IpsError::WrongKind { expected: RefutationKind::Full });
    }
    let r = &refutation.r;
    check_placeholders(r, sys, false)?;
    let zeros: HashMap<Var, _> = (0..sys.len()).map(|j| (output_var(j), sys.field.zero())).collect();
    if !r.restrict(&zeros).is_zero() {
        return Ok(IpsVerdict::Reject { reason: RejectReason::ZeroSubstitutionNonzero });
    }
    if r.substitute(&sys.placeholders())? != Polynomial::one(sys.field) {
        return Ok(IpsVerdict::Reject { reason: RejectReason::NotOne });
    }
    Ok(IpsVerdict::Accept { degree: r.total_degree() })
}

/// The equations `g_j = 0` for the outputs of a map.
pub fn system_of(m: &PolynomialMap) -> EquationSystem {
    EquationSystem::new("map", m.field(), m.outputs().to_vec()).expect("seed variables are never z")
}

/// `h / h(0)` for the principal generator `h` of a false claim `Φ(α) = β`.
pub fn canonical_geometric_refutation(e: &LocalEncoding) -> Result<Refutation, IpsError> {
    canonical_geometric_refutation_with_budget(e, DEFAULT_TERM_BUDGET)
}

pub fn canonical_geometric_refutation_with_budget(
    e: &LocalEncoding,
    term_budget: usize,
) -> Result<Refutation, IpsError> {
    // h(0) = β - f(α); decided by evaluating the circuit
    if e.discrepancy().is_zero() {
        return Err(IpsError::SystemSatisfiable);
    }
    let h = principal_generator_with_budget(e, term_budget)?.h;
    let f = e.field();
    let scale = f.inv(&h.constant_term()).map_err(PolyError::from)?;
    Ok(Refutation { kind: RefutationKind::Geometric, r: h.scale(&scale) })
}
