//! Fan-in-two arithmetic circuits.
//!
//! Gates are stored in a single array indexed by [`GateId`]. The first
//! `n_inputs` gates are the variable inputs; constants are gates too. Every
//! internal gate refers only to gates with smaller ids, and the internal gates
//! in id order form the topological ordering `v1, ..., vs` used by the local
//! encoding, with the output last.

mod dsl;
mod random;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::poly::{PolyError, Polynomial, Var};

pub use dsl::{parse_circuit, CircuitJson, GateJson};
pub use random::{random_circuit, RandomCircuitParams};

/// Default cap on intermediate term counts during symbolic expansion.
pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

pub type GateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    /// The `i`-th circuit input.
    Input(usize),
    Const(FieldElement),
    Add(GateId, GateId),
    Mul(GateId, GateId),
}

impl Gate {
    pub fn is_internal(&self) -> bool {
        matches!(self, Gate::Add(..) | Gate::Mul(..))
    }

    pub fn children(&self) -> Option<(GateId, GateId)> {
        match *self {
            Gate::Add(a, b) | Gate::Mul(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Add,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: undefined reference {name:?}")]
    UndefinedReference { line: usize, name: String },
    #[error("line {line}: forward reference to {name:?}")]
    ForwardReference { line: usize, name: String },
    #[error("cycle through gate {0:?}")]
    Cycle(String),
    #[error("line {line}: {name:?} is defined twice")]
    DuplicateDefinition { line: usize, name: String },
    #[error("missing output line")]
    MissingOutput,
    #[error("output must be the last internal gate, got {0:?}")]
    OutputNotLast(String),
    #[error("line {line}: gates take exactly two operands, got {got}")]
    FanIn { line: usize, got: usize },
    #[error("expected {expected} input values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("expansion exceeded the term budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("gate reduction needs at least one operand")]
    EmptyOperands,
    #[error("invalid gate reference {0}")]
    BadGate(GateId),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub size: usize,
    pub depth: usize,
    pub degree_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    name: String,
    field: Field,
    inputs: Vec<Var>,
    gates: Vec<Gate>,
    output: GateId,
}

impl Circuit {
    /// Validates raw parts. Internal gates must reference strictly smaller
    /// ids, and a non-trivial output must be the last internal gate.
    pub fn from_parts(
        name: impl Into<String>,
        field: Field,
        inputs: Vec<Var>,
        gates: Vec<Gate>,
        output: GateId,
    ) -> Result<Self, CircuitError> {
        let n = inputs.len();
        for (id, g) in gates.iter().enumerate() {
            match g {
                Gate::Input(i) => {
                    if *i != id || id >= n {
                        return Err(CircuitError::BadGate(id));
                    }
                }
                _ if id < n => return Err(CircuitError::BadGate(id)),
                Gate::Const(_) => {}
                Gate::Add(a, b) | Gate::Mul(a, b) => {
                    if *a >= id || *b >= id {
                        return Err(CircuitError::BadGate(id));
                    }
                }
            }
        }
        if gates.len() < n || output >= gates.len() {
            return Err(CircuitError::BadGate(output));
        }
        if let Some(last) = gates.iter().rposition(Gate::is_internal) {
            if last != output {
                return Err(CircuitError::OutputNotLast(format!("gate {output}")));
            }
        }
        Ok(Circuit { name: name.into(), field, inputs, gates, output })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    /// Internal gates in topological (definition) order; the output is last.
    pub fn internal_order(&self) -> Vec<GateId> {
        (0..self.gates.len()).filter(|&i| self.gates[i].is_internal()).collect()
    }

    /// Number of internal gates.
    pub fn size(&self) -> usize {
        self.gates.iter().filter(|g| g.is_internal()).count()
    }

    /// Evaluates every gate over an arbitrary value type.
    pub fn eval_gates<T: Clone>(
        &self,
        inputs: &[T],
        constant: impl Fn(&FieldElement) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> Result<Vec<T>, CircuitError> {
        if inputs.len() != self.n_inputs() {
            return Err(CircuitError::ArityMismatch { expected: self.n_inputs(), got: inputs.len() });
        }
        Ok(eval_straight_line(&self.gates, inputs, constant, add, mul))
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, CircuitError> {
        let f = self.field;
        let vals = self.eval_gates(point, |c| c.clone(), |a, b| f.add(a, b), |a, b| f.mul(a, b))?;
        Ok(vals[self.output].clone())
    }

    /// Value of every gate at a point (inputs and constants included).
    pub fn gate_values(&self, point: &[FieldElement]) -> Result<Vec<FieldElement>, CircuitError> {
        let f = self.field;
        self.eval_gates(point, |c| c.clone(), |a, b| f.add(a, b), |a, b| f.mul(a, b))
    }

    /// Evaluation over `F_p` with residues as inputs.
    pub fn evaluate_mod_p(&self, point: &[u64], p: u64) -> Result<u64, CircuitError> {
        use crate::field::{add_mod, mul_mod};
        let f = self.field;
        for g in &self.gates {
            if let Gate::Const(c) = g {
                f.residue_mod(c, p).map_err(PolyError::from)?;
            }
        }
        let vals = self.eval_gates(
            point,
            |c| f.residue_mod(c, p).unwrap(),
            |a, b| add_mod(*a, *b, p),
            |a, b| mul_mod(*a, *b, p),
        )?;
        Ok(vals[self.output])
    }

    /// The polynomial computed by the circuit over its input variables.
    pub fn expand(&self, term_budget: usize) -> Result<Polynomial, CircuitError> {
        let f = self.field;
        let mut vals: Vec<Polynomial> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let p = match g {
                Gate::Input(i) => Polynomial::var(f, self.inputs[*i]),
                Gate::Const(c) => Polynomial::constant(f, c.clone()),
                Gate::Add(a, b) => &vals[*a] + &vals[*b],
                Gate::Mul(a, b) => &vals[*a] * &vals[*b],
            };
            if p.num_terms() > term_budget {
                return Err(CircuitError::BudgetExceeded { budget: term_budget });
            }
            vals.push(p);
        }
        Ok(vals.swap_remove(self.output))
    }

    pub fn metrics(&self) -> Metrics {
        let mut depth = vec![0usize; self.gates.len()];
        let mut degree = vec![0u64; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            match *g {
                Gate::Input(_) => degree[id] = 1,
                Gate::Const(_) => degree[id] = 0,
                Gate::Add(a, b) => {
                    depth[id] = 1 + depth[a].max(depth[b]);
                    degree[id] = degree[a].max(degree[b]);
                }
                Gate::Mul(a, b) => {
                    depth[id] = 1 + depth[a].max(depth[b]);
                    degree[id] = degree[a].saturating_add(degree[b]);
                }
            }
        }
        Metrics { size: self.size(), depth: depth[self.output], degree_bound: degree[self.output] }
    }

    /// Maps constants into another field.
    pub fn to_field(&self, target: Field) -> Result<Circuit, CircuitError> {
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Const(c) => Ok(Gate::Const(target.from_rational(c.as_rational()).map_err(PolyError::from)?)),
                other => Ok(other.clone()),
            })
            .collect::<Result<Vec<_>, CircuitError>>()?;
        Ok(Circuit { gates, field: target, ..self.clone() })
    }

    pub fn to_dsl(&self) -> String {
        dsl::write_dsl(self)
    }

    pub fn to_json(&self) -> CircuitJson {
        dsl::to_json(self)
    }

    pub fn from_json(json: &CircuitJson, field: Field) -> Result<Circuit, CircuitError> {
        dsl::from_json(json, field)
    }
}

/// Gate-by-gate evaluation of a straight-line program whose `Input(i)` gates
/// read `inputs[i]`.
pub fn eval_straight_line<T: Clone>(
    gates: &[Gate],
    inputs: &[T],
    constant: impl Fn(&FieldElement) -> T,
    add: impl Fn(&T, &T) -> T,
    mul: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let mut vals: Vec<T> = Vec::with_capacity(gates.len());
    for g in gates {
        let v = match g {
            Gate::Input(i) => inputs[*i].clone(),
            Gate::Const(c) => constant(c),
            Gate::Add(a, b) => add(&vals[*a], &vals[*b]),
            Gate::Mul(a, b) => mul(&vals[*a], &vals[*b]),
        };
        vals.push(v);
    }
    vals
}

/// A gate operand while building: an existing gate or a constant that is
/// materialized as a fresh `Const` gate right before its consumer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Wire {
    Gate(GateId),
    Const(FieldElement),
}

#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    name: String,
    field: Field,
    inputs: Vec<Var>,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>, field: Field, inputs: Vec<Var>) -> Self {
        let gates = (0..inputs.len()).map(Gate::Input).collect();
        CircuitBuilder { name: name.into(), field, inputs, gates }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn input(&self, i: usize) -> Wire {
        assert!(i < self.inputs.len(), "input index out of range");
        Wire::Gate(i)
    }

    pub fn constant(&self, c: i64) -> Wire {
        Wire::Const(self.field.from_i64(c))
    }

    fn place(&mut self, w: Wire) -> GateId {
        match w {
            Wire::Gate(id) => id,
            Wire::Const(c) => {
                self.gates.push(Gate::Const(c));
                self.gates.len() - 1
            }
        }
    }

    pub fn gate(&mut self, op: Op, a: Wire, b: Wire) -> Wire {
        let a = self.place(a);
        let b = self.place(b);
        self.gates.push(match op {
            Op::Add => Gate::Add(a, b),
            Op::Mul => Gate::Mul(a, b),
        });
        Wire::Gate(self.gates.len() - 1)
    }

    pub fn add(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(Op::Add, a, b)
    }

    pub fn mul(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(Op::Mul, a, b)
    }

    /// `a - b` as `a + (-1 * b)`.
    pub fn sub(&mut self, a: Wire, b: Wire) -> Wire {
        let m = self.constant(-1);
        let nb = self.mul(m, b);
        self.add(a, nb)
    }

    /// Left-deep fan-in-two tree for an n-ary sum or product.
    pub fn tree_reduce(&mut self, op: Op, operands: &[Wire]) -> Result<Wire, CircuitError> {
        let (first, rest) = operands.split_first().ok_or(CircuitError::EmptyOperands)?;
        let mut acc = first.clone();
        for w in rest {
            acc = self.gate(op, acc, w.clone());
        }
        Ok(acc)
    }

    pub fn finish(mut self, output: Wire) -> Result<Circuit, CircuitError> {
        let out = self.place(output);
        Circuit::from_parts(self.name, self.field, self.inputs, self.gates, out)
    }
}

/// Input variables `x1..xn`.
pub fn standard_inputs(n: usize) -> Vec<Var> {
    (1..=n as u32).map(Var::x).collect()
}
