//! Named instance families: Kayal's maps, the Masser–Philippon system,
//! determinant circuits and 3CNF formulas.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{parse_circuit, Circuit, CircuitBuilder, Wire};
use crate::encoding::PolynomialMap;
use crate::field::Field;
use crate::ips::EquationSystem;
use crate::poly::{Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("parameter {name} = {value} is out of range ({expected})")]
    OutOfRange { name: &'static str, value: usize, expected: &'static str },
    #[error("line {line}: {msg}")]
    MalformedCnf { line: usize, msg: String },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

fn require(name: &'static str, value: usize, ok: bool, expected: &'static str) -> Result<(), InstanceError> {
    if ok {
        Ok(())
    } else {
        Err(InstanceError::OutOfRange { name, value, expected })
    }
}

const DIFFERENCE_OF_SQUARES: &str = "\
circuit difference_of_squares
inputs x1 x2
g1 = mul x2 -1
g2 = add x1 x2
g3 = add x1 g1
g4 = mul g2 g3
output g4
";

/// `(x1 + x2) * (x1 + (-1 * x2))`, four gates computing `x1^2 - x2^2`.
pub fn difference_of_squares() -> Circuit {
    parse_circuit(DIFFERENCE_OF_SQUARES, Field::Rational).expect("built-in circuit parses")
}

/// `(x_1^d - 1, ..., x_n^d - 1, x_1 + ... + x_n - n)`.
pub fn kayal_map(n: usize, d: u32) -> Result<PolynomialMap, InstanceError> {
    require("n", n, n >= 1, "n >= 1")?;
    require("d", d as usize, d >= 1, "d >= 1")?;
    let f = Field::Rational;
    let xs: Vec<Var> = (1..=n as u32).map(Var::x).collect();
    let mut outputs: Vec<Polynomial> = xs.iter().map(|&x| Polynomial::var(f, x).pow(d) - Polynomial::one(f)).collect();
    let sum = xs.iter().fold(Polynomial::zero(f), |acc, &x| acc + Polynomial::var(f, x));
    outputs.push(sum - Polynomial::from_i64(f, n as i64));
    Ok(PolynomialMap::new(f, xs, outputs).expect("outputs use the seed"))
}

/// Kayal's map with the final sum spread over a chain `y_2, ..., y_{n-1}`:
/// `x_1 + x_2 - y_2, y_2 + x_3 - y_3, ..., y_{n-1} + x_n - n`.
pub fn kayal_chain_map(n: usize, d: u32) -> Result<PolynomialMap, InstanceError> {
    require("n", n, n >= 3, "n >= 3")?;
    require("d", d as usize, d >= 1, "d >= 1")?;
    let f = Field::Rational;
    let x = |i: usize| Polynomial::var(f, Var::x(i as u32));
    let y = |i: usize| Polynomial::var(f, Var::y(i as u32));
    let mut outputs: Vec<Polynomial> = (1..=n).map(|i| x(i).pow(d) - Polynomial::one(f)).collect();
    outputs.push(x(1) + x(2) - y(2));
    for i in 3..n {
        outputs.push(y(i - 1) + x(i) - y(i));
    }
    outputs.push(y(n - 1) + x(n) - Polynomial::from_i64(f, n as i64));
    let mut seed: Vec<Var> = (1..=n as u32).map(Var::x).collect();
    seed.extend((2..n as u32).map(Var::y));
    Ok(PolynomialMap::new(f, seed, outputs).expect("outputs use the seed"))
}

/// `x_1^d, x_1 - x_2^d, ..., x_{n-2} - x_{n-1}^d, 1 - x_{n-1} x_n^{d-1}`.
pub fn masser_philippon_system(n: usize, d: u32) -> Result<EquationSystem, InstanceError> {
    require("n", n, n >= 2, "n >= 2")?;
    require("d", d as usize, d >= 2, "d >= 2")?;
    let f = Field::Rational;
    let x = |i: usize| Polynomial::var(f, Var::x(i as u32));
    let mut eqs = vec![x(1).pow(d)];
    for i in 1..n - 1 {
        eqs.push(x(i) - x(i + 1).pow(d));
    }
    eqs.push(Polynomial::one(f) - x(n - 1) * x(n).pow(d - 1));
    Ok(EquationSystem::new(format!("masser_philippon_{n}_{d}"), f, eqs).expect("nonempty"))
}

/// Matrix entry variable `x_{ij}` (1-based), named `x<i><j>`.
pub fn matrix_var(i: usize, j: usize) -> Var {
    Var::x((10 * i + j) as u32)
}

/// `n x n` determinant by first-row cofactor expansion, memoizing minors on
/// the set of remaining columns. Inputs are `x11, x12, ..., xnn` row-major.
pub fn det_circuit(n: usize) -> Result<Circuit, InstanceError> {
    require("n", n, (2..=5).contains(&n), "2 <= n <= 5")?;
    let inputs: Vec<Var> = (1..=n).flat_map(|i| (1..=n).map(move |j| matrix_var(i, j))).collect();
    let mut b = CircuitBuilder::new(format!("det{n}"), Field::Rational, inputs);
    let mut memo: HashMap<u32, Wire> = HashMap::new();
    let out = det_minor(&mut b, n, (1u32 << n) - 1, &mut memo);
    Ok(b.finish(out).expect("determinant circuit is well formed"))
}

fn det_minor(b: &mut CircuitBuilder, n: usize, cols: u32, memo: &mut HashMap<u32, Wire>) -> Wire {
    if let Some(w) = memo.get(&cols) {
        return w.clone();
    }
    let row = n - cols.count_ones() as usize;
    let avail: Vec<usize> = (0..n).filter(|c| cols & (1 << c) != 0).collect();
    let w = if avail.len() == 1 {
        b.input(row * n + avail[0])
    } else {
        let mut acc: Option<Wire> = None;
        for (k, &c) in avail.iter().enumerate() {
            let sub = det_minor(b, n, cols & !(1 << c), memo);
            let term = b.mul(b.input(row * n + c), sub);
            acc = Some(match acc {
                None => term,
                Some(a) if k % 2 == 0 => b.add(a, term),
                Some(a) => b.sub(a, term),
            });
        }
        acc.unwrap()
    };
    memo.insert(cols, w.clone());
    w
}

/// A literal `x_var` or its negation; `var` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf3 {
    pub n_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    /// Whether a 0/1 assignment (index `i` for `x_{i+1}`) satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| assignment[l.var - 1] != l.negated))
    }

    /// DIMACS-like text: optional `c` comment lines, a `p cnf <vars> <clauses>`
    /// header, then whitespace-separated signed literals with each clause
    /// terminated by `0`.
    pub fn parse_dimacs(text: &str) -> Result<Cnf3, InstanceError> {
        let bad = |line: usize, msg: String| InstanceError::MalformedCnf { line, msg };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<i64> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
                continue;
            }
            if t.starts_with('p') {
                let parts: Vec<&str> = t.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(bad(line, "header must be `p cnf <vars> <clauses>`".into()));
                }
                let nv = parts[2].parse().map_err(|_| bad(line, "bad variable count".into()))?;
                let nc = parts[3].parse().map_err(|_| bad(line, "bad clause count".into()))?;
                header = Some((nv, nc));
                continue;
            }
            let (n_vars, _) = header.ok_or_else(|| bad(line, "clause before header".into()))?;
            for tok in t.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| bad(line, format!("bad literal {tok:?}")))?;
                if v == 0 {
                    if current.len() != 3 {
                        return Err(bad(line, format!("clause has {} literals, expected 3", current.len())));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else {
                    if v.unsigned_abs() as usize > n_vars {
                        return Err(bad(line, format!("literal {v} exceeds {n_vars} variables")));
                    }
                    current.push(v);
                }
            }
        }
        let (n_vars, n_clauses) = header.ok_or_else(|| bad(0, "missing header".into()))?;
        if !current.is_empty() {
            return Err(bad(0, "last clause is not terminated by 0".into()));
        }
        if clauses.len() != n_clauses {
            return Err(bad(0, format!("header promises {n_clauses} clauses, found {}", clauses.len())));
        }
        let lit = |v: i64| Literal { var: v.unsigned_abs() as usize, negated: v < 0 };
        Ok(Cnf3 { n_vars, clauses: clauses.iter().map(|c| [lit(c[0]), lit(c[1]), lit(c[2])]).collect() })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64;
                out.push_str(&format!("{} ", if l.negated { -v } else { v }));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Uniformly random 3CNF with distinct variables in each clause.
pub fn random_3cnf(n_vars: usize, n_clauses: usize, seed: u64) -> Cnf3 {
    assert!(n_vars >= 3, "3CNF needs at least three variables");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..n_clauses)
        .map(|_| {
            let mut vars = [0usize; 3];
            let mut k = 0;
            while k < 3 {
                let v = rng.gen_range(1..=n_vars);
                if !vars[..k].contains(&v) {
                    vars[k] = v;
                    k += 1;
                }
            }
            vars.map(|var| Literal { var, negated: rng.gen_bool(0.5) })
        })
        .collect();
    Cnf3 { n_vars, clauses }
}

/// Boolean axioms `x_i^2 - x_i` followed by one cubic per clause,
/// `(x_a - (1 - b_a))(x_b - (1 - b_b))(x_c - (1 - b_c))` with `b = 1` for a
/// negated literal.
pub fn encode_3cnf(cnf: &Cnf3) -> Result<EquationSystem, InstanceError> {
    require("n_vars", cnf.n_vars, cnf.n_vars >= 1, "n_vars >= 1")?;
    let f = Field::Rational;
    let x = |i: usize| Polynomial::var(f, Var::x(i as u32));
    let mut eqs: Vec<Polynomial> = (1..=cnf.n_vars).map(|i| x(i).pow(2) - x(i)).collect();
    for (k, clause) in cnf.clauses.iter().enumerate() {
        let mut prod = Polynomial::one(f);
        for l in clause {
            if l.var == 0 || l.var > cnf.n_vars {
                return Err(InstanceError::MalformedCnf {
                    line: k + 1,
                    msg: format!("variable {} out of range", l.var),
                });
            }
            let b = if l.negated { 1 } else { 0 };
            prod = prod * (x(l.var) - Polynomial::from_i64(f, 1 - b));
        }
        eqs.push(prod);
    }
    Ok(EquationSystem::new("3cnf", f, eqs).expect("nonempty"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Kayal,
    KayalChain,
    MasserPhilippon,
    Det,
    Cnf3,
}

impl FromStr for Family {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "kayal" => Family::Kayal,
            "kayal-chain" | "kayal_chain" => Family::KayalChain,
            "masser-philippon" | "masser_philippon" => Family::MasserPhilippon,
            "det" => Family::Det,
            "cnf3" | "3cnf" => Family::Cnf3,
            other => return Err(InstanceError::UnknownFamily(other.into())),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Kayal => "kayal",
            Family::KayalChain => "kayal-chain",
            Family::MasserPhilippon => "masser-philippon",
            Family::Det => "det",
            Family::Cnf3 => "cnf3",
        })
    }
}

/// Family plus size parameters. `d` is ignored by `det`; for `cnf3`, `n` is
/// the variable count, `d` the clause count and `seed` picks the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    pub d: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Map(PolynomialMap),
    System(EquationSystem),
    Circuit(Circuit),
    Cnf(Cnf3, EquationSystem),
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Instance, InstanceError> {
        Ok(match self.family {
            Family::Kayal => Instance::Map(kayal_map(self.n, self.d)?),
            Family::KayalChain => Instance::Map(kayal_chain_map(self.n, self.d)?),
            Family::MasserPhilippon => Instance::System(masser_philippon_system(self.n, self.d)?),
            Family::Det => Instance::Circuit(det_circuit(self.n)?),
            Family::Cnf3 => {
                require("n", self.n, self.n >= 3, "n >= 3")?;
                let cnf = random_3cnf(self.n, self.d as usize, self.seed);
                let sys = encode_3cnf(&cnf)?;
                Instance::Cnf(cnf, sys)
            }
        })
    }
}
