use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{standard_inputs, Circuit, CircuitBuilder, Op, Wire};
use crate::field::Field;

/// Parameters for reproducible pseudorandom circuits.
#[derive(Debug, Clone)]
pub struct RandomCircuitParams {
    pub n_inputs: usize,
    pub size: usize,
    pub seed: u64,
    pub const_pool: Vec<i64>,
    /// When set, a product that would push the degree bound past this value
    /// is emitted as a sum instead.
    pub max_degree: Option<u64>,
    pub field: Field,
}

impl RandomCircuitParams {
    pub fn new(n_inputs: usize, size: usize, seed: u64) -> Self {
        RandomCircuitParams {
            n_inputs,
            size,
            seed,
            const_pool: vec![-1, 1, 2],
            max_degree: None,
            field: Field::Rational,
        }
    }

    pub fn const_pool(mut self, pool: &[i64]) -> Self {
        self.const_pool = pool.to_vec();
        self
    }

    pub fn max_degree(mut self, d: u64) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn field(mut self, f: Field) -> Self {
        self.field = f;
        self
    }

    /// Each gate picks add or mul with equal odds and draws both operands
    /// uniformly from the inputs, the constant pool and all earlier gates.
    pub fn build(&self) -> Circuit {
        assert!(self.size >= 1, "random circuits need at least one gate");
        assert!(self.n_inputs + self.const_pool.len() > 0, "no leaves to draw from");
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut b = CircuitBuilder::new(format!("random_{}", self.seed), self.field, standard_inputs(self.n_inputs));
        // (wire, degree bound)
        let mut internal: Vec<(Wire, u64)> = Vec::with_capacity(self.size);
        let leaves = self.n_inputs + self.const_pool.len();
        let mut last = None;
        for _ in 0..self.size {
            let pick = |rng: &mut ChaCha8Rng| -> (Wire, u64) {
                let k = rng.gen_range(0..leaves + internal.len());
                if k < self.n_inputs {
                    (b.input(k), 1)
                } else if k < leaves {
                    (b.constant(self.const_pool[k - self.n_inputs]), 0)
                } else {
                    internal[k - leaves].clone()
                }
            };
            let mul = rng.gen_bool(0.5);
            let (l, dl) = pick(&mut rng);
            let (r, dr) = pick(&mut rng);
            let prod_deg = dl.saturating_add(dr);
            let op = match (mul, self.max_degree) {
                (true, Some(cap)) if prod_deg > cap => Op::Add,
                (true, _) => Op::Mul,
                (false, _) => Op::Add,
            };
            let deg = if op == Op::Mul { prod_deg } else { dl.max(dr) };
            let w = b.gate(op, l, r);
            internal.push((w.clone(), deg));
            last = Some(w);
        }
        b.finish(last.unwrap()).expect("random circuit is well formed")
    }
}

/// Shorthand for [`RandomCircuitParams`] over the rationals.
pub fn random_circuit(n_inputs: usize, size: usize, seed: u64, const_pool: &[i64]) -> Circuit {
    RandomCircuitParams::new(n_inputs, size, seed).const_pool(const_pool).build()
}
