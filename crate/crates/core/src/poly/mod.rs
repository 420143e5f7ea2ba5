//! Canonical sparse multivariate polynomials over an exact [`Field`].
//!
//! Terms are stored in strictly decreasing graded-lexicographic order with
//! nonzero coefficients, so structural equality is polynomial equality.

mod monomial;
mod parse;
mod var;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};

pub use monomial::Monomial;
pub use var::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("no value assigned to variable {0}")]
    MissingAssignment(Var),
    #[error("substitution does not cover variable {0}")]
    UncoveredVariable(Var),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Result of [`Polynomial::exact_divide`] when the divisor does not divide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("not divisible")]
pub struct NotDivisible;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    terms: Vec<(Monomial, FieldElement)>,
}

impl Polynomial {
    pub fn zero(field: Field) -> Self {
        Polynomial { field, terms: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Polynomial::constant(field, field.one())
    }

    pub fn constant(field: Field, c: FieldElement) -> Self {
        Polynomial::monomial(field, Monomial::one(), c)
    }

    pub fn from_i64(field: Field, c: i64) -> Self {
        Polynomial::constant(field, field.from_i64(c))
    }

    pub fn var(field: Field, v: Var) -> Self {
        Polynomial::monomial(field, Monomial::var(v), field.one())
    }

    pub fn monomial(field: Field, m: Monomial, c: FieldElement) -> Self {
        if c.is_zero() {
            return Polynomial::zero(field);
        }
        Polynomial { field, terms: vec![(m, c)] }
    }

    /// Collects arbitrary terms, combining like monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, FieldElement)>>(field: Field, terms: I) -> Self {
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = field.add(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Polynomial::from_map(field, acc)
    }

    fn from_map(field: Field, acc: HashMap<Monomial, FieldElement>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { field, terms }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Total degree with `deg 0 = 0`.
    pub fn total_degree(&self) -> u32 {
        self.degree().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one())
    }

    pub fn support(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    fn check_field(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_field(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_field(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_field(other)?;
        Ok(self.product(other))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let f = self.field;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &FieldElement| if negate { f.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    terms.push((b[j].0.clone(), rhs(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { f.sub(&a[i].1, &b[j].1) } else { f.add(&a[i].1, &b[j].1) };
                    if !c.is_zero() {
                        terms.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(a[i..].iter().cloned());
        terms.extend(b[j..].iter().map(|(m, c)| (m.clone(), rhs(c))));
        Polynomial { field: f, terms }
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(f);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 {
            let (m, c) = &small.terms[0];
            // multiplying by a single term preserves the order
            let terms =
                large.terms.iter().map(|(n, d)| (n.mul(m), f.mul(c, d))).filter(|(_, c)| !c.is_zero()).collect();
            return Polynomial { field: f, terms };
        }
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::with_capacity(small.terms.len() * large.terms.len());
        for (m, c) in &small.terms {
            for (n, d) in &large.terms {
                let prod = f.mul(c, d);
                let key = m.mul(n);
                match acc.get_mut(&key) {
                    Some(e) => *e = f.add(e, &prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        Polynomial::from_map(f, acc)
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field);
        }
        let f = self.field;
        Polynomial { field: f, terms: self.terms.iter().map(|(m, d)| (m.clone(), f.mul(c, d))).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        acc
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    /// Exact value at a point given as a lookup function.
    pub fn evaluate_with(&self, mut value: impl FnMut(Var) -> Option<FieldElement>) -> Result<FieldElement, PolyError> {
        let f = self.field;
        let mut cache: HashMap<Var, FieldElement> = HashMap::new();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(v).ok_or(PolyError::MissingAssignment(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                t = f.mul(&t, &f.pow(&x, e));
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn evaluate(&self, point: &HashMap<Var, FieldElement>) -> Result<FieldElement, PolyError> {
        self.evaluate_with(|v| point.get(&v).cloned())
    }

    /// Evaluates with variables bound positionally to `vars`.
    pub fn evaluate_at(&self, vars: &[Var], point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        let map: HashMap<Var, FieldElement> = vars.iter().copied().zip(point.iter().cloned()).collect();
        self.evaluate(&map)
    }

    /// Residue of the value at a point over `F_p`, with point coordinates
    /// already given as residues. Rational coefficients are mapped into `F_p`.
    pub fn evaluate_mod_p(&self, p: u64, value: impl Fn(Var) -> Option<u64>) -> Result<u64, PolyError> {
        use crate::field::{add_mod, mul_mod, pow_mod};
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = self.field.residue_mod(c, p)?;
            for (v, e) in m.iter() {
                let x = value(v).ok_or(PolyError::MissingAssignment(v))?;
                t = mul_mod(t, pow_mod(x, e as u64, p), p);
            }
            acc = add_mod(acc, t, p);
        }
        Ok(acc)
    }

    /// Simultaneous substitution. Every variable in the support must be covered.
    pub fn compose(&self, subst: &HashMap<Var, Polynomial>) -> Result<Polynomial, PolyError> {
        for v in self.support() {
            match subst.get(&v) {
                None => return Err(PolyError::UncoveredVariable(v)),
                Some(q) => self.check_field(q)?,
            }
        }
        Ok(self.substitute_unchecked(subst))
    }

    /// Like [`compose`](Self::compose) but variables without an entry are left in place.
    pub fn substitute(&self, subst: &HashMap<Var, Polynomial>) -> Result<Polynomial, PolyError> {
        for q in subst.values() {
            self.check_field(q)?;
        }
        Ok(self.substitute_unchecked(subst))
    }

    fn substitute_unchecked(&self, subst: &HashMap<Var, Polynomial>) -> Polynomial {
        let f = self.field;
        // powers[v][e-1] = subst(v)^e, grown on demand
        let mut powers: HashMap<Var, Vec<Polynomial>> = HashMap::new();
        let mut image = |v: Var, e: u32| -> Polynomial {
            let base = subst.get(&v).cloned().unwrap_or_else(|| Polynomial::var(f, v));
            let list = powers.entry(v).or_insert_with(|| vec![base.clone()]);
            while list.len() < e as usize {
                let next = list.last().unwrap().product(&base);
                list.push(next);
            }
            list[e as usize - 1].clone()
        };
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(f, c.clone());
            for (v, e) in m.iter() {
                t = t.product(&image(v, e));
                if t.is_zero() {
                    break;
                }
            }
            for (n, d) in t.terms {
                match acc.get_mut(&n) {
                    Some(x) => *x = f.add(x, &d),
                    None => {
                        acc.insert(n, d);
                    }
                }
            }
        }
        Polynomial::from_map(f, acc)
    }

    /// Substitutes field values for some variables, leaving the rest.
    pub fn restrict(&self, values: &HashMap<Var, FieldElement>) -> Polynomial {
        let f = self.field;
        Polynomial::from_terms(
            f,
            self.terms.iter().map(|(m, c)| {
                let mut coeff = c.clone();
                let mut rest = Vec::new();
                for (v, e) in m.iter() {
                    match values.get(&v) {
                        Some(x) => coeff = f.mul(&coeff, &f.pow(x, e)),
                        None => rest.push((v, e)),
                    }
                }
                (Monomial::from_pairs(rest), coeff)
            }),
        )
    }

    /// Injective variable renaming.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(self.field, self.terms.iter().map(|(m, c)| (m.rename(&f), c.clone())))
    }

    pub fn partial_derivative(&self, v: Var) -> Polynomial {
        let f = self.field;
        Polynomial::from_terms(
            f,
            self.terms.iter().filter_map(|(m, c)| {
                let (rest, e) = m.without(v);
                if e == 0 {
                    return None;
                }
                let lowered = rest.mul(&Monomial::pow_of(v, e - 1));
                Some((lowered, f.mul(c, &f.from_u64(e as u64))))
            }),
        )
    }

    /// The coefficient `q_k` in `self = sum_k q_k * v^k`.
    pub fn coefficient_in(&self, v: Var, k: u32) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            self.terms.iter().filter_map(|(m, c)| {
                let (rest, e) = m.without(v);
                (e == k).then(|| (rest, c.clone()))
            }),
        )
    }

    /// All coefficients in `v`, indexed by power.
    pub fn coefficients_in(&self, v: Var) -> Vec<Polynomial> {
        let deg = self.degree_in(v);
        let mut buckets: Vec<Vec<(Monomial, FieldElement)>> = vec![Vec::new(); deg as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets.into_iter().map(|t| Polynomial::from_terms(self.field, t)).collect()
    }

    /// Exact quotient `self / divisor`, by single-divisor division under grlex.
    /// Succeeds iff `self` lies in the ideal generated by `divisor`.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Result<Polynomial, NotDivisible>, PolyError> {
        self.check_field(divisor)?;
        let f = self.field;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let lc_inv = f.inv(lc)?;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            let Some(qm) = m.div(lm) else {
                return Ok(Err(NotDivisible));
            };
            let qc = f.mul(c, &lc_inv);
            let step = Polynomial::monomial(f, qm.clone(), qc.clone()).product(divisor);
            rem = rem.merge(&step, true);
            quotient.push((qm, qc));
        }
        // quotient terms were produced in decreasing order
        Ok(Ok(Polynomial { field: f, terms: quotient }))
    }

    /// Maps every coefficient into another field.
    pub fn to_field(&self, target: Field) -> Result<Polynomial, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), target.from_rational(c.as_rational())?)))
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(Polynomial::from_terms(target, terms))
    }

    pub fn parse(field: Field, text: &str) -> Result<Polynomial, PolyError> {
        parse::parse_polynomial(field, text)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs_display();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.field, self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;

            /// Panics if the operands live in different fields.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial field mismatch")
            }
        }

        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let f = self.field;
        Polynomial { field: f, terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Polynomial {
        Polynomial::parse(Field::Rational, s).unwrap()
    }

    fn r(s: &str) -> FieldElement {
        Field::Rational.parse_element(s).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(q("x1 + 1") + q("-x1"), q("1"));
        assert_eq!(q("0") + q("x1*x2 - 3"), q("x1*x2 - 3"));
        assert_eq!(q("x1^2") + q("x2^2"), q("x1^2 + x2^2"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(q("x1 - x2") * q("x1 + x2"), q("x1^2 - x2^2"));
        assert!((q("x1 + 7") * q("0")).is_zero());
        assert_eq!(q("x1 + 1").pow(2), q("x1^2 + 2*x1 + 1"));
        let p = q("x1 + x2");
        assert_eq!((p.clone() * q("x3^2 - 1")).degree(), Some(3));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = q("x1");
        let b = Polynomial::parse(Field::prime(5).unwrap(), "x1").unwrap();
        assert!(matches!(a.checked_add(&b), Err(PolyError::FieldMismatch(..))));
        assert!(matches!(a.checked_mul(&b), Err(PolyError::FieldMismatch(..))));
    }

    #[test]
    fn evaluate_examples() {
        let (x1, x2) = (Var::x(1), Var::x(2));
        let p = q("x1^2 - x2^2");
        assert_eq!(p.evaluate_at(&[x1, x2], &[r("3"), r("2")]).unwrap(), r("5"));
        let c = q("x1*x2 + 4/3*x2 - 7");
        assert_eq!(c.evaluate_at(&[x1, x2], &[r("0"), r("0")]).unwrap(), c.constant_term());
        let det = q("x11*x22 - x12*x21");
        let vars: Vec<Var> = ["x11", "x12", "x21", "x22"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(det.evaluate_at(&vars, &[r("1"), r("0"), r("0"), r("1")]).unwrap(), r("1"));
        assert_eq!(p.evaluate_at(&[x1], &[r("1")]), Err(PolyError::MissingAssignment(x2)));
    }

    #[test]
    fn compose_examples() {
        let f = Field::Rational;
        let p = q("x1^2 - x2^2");
        let subst: HashMap<Var, Polynomial> = [(Var::x(1), q("z1 + 1")), (Var::x(2), q("z2"))].into_iter().collect();
        assert_eq!(p.compose(&subst).unwrap(), q("z1^2 + 2*z1 + 1 - z2^2"));
        let id: HashMap<Var, Polynomial> =
            [Var::x(1), Var::x(2)].into_iter().map(|v| (v, Polynomial::var(f, v))).collect();
        assert_eq!(p.compose(&id).unwrap(), p);
        let partial: HashMap<Var, Polynomial> = [(Var::x(1), q("z1"))].into_iter().collect();
        assert_eq!(p.compose(&partial), Err(PolyError::UncoveredVariable(Var::x(2))));
        assert_eq!(p.substitute(&partial).unwrap(), q("z1^2 - x2^2"));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(q("x1^2 - x2^2").partial_derivative(Var::x(1)), q("2*x1"));
        assert!(q("17/3").partial_derivative(Var::x(1)).is_zero());
        assert_eq!(q("x1^3*x2 + x2").partial_derivative(Var::x(2)), q("x1^3 + 1"));
    }

    #[test]
    fn coefficient_in_examples() {
        let w = Var::plain('w');
        let p = q("w^2*x1 + x1");
        assert_eq!(p.coefficient_in(w, 2), q("x1"));
        assert_eq!(p.coefficient_in(w, 0), q("x1"));
        assert!(p.coefficient_in(w, 1).is_zero());
        assert!(p.coefficient_in(w, 5).is_zero());
    }

    #[test]
    fn exact_divide_examples() {
        assert_eq!(q("x1^2 - x2^2").exact_divide(&q("x1 - x2")).unwrap(), Ok(q("x1 + x2")));
        assert_eq!(q("x1").exact_divide(&q("x2")).unwrap(), Err(NotDivisible));
        assert_eq!(q("x1 + 1").exact_divide(&q("0")), Err(PolyError::DivisionByZero));
        assert_eq!(q("3*x1 + 3").exact_divide(&q("1/2")).unwrap(), Ok(q("6*x1 + 6")));
        assert!(q("0").exact_divide(&q("x1")).unwrap().unwrap().is_zero());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(q("x1^2 - x2^2 + 1/2*x3").to_string(), "x1^2 - x2^2 + 1/2*x3");
        assert_eq!(q("1 + x2 + x1").to_string(), "x1 + x2 + 1");
        assert_eq!(q("-x1 - 1").to_string(), "-x1 - 1");
        assert_eq!(q("x1 - x1").to_string(), "0");
        assert_eq!(q("-3/4").to_string(), "-3/4");
    }

    #[test]
    fn prime_field_arithmetic_reduces() {
        let f = Field::prime(5).unwrap();
        let p = Polynomial::parse(f, "3*x1 + 4").unwrap();
        let sq = &p * &p;
        // 9x^2 + 24x + 16 = 4x^2 + 4x + 1 mod 5
        assert_eq!(sq, Polynomial::parse(f, "4*x1^2 + 4*x1 + 1").unwrap());
        assert_eq!(sq.to_string(), "4*x1^2 + 4*x1 + 1");
        assert_eq!(Polynomial::parse(f, "-x1").unwrap().to_string(), "4*x1");
    }
}
