use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::Var;

/// A power product. Exponents are kept sorted by variable with no zero
/// entries, so the empty monomial is `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[(Var, u32); 4]>,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial::pow_of(v, 1)
    }

    pub fn pow_of(v: Var, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        let mut exps = SmallVec::new();
        exps.push((v, e));
        Monomial { exps, degree: e }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs; repeated
    /// variables are merged and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut exps: SmallVec<[(Var, u32); 4]> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        exps.sort_by_key(|&(v, _)| v);
        let mut merged: SmallVec<[(Var, u32); 4]> = SmallVec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        let degree = merged.iter().map(|&(_, e)| e).sum();
        Monomial { exps: merged, degree }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.exps.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = SmallVec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.exps, &other.exps);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    exps.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&a[i..]);
        exps.extend_from_slice(&b[j..]);
        Monomial { exps, degree: self.degree + other.degree }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.degree > self.degree {
            return None;
        }
        let mut exps = SmallVec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            if j < other.exps.len() && other.exps[j].0 < v {
                return None;
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                let f = other.exps[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    exps.push((v, e - f));
                }
                j += 1;
            } else {
                exps.push((v, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps, degree: self.degree - other.degree })
    }

    /// Removes `v` from the monomial, returning its former exponent.
    pub fn without(&self, v: Var) -> (Monomial, u32) {
        match self.exps.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => {
                let mut exps = self.exps.clone();
                let (_, e) = exps.remove(i);
                (Monomial { exps, degree: self.degree - e }, e)
            }
            Err(_) => (self.clone(), 0),
        }
    }

    /// Applies an injective variable renaming.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }
}

/// Graded lexicographic order: total degree first, then the exponent of the
/// smallest variable decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.exps.iter().zip(other.exps.iter()) {
                if a.0 != b.0 {
                    // the side holding the smaller variable has the larger exponent there
                    return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.exps.len().cmp(&other.exps.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(Var, u32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn grlex_order() {
        let (x1, x2) = (Var::x(1), Var::x(2));
        // degree dominates
        assert!(m(&[(x2, 2)]) > m(&[(x1, 1)]));
        // x1 > x2 within a degree
        assert!(m(&[(x1, 1)]) > m(&[(x2, 1)]));
        assert!(m(&[(x1, 2)]) > m(&[(x1, 1), (x2, 1)]));
        assert!(m(&[(x1, 1), (x2, 1)]) > m(&[(x2, 2)]));
        assert!(Monomial::one() < m(&[(x2, 1)]));
    }

    #[test]
    fn multiply_and_divide() {
        let (x1, x2, x3) = (Var::x(1), Var::x(2), Var::x(3));
        let a = m(&[(x1, 2), (x3, 1)]);
        let b = m(&[(x2, 1), (x3, 2)]);
        let ab = a.mul(&b);
        assert_eq!(ab, m(&[(x1, 2), (x2, 1), (x3, 3)]));
        assert_eq!(ab.degree(), 6);
        assert_eq!(ab.div(&a), Some(b.clone()));
        assert_eq!(ab.div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(m(&[(x1, 1)]).div(&m(&[(x2, 1)])), None);
    }

    #[test]
    fn from_pairs_merges() {
        let x1 = Var::x(1);
        let a = m(&[(x1, 1), (x1, 2), (Var::x(2), 0)]);
        assert_eq!(a, Monomial::pow_of(x1, 3));
        assert_eq!(a.to_string(), "x1^3");
    }
}
