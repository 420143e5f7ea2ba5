use std::collections::HashMap;

use af_core::circuit::{parse_circuit, RandomCircuitParams, DEFAULT_TERM_BUDGET};
use af_core::field::{Field, FieldElement};
use af_core::poly::{Monomial, Polynomial, Var};
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn vars() -> Vec<Var> {
    vec![Var::x(1), Var::x(2), Var::x(3)]
}

prop_compose! {
    fn term()(e in prop::collection::vec(0u32..3, 3), c in -4i64..=4) -> (Monomial, FieldElement) {
        (Monomial::from_pairs(vars().into_iter().zip(e)), Q.from_i64(c))
    }
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(term(), 0..5).prop_map(|ts| Polynomial::from_terms(Q, ts))
}

fn point() -> impl Strategy<Value = Vec<FieldElement>> {
    prop::collection::vec((-5i64..=5).prop_map(|v| Q.from_i64(v)), 3)
}

fn eval(p: &Polynomial, pt: &[FieldElement]) -> FieldElement {
    p.evaluate_at(&vars(), pt).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(Q), a.clone());
    }

    #[test]
    fn compose_is_a_homomorphism(a in poly(), b in poly(), s in prop::collection::vec(poly(), 3)) {
        let subst: HashMap<Var, Polynomial> = vars().into_iter().zip(s).collect();
        let ca = a.compose(&subst).unwrap();
        let cb = b.compose(&subst).unwrap();
        prop_assert_eq!((&a + &b).compose(&subst).unwrap(), &ca + &cb);
        prop_assert_eq!((&a * &b).compose(&subst).unwrap(), &ca * &cb);
    }

    #[test]
    fn evaluate_after_compose(a in poly(), s in prop::collection::vec(poly(), 3), pt in point()) {
        let subst: HashMap<Var, Polynomial> = vars().into_iter().zip(s.iter().cloned()).collect();
        let inner: Vec<FieldElement> = s.iter().map(|g| eval(g, &pt)).collect();
        prop_assert_eq!(eval(&a.compose(&subst).unwrap(), &pt), eval(&a, &inner));
    }

    #[test]
    fn divide_round_trip(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_divide(&b).unwrap().unwrap(), a);
    }

    #[test]
    fn product_rule(a in poly(), b in poly(), i in 0usize..3) {
        let v = vars()[i];
        let lhs = (&a * &b).partial_derivative(v);
        let rhs = &a.partial_derivative(v) * &b + &a * &b.partial_derivative(v);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coefficients_reconstruct(a in poly(), i in 0usize..3) {
        let v = vars()[i];
        let xv = Polynomial::var(Q, v);
        let rebuilt = a
            .coefficients_in(v)
            .into_iter()
            .enumerate()
            .fold(Polynomial::zero(Q), |acc, (k, c)| acc + c * xv.pow(k as u32));
        prop_assert_eq!(rebuilt, a.clone());
        for (k, c) in a.coefficients_in(v).iter().enumerate() {
            prop_assert_eq!(c, &a.coefficient_in(v, k as u32));
        }
    }

    #[test]
    fn print_parse_fixed_point(a in poly()) {
        let text = a.to_string();
        let back = Polynomial::parse(Q, &text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn circuit_eval_matches_expansion(n in 1usize..4, s in 1usize..12, seed in any::<u64>(), pt in point()) {
        let c = RandomCircuitParams::new(n, s, seed).build();
        let f = c.expand(DEFAULT_TERM_BUDGET).unwrap();
        prop_assert_eq!(c.evaluate(&pt[..n]).unwrap(), f.evaluate_at(c.inputs(), &pt[..n]).unwrap());
        prop_assert!(c.metrics().degree_bound >= f.total_degree() as u64);
    }

    #[test]
    fn dsl_round_trip(n in 1usize..4, s in 1usize..12, seed in any::<u64>()) {
        let c = RandomCircuitParams::new(n, s, seed).build();
        let back = parse_circuit(&c.to_dsl(), Q).unwrap();
        prop_assert_eq!(back.to_dsl(), c.to_dsl());
        prop_assert_eq!(
            back.expand(DEFAULT_TERM_BUDGET).unwrap(),
            c.expand(DEFAULT_TERM_BUDGET).unwrap()
        );
    }
}
