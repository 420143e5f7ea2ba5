//! End-to-end acceptance checks; prints one line per criterion and exits
//! nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use af_core::algebra_tools::{jacobian, rank_random_eval, resultant, resultant_with_cofactors, DEFAULT_PRIME};
use af_core::annihilator::{
    annihilator_basis_search, decompose, extract_hard_multiple, hard_target, principal_generator, verify_annihilates,
    verify_program, DEFAULT_MONOMIAL_CEILING,
};
use af_core::circuit::{random_circuit, Circuit, CircuitBuilder, Gate, RandomCircuitParams, Wire, DEFAULT_TERM_BUDGET};
use af_core::encoding::{local_encode, output_var, LocalEncoding};
use af_core::field::{Field, FieldElement};
use af_core::instances::{det_circuit, difference_of_squares, encode_3cnf, kayal_map, random_3cnf};
use af_core::ips::{canonical_geometric_refutation, verify_geometric, IpsError, Refutation};
use af_core::pit::{default_grid, sz_pit, Verdict};
use af_core::poly::{Monomial, Polynomial, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rational;

fn q(v: i64) -> FieldElement {
    Q.from_i64(v)
}

fn p(s: &str) -> Polynomial {
    Polynomial::parse(Q, s).unwrap()
}

fn figure(a1: i64, a2: i64, b: i64) -> LocalEncoding {
    local_encode(&difference_of_squares(), &[q(a1), q(a2)], &q(b)).unwrap()
}

/// The mixed random family: n <= 6 inputs, s <= 25 gates.
fn mixed(seed: u64) -> LocalEncoding {
    let n = 1 + (seed % 6) as usize;
    let s = 1 + (seed * 7 % 25) as usize;
    let c = random_circuit(n, s, seed, &[-1, 1, 2]);
    let alpha: Vec<_> = (0..n).map(|i| q((i as i64 + seed as i64) % 5 - 2)).collect();
    local_encode(&c, &alpha, &q(1)).unwrap()
}

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_figure() -> Result<String, String> {
    let e = figure(0, 0, 0);
    let got = e.map().outputs();
    ensure(got.len() == 7, || format!("{} outputs", got.len()))?;
    let want_outputs: Vec<Polynomial> =
        ["x1", "x2", "y1 + x2", "y2 - x1 - x2", "y3 - x1 - y1", "y4 - y2*y3", "y4"].iter().map(|s| p(s)).collect();
    ensure(got == want_outputs.as_slice(), || "outputs differ from the worked listing".into())?;
    let cert = principal_generator(&e).map_err(|e| e.to_string())?;
    let listed = p("z1^2 - z2^2 + z1*z3 + z2*z3 + z1*z4 - z2*z4 + z3*z4 + z1*z5 + z2*z5 + z4*z5 + z6 - z7");
    ensure(cert.h == -listed, || format!("h = {}", cert.h))?;
    ensure(verify_annihilates(&cert.h, e.map()).unwrap(), || "h(G) != 0".into())?;
    Ok("7 outputs match, h = -(listed expansion)".into())
}

fn random_closure() -> Result<String, String> {
    let mut max_terms = 0;
    for seed in 0..200u64 {
        let e = mixed(seed);
        let cert = principal_generator(&e).map_err(|err| format!("seed {seed}: {err}"))?;
        max_terms = max_terms.max(cert.h.num_terms());
        ensure(verify_annihilates(&cert.h, e.map()).unwrap(), || format!("seed {seed}: expanded h(G) != 0"))?;
        ensure(verify_program(&cert.program, &e).unwrap(), || format!("seed {seed}: program check failed"))?;
    }
    Ok(format!("200/200 annihilate (max {max_terms} terms)"))
}

fn decomposition() -> Result<String, String> {
    for seed in 0..100u64 {
        let n = 1 + (seed % 5) as usize;
        let s = 2 + (seed * 3 % 15) as usize;
        let c = RandomCircuitParams::new(n, s, 1000 + seed).max_degree(8).build();
        ensure(c.metrics().degree_bound <= 8, || format!("seed {seed}: degree bound too large"))?;
        let alpha: Vec<_> = (0..n).map(|i| q(i as i64 - 1)).collect();
        let e = local_encode(&c, &alpha, &q(2)).unwrap();
        let cert = principal_generator(&e).map_err(|err| err.to_string())?;
        decompose(&cert, &e, DEFAULT_TERM_BUDGET).map_err(|err| format!("seed {seed}: {err}"))?;
    }
    Ok("100/100 restriction identities hold".into())
}

fn kernel_search() -> Result<String, String> {
    let e = figure(0, 0, 0);
    let d1 = annihilator_basis_search(e.map(), 1, DEFAULT_MONOMIAL_CEILING).map_err(|e| e.to_string())?;
    ensure(d1.is_empty(), || format!("dim {} at D=1", d1.len()))?;
    let d2 = annihilator_basis_search(e.map(), 2, DEFAULT_MONOMIAL_CEILING).map_err(|e| e.to_string())?;
    ensure(d2.len() == 1, || format!("dim {} at D=2", d2.len()))?;
    let h = principal_generator(&e).unwrap().h;
    let (m, c) = h.leading_term().unwrap();
    let b = &d2[0];
    let scale = Q.div(&b.coefficient(m), c).unwrap();
    ensure(!scale.is_zero() && *b == h.scale(&scale), || format!("basis element {b} is not a multiple of h"))?;
    Ok("dim 0 at D=1, dim 1 at D=2, spanned by h".into())
}

fn kayal() -> Result<String, String> {
    let m = kayal_map(2, 2).map_err(|e| e.to_string())?;
    let d3 = annihilator_basis_search(&m, 3, DEFAULT_MONOMIAL_CEILING).map_err(|e| e.to_string())?;
    ensure(d3.is_empty(), || format!("{} annihilators of degree <= 3", d3.len()))?;
    let d4 = annihilator_basis_search(&m, 4, DEFAULT_MONOMIAL_CEILING).map_err(|e| e.to_string())?;
    ensure(!d4.is_empty(), || "no annihilator of degree <= 4".into())?;
    for a in &d4 {
        ensure(verify_annihilates(a, &m).unwrap(), || format!("{a} does not annihilate"))?;
    }
    Ok(format!("none at D=3, {} at D=4", d4.len()))
}

fn jacobian_rank() -> Result<String, String> {
    for seed in 0..50u64 {
        let e = mixed(seed);
        let k = e.n() + e.s();
        let j = jacobian(Q, &e.map().outputs()[..k], e.map().seed_vars());
        let r = rank_random_eval(&j, 2, DEFAULT_PRIME, seed).map_err(|e| e.to_string())?;
        ensure(r.rank == k, || format!("seed {seed}: rank {} < {k}", r.rank))?;
    }
    Ok("50/50 full rank".into())
}

fn roots_poly(roots: &[i64]) -> Polynomial {
    roots.iter().fold(Polynomial::one(Q), |acc, r| acc * (p("x") - Polynomial::from_i64(Q, *r)))
}

fn resultants() -> Result<String, String> {
    let x = Var::plain('x');
    let r = resultant(&p("x - a"), &p("x - b"), x).map_err(|e| e.to_string())?;
    ensure(r == p("a - b"), || format!("res(x-a, x-b) = {r}"))?;

    // prod(a_i - b_j) for monic split polynomials
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..20 {
        let da = rng.gen_range(1..=4);
        let db = rng.gen_range(1..=4);
        let a: Vec<i64> = (0..da).map(|_| rng.gen_range(-6..=6)).collect();
        let mut b: Vec<i64> = (0..db).map(|_| rng.gen_range(-6..=6)).collect();
        let planted = {
            let mut b2 = b.clone();
            b2[0] = a[0];
            b2
        };
        let r = resultant(&roots_poly(&a), &roots_poly(&planted), x).map_err(|e| e.to_string())?;
        ensure(r.is_zero(), || format!("pair {t}: planted factor but res = {r}"))?;
        b.retain(|v| !a.contains(v));
        if b.is_empty() {
            b.push(100);
        }
        let want: i64 = a.iter().flat_map(|ai| b.iter().map(move |bj| ai - bj)).product();
        let r = resultant(&roots_poly(&a), &roots_poly(&b), x).map_err(|e| e.to_string())?;
        ensure(r == Polynomial::from_i64(Q, want), || format!("pair {t}: res {r} != {want}"))?;
    }

    for t in 0..30 {
        let rand_poly = |rng: &mut ChaCha8Rng| {
            let d = rng.gen_range(1..=6u32);
            let mut f = Polynomial::monomial(Q, Monomial::pow_of(x, d), q(rng.gen_range(1..=4)));
            for e in 0..d {
                f = f + Polynomial::monomial(Q, Monomial::pow_of(x, e), q(rng.gen_range(-5..=5)));
            }
            f
        };
        let f = rand_poly(&mut rng);
        let g = rand_poly(&mut rng);
        let (res, u, v) = resultant_with_cofactors(&f, &g, x).map_err(|e| e.to_string())?;
        ensure(&u * &f + &v * &g == res, || format!("pair {t}: u f + v g != res"))?;
        ensure(u.degree_in(x) < g.degree_in(x).max(1), || format!("pair {t}: deg u too large"))?;
        ensure(v.degree_in(x) < f.degree_in(x).max(1), || format!("pair {t}: deg v too large"))?;
    }
    Ok("linear case, 20 planted/unplanted pairs, 30 cofactor identities".into())
}

/// `c + (-1)·c` as one circuit.
fn minus_self(c: &Circuit) -> Circuit {
    let mut b = CircuitBuilder::new("zero", c.field(), c.inputs().to_vec());
    let mut wires: Vec<Wire> = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let w = match g {
            Gate::Input(i) => b.input(*i),
            Gate::Const(v) => Wire::Const(v.clone()),
            Gate::Add(l, r) => b.add(wires[*l].clone(), wires[*r].clone()),
            Gate::Mul(l, r) => b.mul(wires[*l].clone(), wires[*r].clone()),
        };
        wires.push(w);
    }
    let out = wires[c.output()].clone();
    let neg = b.mul(b.constant(-1), out.clone());
    let sum = b.add(out, neg);
    b.finish(sum).unwrap()
}

fn schwartz_zippel() -> Result<String, String> {
    let (mut nonzero, mut detected, mut seed) = (0, 0, 0u64);
    while nonzero < 100 {
        seed += 1;
        let c = RandomCircuitParams::new(3, 8, 5000 + seed).max_degree(6).build();
        if c.expand(DEFAULT_TERM_BUDGET).unwrap().is_zero() {
            continue;
        }
        nonzero += 1;
        let d = c.metrics().degree_bound;
        let v = sz_pit(&c, 1, default_grid(d), Q, seed).map_err(|e| e.to_string())?;
        if v.verdict == Verdict::NonZero {
            detected += 1;
        }
    }
    let rate = detected as f64 / nonzero as f64;
    ensure(rate >= 0.4, || format!("detection rate {rate:.2}"))?;
    for seed in 0..50u64 {
        let z = minus_self(&random_circuit(3, 10, seed, &[-1, 1, 2]));
        let d = z.metrics().degree_bound;
        let v = sz_pit(&z, 3, default_grid(d), Q, seed).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::Zero, || format!("seed {seed}: zero circuit reported nonzero"))?;
    }
    Ok(format!("detection {detected}/{nonzero}, 50/50 zero circuits"))
}

fn det2_refutation() -> Result<String, String> {
    let c = det_circuit(2).unwrap();
    let identity = [1, 0, 0, 1].map(q);
    let e = local_encode(&c, &identity, &q(0)).unwrap();
    let r = canonical_geometric_refutation(&e).map_err(|e| e.to_string())?;
    let sys = af_core::ips::system_of(e.map());
    ensure(verify_geometric(&r, &sys).unwrap().is_accept(), || "canonical refutation rejected".into())?;
    let h = principal_generator(&e).unwrap().h;
    ensure(r.r == -h.clone(), || "r != -h".into())?;

    let singular = local_encode(&c, &[1, 1, 1, 1].map(q), &q(0)).unwrap();
    ensure(matches!(canonical_geometric_refutation(&singular), Err(IpsError::SystemSatisfiable)), || {
        "singular matrix was refuted".into()
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let support: Vec<Monomial> = r.r.terms().iter().map(|(m, _)| m.clone()).collect();
    for t in 0..50 {
        let mono = if rng.gen_bool(0.8) {
            support[rng.gen_range(0..support.len())].clone()
        } else {
            let i = rng.gen_range(0..e.map().out_len());
            let j = rng.gen_range(0..e.map().out_len());
            Monomial::var(output_var(i)).mul(&Monomial::var(output_var(j)))
        };
        let mut delta = rng.gen_range(-3..=3);
        if delta == 0 {
            delta = 4;
        }
        let tampered = &r.r + &Polynomial::monomial(Q, mono, q(delta));
        let bad = Refutation { kind: r.kind, r: tampered };
        ensure(!verify_geometric(&bad, &sys).unwrap().is_accept(), || format!("tampering {t} accepted"))?;
    }
    Ok("accepted, equals -h; singular rejected; 50/50 tamperings rejected".into())
}

fn hard_multiples() -> Result<String, String> {
    let e = figure(3, -2, 1);
    let h = principal_generator(&e).unwrap().h;
    let target = hard_target(&e, DEFAULT_TERM_BUDGET).unwrap();
    let zs: Vec<Var> = (0..e.map().out_len()).map(output_var).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 50 {
        let mut r = Polynomial::from_i64(Q, rng.gen_range(-3..=3));
        for _ in 0..4 {
            let a = zs[rng.gen_range(0..zs.len())];
            let b = zs[rng.gen_range(0..zs.len())];
            let mono = if rng.gen_bool(0.5) { Monomial::var(a) } else { Monomial::var(a).mul(&Monomial::var(b)) };
            r = r + Polynomial::monomial(Q, mono, q(rng.gen_range(-3..=3)));
        }
        if r.is_zero() {
            continue;
        }
        let m = extract_hard_multiple(&(&h * &r), &e).map_err(|e| e.to_string())?;
        ensure(!m.is_zero(), || "zero multiple".into())?;
        ensure(m.exact_divide(&target).unwrap().is_ok(), || format!("{m} is not divisible by f - beta"))?;
        done += 1;
    }
    Ok("50/50 multiples divisible by f - beta".into())
}

fn cnf_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut sat = 0;
    for t in 0..20u64 {
        let n = rng.gen_range(3..=10);
        let m = rng.gen_range(1..=30);
        let cnf = random_3cnf(n, m, t);
        let sys = encode_3cnf(&cnf).map_err(|e| e.to_string())?;
        let vars: Vec<Var> = (1..=n as u32).map(Var::x).collect();
        let mut any = false;
        for mask in 0u32..1 << n {
            let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let point: Vec<FieldElement> = bits.iter().map(|b| q(*b as i64)).collect();
            let roots = sys.equations().iter().all(|g| g.evaluate_at(&vars, &point).unwrap().is_zero());
            ensure(roots == cnf.satisfied_by(&bits), || format!("instance {t}: mismatch at {mask:b}"))?;
            any |= roots;
        }
        // non-boolean points are never common roots
        let half: Vec<FieldElement> = (0..n).map(|_| Q.parse_element("1/2").unwrap()).collect();
        ensure(!sys.equations().iter().all(|g| g.evaluate_at(&vars, &half).unwrap().is_zero()), || {
            format!("instance {t}: 1/2 is a root")
        })?;
        sat += any as usize;
    }
    Ok(format!("20/20 equivalent ({sat} satisfiable)"))
}

fn parallel_composition() -> Result<String, String> {
    let e = figure(0, 0, 0);
    let m3 = e.map().parallel_compose(3).map_err(|e| e.to_string())?;
    ensure(m3.seed_len() == 18 && m3.out_len() == 21, || format!("{} -> {}", m3.seed_len(), m3.out_len()))?;
    ensure(m3.stretch() == 3 && m3.degree() == 2, || format!("stretch {}, degree {}", m3.stretch(), m3.degree()))?;
    let h = principal_generator(&e).unwrap().h;
    for c in 0..3u32 {
        let renamed = h.rename(|v| Var::z(v.index().unwrap() + 7 * c));
        ensure(verify_annihilates(&renamed, &m3).unwrap(), || format!("block {c} not annihilated"))?;
    }
    Ok("seed 18, out 21, stretch 3, degree 2; 3/3 blocks annihilated".into())
}

fn main() -> ExitCode {
    let checks: [(&str, Check, u64); 12] = [
        ("golden figure encoding", golden_figure, 1),
        ("random annihilation", random_closure, 60),
        ("decomposition identity", decomposition, 120),
        ("kernel search on figure", kernel_search, 10),
        ("kayal degree gap", kayal, 30),
        ("jacobian rank", jacobian_rank, 60),
        ("resultant suite", resultants, 60),
        ("schwartz-zippel behaviour", schwartz_zippel, 60),
        ("det2 refutation", det2_refutation, 30),
        ("hard multiples", hard_multiples, 60),
        ("3cnf equivalence", cnf_equivalence, 60),
        ("parallel composition", parallel_composition, 30),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(*limit) => Err(format!("took {took:.2?}")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => {
                failed += 1;
                ("FAIL", d.as_str())
            }
        };
        println!("[{tag}] {:>2} {name} — {detail} ({took:.2?} < {limit}s)", i + 1);
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
