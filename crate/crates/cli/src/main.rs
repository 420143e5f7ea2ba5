//! `af`: command-line front end for the af-core library.
//!
//! Exit codes: 0 success, 1 rejected / fooled / unexpected verdict, 2 usage or
//! input error, 3 budget exceeded.

mod report;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use af_core::algebra_tools::{
    jacobian, rank_random_eval, resultant, resultant_with_cofactors, DEFAULT_PRIME, DEFAULT_TRIALS,
};
use af_core::annihilator::{
    annihilator_basis_search, principal_generator_with_budget, verify_annihilates, verify_program,
    AnnihilatorCertificate, CertificateJson, DEFAULT_MONOMIAL_CEILING,
};
use af_core::circuit::{parse_circuit, Circuit, DEFAULT_TERM_BUDGET};
use af_core::encoding::{encoding_metrics, formula_size, local_encode, LocalEncoding, MapJson, PolynomialMap};
use af_core::field::{Field, FieldElement};
use af_core::instances::{encode_3cnf, Cnf3, Family, Instance, InstanceSpec};
use af_core::ips::{
    canonical_geometric_refutation_with_budget, system_of, verify_full_ips, verify_geometric, EquationSystem, IpsError,
    IpsVerdict, Refutation, RefutationJson, RefutationKind, SystemJson,
};
use af_core::pit::{
    default_grid, generator_pit, hit_test, sz_pit, GeneratorMode, HitResult, PitVerdict, Verdict, DEFAULT_POINT_BUDGET,
};
use af_core::poly::{Polynomial, Var};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{Failure, Outcome};

#[derive(Parser)]
#[command(name = "af", version, about = "Local encodings, annihilators, PIT and IPS refutations")]
struct Cli {
    /// Print a machine-readable report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Coefficient field: rational, prime (2^61 - 1) or prime:<p>.
    #[arg(long, global = true, default_value = "rational")]
    field: String,
    /// Term budget for symbolic expansion.
    #[arg(long, global = true, env = "AF_TERM_BUDGET", default_value_t = DEFAULT_TERM_BUDGET)]
    term_budget: usize,
    /// Ceiling on the number of monomials in an annihilator search.
    #[arg(long, global = true, env = "AF_MONOMIAL_CEILING", default_value_t = DEFAULT_MONOMIAL_CEILING)]
    monomial_ceiling: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PitMode {
    Symbolic,
    Randomized,
    Grid,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Zero,
    Nonzero,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Geometric,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit and a claimed evaluation into a local encoding.
    Encode {
        #[arg(long)]
        circuit: PathBuf,
        /// Comma-separated input point.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize the principal generator of an encoding's annihilator ideal.
    Annihilate {
        #[arg(long)]
        encoding: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write h as polynomial text.
        #[arg(long)]
        h_out: Option<PathBuf>,
    },
    /// Basis of all annihilators of degree at most D.
    SearchAnn {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Check that a polynomial or certificate annihilates a map.
    #[command(group(ArgGroup::new("what").required(true).args(["poly", "cert"])))]
    Verify {
        #[arg(long, alias = "map")]
        encoding: PathBuf,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Polynomial identity test, directly or through a generator map.
    Pit {
        #[arg(long)]
        circuit: PathBuf,
        /// Compose with this map's outputs before testing.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = PitMode::Symbolic)]
        mode: PitMode,
        #[arg(long, default_value_t = DEFAULT_TRIALS as u64)]
        trials: u64,
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_POINT_BUDGET)]
        point_budget: u64,
        /// Exit 1 when the verdict differs.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Whether a polynomial survives composition with a map.
    Hit {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
    /// Rank of the Jacobian of a list of polynomials.
    Jacobian {
        /// A map, an equation system or a JSON array of polynomials.
        #[arg(long)]
        polys: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the exact symbolic rank (small matrices only).
        #[arg(long)]
        exact: bool,
    },
    /// Resultant of two polynomials with respect to one variable.
    Resultant {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long)]
        var: String,
        #[arg(long)]
        cofactors: bool,
    },
    /// Check a refutation of an equation system.
    IpsVerify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        refutation: PathBuf,
        /// Override the kind stored in the refutation file.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Canonical geometric refutation of a false claim.
    IpsRefute {
        #[arg(long)]
        encoding: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the equation system being refuted.
        #[arg(long)]
        system_out: Option<PathBuf>,
    },
    /// Generate a benchmark instance.
    Instance {
        /// kayal | kayal-chain | masser-philippon | det | cnf3
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Degree, or the clause count for cnf3.
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Encode this DIMACS file instead of a random 3CNF.
        #[arg(long)]
        dimacs: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pad a map to more outputs or compose copies in parallel.
    #[command(group(ArgGroup::new("how").required(true).args(["pad", "copies"])))]
    Stretch {
        #[arg(long)]
        map: PathBuf,
        /// Target number of outputs.
        #[arg(long)]
        pad: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size and degree figures for an encoding, map or circuit.
    #[command(group(ArgGroup::new("src").required(true).args(["encoding", "circuit"])))]
    Metrics {
        #[arg(long, alias = "map")]
        encoding: Option<PathBuf>,
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Encode { .. } => "encode",
            Command::Annihilate { .. } => "annihilate",
            Command::SearchAnn { .. } => "search-ann",
            Command::Verify { .. } => "verify",
            Command::Pit { .. } => "pit",
            Command::Hit { .. } => "hit",
            Command::Jacobian { .. } => "jacobian",
            Command::Resultant { .. } => "resultant",
            Command::IpsVerify { .. } => "ips-verify",
            Command::IpsRefute { .. } => "ips-refute",
            Command::Instance { .. } => "instance",
            Command::Stretch { .. } => "stretch",
            Command::Metrics { .. } => "metrics",
        }
    }
}

struct Ctx {
    json: bool,
    field: Field,
    term_budget: usize,
    monomial_ceiling: usize,
}

impl Ctx {
    /// Writes an artifact to `out`, or attaches it to the report.
    fn emit(&self, o: &mut Outcome, key: &str, out: Option<&Path>, value: Value, text: String) -> Result<(), Failure> {
        match out {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                o.set(&format!("{key}_path"), json!(path.display().to_string()));
            }
            None if self.json => o.set(key, value),
            None => o.line(text.trim_end()),
        }
        Ok(())
    }

    fn emit_json(&self, o: &mut Outcome, key: &str, out: Option<&Path>, value: Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(&value).expect("values serialize") + "\n";
        self.emit(o, key, out, value, text)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

macro_rules! read_json {
    ($path:expr, $ty:ty) => {{
        let path: &Path = $path;
        serde_json::from_str::<$ty>(&read(path)?)
            .map_err(|e| Failure::usage(format!("{}: invalid JSON: {e}", path.display())))
    }};
}

fn parse_poly(field: Field, text: &str) -> Result<Polynomial, Failure> {
    Ok(Polynomial::parse(field, text.trim())?)
}

fn parse_var(text: &str) -> Result<Var, Failure> {
    let p = Polynomial::parse(Field::Rational, text)?;
    match p.support().into_iter().collect::<Vec<_>>()[..] {
        [v] if p == Polynomial::var(Field::Rational, v) => Ok(v),
        _ => Err(Failure::usage(format!("{text:?} is not a variable"))),
    }
}

fn parse_elements(field: Field, list: &str) -> Result<Vec<FieldElement>, Failure> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',').map(|s| field.parse_element(s.trim()).map_err(Failure::from)).collect()
}

fn load_circuit(path: &Path, field: Field) -> Result<Circuit, Failure> {
    Ok(parse_circuit(&read(path)?, field)?)
}

/// A map file, re-encoded from its provenance when it carries one.
fn load_map(path: &Path) -> Result<(PolynomialMap, Option<LocalEncoding>), Failure> {
    let j = read_json!(path, MapJson)?;
    if j.provenance.is_some() {
        let e = LocalEncoding::from_json(&j)?;
        Ok((e.map().clone(), Some(e)))
    } else {
        Ok((PolynomialMap::from_json(&j)?, None))
    }
}

fn load_encoding(path: &Path) -> Result<LocalEncoding, Failure> {
    match load_map(path)? {
        (_, Some(e)) => Ok(e),
        (_, None) => Err(Failure::usage(format!("{}: map has no circuit provenance", path.display()))),
    }
}

/// An equation system file, or a map whose outputs are read as equations.
fn load_system(path: &Path) -> Result<EquationSystem, Failure> {
    let v = read_json!(path, Value)?;
    if v.get("equations").is_some() {
        let j: SystemJson = serde_json::from_value(v).map_err(|e| Failure::usage(e.to_string()))?;
        Ok(EquationSystem::from_json(&j)?)
    } else {
        let j: MapJson = serde_json::from_value(v).map_err(|e| Failure::usage(e.to_string()))?;
        Ok(system_of(&PolynomialMap::from_json(&j)?))
    }
}

fn strings<T: ToString>(xs: &[T]) -> Value {
    json!(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn degree_warning(field: Field, degree: u64, o: &mut Outcome) {
    if let Some(p) = field.modulus() {
        if p <= degree {
            o.warn(format!("modulus {p} does not exceed the degree bound {degree}; results may be unreliable"));
        }
    }
}

fn pit_outcome(v: PitVerdict, expect: Option<Expect>, o: &mut Outcome) {
    let got = match v.verdict {
        Verdict::Zero => Expect::Zero,
        Verdict::NonZero => Expect::Nonzero,
    };
    if expect.is_some_and(|e| e != got) {
        o.status("unexpected", 1);
    }
    o.set("verdict", json!(v.verdict));
    o.set("trials_run", json!(v.trials_run));
    o.set("failure_bound", json!(v.failure_bound.to_string()));
    if let Some(w) = &v.witness {
        o.set("witness", strings(w));
    }
    o.line(format!("{:?} (trials {}, failure bound {})", v.verdict, v.trials_run, v.failure_bound));
    for w in v.warnings {
        o.warn(w);
    }
}

fn ips_outcome(v: IpsVerdict, o: &mut Outcome) {
    match v {
        IpsVerdict::Accept { degree } => {
            o.set("degree", json!(degree));
            o.line(format!("accept (degree {degree})"));
        }
        IpsVerdict::Reject { reason } => {
            o.status("reject", 1);
            o.set("reason", json!(reason));
            o.line(format!("reject: {reason:?}"));
        }
    }
}

fn run(ctx: &Ctx, cmd: Command) -> Result<Outcome, Failure> {
    let mut o = Outcome::ok();
    match cmd {
        Command::Encode { circuit, alpha, beta, out } => {
            let c = load_circuit(&circuit, ctx.field)?;
            let alpha = parse_elements(ctx.field, &alpha)?;
            let beta = ctx.field.parse_element(beta.trim())?;
            let e = local_encode(&c, &alpha, &beta)?;
            let r = encoding_metrics(&e);
            o.set("metrics", json!(r));
            ctx.emit_json(&mut o, "encoding", out.as_deref(), json!(e.to_json()))?;
        }
        Command::Annihilate { encoding, out, h_out } => {
            let e = load_encoding(&encoding)?;
            let cert = principal_generator_with_budget(&e, ctx.term_budget)?;
            o.set("h_terms", json!(cert.h.num_terms()));
            o.set("h_degree", json!(cert.h.total_degree()));
            o.set("lift_gate_count", json!(cert.lift_gate_count));
            if let Some(path) = h_out {
                let text = format!("{}\n", cert.h);
                ctx.emit(&mut o, "h", Some(&path), json!(cert.h.to_string()), text)?;
            }
            ctx.emit_json(&mut o, "certificate", out.as_deref(), json!(cert.to_json()))?;
        }
        Command::SearchAnn { map, degree } => {
            let (m, _) = load_map(&map)?;
            let basis = annihilator_basis_search(&m, degree, ctx.monomial_ceiling)?;
            o.set("max_degree", json!(degree));
            o.set("dimension", json!(basis.len()));
            o.set("basis", strings(&basis));
            o.line(format!("dimension {} at degree <= {degree}", basis.len()));
            for b in &basis {
                o.line(b.to_string());
            }
        }
        Command::Verify { encoding, poly, cert } => {
            let (m, enc) = load_map(&encoding)?;
            let accept = |o: &mut Outcome| {
                o.set("result", json!("accept"));
                o.line("accept");
            };
            let reject = |o: &mut Outcome, why: &str| {
                o.status("reject", 1);
                o.set("result", json!("reject"));
                o.set("reason", json!(why));
                o.line(format!("reject: {why}"));
            };
            if let Some(path) = poly {
                let p = parse_poly(m.field(), &read(&path)?)?;
                if p.is_zero() {
                    reject(&mut o, "zero polynomial");
                } else if verify_annihilates(&p, &m)? {
                    accept(&mut o);
                } else {
                    reject(&mut o, "composition is nonzero");
                }
            } else if let Some(path) = cert {
                let j = read_json!(&path, CertificateJson)?;
                match AnnihilatorCertificate::from_json(&j) {
                    Err(e) => reject(&mut o, &e.to_string()),
                    Ok(c) if c.encoding.map() != &m => reject(&mut o, "certificate is for a different map"),
                    Ok(c) => {
                        let program_ok = enc.as_ref().map_or(Ok(true), |e| verify_program(&c.program, e))?;
                        if !program_ok {
                            reject(&mut o, "lift program check failed");
                        } else if !verify_annihilates(&c.h, &m)? {
                            reject(&mut o, "composition is nonzero");
                        } else {
                            accept(&mut o);
                        }
                    }
                }
            }
        }
        Command::Pit { circuit, map, mode, trials, grid, seed, point_budget, expect } => {
            o.set("seed", json!(seed));
            let v = match map {
                None => {
                    let c = load_circuit(&circuit, ctx.field)?;
                    let d = c.metrics().degree_bound;
                    let g = grid.unwrap_or_else(|| default_grid(d));
                    o.set("grid", json!(g));
                    o.set("degree_bound", json!(d));
                    degree_warning(ctx.field, d, &mut o);
                    sz_pit(&c, trials, g, ctx.field, seed)?
                }
                Some(path) => {
                    let (m, _) = load_map(&path)?;
                    let c = load_circuit(&circuit, m.field())?;
                    let d = c.metrics().degree_bound.saturating_mul(m.degree() as u64);
                    o.set("degree_bound", json!(d));
                    degree_warning(m.field(), d, &mut o);
                    let mode = match mode {
                        PitMode::Symbolic => GeneratorMode::Symbolic { term_budget: ctx.term_budget },
                        PitMode::Randomized => GeneratorMode::Randomized { trials, grid, seed },
                        PitMode::Grid => GeneratorMode::DeterministicGrid { point_budget },
                    };
                    generator_pit(&c, &m, &mode)?
                }
            };
            pit_outcome(v, expect, &mut o);
        }
        Command::Hit { map, poly } => {
            let (m, _) = load_map(&map)?;
            let p = parse_poly(m.field(), &read(&poly)?)?;
            let r = hit_test(&m, &p)?;
            o.set("result", json!(r));
            match r {
                HitResult::Hit => o.line("hit"),
                HitResult::Fooled => {
                    o.status("fooled", 1);
                    o.line("fooled: the polynomial vanishes on the map");
                }
                HitResult::ZeroInput => {
                    o.status("zero_input", 2);
                    o.line("the input polynomial is zero");
                }
            }
        }
        Command::Jacobian { polys, trials, prime, seed, exact } => {
            let v = read_json!(&polys, Value)?;
            let (field, ps, vars) = if v.get("outputs").is_some() {
                let j: MapJson = serde_json::from_value(v).map_err(|e| Failure::usage(e.to_string()))?;
                let m = PolynomialMap::from_json(&j)?;
                (m.field(), m.outputs().to_vec(), m.seed_vars().to_vec())
            } else {
                let texts: Vec<String> = match v.get("equations") {
                    Some(eqs) => serde_json::from_value(eqs.clone()),
                    None => serde_json::from_value(v),
                }
                .map_err(|e| Failure::usage(format!("expected a list of polynomials: {e}")))?;
                let ps = texts.iter().map(|t| parse_poly(ctx.field, t)).collect::<Result<Vec<_>, _>>()?;
                let vars: BTreeSet<Var> = ps.iter().flat_map(|p| p.support()).collect();
                (ctx.field, ps, vars.into_iter().collect())
            };
            let j = jacobian(field, &ps, &vars);
            degree_warning(Field::prime(prime)?, j.max_degree() as u64 + 1, &mut o);
            let r = rank_random_eval(&j, trials, prime, seed)?;
            o.set("rows", json!(j.rows()));
            o.set("cols", json!(j.cols()));
            o.set("variables", strings(&vars));
            o.set("report", json!(r));
            o.line(format!("rank {} of {}x{} (p = {prime}, trials {trials}, seed {seed})", r.rank, j.rows(), j.cols()));
            if exact {
                let er = j.exact_rank()?;
                o.set("exact_rank", json!(er));
                o.line(format!("exact rank {er}"));
            }
        }
        Command::Resultant { f, g, var, cofactors } => {
            let (f, g, v) = (parse_poly(ctx.field, &f)?, parse_poly(ctx.field, &g)?, parse_var(&var)?);
            if cofactors {
                let (r, u, w) = resultant_with_cofactors(&f, &g, v)?;
                o.set("resultant", json!(r.to_string()));
                o.set("u", json!(u.to_string()));
                o.set("v", json!(w.to_string()));
                o.line(format!("res = {r}\nu = {u}\nv = {w}"));
            } else {
                let r = resultant(&f, &g, v)?;
                o.set("resultant", json!(r.to_string()));
                o.line(r.to_string());
            }
        }
        Command::IpsVerify { system, refutation, kind } => {
            let sys = load_system(&system)?;
            let mut j = read_json!(&refutation, RefutationJson)?;
            if let Some(k) = kind {
                j.kind = match k {
                    KindArg::Geometric => RefutationKind::Geometric,
                    KindArg::Full => RefutationKind::Full,
                };
            }
            let r = Refutation::from_json(&j, sys.field())?;
            o.set("kind", json!(r.kind));
            let v = match r.kind {
                RefutationKind::Geometric => verify_geometric(&r, &sys)?,
                RefutationKind::Full => verify_full_ips(&r, &sys)?,
            };
            ips_outcome(v, &mut o);
        }
        Command::IpsRefute { encoding, out, system_out } => {
            let e = load_encoding(&encoding)?;
            match canonical_geometric_refutation_with_budget(&e, ctx.term_budget) {
                Err(IpsError::SystemSatisfiable) => {
                    o.status("satisfiable", 1);
                    o.line("the claim is true; no refutation exists");
                }
                Err(err) => return Err(err.into()),
                Ok(r) => {
                    o.set("degree", json!(r.r.total_degree()));
                    if let Some(path) = system_out {
                        ctx.emit_json(&mut o, "system", Some(&path), json!(system_of(e.map()).to_json()))?;
                    }
                    ctx.emit_json(&mut o, "refutation", out.as_deref(), json!(r.to_json()))?;
                }
            }
        }
        Command::Instance { family, n, d, seed, dimacs, out } => {
            let family: Family = family.parse()?;
            o.set("family", json!(family.to_string()));
            let inst = match dimacs {
                Some(path) if family == Family::Cnf3 => {
                    let cnf = Cnf3::parse_dimacs(&read(&path)?)?;
                    let sys = encode_3cnf(&cnf)?;
                    Instance::Cnf(cnf, sys)
                }
                Some(_) => return Err(Failure::usage("--dimacs only applies to the cnf3 family")),
                None => {
                    o.set("n", json!(n));
                    o.set("d", json!(d));
                    o.set("seed", json!(seed));
                    InstanceSpec { family, n, d, seed }.build()?
                }
            };
            match inst {
                Instance::Map(m) => ctx.emit_json(&mut o, "map", out.as_deref(), json!(m.to_json()))?,
                Instance::System(s) => ctx.emit_json(&mut o, "system", out.as_deref(), json!(s.to_json()))?,
                Instance::Circuit(c) => ctx.emit(&mut o, "circuit", out.as_deref(), json!(c.to_dsl()), c.to_dsl())?,
                Instance::Cnf(cnf, s) => {
                    o.set("dimacs", json!(cnf.to_dimacs()));
                    ctx.emit_json(&mut o, "system", out.as_deref(), json!(s.to_json()))?
                }
            }
        }
        Command::Stretch { map, pad, copies, out } => {
            let (m, _) = load_map(&map)?;
            let m2 = match (pad, copies) {
                (Some(q), _) => m.pad(q)?,
                (None, Some(k)) => m.parallel_compose(k)?,
                (None, None) => unreachable!("clap enforces one of --pad/--copies"),
            };
            o.set("seed_len", json!(m2.seed_len()));
            o.set("out_len", json!(m2.out_len()));
            o.set("stretch", json!(m2.stretch()));
            o.set("degree", json!(m2.degree()));
            ctx.emit_json(&mut o, "map", out.as_deref(), json!(m2.to_json()))?;
        }
        Command::Metrics { encoding, circuit } => {
            if let Some(path) = circuit {
                let c = load_circuit(&path, ctx.field)?;
                let mt = c.metrics();
                o.set("size", json!(mt.size));
                o.set("depth", json!(mt.depth));
                o.set("degree_bound", json!(mt.degree_bound));
                o.line(format!("size {} depth {} degree bound {}", mt.size, mt.depth, mt.degree_bound));
            }
            if let Some(path) = encoding {
                let (m, enc) = load_map(&path)?;
                let max_formula = m.outputs().iter().map(formula_size).max().unwrap_or(0);
                if let Some(e) = &enc {
                    o.set("encoding", json!(encoding_metrics(e)));
                }
                o.set("seed_len", json!(m.seed_len()));
                o.set("out_len", json!(m.out_len()));
                o.set("stretch", json!(m.stretch()));
                o.set("degree", json!(m.degree()));
                o.set("max_formula_size", json!(max_formula));
                o.line(format!(
                    "seed {} out {} stretch {} degree {} max formula size {max_formula}",
                    m.seed_len(),
                    m.out_len(),
                    m.stretch(),
                    m.degree()
                ));
            }
        }
    }
    Ok(o)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = cli
        .field
        .parse::<Field>()
        .map_err(Failure::from)
        .map(|field| Ctx {
            json: cli.json,
            field,
            term_budget: cli.term_budget,
            monomial_ceiling: cli.monomial_ceiling,
        })
        .and_then(|ctx| run(&ctx, cli.command));
    ExitCode::from(report::finish(name, cli.json, result))
}
