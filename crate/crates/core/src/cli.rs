//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on invalid
//! input or an exhausted budget.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::category::FinCategory;
use crate::covers::find_uncovered_chain;
use crate::error::{Error, Result};
use crate::fibrations::{
    are_isomorphic, check_lift, classify_fibration, fiber, lift_chain_homotopy, lift_homotopy,
    Endpoint, FibrationReport, LiftKind, MissingLift,
};
use crate::functor::FinFunctor;
use crate::homotopy::homotopic;
use crate::invariants::{
    ccat_direct, ctc_direct, ctc_n_direct, distance, Certificate, InvariantResult,
};
use crate::io::{self, Document, Loader};
use crate::verify::{
    check_inequality_suite, check_tanaka, check_varadarajan, random_category,
    random_connected_category, random_suite_instance, FibrationMorphism, InequalityReport,
};
use crate::Config;

#[derive(Debug, Parser)]
#[command(
    name = "fincat",
    version,
    about = "Homotopy invariants and fibrations of finite categories"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Write the certificate to this file.
    #[arg(long, global = true, value_name = "PATH")]
    witness: Option<PathBuf>,
    /// Override every search budget.
    #[arg(long, global = true, value_name = "N")]
    budget: Option<usize>,
    /// Disable the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EndpointArg {
    Start,
    End,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Parse and validate any document; witnesses and results are replayed.
    Validate { file: PathBuf },
    /// Search for a zigzag between two functors.
    Homotopic { f: PathBuf, g: PathBuf },
    /// LS-category of a category.
    Ccat { category: PathBuf },
    /// Categorical complexity.
    Ctc { category: PathBuf },
    /// Higher categorical complexity.
    Ctcn {
        category: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Homotopic distance of two or more functors.
    Cd {
        #[arg(required = true, num_args = 2..)]
        functors: Vec<PathBuf>,
    },
    /// Decide whether a family is a geometric cover.
    CoverCheck { cover: PathBuf },
    /// Classify a bundle as a (op-)fibration.
    FibCheck { bundle: PathBuf },
    /// The fiber over a base object.
    Fiber {
        bundle: PathBuf,
        #[arg(long)]
        object: String,
    },
    /// Transport functor along a base arrow.
    Transport {
        bundle: PathBuf,
        #[arg(long)]
        arrow: String,
        /// Pushforward u_* instead of pullback u^*.
        #[arg(long)]
        push: bool,
    },
    /// Whether transport along a base arrow is an equivalence of fibers.
    Equiv {
        bundle: PathBuf,
        #[arg(long)]
        arrow: String,
    },
    /// Lift a base homotopy through a fibration.
    Lift {
        bundle: PathBuf,
        functor: PathBuf,
        homotopy: PathBuf,
        #[arg(long, value_enum, default_value = "start")]
        endpoint: EndpointArg,
    },
    /// Distance bound for two morphisms of bi-fibrations.
    Varadarajan { input: PathBuf },
    /// LS-category bound for a bi-fibration.
    Tanaka {
        bundle: PathBuf,
        #[arg(long)]
        object: Option<String>,
    },
    /// Inequality suite on seeded random instances.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: u64,
    },
    /// Print a seeded random category.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        objects: usize,
        #[arg(long, default_value_t = 4)]
        arrows: usize,
        #[arg(long)]
        connected: bool,
    },
}

struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }

    fn check(text: String, ok: bool) -> Self {
        Outcome { text, ok }
    }
}

/// Run one invocation; returns the exit status.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut config = if cli.sequential {
        Config::sequential()
    } else {
        Config::default()
    };
    if let Some(n) = cli.budget {
        config = config.with_search_budget(n);
    }
    match execute(&cli, &config) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn json_text(v: &Value) -> String {
    io::to_pretty(v)
}

fn load_bundle(path: &Path) -> Result<FinFunctor> {
    io::load_bundle(path)
}

fn base_object(p: &FinFunctor, name: &str) -> Result<usize> {
    p.cod()
        .object_id(name)
        .ok_or_else(|| Error::UnknownObject(name.to_string()))
}

fn base_arrow(p: &FinFunctor, name: &str) -> Result<usize> {
    p.cod()
        .arrow_id(name)
        .ok_or_else(|| Error::UnknownArrow(name.to_string()))
}

fn no_witness(cli: &Cli, verb: &str) -> Result<()> {
    match cli.witness {
        Some(_) => Err(Error::BadParams(format!(
            "--witness is not supported by {verb}"
        ))),
        None => Ok(()),
    }
}

fn execute(cli: &Cli, config: &Config) -> Result<Outcome> {
    match &cli.verb {
        Verb::Validate { file } => {
            no_witness(cli, "validate")?;
            validate(cli, file, config)
        }
        Verb::Homotopic { f, g } => {
            let f = io::load_functor(f)?;
            let g = io::load_functor(g)?;
            let w = homotopic(&f, &g, config)?;
            if let (Some(path), Some(w)) = (&cli.witness, &w) {
                io::write_json(path, &io::witness_spec(w, true))?;
            }
            let text = if cli.json {
                json_text(&json!({
                    "homotopic": w.is_some(),
                    "steps": w.as_ref().map(|w| w.len()),
                    "witness": w.as_ref().map(|w| io::witness_spec(w, true)),
                }))
            } else {
                match &w {
                    Some(w) => format!("homotopic: yes ({} steps)\n", w.len()),
                    None => "homotopic: no\n".to_string(),
                }
            };
            Ok(Outcome::check(text, w.is_some()))
        }
        Verb::Ccat { category } => {
            let c = io::load_category(category)?;
            invariant_out(cli, &ccat_direct(&c, config)?)
        }
        Verb::Ctc { category } => {
            let c = io::load_category(category)?;
            invariant_out(cli, &ctc_direct(&c, config)?)
        }
        Verb::Ctcn { category, n } => {
            let c = io::load_category(category)?;
            invariant_out(cli, &ctc_n_direct(&c, *n, config)?)
        }
        Verb::Cd { functors } => {
            let fs = functors
                .iter()
                .map(|p| io::load_functor(p))
                .collect::<Result<Vec<_>>>()?;
            invariant_out(cli, &distance(&fs, config)?)
        }
        Verb::CoverCheck { cover } => {
            no_witness(cli, "cover-check")?;
            let v: io::CoverSpec = read_spec(cover)?;
            let (parent, members) = Loader::for_file(cover).cover_members(&v)?;
            let chain = find_uncovered_chain(&parent, &members);
            let text = if cli.json {
                json_text(&json!({
                    "geometric_cover": chain.is_none(),
                    "members": members.len(),
                    "uncovered_chain": chain.as_ref().map(|c| io::chain_spec(&parent, c)),
                }))
            } else {
                match &chain {
                    None => format!("geometric cover: yes ({} members)\n", members.len()),
                    Some(c) => format!("geometric cover: no (uncovered {})\n", c.describe(&parent)),
                }
            };
            Ok(Outcome::check(text, chain.is_none()))
        }
        Verb::FibCheck { bundle } => {
            no_witness(cli, "fib-check")?;
            let p = load_bundle(bundle)?;
            let r = classify_fibration(&p, config);
            let text = if cli.json {
                json_text(&io::fibration_report_json(&r))
            } else {
                fib_check_line(&r)
            };
            Ok(Outcome::check(text, r.is_bifibration()))
        }
        Verb::Fiber { bundle, object } => {
            no_witness(cli, "fiber")?;
            let p = load_bundle(bundle)?;
            let b = base_object(&p, object)?;
            let f = fiber(&p, b)?;
            let c = &f.category;
            let text = if cli.json {
                io::to_pretty(&c.to_spec())
            } else {
                format!(
                    "fiber over {}: {} objects {{{}}}, {} non-identity arrows {{{}}}\n",
                    object,
                    c.num_objects(),
                    c.objects().join(", "),
                    c.non_identity_arrows().count(),
                    c.non_identity_arrows()
                        .map(|a| c.arrow_name(a))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            };
            Ok(Outcome::ok(text))
        }
        Verb::Transport {
            bundle,
            arrow,
            push,
        } => {
            no_witness(cli, "transport")?;
            let p = load_bundle(bundle)?;
            let u = base_arrow(&p, arrow)?;
            let r = classify_fibration(&p, config);
            let t = if *push {
                r.structure.pushforward_functor(u)?
            } else {
                r.structure.pullback_functor(u)?
            };
            let text = if cli.json {
                io::to_pretty(&io::functor_spec(&t, true))
            } else {
                let label = if *push {
                    format!("{arrow}_*")
                } else {
                    format!("{arrow}^*")
                };
                describe_functor(&label, &t)
            };
            Ok(Outcome::ok(text))
        }
        Verb::Equiv { bundle, arrow } => {
            no_witness(cli, "equiv")?;
            let p = load_bundle(bundle)?;
            let u = base_arrow(&p, arrow)?;
            let r = classify_fibration(&p, config);
            let adj = r.structure.fiber_adjunction(u)?;
            let equivalence = adj.is_equivalence();
            if equivalence {
                adj.inverse_transformations()?;
            }
            let iso = are_isomorphic(adj.push.dom(), adj.push.cod(), config)?;
            let (src, tgt) = (adj.push.dom(), adj.push.cod());
            let text = if cli.json {
                json_text(&json!({
                    "arrow": arrow,
                    "source_fiber": {"objects": src.num_objects(), "arrows": src.num_arrows()},
                    "target_fiber": {"objects": tgt.num_objects(), "arrows": tgt.num_arrows()},
                    "equivalence": equivalence,
                    "isomorphic": iso,
                    "push": io::functor_spec(&adj.push, false),
                    "pull": io::functor_spec(&adj.pull, false),
                }))
            } else {
                format!(
                    "fibers: {} ({} objects) and {} ({} objects)\nequivalence: {}\nisomorphic: {}\n",
                    src.name(),
                    src.num_objects(),
                    tgt.name(),
                    tgt.num_objects(),
                    yes(equivalence),
                    yes(iso)
                )
            };
            Ok(Outcome::check(text, equivalence))
        }
        Verb::Lift {
            bundle,
            functor,
            homotopy,
            endpoint,
        } => {
            let p = load_bundle(bundle)?;
            let g = io::load_functor(functor)?;
            let h = io::load_witness(homotopy, Some(g.dom()), Some(p.cod()))?;
            let r = classify_fibration(&p, config);
            let (lifted, fixed) = if h.len() == 1 {
                let e = match endpoint {
                    EndpointArg::Start => Endpoint::Start,
                    EndpointArg::End => Endpoint::End,
                };
                (
                    lift_homotopy(&r, &g, &h, e)?,
                    if e == Endpoint::Start { 0 } else { 1 },
                )
            } else {
                if matches!(endpoint, EndpointArg::End) {
                    return Err(Error::BadParams(
                        "multi-step lifts start at the given functor".into(),
                    ));
                }
                (lift_chain_homotopy(&r, &g, &h)?, 0)
            };
            check_lift(&p, &g, &h, &lifted, fixed)?;
            if let Some(path) = &cli.witness {
                io::write_json(path, &io::witness_spec(&lifted.witness, true))?;
            }
            let kinds: Vec<&str> = lifted
                .kinds
                .iter()
                .map(|k| match k {
                    LiftKind::Cartesian => "cartesian",
                    LiftKind::OpCartesian => "op-cartesian",
                })
                .collect();
            let text = if cli.json {
                json_text(&json!({
                    "steps": lifted.witness.len(),
                    "kinds": kinds,
                    "verified": true,
                    "witness": io::witness_spec(&lifted.witness, true),
                }))
            } else {
                let mut s = format!(
                    "lifted: {} steps ({})\n",
                    lifted.witness.len(),
                    kinds.join(", ")
                );
                s += &describe_functor("end", lifted.witness.end());
                s += "check: ok\n";
                s
            };
            Ok(Outcome::ok(text))
        }
        Verb::Varadarajan { input } => {
            no_witness(cli, "varadarajan")?;
            let spec: io::VaradarajanSpec = read_spec(input)?;
            let v = Loader::for_file(input).varadarajan(&spec)?;
            let m1 = FibrationMorphism::new(v.p.clone(), v.p_prime.clone(), v.f, v.f_bar)?;
            let m2 = FibrationMorphism::new(v.p, v.p_prime, v.g, v.g_bar)?;
            let r = check_varadarajan(&m1, &m2, v.basepoint, config)?;
            inequality_out(cli, &r, config)
        }
        Verb::Tanaka { bundle, object } => {
            no_witness(cli, "tanaka")?;
            let p = load_bundle(bundle)?;
            let b = match object {
                Some(o) => base_object(&p, o)?,
                None => 0,
            };
            let r = check_tanaka(&p, b, config)?;
            inequality_out(cli, &r, config)
        }
        Verb::Suite { seed, count } => {
            no_witness(cli, "suite")?;
            suite(cli, *seed, *count, config)
        }
        Verb::Random {
            seed,
            objects,
            arrows,
            connected,
        } => {
            no_witness(cli, "random")?;
            let c = if *connected {
                random_connected_category(*seed, *objects, *arrows, config)?
            } else {
                random_category(*seed, *objects, *arrows, config)?
            };
            Ok(Outcome::ok(io::to_pretty(&c.to_spec())))
        }
    }
}

fn read_spec<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn validate(cli: &Cli, file: &Path, config: &Config) -> Result<Outcome> {
    let doc = io::load_document(file, config)?;
    let (detail, ok) = match &doc {
        Document::Category(c) => (describe_category(c), true),
        Document::Functor(f) | Document::Bundle(f) => {
            (format!("{} → {}", f.dom().name(), f.cod().name()), true)
        }
        Document::Witness(w) => match w.check() {
            Ok(()) => (format!("{} steps, verified", w.len()), true),
            Err(e) => (format!("does not verify: {e}"), false),
        },
        Document::Cover(c) => (
            format!("{} members covering {}", c.len(), c.parent().name()),
            true,
        ),
        Document::Result(r) => match r.replay(config) {
            Ok(()) => (
                format!(
                    "{} = {}, certificates replayed",
                    r.invariant.label(),
                    r.value
                ),
                true,
            ),
            Err(e) => (
                format!("{} = {} does not replay: {e}", r.invariant.label(), r.value),
                false,
            ),
        },
        Document::Varadarajan(v) => (
            format!(
                "P: {} → {}, P′: {} → {}",
                v.p.dom().name(),
                v.p.cod().name(),
                v.p_prime.dom().name(),
                v.p_prime.cod().name()
            ),
            true,
        ),
    };
    let text = if cli.json {
        json_text(&json!({"kind": doc.kind(), "valid": ok, "detail": detail}))
    } else {
        format!(
            "{}: {} ({detail})\n",
            doc.kind(),
            if ok { "valid" } else { "INVALID" }
        )
    };
    Ok(Outcome::check(text, ok))
}

fn describe_category(c: &Arc<FinCategory>) -> String {
    format!(
        "{}: {} objects, {} arrows",
        c.name(),
        c.num_objects(),
        c.num_arrows()
    )
}

fn describe_functor(label: &str, f: &FinFunctor) -> String {
    let (d, c) = (f.dom(), f.cod());
    let mut s = format!("{label}: {} → {}\n", d.name(), c.name());
    for o in 0..d.num_objects() {
        let _ = writeln!(s, "  {} ↦ {}", d.object_name(o), c.object_name(f.obj(o)));
    }
    for a in d.non_identity_arrows() {
        let _ = writeln!(s, "  {} ↦ {}", d.arrow_name(a), c.arrow_name(f.arr(a)));
    }
    s
}

fn missing_text(p: &FinFunctor, kind: &str, end: &str, v: &[MissingLift]) -> String {
    v.iter()
        .map(|m| {
            format!(
                "no {kind} lift of {} with {end} {}",
                p.cod().arrow_name(m.base_arrow),
                p.dom().object_name(m.object)
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn fib_check_line(r: &FibrationReport) -> String {
    let p = r.structure.functor();
    let part = |ok: bool, kind: &str, end: &str, v: &[MissingLift]| {
        if ok {
            "yes".to_string()
        } else {
            format!("no ({})", missing_text(p, kind, end, v))
        }
    };
    format!(
        "fibration: {}, op-fibration: {}\n",
        part(
            r.is_fibration,
            "cartesian",
            "codomain",
            &r.missing_cartesian
        ),
        part(
            r.is_op_fibration,
            "op-cartesian",
            "domain",
            &r.missing_op_cartesian
        )
    )
}

fn invariant_out(cli: &Cli, r: &InvariantResult) -> Result<Outcome> {
    let spec = io::result_spec(r);
    if let Some(path) = &cli.witness {
        io::write_json(path, &spec)?;
    }
    if cli.json {
        return Ok(Outcome::ok(io::to_pretty(&spec)));
    }
    let mut s = format!("{} = {}\n", r.invariant.label(), r.value);
    match &r.cover {
        Some(cover) => {
            for (i, (u, cert)) in cover.members().iter().zip(&r.certificates).enumerate() {
                let how = match cert {
                    Certificate::Domain(pairs) => {
                        let steps: usize = pairs.iter().map(|(_, _, w)| w.len()).sum();
                        format!("homotopy domain, {steps} steps")
                    }
                    Certificate::Contraction { object, witness } => match object {
                        Some(o) => format!(
                            "contracts to {} in {} steps",
                            r.parent.object_name(*o),
                            witness.len()
                        ),
                        None => "empty".to_string(),
                    },
                    Certificate::Section { witness, .. } => {
                        format!("section, {} steps", witness.len())
                    }
                };
                let _ = writeln!(s, "  U{i} = {}: {how}", u.describe());
            }
        }
        None => {
            if let Some(chain) = &r.uncovered {
                let _ = writeln!(
                    s,
                    "  uncovered {} ({} maximal domains)",
                    chain.describe(&r.parent),
                    r.maximal.len()
                );
            }
        }
    }
    Ok(Outcome::ok(s))
}

fn inequality_out(cli: &Cli, r: &InequalityReport, config: &Config) -> Result<Outcome> {
    r.replay(config)?;
    let text = if cli.json {
        json_text(&io::inequality_json(r))
    } else {
        let mut s = format!("{}\n", r.summary());
        for (label, sub) in &r.sub_results {
            let _ = writeln!(s, "  {label} = {}", sub.value);
        }
        s
    };
    Ok(Outcome::check(text, r.holds))
}

const SUITE_OBJECTS: usize = 3;
const SUITE_ARROWS: usize = 2;

fn suite(cli: &Cli, seed: u64, count: u64, config: &Config) -> Result<Outcome> {
    let instances = (seed..seed + count)
        .map(|s| random_suite_instance(s, SUITE_OBJECTS, SUITE_ARROWS, config))
        .collect::<Result<Vec<_>>>()?;
    let results = check_inequality_suite(&instances, config);
    let mut checks = 0;
    let mut violations = Vec::new();
    let mut rows = Vec::new();
    for (inst, res) in instances.iter().zip(results) {
        let reports = res.map_err(|e| match e {
            Error::SizeBudgetExceeded {
                what,
                actual,
                limit,
            } => Error::SizeBudgetExceeded {
                what: format!("{}: {what}", inst.label),
                actual,
                limit,
            },
            other => other,
        })?;
        for r in reports {
            checks += 1;
            if !r.holds {
                violations.push(format!("{}: {}", r.inputs, r.summary()));
            }
            rows.push(json!({
                "inputs": r.inputs,
                "name": r.name,
                "relation": r.relation.to_string(),
                "left": r.left,
                "right": r.right,
                "holds": r.holds,
            }));
        }
    }
    let text = if cli.json {
        json_text(
            &json!({"instances": count, "checks": checks, "violations": violations.len(), "reports": rows}),
        )
    } else {
        let mut s = String::new();
        for v in &violations {
            let _ = writeln!(s, "VIOLATED {v}");
        }
        let _ = writeln!(
            s,
            "instances: {count}, checks: {checks}, violations: {}",
            violations.len()
        );
        s
    };
    Ok(Outcome::check(text, violations.is_empty()))
}
