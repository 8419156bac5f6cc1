//! `posetal`: validate posets and labellings, list intervals, check
//! locality, compute limits and render interval posets.
//!
//! Exit status is 0 on success, 1 on a domain error (with a JSON error
//! object on standard error) and 2 on malformed input. Set `RUST_LOG` for
//! progress logging.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use posetal_core::category::{verify_universal_property, FinSet, Functor};
use posetal_core::dot::{interval_dot, DotOptions};
use posetal_core::generate::probe_apexes;
use posetal_core::interval::{atomic_cospans, interval_join, interval_meet, interval_poset, is_atomic_cospan};
use posetal_core::json::{
    diagram_from_json, from_str, limit_to_json, locality_to_json, object_from_json, poset_from_json, poset_to_json,
    to_canonical, BundleJson, LabelledObjectJson, PosetJson,
};
use posetal_core::labelled::{Labelled, LabelledObject};
use posetal_core::lattice::{detect_lattice, downset_lattice, join_irreducibles, lattice_isomorphism};
use posetal_core::limit::{compute_limit_posetal, compute_limit_with, LimitOptions};
use posetal_core::oracle::{interval_glb, interval_lub, is_atomic_definitional};
use posetal_core::poset::FinPoset;
use posetal_core::posetal::{filler_intervals, is_local, LocalityReport};
use posetal_core::Error;

/// Seed for `limit --verify` probes when `--probe-seed` is not given.
const DEFAULT_PROBE_SEED: u64 = 20_240_501;
/// Probe cones per probe apex; larger cone sets are sampled.
const PROBE_CONE_CAP: usize = 160;

#[derive(Parser, Debug)]
#[command(name = "posetal", version, about = "Finite posets, interval posets and posetal diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Io {
    /// Input JSON file, or `-` for standard input.
    input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a poset, labelled object or diagram bundle.
    Validate(Io),
    /// List the intervals of a poset, with atomic squares when it is a lattice.
    Interval {
        #[command(flatten)]
        io: Io,
        /// Also write the interval poset as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check that a labelled object of a distributive lattice is local.
    LocalCheck {
        #[command(flatten)]
        io: Io,
        /// Also write DOT with failing squares highlighted.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compute the limit of a diagram bundle.
    Limit {
        #[command(flatten)]
        io: Io,
        /// Compute in the posetal subcategory and certify the result.
        #[arg(long)]
        posetal: bool,
        /// Check the universal property against seeded probe cones.
        #[arg(long)]
        verify: bool,
        /// Seed for the probe cones.
        #[arg(long, default_value_t = DEFAULT_PROBE_SEED)]
        probe_seed: u64,
        /// Report every failing interval instead of the first.
        #[arg(long)]
        all_failures: bool,
        /// Also write the apex interval poset as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Worker threads for per-interval limits.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Birkhoff duality: down-set lattice and join-irreducibles.
    Birkhoff {
        #[command(flatten)]
        io: Io,
        /// Treat the input as a distributive lattice and recover its poset.
        #[arg(long)]
        from_lattice: bool,
    },
    /// Render a poset or labelled object's interval poset as DOT.
    RenderDot(Io),
    /// Cross-validate interval meets, joins and atomicity on a lattice by brute force.
    Oracle(Io),
}

/// Why a command did not succeed.
enum Failure {
    /// The input could not be read or does not match any schema.
    Malformed(String),
    Domain(Error),
    /// A domain error with extra fields for the error object.
    Detailed(Error, Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Malformed(m),
            e @ (Error::UnknownElement(_)
            | Error::DuplicateElement(_)
            | Error::MalformedMap(_)
            | Error::CycleError(..)) => Failure::Malformed(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn read_input(path: &Path) -> Outcome<String> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    };
    text.map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// The documents a command can read.
enum Document {
    Poset(PosetJson),
    Object(LabelledObjectJson),
    Bundle(BundleJson),
}

fn read_document(path: &Path) -> Outcome<Document> {
    let text = read_input(path)?;
    let v: Value = from_str(&text)?;
    let has = |k: &str| v.get(k).is_some();
    let doc = if has("base") {
        Document::Bundle(from_str(&text)?)
    } else if has("labels") {
        Document::Object(from_str(&text)?)
    } else if has("elements") {
        Document::Poset(from_str(&text)?)
    } else {
        return Err(Failure::Malformed("expected a poset, labelled object or diagram bundle".into()));
    };
    Ok(doc)
}

fn read_poset(path: &Path) -> Outcome<FinPoset> {
    match read_document(path)? {
        Document::Poset(p) => Ok(poset_from_json(&p)?),
        _ => Err(Failure::Malformed("expected a poset".into())),
    }
}

fn read_object(l: &Labelled<FinSet>, path: &Path) -> Outcome<LabelledObject<FinSet>> {
    match read_document(path)? {
        Document::Object(x) => Ok(object_from_json(l, &x)?),
        _ => Err(Failure::Malformed("expected a labelled object".into())),
    }
}

fn caption(x: &LabelledObject<FinSet>, k: usize) -> String {
    let label = x.label(k);
    if label.len() <= 4 {
        format!("{{{}}}", label.tokens().join(","))
    } else {
        format!("{} elements", label.len())
    }
}

fn object_dot(x: &LabelledObject<FinSet>, locality: Option<&LocalityReport>) -> String {
    let ip = x.intervals();
    let filled = detect_lattice(x.shape())
        .map(|l| filler_intervals(&l, ip))
        .unwrap_or_default();
    let mut highlight = Vec::new();
    for w in locality.iter().flat_map(|r| r.failures()) {
        highlight.extend([w.left, w.vertex, w.right, w.pullback]);
    }
    let captions = Some((0..ip.len()).map(|k| caption(x, k)).collect());
    interval_dot(ip, &DotOptions { filled, highlight, captions })
}

fn pair_json(p: &FinPoset, i: posetal_core::interval::Interval) -> Value {
    json!([p.name(i.lo), p.name(i.hi)])
}

fn validate(io: &Io) -> Outcome {
    let l = Labelled::new(FinSet);
    let report = match read_document(&io.input)? {
        Document::Poset(j) => {
            let p = poset_from_json(&j)?;
            let lattice = detect_lattice(&p).ok();
            json!({
                "kind": "poset",
                "elements": p.len(),
                "lattice": lattice.is_some(),
                "distributive": lattice.map(|l| l.is_distributive()).unwrap_or(false),
            })
        }
        Document::Object(j) => {
            let x = object_from_json(&l, &j)?;
            let posetal = posetal_core::posetal::validate_posetal_object(&FinSet, &x).is_ok();
            json!({ "kind": "labelled-object", "intervals": x.intervals().len(), "posetal": posetal })
        }
        Document::Bundle(j) => {
            let d = diagram_from_json(&l, &j)?;
            json!({
                "kind": "diagram",
                "objects": d.source().object_count(),
                "arrows": d.source().arrow_count(),
            })
        }
    };
    write_to(io.output.as_deref(), &to_canonical(&report))
}

fn interval(io: &Io, dot: Option<&Path>) -> Outcome {
    let p = read_poset(&io.input)?;
    let ip = interval_poset(&p);
    let intervals: Vec<Value> = ip
        .intervals()
        .iter()
        .map(|&i| json!({ "interval": pair_json(&p, i), "degenerate": i.is_degenerate() }))
        .collect();
    let mut covers: Vec<Value> = ip
        .carrier()
        .covers()
        .into_iter()
        .map(|(i, j)| json!([pair_json(&p, ip.interval(i)), pair_json(&p, ip.interval(j))]))
        .collect();
    covers.sort_by_key(|v| v.to_string());
    let mut report = json!({
        "poset": poset_to_json(&p),
        "count": ip.len(),
        "intervals": intervals,
        "covers": covers,
    });
    let mut filled = Vec::new();
    if let Ok(lattice) = detect_lattice(&p) {
        let squares: Vec<Value> = atomic_cospans(&lattice, false)
            .iter()
            .map(|c| {
                json!({
                    "left": pair_json(&p, c.left),
                    "vertex": pair_json(&p, c.vertex),
                    "right": pair_json(&p, c.right),
                    "pullback": pair_json(&p, c.pullback),
                })
            })
            .collect();
        report["squares"] = json!(squares);
        filled = filler_intervals(&lattice, &ip);
    }
    if let Some(path) = dot {
        write_to(Some(path), &interval_dot(&ip, &DotOptions { filled, ..Default::default() }))?;
    }
    write_to(io.output.as_deref(), &to_canonical(&report))
}

fn local_check(io: &Io, dot: Option<&Path>) -> Outcome {
    let l = Labelled::new(FinSet);
    let x = read_object(&l, &io.input)?;
    let lattice = detect_lattice(x.shape())?;
    lattice.require_distributive()?;
    let report = is_local(&FinSet, &lattice, &x)?;
    info!("checked {} squares", report.witnesses.len());
    if let Some(path) = dot {
        write_to(Some(path), &object_dot(&x, Some(&report)))?;
    }
    write_to(io.output.as_deref(), &to_canonical(&locality_to_json(&x, &report)))?;
    if !report.verdict {
        let failing: Vec<_> = locality_to_json(&x, &report).squares.into_iter().filter(|s| !s.passed).collect();
        let detail = json!({ "failing_squares": failing });
        return Err(Failure::Detailed(Error::NotLocal(Box::new(report)), detail));
    }
    Ok(())
}

struct LimitFlags<'a> {
    posetal: bool,
    verify: bool,
    probe_seed: u64,
    all_failures: bool,
    dot: Option<&'a Path>,
    jobs: usize,
}

fn limit(io: &Io, flags: LimitFlags<'_>) -> Outcome {
    let l = Labelled::new(FinSet);
    let bundle: BundleJson = match read_document(&io.input)? {
        Document::Bundle(b) => b,
        _ => return Err(Failure::Malformed("expected a diagram bundle".into())),
    };
    let diagram = diagram_from_json(&l, &bundle)?;
    let options = LimitOptions {
        all_failures: flags.all_failures,
        parallel: flags.jobs > 1,
    };
    let run = || -> Outcome<(Value, LabelledObject<FinSet>, Option<LocalityReport>)> {
        if flags.posetal {
            let out = compute_limit_posetal(&l, &diagram, options)?;
            let doc = limit_to_json(&diagram, &out.result.apex, &out.result.legs, Some(&out.apex.locality));
            let mut v = serde_json::to_value(&doc).expect("limit documents serialize");
            if flags.verify {
                v["probes_checked"] = json!(verify(&l, &diagram, &out.result.cone(), flags.probe_seed)?);
            }
            Ok((v, out.result.apex, Some(out.apex.locality)))
        } else {
            let out = compute_limit_with(&l, &diagram, options)?;
            let doc = limit_to_json(&diagram, &out.apex, &out.legs, None);
            let mut v = serde_json::to_value(&doc).expect("limit documents serialize");
            if flags.verify {
                v["probes_checked"] = json!(verify(&l, &diagram, &out.cone(), flags.probe_seed)?);
            }
            Ok((v, out.apex, None))
        }
    };
    let (doc, apex, locality) = if flags.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(flags.jobs)
            .build()
            .map_err(|e| Failure::Malformed(format!("cannot start {} workers: {e}", flags.jobs)))?;
        pool.install(run)?
    } else {
        run()?
    };
    info!("apex has {} intervals", apex.intervals().len());
    if let Some(path) = flags.dot {
        write_to(Some(path), &object_dot(&apex, locality.as_ref()))?;
    }
    write_to(io.output.as_deref(), &to_canonical(&doc))
}

fn verify(
    l: &Labelled<FinSet>,
    diagram: &Functor<Labelled<FinSet>>,
    cone: &posetal_core::category::Cone<Labelled<FinSet>>,
    seed: u64,
) -> Outcome<usize> {
    let mut rng = StdRng::seed_from_u64(seed);
    let apexes = probe_apexes(l, &mut rng, 3, 2, 2)?;
    let mut probes = Vec::new();
    for apex in &apexes {
        probes.extend(l.cones_with_apex(diagram, apex, PROBE_CONE_CAP, Some(&mut rng))?);
    }
    info!("verifying against {} probe cones from seed {seed}", probes.len());
    Ok(verify_universal_property(l, diagram, cone, &probes)?.probes_checked)
}

fn birkhoff(io: &Io, from_lattice: bool) -> Outcome {
    let p = read_poset(&io.input)?;
    let names = |q: &FinPoset, map: &[usize], target: &FinPoset| -> Value {
        let m: serde_json::Map<String, Value> = q
            .elements()
            .map(|a| (q.name(a).to_string(), json!(target.name(map[a]))))
            .collect();
        Value::Object(m)
    };
    let report = if from_lattice {
        let lattice = detect_lattice(&p)?;
        let (j, _) = join_irreducibles(&lattice)?;
        let back = downset_lattice(&j);
        let iso = lattice_isomorphism(&lattice, &back.lattice).ok_or_else(|| {
            Error::InternalInvariantViolation("lattice is not isomorphic to the down-sets of its join-irreducibles".into())
        })?;
        json!({
            "join_irreducibles": poset_to_json(&j),
            "downsets": poset_to_json(back.lattice.carrier()),
            "iso": names(&p, iso.images(), back.lattice.carrier()),
        })
    } else {
        let d = downset_lattice(&p);
        let (j, _) = join_irreducibles(&d.lattice)?;
        let iso = p.order_isomorphism(&j).ok_or_else(|| {
            Error::InternalInvariantViolation("poset is not isomorphic to its join-irreducibles".into())
        })?;
        json!({
            "downsets": poset_to_json(d.lattice.carrier()),
            "principal": names(&p, &d.principal, d.lattice.carrier()),
            "join_irreducibles": poset_to_json(&j),
            "iso": names(&p, &iso, &j),
        })
    };
    write_to(io.output.as_deref(), &to_canonical(&report))
}

fn render_dot(io: &Io) -> Outcome {
    let l = Labelled::new(FinSet);
    let dot = match read_document(&io.input)? {
        Document::Poset(j) => {
            let p = poset_from_json(&j)?;
            let ip = interval_poset(&p);
            let filled = detect_lattice(&p).map(|l| filler_intervals(&l, &ip)).unwrap_or_default();
            interval_dot(&ip, &DotOptions { filled, ..Default::default() })
        }
        Document::Object(j) => {
            let x = object_from_json(&l, &j)?;
            let locality = detect_lattice(x.shape())
                .ok()
                .filter(|lat| lat.is_distributive())
                .map(|lat| is_local(&FinSet, &lat, &x))
                .transpose()?;
            object_dot(&x, locality.as_ref())
        }
        Document::Bundle(_) => return Err(Failure::Malformed("render-dot takes a poset or labelled object".into())),
    };
    write_to(io.output.as_deref(), &dot)
}

fn oracle(io: &Io) -> Outcome {
    let p = read_poset(&io.input)?;
    let lattice = detect_lattice(&p)?;
    let ip = interval_poset(&p);
    let (mut pairs, mut cospans, mut disagreements) = (0usize, 0usize, Vec::new());
    for &i in ip.intervals() {
        for &j in ip.intervals() {
            pairs += 1;
            if interval_glb(&ip, i, j) != Some(interval_meet(&lattice, i, j)) {
                disagreements.push(format!("meet of {} and {}", ip.name(ip.index(i).unwrap()), ip.name(ip.index(j).unwrap())));
            }
            if interval_lub(&ip, i, j) != interval_join(&lattice, i, j) {
                disagreements.push(format!("join of {} and {}", ip.name(ip.index(i).unwrap()), ip.name(ip.index(j).unwrap())));
            }
            for &v in ip.intervals() {
                if let Ok(fast) = is_atomic_cospan(&lattice, i, v, j) {
                    cospans += 1;
                    if fast != is_atomic_definitional(&ip, i, v, j) {
                        disagreements.push(format!("atomicity at vertex {}", ip.name(ip.index(v).unwrap())));
                    }
                }
            }
        }
    }
    let report = json!({ "pairs": pairs, "cospans": cospans, "disagreements": disagreements });
    write_to(io.output.as_deref(), &to_canonical(&report))?;
    if !disagreements.is_empty() {
        return Err(Failure::Domain(Error::Mismatch(format!("{} disagreements", disagreements.len()))));
    }
    Ok(())
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.kind(), "message": e.to_string() });
    match e {
        Error::FailureAt { interval, all } => {
            v["interval"] = json!(interval);
            v["all"] = json!(all);
        }
        Error::NotLocal(report) => {
            v["failing_squares"] = json!(report.failures().count());
        }
        _ => {}
    }
    v
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("off")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate(io) => validate(io),
        Command::Interval { io, dot } => interval(io, dot.as_deref()),
        Command::LocalCheck { io, dot } => local_check(io, dot.as_deref()),
        Command::Limit {
            io,
            posetal,
            verify,
            probe_seed,
            all_failures,
            dot,
            jobs,
        } => limit(
            io,
            LimitFlags {
                posetal: *posetal,
                verify: *verify,
                probe_seed: *probe_seed,
                all_failures: *all_failures,
                dot: dot.as_deref(),
                jobs: *jobs,
            },
        ),
        Command::Birkhoff { io, from_lattice } => birkhoff(io, *from_lattice),
        Command::RenderDot(io) => render_dot(io),
        Command::Oracle(io) => oracle(io),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("{}", serde_json::to_string(&error_json(&e)).expect("error objects serialize"));
            ExitCode::from(1)
        }
        Err(Failure::Detailed(e, extra)) => {
            let mut v = error_json(&e);
            if let (Some(v), Value::Object(extra)) = (v.as_object_mut(), extra) {
                v.extend(extra);
            }
            eprintln!("{}", serde_json::to_string(&v).expect("error objects serialize"));
            ExitCode::from(1)
        }
        Err(Failure::Malformed(m)) => {
            eprintln!("{}", serde_json::to_string(&json!({ "error": "MalformedInput", "message": m })).expect("error objects serialize"));
            ExitCode::from(2)
        }
    }
}
