//! The acceptance suite: ten criteria, one line each, with pinned corpus
//! sizes, seeds and time bounds. Exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use posetal_core::category::{verify_universal_property, Category, FinCat, FinSet, Functor};
use posetal_core::fpos::fpos_limit;
use posetal_core::generate::{
    catalog, labelled_diagram, posetal_diagram, probe_apexes, random_distributive_lattice,
    random_lattice_hom, DiagramBounds, DiagramKind, DualPair, PosetalKind,
};
use posetal_core::interval::{
    atomic_cospans, interval_join, interval_meet, interval_poset, is_atomic_cospan, product_interval_iso, Interval,
};
use posetal_core::labelled::Labelled;
use posetal_core::lattice::{detect_lattice, downset_lattice, is_lattice_hom_between, join_irreducibles};
use posetal_core::limit::{compute_limit, compute_limit_posetal, compute_limit_with, factor_cone, LimitOptions};
use posetal_core::oracle::{interval_glb, interval_lub, is_atomic_definitional};
use posetal_core::poset::{validate_poset, FinPoset, MonotoneMap};
use posetal_core::posetal::{filler_intervals, is_local, validate_posetal_morphism};
use posetal_core::Error;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Lattice corpus shared by criteria 4 and 5.
const LATTICE_SEED: u64 = 0x1a77;
const LATTICE_COUNT: usize = 120;
const LATTICE_MAX: usize = 9;

fn lattice_corpus() -> Vec<DualPair> {
    let mut rng = StdRng::seed_from_u64(LATTICE_SEED);
    (0..LATTICE_COUNT)
        .map(|_| random_distributive_lattice(&mut rng, LATTICE_MAX))
        .collect()
}

fn c1_diamond_counts() -> Outcome {
    let l = downset_lattice(&FinPoset::antichain(2)).lattice;
    let ip = interval_poset(l.carrier());
    let squares = atomic_cospans(&l, false);
    ensure!(ip.len() == 9, "{} intervals, expected 9", ip.len());
    ensure!(squares.len() == 4, "{} proper squares, expected 4", squares.len());
    Ok("9 intervals, 4 proper squares".into())
}

fn c2_zigzag_counts() -> Outcome {
    let l = downset_lattice(&FinPoset::chain(2)).lattice;
    ensure!(l.len() == 3, "downset lattice of the 2-chain has {} elements", l.len());
    let ip = interval_poset(l.carrier());
    let fillers = filler_intervals(&l, &ip);
    let regular = ip.degenerate().count();
    // singular heights are the non-degenerate intervals a labelling stores;
    // the pullback corner [{}, {0,1}] is filler
    let singular = ip.non_degenerate().filter(|k| !fillers.contains(k)).count();
    ensure!(regular == 3 && singular == 2, "{regular} regular and {singular} singular heights");
    ensure!(fillers.len() == 1, "{} filler intervals", fillers.len());
    Ok(format!("3 regular, 2 singular, {} filler", fillers.len()))
}

fn c3_product_intervals() -> Outcome {
    let posets = catalog(4);
    let mut pairs = 0;
    for p in &posets {
        for q in &posets {
            product_interval_iso(p, q).map_err(|e| format!("{} x {}: {e}", p.len(), q.len()))?;
            pairs += 1;
        }
    }
    ensure!(pairs >= 50, "only {pairs} pairs");
    Ok(format!("{pairs} pairs"))
}

fn c4_interval_oracle() -> Outcome {
    let corpus = lattice_corpus();
    let mut checked = 0usize;
    let mut missing_joins = 0usize;
    for d in &corpus {
        let l = d.lattice();
        ensure!(l.len() <= LATTICE_MAX, "lattice with {} elements", l.len());
        let ip = interval_poset(l.carrier());
        for &i in ip.intervals() {
            for &j in ip.intervals() {
                let meet = interval_meet(l, i, j);
                ensure!(interval_glb(&ip, i, j) == Some(meet), "meet disagrees at {i:?}, {j:?}");
                let join = interval_join(l, i, j);
                ensure!(interval_lub(&ip, i, j) == join, "join disagrees at {i:?}, {j:?}");
                missing_joins += usize::from(join.is_none());
                checked += 1;
            }
        }
    }
    ensure!(missing_joins > 0, "corpus never exercises a missing join");
    Ok(format!("{} lattices, {checked} pairs, {missing_joins} without join", corpus.len()))
}

fn c5_atomic_oracle() -> Outcome {
    let corpus = lattice_corpus();
    let mut cospans = 0usize;
    let mut atomic = 0usize;
    for d in &corpus {
        let l = d.lattice();
        let ip = interval_poset(l.carrier());
        for &left in ip.intervals() {
            for &vertex in ip.intervals() {
                for &right in ip.intervals() {
                    let Ok(fast) = is_atomic_cospan(l, left, vertex, right) else {
                        continue;
                    };
                    let slow = is_atomic_definitional(&ip, left, vertex, right);
                    ensure!(fast == slow, "disagree on ({left:?}, {vertex:?}, {right:?})");
                    cospans += 1;
                    atomic += usize::from(fast);
                }
            }
        }
    }
    let p = validate_poset(
        &["a", "b", "c", "d", "e"],
        &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "e")],
    )
    .map_err(|e| e.to_string())?;
    let e = detect_lattice(&p).map_err(|e| e.to_string())?;
    let iv = |a: &str, b: &str| Interval::new(p.index_of(a).unwrap(), p.index_of(b).unwrap());
    let example = is_atomic_cospan(&e, iv("b", "e"), iv("e", "e"), iv("c", "e")).map_err(|e| e.to_string())?;
    ensure!(!example, "([b,e],[e,e],[c,e]) reported atomic");
    Ok(format!("{cospans} cospans ({atomic} atomic), example rejected"))
}

fn c6_homs_preserve_squares() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6006);
    let mut homs = 0usize;
    let mut squares = 0usize;
    while homs < 120 {
        let a = random_distributive_lattice(&mut rng, LATTICE_MAX);
        let b = random_distributive_lattice(&mut rng, LATTICE_MAX);
        let Some(f) = random_lattice_hom(&mut rng, &a, &b) else {
            continue;
        };
        ensure!(is_lattice_hom_between(&f, a.lattice(), b.lattice()), "generated map is not a lattice hom");
        homs += 1;
        let image = |i: Interval| Interval::new(f.apply(i.lo), f.apply(i.hi));
        for sq in atomic_cospans(a.lattice(), true) {
            let (l, v, r) = (image(sq.left), image(sq.vertex), image(sq.right));
            let ok = is_atomic_cospan(b.lattice(), l, v, r).map_err(|e| e.to_string())?;
            ensure!(ok, "image of {sq:?} is not atomic");
            ensure!(interval_meet(b.lattice(), l, r) == image(sq.pullback), "pullback of {sq:?} not preserved");
            squares += 1;
        }
    }
    Ok(format!("{homs} homs, {squares} squares"))
}

fn c7_birkhoff() -> Outcome {
    let posets = catalog(6);
    for p in &posets {
        let d = downset_lattice(p);
        let (j, _) = join_irreducibles(&d.lattice).map_err(|e| e.to_string())?;
        ensure!(j.is_isomorphic(p), "join-irreducibles of O(P) differ from P for a {}-element P", p.len());
    }
    // lattice-hom diagrams: binary products, equalizers and pullbacks
    let mut rng = StdRng::seed_from_u64(0x7007);
    let mut diagrams = 0usize;
    while diagrams < 150 {
        let a = random_distributive_lattice(&mut rng, 6);
        let b = random_distributive_lattice(&mut rng, 6);
        let carrier = |x: &DualPair| x.lattice().carrier().clone();
        let diagram: Functor<posetal_core::fpos::FPos> = match diagrams % 3 {
            0 => Functor::new(
                FinCat::discrete(2),
                vec![carrier(&a), carrier(&b)],
                vec![MonotoneMap::identity(&carrier(&a)), MonotoneMap::identity(&carrier(&b))],
            ),
            1 => {
                let (Some(f), Some(g)) = (random_lattice_hom(&mut rng, &a, &b), random_lattice_hom(&mut rng, &a, &b))
                else {
                    continue;
                };
                let cat = FinCat::parallel_pair();
                let gens: HashMap<usize, MonotoneMap> = cat.generators().into_iter().zip([f, g]).collect();
                Functor::from_generators(&posetal_core::fpos::FPos, cat, vec![carrier(&a), carrier(&b)], &gens)
                    .map_err(|e| e.to_string())?
            }
            _ => {
                let c = random_distributive_lattice(&mut rng, 6);
                let (Some(f), Some(g)) = (random_lattice_hom(&mut rng, &a, &b), random_lattice_hom(&mut rng, &c, &b))
                else {
                    continue;
                };
                let cat = FinCat::cospan();
                let gens: HashMap<usize, MonotoneMap> = cat.generators().into_iter().zip([f, g]).collect();
                Functor::from_generators(
                    &posetal_core::fpos::FPos,
                    cat,
                    vec![carrier(&a), carrier(&b), carrier(&c)],
                    &gens,
                )
                .map_err(|e| e.to_string())?
            }
        };
        let cone = fpos_limit(&diagram);
        let apex = detect_lattice(&cone.apex).map_err(|e| format!("limit is not a lattice: {e}"))?;
        ensure!(apex.is_distributive(), "limit lattice is not distributive");
        for (j, leg) in cone.legs.iter().enumerate() {
            let target = detect_lattice(diagram.object(j)).map_err(|e| e.to_string())?;
            ensure!(is_lattice_hom_between(leg, &apex, &target), "leg {j} is not a lattice hom");
        }
        diagrams += 1;
    }
    Ok(format!("{} posets, {diagrams} lattice-hom diagrams", posets.len()))
}

/// Probe apexes: posets of at most 3 elements with labels of at most 2
/// elements. Cones per apex are enumerated exhaustively up to this cap,
/// beyond which a seeded sample of this size is taken.
const PROBE_CONE_CAP: usize = 160;
const PROBE_RANDOM_PER_SHAPE: usize = 2;

fn c8_soundness() -> Outcome {
    let l = Labelled::new(FinSet);
    let mut rng = StdRng::seed_from_u64(0x8008);
    let bounds = DiagramBounds { shape: 4, carrier: 3 };
    let apexes = probe_apexes(&l, &mut rng, 3, 2, PROBE_RANDOM_PER_SHAPE).map_err(|e| e.to_string())?;
    let (mut probes_total, mut capped, mut round_trips) = (0usize, 0usize, 0usize);
    let diagrams = 210;
    for n in 0..diagrams {
        let kind = DiagramKind::ALL[n % DiagramKind::ALL.len()];
        let diagram = labelled_diagram(&l, &mut rng, kind, bounds).map_err(|e| format!("generator: {e}"))?;
        let result = compute_limit(&l, &diagram).map_err(|e| format!("diagram {n} ({kind:?}): {e}"))?;
        let candidate = result.cone();
        let mut probes = Vec::new();
        for apex in &apexes {
            let cones = l
                .cones_with_apex(&diagram, apex, PROBE_CONE_CAP, Some(&mut rng))
                .map_err(|e| e.to_string())?;
            capped += usize::from(cones.len() == PROBE_CONE_CAP);
            probes.extend(cones);
        }
        let cert = verify_universal_property(&l, &diagram, &candidate, &probes)
            .map_err(|e| format!("diagram {n} ({kind:?}): {e}"))?;
        probes_total += cert.probes_checked;
        // factor_cone recovers random morphisms into the apex
        for apex in apexes.iter().step_by(3) {
            let Some(m) = l.random_morphism(apex, &result.apex, &mut rng).map_err(|e| e.to_string())? else {
                continue;
            };
            let cone = candidate.precompose(&l, &m).map_err(|e| e.to_string())?;
            let back = factor_cone(&l, &diagram, &result, &cone).map_err(|e| e.to_string())?;
            ensure!(back == m, "diagram {n}: factor_cone does not round-trip");
            round_trips += 1;
        }
    }
    Ok(format!(
        "{diagrams} diagrams, {probes_total} probe cones ({capped} apexes sampled at cap {PROBE_CONE_CAP}), {round_trips} round trips"
    ))
}

fn c9_posetal_closure() -> Outcome {
    let l = Labelled::new(FinSet);
    let mut rng = StdRng::seed_from_u64(0x9009);
    let (mut ok, mut squares) = (0usize, 0usize);
    for n in 0..120 {
        let kind = if n % 2 == 0 { PosetalKind::Product } else { PosetalKind::Equalizer };
        let diagram = posetal_diagram(&l, &mut rng, kind, 6).map_err(|e| format!("generator: {e}"))?;
        let out = match compute_limit_posetal(&l, &diagram, LimitOptions::default()) {
            Ok(out) => out,
            Err(e @ Error::InternalInvariantViolation(_)) => return Err(format!("diagram {n} ({kind:?}): {e}")),
            Err(e) => return Err(format!("diagram {n} ({kind:?}) rejected: {e}")),
        };
        let report = is_local(&FinSet, &out.apex.lattice, &out.result.apex).map_err(|e| e.to_string())?;
        ensure!(report.verdict, "diagram {n}: apex is not local");
        squares += report.witnesses.len();
        for leg in &out.result.legs {
            validate_posetal_morphism(leg).map_err(|e| format!("diagram {n}: leg: {e}"))?;
        }
        ok += 1;
    }
    Ok(format!("{ok} posetal limits, {squares} squares checked, 0 invariant violations"))
}

fn c10_thin_failure() -> Outcome {
    let p = validate_poset(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
        .map_err(|e| e.to_string())?;
    let l = Labelled::new(FinCat::thin(&p));
    let c = p.index_of("c").unwrap();
    let d = p.index_of("d").unwrap();
    let x = l.constant_object(&FinPoset::chain(1), c);
    let y = l.constant_object(&FinPoset::chain(1), d);
    let arrows = vec![l.identity(&x), l.identity(&y)];
    let diagram = Functor::new(FinCat::discrete(2), vec![x, y], arrows);
    let expected = Error::FailureAt {
        interval: "[(0,0),(0,0)]".into(),
        all: vec![],
    };
    let got = compute_limit(&l, &diagram).err();
    ensure!(got.as_ref() == Some(&expected), "got {got:?}");
    let all = compute_limit_with(
        &l,
        &diagram,
        LimitOptions {
            all_failures: true,
            parallel: false,
        },
    )
    .err();
    let expected_all = Error::FailureAt {
        interval: "[(0,0),(0,0)]".into(),
        all: vec!["[(0,0),(0,0)]".into()],
    };
    ensure!(all.as_ref() == Some(&expected_all), "with all failures, got {all:?}");
    Ok("FailureAt [(0,0),(0,0)]".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("1 diamond: 9 intervals, 4 squares", c1_diamond_counts, Duration::from_secs(1)),
        ("2 zigzag: 3 regular, 2 singular", c2_zigzag_counts, Duration::from_secs(1)),
        ("3 product interval isomorphism", c3_product_intervals, Duration::from_secs(10)),
        ("4 interval meet/join oracle", c4_interval_oracle, Duration::from_secs(30)),
        ("5 atomic cospan oracle", c5_atomic_oracle, Duration::from_secs(30)),
        ("6 lattice homs preserve squares", c6_homs_preserve_squares, Duration::from_secs(30)),
        ("7 Birkhoff round trip", c7_birkhoff, Duration::from_secs(60)),
        ("8 limit soundness in L(FinSet)", c8_soundness, Duration::from_secs(300)),
        ("9 posetal closure", c9_posetal_closure, Duration::from_secs(300)),
        ("10 failure on a thin base", c10_thin_failure, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (name, run, bound) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > bound => Err(format!("{detail}; took {elapsed:.2?}, bound {bound:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{elapsed:.2?} <= {bound:?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{elapsed:.2?}, bound {bound:?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
