//! Seeded generators for test corpora: poset catalogs, random distributive
//! lattices and lattice homomorphisms, and labellings in finite sets.
//!
//! Every random generator takes an explicit `StdRng`, so a corpus is fixed
//! by its seed.

use std::collections::{BTreeMap, HashMap};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::category::{Category, FinCat, FinSet, FinSetMor, FinSetObj, Functor};
use crate::interval::interval_poset;
use crate::labelled::{Labelled, LabelledMorphism, LabelledObject};
use crate::lattice::{downset_lattice, preimage_hom, DownsetLattice, Lattice};
use crate::poset::{monotone_maps, FinPoset, MonotoneMap};
use crate::posetal::{pullback_fill, PartialLabelling};
use crate::Result;

/// Isomorphism-invariant fingerprint: sorted (down-set size, up-set size)
/// pairs plus the cover count.
fn fingerprint(p: &FinPoset) -> (Vec<(usize, usize)>, usize) {
    let mut degrees: Vec<(usize, usize)> = p
        .elements()
        .map(|a| (p.down_set(a).len(), p.up_set(a).len()))
        .collect();
    degrees.sort_unstable();
    (degrees, p.covers().len())
}

/// One representative of every isomorphism class of `n`-element posets,
/// named `0..n` along a linear extension.
///
/// Every poset has a natural labelling, so closing each subset of the
/// pairs `i < j` reaches every class. Exponential in `n * (n - 1) / 2`;
/// intended for `n <= 6`.
pub fn posets_up_to_iso(n: usize) -> Vec<FinPoset> {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let mut buckets: HashMap<(Vec<(usize, usize)>, usize), Vec<FinPoset>> = HashMap::new();
    let mut out = Vec::new();
    let mut seen_relations = std::collections::HashSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut leq = vec![false; n * n];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                leq[i * n + j] = true;
            }
        }
        let p = FinPoset::from_relation(names.clone(), leq).expect("upper-triangular relations are acyclic");
        if !seen_relations.insert(p.relation().to_vec()) {
            continue;
        }
        let bucket = buckets.entry(fingerprint(&p)).or_default();
        if bucket.iter().any(|q| q.is_isomorphic(&p)) {
            continue;
        }
        bucket.push(p.clone());
        out.push(p);
    }
    out
}

/// Every poset with at most `max` elements up to isomorphism, by size.
pub fn catalog(max: usize) -> Vec<FinPoset> {
    (0..=max).flat_map(posets_up_to_iso).collect()
}

/// A random poset on `0..n`: each pair `i < j` is related with
/// probability `density` before closing.
pub fn random_poset(rng: &mut StdRng, n: usize, density: f64) -> FinPoset {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            leq[i * n + j] = rng.gen_bool(density);
        }
    }
    FinPoset::from_relation(names, leq).expect("upper-triangular relations are acyclic")
}

/// A finite distributive lattice presented as the down-sets of a poset.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub poset: FinPoset,
    pub dual: DownsetLattice,
}

impl DualPair {
    pub fn new(poset: FinPoset) -> Self {
        let dual = downset_lattice(&poset);
        DualPair { poset, dual }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.dual.lattice
    }
}

/// A random distributive lattice with at most `max_elements` elements
/// (at least 2 when `max_elements >= 2`).
pub fn random_distributive_lattice(rng: &mut StdRng, max_elements: usize) -> DualPair {
    loop {
        let n = rng.gen_range(1..=4);
        let density = rng.gen_range(0.0..=1.0);
        let pair = DualPair::new(random_poset(rng, n, density));
        if pair.lattice().len() <= max_elements.max(2) {
            return pair;
        }
    }
}

/// A uniformly chosen monotone map, if one exists.
pub fn random_monotone_map(rng: &mut StdRng, source: &FinPoset, target: &FinPoset) -> Option<MonotoneMap> {
    monotone_maps(source, target).choose(rng).cloned()
}

/// A random bounded lattice homomorphism `O(source) -> O(target)`, the
/// preimage map of a random monotone `target.poset -> source.poset`.
pub fn random_lattice_hom(rng: &mut StdRng, source: &DualPair, target: &DualPair) -> Option<MonotoneMap> {
    let g = random_monotone_map(rng, &target.poset, &source.poset)?;
    Some(preimage_hom(&g, &source.dual, &target.dual))
}

/// A random function, if one exists.
pub fn random_function(rng: &mut StdRng, x: &FinSetObj, y: &FinSetObj) -> Option<FinSetMor> {
    if y.is_empty() && !x.is_empty() {
        return None;
    }
    let map = (0..x.len()).map(|_| rng.gen_range(0..y.len())).collect();
    Some(FinSetMor::new(x.clone(), y.clone(), map).expect("images in range"))
}

/// A labelling of `shape` from random stored data: points get sets of size
/// `1..=max`, intervals `[a, b]` with `b` covering `a` get sets of size
/// `0..=max` and random maps to both endpoints, and every other interval is
/// pullback-filled.
pub fn filled_object(
    l: &Labelled<FinSet>,
    rng: &mut StdRng,
    shape: &FinPoset,
    max: usize,
) -> Result<LabelledObject<FinSet>> {
    let ip = interval_poset(shape);
    let mut objects = BTreeMap::new();
    for k in ip.degenerate() {
        objects.insert(k, FinSetObj::of_size(rng.gen_range(1..=max.max(1))));
    }
    for k in ip.non_degenerate() {
        let i = ip.interval(k);
        if shape.covers_pair(i.lo, i.hi) {
            objects.insert(k, FinSetObj::of_size(rng.gen_range(0..=max)));
        }
    }
    let mut arrows = HashMap::new();
    for (&k, x) in &objects {
        for (&j, y) in &objects {
            if k != j && ip.carrier().covers_pair(k, j) {
                let f = random_function(rng, x, y).expect("points are nonempty");
                arrows.insert((k, j), f);
            }
        }
    }
    Ok(pullback_fill(l, shape, &PartialLabelling { objects, arrows })?.object)
}

/// A random zigzag: a filled labelling of the `n`-element chain.
pub fn zigzag(l: &Labelled<FinSet>, rng: &mut StdRng, n: usize, max: usize) -> Result<LabelledObject<FinSet>> {
    filled_object(l, rng, &FinPoset::chain(n), max)
}

/// Largest label of an object.
pub fn max_label(x: &LabelledObject<FinSet>) -> usize {
    (0..x.intervals().len()).map(|k| x.label(k).len()).max().unwrap_or(0)
}

/// A filled object on `shape` whose labels all have at most `cap` elements.
pub fn bounded_object(
    l: &Labelled<FinSet>,
    rng: &mut StdRng,
    shape: &FinPoset,
    max: usize,
    cap: usize,
) -> Result<LabelledObject<FinSet>> {
    loop {
        let x = filled_object(l, rng, shape, max)?;
        if max_label(&x) <= cap {
            return Ok(x);
        }
    }
}

/// A random local labelling of a distributive lattice: the pointwise
/// product of `factors` zigzags, each reindexed along a random lattice
/// homomorphism onto a chain of at most 4 elements. Chains are local
/// under pullback filling and locality survives reindexing along lattice
/// homomorphisms and pointwise products.
pub fn local_object(
    l: &Labelled<FinSet>,
    rng: &mut StdRng,
    shape: &DualPair,
    factors: usize,
    max: usize,
) -> Result<LabelledObject<FinSet>> {
    let mut out: Option<LabelledObject<FinSet>> = None;
    for _ in 0..factors.max(1) {
        let chain = DualPair::new(FinPoset::chain(rng.gen_range(1..=3)));
        let factor = match random_lattice_hom(rng, shape, &chain) {
            Some(f) => {
                let z = filled_object(l, rng, chain.lattice().carrier(), max)?;
                l.reindex(&z, &f)?
            }
            // only the one-element lattice has no map to a chain
            None => l.constant_object(shape.lattice().carrier(), FinSetObj::of_size(rng.gen_range(1..=max.max(1)))),
        };
        out = Some(match out {
            None => factor,
            Some(acc) => l.pointwise_product(&acc, &factor)?.0,
        });
    }
    Ok(out.expect("at least one factor"))
}

/// The cartesian arrow `reindex(y, f) -> y` composed after a random
/// vertical projection out of a pointwise product with `extra`.
fn lift_with_extra(
    l: &Labelled<FinSet>,
    y: &LabelledObject<FinSet>,
    f: &MonotoneMap,
    extra: Option<&LabelledObject<FinSet>>,
) -> Result<LabelledMorphism<FinSet>> {
    let lift = l.cartesian_lift(y, f)?;
    match extra {
        None => Ok(lift),
        Some(z) => {
            let (_, left, _) = l.pointwise_product(lift.source(), z)?;
            l.compose_morphisms(&lift, &left)
        }
    }
}

/// Shape of a generated diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagramKind {
    Discrete(usize),
    Arrow,
    ParallelPair,
    Cospan,
    Span,
}

impl DiagramKind {
    pub const ALL: [DiagramKind; 7] = [
        DiagramKind::Discrete(1),
        DiagramKind::Discrete(2),
        DiagramKind::Discrete(3),
        DiagramKind::Arrow,
        DiagramKind::ParallelPair,
        DiagramKind::Cospan,
        DiagramKind::Span,
    ];
}

/// Limits on generated diagrams.
#[derive(Clone, Copy, Debug)]
pub struct DiagramBounds {
    /// Largest poset shape of an object.
    pub shape: usize,
    /// Largest label of an object.
    pub carrier: usize,
}

fn random_shape(rng: &mut StdRng, catalog: &[FinPoset]) -> FinPoset {
    catalog.choose(rng).expect("nonempty catalog").clone()
}

/// A random diagram in `L(FinSet)` of the given kind. Objects are filled
/// labellings on catalog shapes; arrows are random morphisms, cartesian
/// lifts, or lifts after a product projection. Diagrams whose labels break
/// `bounds` are redrawn.
pub fn labelled_diagram(
    l: &Labelled<FinSet>,
    rng: &mut StdRng,
    kind: DiagramKind,
    bounds: DiagramBounds,
) -> Result<Functor<Labelled<FinSet>>> {
    let shapes: Vec<FinPoset> = (1..=bounds.shape).flat_map(posets_up_to_iso).collect();
    let ok = |x: &LabelledObject<FinSet>| max_label(x) <= bounds.carrier;
    'retry: loop {
        let object = |rng: &mut StdRng| {
            let shape = random_shape(rng, &shapes);
            bounded_object(l, rng, &shape, 2, bounds.carrier)
        };
        // an arrow into `y` from a fresh or reindexed source
        let arrow_into = |rng: &mut StdRng, y: &LabelledObject<FinSet>| -> Result<Option<LabelledMorphism<FinSet>>> {
            let shape = random_shape(rng, &shapes);
            if rng.gen_bool(0.5) {
                let x = bounded_object(l, rng, &shape, 2, bounds.carrier)?;
                if let Some(m) = l.random_morphism(&x, y, rng)? {
                    return Ok(Some(m));
                }
            }
            let Some(f) = random_monotone_map(rng, &shape, y.shape()) else {
                return Ok(None);
            };
            let extra = if rng.gen_bool(0.3) {
                Some(bounded_object(l, rng, &shape, 1, bounds.carrier)?)
            } else {
                None
            };
            Ok(Some(lift_with_extra(l, y, &f, extra.as_ref())?))
        };
        let (cat, objects, gens): (FinCat, Vec<LabelledObject<FinSet>>, Vec<LabelledMorphism<FinSet>>) = match kind {
            DiagramKind::Discrete(n) => {
                let objects = (0..n).map(|_| object(rng)).collect::<Result<Vec<_>>>()?;
                (FinCat::discrete(n), objects, vec![])
            }
            DiagramKind::Arrow => {
                let y = object(rng)?;
                let Some(m) = arrow_into(rng, &y)? else { continue 'retry };
                (FinCat::walking_arrow(), vec![m.source().clone(), y], vec![m])
            }
            DiagramKind::ParallelPair => {
                let y = object(rng)?;
                let shape = random_shape(rng, &shapes);
                let (Some(f), Some(g)) = (
                    random_monotone_map(rng, &shape, y.shape()),
                    random_monotone_map(rng, &shape, y.shape()),
                ) else {
                    continue 'retry;
                };
                let (x, left, right) = l.pointwise_product(&l.reindex(&y, &f)?, &l.reindex(&y, &g)?)?;
                let mf = l.compose_morphisms(&l.cartesian_lift(&y, &f)?, &left)?;
                let mg = l.compose_morphisms(&l.cartesian_lift(&y, &g)?, &right)?;
                (FinCat::parallel_pair(), vec![x, y], vec![mf, mg])
            }
            DiagramKind::Cospan => {
                let y = object(rng)?;
                let (Some(f), Some(g)) = (arrow_into(rng, &y)?, arrow_into(rng, &y)?) else {
                    continue 'retry;
                };
                (FinCat::cospan(), vec![f.source().clone(), y, g.source().clone()], vec![f, g])
            }
            DiagramKind::Span => {
                let (y1, y2) = (object(rng)?, object(rng)?);
                let shape = random_shape(rng, &shapes);
                let (Some(f), Some(g)) = (
                    random_monotone_map(rng, &shape, y1.shape()),
                    random_monotone_map(rng, &shape, y2.shape()),
                ) else {
                    continue 'retry;
                };
                let (x, left, right) = l.pointwise_product(&l.reindex(&y1, &f)?, &l.reindex(&y2, &g)?)?;
                let mf = l.compose_morphisms(&l.cartesian_lift(&y1, &f)?, &left)?;
                let mg = l.compose_morphisms(&l.cartesian_lift(&y2, &g)?, &right)?;
                (FinCat::span(), vec![y1, x, y2], vec![mf, mg])
            }
        };
        if !objects.iter().all(ok) {
            continue 'retry;
        }
        let generators: HashMap<usize, LabelledMorphism<FinSet>> = cat
            .generators()
            .into_iter()
            .zip(gens)
            .collect();
        return Functor::from_generators(l, cat, objects, &generators);
    }
}

/// Probe apexes for universal-property checks: every poset with at most
/// `shape` elements, labelled constantly by sets of size `0..=carrier` and
/// by `random_per_shape` random labellings with labels of at most
/// `carrier` elements.
pub fn probe_apexes(
    l: &Labelled<FinSet>,
    rng: &mut StdRng,
    shape: usize,
    carrier: usize,
    random_per_shape: usize,
) -> Result<Vec<LabelledObject<FinSet>>> {
    let mut out = Vec::new();
    for p in catalog(shape) {
        for n in 0..=carrier {
            out.push(l.constant_object(&p, FinSetObj::of_size(n)));
        }
        if p.is_empty() {
            continue;
        }
        for _ in 0..random_per_shape {
            out.push(bounded_object(l, rng, &p, carrier, carrier)?);
        }
    }
    Ok(out)
}

/// Shape of a generated posetal diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PosetalKind {
    Product,
    Equalizer,
}

/// A random diagram of local labellings of distributive lattices with
/// lattice homomorphism shape maps: a binary product, or a parallel pair
/// `X => Y` with `X` the product of the two reindexings of `Y`.
pub fn posetal_diagram(
    l: &Labelled<FinSet>,
    rng: &mut StdRng,
    kind: PosetalKind,
    max_lattice: usize,
) -> Result<Functor<Labelled<FinSet>>> {
    loop {
        let factors = rng.gen_range(1..=2);
        match kind {
            PosetalKind::Product => {
                let (d1, d2) = (
                    random_distributive_lattice(rng, max_lattice),
                    random_distributive_lattice(rng, max_lattice),
                );
                let y1 = local_object(l, rng, &d1, factors, 2)?;
                let y2 = local_object(l, rng, &d2, factors, 2)?;
                return Ok(Functor::new(
                    FinCat::discrete(2),
                    vec![y1.clone(), y2.clone()],
                    vec![l.identity(&y1), l.identity(&y2)],
                ));
            }
            PosetalKind::Equalizer => {
                let (dx, dy) = (
                    random_distributive_lattice(rng, max_lattice),
                    random_distributive_lattice(rng, max_lattice),
                );
                let (Some(f), Some(g)) = (random_lattice_hom(rng, &dx, &dy), random_lattice_hom(rng, &dx, &dy))
                else {
                    continue;
                };
                let y = local_object(l, rng, &dy, factors, 2)?;
                let (x, left, right) = l.pointwise_product(&l.reindex(&y, &f)?, &l.reindex(&y, &g)?)?;
                let mf = l.compose_morphisms(&l.cartesian_lift(&y, &f)?, &left)?;
                let mg = l.compose_morphisms(&l.cartesian_lift(&y, &g)?, &right)?;
                let cat = FinCat::parallel_pair();
                let generators: HashMap<usize, LabelledMorphism<FinSet>> =
                    cat.generators().into_iter().zip([mf, mg]).collect();
                return Functor::from_generators(l, cat, vec![x, y], &generators);
            }
        }
    }
}
