//! The posetal subcategory `P(C)`: distributive-lattice shapes, local
//! labellings and lattice-homomorphism shape maps.

use std::collections::{BTreeMap, HashMap};

use crate::category::{is_pullback_square, Category, Cone, FinCat, Functor, Square};
use crate::error::{Error, Result};
use crate::interval::{atomic_cospans_in, interval_poset, AtomicCospan, IntervalPoset};
use crate::labelled::{Labelled, LabelledMorphism, LabelledObject};
use crate::lattice::{detect_lattice, lattice_hom_failure, Lattice};
use crate::poset::FinPoset;

/// One checked square: the labels on `pullback -> feet -> vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityWitness {
    pub cospan: AtomicCospan,
    /// Interval indices of left foot, vertex, right foot and pullback.
    pub left: usize,
    pub vertex: usize,
    pub right: usize,
    pub pullback: usize,
    pub passed: bool,
}

/// The outcome of a locality check over every proper atomic cospan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityReport {
    pub verdict: bool,
    pub witnesses: Vec<LocalityWitness>,
}

impl LocalityReport {
    pub fn failures(&self) -> impl Iterator<Item = &LocalityWitness> {
        self.witnesses.iter().filter(|w| !w.passed)
    }
}

/// Checks that the labelling sends every proper atomic square of `[L]` to a
/// pullback. Squares with comparable feet are pullbacks in any functor
/// image and are not listed.
pub fn is_local<C: Category>(c: &C, lattice: &Lattice, x: &LabelledObject<C>) -> Result<LocalityReport> {
    if lattice.carrier() != x.shape() {
        return Err(Error::Mismatch("lattice is not the object's shape".into()));
    }
    let ip = x.intervals();
    let mut witnesses = Vec::new();
    for cospan in atomic_cospans_in(lattice, ip, false) {
        let idx = |i| ip.index(i).expect("interval of the shape");
        let (l, v, r, p) = (
            idx(cospan.left),
            idx(cospan.vertex),
            idx(cospan.right),
            idx(cospan.pullback),
        );
        let arrow = |a, b| x.arrow_label(a, b).expect("precision arrow").clone();
        let sq = Square::<C> {
            corner: x.label(p).clone(),
            to_left: arrow(p, l),
            to_right: arrow(p, r),
            left: arrow(l, v),
            right: arrow(r, v),
        };
        let passed = is_pullback_square(c, &sq)?;
        witnesses.push(LocalityWitness {
            cospan,
            left: l,
            vertex: v,
            right: r,
            pullback: p,
            passed,
        });
    }
    Ok(LocalityReport {
        verdict: witnesses.iter().all(|w| w.passed),
        witnesses,
    })
}

/// A labelled object certified as posetal.
pub struct PosetalObject<C: Category> {
    pub object: LabelledObject<C>,
    pub lattice: Lattice,
    pub locality: LocalityReport,
}

impl<C: Category> Clone for PosetalObject<C> {
    fn clone(&self) -> Self {
        PosetalObject {
            object: self.object.clone(),
            lattice: self.lattice.clone(),
            locality: self.locality.clone(),
        }
    }
}

impl<C: Category> std::fmt::Debug for PosetalObject<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PosetalObject").field("object", &self.object).finish()
    }
}

/// Requires a distributive lattice shape and a local labelling.
pub fn validate_posetal_object<C: Category>(c: &C, x: &LabelledObject<C>) -> Result<PosetalObject<C>> {
    let lattice = detect_lattice(x.shape())?;
    lattice.require_distributive()?;
    let locality = is_local(c, &lattice, x)?;
    if !locality.verdict {
        return Err(Error::NotLocal(Box::new(locality)));
    }
    Ok(PosetalObject {
        object: x.clone(),
        lattice,
        locality,
    })
}

/// A labelled morphism whose shape map is a lattice homomorphism.
pub struct PosetalMorphism<C: Category> {
    pub morphism: LabelledMorphism<C>,
}

/// Requires the shape map to preserve binary meets, joins and both bounds.
/// The relabelling is only required to be natural.
pub fn validate_posetal_morphism<C: Category>(m: &LabelledMorphism<C>) -> Result<PosetalMorphism<C>> {
    let source = detect_lattice(m.source().shape())?;
    let target = detect_lattice(m.target().shape())?;
    if let Some((a, b, op)) = lattice_hom_failure(m.shape_map(), &source, &target) {
        return Err(Error::NotLatticeHom {
            a: source.carrier().name(a).into(),
            b: source.carrier().name(b).into(),
            op,
        });
    }
    Ok(PosetalMorphism {
        morphism: m.clone(),
    })
}

/// Labels for some intervals of a shape, with a morphism for every cover
/// between stored intervals.
pub struct PartialLabelling<C: Category> {
    pub objects: BTreeMap<usize, C::Obj>,
    /// `(coarse, fine) -> label`, for covers of the stored sub-poset of `[P]`.
    pub arrows: HashMap<(usize, usize), C::Mor>,
}

/// A labelling completed from stored data, with the intervals that were
/// filled in and the locality check of the result.
pub struct PullbackFill<C: Category> {
    pub object: LabelledObject<C>,
    pub filled: Vec<usize>,
    pub locality: Option<LocalityReport>,
}

/// Completes a partial labelling: every unstored interval `i` is labelled
/// by the limit of the stored intervals finer than `i`, and every arrow out
/// of it is the induced cone map. Stored labels are kept as given. When the
/// shape is a lattice the result is checked for locality.
///
/// Filling arbitrary stored data this way need not give a local labelling
/// on a non-chain lattice; the report says so rather than failing.
pub fn pullback_fill<C: Category>(
    l: &Labelled<C>,
    shape: &FinPoset,
    stored: &PartialLabelling<C>,
) -> Result<PullbackFill<C>> {
    let c = l.base();
    let ip = interval_poset(shape);
    let keep: Vec<usize> = stored.objects.keys().copied().collect();
    if let Some(&k) = keep.iter().find(|&&k| k >= ip.len()) {
        return Err(Error::UnknownElement(format!("interval index {k}")));
    }
    let sub = ip.carrier().subposet(&keep);
    let sub_cat = FinCat::thin(&sub);
    let mut gens = HashMap::new();
    for (&(i, j), m) in &stored.arrows {
        let (Some(a), Some(b)) = (keep.iter().position(|&k| k == i), keep.iter().position(|&k| k == j)) else {
            return Err(Error::Mismatch(format!("arrow {} ⊇ {} leaves the stored intervals", ip.name(i), ip.name(j))));
        };
        let arrow = sub_cat.thin_arrow(a, b).ok_or_else(|| {
            Error::Mismatch(format!("{} does not contain {}", ip.name(i), ip.name(j)))
        })?;
        gens.insert(arrow, m.clone());
    }
    let stored_functor = Functor::from_generators(
        c,
        sub_cat.clone(),
        keep.iter().map(|k| stored.objects[k].clone()).collect(),
        &gens,
    )?;
    let position: HashMap<usize, usize> = keep.iter().enumerate().map(|(p, &k)| (k, p)).collect();
    let finer = |i: usize| -> Vec<usize> { keep.iter().copied().filter(|&s| ip.contains(i, s)).collect() };

    // limit cone over the stored intervals below each unstored interval
    let mut cones: HashMap<usize, (Vec<usize>, Cone<C>)> = HashMap::new();
    for i in 0..ip.len() {
        if position.contains_key(&i) {
            continue;
        }
        let below = finer(i);
        let positions: Vec<usize> = below.iter().map(|s| position[s]).collect();
        let comma = sub.subposet(&positions);
        let comma_cat = FinCat::thin(&comma);
        let objects = positions.iter().map(|&p| stored_functor.object(p).clone()).collect();
        let arrows = comma_cat
            .arrows()
            .map(|a| {
                let (s, t) = (positions[comma_cat.arrow_source(a)], positions[comma_cat.arrow_target(a)]);
                stored_functor.arrow(sub_cat.thin_arrow(s, t).expect("sub-poset arrow")).clone()
            })
            .collect();
        let d = Functor::new(comma_cat, objects, arrows);
        cones.insert(i, (below, c.limit(&d)?));
    }
    let label = |i: usize| -> C::Obj {
        match position.get(&i) {
            Some(&p) => stored_functor.object(p).clone(),
            None => cones[&i].1.apex.clone(),
        }
    };
    // leg from the label at `i` to the stored label at `s`, for `i ⊇ s`
    let leg = |i: usize, s: usize| -> C::Mor {
        match position.get(&i) {
            Some(&p) => stored_functor
                .arrow(sub_cat.thin_arrow(p, position[&s]).expect("stored arrow"))
                .clone(),
            None => {
                let (below, cone) = &cones[&i];
                cone.legs[below.iter().position(|&b| b == s).expect("finer stored interval")].clone()
            }
        }
    };
    let cat = ip.category();
    let mut arrows = Vec::with_capacity(cat.arrow_count());
    for a in cat.arrows() {
        let (i, j) = (cat.arrow_source(a), cat.arrow_target(a));
        let m = if i == j {
            c.identity(&label(i))
        } else if position.contains_key(&j) {
            leg(i, j)
        } else {
            let (below, target) = &cones[&j];
            let probe = Cone::new(label(i), below.iter().map(|&s| leg(i, s)).collect());
            c.factor(target, &probe)?
        };
        arrows.push(m);
    }
    let labelling = Functor::new(cat.clone(), (0..ip.len()).map(label).collect(), arrows);
    let object = l.make_object(shape, labelling)?;
    let locality = match detect_lattice(shape) {
        Ok(lattice) => Some(is_local(c, &lattice, &object)?),
        Err(_) => None,
    };
    let mut filled: Vec<usize> = cones.keys().copied().collect();
    filled.sort_unstable();
    Ok(PullbackFill {
        object,
        filled,
        locality,
    })
}

/// Intervals of `ip` whose labels a posetal labelling determines from the
/// rest: the pullback corners of proper atomic squares.
pub fn filler_intervals(lattice: &Lattice, ip: &IntervalPoset) -> Vec<usize> {
    let mut out: Vec<usize> = atomic_cospans_in(lattice, ip, false)
        .iter()
        .map(|c| ip.index(c.pullback).expect("interval"))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{FinSet, FinSetMor, FinSetObj};
    use crate::lattice::downset_lattice;
    use crate::poset::MonotoneMap;

    fn set(n: usize) -> FinSetObj {
        FinSetObj::of_size(n)
    }

    fn diamond() -> Lattice {
        downset_lattice(&FinPoset::antichain(2)).lattice
    }

    /// Degenerate intervals labelled 1, non-degenerate ones by the stored
    /// data on the edges and filled below.
    fn filled_diamond(edge: usize) -> PullbackFill<FinSet> {
        let l = Labelled::new(FinSet);
        let d = diamond();
        let ip = interval_poset(d.carrier());
        let mut objects = BTreeMap::new();
        for k in ip.degenerate() {
            objects.insert(k, set(1));
        }
        for k in ip.non_degenerate() {
            let i = ip.interval(k);
            if d.carrier().covers_pair(i.lo, i.hi) {
                objects.insert(k, set(edge));
            }
        }
        let mut arrows = HashMap::new();
        for (&k, x) in &objects {
            for (&j, y) in &objects {
                if k != j && ip.contains(k, j) && ip.carrier().covers_pair(k, j) {
                    arrows.insert((k, j), FinSetMor::constant(x, y, 0).unwrap());
                }
            }
        }
        pullback_fill(&l, d.carrier(), &PartialLabelling { objects, arrows }).unwrap()
    }

    /// The diamond labelling with points and two opposite edges labelled 1,
    /// the other two edges and the whole interval labelled 2.
    fn local_example(top: usize) -> LabelledObject<FinSet> {
        let l = Labelled::new(FinSet);
        let ip = interval_poset(diamond().carrier());
        let at = |a: &str, b: &str| ip.index_by_names(a, b).unwrap();
        let mut labels = vec![set(1); ip.len()];
        let (e2, e4, whole) = (at("{}", "{1}"), at("{0}", "{0,1}"), at("{}", "{0,1}"));
        labels[e2] = set(2);
        labels[e4] = set(2);
        labels[whole] = set(top);
        let mut covers = HashMap::new();
        for (i, j) in ip.carrier().covers() {
            let m = if i == whole && labels[j].len() == top {
                FinSet.identity(&labels[j])
            } else {
                FinSetMor::constant(&labels[i], &labels[j], 0).unwrap()
            };
            covers.insert((i, j), m);
        }
        l.object_from_covers(diamond().carrier(), labels, &covers).unwrap()
    }

    #[test]
    fn example_labelling_is_local() {
        let x = local_example(2);
        let report = is_local(&FinSet, &diamond(), &x).unwrap();
        assert!(report.verdict);
        assert_eq!(report.witnesses.len(), 4);
        validate_posetal_object(&FinSet, &x).unwrap();
    }

    #[test]
    fn collapsed_top_fails_every_square() {
        let x = local_example(1);
        let report = is_local(&FinSet, &diamond(), &x).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.failures().count(), 4);
        assert!(matches!(validate_posetal_object(&FinSet, &x), Err(Error::NotLocal(_))));
    }

    #[test]
    fn fill_keeps_stored_labels() {
        let fill = filled_diamond(1);
        assert!(fill.locality.unwrap().verdict);
        let ip = fill.object.intervals();
        let whole = ip.index_by_names("{}", "{0,1}").unwrap();
        assert_eq!(fill.filled, vec![whole]);
        assert_eq!(fill.object.label(whole).len(), 1);
    }

    #[test]
    fn fill_of_a_cycle_is_not_local() {
        // the whole interval gets the limit of the 4-cycle of edges, which is
        // bigger than each square's pullback
        let fill = filled_diamond(2);
        let ip = fill.object.intervals();
        let whole = ip.index_by_names("{}", "{0,1}").unwrap();
        assert_eq!(fill.object.label(whole).len(), 16);
        assert!(!fill.locality.unwrap().verdict);
    }

    #[test]
    fn chains_are_vacuously_local() {
        let l = Labelled::new(FinSet);
        let x = l.constant_object(&FinPoset::chain(2), set(2));
        let r = is_local(&FinSet, &detect_lattice(&FinPoset::chain(2)).unwrap(), &x).unwrap();
        assert!(r.verdict && r.witnesses.is_empty());
        // from three heights on, overlapping intervals meet in a square
        let y = l.constant_object(&FinPoset::chain(3), set(2));
        let r = is_local(&FinSet, &detect_lattice(&FinPoset::chain(3)).unwrap(), &y).unwrap();
        assert!(r.verdict);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn discrete_shape_is_not_a_lattice() {
        let l = Labelled::new(FinSet);
        let x = l.constant_object(&FinPoset::antichain(2), set(1));
        assert!(matches!(validate_posetal_object(&FinSet, &x), Err(Error::NotALattice(_))));
        let one = l.constant_object(&FinPoset::chain(1), set(3));
        validate_posetal_object(&FinSet, &one).unwrap();
    }

    #[test]
    fn morphism_checks() {
        let l = Labelled::new(FinSet);
        let d = diamond();
        let x = l.constant_object(d.carrier(), set(1));
        validate_posetal_morphism(&l.identity(&x)).unwrap();
        let c = l.constant_object(&FinPoset::chain(2), set(1));
        let names = d.carrier().names().to_vec();
        let embed = MonotoneMap::from_names(
            &FinPoset::chain(2),
            d.carrier(),
            &[("0", names[0].as_str()), ("1", names[3].as_str())],
        )
        .unwrap();
        let comps = vec![FinSet.identity(&set(1)); 3];
        let m = l.make_morphism(&c, &x, embed, comps.clone()).unwrap();
        validate_posetal_morphism(&m).unwrap();
        let to_atom = MonotoneMap::from_names(
            &FinPoset::chain(2),
            d.carrier(),
            &[("0", names[0].as_str()), ("1", names[1].as_str())],
        )
        .unwrap();
        let bad = l.make_morphism(&c, &x, to_atom, comps).unwrap();
        assert!(matches!(validate_posetal_morphism(&bad), Err(Error::NotLatticeHom { .. })));
        let swap = MonotoneMap::from_names(
            d.carrier(),
            d.carrier(),
            &[
                (names[0].as_str(), names[0].as_str()),
                (names[1].as_str(), names[2].as_str()),
                (names[2].as_str(), names[1].as_str()),
                (names[3].as_str(), names[3].as_str()),
            ],
        )
        .unwrap();
        let comps = vec![FinSet.identity(&set(1)); 9];
        validate_posetal_morphism(&l.make_morphism(&x, &x, swap, comps).unwrap()).unwrap();
    }
}
