//! Interval posets, their functorial action, and atomic cospans.
//!
//! Intervals are ordered by precision: `[a,a'] ⊇ [b,b']` iff `a <= b` and
//! `b' <= a'`. In the carrier poset `i <= j` means `i ⊇ j`, so arrows of the
//! thin category run from coarse to fine, meets are coarser and joins are
//! finer.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::category::FinCat;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poset::{FinPoset, MonotoneMap};

/// `[lo, hi]` with `lo <= hi`, as element indices of the base poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    pub fn point(a: usize) -> Self {
        Interval { lo: a, hi: a }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Precision order `self ⊇ other` in `base`.
    pub fn contains(&self, base: &FinPoset, other: &Interval) -> bool {
        base.le(self.lo, other.lo) && base.le(other.hi, self.hi)
    }
}

struct Data {
    base: FinPoset,
    intervals: Vec<Interval>,
    index: HashMap<Interval, usize>,
    carrier: FinPoset,
    category: FinCat,
}

/// All intervals of a finite poset under the precision order, listed by
/// `(lo name, hi name)`.
#[derive(Clone)]
pub struct IntervalPoset {
    data: Arc<Data>,
}

impl PartialEq for IntervalPoset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.base == other.data.base
    }
}

impl Eq for IntervalPoset {}

impl fmt::Debug for IntervalPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.carrier.names()).finish()
    }
}

impl IntervalPoset {
    pub fn base(&self) -> &FinPoset {
        &self.data.base
    }

    /// The intervals as a poset in which `i <= j` iff `i ⊇ j`.
    pub fn carrier(&self) -> &FinPoset {
        &self.data.carrier
    }

    /// The thin category of the carrier, on which labellings live.
    pub fn category(&self) -> &FinCat {
        &self.data.category
    }

    pub fn len(&self) -> usize {
        self.data.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.data.intervals
    }

    pub fn interval(&self, k: usize) -> Interval {
        self.data.intervals[k]
    }

    pub fn index(&self, i: Interval) -> Option<usize> {
        self.data.index.get(&i).copied()
    }

    /// Index of `[lo, hi]` by element names.
    pub fn index_by_names(&self, lo: &str, hi: &str) -> Result<usize> {
        let b = self.base();
        let l = b.index_of(lo).ok_or_else(|| Error::UnknownElement(lo.into()))?;
        let h = b.index_of(hi).ok_or_else(|| Error::UnknownElement(hi.into()))?;
        self.index(Interval::new(l, h))
            .ok_or_else(|| Error::UnknownElement(format!("[{lo},{hi}]")))
    }

    /// `[lo,hi]` with element names.
    pub fn name(&self, k: usize) -> &str {
        self.data.carrier.name(k)
    }

    /// `i ⊇ j` by index.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.data.carrier.le(i, j)
    }

    pub fn degenerate(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.data.intervals[k].is_degenerate())
    }

    pub fn non_degenerate(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| !self.data.intervals[k].is_degenerate())
    }

    /// Index map of `[f]` between interval posets of `f`'s endpoints.
    pub fn map_indices(&self, f: &MonotoneMap, target: &IntervalPoset) -> Vec<usize> {
        debug_assert!(f.source() == self.base() && f.target() == target.base());
        self.intervals()
            .iter()
            .map(|i| {
                target
                    .index(Interval::new(f.apply(i.lo), f.apply(i.hi)))
                    .expect("monotone maps send intervals to intervals")
            })
            .collect()
    }
}

/// `[P]`: every comparable pair of `p` under the precision order.
pub fn interval_poset(p: &FinPoset) -> IntervalPoset {
    let mut intervals: Vec<Interval> = Vec::new();
    for a in p.elements() {
        for b in p.elements() {
            if p.le(a, b) {
                intervals.push(Interval::new(a, b));
            }
        }
    }
    intervals.sort_by(|x, y| {
        (p.name(x.lo), p.name(x.hi)).cmp(&(p.name(y.lo), p.name(y.hi)))
    });
    let n = intervals.len();
    let index = intervals.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let names = intervals
        .iter()
        .map(|i| format!("[{},{}]", p.name(i.lo), p.name(i.hi)))
        .collect();
    let mut leq = vec![false; n * n];
    for (x, i) in intervals.iter().enumerate() {
        for (y, j) in intervals.iter().enumerate() {
            leq[x * n + y] = i.contains(p, j);
        }
    }
    let carrier = FinPoset::from_closed(crate::names::distinct(names), leq);
    let category = FinCat::thin(&carrier);
    IntervalPoset {
        data: Arc::new(Data {
            base: p.clone(),
            intervals,
            index,
            carrier,
            category,
        }),
    }
}

/// `[f]: [P] -> [Q]`, `[a,a'] ↦ [f(a), f(a')]`.
pub fn interval_map(f: &MonotoneMap) -> MonotoneMap {
    interval_map_between(f, &interval_poset(f.source()), &interval_poset(f.target()))
}

/// `[f]` between already built interval posets.
pub fn interval_map_between(
    f: &MonotoneMap,
    source: &IntervalPoset,
    target: &IntervalPoset,
) -> MonotoneMap {
    MonotoneMap::new_unchecked(
        source.carrier().clone(),
        target.carrier().clone(),
        source.map_indices(f, target),
    )
}

/// `[a ∧ b, a' ∨ b']`, the greatest lower bound in the carrier.
pub fn interval_meet(l: &Lattice, i: Interval, j: Interval) -> Interval {
    Interval::new(l.meet(i.lo, j.lo), l.join(i.hi, j.hi))
}

/// `[a ∨ b, a' ∧ b']` when `a ∨ b <= a' ∧ b'`, the least upper bound in the
/// carrier; `None` when the two intervals have no common refinement.
pub fn interval_join(l: &Lattice, i: Interval, j: Interval) -> Option<Interval> {
    let (lo, hi) = (l.join(i.lo, j.lo), l.meet(i.hi, j.hi));
    l.carrier().le(lo, hi).then_some(Interval::new(lo, hi))
}

/// Whether `left -> vertex <- right` is atomic, i.e. `vertex` is the join of
/// the feet.
pub fn is_atomic_cospan(l: &Lattice, left: Interval, vertex: Interval, right: Interval) -> Result<bool> {
    let p = l.carrier();
    if !left.contains(p, &vertex) || !right.contains(p, &vertex) {
        return Err(Error::NotACospan(format!(
            "[{},{}] is not contained in both feet",
            p.name(vertex.lo),
            p.name(vertex.hi)
        )));
    }
    Ok(interval_join(l, left, right) == Some(vertex))
}

/// An atomic cospan together with its pullback, the meet of the feet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AtomicCospan {
    pub left: Interval,
    pub vertex: Interval,
    pub right: Interval,
    pub pullback: Interval,
}

impl AtomicCospan {
    /// Whether the square is proper: the feet are incomparable, so neither
    /// side collapses onto the vertex.
    pub fn is_proper(&self, base: &FinPoset) -> bool {
        !self.left.contains(base, &self.right) && !self.right.contains(base, &self.left)
    }
}

/// Atomic cospans of `[L]`, one per unordered pair of feet. By default only
/// proper squares (incomparable feet) are listed; `include_degenerate` adds
/// comparable and equal feet, whose squares commute trivially.
pub fn atomic_cospans(l: &Lattice, include_degenerate: bool) -> Vec<AtomicCospan> {
    let ip = interval_poset(l.carrier());
    atomic_cospans_in(l, &ip, include_degenerate)
}

/// [`atomic_cospans`] over an interval poset built from `l`'s carrier,
/// listed in index order of the feet.
pub fn atomic_cospans_in(l: &Lattice, ip: &IntervalPoset, include_degenerate: bool) -> Vec<AtomicCospan> {
    let mut out = Vec::new();
    for x in 0..ip.len() {
        for y in x..ip.len() {
            let comparable = ip.contains(x, y) || ip.contains(y, x);
            if comparable && !include_degenerate {
                continue;
            }
            let (left, right) = (ip.interval(x), ip.interval(y));
            if let Some(vertex) = interval_join(l, left, right) {
                out.push(AtomicCospan {
                    left,
                    vertex,
                    right,
                    pullback: interval_meet(l, left, right),
                });
            }
        }
    }
    out
}

/// The order isomorphism `[P × Q] ≅ [P] × [Q]` with its verified inverse.
#[derive(Clone, Debug)]
pub struct ProductIntervalIso {
    pub forward: MonotoneMap,
    pub backward: MonotoneMap,
}

/// Builds `[(a,b),(a',b')] ↦ ([a,a'],[b,b'])` and its inverse and checks
/// both are monotone and mutually inverse.
pub fn product_interval_iso(p: &FinPoset, q: &FinPoset) -> Result<ProductIntervalIso> {
    let (pq, _, _) = p.product(q);
    let m = q.len();
    let ipq = interval_poset(&pq);
    let (ip, iq) = (interval_poset(p), interval_poset(q));
    let (prod, _, _) = ip.carrier().product(iq.carrier());
    let k = iq.len();
    let forward: Vec<usize> = ipq
        .intervals()
        .iter()
        .map(|i| {
            let x = ip.index(Interval::new(i.lo / m, i.hi / m)).expect("projection of an interval");
            let y = iq.index(Interval::new(i.lo % m, i.hi % m)).expect("projection of an interval");
            x * k + y
        })
        .collect();
    let backward: Vec<usize> = (0..prod.len())
        .map(|z| {
            let (x, y) = (ip.interval(z / k), iq.interval(z % k));
            ipq.index(Interval::new(x.lo * m + y.lo, x.hi * m + y.hi))
                .expect("pair of intervals is an interval")
        })
        .collect();
    let violation = |what: &str| Error::InternalInvariantViolation(format!("product interval iso: {what}"));
    let forward = MonotoneMap::new(ipq.carrier().clone(), prod.clone(), forward)
        .map_err(|_| violation("forward map not monotone"))?;
    let backward = MonotoneMap::new(prod, ipq.carrier().clone(), backward)
        .map_err(|_| violation("backward map not monotone"))?;
    if !forward.then(&backward)?.is_identity() || !backward.then(&forward)?.is_identity() {
        return Err(violation("maps are not mutually inverse"));
    }
    Ok(ProductIntervalIso { forward, backward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{detect_lattice, downset_lattice};
    use crate::poset::validate_poset;

    fn example() -> FinPoset {
        validate_poset(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "e")],
        )
        .unwrap()
    }

    fn diamond() -> Lattice {
        downset_lattice(&FinPoset::antichain(2)).lattice
    }

    fn iv(l: &Lattice, lo: &str, hi: &str) -> Interval {
        let p = l.carrier();
        Interval::new(p.index_of(lo).unwrap(), p.index_of(hi).unwrap())
    }

    #[test]
    fn counts() {
        assert_eq!(interval_poset(&diamond().carrier().clone()).len(), 9);
        assert_eq!(interval_poset(&FinPoset::chain(2)).len(), 3);
        assert_eq!(interval_poset(&example()).len(), 14);
        for n in 0..6 {
            assert_eq!(interval_poset(&FinPoset::chain(n)).len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn chain2_order() {
        let ip = interval_poset(&FinPoset::chain(2));
        assert_eq!(ip.carrier().names(), ["[0,0]", "[0,1]", "[1,1]"]);
        // the wide interval is coarsest
        assert!(ip.contains(1, 0) && ip.contains(1, 2));
        assert!(!ip.contains(0, 2));
    }

    #[test]
    fn map_of_example() {
        let p = validate_poset(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap();
        let f = MonotoneMap::from_names(&FinPoset::chain(2), &p, &[("0", "a"), ("1", "d")]).unwrap();
        let m = interval_map(&f);
        let ip = interval_poset(&FinPoset::chain(2));
        assert_eq!(m.target().name(m.apply(ip.index_by_names("0", "1").unwrap())), "[a,d]");
        assert!(interval_map(&MonotoneMap::identity(&p)).is_identity());
    }

    #[test]
    fn meets_and_joins() {
        let l = diamond();
        let (x, y) = (iv(&l, "{0}", "{0}"), iv(&l, "{1}", "{1}"));
        assert_eq!(interval_meet(&l, x, y), iv(&l, "{}", "{0,1}"));
        assert_eq!(interval_join(&l, x, y), None);
        let (i, j) = (iv(&l, "{}", "{0}"), iv(&l, "{0}", "{0,1}"));
        assert_eq!(interval_join(&l, i, j), Some(x));
        assert_eq!(interval_meet(&l, x, x), x);
        let c = detect_lattice(&FinPoset::chain(2)).unwrap();
        assert_eq!(interval_meet(&c, Interval::point(0), Interval::point(1)), Interval::new(0, 1));
    }

    #[test]
    fn atomicity() {
        let l = diamond();
        let x = iv(&l, "{0}", "{0}");
        assert!(is_atomic_cospan(&l, iv(&l, "{}", "{0}"), x, iv(&l, "{0}", "{0,1}")).unwrap());
        let e = detect_lattice(&example()).unwrap();
        let ex = |a: &str, b: &str| iv(&e, a, b);
        assert!(!is_atomic_cospan(&e, ex("b", "e"), ex("e", "e"), ex("c", "e")).unwrap());
        assert!(matches!(
            is_atomic_cospan(&e, ex("b", "b"), ex("e", "e"), ex("c", "e")),
            Err(Error::NotACospan(_))
        ));
    }

    #[test]
    fn square_counts() {
        assert_eq!(atomic_cospans(&diamond(), false).len(), 4);
        assert_eq!(atomic_cospans(&detect_lattice(&FinPoset::chain(2)).unwrap(), false).len(), 0);
        assert_eq!(atomic_cospans(&detect_lattice(&FinPoset::chain(1)).unwrap(), false).len(), 0);
        for c in atomic_cospans(&diamond(), true) {
            assert_eq!(interval_join(&diamond(), c.left, c.right), Some(c.vertex));
        }
    }

    #[test]
    fn product_iso() {
        let c2 = FinPoset::chain(2);
        let iso = product_interval_iso(&c2, &c2).unwrap();
        assert_eq!(iso.forward.source().len(), 9);
        assert_eq!(iso.forward.target().len(), 9);
        product_interval_iso(&example(), &FinPoset::antichain(2)).unwrap();
        product_interval_iso(&c2, &FinPoset::chain(1)).unwrap();
    }
}
