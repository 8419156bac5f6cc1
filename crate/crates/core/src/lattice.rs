//! Lattice structure on finite posets and Birkhoff duality.
//!
//! Down-sets of `P` are in bijection with monotone maps `P -> 2` (the
//! preimage of the bottom element), so `downset_lattice` realises the
//! dualising functor `FPos(-, 2)` on objects; `join_irreducibles` realises
//! its inverse.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::poset::{FinPoset, MonotoneMap};

/// Meet and join tables of a finite (hence bounded) lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    carrier: FinPoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    distributive: bool,
}

fn greatest_of(p: &FinPoset, set: &[usize]) -> Option<usize> {
    set.iter()
        .copied()
        .find(|&g| set.iter().all(|&x| p.le(x, g)))
}

fn least_of(p: &FinPoset, set: &[usize]) -> Option<usize> {
    set.iter()
        .copied()
        .find(|&l| set.iter().all(|&x| p.le(l, x)))
}

/// Greatest lower bound of `{a, b}` by exhaustive search.
pub fn glb(p: &FinPoset, a: usize, b: usize) -> Option<usize> {
    let lower: Vec<usize> = p.elements().filter(|&x| p.le(x, a) && p.le(x, b)).collect();
    greatest_of(p, &lower)
}

/// Least upper bound of `{a, b}` by exhaustive search.
pub fn lub(p: &FinPoset, a: usize, b: usize) -> Option<usize> {
    let upper: Vec<usize> = p.elements().filter(|&x| p.le(a, x) && p.le(b, x)).collect();
    least_of(p, &upper)
}

impl Lattice {
    pub fn carrier(&self) -> &FinPoset {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    /// First triple violating either distributive law.
    pub fn distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l1 = self.meet(a, self.join(b, c));
                    let r1 = self.join(self.meet(a, b), self.meet(a, c));
                    let l2 = self.join(a, self.meet(b, c));
                    let r2 = self.meet(self.join(a, b), self.join(a, c));
                    if l1 != r1 || l2 != r2 {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Fails with `NotDistributive` naming a witness triple.
    pub fn require_distributive(&self) -> Result<()> {
        match self.distributivity_failure() {
            None => Ok(()),
            Some((a, b, c)) => Err(Error::NotDistributive(
                self.carrier.name(a).into(),
                self.carrier.name(b).into(),
                self.carrier.name(c).into(),
            )),
        }
    }
}

/// Detects lattice structure on `p`: every pair needs a meet and a join, and
/// the lattice must be bounded (so the empty poset is rejected).
pub fn detect_lattice(p: &FinPoset) -> Result<Lattice> {
    let n = p.len();
    let bottom = p
        .bottom()
        .ok_or_else(|| Error::NotALattice("no least element".into()))?;
    let top = p
        .top()
        .ok_or_else(|| Error::NotALattice("no greatest element".into()))?;
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in a..n {
            let m = glb(p, a, b).ok_or_else(|| {
                Error::NotALattice(format!("`{}` and `{}` have no meet", p.name(a), p.name(b)))
            })?;
            let j = lub(p, a, b).ok_or_else(|| {
                Error::NotALattice(format!("`{}` and `{}` have no join", p.name(a), p.name(b)))
            })?;
            meet[a * n + b] = m;
            meet[b * n + a] = m;
            join[a * n + b] = j;
            join[b * n + a] = j;
        }
    }
    let mut lattice = Lattice {
        carrier: p.clone(),
        meet,
        join,
        bottom,
        top,
        distributive: false,
    };
    lattice.distributive = lattice.distributivity_failure().is_none();
    Ok(lattice)
}

/// The first pair at which `f` fails to preserve a binary meet or join, or
/// `(⊥, ⊥, "bottom")` / `(⊤, ⊤, "top")` when a bound is not preserved.
pub fn lattice_hom_failure(
    f: &MonotoneMap,
    source: &Lattice,
    target: &Lattice,
) -> Option<(usize, usize, &'static str)> {
    if f.apply(source.bottom()) != target.bottom() {
        return Some((source.bottom(), source.bottom(), "bottom"));
    }
    if f.apply(source.top()) != target.top() {
        return Some((source.top(), source.top(), "top"));
    }
    let n = source.len();
    for a in 0..n {
        for b in 0..n {
            if f.apply(source.meet(a, b)) != target.meet(f.apply(a), f.apply(b)) {
                return Some((a, b, "meet"));
            }
            if f.apply(source.join(a, b)) != target.join(f.apply(a), f.apply(b)) {
                return Some((a, b, "join"));
            }
        }
    }
    None
}

/// Checks whether `f` preserves binary meets and joins and both bounds,
/// against known lattice structure on both ends. Binary preservation alone
/// does not force the bounds (a constant map out of a one-element lattice
/// preserves every binary operation).
pub fn is_lattice_hom_between(f: &MonotoneMap, source: &Lattice, target: &Lattice) -> bool {
    lattice_hom_failure(f, source, target).is_none()
}

/// Lattice homomorphism test. Detects lattice structure on both ends and
/// fails with `NotALattice` when either is missing.
pub fn is_lattice_hom(f: &MonotoneMap) -> Result<bool> {
    let source = detect_lattice(f.source())?;
    let target = detect_lattice(f.target())?;
    Ok(is_lattice_hom_between(f, &source, &target))
}

/// The lattice of down-closed subsets of a poset, with the embedding of each
/// element as its principal down-set.
#[derive(Clone, Debug)]
pub struct DownsetLattice {
    pub lattice: Lattice,
    /// Membership vector of each lattice element.
    pub downsets: Vec<Vec<bool>>,
    /// `principal[x]` is the lattice index of the down-set of `x`.
    pub principal: Vec<usize>,
}

fn downset_name(p: &FinPoset, members: &[bool]) -> String {
    let inner: Vec<&str> = p
        .elements()
        .filter(|&a| members[a])
        .map(|a| p.name(a))
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// Down-sets of `p` ordered by inclusion; meets are intersections and joins
/// are unions.
pub fn downset_lattice(p: &FinPoset) -> DownsetLattice {
    let n = p.len();
    // grow down-sets one minimal element of the complement at a time
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut frontier = vec![vec![false; n]];
    seen.insert(vec![false; n]);
    while let Some(d) = frontier.pop() {
        for x in p.elements() {
            if d[x] {
                continue;
            }
            if p.elements().all(|y| !p.lt(y, x) || d[y]) {
                let mut e = d.clone();
                e[x] = true;
                if seen.insert(e.clone()) {
                    frontier.push(e);
                }
            }
        }
    }
    let mut downsets: Vec<Vec<bool>> = seen.into_iter().collect();
    downsets.sort_by_key(|d| {
        let members: Vec<usize> = d.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
        (members.len(), members)
    });
    let m = downsets.len();
    let names: Vec<String> = downsets.iter().map(|d| downset_name(p, d)).collect();
    let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
    let mut leq = vec![false; m * m];
    for i in 0..m {
        for j in 0..m {
            leq[i * m + j] = subset(&downsets[i], &downsets[j]);
        }
    }
    let carrier = FinPoset::from_closed(names, leq);
    let find = |set: &[bool]| downsets.iter().position(|d| d.as_slice() == set).unwrap();
    let mut meet = vec![0; m * m];
    let mut join = vec![0; m * m];
    for i in 0..m {
        for j in 0..m {
            let inter: Vec<bool> = downsets[i].iter().zip(&downsets[j]).map(|(&a, &b)| a && b).collect();
            let union: Vec<bool> = downsets[i].iter().zip(&downsets[j]).map(|(&a, &b)| a || b).collect();
            meet[i * m + j] = find(&inter);
            join[i * m + j] = find(&union);
        }
    }
    let principal = p
        .elements()
        .map(|x| {
            let d: Vec<bool> = p.elements().map(|y| p.le(y, x)).collect();
            find(&d)
        })
        .collect();
    let lattice = Lattice {
        carrier,
        meet,
        join,
        bottom: 0,
        top: m - 1,
        distributive: true,
    };
    debug_assert!(lattice.distributivity_failure().is_none());
    DownsetLattice {
        lattice,
        downsets,
        principal,
    }
}

/// Join-irreducible elements of a distributive lattice as a sub-poset, with
/// their lattice indices.
pub fn join_irreducibles(d: &Lattice) -> Result<(FinPoset, Vec<usize>)> {
    d.require_distributive()?;
    let n = d.len();
    let mut keep = Vec::new();
    for j in 0..n {
        if j == d.bottom() {
            continue;
        }
        let reducible = (0..n).any(|a| {
            (0..n).any(|b| a != j && b != j && d.join(a, b) == j)
        });
        if !reducible {
            keep.push(j);
        }
    }
    Ok((d.carrier().subposet(&keep), keep))
}

/// Lattice isomorphism between two lattices, if their carriers are
/// order-isomorphic (order isomorphisms of lattices preserve meets and joins).
pub fn lattice_isomorphism(a: &Lattice, b: &Lattice) -> Option<MonotoneMap> {
    let iso = a.carrier().order_isomorphism(b.carrier())?;
    let map = MonotoneMap::new(a.carrier().clone(), b.carrier().clone(), iso).ok()?;
    debug_assert!(is_lattice_hom_between(&map, a, b));
    Some(map)
}

/// Lattice homomorphism `O(p) -> O(q)` induced by a monotone `g: q -> p`,
/// sending a down-set to its preimage.
pub fn preimage_hom(
    g: &MonotoneMap,
    source: &DownsetLattice,
    target: &DownsetLattice,
) -> MonotoneMap {
    let images = source
        .downsets
        .iter()
        .map(|d| {
            let pre: Vec<bool> = g.images().iter().map(|&y| d[y]).collect();
            target
                .downsets
                .iter()
                .position(|e| *e == pre)
                .expect("preimage of a down-set is a down-set")
        })
        .collect();
    MonotoneMap::new_unchecked(
        source.lattice.carrier().clone(),
        target.lattice.carrier().clone(),
        images,
    )
}

/// Names of the elements in the given lattice positions, sorted.
pub fn element_names(l: &Lattice, elems: &[usize]) -> BTreeSet<String> {
    elems.iter().map(|&e| l.carrier().name(e).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::validate_poset;

    fn diamond() -> FinPoset {
        downset_lattice(&FinPoset::antichain(2)).lattice.carrier().clone()
    }

    fn m3() -> FinPoset {
        validate_poset(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    fn n5() -> FinPoset {
        validate_poset(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("0", "c"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    #[test]
    fn diamond_is_distributive() {
        let xy = validate_poset::<&str>(&["x", "y"], &[]).unwrap();
        let dl = downset_lattice(&xy);
        let l = detect_lattice(dl.lattice.carrier()).unwrap();
        assert!(l.is_distributive());
        assert_eq!(l.carrier().name(l.bottom()), "{}");
        assert_eq!(l.carrier().name(l.top()), "{x,y}");
    }

    #[test]
    fn discrete_pair_is_not_a_lattice() {
        assert!(matches!(
            detect_lattice(&FinPoset::antichain(2)),
            Err(Error::NotALattice(_))
        ));
        assert!(matches!(detect_lattice(&FinPoset::empty()), Err(Error::NotALattice(_))));
    }

    #[test]
    fn m3_and_n5_are_not_distributive() {
        // exhaustive triple check: b ∧ (a ∨ c) = b but (b∧a) ∨ (b∧c) = 0 in M3
        let l = detect_lattice(&m3()).unwrap();
        assert!(!l.is_distributive());
        assert!(!detect_lattice(&n5()).unwrap().is_distributive());
        assert!(matches!(join_irreducibles(&l), Err(Error::NotDistributive(..))));
    }

    #[test]
    fn chains_are_distributive() {
        for n in 1..6 {
            assert!(detect_lattice(&FinPoset::chain(n)).unwrap().is_distributive());
        }
    }

    #[test]
    fn lattice_hom_examples() {
        let d = diamond();
        assert!(is_lattice_hom(&MonotoneMap::identity(&d)).unwrap());

        // chain2 -> diamond, bottom to {} and top to {0,1}
        let c2 = FinPoset::chain(2);
        let f = MonotoneMap::from_names(&c2, &d, &[("0", "{}"), ("1", "{0,1}")]).unwrap();
        assert!(is_lattice_hom(&f).unwrap());

        // both atoms sent to the top: meet({0},{1}) = {} -> 0, but
        // meet(1, 1) = 1
        let g = MonotoneMap::from_names(
            &d,
            &c2,
            &[("{}", "0"), ("{0}", "1"), ("{1}", "1"), ("{0,1}", "1")],
        )
        .unwrap();
        assert!(!is_lattice_hom(&g).unwrap());
        let (src, tgt) = (detect_lattice(&d).unwrap(), detect_lattice(&c2).unwrap());
        let (a, b, op) = lattice_hom_failure(&g, &src, &tgt).unwrap();
        assert_eq!(op, "meet");
        assert_eq!((d.name(a), d.name(b)), ("{0}", "{1}"));

        // collapsing {0} down and {1} up preserves both tables: it is the
        // projection onto the second coordinate
        let h = MonotoneMap::from_names(
            &d,
            &c2,
            &[("{}", "0"), ("{0}", "0"), ("{1}", "1"), ("{0,1}", "1")],
        )
        .unwrap();
        assert!(is_lattice_hom(&h).unwrap());
    }

    #[test]
    fn bounds_are_required() {
        let one = FinPoset::chain(1);
        let c2 = FinPoset::chain(2);
        let f = MonotoneMap::new(one.clone(), c2.clone(), vec![1]).unwrap();
        let (s, t) = (detect_lattice(&one).unwrap(), detect_lattice(&c2).unwrap());
        // every binary meet and join is preserved, the bottom is not
        assert_eq!(lattice_hom_failure(&f, &s, &t), Some((0, 0, "bottom")));
        assert!(!is_lattice_hom_between(&f, &s, &t));
    }

    #[test]
    fn downsets_of_small_posets() {
        let xy = validate_poset::<&str>(&["x", "y"], &[]).unwrap();
        assert_eq!(downset_lattice(&xy).lattice.len(), 4);
        let ab = validate_poset(&["a", "b"], &[("a", "b")]).unwrap();
        let dl = downset_lattice(&ab);
        assert_eq!(dl.lattice.len(), 3);
        assert_eq!(dl.lattice.carrier().names(), &["{}", "{a}", "{a,b}"]);
        assert!(dl.lattice.carrier().is_total());
        let e = downset_lattice(&FinPoset::empty());
        assert_eq!(e.lattice.len(), 1);
    }

    #[test]
    fn join_irreducible_examples() {
        let (ji, idx) = join_irreducibles(&detect_lattice(&diamond()).unwrap()).unwrap();
        assert_eq!(ji.len(), 2);
        assert!(ji.is_isomorphic(&FinPoset::antichain(2)));
        assert_eq!(idx.len(), 2);

        for n in 1..6 {
            let (ji, _) = join_irreducibles(&detect_lattice(&FinPoset::chain(n + 1)).unwrap()).unwrap();
            assert!(ji.is_isomorphic(&FinPoset::chain(n)));
        }
        let (ji, _) = join_irreducibles(&detect_lattice(&FinPoset::chain(1)).unwrap()).unwrap();
        assert!(ji.is_empty());
    }

    #[test]
    fn principal_downsets_embed() {
        let p = validate_poset(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "e")],
        )
        .unwrap();
        let dl = downset_lattice(&p);
        let (ji, idx) = join_irreducibles(&dl.lattice).unwrap();
        assert!(ji.is_isomorphic(&p));
        let mut principal = dl.principal.clone();
        principal.sort_unstable();
        assert_eq!(principal, idx);
    }
}
