//! Finite posets and monotone maps.
//!
//! Elements are addressed by index; identifiers are carried only for I/O and
//! display. The order is stored as a dense reflexive-transitive matrix.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

struct PosetData {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // leq[a * n + b] is true iff a <= b
    leq: Vec<bool>,
}

/// A finite partially ordered set.
#[derive(Clone)]
pub struct FinPoset {
    data: Arc<PosetData>,
}

impl PartialEq for FinPoset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.names == other.data.names && self.data.leq == other.data.leq)
    }
}

impl Eq for FinPoset {}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.name(a), self.name(b)))
            .collect();
        f.debug_struct("FinPoset")
            .field("elements", &self.data.names)
            .field("covers", &covers)
            .finish()
    }
}

fn transitive_closure(n: usize, leq: &mut [bool]) {
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
}

impl FinPoset {
    /// Builds a poset from identifiers and generating pairs `(a, b)` meaning
    /// `a <= b`. The relation is closed reflexively and transitively.
    pub fn new<I, S, J, T>(elements: I, pairs: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        J: IntoIterator<Item = (T, T)>,
        T: AsRef<str>,
    {
        let names: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![false; n * n];
        for (a, b) in pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            leq[ia * n + ib] = true;
        }
        Self::close(names, leq)
    }

    /// Builds a poset from a (not necessarily closed) relation matrix over
    /// `names`.
    pub fn from_relation(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        assert_eq!(leq.len(), names.len() * names.len());
        Self::close(names, leq)
    }

    fn close(names: Vec<String>, mut leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        transitive_closure(n, &mut leq);
        for a in 0..n {
            for b in (a + 1)..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::CycleError(names[a].clone(), names[b].clone()));
                }
            }
        }
        Ok(Self::from_closed(names, leq))
    }

    /// Caller guarantees `leq` is a closed partial order and names are distinct.
    pub(crate) fn from_closed(names: Vec<String>, leq: Vec<bool>) -> Self {
        debug_assert_eq!(leq.len(), names.len() * names.len());
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        FinPoset {
            data: Arc::new(PosetData { names, index, leq }),
        }
    }

    pub fn empty() -> Self {
        Self::from_closed(Vec::new(), Vec::new())
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                leq[a * n + b] = true;
            }
        }
        Self::from_closed(names, leq)
    }

    /// The discrete poset on `n` elements named `0..n`.
    pub fn antichain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        Self::from_closed(names, leq)
    }

    pub fn len(&self) -> usize {
        self.data.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.data.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn name(&self, a: usize) -> &str {
        &self.data.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.data.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.data.index.get(name).copied()
    }

    pub(crate) fn relation(&self) -> &[bool] {
        &self.data.leq
    }

    /// `b` covers `a`: `a < b` with nothing strictly between.
    pub fn covers_pair(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b))
    }

    /// All covering pairs `(a, b)` with `a < b`, in index order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.covers_pair(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn down_set(&self, a: usize) -> Vec<usize> {
        self.elements().filter(|&x| self.le(x, a)).collect()
    }

    pub fn up_set(&self, a: usize) -> Vec<usize> {
        self.elements().filter(|&x| self.le(a, x)).collect()
    }

    pub fn is_down_closed(&self, members: &[bool]) -> bool {
        self.elements()
            .all(|b| !members[b] || self.elements().all(|a| !self.le(a, b) || members[a]))
    }

    /// Elements in an order compatible with `<=` (every element after all
    /// elements below it).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&a| (self.down_set(a).len(), a));
        order
    }

    /// Greatest element, if any.
    pub fn top(&self) -> Option<usize> {
        self.elements().find(|&t| self.elements().all(|x| self.le(x, t)))
    }

    /// Least element, if any.
    pub fn bottom(&self) -> Option<usize> {
        self.elements().find(|&b| self.elements().all(|x| self.le(b, x)))
    }

    /// The induced sub-poset on `keep` (in that order).
    pub fn subposet(&self, keep: &[usize]) -> FinPoset {
        let m = keep.len();
        let names = keep.iter().map(|&a| self.name(a).to_string()).collect();
        let mut leq = vec![false; m * m];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                leq[i * m + j] = self.le(a, b);
            }
        }
        Self::from_closed(names, leq)
    }

    /// Cartesian product with the pointwise order and both projections.
    /// The pair `(a, b)` sits at index `a * other.len() + b`.
    pub fn product(&self, other: &FinPoset) -> (FinPoset, MonotoneMap, MonotoneMap) {
        let (n, m) = (self.len(), other.len());
        let mut names = Vec::with_capacity(n * m);
        for a in self.elements() {
            for b in other.elements() {
                names.push(format!("({},{})", self.name(a), other.name(b)));
            }
        }
        let size = n * m;
        let mut leq = vec![false; size * size];
        for x in 0..size {
            for y in 0..size {
                leq[x * size + y] = self.le(x / m, y / m) && other.le(x % m, y % m);
            }
        }
        let prod = Self::from_closed(names, leq);
        let p1 = MonotoneMap::new_unchecked(prod.clone(), self.clone(), (0..size).map(|x| x / m).collect());
        let p2 = MonotoneMap::new_unchecked(prod.clone(), other.clone(), (0..size).map(|x| x % m).collect());
        (prod, p1, p2)
    }

    /// Same underlying order with identifiers replaced.
    pub fn renamed(&self, names: Vec<String>) -> Result<FinPoset> {
        assert_eq!(names.len(), self.len());
        let mut seen = HashMap::new();
        for n in &names {
            if seen.insert(n.clone(), ()).is_some() {
                return Err(Error::DuplicateElement(n.clone()));
            }
        }
        Ok(Self::from_closed(names, self.data.leq.clone()))
    }

    /// An order isomorphism `self -> other` as an index assignment, if one
    /// exists.
    pub fn order_isomorphism(&self, other: &FinPoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let sig = |p: &FinPoset, a: usize| (p.down_set(a).len(), p.up_set(a).len());
        let mut mine: Vec<_> = self.elements().map(|a| sig(self, a)).collect();
        let mut theirs: Vec<_> = other.elements().map(|a| sig(other, a)).collect();
        let self_sig = mine.clone();
        let other_sig = theirs.clone();
        mine.sort_unstable();
        theirs.sort_unstable();
        if mine != theirs {
            return None;
        }
        let order = self.linear_extension();
        let mut assign = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            k: usize,
            order: &[usize],
            p: &FinPoset,
            q: &FinPoset,
            ps: &[(usize, usize)],
            qs: &[(usize, usize)],
            assign: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let a = order[k];
            for b in q.elements() {
                if used[b] || ps[a] != qs[b] {
                    continue;
                }
                let ok = order[..k].iter().all(|&c| {
                    p.le(a, c) == q.le(b, assign[c]) && p.le(c, a) == q.le(assign[c], b)
                });
                if !ok {
                    continue;
                }
                assign[a] = b;
                used[b] = true;
                if go(k + 1, order, p, q, ps, qs, assign, used) {
                    return true;
                }
                used[b] = false;
                assign[a] = usize::MAX;
            }
            false
        }
        if go(0, &order, self, other, &self_sig, &other_sig, &mut assign, &mut used) {
            Some(assign)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &FinPoset) -> bool {
        self.order_isomorphism(other).is_some()
    }

    pub fn is_total(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.comparable(a, b)))
    }
}

/// A monotone function between finite posets.
#[derive(Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    source: FinPoset,
    target: FinPoset,
    map: Vec<usize>,
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .source
            .elements()
            .map(|a| format!("{}->{}", self.source.name(a), self.target.name(self.map[a])))
            .collect();
        write!(f, "MonotoneMap{:?}", pairs)
    }
}

impl MonotoneMap {
    pub fn new(source: FinPoset, target: FinPoset, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::MalformedMap(format!(
                "{} images for {} elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= target.len()) {
            return Err(Error::MalformedMap(format!("image index {bad} out of range")));
        }
        for a in source.elements() {
            for b in source.elements() {
                if source.le(a, b) && !target.le(map[a], map[b]) {
                    return Err(Error::NotMonotone(
                        source.name(a).to_string(),
                        source.name(b).to_string(),
                    ));
                }
            }
        }
        Ok(MonotoneMap { source, target, map })
    }

    pub(crate) fn new_unchecked(source: FinPoset, target: FinPoset, map: Vec<usize>) -> Self {
        debug_assert!(MonotoneMap::new(source.clone(), target.clone(), map.clone()).is_ok());
        MonotoneMap { source, target, map }
    }

    /// Builds a map from identifier pairs.
    pub fn from_names<S: AsRef<str>>(
        source: &FinPoset,
        target: &FinPoset,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let ia = source
                .index_of(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let ib = target
                .index_of(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            map[ia] = ib;
        }
        if let Some(a) = map.iter().position(|&b| b == usize::MAX) {
            return Err(Error::MalformedMap(format!(
                "no image for `{}`",
                source.name(a)
            )));
        }
        Self::new(source.clone(), target.clone(), map)
    }

    pub fn identity(p: &FinPoset) -> Self {
        MonotoneMap {
            source: p.clone(),
            target: p.clone(),
            map: p.elements().collect(),
        }
    }

    pub fn source(&self) -> &FinPoset {
        &self.source
    }

    pub fn target(&self) -> &FinPoset {
        &self.target
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonotoneMap) -> Result<MonotoneMap> {
        if self.target != next.source {
            return Err(Error::NotComposable(
                "target of first map differs from source of second".into(),
            ));
        }
        Ok(MonotoneMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&b| next.map[b]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.map.iter().enumerate().all(|(a, &b)| a == b)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        self.map.iter().all(|&b| !std::mem::replace(&mut hit[b], true))
    }

    /// Order embedding that is also surjective.
    pub fn is_order_isomorphism(&self) -> bool {
        self.source.len() == self.target.len()
            && self.is_injective()
            && self.source.elements().all(|a| {
                self.source
                    .elements()
                    .all(|b| self.source.le(a, b) == self.target.le(self.map[a], self.map[b]))
            })
    }
}

/// Enumerates monotone maps `source -> target` where element `a` may only be
/// sent into `candidates[a]`. Stops after `limit` maps.
pub fn monotone_maps_restricted(
    source: &FinPoset,
    target: &FinPoset,
    candidates: &[Vec<usize>],
    limit: usize,
) -> Vec<MonotoneMap> {
    let order = source.linear_extension();
    let mut assign = vec![usize::MAX; source.len()];
    let mut out = Vec::new();
    fn go(
        k: usize,
        order: &[usize],
        p: &FinPoset,
        q: &FinPoset,
        candidates: &[Vec<usize>],
        assign: &mut [usize],
        out: &mut Vec<MonotoneMap>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if k == order.len() {
            out.push(MonotoneMap {
                source: p.clone(),
                target: q.clone(),
                map: assign.to_vec(),
            });
            return;
        }
        let a = order[k];
        for &b in &candidates[a] {
            let ok = order[..k].iter().all(|&c| {
                (!p.le(c, a) || q.le(assign[c], b)) && (!p.le(a, c) || q.le(b, assign[c]))
            });
            if ok {
                assign[a] = b;
                go(k + 1, order, p, q, candidates, assign, out, limit);
                if out.len() >= limit {
                    return;
                }
            }
        }
        assign[a] = usize::MAX;
    }
    go(0, &order, source, target, candidates, &mut assign, &mut out, limit);
    out
}

/// All monotone maps `source -> target`.
pub fn monotone_maps(source: &FinPoset, target: &FinPoset) -> Vec<MonotoneMap> {
    let all: Vec<usize> = target.elements().collect();
    let candidates = vec![all; source.len()];
    monotone_maps_restricted(source, target, &candidates, usize::MAX)
}

/// Brute-force validation: builds the poset of the given pairs (closure
/// implied).
pub fn validate_poset<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<FinPoset> {
    FinPoset::new(
        elements.iter().map(|s| s.as_ref().to_string()),
        pairs.iter().map(|(a, b)| (a.as_ref(), b.as_ref())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_poset() -> FinPoset {
        validate_poset(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "e")],
        )
        .unwrap()
    }

    #[test]
    fn two_element_chain() {
        let p = validate_poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(p.lt(0, 1));
        assert!(!p.le(1, 0));
        assert!(p.le(0, 0) && p.le(1, 1));
    }

    #[test]
    fn closure_is_stored() {
        let p = example_poset();
        let (a, e) = (p.index_of("a").unwrap(), p.index_of("e").unwrap());
        assert!(p.le(a, e));
        assert!(!p.comparable(p.index_of("b").unwrap(), p.index_of("c").unwrap()));
        assert_eq!(p.covers().len(), 5);
    }

    #[test]
    fn cycle_rejected() {
        let err = validate_poset(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap_err();
        assert!(matches!(err, Error::CycleError(..)));
    }

    #[test]
    fn duplicate_rejected() {
        let err = validate_poset::<&str>(&["x", "x"], &[]).unwrap_err();
        assert_eq!(err, Error::DuplicateElement("x".into()));
    }

    #[test]
    fn unknown_rejected() {
        let err = validate_poset(&["x"], &[("x", "z")]).unwrap_err();
        assert_eq!(err, Error::UnknownElement("z".into()));
    }

    #[test]
    fn chain_squared_is_diamond() {
        let c2 = FinPoset::chain(2);
        let (d, p1, p2) = c2.product(&c2);
        assert_eq!(d.len(), 4);
        assert_eq!(d.covers().len(), 4);
        assert!(d.bottom().is_some() && d.top().is_some());
        assert_eq!(p1.images(), &[0, 0, 1, 1]);
        assert_eq!(p2.images(), &[0, 1, 0, 1]);
    }

    #[test]
    fn product_with_point_is_iso() {
        let p = example_poset();
        let (q, _, _) = p.product(&FinPoset::chain(1));
        assert!(q.is_isomorphic(&p));
    }

    #[test]
    fn antichain_times_chain_is_two_chains() {
        let (q, _, _) = FinPoset::antichain(2).product(&FinPoset::chain(2));
        // enumerate pairs, compare pointwise: only (i,0) < (i,1)
        let expected = validate_poset(&["p", "q", "r", "s"], &[("p", "q"), ("r", "s")]).unwrap();
        assert!(q.is_isomorphic(&expected));
    }

    #[test]
    fn monotone_counts() {
        // maps from a 2-chain to a 2-chain: 00, 01, 11
        assert_eq!(monotone_maps(&FinPoset::chain(2), &FinPoset::chain(2)).len(), 3);
        // any map out of an antichain is monotone
        assert_eq!(monotone_maps(&FinPoset::antichain(2), &FinPoset::chain(3)).len(), 9);
        assert_eq!(monotone_maps(&FinPoset::empty(), &FinPoset::chain(3)).len(), 1);
        assert_eq!(monotone_maps(&FinPoset::chain(1), &FinPoset::empty()).len(), 0);
    }

    #[test]
    fn non_monotone_rejected() {
        let c = FinPoset::chain(2);
        assert!(matches!(
            MonotoneMap::new(c.clone(), c.clone(), vec![1, 0]),
            Err(Error::NotMonotone(..))
        ));
    }

    #[test]
    fn isomorphism_respects_order() {
        let p = example_poset();
        let q = validate_poset(
            &["v", "w", "x", "y", "z"],
            &[("z", "y"), ("z", "x"), ("y", "w"), ("x", "w"), ("w", "v")],
        )
        .unwrap();
        let iso = p.order_isomorphism(&q).unwrap();
        let m = MonotoneMap::new(p.clone(), q.clone(), iso).unwrap();
        assert!(m.is_order_isomorphism());
        assert!(!p.is_isomorphic(&FinPoset::chain(5)));
    }
}
