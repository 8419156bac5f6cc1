use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{Category, Cone, Functor};
use crate::error::{Error, Result};
use crate::poset::FinPoset;

#[derive(Debug, Clone, PartialEq, Eq)]
struct ArrowData {
    name: String,
    source: usize,
    target: usize,
}

#[derive(Debug, PartialEq, Eq)]
enum Kind {
    Thin {
        poset: FinPoset,
        // lookup[a * n + b] is the arrow a -> b, usize::MAX when a is not below b
        lookup: Vec<usize>,
    },
    Table {
        compose: HashMap<(usize, usize), usize>,
        /// Generator path of each arrow, in application order.
        paths: Vec<Vec<usize>>,
        /// Arrow index of each generating edge.
        edges: Vec<usize>,
    },
}

#[derive(Debug, PartialEq, Eq)]
struct Data {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identities: Vec<usize>,
    kind: Kind,
}

/// A finite category given by explicit data: either the thin category of a
/// finite poset, or a finitely presented category (free on an acyclic graph
/// modulo path equations). Objects and arrows are indices.
#[derive(Clone)]
pub struct FinCat {
    data: Arc<Data>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data == other.data
    }
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.data.objects)
            .field("arrows", &self.data.arrows.len())
            .finish()
    }
}

/// Arrows `a -> a'` whenever `a <= a'`, at most one per ordered pair.
pub fn thin_category(p: &FinPoset) -> FinCat {
    FinCat::thin(p)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

impl FinCat {
    pub fn thin(p: &FinPoset) -> FinCat {
        let n = p.len();
        let mut arrows = Vec::new();
        let mut lookup = vec![usize::MAX; n * n];
        let mut identities = vec![0; n];
        for a in p.elements() {
            for b in p.elements() {
                if p.le(a, b) {
                    lookup[a * n + b] = arrows.len();
                    if a == b {
                        identities[a] = arrows.len();
                    }
                    arrows.push(ArrowData {
                        name: format!("{}->{}", p.name(a), p.name(b)),
                        source: a,
                        target: b,
                    });
                }
            }
        }
        FinCat {
            data: Arc::new(Data {
                objects: p.names().to_vec(),
                arrows,
                identities,
                kind: Kind::Thin {
                    poset: p.clone(),
                    lookup,
                },
            }),
        }
    }

    /// The category freely generated by an acyclic graph, modulo the given
    /// equations between paths. Edges are `(name, source, target)`; a path is
    /// a sequence of edge indices in application order.
    pub fn free<S: AsRef<str>>(
        objects: &[S],
        edges: &[(S, usize, usize)],
        equations: &[(Vec<usize>, Vec<usize>)],
    ) -> Result<FinCat> {
        let n = objects.len();
        for (name, s, t) in edges {
            if *s >= n || *t >= n {
                return Err(Error::UnknownElement(name.as_ref().to_string()));
            }
        }
        // every path, shortest first
        let mut paths: Vec<(usize, usize, Vec<usize>)> = (0..n).map(|o| (o, o, Vec::new())).collect();
        let mut frontier_start = 0;
        loop {
            let frontier_end = paths.len();
            if frontier_start == frontier_end {
                break;
            }
            for i in frontier_start..frontier_end {
                let (s, t, p) = paths[i].clone();
                for (e, (_, es, et)) in edges.iter().enumerate() {
                    if *es == t {
                        let mut q = p.clone();
                        q.push(e);
                        if q.len() > n {
                            return Err(Error::NotAFunctor {
                                arrow: edges[e].0.as_ref().to_string(),
                                reason: "shape graph has a cycle; only acyclic presentations are finite".into(),
                            });
                        }
                        paths.push((s, *et, q));
                    }
                }
            }
            frontier_start = frontier_end;
        }
        let key = |s: usize, p: &[usize]| (s, p.to_vec());
        let index: HashMap<(usize, Vec<usize>), usize> = paths
            .iter()
            .enumerate()
            .map(|(i, (s, _, p))| (key(*s, p), i))
            .collect();
        let lookup_path = |s: usize, p: &[usize]| -> Result<usize> {
            index
                .get(&key(s, p))
                .copied()
                .ok_or_else(|| Error::NotComposable("equation uses a non-path".into()))
        };
        let mut uf = UnionFind((0..paths.len()).collect());
        for (lhs, rhs) in equations {
            let start = |p: &[usize]| p.first().map(|&e| edges[e].1);
            let (sl, sr) = (start(lhs), start(rhs));
            let (Some(sl), Some(sr)) = (sl.or(sr), sr.or(sl)) else {
                continue;
            };
            let a = lookup_path(sl, lhs)?;
            let b = lookup_path(sr, rhs)?;
            if paths[a].0 != paths[b].0 || paths[a].1 != paths[b].1 {
                return Err(Error::NotComposable(
                    "equated paths have different endpoints".into(),
                ));
            }
            uf.union(a, b);
        }
        // congruence closure under pre- and post-composition with edges
        loop {
            let mut changed = false;
            for i in 0..paths.len() {
                let ri = uf.find(i);
                if ri == i {
                    continue;
                }
                let (s, t, p) = paths[i].clone();
                let (_, _, q) = paths[ri].clone();
                for (e, (_, es, et)) in edges.iter().enumerate() {
                    if *es == t {
                        let mut pe = p.clone();
                        pe.push(e);
                        let mut qe = q.clone();
                        qe.push(e);
                        let (a, b) = (index[&key(s, &pe)], index[&key(s, &qe)]);
                        changed |= uf.union(a, b);
                    }
                    if *et == s {
                        let mut ep = vec![e];
                        ep.extend(&p);
                        let mut eq = vec![e];
                        eq.extend(&q);
                        let (a, b) = (index[&key(*es, &ep)], index[&key(*es, &eq)]);
                        changed |= uf.union(a, b);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut class_of = vec![usize::MAX; paths.len()];
        let mut arrows = Vec::new();
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for i in 0..paths.len() {
            let r = uf.find(i);
            if class_of[r] == usize::MAX {
                class_of[r] = arrows.len();
                let (s, t, p) = &paths[r];
                let name = if p.is_empty() {
                    format!("id_{}", objects[*s].as_ref())
                } else {
                    p.iter()
                        .rev()
                        .map(|&e| edges[e].0.as_ref())
                        .collect::<Vec<_>>()
                        .join("∘")
                };
                arrows.push(ArrowData {
                    name,
                    source: *s,
                    target: *t,
                });
                reps.push(p.clone());
            }
            class_of[i] = class_of[r];
        }
        let mut compose = HashMap::new();
        for (f, af) in arrows.iter().enumerate() {
            for (g, ag) in arrows.iter().enumerate() {
                if af.target == ag.source {
                    let mut p = reps[f].clone();
                    p.extend(&reps[g]);
                    compose.insert((g, f), class_of[index[&key(af.source, &p)]]);
                }
            }
        }
        let identities = (0..n).collect::<Vec<_>>().iter().map(|&o| class_of[o]).collect();
        let edge_arrows = (0..edges.len())
            .map(|e| class_of[index[&key(edges[e].1, &[e])]])
            .collect();
        Ok(FinCat {
            data: Arc::new(Data {
                objects: objects.iter().map(|s| s.as_ref().to_string()).collect(),
                arrows,
                identities,
                kind: Kind::Table {
                    compose,
                    paths: reps,
                    edges: edge_arrows,
                },
            }),
        })
    }

    pub fn discrete(n: usize) -> FinCat {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::free::<String>(&names, &[], &[]).expect("discrete shapes are finite")
    }

    pub fn empty() -> FinCat {
        Self::discrete(0)
    }

    pub fn single() -> FinCat {
        Self::discrete(1)
    }

    /// `0 --f--> 1`.
    pub fn walking_arrow() -> FinCat {
        Self::free(&["0", "1"], &[("f", 0, 1)], &[]).unwrap()
    }

    /// `0 ==f,g==> 1`.
    pub fn parallel_pair() -> FinCat {
        Self::free(&["0", "1"], &[("f", 0, 1), ("g", 0, 1)], &[]).unwrap()
    }

    /// `left --f--> vertex <--g-- right`, objects indexed 0, 1, 2.
    pub fn cospan() -> FinCat {
        Self::free(&["left", "vertex", "right"], &[("f", 0, 1), ("g", 2, 1)], &[]).unwrap()
    }

    /// `left <--f-- apex --g--> right`, objects indexed 0, 1, 2.
    pub fn span() -> FinCat {
        Self::free(&["left", "apex", "right"], &[("f", 1, 0), ("g", 1, 2)], &[]).unwrap()
    }

    pub fn object_count(&self) -> usize {
        self.data.objects.len()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.object_count()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.data.objects[o]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.data.objects.iter().position(|o| o == name)
    }

    pub fn arrow_count(&self) -> usize {
        self.data.arrows.len()
    }

    pub fn arrows(&self) -> std::ops::Range<usize> {
        0..self.arrow_count()
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.data.arrows[a].name
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.data.arrows.iter().position(|a| a.name == name)
    }

    pub fn arrow_source(&self, a: usize) -> usize {
        self.data.arrows[a].source
    }

    pub fn arrow_target(&self, a: usize) -> usize {
        self.data.arrows[a].target
    }

    pub fn identity_arrow(&self, o: usize) -> usize {
        self.data.identities[o]
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.data.identities[self.arrow_source(a)] == a
    }

    pub fn is_thin(&self) -> bool {
        matches!(self.data.kind, Kind::Thin { .. })
    }

    /// The underlying poset of a thin category.
    pub fn as_poset(&self) -> Option<&FinPoset> {
        match &self.data.kind {
            Kind::Thin { poset, .. } => Some(poset),
            Kind::Table { .. } => None,
        }
    }

    /// The arrow `a -> b` of a thin category.
    pub fn thin_arrow(&self, a: usize, b: usize) -> Option<usize> {
        match &self.data.kind {
            Kind::Thin { lookup, .. } => {
                let x = lookup[a * self.object_count() + b];
                (x != usize::MAX).then_some(x)
            }
            Kind::Table { .. } => None,
        }
    }

    /// `g ∘ f`, if composable.
    pub fn compose_arrows(&self, g: usize, f: usize) -> Option<usize> {
        if self.arrow_target(f) != self.arrow_source(g) {
            return None;
        }
        match &self.data.kind {
            Kind::Thin { .. } => self.thin_arrow(self.arrow_source(f), self.arrow_target(g)),
            Kind::Table { compose, .. } => compose.get(&(g, f)).copied(),
        }
    }

    pub fn arrows_between(&self, a: usize, b: usize) -> Vec<usize> {
        match &self.data.kind {
            Kind::Thin { .. } => self.thin_arrow(a, b).into_iter().collect(),
            Kind::Table { .. } => self
                .arrows()
                .filter(|&x| self.arrow_source(x) == a && self.arrow_target(x) == b)
                .collect(),
        }
    }

    /// Composable pairs `(g, f)` of non-identity arrows.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); self.object_count()];
        for g in self.arrows() {
            if !self.is_identity(g) {
                outgoing[self.arrow_source(g)].push(g);
            }
        }
        for f in self.arrows() {
            if self.is_identity(f) {
                continue;
            }
            for &g in &outgoing[self.arrow_target(f)] {
                out.push((g, f));
            }
        }
        out
    }

    /// Generating arrows: covers of a thin category, edges of a presentation.
    pub fn generators(&self) -> Vec<usize> {
        match &self.data.kind {
            Kind::Thin { poset, .. } => poset
                .covers()
                .into_iter()
                .map(|(a, b)| self.thin_arrow(a, b).unwrap())
                .collect(),
            Kind::Table { edges, .. } => edges.clone(),
        }
    }

    /// Writes an arrow as generators in application order (empty for
    /// identities).
    pub fn decompose(&self, a: usize) -> Vec<usize> {
        match &self.data.kind {
            Kind::Thin { poset, .. } => {
                let (mut x, y) = (self.arrow_source(a), self.arrow_target(a));
                let mut out = Vec::new();
                while x != y {
                    let next = poset
                        .elements()
                        .find(|&c| poset.covers_pair(x, c) && poset.le(c, y))
                        .expect("a strict inequality factors through a cover");
                    out.push(self.thin_arrow(x, next).unwrap());
                    x = next;
                }
                out
            }
            Kind::Table { paths, edges, .. } => paths[a].iter().map(|&e| edges[e]).collect(),
        }
    }
}

impl Category for FinCat {
    type Obj = usize;
    type Mor = usize;

    fn source(&self, f: &usize) -> usize {
        self.arrow_source(*f)
    }

    fn target(&self, f: &usize) -> usize {
        self.arrow_target(*f)
    }

    fn identity(&self, x: &usize) -> usize {
        self.identity_arrow(*x)
    }

    fn compose(&self, g: &usize, f: &usize) -> Result<usize> {
        self.compose_arrows(*g, *f).ok_or_else(|| {
            Error::NotComposable(format!("{} after {}", self.arrow_name(*g), self.arrow_name(*f)))
        })
    }

    fn hom(&self, a: &usize, b: &usize) -> Result<Vec<usize>> {
        Ok(self.arrows_between(*a, *b))
    }

    fn initial_object(&self) -> Option<usize> {
        self.objects()
            .find(|&o| self.objects().all(|x| self.arrows_between(o, x).len() == 1))
    }

    fn from_initial(&self, x: &usize) -> Option<usize> {
        let o = self.initial_object()?;
        self.arrows_between(o, *x).first().copied()
    }

    /// Limits in a thin category are greatest lower bounds of the objects in
    /// the image.
    fn limit(&self, diagram: &Functor<Self>) -> Result<Cone<Self>> {
        let Kind::Thin { poset, .. } = &self.data.kind else {
            return Err(Error::CapabilityMissing("limits in a non-thin finite category"));
        };
        let image: Vec<usize> = diagram.objects().to_vec();
        let lower: Vec<usize> = poset
            .elements()
            .filter(|&x| image.iter().all(|&y| poset.le(x, y)))
            .collect();
        let glb = lower
            .iter()
            .copied()
            .find(|&g| lower.iter().all(|&x| poset.le(x, g)))
            .ok_or_else(|| {
                let names: Vec<&str> = image.iter().map(|&o| poset.name(o)).collect();
                Error::NoLimit(format!("no greatest lower bound of {{{}}}", names.join(",")))
            })?;
        let legs = image
            .iter()
            .map(|&y| self.thin_arrow(glb, y).unwrap())
            .collect();
        Ok(Cone::new(glb, legs))
    }
}
