//! The category of finite sets and functions, the reference base.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::{BaseFunctor, Category, Cone, Functor};
use crate::error::{Error, Result};

/// A finite set of opaque, pairwise distinct tokens.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSetObj {
    tokens: Arc<[String]>,
}

impl fmt::Debug for FinSetObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.tokens.join(","))
    }
}

impl FinSetObj {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for t in &tokens {
            if !seen.insert(t.as_str()) {
                return Err(Error::DuplicateElement(t.clone()));
            }
        }
        Ok(Self::from_vec(tokens))
    }

    fn from_vec(tokens: Vec<String>) -> Self {
        FinSetObj {
            tokens: crate::names::distinct(tokens).into(),
        }
    }

    /// `{0, 1, ..., n-1}`.
    pub fn of_size(n: usize) -> Self {
        Self::from_vec((0..n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, i: usize) -> &str {
        &self.tokens[i]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t == token)
    }
}

/// A function between finite sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSetMor {
    source: FinSetObj,
    target: FinSetObj,
    map: Arc<[usize]>,
}

impl fmt::Debug for FinSetMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = (0..self.source.len())
            .map(|i| format!("{}->{}", self.source.token(i), self.target.token(self.map[i])))
            .collect();
        write!(f, "[{}]", pairs.join(", "))
    }
}

impl FinSetMor {
    pub fn new(source: FinSetObj, target: FinSetObj, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::MalformedMap(format!(
                "{} images for {} tokens",
                map.len(),
                source.len()
            )));
        }
        if map.iter().any(|&y| y >= target.len()) {
            return Err(Error::MalformedMap("image out of range".into()));
        }
        Ok(Self::new_unchecked(source, target, map))
    }

    pub(crate) fn new_unchecked(source: FinSetObj, target: FinSetObj, map: Vec<usize>) -> Self {
        FinSetMor {
            source,
            target,
            map: map.into(),
        }
    }

    /// From `(source token, target token)` pairs covering the source.
    pub fn from_tokens<S: AsRef<str>>(
        source: &FinSetObj,
        target: &FinSetObj,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut map = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let i = source
                .index_of(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let j = target
                .index_of(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::MalformedMap(format!("no image for `{}`", source.token(i))));
        }
        Self::new(source.clone(), target.clone(), map)
    }

    /// The constant function onto token index `y`.
    pub fn constant(source: &FinSetObj, target: &FinSetObj, y: usize) -> Result<Self> {
        Self::new(source.clone(), target.clone(), vec![y; source.len()])
    }

    pub fn source(&self) -> &FinSetObj {
        &self.source
    }

    pub fn target(&self) -> &FinSetObj {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    pub fn is_bijection(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }
}

/// Finite sets and functions. Finitely complete, with the empty set initial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinSet;

fn tuple_token<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    format!("({})", parts.collect::<Vec<_>>().join(","))
}

impl Category for FinSet {
    type Obj = FinSetObj;
    type Mor = FinSetMor;

    fn source(&self, f: &FinSetMor) -> FinSetObj {
        f.source.clone()
    }

    fn target(&self, f: &FinSetMor) -> FinSetObj {
        f.target.clone()
    }

    fn identity(&self, x: &FinSetObj) -> FinSetMor {
        FinSetMor::new_unchecked(x.clone(), x.clone(), (0..x.len()).collect())
    }

    fn compose(&self, g: &FinSetMor, f: &FinSetMor) -> Result<FinSetMor> {
        if f.target != g.source {
            return Err(Error::NotComposable(format!(
                "target {:?} differs from source {:?}",
                f.target, g.source
            )));
        }
        Ok(FinSetMor::new_unchecked(
            f.source.clone(),
            g.target.clone(),
            f.map.iter().map(|&y| g.map[y]).collect(),
        ))
    }

    fn hom(&self, a: &FinSetObj, b: &FinSetObj) -> Result<Vec<FinSetMor>> {
        let (n, m) = (a.len(), b.len());
        if n > 0 && m == 0 {
            return Ok(Vec::new());
        }
        let count = m.checked_pow(n as u32).ok_or(Error::CapabilityMissing(
            "hom-set enumeration beyond machine size",
        ))?;
        let mut out = Vec::with_capacity(count);
        let mut digits = vec![0usize; n];
        for _ in 0..count {
            out.push(FinSetMor::new_unchecked(a.clone(), b.clone(), digits.clone()));
            for d in digits.iter_mut() {
                *d += 1;
                if *d < m {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    fn initial_object(&self) -> Option<FinSetObj> {
        Some(FinSetObj::of_size(0))
    }

    fn from_initial(&self, x: &FinSetObj) -> Option<FinSetMor> {
        Some(FinSetMor::new_unchecked(FinSetObj::of_size(0), x.clone(), Vec::new()))
    }

    /// Compatible tuples over the object carriers; legs are projections.
    fn limit(&self, diagram: &Functor<Self>) -> Result<Cone<Self>> {
        let shape = diagram.source();
        let k = shape.object_count();
        // arrows between distinct-or-equal objects, grouped by the later endpoint
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for a in shape.arrows() {
            if shape.is_identity(a) {
                continue;
            }
            let (s, t) = (shape.arrow_source(a), shape.arrow_target(a));
            checks[s.max(t)].push(a);
        }
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        let mut current = vec![0usize; k];
        fn go(
            j: usize,
            diagram: &Functor<FinSet>,
            checks: &[Vec<usize>],
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let shape = diagram.source();
            if j == shape.object_count() {
                out.push(current.clone());
                return;
            }
            for x in 0..diagram.object(j).len() {
                current[j] = x;
                let ok = checks[j].iter().all(|&a| {
                    let (s, t) = (shape.arrow_source(a), shape.arrow_target(a));
                    diagram.arrow(a).apply(current[s]) == current[t]
                });
                if ok {
                    go(j + 1, diagram, checks, current, out);
                }
            }
        }
        go(0, diagram, &checks, &mut current, &mut tuples);
        let tokens: Vec<String> = tuples
            .iter()
            .map(|t| tuple_token(t.iter().enumerate().map(|(j, &x)| diagram.object(j).token(x))))
            .collect();
        let apex = FinSetObj::from_vec(tokens);
        let legs = (0..k)
            .map(|j| {
                FinSetMor::new_unchecked(
                    apex.clone(),
                    diagram.object(j).clone(),
                    tuples.iter().map(|t| t[j]).collect(),
                )
            })
            .collect();
        Ok(Cone::new(apex, legs))
    }

    fn mediators(&self, from: &Cone<Self>, to: &Cone<Self>, limit: usize) -> Result<Vec<FinSetMor>> {
        if from.legs.len() != to.legs.len() {
            return Err(Error::Mismatch("cones over different shapes".into()));
        }
        let n = from.apex.len();
        let candidates: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..to.apex.len())
                    .filter(|&y| {
                        to.legs
                            .iter()
                            .zip(&from.legs)
                            .all(|(t, f)| t.apply(y) == f.apply(x))
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        if candidates.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        let mut digits = vec![0usize; n];
        'outer: while out.len() < limit {
            out.push(FinSetMor::new_unchecked(
                from.apex.clone(),
                to.apex.clone(),
                digits.iter().enumerate().map(|(x, &d)| candidates[x][d]).collect(),
            ));
            for (x, d) in digits.iter_mut().enumerate() {
                *d += 1;
                if *d < candidates[x].len() {
                    continue 'outer;
                }
                *d = 0;
            }
            break;
        }
        Ok(out)
    }
}

/// `X ↦ X × S`, `f ↦ f × id_S`. Preserves connected limits only.
#[derive(Clone, Debug)]
pub struct ProductWith(pub FinSetObj);

impl BaseFunctor<FinSet, FinSet> for ProductWith {
    fn map_object(&self, x: &FinSetObj) -> FinSetObj {
        let s = &self.0;
        FinSetObj::from_vec(
            (0..x.len() * s.len())
                .map(|i| tuple_token([x.token(i / s.len()), s.token(i % s.len())].into_iter()))
                .collect(),
        )
    }

    fn map_morphism(&self, f: &FinSetMor) -> FinSetMor {
        let k = self.0.len();
        FinSetMor::new_unchecked(
            self.map_object(f.source()),
            self.map_object(f.target()),
            (0..f.source().len() * k)
                .map(|i| f.apply(i / k) * k + i % k)
                .collect(),
        )
    }
}

/// `X ↦ X^S` (functions `S -> X`), `f ↦ f ∘ -`. A right adjoint, so it
/// preserves all limits.
#[derive(Clone, Debug)]
pub struct HomFrom(pub FinSetObj);

impl HomFrom {
    fn encode(&self, images: &[usize], base: usize) -> usize {
        images.iter().rev().fold(0, |acc, &d| acc * base + d)
    }

    fn decode(&self, mut code: usize, base: usize) -> Vec<usize> {
        (0..self.0.len())
            .map(|_| {
                let d = code % base;
                code /= base;
                d
            })
            .collect()
    }
}

impl BaseFunctor<FinSet, FinSet> for HomFrom {
    fn map_object(&self, x: &FinSetObj) -> FinSetObj {
        let (n, k) = (x.len(), self.0.len());
        let count = n.pow(k as u32);
        FinSetObj::from_vec(
            (0..count)
                .map(|c| {
                    let images = self.decode(c, n.max(1));
                    format!(
                        "[{}]",
                        images.iter().map(|&d| x.token(d)).collect::<Vec<_>>().join(",")
                    )
                })
                .collect(),
        )
    }

    fn map_morphism(&self, f: &FinSetMor) -> FinSetMor {
        let (n, m, k) = (f.source().len(), f.target().len(), self.0.len());
        let count = n.pow(k as u32);
        FinSetMor::new_unchecked(
            self.map_object(f.source()),
            self.map_object(f.target()),
            (0..count)
                .map(|c| {
                    let images: Vec<usize> =
                        self.decode(c, n.max(1)).iter().map(|&d| f.apply(d)).collect();
                    self.encode(&images, m.max(1))
                })
                .collect(),
        )
    }
}

/// The constant functor at a fixed set. Does not preserve limits unless the
/// set is a singleton.
#[derive(Clone, Debug)]
pub struct ConstantAt(pub FinSetObj);

impl BaseFunctor<FinSet, FinSet> for ConstantAt {
    fn map_object(&self, _x: &FinSetObj) -> FinSetObj {
        self.0.clone()
    }

    fn map_morphism(&self, _f: &FinSetMor) -> FinSetMor {
        FinSet.identity(&self.0)
    }
}
