//! The category `L(C)` of labelled interval posets.
//!
//! An object is a finite poset `P` with a labelling `X: [P] -> C`; a morphism
//! `(P, X) -> (Q, Y)` is a monotone `f: P -> Q` with a natural transformation
//! `α: X -> Y ∘ [f]`. Composition is `(g, β) ∘ (f, α) = (g ∘ f, β[f] ∘ α)`.

use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;

use crate::category::{enumerate_cones, BaseFunctor, Category, Cone, Functor};
use crate::error::{Error, Result};
use crate::fpos::FPos;
use crate::interval::{interval_poset, Interval, IntervalPoset};
use crate::poset::{monotone_maps_restricted, FinPoset, MonotoneMap};

/// `L(C)` over a base category.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Labelled<C> {
    base: C,
}

struct ObjectData<C: Category> {
    intervals: IntervalPoset,
    labelling: Functor<C>,
}

/// A shape with a labelling of its intervals.
pub struct LabelledObject<C: Category> {
    data: Arc<ObjectData<C>>,
}

impl<C: Category> Clone for LabelledObject<C> {
    fn clone(&self) -> Self {
        LabelledObject {
            data: self.data.clone(),
        }
    }
}

impl<C: Category> PartialEq for LabelledObject<C> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.shape() == other.shape()
                && self.data.labelling.objects() == other.data.labelling.objects()
                && self.data.labelling.arrows() == other.data.labelling.arrows())
    }
}

impl<C: Category> fmt::Debug for LabelledObject<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for k in 0..self.intervals().len() {
            m.entry(&self.intervals().name(k), self.label(k));
        }
        m.finish()
    }
}

impl<C: Category> LabelledObject<C> {
    pub fn shape(&self) -> &FinPoset {
        self.data.intervals.base()
    }

    pub fn intervals(&self) -> &IntervalPoset {
        &self.data.intervals
    }

    /// The labelling as a functor on the thin category of `[P]`.
    pub fn labelling(&self) -> &Functor<C> {
        &self.data.labelling
    }

    /// Label of the interval with index `k`.
    pub fn label(&self, k: usize) -> &C::Obj {
        self.data.labelling.object(k)
    }

    pub fn label_at(&self, i: Interval) -> Option<&C::Obj> {
        self.intervals().index(i).map(|k| self.label(k))
    }

    /// Label of the precision arrow `i ⊇ j`, by interval index.
    pub fn arrow_label(&self, i: usize, j: usize) -> Option<&C::Mor> {
        let a = self.intervals().category().thin_arrow(i, j)?;
        Some(self.data.labelling.arrow(a))
    }

    fn from_parts(intervals: IntervalPoset, labelling: Functor<C>) -> Self {
        LabelledObject {
            data: Arc::new(ObjectData {
                intervals,
                labelling,
            }),
        }
    }
}

struct MorphismData<C: Category> {
    source: LabelledObject<C>,
    target: LabelledObject<C>,
    shape_map: MonotoneMap,
    /// `[f]` as interval indices.
    index_map: Vec<usize>,
    components: Vec<C::Mor>,
}

/// A shape map with a relabelling.
pub struct LabelledMorphism<C: Category> {
    data: Arc<MorphismData<C>>,
}

impl<C: Category> Clone for LabelledMorphism<C> {
    fn clone(&self) -> Self {
        LabelledMorphism {
            data: self.data.clone(),
        }
    }
}

impl<C: Category> PartialEq for LabelledMorphism<C> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.shape_map == other.data.shape_map
                && self.data.components == other.data.components
                && self.data.source == other.data.source
                && self.data.target == other.data.target)
    }
}

impl<C: Category> fmt::Debug for LabelledMorphism<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabelledMorphism")
            .field("shape_map", &self.data.shape_map)
            .field("components", &self.data.components)
            .finish()
    }
}

impl<C: Category> LabelledMorphism<C> {
    pub fn source(&self) -> &LabelledObject<C> {
        &self.data.source
    }

    pub fn target(&self) -> &LabelledObject<C> {
        &self.data.target
    }

    pub fn shape_map(&self) -> &MonotoneMap {
        &self.data.shape_map
    }

    /// `[f]` sending source interval indices to target interval indices.
    pub fn index_map(&self) -> &[usize] {
        &self.data.index_map
    }

    pub fn components(&self) -> &[C::Mor] {
        &self.data.components
    }

    pub fn component(&self, k: usize) -> &C::Mor {
        &self.data.components[k]
    }

    /// Whether the shape map is an identity.
    pub fn is_vertical(&self) -> bool {
        self.data.shape_map.is_identity()
    }
}

impl<C: Category> Labelled<C> {
    pub fn new(base: C) -> Self {
        Labelled { base }
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    /// Validates a labelling given on the thin category of `[P]`.
    pub fn make_object(&self, shape: &FinPoset, labelling: Functor<C>) -> Result<LabelledObject<C>> {
        let intervals = interval_poset(shape);
        if labelling.source().object_count() != intervals.len()
            || labelling.source().as_poset() != Some(intervals.carrier())
        {
            return Err(Error::Mismatch("labelling is not indexed by the interval poset".into()));
        }
        labelling.validate(&self.base)?;
        Ok(LabelledObject::from_parts(intervals, labelling))
    }

    /// Builds an object from one label per interval (in interval index
    /// order) and one morphism per precision cover `(coarse, fine)`; every
    /// other arrow is composed and the result validated.
    pub fn object_from_covers(
        &self,
        shape: &FinPoset,
        labels: Vec<C::Obj>,
        covers: &HashMap<(usize, usize), C::Mor>,
    ) -> Result<LabelledObject<C>> {
        let intervals = interval_poset(shape);
        if labels.len() != intervals.len() {
            return Err(Error::Mismatch(format!(
                "{} labels for {} intervals",
                labels.len(),
                intervals.len()
            )));
        }
        let cat = intervals.category();
        let mut gens = HashMap::new();
        for (&(i, j), m) in covers {
            let a = cat.thin_arrow(i, j).ok_or_else(|| {
                Error::Mismatch(format!("{} does not contain {}", intervals.name(i), intervals.name(j)))
            })?;
            gens.insert(a, m.clone());
        }
        let labelling = Functor::from_generators(&self.base, cat.clone(), labels, &gens)?;
        Ok(LabelledObject::from_parts(intervals, labelling))
    }

    /// The labelling constant at `x`.
    pub fn constant_object(&self, shape: &FinPoset, x: C::Obj) -> LabelledObject<C> {
        let intervals = interval_poset(shape);
        let labelling = Functor::constant(&self.base, intervals.category().clone(), x);
        LabelledObject::from_parts(intervals, labelling)
    }

    /// Validates `(f, α)`: endpoints of `f` and of each component, and
    /// naturality over every precision cover of the source.
    pub fn make_morphism(
        &self,
        source: &LabelledObject<C>,
        target: &LabelledObject<C>,
        shape_map: MonotoneMap,
        components: Vec<C::Mor>,
    ) -> Result<LabelledMorphism<C>> {
        if shape_map.source() != source.shape() || shape_map.target() != target.shape() {
            return Err(Error::Mismatch("shape map endpoints".into()));
        }
        let ip = source.intervals();
        if components.len() != ip.len() {
            return Err(Error::Mismatch(format!(
                "{} components for {} intervals",
                components.len(),
                ip.len()
            )));
        }
        let index_map = ip.map_indices(&shape_map, target.intervals());
        for (k, m) in components.iter().enumerate() {
            if self.base.source(m) != *source.label(k) || self.base.target(m) != *target.label(index_map[k]) {
                return Err(Error::NotNatural(format!("component at {} has wrong endpoints", ip.name(k))));
            }
        }
        for (i, j) in ip.carrier().covers() {
            let lhs = self.base.compose(
                target.arrow_label(index_map[i], index_map[j]).expect("[f] is monotone"),
                &components[i],
            )?;
            let rhs = self
                .base
                .compose(&components[j], source.arrow_label(i, j).expect("cover"))?;
            if lhs != rhs {
                return Err(Error::NotNatural(format!("{} ⊇ {}", ip.name(i), ip.name(j))));
            }
        }
        Ok(self.morphism_unchecked(source, target, shape_map, index_map, components))
    }

    fn morphism_unchecked(
        &self,
        source: &LabelledObject<C>,
        target: &LabelledObject<C>,
        shape_map: MonotoneMap,
        index_map: Vec<usize>,
        components: Vec<C::Mor>,
    ) -> LabelledMorphism<C> {
        LabelledMorphism {
            data: Arc::new(MorphismData {
                source: source.clone(),
                target: target.clone(),
                shape_map,
                index_map,
                components,
            }),
        }
    }

    pub fn identity_morphism(&self, x: &LabelledObject<C>) -> LabelledMorphism<C> {
        let n = x.intervals().len();
        self.morphism_unchecked(
            x,
            x,
            MonotoneMap::identity(x.shape()),
            (0..n).collect(),
            x.labelling().objects().iter().map(|o| self.base.identity(o)).collect(),
        )
    }

    /// `m2 ∘ m1`.
    pub fn compose_morphisms(&self, m2: &LabelledMorphism<C>, m1: &LabelledMorphism<C>) -> Result<LabelledMorphism<C>> {
        if m1.target() != m2.source() {
            return Err(Error::Mismatch("target of the first morphism is not the source of the second".into()));
        }
        let shape_map = m1.shape_map().then(m2.shape_map())?;
        let index_map: Vec<usize> = m1.index_map().iter().map(|&k| m2.index_map()[k]).collect();
        let components = m1
            .components()
            .iter()
            .zip(m1.index_map())
            .map(|(a, &k)| self.base.compose(m2.component(k), a))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.morphism_unchecked(m1.source(), m2.target(), shape_map, index_map, components))
    }

    /// `(P, Y ∘ [f])` for `f: P -> Q` and `y` over `Q`.
    pub fn reindex(&self, y: &LabelledObject<C>, f: &MonotoneMap) -> Result<LabelledObject<C>> {
        if f.target() != y.shape() {
            return Err(Error::Mismatch("reindexing map does not land in the object's shape".into()));
        }
        let ip = interval_poset(f.source());
        let idx = ip.map_indices(f, y.intervals());
        let cat = ip.category();
        let objects = idx.iter().map(|&k| y.label(k).clone()).collect();
        let arrows = cat
            .arrows()
            .map(|a| {
                y.arrow_label(idx[cat.arrow_source(a)], idx[cat.arrow_target(a)])
                    .expect("[f] is monotone")
                    .clone()
            })
            .collect();
        let labelling = Functor::new(cat.clone(), objects, arrows);
        Ok(LabelledObject::from_parts(ip, labelling))
    }

    /// The cartesian morphism `(P, Y ∘ [f]) -> (Q, Y)` with identity
    /// components.
    pub fn cartesian_lift(&self, y: &LabelledObject<C>, f: &MonotoneMap) -> Result<LabelledMorphism<C>> {
        let x = self.reindex(y, f)?;
        let idx = x.intervals().map_indices(f, y.intervals());
        let components = x.labelling().objects().iter().map(|o| self.base.identity(o)).collect();
        Ok(self.morphism_unchecked(&x, y, f.clone(), idx, components))
    }

    /// Splits `m = c ∘ v` with `v` vertical (identity shape map) and `c`
    /// cartesian (identity components) through `(P, Y ∘ [f])`.
    pub fn factor_vertical_cartesian(
        &self,
        m: &LabelledMorphism<C>,
    ) -> Result<(LabelledMorphism<C>, LabelledMorphism<C>)> {
        let c = self.cartesian_lift(m.target(), m.shape_map())?;
        let v = self.morphism_unchecked(
            m.source(),
            c.source(),
            MonotoneMap::identity(m.source().shape()),
            (0..m.source().intervals().len()).collect(),
            m.components().to_vec(),
        );
        Ok((v, c))
    }

    /// `(P, Δ_0)`, the labelling constant at the initial object.
    pub fn free_object(&self, shape: &FinPoset) -> Result<LabelledObject<C>> {
        let zero = self.base.initial_object().ok_or(Error::NoInitialObject)?;
        Ok(self.constant_object(shape, zero))
    }

    /// The unique morphism `free_object(P) -> y` over `f: P -> Q`.
    pub fn free_morphism(&self, f: &MonotoneMap, y: &LabelledObject<C>) -> Result<LabelledMorphism<C>> {
        let x = self.free_object(f.source())?;
        let idx = x.intervals().map_indices(f, y.intervals());
        let components = idx
            .iter()
            .map(|&k| self.base.from_initial(y.label(k)).ok_or(Error::NoInitialObject))
            .collect::<Result<Vec<_>>>()?;
        self.make_morphism(&x, y, f.clone(), components)
    }

    /// `(P, X) ↦ (P, F ∘ X)` into `L(D)`.
    pub fn map_labels<D: Category, F: BaseFunctor<C, D>>(&self, f: &F, x: &LabelledObject<C>) -> LabelledObject<D> {
        LabelledObject::from_parts(x.intervals().clone(), x.labelling().then(f))
    }

    /// `(f, α) ↦ (f, Fα)` into `L(D)`.
    pub fn map_labels_morphism<D: Category, F: BaseFunctor<C, D>>(
        &self,
        f: &F,
        m: &LabelledMorphism<C>,
    ) -> LabelledMorphism<D> {
        LabelledMorphism {
            data: Arc::new(MorphismData {
                source: self.map_labels(f, m.source()),
                target: self.map_labels(f, m.target()),
                shape_map: m.shape_map().clone(),
                index_map: m.index_map().to_vec(),
                components: m.components().iter().map(|c| f.map_morphism(c)).collect(),
            }),
        }
    }

    /// Pointwise product of labellings on the same shape, with the two
    /// vertical projections. Needs base limits.
    pub fn pointwise_product(
        &self,
        x: &LabelledObject<C>,
        y: &LabelledObject<C>,
    ) -> Result<(LabelledObject<C>, LabelledMorphism<C>, LabelledMorphism<C>)> {
        if x.shape() != y.shape() {
            return Err(Error::Mismatch("pointwise product needs a common shape".into()));
        }
        let shape = crate::category::FinCat::discrete(2);
        let n = x.intervals().len();
        let mut cones = Vec::with_capacity(n);
        for k in 0..n {
            let d = Functor::new(
                shape.clone(),
                vec![x.label(k).clone(), y.label(k).clone()],
                vec![self.base.identity(x.label(k)), self.base.identity(y.label(k))],
            );
            cones.push(self.base.limit(&d)?);
        }
        let ip = x.intervals();
        let cat = ip.category();
        let mut arrows = Vec::with_capacity(cat.arrow_count());
        for a in cat.arrows() {
            let (s, t) = (cat.arrow_source(a), cat.arrow_target(a));
            if s == t {
                arrows.push(self.base.identity(&cones[s].apex));
                continue;
            }
            let probe = Cone::new(
                cones[s].apex.clone(),
                vec![
                    self.base.compose(x.arrow_label(s, t).unwrap(), &cones[s].legs[0])?,
                    self.base.compose(y.arrow_label(s, t).unwrap(), &cones[s].legs[1])?,
                ],
            );
            arrows.push(self.base.factor(&cones[t], &probe)?);
        }
        let labelling = Functor::new(
            cat.clone(),
            cones.iter().map(|c| c.apex.clone()).collect(),
            arrows,
        );
        labelling.validate(&self.base)?;
        let p = LabelledObject::from_parts(ip.clone(), labelling);
        let id = MonotoneMap::identity(x.shape());
        let left = self.make_morphism(&p, x, id.clone(), cones.iter().map(|c| c.legs[0].clone()).collect())?;
        let right = self.make_morphism(&p, y, id, cones.iter().map(|c| c.legs[1].clone()).collect())?;
        Ok((p, left, right))
    }
}

/// The shape projection `U: L(C) -> FPos`.
pub struct ProjectShape<C>(PhantomData<fn() -> C>);

impl<C> ProjectShape<C> {
    pub fn new() -> Self {
        ProjectShape(PhantomData)
    }
}

impl<C> Default for ProjectShape<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Category> BaseFunctor<Labelled<C>, FPos> for ProjectShape<C> {
    fn map_object(&self, x: &LabelledObject<C>) -> FinPoset {
        x.shape().clone()
    }

    fn map_morphism(&self, m: &LabelledMorphism<C>) -> MonotoneMap {
        m.shape_map().clone()
    }
}

/// `L(F): L(C) -> L(D)` for a functor `F: C -> D`.
pub struct MapLabels<F> {
    pub functor: F,
}

impl<C, D, F> BaseFunctor<Labelled<C>, Labelled<D>> for MapLabels<F>
where
    C: Category,
    D: Category,
    F: BaseFunctor<C, D>,
{
    fn map_object(&self, x: &LabelledObject<C>) -> LabelledObject<D> {
        LabelledObject::from_parts(x.intervals().clone(), x.labelling().then(&self.functor))
    }

    fn map_morphism(&self, m: &LabelledMorphism<C>) -> LabelledMorphism<D> {
        LabelledMorphism {
            data: Arc::new(MorphismData {
                source: self.map_object(m.source()),
                target: self.map_object(m.target()),
                shape_map: m.shape_map().clone(),
                index_map: m.index_map().to_vec(),
                components: m.components().iter().map(|c| self.functor.map_morphism(c)).collect(),
            }),
        }
    }
}

/// A labelled object receiving maps during a component search, with the
/// interval index map of the shape map into it.
struct Target<'a, C: Category> {
    object: &'a LabelledObject<C>,
    index: Vec<usize>,
}

impl<C: Category> Labelled<C> {
    /// Backtracking search for component families out of `x`: at interval
    /// `i` one tuple from `options[i]` is chosen, with entry `t` a morphism
    /// into `targets[t]`. Naturality is checked on every cover of `[P]`
    /// once both ends are chosen. With `rng` the options are tried in a
    /// shuffled order.
    fn search(
        &self,
        x: &LabelledObject<C>,
        targets: &[Target<'_, C>],
        options: &[Vec<Vec<C::Mor>>],
        limit: usize,
        mut rng: Option<&mut StdRng>,
    ) -> Result<Vec<Vec<Vec<C::Mor>>>> {
        let ip = x.intervals();
        let order = ip.carrier().linear_extension();
        let mut position = vec![0; ip.len()];
        for (p, &k) in order.iter().enumerate() {
            position[k] = p;
        }
        // covers whose later endpoint in `order` is the key
        let mut closing: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ip.len()];
        for (i, j) in ip.carrier().covers() {
            let later = if position[i] > position[j] { i } else { j };
            closing[later].push((i, j));
        }
        let orders: Vec<Vec<usize>> = options
            .iter()
            .map(|o| {
                let mut v: Vec<usize> = (0..o.len()).collect();
                if let Some(r) = rng.as_deref_mut() {
                    v.shuffle(r);
                }
                v
            })
            .collect();
        let mut chosen: Vec<usize> = vec![usize::MAX; ip.len()];
        let mut out = Vec::new();
        let mut stack: Vec<usize> = vec![0];
        // iterative depth-first search; stack[d] is the next option to try at depth d
        while let Some(&next) = stack.last() {
            let d = stack.len() - 1;
            if out.len() >= limit {
                break;
            }
            if d == order.len() {
                out.push(
                    (0..ip.len())
                        .map(|k| options[k][chosen[k]].clone())
                        .collect(),
                );
                stack.pop();
                continue;
            }
            let k = order[d];
            if next >= orders[k].len() {
                chosen[k] = usize::MAX;
                stack.pop();
                continue;
            }
            *stack.last_mut().unwrap() += 1;
            chosen[k] = orders[k][next];
            let mut ok = true;
            'check: for &(i, j) in &closing[k] {
                let (ci, cj) = (&options[i][chosen[i]], &options[j][chosen[j]]);
                let xa = x.arrow_label(i, j).expect("cover");
                for (t, target) in targets.iter().enumerate() {
                    let ya = target
                        .object
                        .arrow_label(target.index[i], target.index[j])
                        .expect("monotone index map");
                    if self.base.compose(ya, &ci[t])? != self.base.compose(&cj[t], xa)? {
                        ok = false;
                        break 'check;
                    }
                }
            }
            if ok {
                stack.push(0);
            }
        }
        Ok(out)
    }

    /// Morphisms `from.apex -> to.apex` commuting with the legs: shape maps
    /// are enumerated first, then components interval by interval using the
    /// base's mediators.
    fn structured_mediators(
        &self,
        from: &Cone<Self>,
        to: &Cone<Self>,
        limit: usize,
    ) -> Result<Vec<LabelledMorphism<C>>> {
        if from.legs.len() != to.legs.len() {
            return Err(Error::Mismatch("cones over different shapes".into()));
        }
        let (x, y) = (&from.apex, &to.apex);
        let candidates: Vec<Vec<usize>> = x
            .shape()
            .elements()
            .map(|a| {
                y.shape()
                    .elements()
                    .filter(|&b| {
                        to.legs
                            .iter()
                            .zip(&from.legs)
                            .all(|(t, f)| t.shape_map().apply(b) == f.shape_map().apply(a))
                    })
                    .collect()
            })
            .collect();
        let ip = x.intervals();
        let mut out = Vec::new();
        for k in monotone_maps_restricted(x.shape(), y.shape(), &candidates, usize::MAX) {
            if out.len() >= limit {
                break;
            }
            let idx = ip.map_indices(&k, y.intervals());
            let mut options = Vec::with_capacity(ip.len());
            for i in 0..ip.len() {
                let probe = Cone::new(
                    x.label(i).clone(),
                    from.legs.iter().map(|l| l.component(i).clone()).collect(),
                );
                let target = Cone::new(
                    y.label(idx[i]).clone(),
                    to.legs.iter().map(|l| l.component(idx[i]).clone()).collect(),
                );
                let found: Vec<Vec<C::Mor>> = self
                    .base
                    .mediators(&probe, &target, usize::MAX)?
                    .into_iter()
                    .map(|m| vec![m])
                    .collect();
                options.push(found);
            }
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let targets = [Target { object: y, index: idx.clone() }];
            for comps in self.search(x, &targets, &options, limit - out.len(), None)? {
                let comps = comps.into_iter().map(|mut t| t.pop().unwrap()).collect();
                out.push(self.morphism_unchecked(x, y, k.clone(), idx.clone(), comps));
            }
        }
        Ok(out)
    }

    /// Cones over `diagram` with the given apex, at most `limit` of them:
    /// shape cones in FPos first, then per-interval cones in the base,
    /// glued by naturality of every leg. With `rng` the search order is
    /// shuffled, so the first `limit` cones found are a seeded sample.
    pub fn cones_with_apex(
        &self,
        diagram: &Functor<Self>,
        apex: &LabelledObject<C>,
        limit: usize,
        mut rng: Option<&mut StdRng>,
    ) -> Result<Vec<Cone<Self>>> {
        let shape = diagram.source();
        let shapes = diagram.then(&ProjectShape::<C>::new());
        let mut shape_cones = enumerate_cones(&FPos, &shapes, apex.shape(), usize::MAX)?;
        if let Some(r) = rng.as_deref_mut() {
            shape_cones.shuffle(r);
        }
        let ip = apex.intervals();
        let mut out = Vec::new();
        for sc in shape_cones {
            if out.len() >= limit {
                break;
            }
            let index: Vec<Vec<usize>> = (0..shape.object_count())
                .map(|j| ip.map_indices(&sc.legs[j], diagram.object(j).intervals()))
                .collect();
            let mut options = Vec::with_capacity(ip.len());
            for i in 0..ip.len() {
                let evaluated = Functor::new(
                    shape.clone(),
                    (0..shape.object_count())
                        .map(|j| diagram.object(j).label(index[j][i]).clone())
                        .collect(),
                    shape
                        .arrows()
                        .map(|h| diagram.arrow(h).component(index[shape.arrow_source(h)][i]).clone())
                        .collect(),
                );
                let cones = enumerate_cones(&self.base, &evaluated, apex.label(i), usize::MAX)?;
                options.push(cones.into_iter().map(|c| c.legs).collect::<Vec<_>>());
            }
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let targets: Vec<Target<'_, C>> = (0..shape.object_count())
                .map(|j| Target {
                    object: diagram.object(j),
                    index: index[j].clone(),
                })
                .collect();
            let found = self.search(apex, &targets, &options, limit - out.len(), rng.as_deref_mut())?;
            for comps in found {
                let legs = (0..shape.object_count())
                    .map(|j| {
                        self.morphism_unchecked(
                            apex,
                            diagram.object(j),
                            sc.legs[j].clone(),
                            index[j].clone(),
                            comps.iter().map(|t| t[j].clone()).collect(),
                        )
                    })
                    .collect();
                out.push(Cone::new(apex.clone(), legs));
            }
        }
        Ok(out)
    }

    /// A seeded random morphism `x -> y`, if any exists.
    pub fn random_morphism(
        &self,
        x: &LabelledObject<C>,
        y: &LabelledObject<C>,
        rng: &mut StdRng,
    ) -> Result<Option<LabelledMorphism<C>>> {
        let mut maps = crate::poset::monotone_maps(x.shape(), y.shape());
        maps.shuffle(rng);
        let ip = x.intervals();
        for k in maps {
            let idx = ip.map_indices(&k, y.intervals());
            let options = (0..ip.len())
                .map(|i| {
                    Ok(self
                        .base
                        .hom(x.label(i), y.label(idx[i]))?
                        .into_iter()
                        .map(|m| vec![m])
                        .collect::<Vec<_>>())
                })
                .collect::<Result<Vec<_>>>()?;
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let targets = [Target { object: y, index: idx.clone() }];
            if let Some(comps) = self.search(x, &targets, &options, 1, Some(rng))?.pop() {
                let comps = comps.into_iter().map(|mut t| t.pop().unwrap()).collect();
                return Ok(Some(self.morphism_unchecked(x, y, k, idx, comps)));
            }
        }
        Ok(None)
    }
}

impl<C: Category> Category for Labelled<C> {
    type Obj = LabelledObject<C>;
    type Mor = LabelledMorphism<C>;

    fn source(&self, f: &LabelledMorphism<C>) -> LabelledObject<C> {
        f.source().clone()
    }

    fn target(&self, f: &LabelledMorphism<C>) -> LabelledObject<C> {
        f.target().clone()
    }

    fn identity(&self, x: &LabelledObject<C>) -> LabelledMorphism<C> {
        self.identity_morphism(x)
    }

    fn compose(&self, g: &LabelledMorphism<C>, f: &LabelledMorphism<C>) -> Result<LabelledMorphism<C>> {
        self.compose_morphisms(g, f)
    }

    fn hom(&self, a: &LabelledObject<C>, b: &LabelledObject<C>) -> Result<Vec<LabelledMorphism<C>>> {
        self.structured_mediators(&Cone::new(a.clone(), vec![]), &Cone::new(b.clone(), vec![]), usize::MAX)
    }

    /// The empty shape, which has no intervals to label.
    fn initial_object(&self) -> Option<LabelledObject<C>> {
        Some(self.constant_object_empty())
    }

    fn from_initial(&self, x: &LabelledObject<C>) -> Option<LabelledMorphism<C>> {
        let zero = self.constant_object_empty();
        let f = MonotoneMap::new(FinPoset::empty(), x.shape().clone(), vec![]).ok()?;
        Some(self.morphism_unchecked(&zero, x, f, vec![], vec![]))
    }

    fn limit(&self, diagram: &Functor<Self>) -> Result<Cone<Self>> {
        let r = crate::limit::compute_limit(self, diagram)?;
        Ok(Cone::new(r.apex, r.legs))
    }

    fn mediators(&self, from: &Cone<Self>, to: &Cone<Self>, limit: usize) -> Result<Vec<LabelledMorphism<C>>> {
        self.structured_mediators(from, to, limit)
    }
}

impl<C: Category> Labelled<C> {
    fn constant_object_empty(&self) -> LabelledObject<C> {
        let intervals = interval_poset(&FinPoset::empty());
        let labelling = Functor::new(intervals.category().clone(), vec![], vec![]);
        LabelledObject::from_parts(intervals, labelling)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{FinSet, FinSetMor, FinSetObj, ProductWith};
    use crate::poset::monotone_maps;

    fn set(n: usize) -> FinSetObj {
        FinSetObj::of_size(n)
    }

    fn lf() -> Labelled<FinSet> {
        Labelled::new(FinSet)
    }

    /// chain2 labelled 2 <- 3 -> 1 on [0,0] ⊆ [0,1] ⊇ [1,1].
    fn zigzag() -> LabelledObject<FinSet> {
        let ip = interval_poset(&FinPoset::chain(2));
        let (a, w, b) = (0, 1, 2);
        assert_eq!(ip.name(w), "[0,1]");
        let mut covers = HashMap::new();
        covers.insert((w, a), FinSetMor::new(set(3), set(2), vec![0, 1, 1]).unwrap());
        covers.insert((w, b), FinSetMor::new(set(3), set(1), vec![0, 0, 0]).unwrap());
        lf().object_from_covers(&FinPoset::chain(2), vec![set(2), set(3), set(1)], &covers)
            .unwrap()
    }

    #[test]
    fn non_functorial_labelling_rejected() {
        let shape = FinPoset::chain(2);
        let ip = interval_poset(&shape);
        let cat = ip.category().clone();
        let mut arrows: Vec<FinSetMor> = Vec::new();
        let labels = vec![set(2), set(2), set(2)];
        for a in cat.arrows() {
            if cat.is_identity(a) {
                arrows.push(FinSet.identity(&set(2)));
            } else {
                arrows.push(FinSetMor::new(set(2), set(2), vec![0, 1]).unwrap());
            }
        }
        let ok = Functor::new(cat.clone(), labels.clone(), arrows.clone());
        lf().make_object(&shape, ok).unwrap();
        // an identity replaced by a swap
        let mut bad = arrows;
        bad[0] = FinSetMor::new(set(2), set(2), vec![1, 0]).unwrap();
        let err = lf().make_object(&shape, Functor::new(cat, labels, bad)).unwrap_err();
        assert!(matches!(err, Error::NotAFunctor { .. }));
    }

    #[test]
    fn discrete_shape_picks_out_objects() {
        let x = lf().constant_object(&FinPoset::antichain(2), set(2));
        assert_eq!(x.intervals().len(), 2);
    }

    #[test]
    fn composition_laws() {
        let l = lf();
        let x = zigzag();
        let id = l.identity(&x);
        let homs = l.hom(&x, &x).unwrap();
        assert!(homs.contains(&id));
        for m in &homs {
            assert_eq!(&l.compose(&id, m).unwrap(), m);
            assert_eq!(&l.compose(m, &id).unwrap(), m);
            for n in &homs {
                let nm = l.compose(n, m).unwrap();
                assert_eq!(nm.shape_map(), &m.shape_map().then(n.shape_map()).unwrap());
                for o in homs.iter().take(3) {
                    assert_eq!(
                        l.compose(o, &nm).unwrap(),
                        l.compose(&l.compose(o, n).unwrap(), m).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn every_morphism_splits() {
        let l = lf();
        let x = zigzag();
        let y = l.constant_object(&FinPoset::chain(3), set(2));
        for m in l.hom(&x, &y).unwrap() {
            let (v, c) = l.factor_vertical_cartesian(&m).unwrap();
            assert!(v.is_vertical());
            assert!(c.components().iter().all(|f| f.is_bijection()));
            assert_eq!(l.compose(&c, &v).unwrap(), m);
        }
    }

    #[test]
    fn free_object_adjunction() {
        let l = lf();
        let c2 = FinPoset::chain(2);
        let free = l.free_object(&c2).unwrap();
        assert!(free.labelling().objects().iter().all(|o| o.is_empty()));
        for y in [zigzag(), l.constant_object(&c2, set(0))] {
            let homs = l.hom(&free, &y).unwrap();
            assert_eq!(homs.len(), 3);
            assert_eq!(homs.len(), monotone_maps(&c2, y.shape()).len());
            for f in monotone_maps(&c2, y.shape()) {
                assert!(homs.contains(&l.free_morphism(&f, &y).unwrap()));
            }
        }
    }

    #[test]
    fn map_labels_doubles_carriers() {
        let l = lf();
        let x = zigzag();
        let y = l.map_labels(&ProductWith(set(2)), &x);
        for k in 0..3 {
            assert_eq!(y.label(k).len(), 2 * x.label(k).len());
        }
        y.labelling().validate(&FinSet).unwrap();
    }

    #[test]
    fn nested_labelling_validates() {
        let inner = lf();
        let outer = Labelled::new(inner.clone());
        let x = zigzag();
        let y = inner.constant_object(&FinPoset::chain(2), set(1));
        let to_point = inner.hom(&x, &y).unwrap();
        let m = to_point
            .into_iter()
            .find(|m| m.shape_map().is_identity())
            .unwrap();
        let ip = interval_poset(&FinPoset::chain(2));
        let mut covers = HashMap::new();
        covers.insert((1, 0), m.clone());
        covers.insert((1, 2), m);
        let nested = outer
            .object_from_covers(&FinPoset::chain(2), vec![y.clone(), x, y], &covers)
            .unwrap();
        assert_eq!(nested.intervals().len(), ip.len());
    }
}
