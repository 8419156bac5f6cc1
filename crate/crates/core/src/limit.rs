//! Finite limits in `L(C)`, computed pointwise over the limit of shapes.
//!
//! 1. Take the limit `(L, ρ)` of the shapes in FPos.
//! 2. Reindex each labelling along `[ρ_j]`, giving a diagram `G` of
//!    labellings on the common interval poset `[L]`.
//! 3. At every interval take the base limit of the evaluated diagram,
//!    failing at the first interval where none exists.
//! 4. Fill in the labels of precision arrows by the universal property and
//!    return the cone with legs `(ρ_j, η_j)`.

use rayon::prelude::*;

use crate::category::{is_limit_cone, BaseFunctor, Category, Cone, Functor, NatTrans};
use crate::error::{Error, Result};
use crate::fpos::{fpos_limit, FPos, PosetCone};
use crate::interval::{interval_poset, IntervalPoset};
use crate::labelled::{Labelled, LabelledMorphism, LabelledObject, MapLabels, ProjectShape};
use crate::lattice::{detect_lattice, lattice_hom_failure};
use crate::posetal::{validate_posetal_object, PosetalObject};

/// A diagram in `L(C)`.
pub type DiagramInL<C> = Functor<Labelled<C>>;

/// The diagram of labellings on `[L]` obtained by reindexing along the
/// shape cone.
pub struct ReindexedDiagram<C: Category> {
    pub shape_cone: PosetCone,
    pub intervals: IntervalPoset,
    /// `[ρ_j]` as interval indices.
    pub index_maps: Vec<Vec<usize>>,
    /// `G_j = F_j ∘ [ρ_j]`.
    pub functors: Vec<Functor<C>>,
    /// `G_h` for every shape arrow `h`.
    pub transfors: Vec<NatTrans<C>>,
    /// `ε_j = (ρ_j, id): (L, G_j) -> F_j`.
    pub counit: Vec<LabelledMorphism<C>>,
}

impl<C: Category> ReindexedDiagram<C> {
    /// The diagram in `C` obtained by evaluating `G` at interval `k`.
    pub fn evaluate(&self, shape: &crate::category::FinCat, k: usize) -> Functor<C> {
        Functor::new(
            shape.clone(),
            self.functors.iter().map(|g| g.object(k).clone()).collect(),
            self.transfors.iter().map(|t| t.components[k].clone()).collect(),
        )
    }
}

/// The output of [`compute_limit`].
pub struct LimitResult<C: Category> {
    pub apex: LabelledObject<C>,
    pub legs: Vec<LabelledMorphism<C>>,
    pub reindexed: ReindexedDiagram<C>,
    /// The base limit cone at every interval of the apex.
    pub pointwise: Vec<Cone<C>>,
}

impl<C: Category> LimitResult<C> {
    pub fn cone(&self) -> Cone<Labelled<C>> {
        Cone::new(self.apex.clone(), self.legs.clone())
    }
}

/// Knobs for [`compute_limit_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LimitOptions {
    /// Report every failing interval rather than only the first.
    pub all_failures: bool,
    /// Compute the per-interval limits on the rayon pool.
    pub parallel: bool,
}

/// The FPos limit of the shapes.
pub fn shape_limit<C: Category>(diagram: &DiagramInL<C>) -> PosetCone {
    fpos_limit(&diagram.then(&ProjectShape::<C>::new()))
}

/// Reindex every labelling and relabelling along the shape cone.
pub fn reindex<C: Category>(
    l: &Labelled<C>,
    diagram: &DiagramInL<C>,
    shape_cone: PosetCone,
) -> Result<ReindexedDiagram<C>> {
    let shape = diagram.source();
    let intervals = interval_poset(&shape_cone.apex);
    let mut index_maps = Vec::with_capacity(shape.object_count());
    let mut functors = Vec::with_capacity(shape.object_count());
    let mut counit = Vec::with_capacity(shape.object_count());
    for (j, rho) in shape_cone.legs.iter().enumerate() {
        let f = diagram.object(j);
        let eps = l.cartesian_lift(f, rho)?;
        index_maps.push(eps.index_map().to_vec());
        functors.push(eps.source().labelling().clone());
        counit.push(eps);
    }
    let transfors = shape
        .arrows()
        .map(|h| {
            let j = shape.arrow_source(h);
            let fh = diagram.arrow(h);
            NatTrans::new(
                index_maps[j]
                    .iter()
                    .map(|&k| fh.component(k).clone())
                    .collect(),
            )
        })
        .collect();
    Ok(ReindexedDiagram {
        shape_cone,
        intervals,
        index_maps,
        functors,
        transfors,
        counit,
    })
}

/// Per-interval base limits, the apex labelling by the universal
/// property, and the legs.
pub fn pointwise_assemble<C: Category>(
    l: &Labelled<C>,
    diagram: &DiagramInL<C>,
    re: &ReindexedDiagram<C>,
    options: LimitOptions,
) -> Result<(LabelledObject<C>, Vec<Cone<C>>)> {
    let c = l.base();
    let shape = diagram.source();
    let ip = &re.intervals;
    let one = |k: usize| c.limit(&re.evaluate(shape, k));
    let results: Vec<Result<Cone<C>>> = if options.parallel {
        (0..ip.len()).into_par_iter().map(one).collect()
    } else {
        let mut out = Vec::with_capacity(ip.len());
        for k in 0..ip.len() {
            let r = one(k);
            let failed = matches!(r, Err(Error::NoLimit(_)));
            out.push(r);
            if failed && !options.all_failures {
                break;
            }
        }
        out
    };
    let mut cones = Vec::with_capacity(ip.len());
    let mut failed = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(cone) => cones.push(cone),
            Err(Error::NoLimit(_)) => failed.push(ip.name(k).to_string()),
            Err(e) => return Err(e),
        }
    }
    if let Some(first) = failed.first() {
        return Err(Error::FailureAt {
            interval: first.clone(),
            all: if options.all_failures { failed.clone() } else { Vec::new() },
        });
    }
    let cat = ip.category();
    let mut arrows = Vec::with_capacity(cat.arrow_count());
    for a in cat.arrows() {
        let (s, t) = (cat.arrow_source(a), cat.arrow_target(a));
        if s == t {
            arrows.push(c.identity(&cones[s].apex));
            continue;
        }
        let legs = re
            .functors
            .iter()
            .zip(&cones[s].legs)
            .map(|(g, leg)| {
                let ga = g.arrow(cat.thin_arrow(s, t).expect("arrow"));
                c.compose(ga, leg)
            })
            .collect::<Result<Vec<_>>>()?;
        let probe = Cone::new(cones[s].apex.clone(), legs);
        arrows.push(c.factor(&cones[t], &probe).map_err(|e| {
            Error::InternalInvariantViolation(format!("no unique cone map for {} ⊇ {}: {e}", ip.name(s), ip.name(t)))
        })?);
    }
    let labelling = Functor::new(cat.clone(), cones.iter().map(|k| k.apex.clone()).collect(), arrows);
    let apex = l.make_object(ip.base(), labelling).map_err(|e| {
        Error::InternalInvariantViolation(format!("cone maps are not functorial: {e}"))
    })?;
    Ok((apex, cones))
}

/// The limit of a finite diagram in `L(C)` with default options.
pub fn compute_limit<C: Category>(l: &Labelled<C>, diagram: &DiagramInL<C>) -> Result<LimitResult<C>> {
    compute_limit_with(l, diagram, LimitOptions::default())
}

/// The limit of a finite diagram in `L(C)`.
pub fn compute_limit_with<C: Category>(
    l: &Labelled<C>,
    diagram: &DiagramInL<C>,
    options: LimitOptions,
) -> Result<LimitResult<C>> {
    let re = reindex(l, diagram, shape_limit(diagram))?;
    let (apex, pointwise) = pointwise_assemble(l, diagram, &re, options)?;
    let legs = re
        .shape_cone
        .legs
        .iter()
        .enumerate()
        .map(|(j, rho)| {
            let comps = pointwise.iter().map(|cone| cone.legs[j].clone()).collect();
            l.make_morphism(&apex, diagram.object(j), rho.clone(), comps)
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InternalInvariantViolation(format!("leg is not a morphism: {e}")))?;
    Ok(LimitResult {
        apex,
        legs,
        reindexed: re,
        pointwise,
    })
}

/// The unique morphism from a cone over `diagram` into the limit: the shape
/// part by the FPos universal property, each component by the base one.
pub fn factor_cone<C: Category>(
    l: &Labelled<C>,
    diagram: &DiagramInL<C>,
    result: &LimitResult<C>,
    cone: &Cone<Labelled<C>>,
) -> Result<LabelledMorphism<C>> {
    if !crate::category::is_cone(l, diagram, cone)? {
        return Err(Error::NotACone("legs do not commute with the diagram".into()));
    }
    let shapes = Cone::<FPos>::new(
        cone.apex.shape().clone(),
        cone.legs.iter().map(|m| m.shape_map().clone()).collect(),
    );
    let k = FPos.factor(&result.reindexed.shape_cone, &shapes)?;
    let x = &cone.apex;
    let idx = x.intervals().map_indices(&k, result.apex.intervals());
    let c = l.base();
    let components = (0..x.intervals().len())
        .map(|i| {
            let probe = Cone::new(
                x.label(i).clone(),
                cone.legs.iter().map(|m| m.component(i).clone()).collect(),
            );
            c.factor(&result.pointwise[idx[i]], &probe)
        })
        .collect::<Result<Vec<_>>>()?;
    l.make_morphism(x, &result.apex, k, components)
}

/// A limit in the posetal subcategory, with its certificates.
pub struct PosetalLimit<C: Category> {
    pub result: LimitResult<C>,
    pub apex: PosetalObject<C>,
}

/// Validates every object and arrow of `diagram` as posetal, computes the
/// limit in `L(C)` and checks that the apex is posetal and every leg a
/// lattice homomorphism. A failed output check is an
/// [`Error::InternalInvariantViolation`].
pub fn compute_limit_posetal<C: Category>(
    l: &Labelled<C>,
    diagram: &DiagramInL<C>,
    options: LimitOptions,
) -> Result<PosetalLimit<C>> {
    let shape = diagram.source();
    for x in diagram.objects() {
        validate_posetal_object(l.base(), x)?;
    }
    for a in shape.arrows() {
        crate::posetal::validate_posetal_morphism(diagram.arrow(a))?;
    }
    let result = compute_limit_with(l, diagram, options)?;
    let apex = validate_posetal_object(l.base(), &result.apex)
        .map_err(|e| Error::InternalInvariantViolation(format!("limit apex is not posetal: {e}")))?;
    for (j, leg) in result.legs.iter().enumerate() {
        let target = detect_lattice(leg.target().shape())?;
        if let Some((a, b, op)) = lattice_hom_failure(leg.shape_map(), &apex.lattice, &target) {
            return Err(Error::InternalInvariantViolation(format!(
                "leg {j} does not preserve the {op} of `{}` and `{}`",
                apex.lattice.carrier().name(a),
                apex.lattice.carrier().name(b)
            )));
        }
    }
    Ok(PosetalLimit { result, apex })
}

/// How `L(F)` interacts with a limit: whether `L(F)` of the limit cone is a
/// limit of `L(F) ∘ diagram`, checked interval by interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelabellingReport {
    /// Whether the image cone is a limit at each apex interval.
    pub preserved: Vec<bool>,
    /// Whether `L(F)` of the limit equals the limit of the image diagram.
    pub equal_on_the_nose: bool,
    /// Whether the two apexes have the same shape.
    pub same_shape: bool,
}

impl RelabellingReport {
    /// The image of the limit cone is again a limit.
    pub fn is_preserved(&self) -> bool {
        self.same_shape && self.preserved.iter().all(|&p| p)
    }
}

/// Compares `L(F)` applied to the limit of `diagram` with the limit of
/// `L(F) ∘ diagram`.
pub fn map_limit_under_relabelling<C, D, F>(
    l: &Labelled<C>,
    target: &Labelled<D>,
    diagram: &DiagramInL<C>,
    f: &F,
) -> Result<RelabellingReport>
where
    C: Category,
    D: Category,
    F: BaseFunctor<C, D>,
{
    let lift = MapLabels { functor: f };
    let here = compute_limit(l, diagram)?;
    let mapped_apex = lift.map_object(&here.apex);
    let image: DiagramInL<D> = diagram.then(&lift);
    let there = compute_limit(target, &image)?;
    let same_shape = there.apex.shape() == mapped_apex.shape();
    let mut preserved = Vec::with_capacity(here.pointwise.len());
    for (k, cone) in here.pointwise.iter().enumerate() {
        let evaluated = there.reindexed.evaluate(image.source(), k);
        let mapped = Cone::<D>::new(
            f.map_object(&cone.apex),
            cone.legs.iter().map(|m| f.map_morphism(m)).collect(),
        );
        preserved.push(same_shape && is_limit_cone(target.base(), &evaluated, &mapped)?);
    }
    Ok(RelabellingReport {
        preserved,
        equal_on_the_nose: mapped_apex == there.apex,
        same_shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{FinCat, FinSet, FinSetMor, FinSetObj, IdentityFunctor};
    use crate::poset::FinPoset;
    use std::collections::HashMap;

    fn set(n: usize) -> FinSetObj {
        FinSetObj::of_size(n)
    }

    fn zigzag(a: usize, w: usize, b: usize) -> LabelledObject<FinSet> {
        let l = Labelled::new(FinSet);
        let mut covers = HashMap::new();
        covers.insert((1, 0), FinSetMor::new(set(w), set(a), (0..w).map(|x| x % a).collect()).unwrap());
        covers.insert((1, 2), FinSetMor::new(set(w), set(b), (0..w).map(|x| x % b).collect()).unwrap());
        l.object_from_covers(&FinPoset::chain(2), vec![set(a), set(w), set(b)], &covers)
            .unwrap()
    }

    fn discrete(objs: Vec<LabelledObject<FinSet>>) -> DiagramInL<FinSet> {
        let l = Labelled::new(FinSet);
        let arrows = objs.iter().map(|x| l.identity(x)).collect();
        Functor::new(FinCat::discrete(objs.len()), objs, arrows)
    }

    #[test]
    fn empty_diagram_gives_terminal() {
        let l = Labelled::new(FinSet);
        let r = compute_limit(&l, &discrete(vec![])).unwrap();
        assert_eq!(r.apex.shape().len(), 1);
        assert_eq!(r.apex.intervals().len(), 1);
        assert_eq!(r.apex.label(0).len(), 1);
        assert!(r.legs.is_empty());
    }

    #[test]
    fn binary_product_of_zigzags() {
        let l = Labelled::new(FinSet);
        let (x, y) = (zigzag(2, 3, 1), zigzag(1, 2, 2));
        let d = discrete(vec![x.clone(), y.clone()]);
        let r = compute_limit(&l, &d).unwrap();
        assert_eq!(r.apex.shape().len(), 4);
        assert_eq!(r.apex.intervals().len(), 9);
        let ix = &r.reindexed.index_maps;
        for k in 0..9 {
            assert_eq!(r.apex.label(k).len(), x.label(ix[0][k]).len() * y.label(ix[1][k]).len());
        }
        let cone = r.cone();
        assert!(crate::category::is_cone(&l, &d, &cone).unwrap());
        assert_eq!(factor_cone(&l, &d, &r, &cone).unwrap(), l.identity(&r.apex));
    }

    #[test]
    fn single_object_round_trip() {
        let l = Labelled::new(FinSet);
        let x = zigzag(2, 3, 2);
        let r = compute_limit(&l, &discrete(vec![x.clone()])).unwrap();
        assert!(r.legs[0].shape_map().is_order_isomorphism());
        assert!(r.legs[0].components().iter().all(FinSetMor::is_bijection));
    }

    #[test]
    fn parallel_options_agree() {
        let l = Labelled::new(FinSet);
        let d = discrete(vec![zigzag(2, 3, 1), zigzag(2, 2, 2)]);
        let a = compute_limit(&l, &d).unwrap();
        let b = compute_limit_with(&l, &d, LimitOptions { parallel: true, all_failures: true }).unwrap();
        assert_eq!(a.apex, b.apex);
        assert_eq!(a.legs, b.legs);
    }

    #[test]
    fn identity_relabelling_is_exact() {
        let l = Labelled::new(FinSet);
        let d = discrete(vec![zigzag(2, 3, 1), zigzag(1, 1, 1)]);
        let rep = map_limit_under_relabelling(&l, &l, &d, &IdentityFunctor::<FinSet>::new()).unwrap();
        assert!(rep.equal_on_the_nose && rep.is_preserved());
    }

    #[test]
    fn thin_base_failure() {
        // a and b below c and d with no meet of c and d
        let p = crate::poset::validate_poset(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap();
        let base = FinCat::thin(&p);
        let l = Labelled::new(base.clone());
        let c = p.index_of("c").unwrap();
        let d = p.index_of("d").unwrap();
        let x = l.constant_object(&FinPoset::chain(1), c);
        let y = l.constant_object(&FinPoset::chain(1), d);
        let arrows = vec![l.identity(&x), l.identity(&y)];
        let diagram = Functor::new(FinCat::discrete(2), vec![x, y], arrows);
        let err = compute_limit(&l, &diagram).err().unwrap();
        assert_eq!(
            err,
            Error::FailureAt {
                interval: "[(0,0),(0,0)]".into(),
                all: vec![]
            }
        );
    }
}
