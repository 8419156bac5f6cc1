//! Cones, limit checks and universal-property probing over any base.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::{Category, Cone, FinCat, Functor};
use crate::error::{Error, Result};

/// Whether `cone` has one leg per object with the right endpoints and
/// commutes with every arrow of the diagram.
pub fn is_cone<C: Category>(c: &C, diagram: &Functor<C>, cone: &Cone<C>) -> Result<bool> {
    let shape = diagram.source();
    if cone.legs.len() != shape.object_count() {
        return Ok(false);
    }
    for (j, leg) in cone.legs.iter().enumerate() {
        if c.source(leg) != cone.apex || c.target(leg) != *diagram.object(j) {
            return Ok(false);
        }
    }
    for a in shape.arrows() {
        if shape.is_identity(a) {
            continue;
        }
        let lhs = c.compose(diagram.arrow(a), &cone.legs[shape.arrow_source(a)])?;
        if lhs != cone.legs[shape.arrow_target(a)] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `cone` is a limit: it is isomorphic over the diagram to the
/// base's canonical limit, through unique mediators in both directions.
pub fn is_limit_cone<C: Category>(c: &C, diagram: &Functor<C>, cone: &Cone<C>) -> Result<bool> {
    if !is_cone(c, diagram, cone)? {
        return Ok(false);
    }
    let canonical = match c.limit(diagram) {
        Ok(l) => l,
        Err(Error::NoLimit(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let there = c.mediators(cone, &canonical, 2)?;
    let back = c.mediators(&canonical, cone, 2)?;
    if there.len() != 1 || back.len() != 1 {
        return Ok(false);
    }
    let round = c.compose(&back[0], &there[0])?;
    let other = c.compose(&there[0], &back[0])?;
    Ok(round == c.identity(&cone.apex) && other == c.identity(&canonical.apex))
}

/// A commutative square
///
/// ```text
/// corner --to_right--> right
///   |                    |
/// to_left              right
///   v                    v
/// left ----left-----> vertex
/// ```
pub struct Square<C: Category> {
    pub corner: C::Obj,
    pub to_left: C::Mor,
    pub to_right: C::Mor,
    pub left: C::Mor,
    pub right: C::Mor,
}

impl<C: Category> Square<C> {
    /// The cospan `left -> vertex <- right` as a diagram on
    /// [`FinCat::cospan`].
    pub fn cospan_diagram(&self, c: &C) -> Result<Functor<C>> {
        cospan_diagram(c, &self.left, &self.right)
    }
}

/// `left -> vertex <- right` as a diagram on [`FinCat::cospan`].
pub fn cospan_diagram<C: Category>(c: &C, left: &C::Mor, right: &C::Mor) -> Result<Functor<C>> {
    let shape = FinCat::cospan();
    if c.target(left) != c.target(right) {
        return Err(Error::NotACospan("feet map to different vertices".into()));
    }
    let gens = shape.generators();
    let map = [(gens[0], left.clone()), (gens[1], right.clone())]
        .into_iter()
        .collect();
    Functor::from_generators(
        c,
        shape,
        vec![c.source(left), c.target(left), c.source(right)],
        &map,
    )
}

/// Whether a square is a pullback. A square that does not commute is an
/// error rather than `false`.
pub fn is_pullback_square<C: Category>(c: &C, sq: &Square<C>) -> Result<bool> {
    let l = c.compose(&sq.left, &sq.to_left)?;
    let r = c.compose(&sq.right, &sq.to_right)?;
    if l != r {
        return Err(Error::NonCommuting);
    }
    let diagram = sq.cospan_diagram(c)?;
    let cone = Cone::new(sq.corner.clone(), vec![sq.to_left.clone(), l, sq.to_right.clone()]);
    is_limit_cone(c, &diagram, &cone)
}

/// Evidence that a candidate passed every probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitCertificate {
    pub probes_checked: usize,
}

/// Checks that every probe cone factors through `candidate` in exactly one
/// way. The first probe with zero or several mediators is reported as
/// [`Error::CounterExample`].
pub fn verify_universal_property<C: Category>(
    c: &C,
    diagram: &Functor<C>,
    candidate: &Cone<C>,
    probes: &[Cone<C>],
) -> Result<LimitCertificate> {
    if !is_cone(c, diagram, candidate)? {
        return Err(Error::NotACone("candidate".into()));
    }
    for (i, probe) in probes.iter().enumerate() {
        if !is_cone(c, diagram, probe)? {
            return Err(Error::NotACone(format!("probe {i}")));
        }
        let found = c.mediators(probe, candidate, 2)?.len();
        if found != 1 {
            return Err(Error::CounterExample {
                probe: i,
                mediators: found,
            });
        }
    }
    Ok(LimitCertificate {
        probes_checked: probes.len(),
    })
}

fn leg_candidates<C: Category>(c: &C, diagram: &Functor<C>, apex: &C::Obj) -> Result<Vec<Vec<C::Mor>>> {
    diagram
        .objects()
        .iter()
        .map(|x| c.hom(apex, x))
        .collect()
}

fn compatible<C: Category>(
    c: &C,
    diagram: &Functor<C>,
    legs: &[C::Mor],
    j: usize,
) -> Result<bool> {
    let shape = diagram.source();
    for a in shape.arrows() {
        if shape.is_identity(a) {
            continue;
        }
        let (s, t) = (shape.arrow_source(a), shape.arrow_target(a));
        if s.max(t) != j {
            continue;
        }
        if c.compose(diagram.arrow(a), &legs[s])? != legs[t] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every cone over `diagram` with the given apex, at most `limit` of them.
/// Needs hom-set enumeration.
pub fn enumerate_cones<C: Category>(
    c: &C,
    diagram: &Functor<C>,
    apex: &C::Obj,
    limit: usize,
) -> Result<Vec<Cone<C>>> {
    let candidates = leg_candidates(c, diagram, apex)?;
    let mut out = Vec::new();
    let mut legs = Vec::with_capacity(candidates.len());
    fn go<C: Category>(
        c: &C,
        diagram: &Functor<C>,
        apex: &C::Obj,
        candidates: &[Vec<C::Mor>],
        legs: &mut Vec<C::Mor>,
        limit: usize,
        out: &mut Vec<Cone<C>>,
    ) -> Result<()> {
        let j = legs.len();
        if j == candidates.len() {
            out.push(Cone::new(apex.clone(), legs.clone()));
            return Ok(());
        }
        for m in &candidates[j] {
            if out.len() >= limit {
                break;
            }
            legs.push(m.clone());
            if compatible(c, diagram, legs, j)? {
                go(c, diagram, apex, candidates, legs, limit, out)?;
            }
            legs.pop();
        }
        Ok(())
    }
    go(c, diagram, apex, &candidates, &mut legs, limit, &mut out)?;
    Ok(out)
}

/// Up to `count` distinct cones with the given apex, found by randomised
/// depth-first search from a fixed seed.
pub fn sample_cones<C: Category>(
    c: &C,
    diagram: &Functor<C>,
    apex: &C::Obj,
    count: usize,
    seed: u64,
) -> Result<Vec<Cone<C>>> {
    let candidates = leg_candidates(c, diagram, apex)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out: Vec<Cone<C>> = Vec::new();
    fn go<C: Category>(
        c: &C,
        diagram: &Functor<C>,
        candidates: &[Vec<C::Mor>],
        legs: &mut Vec<C::Mor>,
        rng: &mut StdRng,
    ) -> Result<bool> {
        let j = legs.len();
        if j == candidates.len() {
            return Ok(true);
        }
        let mut order: Vec<usize> = (0..candidates[j].len()).collect();
        order.shuffle(rng);
        for i in order {
            legs.push(candidates[j][i].clone());
            if compatible(c, diagram, legs, j)? && go(c, diagram, candidates, legs, rng)? {
                return Ok(true);
            }
            legs.pop();
        }
        Ok(false)
    }
    for _ in 0..count.saturating_mul(4) {
        if out.len() >= count {
            break;
        }
        let mut legs = Vec::new();
        if !go(c, diagram, &candidates, &mut legs, &mut rng)? {
            break;
        }
        let cone = Cone::new(apex.clone(), legs);
        if !out.contains(&cone) {
            out.push(cone);
        }
    }
    Ok(out)
}

/// Probe cones for each apex: all of them when there are at most `cap`,
/// otherwise `cap` seeded samples.
pub fn probe_cones<C: Category>(
    c: &C,
    diagram: &Functor<C>,
    apexes: &[C::Obj],
    cap: usize,
    seed: u64,
) -> Result<Vec<Cone<C>>> {
    let mut out = Vec::new();
    for (i, apex) in apexes.iter().enumerate() {
        let mut all = enumerate_cones(c, diagram, apex, cap + 1)?;
        if all.len() > cap {
            all = sample_cones(c, diagram, apex, cap, seed.wrapping_add(i as u64))?;
        }
        out.extend(all);
    }
    Ok(out)
}
