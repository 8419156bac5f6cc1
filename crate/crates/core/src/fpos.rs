//! The category of finite posets and monotone maps.

use crate::category::{Category, Cone, Functor};
use crate::error::{Error, Result};
use crate::poset::{monotone_maps, monotone_maps_restricted, FinPoset, MonotoneMap};

/// Finite posets and monotone maps. Finitely complete.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FPos;

/// A cone of monotone maps.
pub type PosetCone = Cone<FPos>;

impl Category for FPos {
    type Obj = FinPoset;
    type Mor = MonotoneMap;

    fn source(&self, f: &MonotoneMap) -> FinPoset {
        f.source().clone()
    }

    fn target(&self, f: &MonotoneMap) -> FinPoset {
        f.target().clone()
    }

    fn identity(&self, x: &FinPoset) -> MonotoneMap {
        MonotoneMap::identity(x)
    }

    fn compose(&self, g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
        f.then(g)
    }

    fn hom(&self, a: &FinPoset, b: &FinPoset) -> Result<Vec<MonotoneMap>> {
        Ok(monotone_maps(a, b))
    }

    fn initial_object(&self) -> Option<FinPoset> {
        Some(FinPoset::empty())
    }

    fn from_initial(&self, x: &FinPoset) -> Option<MonotoneMap> {
        MonotoneMap::new(FinPoset::empty(), x.clone(), Vec::new()).ok()
    }

    fn limit(&self, diagram: &Functor<Self>) -> Result<PosetCone> {
        Ok(fpos_limit(diagram))
    }

    fn mediators(&self, from: &PosetCone, to: &PosetCone, limit: usize) -> Result<Vec<MonotoneMap>> {
        if from.legs.len() != to.legs.len() {
            return Err(Error::Mismatch("cones over different shapes".into()));
        }
        let candidates: Vec<Vec<usize>> = from
            .apex
            .elements()
            .map(|x| {
                to.apex
                    .elements()
                    .filter(|&y| {
                        to.legs
                            .iter()
                            .zip(&from.legs)
                            .all(|(t, f)| t.apply(y) == f.apply(x))
                    })
                    .collect()
            })
            .collect();
        Ok(monotone_maps_restricted(&from.apex, &to.apex, &candidates, limit))
    }
}

/// Compatible tuples `(x_j)` with `diagram(h)(x_j) = x_j'` for every arrow
/// `h: j -> j'`, ordered pointwise; legs are the projections. Tuples are
/// listed lexicographically by component index and named `(x_0,...,x_k)`.
pub fn fpos_limit(diagram: &Functor<FPos>) -> PosetCone {
    let shape = diagram.source();
    let k = shape.object_count();
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); k];
    for a in shape.arrows() {
        if !shape.is_identity(a) {
            let (s, t) = (shape.arrow_source(a), shape.arrow_target(a));
            checks[s.max(t)].push(a);
        }
    }
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; k];
    fn go(
        j: usize,
        diagram: &Functor<FPos>,
        checks: &[Vec<usize>],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let shape = diagram.source();
        if j == current.len() {
            out.push(current.clone());
            return;
        }
        for x in diagram.object(j).elements() {
            current[j] = x;
            let ok = checks[j].iter().all(|&a| {
                diagram.arrow(a).apply(current[shape.arrow_source(a)]) == current[shape.arrow_target(a)]
            });
            if ok {
                go(j + 1, diagram, checks, current, out);
            }
        }
    }
    go(0, diagram, &checks, &mut current, &mut tuples);
    let names = crate::names::distinct(
        tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| diagram.object(j).name(x))
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect(),
    );
    let n = tuples.len();
    let mut leq = vec![false; n * n];
    for (u, tu) in tuples.iter().enumerate() {
        for (v, tv) in tuples.iter().enumerate() {
            leq[u * n + v] = (0..k).all(|j| diagram.object(j).le(tu[j], tv[j]));
        }
    }
    let apex = FinPoset::from_closed(names, leq);
    let legs = (0..k)
        .map(|j| {
            MonotoneMap::new_unchecked(
                apex.clone(),
                diagram.object(j).clone(),
                tuples.iter().map(|t| t[j]).collect(),
            )
        })
        .collect();
    Cone::new(apex, legs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{enumerate_cones, verify_universal_property, FinCat};
    use crate::lattice::{detect_lattice, downset_lattice, is_lattice_hom};

    fn discrete(ps: Vec<FinPoset>) -> Functor<FPos> {
        let arrows = ps.iter().map(MonotoneMap::identity).collect();
        Functor::new(FinCat::discrete(ps.len()), ps, arrows)
    }

    #[test]
    fn product_of_chains_is_a_diamond() {
        let l = fpos_limit(&discrete(vec![FinPoset::chain(2), FinPoset::chain(2)]));
        assert_eq!(l.apex.len(), 4);
        assert!(detect_lattice(&l.apex).unwrap().is_distributive());
        for leg in &l.legs {
            assert!(is_lattice_hom(leg).unwrap());
        }
    }

    #[test]
    fn empty_diagram_is_terminal() {
        let l = fpos_limit(&discrete(vec![]));
        assert_eq!(l.apex.len(), 1);
        assert_eq!(l.apex.name(0), "()");
    }

    #[test]
    fn equalizer_of_parallel_pair() {
        // id and the map collapsing to top on a 3-chain agree only at top
        let c3 = FinPoset::chain(3);
        let shape = FinCat::parallel_pair();
        let f = MonotoneMap::identity(&c3);
        let g = MonotoneMap::new(c3.clone(), c3.clone(), vec![1, 1, 2]).unwrap();
        let gens = shape.generators();
        let map = [(gens[0], f), (gens[1], g)].into_iter().collect();
        let d = Functor::from_generators(&FPos, shape, vec![c3.clone(), c3.clone()], &map).unwrap();
        let l = fpos_limit(&d);
        assert_eq!(l.apex.len(), 2);
    }

    #[test]
    fn limit_passes_universal_property() {
        let d = discrete(vec![FinPoset::chain(2), FinPoset::antichain(2)]);
        let l = fpos_limit(&d);
        let mut probes = Vec::new();
        for apex in [FinPoset::chain(2), FinPoset::antichain(2), FinPoset::chain(3)] {
            probes.extend(enumerate_cones(&FPos, &d, &apex, usize::MAX).unwrap());
        }
        assert!(!probes.is_empty());
        verify_universal_property(&FPos, &d, &l, &probes).unwrap();
    }

    #[test]
    fn product_of_downset_lattices_is_distributive() {
        let a = downset_lattice(&FinPoset::antichain(2)).lattice.carrier().clone();
        let b = FinPoset::chain(3);
        let l = fpos_limit(&discrete(vec![a, b]));
        assert_eq!(l.apex.len(), 12);
        assert!(detect_lattice(&l.apex).unwrap().is_distributive());
    }
}
