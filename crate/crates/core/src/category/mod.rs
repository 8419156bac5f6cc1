//! Pluggable base categories.
//!
//! A base declares what it can do through the optional methods of
//! [`Category`]; anything left at its default reports
//! [`Error::CapabilityMissing`]. The limit engine only ever asks for what a
//! given step needs, so partial bases work as far as they can.

mod fincat;
mod finset;
mod functor;
mod universal;

use std::fmt::Debug;

pub use fincat::{thin_category, FinCat};
pub use finset::{ConstantAt, FinSet, FinSetMor, FinSetObj, HomFrom, ProductWith};
pub use functor::{BaseFunctor, Compose, Functor, IdentityFunctor, NatTrans};
pub use universal::{
    cospan_diagram, enumerate_cones, is_cone, is_limit_cone, is_pullback_square, probe_cones,
    sample_cones, verify_universal_property, LimitCertificate, Square,
};

use crate::error::{Error, Result};

/// A category whose objects and morphisms are concrete values.
pub trait Category: Clone + Debug + Send + Sync {
    type Obj: Clone + PartialEq + Debug + Send + Sync;
    type Mor: Clone + PartialEq + Debug + Send + Sync;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;

    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;

    /// Every morphism `a -> b`.
    fn hom(&self, _a: &Self::Obj, _b: &Self::Obj) -> Result<Vec<Self::Mor>> {
        Err(Error::CapabilityMissing("hom-set enumeration"))
    }

    fn initial_object(&self) -> Option<Self::Obj> {
        None
    }

    /// The unique morphism out of the initial object.
    fn from_initial(&self, _x: &Self::Obj) -> Option<Self::Mor> {
        None
    }

    /// A canonical limit cone, `Err(NoLimit)` when none exists.
    fn limit(&self, _diagram: &Functor<Self>) -> Result<Cone<Self>>
    where
        Self: Sized,
    {
        Err(Error::CapabilityMissing("finite limits"))
    }

    /// Morphisms `m: from.apex -> to.apex` with `to.legs[j] ∘ m = from.legs[j]`
    /// for every `j`, at most `limit` of them. With no legs this enumerates
    /// the hom-set.
    fn mediators(&self, from: &Cone<Self>, to: &Cone<Self>, limit: usize) -> Result<Vec<Self::Mor>>
    where
        Self: Sized,
    {
        let mut out = Vec::new();
        for m in self.hom(&from.apex, &to.apex)? {
            if out.len() >= limit {
                break;
            }
            let mut ok = true;
            for (t, f) in to.legs.iter().zip(&from.legs) {
                if self.compose(t, &m)? != *f {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(m);
            }
        }
        Ok(out)
    }

    /// The unique mediator into a limit cone.
    fn factor(&self, limit: &Cone<Self>, cone: &Cone<Self>) -> Result<Self::Mor>
    where
        Self: Sized,
    {
        let mut found = self.mediators(cone, limit, 2)?;
        match found.len() {
            1 => Ok(found.pop().unwrap()),
            n => Err(Error::CounterExample { probe: 0, mediators: n }),
        }
    }
}

/// An apex with one leg per object of the indexing shape.
pub struct Cone<C: Category> {
    pub apex: C::Obj,
    pub legs: Vec<C::Mor>,
}

impl<C: Category> Cone<C> {
    pub fn new(apex: C::Obj, legs: Vec<C::Mor>) -> Self {
        Cone { apex, legs }
    }

    /// Precomposes every leg with `m: x -> apex`.
    pub fn precompose(&self, c: &C, m: &C::Mor) -> Result<Cone<C>> {
        let legs = self
            .legs
            .iter()
            .map(|l| c.compose(l, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cone::new(c.source(m), legs))
    }
}

impl<C: Category> Clone for Cone<C> {
    fn clone(&self) -> Self {
        Cone {
            apex: self.apex.clone(),
            legs: self.legs.clone(),
        }
    }
}

impl<C: Category> Debug for Cone<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cone")
            .field("apex", &self.apex)
            .field("legs", &self.legs)
            .finish()
    }
}

impl<C: Category> PartialEq for Cone<C> {
    fn eq(&self, other: &Self) -> bool {
        self.apex == other.apex && self.legs == other.legs
    }
}
