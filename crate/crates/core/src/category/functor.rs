use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;

use super::{Category, FinCat};
use crate::error::{Error, Result};

/// A functor out of a finite category, stored as its object and arrow
/// tables.
pub struct Functor<C: Category> {
    source: FinCat,
    objects: Vec<C::Obj>,
    arrows: Vec<C::Mor>,
}

impl<C: Category> Clone for Functor<C> {
    fn clone(&self) -> Self {
        Functor {
            source: self.source.clone(),
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
        }
    }
}

impl<C: Category> PartialEq for Functor<C> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.objects == other.objects && self.arrows == other.arrows
    }
}

impl<C: Category> fmt::Debug for Functor<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functor")
            .field("objects", &self.objects)
            .field("arrows", &self.arrows.len())
            .finish()
    }
}

impl<C: Category> Functor<C> {
    /// Unvalidated table; see [`Functor::validate`].
    pub fn new(source: FinCat, objects: Vec<C::Obj>, arrows: Vec<C::Mor>) -> Self {
        assert_eq!(objects.len(), source.object_count());
        assert_eq!(arrows.len(), source.arrow_count());
        Functor {
            source,
            objects,
            arrows,
        }
    }

    /// Extends images of the generating arrows to every arrow by composing
    /// along generator paths, then validates the result. `generators` maps a
    /// generating arrow index to its image.
    pub fn from_generators(
        c: &C,
        source: FinCat,
        objects: Vec<C::Obj>,
        generators: &HashMap<usize, C::Mor>,
    ) -> Result<Self> {
        let mut arrows = Vec::with_capacity(source.arrow_count());
        for a in source.arrows() {
            let path = source.decompose(a);
            let mut m = c.identity(&objects[source.arrow_source(a)]);
            for g in path {
                let image = generators.get(&g).ok_or_else(|| Error::NotAFunctor {
                    arrow: source.arrow_name(g).to_string(),
                    reason: "no image given for generating arrow".into(),
                })?;
                m = c.compose(image, &m).map_err(|e| Error::NotAFunctor {
                    arrow: source.arrow_name(g).to_string(),
                    reason: e.to_string(),
                })?;
            }
            arrows.push(m);
        }
        let f = Functor {
            source,
            objects,
            arrows,
        };
        f.validate(c)?;
        Ok(f)
    }

    /// Constant functor at `x`.
    pub fn constant(c: &C, source: FinCat, x: C::Obj) -> Self {
        let id = c.identity(&x);
        Functor {
            objects: vec![x; source.object_count()],
            arrows: vec![id; source.arrow_count()],
            source,
        }
    }

    pub fn source(&self) -> &FinCat {
        &self.source
    }

    pub fn objects(&self) -> &[C::Obj] {
        &self.objects
    }

    pub fn arrows(&self) -> &[C::Mor] {
        &self.arrows
    }

    pub fn object(&self, o: usize) -> &C::Obj {
        &self.objects[o]
    }

    pub fn arrow(&self, a: usize) -> &C::Mor {
        &self.arrows[a]
    }

    /// Checks endpoints, identities and every composite.
    pub fn validate(&self, c: &C) -> Result<()> {
        let s = &self.source;
        let fail = |a: usize, reason: &str| Error::NotAFunctor {
            arrow: s.arrow_name(a).to_string(),
            reason: reason.to_string(),
        };
        for a in s.arrows() {
            let m = &self.arrows[a];
            if c.source(m) != self.objects[s.arrow_source(a)] {
                return Err(fail(a, "image has the wrong source"));
            }
            if c.target(m) != self.objects[s.arrow_target(a)] {
                return Err(fail(a, "image has the wrong target"));
            }
            if s.is_identity(a) && *m != c.identity(&self.objects[s.arrow_source(a)]) {
                return Err(fail(a, "identity not preserved"));
            }
        }
        for (g, f) in s.composable_pairs() {
            let gf = s.compose_arrows(g, f).expect("composable");
            let image = c.compose(&self.arrows[g], &self.arrows[f])?;
            if image != self.arrows[gf] {
                return Err(fail(gf, "composite not preserved"));
            }
        }
        Ok(())
    }

    /// Post-composition with a functor between bases.
    pub fn then<D: Category, F: BaseFunctor<C, D>>(&self, f: &F) -> Functor<D> {
        Functor {
            source: self.source.clone(),
            objects: self.objects.iter().map(|x| f.map_object(x)).collect(),
            arrows: self.arrows.iter().map(|m| f.map_morphism(m)).collect(),
        }
    }

    /// Pre-composition with `h: other -> source`, given as object and arrow
    /// index maps.
    pub fn precompose(&self, other: &FinCat, objects: &[usize], arrows: &[usize]) -> Functor<C> {
        Functor {
            source: other.clone(),
            objects: objects.iter().map(|&o| self.objects[o].clone()).collect(),
            arrows: arrows.iter().map(|&a| self.arrows[a].clone()).collect(),
        }
    }
}

/// A natural transformation stored by its components.
pub struct NatTrans<C: Category> {
    pub components: Vec<C::Mor>,
}

impl<C: Category> Clone for NatTrans<C> {
    fn clone(&self) -> Self {
        NatTrans {
            components: self.components.clone(),
        }
    }
}

impl<C: Category> PartialEq for NatTrans<C> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<C: Category> fmt::Debug for NatTrans<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl<C: Category> NatTrans<C> {
    pub fn new(components: Vec<C::Mor>) -> Self {
        NatTrans { components }
    }

    pub fn identity(c: &C, f: &Functor<C>) -> Self {
        NatTrans {
            components: f.objects().iter().map(|x| c.identity(x)).collect(),
        }
    }

    /// Checks component endpoints and every naturality square.
    pub fn validate(&self, c: &C, from: &Functor<C>, to: &Functor<C>) -> Result<()> {
        let s = from.source();
        if s != to.source() || self.components.len() != s.object_count() {
            return Err(Error::Mismatch("natural transformation shape".into()));
        }
        for (o, m) in self.components.iter().enumerate() {
            if c.source(m) != *from.object(o) || c.target(m) != *to.object(o) {
                return Err(Error::NotNatural(format!("component at {}", s.object_name(o))));
            }
        }
        for a in s.arrows() {
            let (x, y) = (s.arrow_source(a), s.arrow_target(a));
            let lhs = c.compose(to.arrow(a), &self.components[x])?;
            let rhs = c.compose(&self.components[y], from.arrow(a))?;
            if lhs != rhs {
                return Err(Error::NotNatural(s.arrow_name(a).to_string()));
            }
        }
        Ok(())
    }
}

/// A functor between base categories, given by its action.
pub trait BaseFunctor<C: Category, D: Category>: Send + Sync {
    fn map_object(&self, x: &C::Obj) -> D::Obj;
    fn map_morphism(&self, f: &C::Mor) -> D::Mor;
}

impl<C: Category, D: Category, F: BaseFunctor<C, D>> BaseFunctor<C, D> for &F {
    fn map_object(&self, x: &C::Obj) -> D::Obj {
        (**self).map_object(x)
    }

    fn map_morphism(&self, f: &C::Mor) -> D::Mor {
        (**self).map_morphism(f)
    }
}

/// The identity functor on `C`.
pub struct IdentityFunctor<C>(PhantomData<fn() -> C>);

impl<C> IdentityFunctor<C> {
    pub fn new() -> Self {
        IdentityFunctor(PhantomData)
    }
}

impl<C> Default for IdentityFunctor<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Category> BaseFunctor<C, C> for IdentityFunctor<C> {
    fn map_object(&self, x: &C::Obj) -> C::Obj {
        x.clone()
    }

    fn map_morphism(&self, f: &C::Mor) -> C::Mor {
        f.clone()
    }
}

/// `second ∘ first`.
pub struct Compose<F, G, D> {
    pub first: F,
    pub second: G,
    _middle: PhantomData<fn() -> D>,
}

impl<F, G, D> Compose<F, G, D> {
    pub fn new(first: F, second: G) -> Self {
        Compose {
            first,
            second,
            _middle: PhantomData,
        }
    }
}

impl<C, D, E, F, G> BaseFunctor<C, E> for Compose<F, G, D>
where
    C: Category,
    D: Category,
    E: Category,
    F: BaseFunctor<C, D>,
    G: BaseFunctor<D, E>,
{
    fn map_object(&self, x: &C::Obj) -> E::Obj {
        self.second.map_object(&self.first.map_object(x))
    }

    fn map_morphism(&self, f: &C::Mor) -> E::Mor {
        self.second.map_morphism(&self.first.map_morphism(f))
    }
}
