//! JSON formats for posets, finite-set labellings, diagrams and limit
//! results.
//!
//! Output is canonical: keys are sorted, poset elements and covers are
//! listed lexicographically, intervals in canonical order. Parsing an
//! emitted document and emitting it again reproduces it byte for byte.

use std::collections::{BTreeMap, HashMap};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::category::{FinCat, FinSet, FinSetMor, FinSetObj, Functor};
use crate::labelled::{Labelled, LabelledMorphism, LabelledObject};
use crate::poset::{FinPoset, MonotoneMap};
use crate::posetal::LocalityReport;
use crate::{Error, Result};

/// `{"elements": [...], "leq": [[a, b], ...]}`; the relation is closed on
/// input and emitted as its covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

/// A finite set by its tokens, in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetJson {
    pub carrier: Vec<String>,
}

/// A function as a token map keyed by source tokens.
pub type MapJson = BTreeMap<String, String>;

/// The label of one interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelJson {
    pub interval: (String, String),
    pub carrier: Vec<String>,
}

/// The label of one precision cover, from the coarser interval to the finer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub from: (String, String),
    pub to: (String, String),
    pub map: MapJson,
}

/// A labelled object: a poset, one label per interval and one map per
/// precision cover. Other arrows are composites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledObjectJson {
    pub poset: PosetJson,
    pub labels: Vec<LabelJson>,
    #[serde(default)]
    pub arrows: Vec<ArrowJson>,
}

/// One component of a labelled morphism, at a source interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub interval: (String, String),
    pub map: MapJson,
}

/// A labelled morphism; source and target come from context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledMorphismJson {
    pub shape_map: MapJson,
    pub components: Vec<ComponentJson>,
}

/// A generating arrow of a diagram shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// Two paths of edge names, in application order, that are identified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationJson {
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

/// A finite shape category presented by a graph and equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeJson {
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<EdgeJson>,
    #[serde(default)]
    pub equations: Vec<EquationJson>,
}

/// A diagram in `L(FinSet)`: objects and generating arrows keyed by the
/// shape's identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub base: String,
    pub shape: ShapeJson,
    pub objects: BTreeMap<String, LabelledObjectJson>,
    #[serde(default)]
    pub arrows: BTreeMap<String, LabelledMorphismJson>,
}

/// One checked square of a locality report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareJson {
    pub left: (String, String),
    pub vertex: (String, String),
    pub right: (String, String),
    pub pullback: (String, String),
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalityJson {
    pub verdict: bool,
    pub squares: Vec<SquareJson>,
}

/// A limit: the apex, the legs keyed by diagram object, and the locality
/// report when the limit was taken in the posetal subcategory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitJson {
    pub apex: LabelledObjectJson,
    pub legs: BTreeMap<String, LabelledMorphismJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locality: Option<LocalityJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes_checked: Option<usize>,
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    // routing through Value sorts every object's keys
    let v = serde_json::to_value(value).expect("JSON types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

/// Parses any of the document types; syntax and schema errors become
/// [`Error::Parse`].
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn pair(p: &FinPoset, i: crate::interval::Interval) -> (String, String) {
    (p.name(i.lo).to_string(), p.name(i.hi).to_string())
}

pub fn poset_to_json(p: &FinPoset) -> PosetJson {
    let mut elements = p.names().to_vec();
    elements.sort();
    let mut leq: Vec<(String, String)> = p
        .covers()
        .into_iter()
        .map(|(a, b)| (p.name(a).to_string(), p.name(b).to_string()))
        .collect();
    leq.sort();
    PosetJson { elements, leq }
}

/// The poset with elements in lexicographic order.
pub fn poset_from_json(j: &PosetJson) -> Result<FinPoset> {
    let mut elements = j.elements.clone();
    elements.sort();
    FinPoset::new(elements, j.leq.iter().map(|(a, b)| (a.as_str(), b.as_str())))
}

pub fn set_to_json(x: &FinSetObj) -> SetJson {
    SetJson {
        carrier: x.tokens().to_vec(),
    }
}

pub fn set_from_json(j: &SetJson) -> Result<FinSetObj> {
    FinSetObj::new(j.carrier.iter().cloned())
}

pub fn map_to_json(f: &FinSetMor) -> MapJson {
    (0..f.source().len())
        .map(|i| (f.source().token(i).to_string(), f.target().token(f.apply(i)).to_string()))
        .collect()
}

pub fn map_from_json(source: &FinSetObj, target: &FinSetObj, j: &MapJson) -> Result<FinSetMor> {
    if let Some(extra) = j.keys().find(|k| source.index_of(k).is_none()) {
        return Err(Error::UnknownElement(extra.clone()));
    }
    let pairs: Vec<(&str, &str)> = j.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    FinSetMor::from_tokens(source, target, &pairs)
}

pub fn object_to_json(x: &LabelledObject<FinSet>) -> LabelledObjectJson {
    let ip = x.intervals();
    let p = x.shape();
    let labels = (0..ip.len())
        .map(|k| LabelJson {
            interval: pair(p, ip.interval(k)),
            carrier: x.label(k).tokens().to_vec(),
        })
        .collect();
    let mut arrows: Vec<ArrowJson> = ip
        .carrier()
        .covers()
        .into_iter()
        .map(|(i, j)| ArrowJson {
            from: pair(p, ip.interval(i)),
            to: pair(p, ip.interval(j)),
            map: map_to_json(x.arrow_label(i, j).expect("covers are arrows")),
        })
        .collect();
    arrows.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
    LabelledObjectJson {
        poset: poset_to_json(p),
        labels,
        arrows,
    }
}

pub fn object_from_json(l: &Labelled<FinSet>, j: &LabelledObjectJson) -> Result<LabelledObject<FinSet>> {
    let shape = poset_from_json(&j.poset)?;
    let ip = crate::interval::interval_poset(&shape);
    let mut labels: Vec<Option<FinSetObj>> = vec![None; ip.len()];
    for label in &j.labels {
        let k = ip.index_by_names(&label.interval.0, &label.interval.1)?;
        if labels[k].is_some() {
            return Err(Error::DuplicateElement(ip.name(k).to_string()));
        }
        labels[k] = Some(FinSetObj::new(label.carrier.iter().cloned())?);
    }
    let labels: Vec<FinSetObj> = labels
        .into_iter()
        .enumerate()
        .map(|(k, x)| x.ok_or_else(|| Error::Mismatch(format!("no label for interval {}", ip.name(k)))))
        .collect::<Result<_>>()?;
    let mut covers = HashMap::new();
    for a in &j.arrows {
        let i = ip.index_by_names(&a.from.0, &a.from.1)?;
        let k = ip.index_by_names(&a.to.0, &a.to.1)?;
        if !ip.carrier().covers_pair(i, k) {
            return Err(Error::Mismatch(format!(
                "arrow {} -> {} is not a precision cover",
                ip.name(i),
                ip.name(k)
            )));
        }
        if covers.insert((i, k), map_from_json(&labels[i], &labels[k], &a.map)?).is_some() {
            return Err(Error::DuplicateElement(format!("{} -> {}", ip.name(i), ip.name(k))));
        }
    }
    for (i, k) in ip.carrier().covers() {
        if !covers.contains_key(&(i, k)) {
            return Err(Error::Mismatch(format!("no map for cover {} -> {}", ip.name(i), ip.name(k))));
        }
    }
    l.object_from_covers(&shape, labels, &covers)
}

pub fn morphism_to_json(m: &LabelledMorphism<FinSet>) -> LabelledMorphismJson {
    let (p, q) = (m.source().shape(), m.target().shape());
    let shape_map = p
        .elements()
        .map(|a| (p.name(a).to_string(), q.name(m.shape_map().apply(a)).to_string()))
        .collect();
    let ip = m.source().intervals();
    let components = (0..ip.len())
        .map(|k| ComponentJson {
            interval: pair(p, ip.interval(k)),
            map: map_to_json(m.component(k)),
        })
        .collect();
    LabelledMorphismJson { shape_map, components }
}

pub fn morphism_from_json(
    l: &Labelled<FinSet>,
    source: &LabelledObject<FinSet>,
    target: &LabelledObject<FinSet>,
    j: &LabelledMorphismJson,
) -> Result<LabelledMorphism<FinSet>> {
    let pairs: Vec<(&str, &str)> = j.shape_map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let f = MonotoneMap::from_names(source.shape(), target.shape(), &pairs)?;
    let ip = source.intervals();
    let idx = ip.map_indices(&f, target.intervals());
    let mut components: Vec<Option<FinSetMor>> = vec![None; ip.len()];
    for c in &j.components {
        let k = ip.index_by_names(&c.interval.0, &c.interval.1)?;
        if components[k].is_some() {
            return Err(Error::DuplicateElement(ip.name(k).to_string()));
        }
        components[k] = Some(map_from_json(source.label(k), target.label(idx[k]), &c.map)?);
    }
    let components = components
        .into_iter()
        .enumerate()
        .map(|(k, c)| c.ok_or_else(|| Error::Mismatch(format!("no component at interval {}", ip.name(k)))))
        .collect::<Result<_>>()?;
    l.make_morphism(source, target, f, components)
}

/// The shape category of a bundle.
pub fn shape_from_json(j: &ShapeJson) -> Result<FinCat> {
    let object = |name: &str| {
        j.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    };
    let edges = j
        .arrows
        .iter()
        .map(|e| Ok((e.name.clone(), object(&e.source)?, object(&e.target)?)))
        .collect::<Result<Vec<_>>>()?;
    let edge = |name: &String| {
        j.arrows
            .iter()
            .position(|e| &e.name == name)
            .ok_or_else(|| Error::UnknownElement(name.clone()))
    };
    let equations = j
        .equations
        .iter()
        .map(|eq| {
            Ok((
                eq.lhs.iter().map(edge).collect::<Result<Vec<_>>>()?,
                eq.rhs.iter().map(edge).collect::<Result<Vec<_>>>()?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    FinCat::free(&j.objects, &edges, &equations)
}

/// A diagram in `L(FinSet)` with its validated functor.
pub fn diagram_from_json(l: &Labelled<FinSet>, j: &BundleJson) -> Result<Functor<Labelled<FinSet>>> {
    if j.base != "finset" {
        return Err(Error::Parse(format!("unsupported base `{}`", j.base)));
    }
    let shape = shape_from_json(&j.shape)?;
    let objects = shape
        .objects()
        .map(|o| {
            let name = shape.object_name(o);
            let x = j.objects.get(name).ok_or_else(|| Error::UnknownElement(name.to_string()))?;
            object_from_json(l, x)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = j.objects.keys().find(|k| shape.object_index(k).is_none()) {
        return Err(Error::UnknownElement(extra.clone()));
    }
    if let Some(extra) = j.arrows.keys().find(|k| !j.shape.arrows.iter().any(|e| &e.name == *k)) {
        return Err(Error::UnknownElement(extra.clone()));
    }
    let mut generators = HashMap::new();
    for e in &j.shape.arrows {
        let a = shape.arrow_index(&e.name).expect("edges are arrows");
        let m = j.arrows.get(&e.name).ok_or_else(|| Error::UnknownElement(e.name.clone()))?;
        let (s, t) = (shape.arrow_source(a), shape.arrow_target(a));
        generators.insert(a, morphism_from_json(l, &objects[s], &objects[t], m)?);
    }
    Functor::from_generators(l, shape, objects, &generators)
}

/// The bundle for a diagram whose shape is presented by `shape`.
pub fn diagram_to_json(shape: &ShapeJson, diagram: &Functor<Labelled<FinSet>>) -> BundleJson {
    let cat = diagram.source();
    let objects = cat
        .objects()
        .map(|o| (cat.object_name(o).to_string(), object_to_json(diagram.object(o))))
        .collect();
    let arrows = shape
        .arrows
        .iter()
        .map(|e| {
            let a = cat.arrow_index(&e.name).expect("edges are arrows");
            (e.name.clone(), morphism_to_json(diagram.arrow(a)))
        })
        .collect();
    BundleJson {
        base: "finset".into(),
        shape: shape.clone(),
        objects,
        arrows,
    }
}

pub fn locality_to_json(x: &LabelledObject<FinSet>, report: &LocalityReport) -> LocalityJson {
    let p = x.shape();
    LocalityJson {
        verdict: report.verdict,
        squares: report
            .witnesses
            .iter()
            .map(|w| SquareJson {
                left: pair(p, w.cospan.left),
                vertex: pair(p, w.cospan.vertex),
                right: pair(p, w.cospan.right),
                pullback: pair(p, w.cospan.pullback),
                passed: w.passed,
            })
            .collect(),
    }
}

/// The limit document; legs are keyed by the diagram's object names.
pub fn limit_to_json(
    diagram: &Functor<Labelled<FinSet>>,
    apex: &LabelledObject<FinSet>,
    legs: &[LabelledMorphism<FinSet>],
    locality: Option<&LocalityReport>,
) -> LimitJson {
    let cat = diagram.source();
    LimitJson {
        apex: object_to_json(apex),
        legs: legs
            .iter()
            .enumerate()
            .map(|(j, m)| (cat.object_name(j).to_string(), morphism_to_json(m)))
            .collect(),
        locality: locality.map(|r| locality_to_json(apex, r)),
        probes_checked: None,
    }
}

/// Re-validates a limit document against its diagram: the apex and every
/// leg must parse as a labelled object and morphisms.
pub fn limit_from_json(
    l: &Labelled<FinSet>,
    diagram: &Functor<Labelled<FinSet>>,
    j: &LimitJson,
) -> Result<(LabelledObject<FinSet>, Vec<LabelledMorphism<FinSet>>)> {
    let apex = object_from_json(l, &j.apex)?;
    let cat = diagram.source();
    let legs = cat
        .objects()
        .map(|o| {
            let name = cat.object_name(o);
            let m = j.legs.get(name).ok_or_else(|| Error::UnknownElement(name.to_string()))?;
            morphism_from_json(l, &apex, diagram.object(o), m)
        })
        .collect::<Result<Vec<_>>>()?;
    if !crate::category::is_cone(l, diagram, &crate::category::Cone::new(apex.clone(), legs.clone()))? {
        return Err(Error::NotACone("legs do not commute with the diagram".into()));
    }
    Ok((apex, legs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{bounded_object, labelled_diagram, DiagramBounds, DiagramKind};
    use crate::limit::compute_limit;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn poset_round_trip() {
        let j: PosetJson = from_str(r#"{"elements": ["b", "a", "c"], "leq": [["a", "b"], ["b", "c"]]}"#).unwrap();
        let p = poset_from_json(&j).unwrap();
        assert!(p.le(p.index_of("a").unwrap(), p.index_of("c").unwrap()));
        let text = to_canonical(&poset_to_json(&p));
        let again = poset_from_json(&from_str(&text).unwrap()).unwrap();
        assert_eq!(to_canonical(&poset_to_json(&again)), text);
    }

    #[test]
    fn unknown_fields_are_parse_errors() {
        let r: Result<PosetJson> = from_str(r#"{"elements": [], "order": []}"#);
        assert!(matches!(r, Err(Error::Parse(_))));
    }

    #[test]
    fn object_round_trip_is_byte_exact() {
        let l = Labelled::new(FinSet);
        let mut rng = StdRng::seed_from_u64(1);
        let p = crate::poset::FinPoset::antichain(2);
        let d = crate::lattice::downset_lattice(&p).lattice;
        let x = bounded_object(&l, &mut rng, d.carrier(), 2, 4).unwrap();
        let text = to_canonical(&object_to_json(&x));
        let y = object_from_json(&l, &from_str(&text).unwrap()).unwrap();
        assert_eq!(to_canonical(&object_to_json(&y)), text);
    }

    #[test]
    fn diagram_and_limit_round_trip() {
        let l = Labelled::new(FinSet);
        let mut rng = StdRng::seed_from_u64(2);
        let d = labelled_diagram(&l, &mut rng, DiagramKind::Cospan, DiagramBounds { shape: 3, carrier: 3 }).unwrap();
        let shape = ShapeJson {
            objects: vec!["left".into(), "vertex".into(), "right".into()],
            arrows: vec![
                EdgeJson { name: "f".into(), source: "left".into(), target: "vertex".into() },
                EdgeJson { name: "g".into(), source: "right".into(), target: "vertex".into() },
            ],
            equations: vec![],
        };
        let bundle = diagram_to_json(&shape, &d);
        let text = to_canonical(&bundle);
        let parsed = diagram_from_json(&l, &from_str(&text).unwrap()).unwrap();
        assert_eq!(to_canonical(&diagram_to_json(&shape, &parsed)), text);

        let result = compute_limit(&l, &parsed).unwrap();
        let out = to_canonical(&limit_to_json(&parsed, &result.apex, &result.legs, None));
        let (apex, legs) = limit_from_json(&l, &parsed, &from_str(&out).unwrap()).unwrap();
        assert_eq!(to_canonical(&limit_to_json(&parsed, &apex, &legs, None)), out);
    }
}
