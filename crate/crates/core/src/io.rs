//! JSON file formats.
//!
//! Rationals are strings, `"p/q"` or decimal integers (plain JSON integers
//! are accepted on input); weights additionally allow `"inf"` and `"-inf"`.
//!
//! ```json
//! {"points": ["a","b","c"], "dist": [["0","1","2"],["1","0","2"],["2","2","0"]]}
//! {"kind": "maxmin", "space": <space or path>, "atoms": [{"point": "a", "weight": "inf"}]}
//! {"values": {"a": "3", "b": "10"}}
//! {"source": <space>, "target": <space>, "map": {"a": "p"}}
//! {"kind": "maxmin", "space": ..., "outer": [{"measure": <measure>, "weight": "inf"}]}
//! {"kind": "maxmin", "source": ..., "target": ..., "images": {"a": [<atom>, ...]}}
//! {"n": 3, "generators": [[2,1,3],[1,3,2]]}
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::ext_real::format_rational;
use crate::monad::Kernel;
use crate::sympow::{Permutation, PermutationGroup};
use crate::{
    parse_rational, Error, ExtReal, FinUltrametricSpace, Measure, MeasureKind, MeasureOfMeasures,
    PointMap, Rational, Result, TestFunction, Weighted,
};

/// A rational in its string encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRational(pub Rational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_rational(&s)
                .map(JsonRational)
                .map_err(de::Error::custom),
            Raw::Int(n) => Ok(JsonRational(Rational::from_integer(n.into()))),
        }
    }
}

impl fmt::Display for JsonRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

pub fn rational_string(r: &Rational) -> String {
    format_rational(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub dist: Vec<Vec<JsonRational>>,
}

/// Inline space or a path to a space file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Inline(SpaceJson),
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomJson {
    pub point: String,
    pub weight: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub kind: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceRef>,
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestFunctionJson {
    pub values: BTreeMap<String, JsonRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMapJson {
    pub source: SpaceRef,
    pub target: SpaceRef,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterAtomJson {
    pub measure: MeasureJson,
    pub weight: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureOfMeasuresJson {
    pub kind: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceRef>,
    pub outer: Vec<OuterAtomJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelJson {
    pub kind: MeasureKind,
    pub source: SpaceRef,
    pub target: SpaceRef,
    pub images: BTreeMap<String, Vec<AtomJson>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorsJson {
    pub n: usize,
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
}

pub fn space_from_json(json: &SpaceJson) -> Result<Arc<FinUltrametricSpace>> {
    let dist = json
        .dist
        .iter()
        .map(|row| row.iter().map(|r| r.0.clone()).collect())
        .collect();
    FinUltrametricSpace::new(json.points.clone(), dist).map(Arc::new)
}

pub fn space_to_json(space: &FinUltrametricSpace) -> SpaceJson {
    SpaceJson {
        points: space.labels().to_vec(),
        dist: space
            .matrix()
            .iter()
            .map(|row| row.iter().cloned().map(JsonRational).collect())
            .collect(),
    }
}

fn atoms_from_json(atoms: &[AtomJson]) -> Vec<(&str, ExtReal)> {
    atoms
        .iter()
        .map(|a| (a.point.as_str(), a.weight.clone()))
        .collect()
}

fn atoms_to_json(m: &Measure) -> Vec<AtomJson> {
    m.labelled_atoms()
        .into_iter()
        .map(|(point, weight)| AtomJson { point, weight })
        .collect()
}

/// Builds a measure on an already resolved space.
pub fn measure_from_json(json: &MeasureJson, space: Arc<FinUltrametricSpace>) -> Result<Measure> {
    Measure::from_labels(json.kind, space, atoms_from_json(&json.atoms))
}

/// Measure with its space inlined.
pub fn measure_to_json_struct(m: &Measure) -> MeasureJson {
    MeasureJson {
        kind: m.kind(),
        space: Some(SpaceRef::Inline(space_to_json(m.space()))),
        atoms: atoms_to_json(m),
    }
}

pub fn measure_to_json(m: &Measure) -> Value {
    serde_json::to_value(measure_to_json_struct(m)).expect("serializable")
}

/// `{"label": "weight", ...}` in atom order.
pub fn atom_map(m: &Measure) -> Value {
    weighted_to_json(m.weights(), |&p| m.space().label(p).to_string())
}

pub fn weighted_to_json<P: Ord + Clone>(
    w: &Weighted<P>,
    mut label: impl FnMut(&P) -> String,
) -> Value {
    let map: serde_json::Map<String, Value> = w
        .iter()
        .map(|(p, v)| (label(p), Value::String(v.to_string())))
        .collect();
    Value::Object(map)
}

pub fn test_function_from_json(
    json: &TestFunctionJson,
    space: Arc<FinUltrametricSpace>,
) -> Result<TestFunction> {
    let values = json
        .values
        .iter()
        .map(|(k, v)| (k.clone(), v.0.clone()))
        .collect();
    TestFunction::from_labels(space, &values)
}

pub fn point_map_from_json(
    json: &PointMapJson,
    source: Arc<FinUltrametricSpace>,
    target: Arc<FinUltrametricSpace>,
) -> Result<PointMap> {
    PointMap::from_labels(source, target, &json.map)
}

pub fn point_map_to_json(f: &PointMap) -> PointMapJson {
    PointMapJson {
        source: SpaceRef::Inline(space_to_json(f.source())),
        target: SpaceRef::Inline(space_to_json(f.target())),
        map: f.to_label_map(),
    }
}

/// Inner measures must not carry a space that differs from `space`.
pub fn measure_of_measures_from_json(
    json: &MeasureOfMeasuresJson,
    space: Arc<FinUltrametricSpace>,
) -> Result<MeasureOfMeasures> {
    let outer = json
        .outer
        .iter()
        .map(|o| {
            if let Some(SpaceRef::Inline(s)) = &o.measure.space {
                if *space_from_json(s)? != *space {
                    return Err(Error::MismatchedSpaces);
                }
            }
            Ok((
                measure_from_json(&o.measure, space.clone())?,
                o.weight.clone(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    MeasureOfMeasures::new(json.kind, space, outer)
}

pub fn measure_of_measures_to_json(m: &MeasureOfMeasures) -> Value {
    let outer: Vec<OuterAtomJson> = m
        .outer_atoms()
        .iter()
        .map(|(inner, w)| OuterAtomJson {
            measure: MeasureJson {
                kind: inner.kind(),
                space: None,
                atoms: atoms_to_json(inner),
            },
            weight: w.clone(),
        })
        .collect();
    serde_json::to_value(MeasureOfMeasuresJson {
        kind: m.kind(),
        space: Some(SpaceRef::Inline(space_to_json(m.space()))),
        outer,
    })
    .expect("serializable")
}

pub fn kernel_from_json(
    json: &KernelJson,
    source: Arc<FinUltrametricSpace>,
    target: Arc<FinUltrametricSpace>,
) -> Result<Kernel> {
    for key in json.images.keys() {
        source.index_of(key)?;
    }
    let images = source
        .labels()
        .iter()
        .map(|x| {
            let atoms = json
                .images
                .get(x)
                .ok_or_else(|| Error::IncompleteFunction(x.clone()))?;
            Measure::from_labels(json.kind, target.clone(), atoms_from_json(atoms))
        })
        .collect::<Result<_>>()?;
    Kernel::new(source, target, images)
}

pub fn kernel_to_json(k: &Kernel) -> KernelJson {
    KernelJson {
        kind: k.kind(),
        source: SpaceRef::Inline(space_to_json(k.source())),
        target: SpaceRef::Inline(space_to_json(k.target())),
        images: (0..k.source().len())
            .map(|x| (k.source().label(x).to_string(), atoms_to_json(&k.image(x))))
            .collect(),
    }
}

pub fn group_from_json(json: &GeneratorsJson, budget: usize) -> Result<PermutationGroup> {
    let gens = json
        .generators
        .iter()
        .map(|g| Permutation::from_one_based(g))
        .collect::<Result<Vec<_>>>()?;
    PermutationGroup::generate(json.n, &gens, budget)
}

pub fn group_to_json(g: &PermutationGroup) -> Value {
    let elements: Vec<Vec<usize>> = g
        .elements()
        .iter()
        .map(|p| p.images().iter().map(|i| i + 1).collect())
        .collect();
    json!({ "n": g.arity(), "order": g.order(), "elements": elements })
}
