//! JSON input formats. Every object rejects unknown keys, and errors carry
//! the source name and the JSON path of the offending value.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use super::fixtures;
use crate::chartheory::VirtualEqBundle;
use crate::cyclonum::{CyclotomicNumber, Rational};
use crate::error::{Error, Result};
use crate::eulerlab::{StrataBase, Stratum, WeightedStrata};
use crate::groupoidstack::{orbits, FiniteGSet};
use crate::grouptheory::presets::preset;
use crate::grouptheory::{FiniteGroup, Subgroup};
use crate::orbicurve::{DivisorTerm, FracDivisor, OrbifoldCurve};

/// Which fixture table a reference should be looked up in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Group,
    GSet,
    Curve,
    Divisor,
    Bundle,
    Strata,
}

/// Text of an input given as a file path or an embedded fixture name
/// (with or without a `.json` suffix). Files take precedence.
pub fn load(kind: Kind, reference: &str) -> Result<(String, Value)> {
    let path = Path::new(reference);
    let (source, text) = if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{reference}: cannot read: {e}")))?;
        (reference.to_string(), text)
    } else {
        let name = reference.strip_suffix(".json").unwrap_or(reference);
        match fixtures::lookup(kind, name) {
            Some(text) => (format!("fixture {name}"), text.to_string()),
            None if kind == Kind::Group => return Ok((format!("preset {reference}"), Value::String(reference.into()))),
            None => {
                return Err(Error::Parse(format!(
                    "{reference}: no such file, and no embedded {kind:?} fixture of that name"
                )))
            }
        }
    };
    let value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
    Ok((source, value))
}

fn at(source: &str, path: &str, e: Error) -> Error {
    let msg = match &e {
        Error::Parse(m) | Error::Validation(m) => m.clone(),
        other => other.to_string(),
    };
    match e {
        Error::Parse(_) | Error::Validation(_) => Error::Parse(format!("{source} at {path}: {msg}")),
        other => other,
    }
}

fn typed<T: for<'de> Deserialize<'de>>(source: &str, path: &str, v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse(format!("{source} at {path}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PermSpec {
    permutations: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableSpec {
    table: Vec<Vec<usize>>,
}

/// `"S3"`, `{"permutations": [...]}` or `{"table": [...]}`.
pub fn group_from_value(source: &str, path: &str, v: &Value) -> Result<FiniteGroup> {
    match v {
        Value::String(name) => preset(name).map_err(|e| at(source, path, e)),
        Value::Object(map) if map.contains_key("permutations") => {
            let spec: PermSpec = typed(source, path, v)?;
            FiniteGroup::from_permutations(&spec.permutations).map_err(|e| at(source, path, e))
        }
        Value::Object(map) if map.contains_key("table") => {
            let spec: TableSpec = typed(source, path, v)?;
            FiniteGroup::from_table(&spec.table).map_err(|e| at(source, path, e))
        }
        _ => Err(Error::Parse(format!(
            "{source} at {path}: expected a preset name, {{\"permutations\": …}} or {{\"table\": …}}"
        ))),
    }
}

pub fn group(reference: &str) -> Result<FiniteGroup> {
    let (source, v) = load(Kind::Group, reference)?;
    group_from_value(&source, "$", &v)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GSetSpec {
    group: Option<Value>,
    points: Option<usize>,
    action: Option<Vec<Vec<usize>>>,
    generator_images: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    natural: bool,
    #[serde(default)]
    trivial: bool,
    cosets: Option<Vec<usize>>,
    union: Option<Vec<Value>>,
}

/// A G-set object, or a string naming a file or fixture.
pub fn gset_from_value(source: &str, path: &str, v: &Value) -> Result<FiniteGSet> {
    if let Value::String(reference) = v {
        return gset(reference);
    }
    let spec: GSetSpec = typed(source, path, v)?;
    let err = |e| at(source, path, e);
    if let Some(parts) = &spec.union {
        if spec.group.is_some() || spec.points.is_some() {
            return Err(Error::Parse(format!("{source} at {path}: \"union\" takes no other keys")));
        }
        let mut iter = parts.iter().enumerate();
        let (_, first) = iter
            .next()
            .ok_or_else(|| Error::Parse(format!("{source} at {path}.union: empty union")))?;
        let mut acc = gset_from_value(source, &format!("{path}.union[0]"), first)?;
        for (i, p) in iter {
            let next = gset_from_value(source, &format!("{path}.union[{i}]"), p)?;
            acc = acc.disjoint_union(&next).map_err(err)?;
        }
        return Ok(acc);
    }
    let gv = spec
        .group
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("{source} at {path}: missing \"group\"")))?;
    let g = Arc::new(group_from_value(source, &format!("{path}.group"), gv)?);
    let forms = [
        spec.action.is_some(),
        spec.generator_images.is_some(),
        spec.natural,
        spec.trivial,
        spec.cosets.is_some(),
    ];
    if forms.iter().filter(|&&f| f).count() != 1 {
        return Err(Error::Parse(format!(
            "{source} at {path}: give exactly one of \"action\", \"generator_images\", \"natural\", \"trivial\", \"cosets\""
        )));
    }
    let check_points = |n: usize| match spec.points {
        Some(p) if p != n => Err(Error::Parse(format!("{source} at {path}.points: {p} given, action has {n}"))),
        _ => Ok(()),
    };
    let x = if let Some(table) = &spec.action {
        check_points(table.len())?;
        FiniteGSet::new(g, table).map_err(err)?
    } else if let Some(images) = &spec.generator_images {
        let gens = g.generators().to_vec();
        let x = FiniteGSet::from_generator_images(g, &gens, images).map_err(err)?;
        check_points(x.points())?;
        x
    } else if spec.natural {
        let x = FiniteGSet::natural(g).map_err(err)?;
        check_points(x.points())?;
        x
    } else if spec.trivial {
        let s = spec
            .points
            .ok_or_else(|| Error::Parse(format!("{source} at {path}: \"trivial\" needs \"points\"")))?;
        FiniteGSet::trivial(g, s)
    } else {
        let gens = spec.cosets.as_ref().unwrap();
        let k = Subgroup::generated_by(g, gens).map_err(err)?;
        let x = FiniteGSet::cosets(&k);
        check_points(x.points())?;
        x
    };
    Ok(x)
}

pub fn gset(reference: &str) -> Result<FiniteGSet> {
    let (source, v) = load(Kind::GSet, reference)?;
    gset_from_value(&source, "$", &v)
}

pub fn curve(reference: &str) -> Result<OrbifoldCurve> {
    let (source, v) = load(Kind::Curve, reference)?;
    typed(&source, "$", &v)
}

pub fn divisor(reference: &str, curve: &OrbifoldCurve) -> Result<FracDivisor> {
    let (source, v) = load(Kind::Divisor, reference)?;
    let terms: Vec<DivisorTerm> = typed(&source, "$", &v)?;
    FracDivisor::from_terms(curve, &terms).map_err(|e| at(&source, "$", e))
}

/// An integer, a string in display form (`"1/2"`, `"1 + z3"`), or the
/// canonical object `{"conductor": N, "coeffs": [...]}`.
pub fn cyclo_from_value(source: &str, path: &str, v: &Value) -> Result<CyclotomicNumber> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(CyclotomicNumber::from_int)
            .ok_or_else(|| Error::Parse(format!("{source} at {path}: only integers may be given as JSON numbers"))),
        Value::String(s) => s.parse().map_err(|e| at(source, path, e)),
        Value::Object(_) => typed(source, path, v),
        _ => Err(Error::Parse(format!("{source} at {path}: expected a cyclotomic number"))),
    }
}

pub fn rational_from_value(source: &str, path: &str, v: &Value) -> Result<Rational> {
    let c = cyclo_from_value(source, path, v)?;
    c.as_rational()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("{source} at {path}: expected a rational, got {c}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleSpec {
    gset: Value,
    orbit_characters: Vec<OrbitCharacter>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitCharacter {
    orbit: usize,
    values_on_stab_classes: Vec<Value>,
}

pub fn bundle(reference: &str) -> Result<VirtualEqBundle> {
    let (source, v) = load(Kind::Bundle, reference)?;
    let spec: BundleSpec = typed(&source, "$", &v)?;
    let base = Arc::new(gset_from_value(&source, "$.gset", &spec.gset)?);
    let n_orbits = orbits(&base).len();
    let mut values: Vec<Option<Vec<CyclotomicNumber>>> = vec![None; n_orbits];
    for (i, oc) in spec.orbit_characters.iter().enumerate() {
        let path = format!("$.orbit_characters[{i}]");
        if oc.orbit >= n_orbits {
            return Err(Error::Parse(format!("{source} at {path}.orbit: {} orbits only", n_orbits)));
        }
        if values[oc.orbit].is_some() {
            return Err(Error::Parse(format!("{source} at {path}.orbit: orbit {} given twice", oc.orbit)));
        }
        let row = oc
            .values_on_stab_classes
            .iter()
            .enumerate()
            .map(|(j, v)| cyclo_from_value(&source, &format!("{path}.values_on_stab_classes[{j}]"), v))
            .collect::<Result<Vec<_>>>()?;
        values[oc.orbit] = Some(row);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(o, v)| v.ok_or_else(|| Error::Parse(format!("{source}: no character given for orbit {o}"))))
        .collect::<Result<Vec<_>>>()?;
    let bundle = VirtualEqBundle::from_values(base, values).map_err(|e| at(&source, "$.orbit_characters", e))?;
    for (o, chi) in bundle.chars().iter().enumerate() {
        if !chi.integral_on_cyclic_subgroups()? {
            return Err(Error::Parse(format!(
                "{source} at $.orbit_characters: the values for orbit {o} are not a virtual character"
            )));
        }
    }
    Ok(bundle)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StrataSpec {
    gset: Option<Value>,
    curve: Option<Value>,
    strata: Vec<Value>,
    point_weights: Option<Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StratumSpec {
    points: Option<Vec<usize>>,
    labels: Option<Vec<String>>,
    #[serde(default)]
    open: bool,
    weight: Value,
}

/// `{"gset"|"curve": …, "strata": [{"points"|"labels"|"open": …, "weight": w}, …]}`,
/// or for a G-set `{"gset": …, "strata": [[points], …], "point_weights": [w, …]}`.
pub fn strata(reference: &str) -> Result<WeightedStrata> {
    let (source, v) = load(Kind::Strata, reference)?;
    let spec: StrataSpec = typed(&source, "$", &v)?;
    let base = match (&spec.gset, &spec.curve) {
        (Some(g), None) => StrataBase::GSet(Arc::new(gset_from_value(&source, "$.gset", g)?)),
        (None, Some(c)) => {
            let c: OrbifoldCurve = match c {
                Value::String(r) => curve(r)?,
                other => typed(&source, "$.curve", other)?,
            };
            StrataBase::Curve(c)
        }
        _ => return Err(Error::Parse(format!("{source}: give exactly one of \"gset\" and \"curve\""))),
    };
    if let Some(weights) = &spec.point_weights {
        let StrataBase::GSet(x) = base else {
            return Err(Error::Parse(format!("{source}: \"point_weights\" needs a G-set base")));
        };
        let sigma = weights
            .iter()
            .enumerate()
            .map(|(i, w)| rational_from_value(&source, &format!("$.point_weights[{i}]"), w))
            .collect::<Result<Vec<_>>>()?;
        let parts: Vec<Vec<usize>> = typed(&source, "$.strata", &Value::Array(spec.strata.clone()))?;
        return WeightedStrata::from_point_weights(x, parts, &sigma).map_err(|e| at(&source, "$.strata", e));
    }
    let mut out = Vec::with_capacity(spec.strata.len());
    for (i, sv) in spec.strata.iter().enumerate() {
        let path = format!("$.strata[{i}]");
        let s: StratumSpec = typed(&source, &path, sv)?;
        let stratum = match (s.points, s.labels, s.open) {
            (Some(p), None, false) => Stratum::Points(p),
            (None, Some(l), false) => Stratum::CurvePoints(l),
            (None, None, true) => Stratum::Open,
            _ => {
                return Err(Error::Parse(format!(
                    "{source} at {path}: give exactly one of \"points\", \"labels\", \"open\""
                )))
            }
        };
        let w = rational_from_value(&source, &format!("{path}.weight"), &s.weight)?;
        out.push((stratum, w));
    }
    WeightedStrata::new(base, out).map_err(|e| at(&source, "$.strata", e))
}
