//! Wire formats: JSON representations of posets, boolean algebras,
//! vectors, ideals, and poset functions, plus DOT and CSV exports.
//!
//! Rationals travel as strings in lowest terms (`"3/4"`, integers plain);
//! ideals carry one-based zero sets; poset files list the full
//! reflexive-transitive order relation and are validated on load.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boolalg::FinBoolAlg;
use crate::error::{Error, Result};
use crate::lalg::{LIdeal, LVec};
use crate::normal::NormalFn;
use crate::poset::FinPoset;
use crate::rat;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub le: Vec<(String, String)>,
}

pub fn poset_to_json(p: &FinPoset) -> PosetJson {
    PosetJson {
        elements: p.labels().to_vec(),
        le: p.pairs(),
    }
}

pub fn poset_from_json(j: &PosetJson) -> Result<FinPoset> {
    FinPoset::from_pairs(j.elements.clone(), &j.le)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoolAlgJson {
    pub atoms: Vec<String>,
}

pub fn boolalg_to_json(b: &FinBoolAlg) -> BoolAlgJson {
    BoolAlgJson {
        atoms: b.atom_names().to_vec(),
    }
}

pub fn boolalg_from_json(j: &BoolAlgJson) -> Result<FinBoolAlg> {
    FinBoolAlg::new(j.atoms.clone())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub coords: Vec<String>,
}

pub fn vector_to_json(v: &LVec) -> VectorJson {
    VectorJson {
        dim: v.dim(),
        coords: v.coords().iter().map(rat::format).collect(),
    }
}

pub fn vector_from_json(j: &VectorJson) -> Result<LVec> {
    if j.coords.len() != j.dim {
        return Err(Error::BadInput(format!(
            "declared dimension {} but {} coordinates",
            j.dim,
            j.coords.len()
        )));
    }
    LVec::new(
        j.coords
            .iter()
            .map(|s| rat::parse(s))
            .collect::<Result<Vec<_>>>()?,
    )
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IdealJson {
    pub dim: usize,
    /// One-based coordinate indices.
    pub zero_set: Vec<usize>,
}

pub fn ideal_to_json(i: &LIdeal) -> IdealJson {
    IdealJson {
        dim: i.dim(),
        zero_set: i.zero_set().iter().map(|z| z + 1).collect(),
    }
}

pub fn ideal_from_json(j: &IdealJson) -> Result<LIdeal> {
    let mut zero = std::collections::BTreeSet::new();
    for &z in &j.zero_set {
        if z == 0 {
            return Err(Error::BadInput(
                "zero-set indices are one-based; found 0".into(),
            ));
        }
        zero.insert(z - 1);
    }
    LIdeal::from_zero_set(j.dim, &zero)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetFnJson {
    pub poset: PosetJson,
    /// Values keyed by element label, as rational strings.
    pub values: BTreeMap<String, String>,
}

pub fn poset_fn_to_json(f: &NormalFn) -> PosetFnJson {
    let p = f.poset();
    PosetFnJson {
        poset: poset_to_json(p),
        values: (0..p.len())
            .map(|i| (p.label(i).to_string(), rat::format(f.value(i))))
            .collect(),
    }
}

pub fn poset_fn_from_json(j: &PosetFnJson) -> Result<NormalFn> {
    let poset = Arc::new(poset_from_json(&j.poset)?);
    let mut values = Vec::with_capacity(poset.len());
    for i in 0..poset.len() {
        let label = poset.label(i);
        let raw = j
            .values
            .get(label)
            .ok_or_else(|| Error::BadInput(format!("no value for element {label}")))?;
        values.push(rat::parse(raw)?);
    }
    if j.values.len() != poset.len() {
        return Err(Error::BadInput(
            "values listed for labels outside the poset".into(),
        ));
    }
    NormalFn::new(poset, values)
}

/// What a JSON document describes, detected from its shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Poset,
    BoolAlg,
    Vector,
    Ideal,
    PosetFn,
}

pub fn detect_kind(v: &Value) -> Result<Kind> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::BadInput("expected a JSON object".into()))?;
    if obj.contains_key("values") && obj.contains_key("poset") {
        Ok(Kind::PosetFn)
    } else if obj.contains_key("atoms") {
        Ok(Kind::BoolAlg)
    } else if obj.contains_key("zeroSet") {
        Ok(Kind::Ideal)
    } else if obj.contains_key("coords") {
        Ok(Kind::Vector)
    } else if obj.contains_key("elements") && obj.contains_key("le") {
        Ok(Kind::Poset)
    } else {
        Err(Error::BadInput(
            "unrecognized document shape: expected a poset, boolean algebra, vector, ideal, or poset function".into(),
        ))
    }
}

/// The Hasse diagram of a poset in DOT format, edges drawn upward along
/// covers.
pub fn poset_to_dot(p: &FinPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
    for i in 0..p.len() {
        out.push_str(&format!("  \"{}\";\n", p.label(i)));
    }
    for (lo, hi) in p.covers() {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", p.label(lo), p.label(hi)));
    }
    out.push_str("}\n");
    out
}

/// The envelope table of a poset function as CSV: element, value, upper
/// envelope, lower envelope, normalization.
pub fn envelope_table_csv(f: &NormalFn) -> Result<String> {
    let upper = f.upper();
    let lower = f.lower();
    let normal = f.normalize();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["element", "value", "upper", "lower", "normalized"])
        .map_err(|e| Error::BadInput(e.to_string()))?;
    let p = f.poset();
    for i in 0..p.len() {
        w.write_record([
            p.label(i),
            &rat::format(f.value(i)),
            &rat::format(upper.value(i)),
            &rat::format(lower.value(i)),
            &rat::format(normal.value(i)),
        ])
        .map_err(|e| Error::BadInput(e.to_string()))?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::BadInput(e.to_string()))?)
        .map_err(|e| Error::BadInput(e.to_string()))
}

/// The value table of a function on the ideal space as CSV: ideal label
/// and value.
pub fn ideal_table_csv(f: &NormalFn) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["ideal", "value"])
        .map_err(|e| Error::BadInput(e.to_string()))?;
    let p = f.poset();
    for i in 0..p.len() {
        w.write_record([p.label(i), &rat::format(f.value(i))])
            .map_err(|e| Error::BadInput(e.to_string()))?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::BadInput(e.to_string()))?)
        .map_err(|e| Error::BadInput(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn poset_round_trips_and_validates() {
        let p = FinPoset::diamond();
        let j = poset_to_json(&p);
        let back = poset_from_json(&j).unwrap();
        assert_eq!(p, back);
        // pairs are closed, so dropping a derived pair still reads back equal
        let mut sparse = j.clone();
        sparse.le.retain(|(a, b)| !(a == b || (a == "0" && b == "1")));
        assert_eq!(poset_from_json(&sparse).unwrap(), p);
        // a two-cycle is rejected
        let mut broken = j.clone();
        broken.le.push(("1".into(), "0".into()));
        assert!(poset_from_json(&broken).is_err());
    }

    #[test]
    fn vector_round_trips_with_lowest_terms() {
        let v = LVec::new(vec![rat::rat(2, 4), rat::rat(-3, 1), int(0)]).unwrap();
        let j = vector_to_json(&v);
        assert_eq!(j.coords, vec!["1/2", "-3", "0"]);
        assert_eq!(vector_from_json(&j).unwrap(), v);
        // declared dimension must match
        let bad = VectorJson {
            dim: 2,
            coords: vec!["1".into()],
        };
        assert!(vector_from_json(&bad).is_err());
    }

    #[test]
    fn ideal_zero_sets_are_one_based() {
        let i = LIdeal::from_zero_set(3, &[0, 2].into_iter().collect()).unwrap();
        let j = ideal_to_json(&i);
        assert_eq!(j.zero_set, vec![1, 3]);
        assert_eq!(ideal_from_json(&j).unwrap(), i);
        let bad = IdealJson {
            dim: 3,
            zero_set: vec![0],
        };
        assert!(ideal_from_json(&bad).is_err());
        let key_check = serde_json::to_value(&j).unwrap();
        assert!(key_check.get("zeroSet").is_some());
    }

    #[test]
    fn poset_fn_round_trips_by_label() {
        let p = Arc::new(FinPoset::vee());
        let f = NormalFn::new(Arc::clone(&p), vec![int(1), int(1), int(2)]).unwrap();
        let j = poset_fn_to_json(&f);
        let back = poset_fn_from_json(&j).unwrap();
        assert_eq!(back.values(), f.values());
        // missing labels are rejected
        let mut missing = j.clone();
        missing.values.remove("t1");
        assert!(poset_fn_from_json(&missing).is_err());
        // extra labels are rejected
        let mut extra = j.clone();
        extra.values.insert("ghost".into(), "1".into());
        assert!(poset_fn_from_json(&extra).is_err());
    }

    #[test]
    fn kind_detection_by_shape() {
        let cases = [
            (serde_json::json!({"elements": [], "le": []}), Kind::Poset),
            (serde_json::json!({"atoms": ["p"]}), Kind::BoolAlg),
            (serde_json::json!({"dim": 1, "coords": ["1"]}), Kind::Vector),
            (serde_json::json!({"dim": 1, "zeroSet": [1]}), Kind::Ideal),
            (
                serde_json::json!({"poset": {}, "values": {}}),
                Kind::PosetFn,
            ),
        ];
        for (v, k) in cases {
            assert_eq!(detect_kind(&v).unwrap(), k);
        }
        assert!(detect_kind(&serde_json::json!({"x": 1})).is_err());
        assert!(detect_kind(&serde_json::json!(3)).is_err());
    }

    #[test]
    fn dot_lists_covers_only() {
        let dot = poset_to_dot(&FinPoset::diamond());
        assert!(dot.contains("\"0\" -> \"x\";"));
        assert!(dot.contains("\"x\" -> \"1\";"));
        // the transitive edge bottom -> top is not drawn
        assert!(!dot.contains("\"0\" -> \"1\""));
    }

    #[test]
    fn csv_tables_have_stable_headers() {
        let p = Arc::new(FinPoset::vee());
        let f = NormalFn::new(Arc::clone(&p), vec![int(1), int(0), int(0)]).unwrap();
        let csv = envelope_table_csv(&f).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "element,value,upper,lower,normalized"
        );
        assert_eq!(csv.lines().count(), 4);
        let table = ideal_table_csv(&f).unwrap();
        assert!(table.starts_with("ideal,value\n"));
    }
}
