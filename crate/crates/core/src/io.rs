//! JSON spec files and report records.
//!
//! Scalars are written as strings `"p/q"` (or `"p"`); integers are also
//! accepted on input. Error messages name the offending field path.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{quotient_algebra, Algebra, Ideal, LocalComponent, LocalFactor};
use crate::classify::{ClassificationRecord, ComponentData, TrichotomyProfile};
use crate::error::{Error, Result};
use crate::evalmod::{point_power_ideal, AnnSupport, IntSeriesSpec, ModuleHandle, Multiplicity, WeightTable};
use crate::poly::Poly;
use crate::scalar::{self, Scalar};
use crate::verma::{Functional, QuasifiniteVerdict, ReducibilityVerdict};

pub const CONVENTION: &str =
    "[d_m⊗f, d_n⊗g] = (n-m) d_(m+n)⊗fg + δ_(m,-n) (m^3-m)/12 c⊗fg; PBW letters ordered by depth, then by basis index (index 0 largest)";

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse(format!("{path}: expected an object")))
}

fn get<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| Error::Parse(format!("{path}.{key}: missing field")))
}

fn as_scalar(v: &Value, path: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => scalar::parse(s).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(scalar::int)
            .ok_or_else(|| Error::Parse(format!("{path}: non-integer numbers must be written as \"p/q\" strings"))),
        _ => Err(Error::Parse(format!("{path}: expected a rational string"))),
    }
}

fn as_int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Parse(format!("{path}: expected an integer")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a [Value]> {
    v.as_array().map(|a| a.as_slice()).ok_or_else(|| Error::Parse(format!("{path}: expected an array")))
}

fn scalar_list(v: &Value, path: &str) -> Result<Vec<Scalar>> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| as_scalar(x, &format!("{path}[{i}]"))).collect()
}

fn window(v: &Value, path: &str) -> Result<(i64, i64)> {
    let a = as_array(v, path)?;
    if a.len() != 2 {
        return Err(Error::Parse(format!("{path}: expected [lo, hi]")));
    }
    Ok((as_int(&a[0], &format!("{path}[0]"))?, as_int(&a[1], &format!("{path}[1]"))?))
}

fn kind_field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str> {
    get(o, key, path)?.as_str().ok_or_else(|| Error::Parse(format!("{path}.{key}: expected a string")))
}

pub fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn algebra_from_json(v: &Value) -> Result<Arc<Algebra>> {
    let path = "algebra";
    let o = obj(v, path)?;
    let invalid = |e: Error| match e {
        Error::InvalidAlgebra(m) => Error::InvalidAlgebra(format!("{path}: {m}")),
        other => other,
    };
    match kind_field(o, "kind", path)? {
        "rationals" => Ok(Algebra::rationals()),
        "product_local" => {
            let fs = as_array(get(o, "factors", path)?, &format!("{path}.factors"))?;
            let mut factors = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let p = format!("{path}.factors[{i}]");
                let fo = obj(f, &p)?;
                let order = as_int(get(fo, "order", &p)?, &format!("{p}.order"))?;
                let order = u32::try_from(order)
                    .map_err(|_| Error::InvalidAlgebra(format!("{p}.order: must be a positive integer")))?;
                factors.push(LocalFactor { point: as_scalar(get(fo, "point", &p)?, &format!("{p}.point"))?, order });
            }
            Algebra::product_local(factors).map_err(invalid)
        }
        "structure_constants" => {
            let dim = as_int(get(o, "dim", path)?, &format!("{path}.dim"))?;
            let dim = usize::try_from(dim)
                .map_err(|_| Error::InvalidAlgebra(format!("{path}.dim: must be positive")))?;
            let unit = scalar_list(get(o, "unit", path)?, &format!("{path}.unit"))?;
            let planes = as_array(get(o, "tensor", path)?, &format!("{path}.tensor"))?;
            let mut tensor = Vec::new();
            for (i, plane) in planes.iter().enumerate() {
                let rows = as_array(plane, &format!("{path}.tensor[{i}]"))?;
                tensor.push(
                    rows.iter()
                        .enumerate()
                        .map(|(j, r)| scalar_list(r, &format!("{path}.tensor[{i}][{j}]")))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            let labels = match o.get("labels") {
                Some(l) => as_array(l, &format!("{path}.labels"))?
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| Error::Parse(format!("{path}.labels[{i}]: expected a string")))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => (0..dim).map(|i| format!("e{i}")).collect(),
            };
            if labels.len() != dim {
                return Err(Error::InvalidAlgebra(format!("{path}.labels: expected {dim} labels")));
            }
            Algebra::structure_constants(labels, unit, tensor).map_err(invalid)
        }
        "quotient" => {
            let p = kind_field(o, "modulus", path)?;
            Algebra::from_modulus(&Poly::parse(p)?).map_err(invalid)
        }
        "polynomial" => {
            let (lo, hi) = window(get(o, "window", path)?, &format!("{path}.window"))?;
            if lo != 0 {
                return Err(Error::InvalidAlgebra(format!("{path}.window: polynomial windows start at 0")));
            }
            Algebra::polynomial(hi).map_err(invalid)
        }
        "laurent" => {
            let (lo, hi) = window(get(o, "window", path)?, &format!("{path}.window"))?;
            Algebra::laurent(lo, hi).map_err(invalid)
        }
        other => Err(Error::InvalidAlgebra(format!("{path}.kind: unknown kind {other:?}"))),
    }
}

fn label_map(v: Option<&Value>, alg: &Algebra, path: &str) -> Result<Vec<Scalar>> {
    let mut out = vec![scalar::zero(); alg.dim()];
    let Some(v) = v else { return Ok(out) };
    for (label, x) in obj(v, path)? {
        let i = alg.index_of_label(label).ok_or_else(|| {
            Error::InvalidFunctional(format!("{path}: {label:?} is not a basis label of {}", alg.describe()))
        })?;
        out[i] = as_scalar(x, &format!("{path}.{label}"))?;
    }
    Ok(out)
}

fn sequence(v: Option<&Value>, alg: &Algebra, path: &str) -> Result<Vec<Scalar>> {
    let Some(v) = v else { return Ok(vec![scalar::zero(); alg.dim()]) };
    let s = scalar_list(v, path)?;
    if s.len() != alg.dim() {
        let (lo, hi) = alg.window().unwrap_or((0, 0));
        return Err(Error::InvalidFunctional(format!(
            "{path}: expected {} values (exponents {lo}..={hi}), got {}",
            alg.dim(),
            s.len()
        )));
    }
    Ok(s)
}

/// Finite algebras take `{"d0": {label: x}, "c": {...}}` (missing labels are
/// zero); windowed ones take `{"d0_seq": [...], "c_seq": [...], "exact_ideal": "t-2"}`
/// indexed from the bottom of the window.
pub fn functional_from_json(v: &Value, alg: &Arc<Algebra>) -> Result<Functional> {
    let path = "phi";
    let o = obj(v, path)?;
    if alg.is_finite() {
        if o.contains_key("d0_seq") || o.contains_key("c_seq") {
            return Err(Error::InvalidFunctional(format!(
                "{path}: sequences are for windowed algebras; use \"d0\"/\"c\" label maps"
            )));
        }
        let f = Functional::new(alg, label_map(o.get("d0"), alg, "phi.d0")?, label_map(o.get("c"), alg, "phi.c")?)?;
        return Ok(f);
    }
    if !o.contains_key("d0_seq") {
        return Err(Error::InvalidFunctional(format!("{path}.d0_seq: missing field")));
    }
    let f = Functional::new(alg, sequence(o.get("d0_seq"), alg, "phi.d0_seq")?, sequence(o.get("c_seq"), alg, "phi.c_seq")?)?;
    match o.get("exact_ideal") {
        Some(Value::String(p)) => f.with_exact_ideal(Poly::parse(p)?).map_err(|e| match e {
            Error::InvalidFunctional(m) => Error::InvalidFunctional(format!("phi.exact_ideal: {m}")),
            other => other,
        }),
        Some(Value::Null) | None => Ok(f),
        Some(_) => Err(Error::Parse("phi.exact_ideal: expected a polynomial string".into())),
    }
}

pub fn module_from_json(v: &Value, alg: &Arc<Algebra>) -> Result<ModuleHandle> {
    module_at(v, alg, "module")
}

fn module_at(v: &Value, alg: &Arc<Algebra>, path: &str) -> Result<ModuleHandle> {
    let o = obj(v, path)?;
    let colors = |o: &Map<String, Value>| -> Result<Option<(i64, i64)>> {
        o.get("colors").map(|w| window(w, &format!("{path}.colors"))).transpose()
    };
    match kind_field(o, "variant", path)? {
        "verma" => Ok(ModuleHandle::Verma {
            phi: functional_from_json(get(o, "phi", path)?, alg)?,
            colors: colors(o)?,
        }),
        "irreducible_quotient" => Ok(ModuleHandle::IrreducibleQuotient {
            phi: functional_from_json(get(o, "phi", path)?, alg)?,
            colors: colors(o)?,
        }),
        "int_series_eval" => {
            let spec = IntSeriesSpec::new(
                as_scalar(get(o, "a", path)?, &format!("{path}.a"))?,
                as_scalar(get(o, "b", path)?, &format!("{path}.b"))?,
                window(get(o, "window", path)?, &format!("{path}.window"))?,
            )?;
            let point = as_scalar(get(o, "point", path)?, &format!("{path}.point"))?;
            ModuleHandle::int_series_eval(alg, spec, point)
        }
        "generalized_eval" => {
            let point = as_scalar(get(o, "point", path)?, &format!("{path}.point"))?;
            let order = as_int(get(o, "order", path)?, &format!("{path}.order"))?;
            let order = u32::try_from(order)
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::InvalidModule(format!("{path}.order: must be a positive integer")))?;
            let q = quotient_algebra(alg, &point_power_ideal(alg, &point, order)?)?;
            let inner = module_at(get(o, "inner", path)?, &q.algebra, &format!("{path}.inner"))?;
            ModuleHandle::generalized_eval(alg, point, order, inner)
        }
        "tensor" => {
            let fs = as_array(get(o, "factors", path)?, &format!("{path}.factors"))?;
            let factors = fs
                .iter()
                .enumerate()
                .map(|(i, f)| module_at(f, alg, &format!("{path}.factors[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            ModuleHandle::tensor(factors)
        }
        "trivial" => Ok(ModuleHandle::Trivial(alg.clone())),
        other => Err(Error::InvalidModule(format!("{path}.variant: unknown variant {other:?}"))),
    }
}

pub fn scalar_json(x: &Scalar) -> Value {
    Value::String(scalar::format(x))
}

pub fn metadata(alg: &Algebra) -> Value {
    let mut m = json!({
        "algebra": alg.describe(),
        "kind": alg.kind().name(),
        "basis": alg.labels(),
        "basis_order": alg.basis_order(),
        "convention": CONVENTION,
    });
    if let Some((lo, hi)) = alg.window() {
        m["window"] = json!([lo, hi]);
    }
    m
}

fn ideal_json(i: &Ideal) -> Value {
    Value::String(i.to_string())
}

fn functional_json(f: &Functional) -> Value {
    let alg = f.algebra();
    let labelled = |vals: &[Scalar]| -> Value {
        Value::Object(
            vals.iter()
                .enumerate()
                .map(|(i, x)| (alg.label(i), scalar_json(x)))
                .collect::<Map<String, Value>>(),
        )
    };
    json!({
        "algebra": alg.describe(),
        "d0": labelled(f.d0_values()),
        "c": labelled(f.c_values()),
    })
}

pub fn quasifinite_json(v: &QuasifiniteVerdict) -> Value {
    json!({
        "status": v.status.name(),
        "witness": v.witness.as_ref().map(ideal_json),
        "candidate": v.candidate.as_ref().map(|p| p.to_string()),
        "notes": v.notes,
    })
}

pub fn reducibility_json(v: &ReducibilityVerdict, alg: &Algebra) -> Value {
    let mut out = json!({
        "status": v.status.name(),
        "witness": v.witness.as_ref().map(ideal_json),
        "singular_vector": v.singular_vector.as_ref().map(|e| format!("({})·v", e.display(alg))),
        "notes": v.notes,
    });
    if let Some(cl) = &v.classical {
        out["classical"] = json!({
            "central_charge": scalar_json(&cl.central_charge),
            "h": scalar_json(&cl.h),
            "h_physics": scalar_json(&cl.h_physics),
        });
    }
    out
}

pub fn split_json(parts: &[(LocalComponent, Functional)]) -> Value {
    Value::Array(
        parts
            .iter()
            .map(|(c, f)| {
                json!({
                    "point": scalar_json(&c.point),
                    "order": c.order,
                    "maximal_ideal": ideal_json(&c.maximal_ideal),
                    "idempotent": c.idempotent.to_string(),
                    "phi": functional_json(f),
                })
            })
            .collect(),
    )
}

fn multiplicity_json(m: Multiplicity) -> Value {
    match m {
        Multiplicity::Exact(v) => json!({"value": v, "exact": true}),
        Multiplicity::LowerBound(v) => json!({"value": v, "exact": false}),
    }
}

pub fn weight_table_json(t: &WeightTable) -> Value {
    let rows: Vec<Value> = t
        .entries
        .iter()
        .map(|(o, m)| {
            let mut row = json!({
                "offset": o,
                "weight": scalar_json(&(&t.base + scalar::int(*o))),
                "multiplicity": multiplicity_json(*m),
            });
            if let Some(z) = t.zero_weight.get(o) {
                row["zero_weight"] = json!({
                    "trivial_submodule": z.trivial_submodule,
                    "trivial_quotient": z.trivial_quotient,
                });
            }
            row
        })
        .collect();
    json!({ "base_weight": scalar_json(&t.base), "truncated": t.truncated, "entries": rows })
}

/// Aligned columns separated by tabs.
pub fn weight_table_tsv(t: &WeightTable) -> String {
    let mut rows = vec![vec!["offset".to_string(), "weight".into(), "multiplicity".into(), "bound".into(), "zero_weight".into()]];
    for (o, m) in &t.entries {
        let z = match t.zero_weight.get(o) {
            Some(z) if z.trivial_submodule => "trivial_submodule",
            Some(z) if z.trivial_quotient => "trivial_quotient",
            Some(_) => "irreducible",
            None => "-",
        };
        rows.push(vec![
            o.to_string(),
            scalar::format(&(&t.base + scalar::int(*o))),
            m.value().to_string(),
            if m.is_exact() { "exact" } else { "lower" }.into(),
            z.into(),
        ]);
    }
    aligned(&rows)
}

pub fn aligned(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| if c + 1 == r.len() { s.clone() } else { format!("{s:<w$}", w = widths[c]) })
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

pub fn ann_support_json(a: &AnnSupport) -> Value {
    json!({
        "annihilator": ideal_json(&a.ann),
        "support": a.support.as_ref().map(|s| s.iter().map(scalar_json).collect::<Vec<_>>()),
        "certified": a.certified,
        "closure_verified": a.closure_verified,
        "notes": a.notes,
    })
}

pub fn classification_json(r: &ClassificationRecord, explain: bool) -> Value {
    let comps: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            let mut v = json!({
                "point": c.point.as_ref().map(scalar_json),
                "order": c.order,
            });
            match &c.data {
                ComponentData::Local(f) => v["phi"] = functional_json(f),
                ComponentData::IntSeries { a, b } => {
                    v["a"] = scalar_json(a);
                    v["b"] = scalar_json(b);
                }
            }
            if explain {
                v["idempotent"] = json!(c.idempotent.as_ref().map(|e| e.to_string()));
            }
            v
        })
        .collect();
    let mut out = json!({
        "input": r.input,
        "verdict": r.verdict.name(),
        "components": comps,
        "notes": r.notes,
    });
    if explain {
        out["witness"] = json!(r.witness.as_ref().map(ideal_json));
        out["reduced_algebra"] = json!(r.reduced.as_ref().map(|q| q.algebra.describe()));
        out["radical_power"] = json!(r.radical_power);
    }
    out
}

pub fn profile_json(p: &TrichotomyProfile) -> Value {
    let samples: BTreeMap<String, Value> =
        p.samples.iter().map(|(o, m)| (o.to_string(), multiplicity_json(*m))).collect();
    json!({
        "shape": p.shape.name(),
        "base_weight": scalar_json(&p.base),
        "window": [p.window.0, p.window.1],
        "window_truncated": p.window_truncated,
        "samples": samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn algebra_specs() {
        let a = algebra_from_json(&json!({"kind":"product_local","factors":[{"point":"0","order":2},{"point":"1","order":1}]})).unwrap();
        assert_eq!(a.dim(), 3);
        let n = algebra_from_json(&json!({"kind":"structure_constants","dim":2,"unit":["1","0"],
            "tensor":[[["1","0"],["0","1"]],[["0","1"],["0","0"]]]}))
        .unwrap();
        assert_eq!(n.labels(), vec!["e0", "e1"]);
        let err = algebra_from_json(&json!({"kind":"product_local","factors":[{"point":"x","order":1}]})).unwrap_err();
        assert!(err.to_string().contains("algebra.factors[0].point"), "{err}");
        assert!(algebra_from_json(&json!({"kind":"polynomial","window":[1,4]})).is_err());
    }

    #[test]
    fn functional_specs() {
        let a = algebra_from_json(&json!({"kind":"product_local","factors":[{"point":"0","order":2}]})).unwrap();
        let f = functional_from_json(&json!({"d0": {"1": "3", "t": "0"}, "c": {"1": "1/2"}}), &a).unwrap();
        assert_eq!(f.d0_values(), &[int(3), int(0)]);
        let err = functional_from_json(&json!({"d0": {"u": "3"}}), &a).unwrap_err();
        assert!(err.to_string().contains("phi.d0"), "{err}");

        let p = algebra_from_json(&json!({"kind":"polynomial","window":[0,3]})).unwrap();
        let f = functional_from_json(&json!({"d0_seq": ["1","2","4","8"], "exact_ideal": "t-2"}), &p).unwrap();
        assert_eq!(f.exact_ideal().unwrap().to_string(), "t - 2");
        assert!(functional_from_json(&json!({"d0_seq": ["1","2"]}), &p).is_err());
    }

    #[test]
    fn module_specs() {
        let p = algebra_from_json(&json!({"kind":"polynomial","window":[0,4]})).unwrap();
        let m = module_from_json(
            &json!({"variant":"tensor","factors":[
                {"variant":"int_series_eval","a":"1/2","b":"1/3","point":"0","window":[-20,20]},
                {"variant":"generalized_eval","point":"2","order":2,"inner":
                    {"variant":"verma","phi":{"d0":{"1":"1","t":"0"}}}}]}),
            &p,
        )
        .unwrap();
        assert_eq!(m.variant_name(), "tensor");
        let err = module_from_json(&json!({"variant":"int_series_eval","a":"1/2","b":"1/3","point":"0"}), &p).unwrap_err();
        assert!(err.to_string().contains("module.window"), "{err}");
    }

    #[test]
    fn tsv_columns_align() {
        let rows = vec![vec!["a".to_string(), "bb".into()], vec!["ccc".into(), "d".into()]];
        assert_eq!(aligned(&rows), "a  \tbb\nccc\td\n");
    }
}
