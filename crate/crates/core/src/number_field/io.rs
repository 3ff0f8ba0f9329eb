//! JSON field-data documents.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use super::validate::validate_field;
use super::{IdealClassData, NumberFieldData};
use crate::lattice::LatticeBasis;
use crate::{Error, Result};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{ctx}: missing key `{key}`")))
}

fn as_usize(v: &Value, ctx: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(format!("{ctx}: expected a non-negative integer")))
}

fn as_f64(v: &Value, ctx: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(format!("{ctx}: expected a finite number")))
}

fn as_array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(format!("{ctx}: expected an array")))
}

fn as_f64_rows(v: &Value, ctx: &str) -> Result<Vec<Vec<f64>>> {
    as_array(v, ctx)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            as_array(row, ctx)?
                .iter()
                .enumerate()
                .map(|(j, x)| as_f64(x, &format!("{ctx}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn parse_integer(v: &Value, ctx: &str) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(format!("{ctx}: expected an integer"))),
    };
    BigInt::from_str(text.trim()).map_err(|_| schema(format!("{ctx}: `{text}` is not an integer")))
}

fn parse_rational(v: &Value, ctx: &str) -> Result<BigRational> {
    let text = v
        .as_str()
        .ok_or_else(|| schema(format!("{ctx}: expected a string \"p/q\"")))?;
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| schema(format!("{ctx}: bad numerator in `{text}`")))?;
    let q = BigInt::from_str(q).map_err(|_| schema(format!("{ctx}: bad denominator in `{text}`")))?;
    if q == BigInt::from(0) {
        return Err(schema(format!("{ctx}: zero denominator")));
    }
    let r = BigRational::new(p, q);
    if r <= BigRational::from_integer(BigInt::from(0)) {
        return Err(schema(format!("{ctx}: norm must be positive")));
    }
    Ok(r)
}

/// Parse a field-data document and validate every invariant.
pub fn load_field_str(text: &str) -> Result<NumberFieldData> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    let top = root
        .as_object()
        .ok_or_else(|| schema("top level must be an object"))?;
    let degree = as_usize(field(top, "degree", "document")?, "degree")?;
    let r1 = as_usize(field(top, "r1", "document")?, "r1")?;
    let r2 = as_usize(field(top, "r2", "document")?, "r2")?;
    let discriminant = parse_integer(field(top, "discriminant", "document")?, "discriminant")?;
    let w = field(top, "w", "document")?
        .as_u64()
        .ok_or_else(|| schema("w: expected a positive integer"))?;
    let regulator = as_f64(field(top, "regulator", "document")?, "regulator")?;
    let unit_log_basis = as_f64_rows(field(top, "unit_log_basis", "document")?, "unit_log_basis")?;

    let group = field(top, "class_group", "document")?
        .as_object()
        .ok_or_else(|| schema("class_group: expected an object"))?;
    let cyclic_orders: Vec<u64> = as_array(field(group, "cyclic_orders", "class_group")?, "cyclic_orders")?
        .iter()
        .map(|v| v.as_u64().filter(|&x| x >= 1).ok_or_else(|| schema("cyclic_orders: expected positive integers")))
        .collect::<Result<_>>()?;
    let mut classes = Vec::new();
    for (i, c) in as_array(field(group, "classes", "class_group")?, "classes")?.iter().enumerate() {
        let ctx = format!("classes[{i}]");
        let obj = c
            .as_object()
            .ok_or_else(|| schema(format!("{ctx}: expected an object")))?;
        let label = field(obj, "label", &ctx)?
            .as_str()
            .ok_or_else(|| schema(format!("{ctx}.label: expected a string")))?
            .to_string();
        let coords = as_array(field(obj, "coords", &ctx)?, &ctx)?
            .iter()
            .map(|v| v.as_u64().ok_or_else(|| schema(format!("{ctx}.coords: expected integers"))))
            .collect::<Result<Vec<_>>>()?;
        let norm = parse_rational(field(obj, "norm", &ctx)?, &format!("{ctx}.norm"))?;
        let rows = as_f64_rows(field(obj, "embedded_basis", &ctx)?, &format!("{ctx}.embedded_basis"))?;
        let embedded_basis = LatticeBasis::new(rows)
            .map_err(|e| schema(format!("{ctx}.embedded_basis: {e}")))?;
        classes.push(IdealClassData {
            label,
            coords,
            norm,
            embedded_basis,
        });
    }

    let data = NumberFieldData {
        degree,
        r1,
        r2,
        discriminant,
        w,
        regulator,
        unit_log_basis,
        cyclic_orders,
        classes,
        forms: None,
    };
    if let Some(bad) = validate_field(&data).into_iter().find(|c| !c.passed) {
        return Err(Error::Invariant {
            check: bad.name,
            detail: format!("{} (residual {:e})", bad.detail, bad.residual),
        });
    }
    Ok(data)
}

pub fn load_field(path: impl AsRef<Path>) -> Result<NumberFieldData> {
    let text = std::fs::read_to_string(path)?;
    load_field_str(&text)
}

/// The document form of `field`; round-trips through [`load_field_str`].
pub fn field_to_json(field: &NumberFieldData) -> Value {
    let classes: Vec<Value> = field
        .classes
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "coords": c.coords,
                "norm": format!("{}/{}", c.norm.numer(), c.norm.denom()),
                "embedded_basis": c.embedded_basis.rows(),
            })
        })
        .collect();
    let mut doc = json!({
        "degree": field.degree,
        "r1": field.r1,
        "r2": field.r2,
        "discriminant": serde_json::Number::from_str(&field.discriminant.to_string())
            .map(Value::Number)
            .unwrap_or_else(|_| Value::String(field.discriminant.to_string())),
        "w": field.w,
        "regulator": field.regulator,
        "unit_log_basis": field.unit_log_basis,
        "class_group": {
            "cyclic_orders": field.cyclic_orders,
            "classes": classes,
        },
    });
    if let Some(forms) = &field.forms {
        doc["forms"] = json!(forms.iter().map(|f| [f.a, f.b, f.c]).collect::<Vec<_>>());
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::super::quadratic_field;
    use super::*;

    const CUBIC: &str = include_str!("../../fixtures/cubic_disc_m23.json");

    #[test]
    fn cubic_fixture_loads() {
        let k = load_field_str(CUBIC).unwrap();
        assert_eq!((k.degree, k.r1, k.r2, k.w), (3, 1, 1, 2));
        assert_eq!(k.discriminant, BigInt::from(-23));
        assert_eq!(k.class_number(), 1);
        assert!((k.regulator - 0.281_199_574_322_961_8).abs() < 1e-15);
    }

    #[test]
    fn quadratic_round_trip() {
        for d in [-23, 5, -4] {
            let k = quadratic_field(d).unwrap();
            let text = serde_json::to_string(&field_to_json(&k)).unwrap();
            let mut back = load_field_str(&text).unwrap();
            back.forms = k.forms.clone();
            assert_eq!(back, k);
        }
    }

    #[test]
    fn big_discriminant_is_exact() {
        let mut doc: Value = serde_json::from_str(CUBIC).unwrap();
        doc["discriminant"] = serde_json::from_str("-123456789012345678901234567890").unwrap();
        let err = load_field_str(&doc.to_string()).unwrap_err();
        // the integer itself parses; the covolume check then fails
        assert!(matches!(err, Error::Invariant { check: "covolume", .. }), "{err}");
    }

    #[test]
    fn doubled_determinant_is_rejected() {
        let mut doc: Value = serde_json::from_str(CUBIC).unwrap();
        let row = &mut doc["class_group"]["classes"][0]["embedded_basis"][2];
        for x in row.as_array_mut().unwrap() {
            let v = x.as_f64().unwrap();
            *x = json!(2.0 * v);
        }
        let err = load_field_str(&doc.to_string()).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "covolume", .. }), "{err}");
    }

    #[test]
    fn non_trace_zero_units_are_rejected() {
        let mut doc: Value = serde_json::from_str(CUBIC).unwrap();
        doc["unit_log_basis"][0][0] = json!(0.3);
        let err = load_field_str(&doc.to_string()).unwrap_err();
        assert!(matches!(err, Error::Invariant { check: "unit_log_trace_zero", .. }), "{err}");
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(load_field_str("[]"), Err(Error::Schema(_))));
        let mut doc: Value = serde_json::from_str(CUBIC).unwrap();
        doc.as_object_mut().unwrap().remove("w");
        assert!(matches!(load_field_str(&doc.to_string()), Err(Error::Schema(_))));
        let mut doc: Value = serde_json::from_str(CUBIC).unwrap();
        doc["discriminant"] = json!(-23.5);
        assert!(matches!(load_field_str(&doc.to_string()), Err(Error::Schema(_))));
    }
}
