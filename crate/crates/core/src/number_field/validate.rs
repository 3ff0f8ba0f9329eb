//! Consistency checks for field data, each reported with its residual.

use nalgebra::DMatrix;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::NumberFieldData;
use crate::lattice::{determinant, enumerate_vectors};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, residual: f64, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            residual,
            detail: detail.into(),
        }
    }
}

const REL_TOL: f64 = 1e-9;

/// Evaluate every structural and numerical invariant of `field`.
pub fn validate_field(field: &NumberFieldData) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let n = field.degree;
    let places = field.r1 + field.r2;

    let sig_ok = n == field.r1 + 2 * field.r2 && places >= 1;
    out.push(CheckResult::new(
        "signature",
        sig_ok,
        (n as f64 - (field.r1 + 2 * field.r2) as f64).abs(),
        format!("n = {n}, r1 = {}, r2 = {}", field.r1, field.r2),
    ));

    let sign_ok = !field.discriminant.is_zero()
        && (field.discriminant.is_negative() == (field.r2 % 2 == 1));
    out.push(CheckResult::new(
        "discriminant_sign",
        sign_ok,
        0.0,
        format!("D = {} with r2 = {}", field.discriminant, field.r2),
    ));

    let w_ok = field.w >= 2 && field.w % 2 == 0 && (field.r1 == 0 || field.w == 2);
    out.push(CheckResult::new(
        "roots_of_unity_parity",
        w_ok,
        0.0,
        format!("w = {}", field.w),
    ));

    let rank = places.saturating_sub(1);
    let shape_ok = field.unit_log_basis.len() == rank
        && field.unit_log_basis.iter().all(|v| v.len() == places);
    out.push(CheckResult::new(
        "unit_log_shape",
        shape_ok,
        0.0,
        format!(
            "{} vectors, expected {rank} of length {places}",
            field.unit_log_basis.len()
        ),
    ));

    let trace = field
        .unit_log_basis
        .iter()
        .map(|v| v.iter().sum::<f64>().abs())
        .fold(0.0, f64::max);
    out.push(CheckResult::new(
        "unit_log_trace_zero",
        trace <= 1e-10,
        trace,
        format!("largest coordinate sum {trace:e}"),
    ));

    let (reg_res, reg_detail) = if !shape_ok {
        (f64::INFINITY, "unit-log basis malformed".to_string())
    } else if rank == 0 {
        ((field.regulator - 1.0).abs(), "unit rank 0, regulator 1 by convention".into())
    } else {
        let m = DMatrix::from_fn(rank, rank, |i, j| field.unit_log_basis[i][j]);
        let minor = m.determinant().abs();
        (
            (minor - field.regulator).abs() / field.regulator.abs().max(f64::MIN_POSITIVE),
            format!("minor {minor}, regulator {}", field.regulator),
        )
    };
    out.push(CheckResult::new(
        "regulator_minor",
        reg_res <= REL_TOL && field.regulator > 0.0,
        reg_res,
        reg_detail,
    ));

    let h = field.classes.len();
    let order: u64 = field.cyclic_orders.iter().product();
    let mut coords_ok = h > 0 && order as usize == h;
    let mut seen = std::collections::HashSet::new();
    for c in &field.classes {
        coords_ok &= c.coords.len() == field.cyclic_orders.len()
            && c.coords.iter().zip(&field.cyclic_orders).all(|(x, o)| x < o)
            && seen.insert(c.coords.clone());
    }
    coords_ok &= field
        .classes
        .first()
        .map(|c| c.coords.iter().all(|&x| x == 0))
        .unwrap_or(false);
    out.push(CheckResult::new(
        "class_group_order",
        coords_ok,
        (order as f64 - h as f64).abs(),
        format!("product of cyclic orders {order}, {h} classes"),
    ));

    let dims_ok = field.classes.iter().all(|c| c.embedded_basis.dim() == n);
    out.push(CheckResult::new(
        "embedding_dimension",
        dims_ok,
        0.0,
        format!("every embedded basis must be {n}x{n}"),
    ));
    if !dims_ok || !sig_ok {
        return out;
    }

    let root_d = field.abs_discriminant().sqrt();
    let mut worst = (0.0f64, String::new());
    for c in &field.classes {
        let nr = c.norm.to_f64().unwrap_or(f64::NAN);
        let expected = 2f64.powi(-(field.r2 as i32)) * root_d * nr;
        let actual = determinant(&c.embedded_basis).abs();
        let res = (actual - expected).abs() / expected;
        if !(res <= worst.0) {
            worst = (res, format!("class {}: |det| = {actual}, expected {expected}", c.label));
        }
    }
    out.push(CheckResult::new(
        "covolume",
        worst.0 <= REL_TOL,
        worst.0,
        worst.1,
    ));

    let one = field.embedded_one();
    let mut unit_res = f64::INFINITY;
    if let Some(c) = field.classes.first() {
        if let Some(inv) = c.embedded_basis.matrix().clone().try_inverse() {
            let x = nalgebra::RowDVector::from_row_slice(&one) * inv;
            unit_res = x.iter().map(|v| (v - v.round()).abs()).fold(0.0, f64::max);
        }
    }
    out.push(CheckResult::new(
        "trivial_class_contains_one",
        unit_res <= 1e-8,
        unit_res,
        "coordinates of ι(1) in the class-0 basis must be integers",
    ));

    let mut roots = 0usize;
    if let Some(c) = field.classes.first() {
        let r = (places as f64).sqrt() * (1.0 + 1e-9);
        if let Ok(vs) = enumerate_vectors(&c.embedded_basis, r) {
            roots = vs
                .iter()
                .filter(|v| {
                    let real = v.vector[..field.r1].iter().all(|x| (x.abs() - 1.0).abs() < 1e-9);
                    let complex = v.vector[field.r1..]
                        .chunks(2)
                        .all(|p| (p[0].hypot(p[1]) - 1.0).abs() < 1e-9);
                    real && complex
                })
                .count();
        }
    }
    out.push(CheckResult::new(
        "roots_of_unity",
        roots as u64 == field.w,
        (roots as f64 - field.w as f64).abs(),
        format!("{roots} roots of unity found in the ring of integers, w = {}", field.w),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::super::quadratic_field;
    use super::*;

    fn failures(field: &NumberFieldData) -> Vec<&'static str> {
        validate_field(field)
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    #[test]
    fn builtin_fields_pass() {
        for d in [-3, -4, -7, -8, -23, -163, -71, 5, 13, 29, 65] {
            let k = quadratic_field(d).unwrap();
            assert!(failures(&k).is_empty(), "D = {d}: {:?}", failures(&k));
        }
    }

    #[test]
    fn regulator_minor_for_golden_ratio() {
        let k = quadratic_field(5).unwrap();
        let c = validate_field(&k)
            .into_iter()
            .find(|c| c.name == "regulator_minor")
            .unwrap();
        assert!(c.passed && c.residual < 1e-15);
    }

    #[test]
    fn corrupted_data_is_named() {
        let mut k = quadratic_field(-4).unwrap();
        k.w = 2;
        assert_eq!(failures(&k), vec!["roots_of_unity"]);
        let mut k = quadratic_field(-23).unwrap();
        k.classes[1].embedded_basis = k.classes[1].embedded_basis.scaled(2f64.sqrt()).unwrap();
        assert_eq!(failures(&k), vec!["covolume"]);
        let mut k = quadratic_field(5).unwrap();
        k.unit_log_basis[0][1] += 0.1;
        assert!(failures(&k).contains(&"unit_log_trace_zero"));
    }
}
