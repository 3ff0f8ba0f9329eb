//! Built-in quadratic fields from binary quadratic forms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::forms::{indefinite_cycles, is_fundamental_discriminant, isqrt, reduced_definite_forms};
use super::group::decompose;
use super::{BinaryQuadraticForm, IdealClassData, NumberFieldData};
use crate::lattice::LatticeBasis;
use crate::{Error, Result};

/// The fundamental unit `ε = (t + u√D)/2 > 1` of a real quadratic field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalUnit {
    pub t: i128,
    pub u: i128,
    pub norm: i128,
    pub value: f64,
}

fn too_large(d: i128) -> Error {
    Error::UnsupportedField(format!(
        "fundamental unit of D = {d} exceeds 128-bit arithmetic"
    ))
}

/// Fundamental unit by the continued fraction of `ω`, the generator of the
/// ring of integers: the first convergent `p/q` with `N(p - qω) = ±1`
/// gives `ε = p - q ω̄`.
pub fn fundamental_unit(d: i128) -> Result<FundamentalUnit> {
    if d <= 0 || !is_fundamental_discriminant(d) {
        return Err(Error::Discriminant(
            d.to_string(),
            "not a positive fundamental discriminant".into(),
        ));
    }
    let r = isqrt(d);
    let odd = d.rem_euclid(4) == 1;
    // ω = (P + √D)/Q
    let (mut big_p, mut big_q) = (if odd { 1i128 } else { 0 }, 2i128);
    let (mut p_prev, mut p) = (0i128, 1i128);
    let (mut q_prev, mut q) = (1i128, 0i128);
    for _ in 0..100_000 {
        let a = (big_p + r).div_euclid(big_q);
        let p_next = a
            .checked_mul(p)
            .and_then(|x| x.checked_add(p_prev))
            .ok_or_else(|| too_large(d))?;
        let q_next = a
            .checked_mul(q)
            .and_then(|x| x.checked_add(q_prev))
            .ok_or_else(|| too_large(d))?;
        (p_prev, p, q_prev, q) = (p, p_next, q, q_next);
        let (t, u) = if odd {
            (2 * p - q, q)
        } else {
            (2 * p, q)
        };
        let t2 = t.checked_mul(t).ok_or_else(|| too_large(d))?;
        let u2d = u
            .checked_mul(u)
            .and_then(|x| x.checked_mul(d))
            .ok_or_else(|| too_large(d))?;
        let norm = (t2 - u2d) / 4;
        if norm == 1 || norm == -1 {
            let value = 0.5 * (t as f64 + u as f64 * (d as f64).sqrt());
            return Ok(FundamentalUnit { t, u, norm, value });
        }
        big_p = a * big_q - big_p;
        big_q = (d - big_p * big_p) / big_q;
    }
    Err(Error::NoConvergence {
        steps: 100_000,
        last_increment: f64::NAN,
    })
}

fn definite_basis(f: &BinaryQuadraticForm, d: i128) -> Result<LatticeBasis> {
    let root = ((-d) as f64).sqrt();
    LatticeBasis::new(vec![
        vec![f.a as f64, 0.0],
        vec![-(f.b as f64) / 2.0, root / 2.0],
    ])
}

fn indefinite_basis(f: &BinaryQuadraticForm, d: i128) -> Result<LatticeBasis> {
    let root = (d as f64).sqrt();
    let b = f.b as f64;
    LatticeBasis::new(vec![
        vec![f.a as f64, f.a as f64],
        vec![(-b + root) / 2.0, (-b - root) / 2.0],
    ])
}

/// The quadratic field of fundamental discriminant `d`.
///
/// Real fields are supported only when the fundamental unit has norm `-1`,
/// so that proper equivalence classes of forms are the ideal classes.
pub fn quadratic_field(d: i64) -> Result<NumberFieldData> {
    let d = d as i128;
    if !is_fundamental_discriminant(d) {
        return Err(Error::Discriminant(
            d.to_string(),
            "not a fundamental discriminant".into(),
        ));
    }
    let (reps, lookup, r1, r2, w, regulator, unit_log_basis) = if d < 0 {
        let forms = reduced_definite_forms(d);
        let lookup: HashMap<BinaryQuadraticForm, usize> =
            forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let w = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        (forms, lookup, 0, 1, w, 1.0, vec![])
    } else {
        let unit = fundamental_unit(d)?;
        if unit.norm != -1 {
            return Err(Error::UnsupportedField(format!(
                "fundamental unit of Q(sqrt {d}) has norm +1; supply the field as a document"
            )));
        }
        let principal = BinaryQuadraticForm::principal(d)?;
        let mut cycles = indefinite_cycles(d);
        let pos = cycles
            .iter()
            .position(|c| c.contains(&principal))
            .ok_or_else(|| Error::Invariant {
                check: "principal_cycle",
                detail: format!("principal form {principal} not on any cycle"),
            })?;
        let first = cycles.remove(pos);
        cycles.insert(0, first);
        let mut lookup = HashMap::new();
        for (i, c) in cycles.iter().enumerate() {
            for f in c {
                lookup.insert(*f, i);
            }
        }
        let mut reps: Vec<BinaryQuadraticForm> = cycles.iter().map(|c| c[0]).collect();
        reps[0] = principal;
        let r = unit.value.ln();
        (reps, lookup, 2, 0, 2, r, vec![vec![r, -r]])
    };

    let h = reps.len();
    let mut table = vec![vec![0usize; h]; h];
    for i in 0..h {
        for j in 0..h {
            let prod = reps[i].compose(&reps[j])?.reduce();
            table[i][j] = *lookup.get(&prod).ok_or_else(|| Error::Invariant {
                check: "composition",
                detail: format!("{prod} is not a reduced form of D = {d}"),
            })?;
        }
    }
    let dec = decompose(h, |x, y| table[x][y])?;

    let mut classes = Vec::with_capacity(h);
    for (i, f) in reps.iter().enumerate() {
        let embedded_basis = if d < 0 {
            definite_basis(f, d)?
        } else {
            indefinite_basis(f, d)?
        };
        classes.push(IdealClassData {
            label: f.to_string(),
            coords: dec.coords[i].clone(),
            norm: BigRational::from_integer(BigInt::from(f.a)),
            embedded_basis,
        });
    }
    Ok(NumberFieldData {
        degree: 2,
        r1,
        r2,
        discriminant: BigInt::from(d),
        w,
        regulator,
        unit_log_basis,
        cyclic_orders: dec.cyclic_orders,
        classes,
        forms: Some(reps),
    })
}
