//! Arithmetic data of a number field `E`: signature, discriminant, roots of
//! unity, regulator, unit-log basis, class group, and one embedded ideal
//! lattice per class.
//!
//! Embedding convention for `ι: E → ℝⁿ`: the `r₁` real places first, then
//! `(Re, Im)` for each complex place, unscaled. With it `‖ι(1)‖₂² = r₁ + r₂`
//! and an ideal `Λ` has covolume `2^{-r₂} √|D| Nr(Λ)`.

mod forms;
mod group;
mod io;
mod quadratic;
mod validate;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use forms::{
    indefinite_cycles, is_fundamental_discriminant, reduced_definite_forms,
    reduced_indefinite_forms, BinaryQuadraticForm,
};
pub use group::{decompose, AbelianDecomposition};
pub use io::{field_to_json, load_field, load_field_str};
pub use quadratic::{fundamental_unit, quadratic_field, FundamentalUnit};
pub use validate::{validate_field, CheckResult};

use crate::lattice::LatticeBasis;
use crate::{Error, Result};

/// One ideal class: a representative fractional ideal `Λ` given by `ι` of a
/// `ℤ`-basis.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealClassData {
    pub label: String,
    pub coords: Vec<u64>,
    pub norm: BigRational,
    pub embedded_basis: LatticeBasis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumberFieldData {
    pub degree: usize,
    pub r1: usize,
    pub r2: usize,
    pub discriminant: BigInt,
    pub w: u64,
    pub regulator: f64,
    pub unit_log_basis: Vec<Vec<f64>>,
    pub cyclic_orders: Vec<u64>,
    pub classes: Vec<IdealClassData>,
    /// Reduced forms matching `classes`, for built-in quadratic fields.
    pub forms: Option<Vec<BinaryQuadraticForm>>,
}

impl NumberFieldData {
    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    /// `r₁ + r₂ - 1`, the unit rank.
    pub fn unit_rank(&self) -> usize {
        self.r1 + self.r2 - 1
    }

    pub fn discriminant_f64(&self) -> f64 {
        self.discriminant.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn abs_discriminant(&self) -> f64 {
        self.discriminant_f64().abs()
    }

    /// Index of the class whose coordinates are `coords`.
    pub fn class_index(&self, coords: &[u64]) -> Option<usize> {
        self.classes.iter().position(|c| c.coords == coords)
    }

    /// Index of the product class of `i` and `j`.
    pub fn class_product(&self, i: usize, j: usize) -> Option<usize> {
        let c: Vec<u64> = self.classes[i]
            .coords
            .iter()
            .zip(&self.classes[j].coords)
            .zip(&self.cyclic_orders)
            .map(|((a, b), o)| (a + b) % o)
            .collect();
        self.class_index(&c)
    }

    /// `ι(1) = (1, …, 1, 1, 0, …, 1, 0)`.
    pub fn embedded_one(&self) -> Vec<f64> {
        let mut v = vec![1.0; self.r1];
        for _ in 0..self.r2 {
            v.extend([1.0, 0.0]);
        }
        v
    }

    /// A short human-readable name.
    pub fn name(&self) -> String {
        format!("degree {} field of discriminant {}", self.degree, self.discriminant)
    }
}

/// The embedded basis of the representative ideal of class `class_index`.
pub fn ideal_lattice(field: &NumberFieldData, class_index: usize) -> Result<LatticeBasis> {
    field
        .classes
        .get(class_index)
        .map(|c| c.embedded_basis.clone())
        .ok_or(Error::IndexOutOfRange {
            index: class_index,
            len: field.classes.len(),
        })
}
