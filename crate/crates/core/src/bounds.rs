//! Explicit constants and inequalities: the uniform cusp constants `A₀`,
//! `B₀`, the trivial-class constant `A₁`, the convexity bound, and the
//! assembled non-vanishing report.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::epstein::{epstein_completed, EvalConfig};
use crate::lattice::{
    covolume_of_generators, lambda1, minkowski_second_sides, successive_minima_of_generators,
    LatticeBasis, NormSpec,
};
use crate::number_field::NumberFieldData;
use crate::periods::{
    archimedean_factor, class_group_dft, nonvanishing_count_bound, CharacterTable, QuadratureSpec,
};
use crate::special::{erfc_unchecked, riemann_zeta, unit_ball_volume};
use crate::{Error, Result};

/// `erfc(√π)`, the constant of the cusp estimates.
pub fn cusp_constant() -> f64 {
    erfc_unchecked(PI.sqrt())
}

fn is_boundary(n: usize, s: f64) -> bool {
    (n as f64 * s - 1.0).abs() < 1e-12
}

/// `(A₀, B₀)` of the uniform bound `E*(g, ns) ≥ A₀ λ₁(g)^{-ns} - B₀`,
/// valid for `1/n ≤ s < 1`.
pub fn constants_a0_b0(n: usize, s: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    if n < 2 || !(s >= 1.0 / nf - 1e-12 && s < 1.0) {
        return Err(Error::domain(
            "constants_A0_B0",
            format!("need n >= 2 and 1/n <= s < 1, got n = {n}, s = {s}"),
        ));
    }
    let c = cusp_constant();
    let ns = nf * s;
    let (a0, jump) = if is_boundary(n, s) {
        (c * LN_2, 2.0)
    } else {
        (c / (2.0 * (ns - 1.0)), 2f64.powf(ns / (ns - 1.0)))
    };
    let b0 = (1.0 / s + 1.0 / (1.0 - s)) / nf + a0 * jump;
    Ok((a0, b0))
}

/// Euclidean-induced measure of `{x : Σx = 0, |x_i| ≤ w_i}` with `w_i = 1`
/// at real places and `2` at complex places: the unit ball of the
/// unit-log norm inside the trace-zero hyperplane.
///
/// Exact by inclusion–exclusion up to 8 places, Monte Carlo beyond.
pub fn sup_slice_volume(r1: usize, r2: usize) -> Result<f64> {
    let m = r1 + r2;
    if m < 2 {
        return Err(Error::domain(
            "sup_slice_volume",
            "the trace-zero slice is a point for r1 + r2 = 1",
        ));
    }
    if m <= 8 {
        Ok(slice_volume_exact(&half_widths(r1, r2)))
    } else {
        Ok(sup_slice_volume_monte_carlo(r1, r2, 2_000_000, 0))
    }
}

fn half_widths(r1: usize, r2: usize) -> Vec<f64> {
    let mut w = vec![1.0; r1];
    w.extend(std::iter::repeat(2.0).take(r2));
    w
}

/// The last coordinate is eliminated: the slice projects onto
/// `{x' ∈ box : |Σx'| ≤ w_m}` with Jacobian `√m`.
fn slice_volume_exact(w: &[f64]) -> f64 {
    let m = w.len();
    let (last, box_w) = w.split_last().expect("at least two places");
    let k = box_w.len();
    let total: f64 = box_w.iter().sum();
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    // vol{y ∈ Π[0, 2w_i] : Σy ≤ t}
    let below = |t: f64| -> f64 {
        let mut acc = 0.0;
        for mask in 0u32..(1 << k) {
            let shift: f64 = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| 2.0 * box_w[i])
                .sum();
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let x = t - shift;
            if x > 0.0 {
                acc += sign * x.powi(k as i32);
            }
        }
        acc / factorial
    };
    (m as f64).sqrt() * (below(total + last) - below(total - last))
}

/// Monte Carlo estimate of [`sup_slice_volume`] from `samples` uniform
/// points of the projected box.
pub fn sup_slice_volume_monte_carlo(r1: usize, r2: usize, samples: usize, seed: u64) -> f64 {
    let w = half_widths(r1, r2);
    let (last, box_w) = w.split_last().expect("at least two places");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let sum: f64 = box_w.iter().map(|&b| rng.gen_range(-b..b)).sum();
        if sum.abs() <= *last {
            hits += 1;
        }
    }
    let box_volume: f64 = box_w.iter().map(|b| 2.0 * b).product();
    (w.len() as f64).sqrt() * box_volume * hits as f64 / samples as f64
}

/// `log 2 / (4n)`: every non-torsion unit has `‖log_E u‖_∞` at least this.
pub fn height_gap(n: usize) -> f64 {
    LN_2 / (4.0 * n as f64)
}

/// One multiplicative factor of `A₁`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factor {
    pub name: &'static str,
    pub value: f64,
}

/// `A₁` with its factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A1Report {
    pub a0: f64,
    pub factors: Vec<Factor>,
    /// `A₀ ∏ factors`.
    pub value: f64,
    /// The product without the hyperplane covolume correction, i.e. with
    /// the unit-log covolume taken to be `R`.
    pub uncorrected_value: f64,
}

/// `A₁ = A₀ · 2^{-r₂s} · (r₁+r₂)^{-ns/2} · Ṽ · (1 - 2^{-s/4})^{r} / (2ns)^{r}
/// · (r₁+r₂)^{-1/2}` with `r = r₁ + r₂ - 1`; the product terms are empty
/// when `r = 0`. The last factor converts `R` into the Euclidean covolume
/// `√(r₁+r₂) R` of the unit-log lattice.
pub fn constant_a1(n: usize, r1: usize, r2: usize, s: f64) -> Result<A1Report> {
    if n != r1 + 2 * r2 || r1 + r2 == 0 {
        return Err(Error::domain("constant_A1", "inconsistent signature"));
    }
    let (a0, _) = constants_a0_b0(n, s)?;
    let places = (r1 + r2) as f64;
    let rank = r1 + r2 - 1;
    let ns = n as f64 * s;
    let mut factors = vec![
        Factor {
            name: "2^(-r2 s)",
            value: 2f64.powf(-(r2 as f64) * s),
        },
        Factor {
            name: "(r1+r2)^(-ns/2)",
            value: places.powf(-0.5 * ns),
        },
    ];
    let mut correction = 1.0;
    if rank > 0 {
        factors.push(Factor {
            name: "V_sup_slice",
            value: sup_slice_volume(r1, r2)?,
        });
        factors.push(Factor {
            name: "(1-2^(-s/4))^(r1+r2-1)",
            value: (1.0 - 2f64.powf(-0.25 * s)).powi(rank as i32),
        });
        factors.push(Factor {
            name: "(2ns)^(-(r1+r2-1))",
            value: (2.0 * ns).powi(-(rank as i32)),
        });
        correction = places.powf(-0.5);
        factors.push(Factor {
            name: "(r1+r2)^(-1/2)",
            value: correction,
        });
    }
    let value = a0 * factors.iter().map(|f| f.value).product::<f64>();
    Ok(A1Report {
        a0,
        factors,
        value,
        uncorrected_value: value / correction,
    })
}

/// `(A₁ |D|^{s/2} - B₀ R) / R`, a lower bound for `Z(𝒪_E)`.
pub fn trivial_class_lower_bound(field: &NumberFieldData, s: f64) -> Result<f64> {
    let a1 = constant_a1(field.degree, field.r1, field.r2, s)?.value;
    let (_, b0) = constants_a0_b0(field.degree, s)?;
    let r = field.regulator;
    Ok((a1 * field.abs_discriminant().powf(0.5 * s) - b0 * r) / r)
}

/// `C |D|^{(1-s-δ+ε)/2} ζ(1+ε)ⁿ`.
pub fn convexity_bound(
    n: usize,
    abs_discriminant: f64,
    s: f64,
    epsilon: f64,
    delta: f64,
    c_convex: f64,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::domain("convexity_bound", format!("epsilon = {epsilon} not in (0, 1/2)")));
    }
    if !(delta >= 0.0) || !(c_convex > 0.0) {
        return Err(Error::domain("convexity_bound", "need delta >= 0 and C > 0"));
    }
    let zeta = riemann_zeta(1.0 + epsilon)?;
    Ok(c_convex * abs_discriminant.powf(0.5 * (1.0 - s - delta + epsilon)) * zeta.powi(n as i32))
}

/// Every constant for a signature and `s`, in one place.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundConstants {
    pub n: usize,
    pub r1: usize,
    pub r2: usize,
    pub s: f64,
    pub a0: f64,
    pub b0: f64,
    pub a1: A1Report,
    pub v_ball: f64,
    pub v_sup_slice: Option<f64>,
    pub height_gap: f64,
}

impl BoundConstants {
    pub fn new(n: usize, r1: usize, r2: usize, s: f64) -> Result<Self> {
        let (a0, b0) = constants_a0_b0(n, s)?;
        Ok(Self {
            n,
            r1,
            r2,
            s,
            a0,
            b0,
            a1: constant_a1(n, r1, r2, s)?,
            v_ball: unit_ball_volume(n - 1),
            v_sup_slice: sup_slice_volume(r1, r2).ok(),
            height_gap: height_gap(n),
        })
    }

    pub fn for_field(field: &NumberFieldData, s: f64) -> Result<Self> {
        Self::new(field.degree, field.r1, field.r2, s)
    }
}

/// Both sides of `E*(g, ns) ≥ A₀ λ₁(g)^{-ns} - B₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CuspInequality {
    pub value: f64,
    pub bound: f64,
    pub lambda1: f64,
    pub holds: bool,
}

pub fn uniform_cusp_inequality(basis: &LatticeBasis, s: f64, cfg: &EvalConfig) -> Result<CuspInequality> {
    let n = basis.dim();
    let (a0, b0) = constants_a0_b0(n, s)?;
    let l = lambda1(basis)?;
    let v = epstein_completed(basis, n as f64 * s, cfg)?;
    let bound = a0 * l.powf(-(n as f64) * s) - b0;
    Ok(CuspInequality {
        value: v.value,
        bound,
        lambda1: l,
        holds: v.value + v.error_estimate >= bound,
    })
}

/// Minkowski's second theorem on the unit-log lattice under the unit-log
/// sup norm, against the Euclidean covolume of the lattice in the
/// trace-zero hyperplane. `literal_rhs = 2^{r} R` is reported alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinkowskiReport {
    pub minima: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub euclidean_covolume: f64,
    pub literal_rhs: f64,
    pub holds: bool,
    pub literal_holds: bool,
}

pub fn minkowski_unit_log_check(field: &NumberFieldData) -> Result<MinkowskiReport> {
    let v = sup_slice_volume(field.r1, field.r2)?;
    let norm = NormSpec::unit_log(field.r1, field.r2);
    let report = successive_minima_of_generators(&field.unit_log_basis, &norm)?;
    let covol = covolume_of_generators(&field.unit_log_basis);
    let (lhs, rhs) = minkowski_second_sides(&report, v, covol);
    let literal_rhs = 2f64.powi(report.lengths.len() as i32) * field.regulator;
    Ok(MinkowskiReport {
        minima: report.lengths,
        lhs,
        rhs,
        euclidean_covolume: covol,
        literal_rhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
        literal_holds: lhs <= literal_rhs * (1.0 + 1e-9),
    })
}

/// `min_j ‖θ_j‖_∞` over the unit-log basis against `log 2/(4n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightGapReport {
    pub shortest: f64,
    pub gap: f64,
    pub holds: bool,
}

pub fn height_gap_check(field: &NumberFieldData) -> HeightGapReport {
    let norm = NormSpec::unit_log(field.r1, field.r2);
    let shortest = field
        .unit_log_basis
        .iter()
        .map(|t| norm.norm(t))
        .fold(f64::INFINITY, f64::min);
    let gap = height_gap(field.degree);
    HeightGapReport {
        shortest,
        gap,
        holds: shortest >= gap,
    }
}

/// Lower bounds for the proportion of class-group characters with
/// `L(s, χ) ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonvanishingReport {
    pub discriminant: String,
    pub h: usize,
    pub s: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub c_convex: f64,
    /// `|D|^{-(1-s+ε-δ)/2} (A₁ - B₀ R/|D|^{s/2}) 2^{r₁} n / (w Γ_∞ C ζ(1+ε)ⁿ)`.
    pub theorem1_bound: f64,
    /// `‖Z‖_∞ / ‖Ẑ‖_∞`, a lower bound for the number of nonvanishing `L(s,χ)`.
    pub lemma_bound: f64,
    pub observed_count: usize,
    pub trivial_period: f64,
    pub trivial_class_bound: f64,
    pub sup_period: f64,
    pub sup_fourier: f64,
    pub convexity: f64,
    pub a1: f64,
    pub b0: f64,
    pub inversion_residual: f64,
    pub orthogonality_residual: f64,
    pub periods: Vec<f64>,
}

/// Settings for [`theorem1_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Params {
    pub s: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub c_convex: f64,
}

impl Theorem1Params {
    pub fn new(s: f64, epsilon: f64) -> Self {
        Self {
            s,
            epsilon,
            delta: 0.0,
            c_convex: 1.0,
        }
    }
}

/// The a priori non-vanishing proportion and the numeric lemma bound from
/// the computed periods of every class.
pub fn theorem1_bound(
    field: &NumberFieldData,
    params: &Theorem1Params,
    quad: &QuadratureSpec,
    cfg: &EvalConfig,
) -> Result<NonvanishingReport> {
    let Theorem1Params {
        s,
        epsilon,
        delta,
        c_convex,
    } = *params;
    let n = field.degree;
    let d = field.abs_discriminant();
    let (_, b0) = constants_a0_b0(n, s)?;
    let a1 = constant_a1(n, field.r1, field.r2, s)?.value;
    let convexity = convexity_bound(n, d, s, epsilon, delta, c_convex)?;
    let zeta_n = convexity / (c_convex * d.powf(0.5 * (1.0 - s - delta + epsilon)));
    let gamma = archimedean_factor(field.r1, field.r2, s);
    let theorem = d.powf(-0.5 * (1.0 - s + epsilon - delta))
        * (a1 - b0 * field.regulator / d.powf(0.5 * s))
        * 2f64.powi(field.r1 as i32)
        * n as f64
        / (field.w as f64 * gamma * c_convex * zeta_n);

    let result = class_group_dft(field, s, quad, cfg)?;
    let table = CharacterTable::for_field(field)?;
    let elements: Vec<Vec<u64>> = field.classes.iter().map(|c| c.coords.clone()).collect();
    let values: Vec<Complex64> = result.periods.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let count = nonvanishing_count_bound(&table, &elements, &values)?;
    Ok(NonvanishingReport {
        discriminant: field.discriminant.to_string(),
        h: field.class_number(),
        s,
        epsilon,
        delta,
        c_convex,
        theorem1_bound: theorem,
        lemma_bound: count.bound,
        observed_count: count.count,
        trivial_period: result.periods[0],
        trivial_class_bound: trivial_class_lower_bound(field, s)?,
        sup_period: count.sup_f,
        sup_fourier: count.sup_fhat,
        convexity,
        a1,
        b0,
        inversion_residual: result.inversion_residual,
        orthogonality_residual: result.orthogonality_residual,
        periods: result.periods,
    })
}
