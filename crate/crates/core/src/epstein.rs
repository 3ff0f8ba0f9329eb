//! The Epstein zeta function `E(g, s) = ½ |det g|^{s/n} Σ_{v≠0} ‖v·g‖₂^{-s}`
//! and its completion `E*(g, s) = π^{-s/2} Γ(s/2) E(g, s)`.
//!
//! Two independent evaluation routes:
//!
//! * [`epstein_completed`] uses the approximate functional equation
//!   `E* = -1/s - 1/(n-s) + ½ Σ f(s, ‖v g₀‖) + ½ Σ f(n-s, ‖v g₀*‖)` with
//!   `g₀` the covolume-one rescaling of `g` and `g₀*` its dual. Valid for
//!   every real `s ∉ {0, n}`.
//! * [`epstein_direct`] sums the lattice series itself (only for `s > n`)
//!   with a smooth radial cutoff, and replaces the far part of the sum by
//!   its continuum integral.

use std::f64::consts::PI;

use crate::lattice::{self, dual_basis, enumerate_vectors_with_budget, LatticeBasis};
use crate::special::{self, erfc_unchecked, f_term_unchecked, gamma_unchecked, unit_ball_volume};
use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Truncation control for the lattice sums.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub tolerance: f64,
    pub initial_radius_fudge: f64,
    pub max_radius_doublings: usize,
    pub enumeration_budget: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            initial_radius_fudge: 1.5,
            max_radius_doublings: 6,
            enumeration_budget: lattice::DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

impl EvalConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(Error::domain(
                "EvalConfig",
                format!("tolerance {} must lie in (0, 1e-2]", self.tolerance),
            ));
        }
        if !(self.initial_radius_fudge > 0.0) {
            return Err(Error::domain("EvalConfig", "radius fudge must be positive"));
        }
        Ok(())
    }
}

/// A real value with the size of the last truncation increment.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CompletedValue {
    pub value: f64,
    pub error_estimate: f64,
}

/// `π^{-s/2} Γ(s/2)`.
pub fn completion_factor(s: f64) -> f64 {
    PI.powf(-0.5 * s) * gamma_unchecked(0.5 * s)
}

/// `Σ_{v≠0} f(order, ‖v·g‖)` over a covolume-one basis, with the radius
/// doubled until the outermost shell contributes less than `tolerance/10`.
fn theta_tail_sum(basis: &LatticeBasis, order: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    let n = basis.dim() as f64;
    let mut radius = 1f64
        .max((1.0 / cfg.tolerance).ln().max(0.0).sqrt() / PI.sqrt())
        .max((order.max(n - order) / (2.0 * PI)).sqrt())
        * cfg.initial_radius_fudge;
    let mut last = f64::INFINITY;
    for _ in 0..=cfg.max_radius_doublings {
        let outer = 2.0 * radius;
        let mut vectors = enumerate_vectors_with_budget(basis, outer, cfg.enumeration_budget)?;
        vectors.sort_by(|a, b| a.norm.total_cmp(&b.norm).then_with(|| a.coeffs.cmp(&b.coeffs)));
        let mut inner = NeumaierSum::new();
        let mut shell = NeumaierSum::new();
        for v in &vectors {
            let term = f_term_unchecked(order, v.norm);
            if v.norm <= radius {
                inner.add(term);
            } else {
                shell.add(term);
            }
        }
        last = shell.value().abs();
        if last < cfg.tolerance / 10.0 {
            let mut total = inner;
            total.add(shell.value());
            return Ok((total.value(), last));
        }
        radius = outer;
    }
    Err(Error::NoConvergence {
        steps: cfg.max_radius_doublings,
        last_increment: last,
    })
}

fn check_not_pole(s: f64, n: usize) -> Result<()> {
    if !s.is_finite() {
        return Err(Error::domain("epstein_completed", format!("s = {s}")));
    }
    if s == 0.0 || s == n as f64 {
        return Err(Error::Pole(s));
    }
    Ok(())
}

/// `E*(g, s)` for real `s ∉ {0, n}` by the approximate functional equation.
pub fn epstein_completed(basis: &LatticeBasis, s: f64, cfg: &EvalConfig) -> Result<CompletedValue> {
    cfg.validate()?;
    let n = basis.dim();
    check_not_pole(s, n)?;
    let nf = n as f64;
    let primal = basis.normalized();
    let dual = dual_basis(&primal)?;
    let (sum_primal, err_primal) = theta_tail_sum(&primal, s, cfg)?;
    let (sum_dual, err_dual) = theta_tail_sum(&dual, nf - s, cfg)?;
    let value = -1.0 / s - 1.0 / (nf - s) + 0.5 * sum_primal + 0.5 * sum_dual;
    Ok(CompletedValue {
        value,
        error_estimate: 0.5 * (err_primal + err_dual),
    })
}

/// `E(g, s)` for real `s ∉ {0, n}`, through the completed evaluator.
pub fn epstein_value(basis: &LatticeBasis, s: f64, cfg: &EvalConfig) -> Result<CompletedValue> {
    if s <= 0.0 {
        return Err(Error::domain(
            "epstein_value",
            "Gamma factor vanishes or changes sign for s <= 0",
        ));
    }
    let c = epstein_completed(basis, s, cfg)?;
    let k = completion_factor(s);
    Ok(CompletedValue {
        value: c.value / k,
        error_estimate: c.error_estimate / k,
    })
}

// Degree of the polynomial-Gaussian cutoff used by the direct evaluator.
const CUTOFF_DEGREE: usize = 10;
// Q(K, u) is below 3e-15 past this point for K = 10.
const CUTOFF_SUPPORT: f64 = 60.0;

/// Near-part weight `Q(K, u) = e^{-u} Σ_{k<K} u^k / k!`.
fn cutoff_weight(u: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..CUTOFF_DEGREE {
        term *= u / k as f64;
        sum += term;
    }
    (-u).exp() * sum
}

fn direct_sum_with_width(
    basis: &LatticeBasis,
    s: f64,
    width: f64,
    cfg: &EvalConfig,
) -> Result<f64> {
    let n = basis.dim();
    let nf = n as f64;
    let r_max = width * CUTOFF_SUPPORT.sqrt();
    let mut vectors = enumerate_vectors_with_budget(basis, r_max, cfg.enumeration_budget)?;
    vectors.sort_by(|a, b| a.norm.total_cmp(&b.norm).then_with(|| a.coeffs.cmp(&b.coeffs)));
    let mut near = NeumaierSum::new();
    for v in &vectors {
        let u = (v.norm / width).powi(2);
        near.add(v.norm.powf(-s) * cutoff_weight(u));
    }
    // ∫_{ℝⁿ} ‖x‖^{-s} (1 - Q(K, ‖x‖²/σ²)) dx in closed form
    let k = CUTOFF_DEGREE as f64;
    let sphere = nf * unit_ball_volume(n);
    let far = sphere * width.powf(nf - s) * gamma_unchecked(k + 0.5 * (nf - s))
        / ((s - nf) * gamma_unchecked(k));
    Ok(0.5 * (near.value() + far))
}

/// `E(g, s)` for `s > n` directly from the lattice series.
///
/// The sum is split with the smooth weight `Q(K, ‖x‖²/σ²)`: the near part is
/// summed over lattice points and the far part is replaced by its integral.
/// The Poisson remainder decays like `(πσλ₁*)^{-2K}`, where `λ₁*` is the
/// shortest dual vector, so `σ` is tied to `λ₁*`. The error estimate is the
/// change when `σ` is enlarged by 20%.
pub fn epstein_direct(basis: &LatticeBasis, s: f64, cfg: &EvalConfig) -> Result<CompletedValue> {
    cfg.validate()?;
    let n = basis.dim();
    if !(s > n as f64) || !s.is_finite() {
        return Err(Error::OutOfRegion { s, n });
    }
    let g0 = basis.normalized();
    let dual_min = lattice::lambda1(&dual_basis(&g0)?)?;
    let width = 2.5 / dual_min;
    let coarse = direct_sum_with_width(&g0, s, width, cfg)?;
    let fine = direct_sum_with_width(&g0, s, 1.2 * width, cfg)?;
    Ok(CompletedValue {
        value: fine,
        error_estimate: (fine - coarse).abs(),
    })
}

/// `|E*(g, n-s) - E*(ᵗg⁻¹, s)|`.
pub fn functional_equation_residual(basis: &LatticeBasis, s: f64, cfg: &EvalConfig) -> Result<f64> {
    let n = basis.dim() as f64;
    let lhs = epstein_completed(basis, n - s, cfg)?;
    let rhs = epstein_completed(&dual_basis(basis)?, s, cfg)?;
    Ok((lhs.value - rhs.value).abs())
}

/// Richardson-extrapolated residue of `E(g, s)` at `s = n`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ResidueReport {
    pub extrapolated: f64,
    pub target: f64,
    pub deviation: f64,
}

/// `π^{n/2} / Γ(n/2)`.
pub fn residue_target(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    PI.powf(h) / gamma_unchecked(h)
}

pub fn residue_report(basis: &LatticeBasis, cfg: &EvalConfig) -> Result<ResidueReport> {
    let n = basis.dim();
    let nf = n as f64;
    let steps = [1e-3, 5e-4, 2.5e-4];
    let mut r = [0.0; 3];
    for (slot, &h) in r.iter_mut().zip(&steps) {
        *slot = h * epstein_value(basis, nf + h, cfg)?.value;
    }
    // r(h) = Res + c₁h + c₂h² + …, steps halve each time
    let first = [2.0 * r[1] - r[0], 2.0 * r[2] - r[1]];
    let extrapolated = (4.0 * first[1] - first[0]) / 3.0;
    let target = residue_target(n);
    Ok(ResidueReport {
        extrapolated,
        target,
        deviation: (extrapolated - target).abs(),
    })
}

/// `|Res_{s=n} E(g,s) - π^{n/2}/Γ(n/2)|` after extrapolation.
pub fn residue_check(basis: &LatticeBasis, cfg: &EvalConfig) -> Result<f64> {
    Ok(residue_report(basis, cfg)?.deviation)
}

/// Explicit lower bound for `E*(g,s) + 1/s + 1/(n-s)` high in the cusp.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CuspBound {
    pub applicable: bool,
    pub bound: f64,
    pub lambda1: f64,
    pub threshold: f64,
}

/// The three-regime cusp bound, with the constants of the erfc(√π) chain:
///
/// * `s > 1`: `erfc(√π) (λ₁^{-s} - λ₁^{-1}) / (s-1)` once `λ₁ ≤ 2^{-1/(s-1)}`;
/// * `s = 1`: `-erfc(√π) λ₁^{-1} log λ₁` once `λ₁ ≤ 1`;
/// * `s < 1`: the `s > 1` bound for the dual lattice at `n-s`, with
///   `λ₁(ᵗg⁻¹)` controlled by `λ₁(ᵗg⁻¹)^{n-1} ≤ 2^{n-1} λ₁(g) / V_{n-1}`.
pub fn cusp_lower_bound(basis: &LatticeBasis, s: f64) -> Result<CuspBound> {
    let n = basis.dim();
    let nf = n as f64;
    if !(s > 0.0 && s < nf) {
        return Err(Error::domain("cusp_lower_bound", format!("s = {s} not in (0, {n})")));
    }
    let lambda1 = lattice::lambda1(basis)?;
    let c = erfc_unchecked(PI.sqrt());
    let (threshold, bound) = if (s - 1.0).abs() < 1e-12 {
        (1.0, -c * lambda1.ln() / lambda1)
    } else if s > 1.0 {
        (
            2f64.powf(-1.0 / (s - 1.0)),
            c * (lambda1.powf(-s) - 1.0 / lambda1) / (s - 1.0),
        )
    } else {
        if n < 2 {
            return Err(Error::domain("cusp_lower_bound", "dual regime needs n >= 2"));
        }
        let vball = unit_ball_volume(n - 1);
        let dual_s = nf - s;
        let threshold = vball * 2f64.powf(-(dual_s) * (nf - 1.0) / (dual_s - 1.0));
        let scaled = lambda1 * 2f64.powi(n as i32 - 1) / vball;
        let bound = c / (2.0 * (dual_s - 1.0)) * scaled.powf(-dual_s / (nf - 1.0));
        (threshold, bound)
    };
    Ok(CuspBound {
        applicable: lambda1 <= threshold,
        bound,
        lambda1,
        threshold,
    })
}

// keep the special-function module path visible to rustdoc links
#[allow(unused_imports)]
use special as _;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::random_unimodular_basis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    // Σ_{(a,b)≠0} (a²+b²)^{-t} = 4 ζ(t) β(t), externally evaluated
    const TWO_ZETA_BETA: [(f64, f64); 3] = [
        (3.0, 4.516_810_841_550_475_152_9),
        (4.0, 3.013_406_019_845_970_061_8),
        (5.0, 2.545_129_116_832_741_472_8),
    ];

    #[test]
    fn direct_matches_sum_of_two_squares() {
        for &(s, expected) in &TWO_ZETA_BETA {
            let v = epstein_direct(&LatticeBasis::identity(2), s, &cfg()).unwrap();
            assert!(((v.value - expected) / expected).abs() < 1e-11, "s = {s}: {}", v.value);
            assert!(v.error_estimate < 1e-10);
        }
    }

    #[test]
    fn completed_matches_sum_of_two_squares() {
        for &(s, expected) in &TWO_ZETA_BETA {
            let v = epstein_value(&LatticeBasis::identity(2), s, &cfg()).unwrap();
            assert!(((v.value - expected) / expected).abs() < 1e-11, "s = {s}");
        }
    }

    #[test]
    fn direct_is_scale_invariant() {
        let g = LatticeBasis::new(vec![vec![1.0, 0.3], vec![-0.2, 1.4]]).unwrap();
        let a = epstein_direct(&g, 2.7, &cfg()).unwrap().value;
        let b = epstein_direct(&g.scaled(3.7).unwrap(), 2.7, &cfg()).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn direct_cubic_lattice_against_naive_sum() {
        // naive triple sum to radius 50 plus the continuum tail 4π R^{3-s}/(s-3)
        let s = 5.0;
        let r = 50.0;
        let mut acc = NeumaierSum::new();
        let ri = r as i64;
        for a in -ri..=ri {
            for b in -ri..=ri {
                for c in -ri..=ri {
                    let q = (a * a + b * b + c * c) as f64;
                    if q > 0.0 && q <= r * r {
                        acc.add(q.powf(-0.5 * s));
                    }
                }
            }
        }
        let naive = 0.5 * (acc.value() + 4.0 * PI * r.powf(3.0 - s) / (s - 3.0));
        let v = epstein_direct(&LatticeBasis::identity(3), s, &cfg()).unwrap().value;
        assert!(((v - naive) / v).abs() < 1e-5, "{v} vs {naive}");
    }

    #[test]
    fn direct_rejects_critical_strip() {
        let r = epstein_direct(&LatticeBasis::identity(2), 1.5, &cfg());
        assert!(matches!(r, Err(Error::OutOfRegion { .. })));
    }

    #[test]
    fn completed_rejects_poles() {
        let g = LatticeBasis::identity(2);
        assert!(matches!(epstein_completed(&g, 0.0, &cfg()), Err(Error::Pole(_))));
        assert!(matches!(epstein_completed(&g, 2.0, &cfg()), Err(Error::Pole(_))));
        assert!(epstein_completed(&g, 1.0, &EvalConfig::with_tolerance(0.5)).is_err());
    }

    #[test]
    fn completed_overlap_with_direct_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=4 {
            for _ in 0..3 {
                let g = random_unimodular_basis(n, &mut rng);
                let s = n as f64 + 0.7;
                let c = epstein_completed(&g, s, &cfg()).unwrap().value;
                let d = completion_factor(s) * epstein_direct(&g, s, &cfg()).unwrap().value;
                assert!(((c - d) / c).abs() < 1e-9, "n = {n}: {c} vs {d}");
            }
        }
    }

    #[test]
    fn self_dual_lattice_has_zero_residual() {
        for n in 2..=3 {
            for &s in &[0.3, 0.9, 1.7] {
                let r = functional_equation_residual(&LatticeBasis::identity(n), s, &cfg()).unwrap();
                assert!(r < 1e-10);
            }
        }
        let g = LatticeBasis::diagonal(&[5.0, 0.2]).unwrap();
        assert!(functional_equation_residual(&g, 1.2, &cfg()).unwrap() < 1e-8);
    }

    #[test]
    fn completed_lower_bound_from_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let g = crate::lattice::random_cusp_basis(2, 3.0, &mut rng);
            for &s in &[0.2, 0.5, 1.0, 1.5, 1.9] {
                let v = epstein_completed(&g, s, &cfg()).unwrap().value;
                assert!(v >= -1.0 / s - 1.0 / (2.0 - s));
            }
        }
    }

    #[test]
    fn residue_targets() {
        assert!((residue_target(2) - PI).abs() < 1e-14);
        assert!((residue_target(3) - 2.0 * PI).abs() < 1e-13);
        let d = residue_check(&LatticeBasis::identity(2), &cfg()).unwrap();
        assert!(d < 1e-4, "{d}");
    }

    #[test]
    fn cusp_bound_regimes() {
        let t = 100.0;
        let g = LatticeBasis::diagonal(&[t, 1.0 / t]).unwrap();
        for &s in &[1.5, 1.0, 0.5] {
            let b = cusp_lower_bound(&g, s).unwrap();
            assert!(b.applicable, "s = {s}");
            let e = epstein_completed(&g, s, &cfg()).unwrap().value;
            assert!(e + 1.0 / s + 1.0 / (2.0 - s) >= b.bound, "s = {s}");
        }
        let b = cusp_lower_bound(&g, 1.5).unwrap();
        assert!((b.lambda1 - 1.0 / t).abs() < 1e-15);
        let c = erfc_unchecked(PI.sqrt());
        assert!((b.bound - c * (t.powf(1.5) - t) / 0.5).abs() < 1e-9 * b.bound);
        let b = cusp_lower_bound(&LatticeBasis::identity(2), 1.5).unwrap();
        assert!(!b.applicable);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn functional_equation_and_scale_invariance(seed in 0u64..1_000_000, n in 2usize..4, t in 0.05f64..0.95) {
            let b = random_unimodular_basis(n, &mut ChaCha8Rng::seed_from_u64(seed));
            let s = t * n as f64;
            if (s - 0.5 * n as f64).abs() > 1e-3 {
                proptest::prop_assert!(functional_equation_residual(&b, s, &cfg()).unwrap() <= 1e-8);
            }
            let c = 1.0 + t;
            let e = epstein_value(&b, s, &cfg()).unwrap().value;
            let scaled = epstein_value(&b.scaled(c).unwrap(), s, &cfg()).unwrap().value;
            proptest::prop_assert!((scaled - e).abs() <= 1e-9 * e.abs().max(1.0));
        }
    }
}
