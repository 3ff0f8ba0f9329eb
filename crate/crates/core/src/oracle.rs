//! Reference values computed without lattice sums over `E*`: Dirichlet
//! series over ideals, Hurwitz-zeta factorizations, and the classical
//! sum-of-two-squares identity. Used to validate the Epstein and period
//! machinery.

use crate::special::{gamma_unchecked, hurwitz_zeta, riemann_zeta};
use crate::number_field::{is_fundamental_discriminant, BinaryQuadraticForm};
use crate::{Error, Result};

/// Dirichlet's `β(t) = Σ_{k≥0} (-1)^k (2k+1)^{-t}`.
pub fn dirichlet_beta(t: f64) -> Result<f64> {
    Ok(4f64.powf(-t) * (hurwitz_zeta(t, 0.25)? - hurwitz_zeta(t, 0.75)?))
}

/// `E(ℤ², s) = ½ Σ_{(a,b)≠0} (a²+b²)^{-s/2} = 2 ζ(s/2) β(s/2)`.
pub fn sum_of_two_squares_epstein(s: f64) -> Result<f64> {
    let t = 0.5 * s;
    Ok(2.0 * riemann_zeta(t)? * dirichlet_beta(t)?)
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
fn jacobi(a: i64, n: i64) -> i32 {
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(D/n)` for `n ≥ 1`: the quadratic character of the
/// field of discriminant `D`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut n = n as i64;
    let mut result = 1;
    while n % 2 == 0 {
        n /= 2;
        result *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    result * jacobi(d, n)
}

/// `a_n = Σ_{d|n} χ_D(d)`, the number of integral ideals of norm `n`, for
/// `n ≤ max_norm`.
pub fn ideal_counts(d: i64, max_norm: usize) -> Vec<u32> {
    let chi: Vec<i32> = (0..=max_norm)
        .map(|k| if k == 0 { 0 } else { kronecker(d, k as u64) })
        .collect();
    let mut counts = vec![0i64; max_norm + 1];
    for (k, &c) in chi.iter().enumerate().skip(1) {
        if c != 0 {
            for m in (k..=max_norm).step_by(k) {
                counts[m] += c as i64;
            }
        }
    }
    counts.into_iter().map(|c| c.max(0) as u32).collect()
}

/// `r_Q(n) / w`: the number of ideals of norm `n` in the class of the
/// positive definite form `Q`, from its representation numbers.
pub fn class_ideal_counts(form: &BinaryQuadraticForm, w: u64, max_norm: usize) -> Result<Vec<f64>> {
    let disc = form.discriminant();
    if disc >= 0 || form.a <= 0 {
        return Err(Error::domain("class_ideal_counts", "form must be positive definite"));
    }
    let (a, b, c) = (form.a as f64, form.b as f64, form.c as f64);
    let big_n = max_norm as f64;
    let mut reps = vec![0u32; max_norm + 1];
    // Q(x, y) ≤ N forces y² ≤ 4aN/|D|
    let y_max = (4.0 * a * big_n / (-disc) as f64).sqrt().floor() as i64;
    for y in -y_max..=y_max {
        let yf = y as f64;
        // a x² + b y x + (c y² - N) ≤ 0
        let disc_x = b * b * yf * yf - 4.0 * a * (c * yf * yf - big_n);
        if disc_x < 0.0 {
            continue;
        }
        let root = disc_x.sqrt();
        let lo = ((-b * yf - root) / (2.0 * a)).floor() as i64 - 1;
        let hi = ((-b * yf + root) / (2.0 * a)).ceil() as i64 + 1;
        for x in lo..=hi {
            let q = form.a * (x as i128) * (x as i128) + form.b * (x as i128) * (y as i128)
                + form.c * (y as i128) * (y as i128);
            if q > 0 && q as usize <= max_norm {
                reps[q as usize] += 1;
            }
        }
    }
    Ok(reps.into_iter().map(|r| r as f64 / w as f64).collect())
}

/// `Σ_{n ≥ 1} a_n n^{-s}` continued to `0 < s < 1` from coefficients up to
/// `N`: the Gaussian-smoothed sum `Σ a_n n^{-s} e^{-(n/X)²}` with
/// `X = N/6`, minus the contribution `ρ Γ((1-s)/2) X^{1-s} / 2` of the pole
/// at `s = 1` with residue `ρ`. The next correction is `O(X^{-2})`.
pub fn smoothed_dirichlet_series(coeffs: &[f64], s: f64, residue: f64) -> Result<f64> {
    if coeffs.len() < 2 || !(s > 0.0) || s == 1.0 {
        return Err(Error::domain("smoothed_dirichlet_series", "need N >= 1 and s > 0, s != 1"));
    }
    let x = (coeffs.len() - 1) as f64 / 6.0;
    let mut acc = crate::summation::NeumaierSum::new();
    for (n, &a) in coeffs.iter().enumerate().skip(1) {
        if a != 0.0 {
            let nf = n as f64;
            acc.add(a * nf.powf(-s) * (-(nf / x).powi(2)).exp());
        }
    }
    Ok(acc.value() - 0.5 * residue * gamma_unchecked(0.5 * (1.0 - s)) * x.powf(1.0 - s))
}

/// `Res_{s=1} ζ_K(s) = L(1, χ_D)` by the class number formula.
pub fn dedekind_residue(d: i64, h: usize, regulator: f64, w: u64) -> f64 {
    let root = (d.unsigned_abs() as f64).sqrt();
    if d < 0 {
        2.0 * std::f64::consts::PI * h as f64 / (w as f64 * root)
    } else {
        2.0 * h as f64 * regulator / root
    }
}

/// `ζ_K(s)` of a quadratic field by enumerating ideals of norm up to
/// `max_norm`.
pub fn dedekind_zeta_by_ideals(
    d: i64,
    h: usize,
    regulator: f64,
    w: u64,
    s: f64,
    max_norm: usize,
) -> Result<f64> {
    let coeffs: Vec<f64> = ideal_counts(d, max_norm).into_iter().map(f64::from).collect();
    smoothed_dirichlet_series(&coeffs, s, dedekind_residue(d, h, regulator, w))
}

/// `L(s, χ_D) = |D|^{-s} Σ_{a=1}^{|D|} χ_D(a) ζ(s, a/|D|)`.
pub fn quadratic_l_function(d: i64, s: f64) -> Result<f64> {
    if !is_fundamental_discriminant(d as i128) {
        return Err(Error::Discriminant(d.to_string(), "not fundamental".into()));
    }
    let m = d.unsigned_abs();
    let mut acc = crate::summation::NeumaierSum::new();
    for a in 1..=m {
        let c = kronecker(d, a);
        if c != 0 {
            acc.add(c as f64 * hurwitz_zeta(s, a as f64 / m as f64)?);
        }
    }
    Ok((m as f64).powf(-s) * acc.value())
}

/// `ζ_K(s) = ζ(s) L(s, χ_D)` for a quadratic field.
pub fn dedekind_zeta_factored(d: i64, s: f64) -> Result<f64> {
    Ok(riemann_zeta(s)? * quadratic_l_function(d, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::reduced_definite_forms;
    use std::f64::consts::PI;

    #[test]
    fn beta_and_two_squares() {
        // β(3) = π³/32
        assert!((dirichlet_beta(3.0).unwrap() - PI.powi(3) / 32.0).abs() < 1e-14);
        let frozen = [
            (3.0, 4.516_810_841_550_475_153),
            (4.0, 3.013_406_019_845_970_062),
            (5.0, 2.545_129_116_832_741_473),
        ];
        for (s, v) in frozen {
            assert!((sum_of_two_squares_epstein(s).unwrap() - v).abs() < 1e-13 * v);
        }
        // ζ(2)β(2) = π²/6 · Catalan
        let catalan = 0.915_965_594_177_219_015_1;
        assert!((sum_of_two_squares_epstein(4.0).unwrap() - PI * PI / 3.0 * catalan).abs() < 1e-13);
    }

    #[test]
    fn kronecker_values() {
        let chi4: Vec<i32> = (1..=8).map(|n| kronecker(-4, n)).collect();
        assert_eq!(chi4, [1, 0, -1, 0, 1, 0, -1, 0]);
        let chi5: Vec<i32> = (1..=5).map(|n| kronecker(5, n)).collect();
        assert_eq!(chi5, [1, -1, -1, 1, 0]);
        // 2 is inert in Q(√-3), split in Q(√-7)
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(8, 2), 0);
    }

    #[test]
    fn ideal_counts_match_form_representations() {
        for d in [-4i64, -3, -23, -56, -71] {
            let forms = reduced_definite_forms(d as i128);
            let w = match d {
                -3 => 6,
                -4 => 4,
                _ => 2,
            };
            let n = 3000;
            let total = ideal_counts(d, n);
            let mut from_forms = vec![0.0; n + 1];
            for f in &forms {
                for (acc, c) in from_forms.iter_mut().zip(class_ideal_counts(f, w, n).unwrap()) {
                    *acc += c;
                }
            }
            for k in 1..=n {
                assert!((from_forms[k] - total[k] as f64).abs() < 1e-12, "D = {d}, n = {k}");
            }
        }
    }

    #[test]
    fn smoothed_sums_match_hurwitz_factorization() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for (d, h, r, w) in [(-4i64, 1usize, 1.0, 4u64), (5, 1, phi.ln(), 2), (-23, 3, 1.0, 2)] {
            for &s in &[0.3, 0.7, 2.0] {
                let by_ideals = dedekind_zeta_by_ideals(d, h, r, w, s, 200_000).unwrap();
                let factored = dedekind_zeta_factored(d, s).unwrap();
                assert!(
                    ((by_ideals - factored) / factored).abs() < 1e-8,
                    "D = {d}, s = {s}: {by_ideals} vs {factored}"
                );
            }
        }
        // ζ(0.7)β(0.7), externally evaluated
        let v = dedekind_zeta_factored(-4, 0.7).unwrap();
        assert!((v + 2.000_888_234_072_407_946).abs() < 1e-12);
        let v = dedekind_zeta_factored(5, 0.7).unwrap();
        assert!((v + 0.877_996_460_200_669_267_1).abs() < 1e-12);
    }
}
