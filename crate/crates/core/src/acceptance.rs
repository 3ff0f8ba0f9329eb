//! The acceptance criteria of the toolkit as library functions, so that the
//! `acceptance` test target and the `selftest` command run the same code.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{
    height_gap_check, minkowski_unit_log_check, trivial_class_lower_bound, uniform_cusp_inequality,
};
use crate::epstein::{
    completion_factor, epstein_completed, epstein_direct, functional_equation_residual,
    residue_check, EvalConfig,
};
use crate::lattice::{random_cusp_basis, random_unimodular_basis, LatticeBasis};
use crate::number_field::{load_field_str, quadratic_field, NumberFieldData};
use crate::oracle::{dedekind_zeta_by_ideals, sum_of_two_squares_epstein};
use crate::periods::{
    archimedean_factor, class_group_dft, hecke_period, hecke_trick_check, nonvanishing_count_bound,
    period_constant, CharacterTable, QuadratureSpec,
};
use crate::Result;

/// The complex cubic field of discriminant −23 (`x³ - x - 1`), computed
/// externally.
pub const CUBIC_FIXTURE: &str = include_str!("../fixtures/cubic_disc_m23.json");

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {}: {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn outcome(
    id: u8,
    name: &'static str,
    start: Instant,
    result: Result<(bool, String)>,
) -> CriterionOutcome {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

/// The quadratic fields and the cubic fixture used throughout.
pub fn test_fields() -> Result<Vec<NumberFieldData>> {
    let mut out: Vec<NumberFieldData> = [-4, -7, -23, -163, 5, 13, 29]
        .iter()
        .map(|&d| quadratic_field(d))
        .collect::<Result<_>>()?;
    out.push(load_field_str(CUBIC_FIXTURE)?);
    Ok(out)
}

/// Criterion 1: `|E*(g, n-s) - E*(ᵗg⁻¹, s)| ≤ 1e-8` on 50 random bases per `n ∈ {2,3}`
/// and `s ∈ {0.3n, 0.5n, 0.7n}`, within 60 s.
pub fn functional_equation() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cfg = EvalConfig::default();
        let mut worst = 0.0f64;
        for n in [2usize, 3] {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
            let bases: Vec<LatticeBasis> = (0..50).map(|_| random_unimodular_basis(n, &mut rng)).collect();
            let residuals: Vec<f64> = bases
                .par_iter()
                .map(|g| {
                    [0.3, 0.5, 0.7]
                        .iter()
                        .map(|f| functional_equation_residual(g, f * n as f64, &cfg))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            worst = worst.max(max_of(residuals));
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((
            worst <= 1e-8 && secs <= 60.0,
            format!("max residual {worst:.3e} (limit 1e-8), 300 evaluations in {secs:.1} s (limit 60 s)"),
        ))
    };
    outcome(1, "functional equation", start, run())
}

/// Criterion 2: Completed versus direct evaluation at `s ∈ {n+0.5, n+1}`, 20 bases
/// per `n ∈ {2,3}`, relative difference `≤ 1e-9`.
pub fn overlap_consistency() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cfg = EvalConfig::default();
        let mut worst = 0.0f64;
        for n in [2usize, 3] {
            let mut rng = ChaCha8Rng::seed_from_u64(200 + n as u64);
            let bases: Vec<LatticeBasis> = (0..20).map(|_| random_unimodular_basis(n, &mut rng)).collect();
            let errs: Vec<f64> = bases
                .par_iter()
                .map(|g| {
                    [0.5, 1.0]
                        .iter()
                        .map(|ds| {
                            let s = n as f64 + ds;
                            let c = epstein_completed(g, s, &cfg)?.value;
                            let d = completion_factor(s) * epstein_direct(g, s, &cfg)?.value;
                            Ok(((c - d) / c).abs())
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            worst = worst.max(max_of(errs));
        }
        Ok((worst <= 1e-9, format!("max relative difference {worst:.3e} (limit 1e-9)")))
    };
    outcome(2, "overlap consistency", start, run())
}

/// Criterion 3: Richardson-extrapolated `(s-n)E(g,s)` within `1e-4` of
/// `π^{n/2}/Γ(n/2)` on 5 bases per `n ∈ {2,3}`.
pub fn residue() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cfg = EvalConfig::default();
        let mut worst = 0.0f64;
        for n in [2usize, 3] {
            let mut rng = ChaCha8Rng::seed_from_u64(300 + n as u64);
            for _ in 0..5 {
                worst = worst.max(residue_check(&random_unimodular_basis(n, &mut rng), &cfg)?);
            }
        }
        Ok((worst <= 1e-4, format!("max deviation {worst:.3e} (limit 1e-4)")))
    };
    outcome(3, "residue at s = n", start, run())
}

/// Criterion 4: `E(ℤ², s) = 2ζ(s/2)β(s/2)` to `1e-9` relative at `s ∈ {3,4,5}`.
pub fn two_squares_oracle() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cfg = EvalConfig::default();
        let id = LatticeBasis::identity(2);
        let mut worst = 0.0f64;
        for s in [3.0, 4.0, 5.0] {
            let oracle = sum_of_two_squares_epstein(s)?;
            let direct = epstein_direct(&id, s, &cfg)?.value;
            let completed = epstein_completed(&id, s, &cfg)?.value / completion_factor(s);
            worst = worst
                .max(((direct - oracle) / oracle).abs())
                .max(((completed - oracle) / oracle).abs());
        }
        Ok((worst <= 1e-9, format!("max relative error {worst:.3e} (limit 1e-9)")))
    };
    outcome(4, "sum-of-two-squares oracle", start, run())
}

/// Criterion 5: Period of `𝒪` for `ℚ(i)` and `ℚ(√5)` at `s = 0.7` against
/// `(w/(2^{r₁} n R)) ζ*(0.7)` with `ζ` from ideals of norm up to `10⁶`,
/// relative `1e-6`, within 120 s.
pub fn hecke_period_identity() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cfg = EvalConfig::default();
        let s = 0.7;
        let mut worst = 0.0f64;
        let mut parts = Vec::new();
        for d in [-4i64, 5] {
            let k = quadratic_field(d)?;
            let z = hecke_period(&k, 0, s, &QuadratureSpec::default(), &cfg)?.value;
            let zeta = dedekind_zeta_by_ideals(d, k.class_number(), k.regulator, k.w, s, 1_000_000)?;
            let zeta_star = archimedean_factor(k.r1, k.r2, s) * k.abs_discriminant().powf(0.5 * s) * zeta;
            let expected = period_constant(&k) * zeta_star;
            let rel = ((z - expected) / expected).abs();
            worst = worst.max(rel);
            parts.push(format!("D = {d}: Z = {z:.12}, identity {expected:.12}"));
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((
            worst <= 1e-6 && secs <= 120.0,
            format!("{}; max relative error {worst:.3e} (limit 1e-6)", parts.join("; ")),
        ))
    };
    outcome(5, "Hecke period identity", start, run())
}

/// Criterion 6: Hecke's integral for signatures `(2,0)` (`≤ 1e-6`) and `(0,1)`
/// (`≤ 1e-10`).
pub fn hecke_trick() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut real = 0.0f64;
        for v in [[1.0, 1.0], [1.0, 2f64.sqrt()]] {
            for s in [0.5, 0.7] {
                real = real.max(hecke_trick_check(2, 0, &v, s)?.relative_error);
            }
        }
        let mut complex = 0.0f64;
        for v in [[1.0, 1.0], [0.3, -2.0]] {
            for s in [0.5, 0.6, 0.7] {
                complex = complex.max(hecke_trick_check(0, 1, &v, s)?.relative_error);
            }
        }
        Ok((
            real <= 1e-6 && complex <= 1e-10,
            format!("(2,0) max error {real:.3e} (limit 1e-6); (0,1) max error {complex:.3e} (limit 1e-10)"),
        ))
    };
    outcome(6, "Hecke integral", start, run())
}

/// Criterion 7: `E*(g, ns) ≥ A₀ λ₁(g)^{-ns} - B₀` on 100 random bases for each
/// `n ∈ {2,3}` and `s ∈ {1/n, 0.6, 0.75, 0.9}`.
pub fn uniform_cusp_bound() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cfg = EvalConfig::default();
        let mut violations = 0usize;
        let mut checked = 0usize;
        for n in [2usize, 3] {
            for (j, s) in [1.0 / n as f64, 0.6, 0.75, 0.9].into_iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(700 + 10 * n as u64 + j as u64);
                let bases: Vec<LatticeBasis> = (0..100).map(|_| random_cusp_basis(n, 3.0, &mut rng)).collect();
                let holds: Vec<bool> = bases
                    .par_iter()
                    .map(|g| uniform_cusp_inequality(g, s, &cfg).map(|c| c.holds))
                    .collect::<Result<_>>()?;
                checked += holds.len();
                violations += holds.iter().filter(|h| !**h).count();
            }
        }
        Ok((violations == 0, format!("{violations} violations in {checked} checks")))
    };
    outcome(7, "uniform cusp bound", start, run())
}

/// Criterion 8: `Z(𝒪_E) ≥ (A₁|D|^{s/2} - B₀R)/R` at `s ∈ {1/2, 0.7}` on the test
/// fields.
pub fn trivial_class_bound() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cfg = EvalConfig::default();
        let mut violations = Vec::new();
        let mut min_margin = f64::INFINITY;
        for k in test_fields()? {
            for s in [0.5, 0.7] {
                let z = hecke_period(&k, 0, s, &QuadratureSpec::default(), &cfg)?.value;
                let bound = trivial_class_lower_bound(&k, s)?;
                min_margin = min_margin.min(z - bound);
                if z < bound {
                    violations.push(format!("D = {}, s = {s}", k.discriminant));
                }
            }
        }
        Ok((
            violations.is_empty(),
            format!(
                "{} violations over 8 fields x 2 values of s, smallest margin {min_margin:.4}{}",
                violations.len(),
                if violations.is_empty() { String::new() } else { format!(": {}", violations.join(", ")) }
            ),
        ))
    };
    outcome(8, "trivial-class lower bound", start, run())
}

/// Criterion 9: Minkowski's second theorem and the height gap on every unit-log
/// lattice of the test fields.
pub fn unit_log_geometry() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut violations = Vec::new();
        let mut checked = 0;
        for k in test_fields()? {
            if k.unit_rank() == 0 {
                continue;
            }
            checked += 1;
            let m = minkowski_unit_log_check(&k)?;
            if !m.holds {
                violations.push(format!("Minkowski D = {}", k.discriminant));
            }
            if !height_gap_check(&k).holds {
                violations.push(format!("height gap D = {}", k.discriminant));
            }
        }
        Ok((
            violations.is_empty(),
            format!("{checked} unit lattices, {} violations {}", violations.len(), violations.join(", ")),
        ))
    };
    outcome(9, "Minkowski and height gap", start, run())
}

/// Criterion 10: For `D = -23`, `s = 1/2`: count of nonvanishing `L` versus
/// `‖Z‖_∞/‖Ẑ‖_∞`, DFT inversion and character orthogonality.
pub fn nonvanishing_pipeline() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let k = quadratic_field(-23)?;
        let r = class_group_dft(&k, 0.5, &QuadratureSpec::default(), &EvalConfig::default())?;
        let table = CharacterTable::for_field(&k)?;
        let elements: Vec<Vec<u64>> = k.classes.iter().map(|c| c.coords.clone()).collect();
        let values: Vec<_> = r.periods.iter().map(|&v| num_complex::Complex64::new(v, 0.0)).collect();
        let c = nonvanishing_count_bound(&table, &elements, &values)?;
        let ok = c.count as f64 >= c.bound
            && r.inversion_residual <= 1e-9
            && r.orthogonality_residual <= 1e-12;
        Ok((
            ok,
            format!(
                "observed {} >= lemma bound {:.6}; inversion {:.2e} (limit 1e-9); orthogonality {:.2e} (limit 1e-12)",
                c.count, c.bound, r.inversion_residual, r.orthogonality_residual
            ),
        ))
    };
    outcome(10, "non-vanishing pipeline", start, run())
}

fn scan_once(threads: usize) -> Result<(Vec<u8>, Duration)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::domain("scan", e.to_string()))?;
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["toral", "scan", "-3..-200"];
    let code = pool.install(|| crate::cli::run(args, &mut out, &mut err));
    if code != 0 {
        return Err(crate::Error::domain("scan", String::from_utf8_lossy(&err).into_owned()));
    }
    Ok((out, start.elapsed()))
}

/// Criterion 11: `scan -3..-200` twice gives identical bytes; the single-threaded
/// run finishes within 10 minutes.
pub fn scan_determinism() -> CriterionOutcome {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let (first, single) = scan_once(1)?;
        let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(2).max(2);
        let (second, _) = scan_once(threads)?;
        let rows = first.iter().filter(|&&b| b == b'\n').count().saturating_sub(1);
        let secs = single.as_secs_f64();
        Ok((
            first == second && secs <= 600.0,
            format!(
                "{rows} rows, {} bytes, identical across 1 and {threads} threads: {}; single-threaded {secs:.1} s (limit 600 s)",
                first.len(),
                first == second
            ),
        ))
    };
    outcome(11, "scan determinism", start, run())
}

/// Every criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        functional_equation(),
        overlap_consistency(),
        residue(),
        two_squares_oracle(),
        hecke_period_identity(),
        hecke_trick(),
        uniform_cusp_bound(),
        trivial_class_bound(),
        unit_log_geometry(),
        nonvanishing_pipeline(),
        scan_determinism(),
    ]
}
