//! The `toral` command line: field data, Epstein evaluation and checks,
//! periods, L-values, non-vanishing reports and discriminant scans.
//!
//! Exit status is 0 on success, 1 when a computation fails or a check does
//! not pass, and 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bounds::{theorem1_bound, NonvanishingReport, Theorem1Params};
use crate::epstein::{epstein_completed, epstein_direct, functional_equation_residual, EvalConfig};
use crate::lattice::{lambda1, random_unimodular_basis, LatticeBasis};
use crate::number_field::{
    field_to_json, ideal_lattice, is_fundamental_discriminant, load_field, quadratic_field,
    validate_field, NumberFieldData,
};
use crate::periods::{class_group_dft, hecke_period, period_constant, CharacterTable, QuadratureSpec};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "toral", version, about = "Epstein zeta values, toral periods and class-group L-function bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Arithmetic data of a field and its validation checks.
    FieldInfo(FieldInfoArgs),
    /// E*(g, s) and E(g, s) for a field ideal lattice or a random basis.
    EpsteinEval(EvalArgs),
    /// Functional-equation residuals on random bases.
    EpsteinCheck(CheckArgs),
    /// Toral periods Z(Λ) of the ideal classes.
    Period(PeriodArgs),
    /// Class-group L-values L*(s, χ) from the period DFT.
    Lfunctions(PeriodArgs),
    /// The non-vanishing report: theorem bound, lemma bound, observed count.
    Nonvanishing(NonvanishingArgs),
    /// Non-vanishing quantities over a range of fundamental discriminants.
    Scan(ScanArgs),
    /// Run every acceptance criterion.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct FieldSource {
    /// Fundamental discriminant of a built-in quadratic field.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "field")]
    disc: Option<i64>,
    /// Field-data JSON document.
    #[arg(long)]
    field: Option<PathBuf>,
}

impl FieldSource {
    fn load(&self) -> Result<Option<NumberFieldData>> {
        match (&self.disc, &self.field) {
            (Some(d), _) => quadratic_field(*d).map(Some),
            (None, Some(p)) => load_field(p).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<NumberFieldData> {
        self.load()?
            .ok_or_else(|| Error::domain("field", "one of --disc or --field is required"))
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct FieldInfoArgs {
    #[command(flatten)]
    source: FieldSource,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    source: FieldSource,
    /// Ideal class of the field lattice.
    #[arg(long, default_value_t = 0)]
    class: usize,
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
    /// Dimension of the random basis when no field is given.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Seed for a random unimodular basis; without it the basis is ℤⁿ.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// A single value of s; by default 0.3n, 0.5n and 0.7n.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PeriodArgs {
    #[command(flatten)]
    source: FieldSource,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    /// Only this class (default: all classes).
    #[arg(long)]
    class: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Subconvexity exponent δ.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Implicit constant of the convexity bound (default 1).
    #[arg(long)]
    c_convex: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

impl BoundArgs {
    fn params(&self, err: &mut dyn Write) -> Theorem1Params {
        let c_convex = self.c_convex.unwrap_or_else(|| {
            let _ = writeln!(
                err,
                "warning: convexity constant not given, using C = 1; the theorem bound is only indicative"
            );
            1.0
        });
        Theorem1Params {
            s: self.s,
            epsilon: self.eps,
            delta: self.delta,
            c_convex,
        }
    }
}

#[derive(Debug, Args)]
struct NonvanishingArgs {
    #[command(flatten)]
    source: FieldSource,
    #[command(flatten)]
    bounds: BoundArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Discriminant range `A..B`, both ends included, e.g. `-3..-200`.
    #[arg(allow_hyphen_values = true)]
    range: String,
    #[command(flatten)]
    bounds: BoundArgs,
    #[command(flatten)]
    output: OutputArgs,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(Error::Io(e))
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parse `args` (program name first) and run the command, writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = match cli.command {
        Command::FieldInfo(a) => field_info(&a, out),
        Command::EpsteinEval(a) => epstein_eval(&a, out),
        Command::EpsteinCheck(a) => epstein_check(&a, out),
        Command::Period(a) => period(&a, out),
        Command::Lfunctions(a) => lfunctions(&a, out),
        Command::Nonvanishing(a) => nonvanishing(&a, out, err),
        Command::Scan(a) => scan(&a, out, err),
        Command::Selftest => selftest(out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.14e}")
}

fn emit(output: &OutputArgs, out: &mut dyn Write, text: &str) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => out.write_all(text.as_bytes()),
    }
}

fn emit_json(output: &OutputArgs, out: &mut dyn Write, value: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    emit(output, out, &text)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

fn field_info(a: &FieldInfoArgs, out: &mut dyn Write) -> CmdResult {
    let field = a.source.require()?;
    let checks = validate_field(&field);
    let all_passed = checks.iter().all(|c| c.passed);
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = field_to_json(&field);
            if let Value::Object(map) = &mut v {
                map.insert("name".into(), json!(field.name()));
                map.insert("h".into(), json!(field.class_number()));
                map.insert("validation".into(), to_value(&checks));
            }
            emit_json(&a.output, out, &v)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| vec![c.name.to_string(), c.passed.to_string(), num(c.residual)])
                .collect();
            let mut text = format!(
                "# {} degree={} r1={} r2={} D={} h={} w={} R={}\n",
                field.name(),
                field.degree,
                field.r1,
                field.r2,
                field.discriminant,
                field.class_number(),
                field.w,
                num(field.regulator)
            );
            text.push_str(&csv_table(&["check", "passed", "residual"], &rows));
            emit(&a.output, out, &text)?;
        }
    }
    Ok(if all_passed { 0 } else { 1 })
}

fn epstein_eval(a: &EvalArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = EvalConfig::with_tolerance(a.tol);
    let basis = match a.source.load()? {
        Some(field) => ideal_lattice(&field, a.class)?,
        None => match a.seed {
            Some(seed) => random_unimodular_basis(a.n, &mut ChaCha8Rng::seed_from_u64(seed)),
            None => LatticeBasis::identity(a.n),
        },
    };
    let n = basis.dim();
    let completed = epstein_completed(&basis, a.s, &cfg)?;
    let value = crate::epstein::epstein_value(&basis, a.s, &cfg)?;
    let direct = if a.s > n as f64 {
        Some(epstein_direct(&basis, a.s, &cfg)?)
    } else {
        None
    };
    let l1 = lambda1(&basis)?;
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let v = json!({
                "n": n,
                "s": a.s,
                "basis": basis.rows(),
                "lambda1": l1,
                "completed": completed,
                "value": value,
                "direct": direct,
            });
            emit_json(&a.output, out, &v)?;
        }
        Format::Csv => {
            let row = vec![
                n.to_string(),
                num(a.s),
                num(completed.value),
                num(completed.error_estimate),
                num(value.value),
                direct.map(|d| num(d.value)).unwrap_or_default(),
            ];
            let text = csv_table(&["n", "s", "completed", "error", "value", "direct"], &[row]);
            emit(&a.output, out, &text)?;
        }
    }
    Ok(0)
}

const FE_THRESHOLD: f64 = 1e-8;

fn epstein_check(a: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    if a.n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let cfg = EvalConfig::with_tolerance(a.tol);
    let nf = a.n as f64;
    let s_values = match a.s {
        Some(s) => vec![s],
        None => vec![0.3 * nf, 0.5 * nf, 0.7 * nf],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let bases: Vec<LatticeBasis> = (0..a.samples)
        .map(|_| random_unimodular_basis(a.n, &mut rng))
        .collect();
    let jobs: Vec<(usize, f64)> = (0..bases.len())
        .flat_map(|i| s_values.iter().map(move |&s| (i, s)))
        .collect();
    let residuals: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, s)| functional_equation_residual(&bases[i], s, &cfg))
        .collect::<Result<_>>()?;
    let max = residuals.iter().copied().fold(0.0, f64::max);
    let passed = max <= FE_THRESHOLD;
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let samples: Vec<Value> = jobs
                .iter()
                .zip(&residuals)
                .map(|(&(i, s), r)| json!({"sample": i, "s": s, "residual": r}))
                .collect();
            let v = json!({
                "n": a.n,
                "seed": a.seed,
                "samples": samples,
                "max_residual": max,
                "threshold": FE_THRESHOLD,
                "passed": passed,
            });
            emit_json(&a.output, out, &v)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = jobs
                .iter()
                .zip(&residuals)
                .map(|(&(i, s), r)| vec![i.to_string(), num(s), num(*r)])
                .collect();
            let mut text = csv_table(&["sample", "s", "residual"], &rows);
            text.push_str(&format!("# max_residual={} passed={passed}\n", num(max)));
            emit(&a.output, out, &text)?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn period(a: &PeriodArgs, out: &mut dyn Write) -> CmdResult {
    let field = a.source.require()?;
    let cfg = EvalConfig::with_tolerance(a.tol);
    let quad = QuadratureSpec::default();
    let h = field.class_number();
    let indices: Vec<usize> = match a.class {
        Some(i) if i >= h => {
            return Err(Error::IndexOutOfRange { index: i, len: h }.into());
        }
        Some(i) => vec![i],
        None => (0..h).collect(),
    };
    let c = 1.0 / period_constant(&field);
    let mut rows = Vec::with_capacity(indices.len());
    for &i in &indices {
        let z = hecke_period(&field, i, a.s, &quad, &cfg)?;
        rows.push((i, z));
    }
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let classes: Vec<Value> = rows
                .iter()
                .map(|(i, z)| {
                    json!({
                        "index": i,
                        "label": field.classes[*i].label,
                        "coords": field.classes[*i].coords,
                        "period": z.value,
                        "error_estimate": z.error_estimate,
                        "partial_zeta_completed": c * z.value,
                    })
                })
                .collect();
            let v = json!({"field": field.name(), "s": a.s, "classes": classes});
            emit_json(&a.output, out, &v)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|(i, z)| {
                    vec![
                        i.to_string(),
                        format!("\"{}\"", field.classes[*i].label),
                        num(z.value),
                        num(z.error_estimate),
                        num(c * z.value),
                    ]
                })
                .collect();
            let text = csv_table(&["class", "label", "period", "error", "partial_zeta_completed"], &rows);
            emit(&a.output, out, &text)?;
        }
    }
    Ok(0)
}

fn lfunctions(a: &PeriodArgs, out: &mut dyn Write) -> CmdResult {
    let field = a.source.require()?;
    let cfg = EvalConfig::with_tolerance(a.tol);
    let result = class_group_dft(&field, a.s, &QuadratureSpec::default(), &cfg)?;
    let table = CharacterTable::for_field(&field)?;
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = to_value(&result);
            if let Value::Object(map) = &mut v {
                map.insert("field".into(), json!(field.name()));
                let chars: Vec<Vec<u64>> = (0..table.len()).map(|k| table.exponents(k)).collect();
                map.insert("characters".into(), json!(chars));
            }
            emit_json(&a.output, out, &v)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..table.len())
                .map(|k| {
                    let e: Vec<String> = table.exponents(k).iter().map(u64::to_string).collect();
                    let l = result.l_values[k];
                    vec![
                        k.to_string(),
                        format!("\"{}\"", e.join(" ")),
                        num(l.re),
                        num(l.im),
                        num(result.fourier[k].norm()),
                    ]
                })
                .collect();
            let text = csv_table(&["character", "exponents", "re_L", "im_L", "abs_Zhat"], &rows);
            emit(&a.output, out, &text)?;
        }
    }
    Ok(0)
}

fn nonvanishing(a: &NonvanishingArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let field = a.source.require()?;
    let params = a.bounds.params(err);
    let cfg = EvalConfig::with_tolerance(a.bounds.tol);
    let report = theorem1_bound(&field, &params, &QuadratureSpec::default(), &cfg)?;
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&a.output, out, &to_value(&report))?,
        Format::Csv => {
            let text = format!("{}{}", SCAN_HEADER.join(","), "\n") + &scan_row(&field, &report).join(",") + "\n";
            emit(&a.output, out, &text)?;
        }
    }
    Ok(0)
}

const SCAN_HEADER: [&str; 9] = [
    "D",
    "h",
    "R",
    "Z_O",
    "sup_Z",
    "sup_Zhat",
    "lemma_bound",
    "observed_count",
    "theorem1_bound",
];

fn scan_row(field: &NumberFieldData, r: &NonvanishingReport) -> Vec<String> {
    vec![
        field.discriminant.to_string(),
        r.h.to_string(),
        num(field.regulator),
        num(r.trivial_period),
        num(r.sup_period),
        num(r.sup_fourier),
        num(r.lemma_bound),
        r.observed_count.to_string(),
        num(r.theorem1_bound),
    ]
}

fn parse_range(text: &str) -> std::result::Result<Vec<i64>, String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("range `{text}` is not of the form A..B"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad range end `{t}`: {e}"))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    let (lo, hi) = (a.min(b), a.max(b));
    let mut ds: Vec<i64> = (lo..=hi)
        .filter(|&d| is_fundamental_discriminant(d as i128))
        .collect();
    ds.sort_by_key(|d| (d.unsigned_abs(), *d));
    Ok(ds)
}

enum ScanEntry {
    Row(Vec<String>),
    Skipped(i64, String),
}

fn scan(a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let ds = parse_range(&a.range).map_err(Failure::Usage)?;
    let params = a.bounds.params(err);
    let cfg = EvalConfig::with_tolerance(a.bounds.tol);
    let quad = QuadratureSpec::default();
    let entries: Vec<Result<ScanEntry>> = ds
        .par_iter()
        .map(|&d| {
            let field = match quadratic_field(d) {
                Ok(f) => f,
                Err(Error::UnsupportedField(msg)) => return Ok(ScanEntry::Skipped(d, msg)),
                Err(e) => return Err(e),
            };
            let report = theorem1_bound(&field, &params, &quad, &cfg)?;
            Ok(ScanEntry::Row(scan_row(&field, &report)))
        })
        .collect();
    let entries = entries.into_iter().collect::<Result<Vec<_>>>()?;
    for e in &entries {
        if let ScanEntry::Skipped(d, msg) = e {
            writeln!(err, "warning: D = {d} skipped: {msg}")?;
        }
    }
    match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = entries
                .into_iter()
                .map(|e| match e {
                    ScanEntry::Row(r) => r,
                    ScanEntry::Skipped(d, _) => {
                        let mut r = vec![d.to_string(), "unsupported".to_string()];
                        r.resize(SCAN_HEADER.len(), String::new());
                        r
                    }
                })
                .collect();
            emit(&a.output, out, &csv_table(&SCAN_HEADER, &rows))?;
        }
        Format::Json => {
            let rows: Vec<Value> = entries
                .into_iter()
                .map(|e| match e {
                    ScanEntry::Row(r) => {
                        let map: serde_json::Map<String, Value> = SCAN_HEADER
                            .iter()
                            .zip(r)
                            .map(|(k, v)| (k.to_string(), Value::String(v)))
                            .collect();
                        Value::Object(map)
                    }
                    ScanEntry::Skipped(d, msg) => json!({"D": d.to_string(), "skipped": msg}),
                })
                .collect();
            emit_json(&a.output, out, &Value::Array(rows))?;
        }
    }
    Ok(0)
}

fn selftest(out: &mut dyn Write) -> CmdResult {
    let outcomes = crate::acceptance::run_all();
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_ordered_by_absolute_value() {
        assert_eq!(parse_range("-3..-20").unwrap(), vec![-3, -4, -7, -8, -11, -15, -19, -20]);
        assert_eq!(parse_range("-8..8").unwrap(), vec![-3, -4, 5, -7, -8, 8]);
        assert!(parse_range("-3-20").is_err());
        assert!(parse_range("x..4").is_err());
    }
}
