use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spherical_poincare::gallery::{build, BodySpec, CheckInput};
use spherical_poincare::inequality::{
    format_float, theorem1, theorem2, theorem3, theorem_general_m, theorem_mixed, to_json, write_csv,
    write_csv_rows, InequalityReport, DEFAULT_TOLERANCE,
};
use spherical_poincare::spectral::{
    coeff1_factorial, coeff1_product, coeff2_factorial, coeff2_product, eigenvalue, expand_c, EigenSystem,
};
use spherical_poincare::transform::DEFAULT_BAND_LIMIT;

#[derive(Parser)]
#[command(name = "poincare", version, about = "Sharp Minkowski-type inequalities for convex bodies given by support functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Theorem {
    Theorem1,
    Theorem2,
    Theorem3,
    GeneralM,
    Mixed,
}

#[derive(clap::Args)]
struct CheckOptions {
    /// Theorems to evaluate; defaults to all that apply to the input
    #[arg(long, value_delimiter = ',')]
    theorems: Vec<Theorem>,
    /// Orders used by general-m
    #[arg(long = "m", value_delimiter = ',', default_values_t = [2i64, 3, 4, 5])]
    orders: Vec<i64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Output format; json for `check`, csv for `sweep` unless given
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = DEFAULT_BAND_LIMIT)]
    band_limit: usize,
    /// Overrides the spec's require_convex
    #[arg(long)]
    require_convex: Option<bool>,
    /// Write the report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues lambda_n = n(n+d-2) and gaps gamma_n = lambda_n - lambda_1
    Eigen {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Coefficients of prod_{j=l}^{m} (t - lambda_j), lowest degree first
    Coeffs {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        l: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Evaluate the inequalities for a body (or a {"k", "l"} pair) given as JSON
    Check {
        body: PathBuf,
        #[command(flatten)]
        options: CheckOptions,
    },
    /// Re-run `check` while varying one parameter of a template body
    Sweep {
        template: PathBuf,
        /// JSON pointer to the varied parameter, e.g. /params/radius
        #[arg(long)]
        param: String,
        /// Comma-separated parameter values; empty for none
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[command(flatten)]
        options: CheckOptions,
    },
}

#[derive(Debug)]
enum Failure {
    /// Bad input: exit code 2.
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<bool, Failure>;

fn emit(output: Option<&Path>, text: &[u8]) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text)?,
    }
    Ok(())
}

fn eigen(d: i64, n: i64, format: Format) -> Run {
    if n < 0 {
        return Err(Failure::Usage(format!("--n must be non-negative, got {n}")));
    }
    let lambda1 = eigenvalue(1, d)?;
    let rows = (0..=n).map(|k| Ok((k, eigenvalue(k, d)?))).collect::<Result<Vec<_>, Failure>>()?;
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "lambda", "gamma"])?;
            for (k, lambda) in &rows {
                let gamma = if *k == 0 { "-".to_string() } else { (lambda - lambda1).to_string() };
                w.write_record([k.to_string(), lambda.to_string(), gamma])?;
            }
            w.into_inner()?
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(k, lambda)| {
                    let gamma = if *k == 0 { Value::Null } else { json!(lambda - lambda1) };
                    json!({"n": k, "lambda": lambda, "gamma": gamma})
                })
                .collect();
            let mut s = serde_json::to_vec_pretty(&json!({"d": d, "eigenvalues": rows}))?;
            s.push(b'\n');
            s
        }
    };
    emit(None, &text)?;
    Ok(true)
}

fn coeffs(d: i64, l: i64, m: i64, format: Format) -> Run {
    if d < 2 {
        return Err(Failure::Usage(format!("d must be at least 2, got {d}")));
    }
    if l < 1 || m < l {
        return Err(Failure::Usage(format!("need 1 <= l <= m, got l = {l}, m = {m}")));
    }
    let eigs = EigenSystem::sphere(d as usize, m as usize)?;
    let poly = expand_c(l, m, &eigs)?;
    let ints = poly.integer_coeffs().ok_or_else(|| Failure::Usage("non-integer coefficients".into()))?;
    let mut rows: Vec<(String, String)> =
        ints.iter().enumerate().map(|(k, c)| (format!("c_{k}"), c.to_string())).collect();
    let mut consistent = true;
    if l == 1 && m >= 2 {
        let c1 = (coeff1_product(m, d)?, coeff1_factorial(m, d)?);
        let c2 = (coeff2_product(m, d)?, coeff2_factorial(m, d)?);
        consistent = c1.1 == c1.0.clone().into() && c2.1 == c2.0.clone().into();
        rows.push(("coeff1_product".into(), c1.0.to_string()));
        rows.push(("coeff1_closed_form".into(), c1.1.to_string()));
        rows.push(("coeff2_product".into(), c2.0.to_string()));
        rows.push(("coeff2_closed_form".into(), c2.1.to_string()));
    }
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["term", "value"])?;
            for (name, v) in &rows {
                w.write_record([name, v])?;
            }
            w.into_inner()?
        }
        Format::Json => {
            let number = |s: &str| s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(s));
            let mut obj = serde_json::Map::new();
            obj.insert("d".into(), json!(d));
            obj.insert("l".into(), json!(l));
            obj.insert("m".into(), json!(m));
            obj.insert("coefficients".into(), Value::Array(ints.iter().map(|c| number(&c.to_string())).collect()));
            for (name, v) in rows.iter().filter(|(n, _)| !n.starts_with("c_")) {
                obj.insert(name.clone(), number(v));
            }
            obj.insert("consistent".into(), json!(consistent));
            let mut s = serde_json::to_vec_pretty(&Value::Object(obj))?;
            s.push(b'\n');
            s
        }
    };
    emit(None, &text)?;
    if !consistent {
        eprintln!("error: closed-form coefficients disagree with the eigenvalue products");
    }
    Ok(consistent)
}

fn apply_convexity(spec: &BodySpec, require: Option<bool>) -> BodySpec {
    let mut spec = spec.clone();
    if require.is_some() {
        spec.require_convex = require;
    }
    spec
}

fn run_checks(input: &CheckInput, o: &CheckOptions) -> Result<Vec<InequalityReport>, Failure> {
    let mut reports = Vec::new();
    match input {
        CheckInput::Single(spec) => {
            let theorems = if o.theorems.is_empty() {
                vec![Theorem::Theorem1, Theorem::Theorem2, Theorem::Theorem3, Theorem::GeneralM]
            } else {
                o.theorems.clone()
            };
            let body = build(&apply_convexity(spec, o.require_convex), o.band_limit)?.body;
            for t in theorems {
                match t {
                    Theorem::Theorem1 => reports.push(theorem1(&body)),
                    Theorem::Theorem2 => reports.push(theorem2(&body)),
                    Theorem::Theorem3 => reports.push(theorem3(&body)),
                    Theorem::GeneralM => {
                        for &m in &o.orders {
                            reports.push(theorem_general_m(&body, m)?);
                        }
                    }
                    Theorem::Mixed => {
                        return Err(Failure::Usage("mixed needs a {\"k\": ..., \"l\": ...} pair".into()))
                    }
                }
            }
        }
        CheckInput::Pair(pair) => {
            if o.theorems.iter().any(|t| *t != Theorem::Mixed) {
                return Err(Failure::Usage("a body pair only supports the mixed theorem".into()));
            }
            let k = build(&apply_convexity(&pair.k, o.require_convex), o.band_limit)?.body;
            let l = build(&apply_convexity(&pair.l, o.require_convex), o.band_limit)?.body;
            reports.push(theorem_mixed(&k, &l)?);
        }
    }
    Ok(reports.into_iter().map(|r| r.with_tolerance(o.tol)).collect())
}

fn check_tolerance(o: &CheckOptions) -> Result<(), Failure> {
    if !(o.tol >= 0.0 && o.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be a non-negative number, got {}", o.tol)));
    }
    Ok(())
}

fn check(path: &Path, o: &CheckOptions) -> Run {
    check_tolerance(o)?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let input = CheckInput::from_json(&text)?;
    let reports = run_checks(&input, o)?;
    let mut out = Vec::new();
    match o.format.unwrap_or(Format::Json) {
        Format::Json => {
            out.extend(to_json(&reports)?.into_bytes());
            out.push(b'\n');
        }
        Format::Csv => write_csv(&reports, &mut out)?,
    }
    emit(o.output.as_deref(), &out)?;
    Ok(reports.iter().all(InequalityReport::all_hold))
}

fn sweep(template: &Path, param: &str, values: &str, o: &CheckOptions) -> Run {
    check_tolerance(o)?;
    let text = fs::read_to_string(template).map_err(|e| Failure::Usage(format!("{}: {e}", template.display())))?;
    let base: Value = serde_json::from_str(&text)?;
    if base.pointer(param).is_none() {
        return Err(Failure::Usage(format!("{param} does not name a field of the template")));
    }
    let grid = values
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| Failure::Usage(format!("bad value {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut points = Vec::new();
    for (i, x) in grid.iter().enumerate() {
        let mut doc = base.clone();
        let slot = doc.pointer_mut(param).expect("checked above");
        *slot = serde_json::Number::from_f64(*x)
            .map(Value::Number)
            .ok_or_else(|| Failure::Usage(format!("value {x} is not finite")))?;
        let input = CheckInput::from_json(&doc.to_string())?;
        points.push((i, *x, run_checks(&input, o)?));
    }
    let mut out = Vec::new();
    match o.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<_> = points
                .iter()
                .flat_map(|(i, x, reports)| {
                    reports.iter().map(move |r| (vec![i.to_string(), param.to_string(), format_float(*x)], r))
                })
                .collect();
            write_csv_rows(&["index", "param", "value"], &rows, &mut out)?;
        }
        Format::Json => {
            let mut entries = Vec::new();
            for (i, x, reports) in &points {
                let reports: Value = serde_json::from_str(&to_json(reports)?)?;
                entries.push(json!({"index": i, "param": param, "value": x, "reports": reports}));
            }
            out = serde_json::to_vec_pretty(&Value::Array(entries))?;
            out.push(b'\n');
        }
    }
    emit(o.output.as_deref(), &out)?;
    Ok(points.iter().all(|(_, _, reports)| reports.iter().all(InequalityReport::all_hold)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eigen { d, n, format } => eigen(*d, *n, *format),
        Command::Coeffs { d, l, m, format } => coeffs(*d, *l, *m, *format),
        Command::Check { body, options } => check(body, options),
        Command::Sweep { template, param, values, options } => sweep(template, param, values, options),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
