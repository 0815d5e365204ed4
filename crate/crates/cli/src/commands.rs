use std::ffi::OsString;
use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use formalcalc_core::combinatorics::{stirling_first_table, verify_lubell, verify_s_product_identity};
use formalcalc_core::derivation::{dx_spec, exp_apply, verify_automorphism, DerivationError};
use formalcalc_core::diffrep::{lift_exp, verify_intertwine_with};
use formalcalc_core::expansions::{binomial_series, iterated_log_series, log_power_series, IteratedLogFormula};
use formalcalc_core::fdb::{fdb_d, umbral_solve, verify_faa_di_bruno, verify_umbral, BSequence, FdbElement, FdbError, FdbVar};
use formalcalc_core::json::{parse_rational, rational_to_string, JsonError, YSeriesJson};
use formalcalc_core::upoly::UPoly;
use formalcalc_core::{Element, Exponent, Monomial, Rational, VerifyReport, YSeries};
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::eval::{eval_element, eval_fdb, EvalError};
use crate::latex;
use crate::syntax::{parse, ParseError};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Via {
    Engine,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Automorphism,
    Intertwine,
    Lubell,
    SIdentity,
    FaaDiBruno,
    Umbral,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "formalcalc",
    version,
    about = "Exact formal Taylor expansions over iterated logarithms and exponentials",
    propagate_version = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Wrap LaTeX output in a compilable document.
    #[arg(long, global = true)]
    standalone: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand e^{y d/dx} applied to an expression, i.e. f(x + y), to order N.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Via::Engine)]
        via: Via,
        /// Summation used for iterated logarithms on the closed-form path.
        #[arg(long, default_value = "bracket")]
        formula: IteratedLogFormula,
    },
    /// Expand e^{y x d/dx} applied to an expression by conjugating the shift.
    Lift {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        order: usize,
    },
    /// Print [k, j] for 0 <= j <= k <= K.
    StirlingTable {
        #[arg(long)]
        max: usize,
    },
    /// Run one identity check.
    Verify(VerifyArgs),
    /// Print D^k of an expression in y_i, x_j for k = 0..=n.
    FaaDiBruno {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "y_0", allow_hyphen_values = true)]
        expr: String,
    },
    /// Solve for the umbral shift D_B on 1, x, ..., x^{n-1}.
    Umbral {
        /// Comma-separated B_1, B_2, ... (integers or fractions like 1/2).
        #[arg(long = "B", value_delimiter = ',', required = true, allow_hyphen_values = true)]
        b: Vec<String>,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    /// Main bound: order N, generator range |n|, or Stirling index (default 6).
    #[arg(long)]
    max: Option<u64>,
    /// Random samples for sampled checks.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Chain length for `s-identity` (default 3), umbral depth for `umbral` (default 6).
    #[arg(long)]
    depth: Option<usize>,
    /// Largest m + n for the signed-bracket check in `lubell` (default 10).
    #[arg(long)]
    paren_max: Option<u64>,
    /// Polynomial degree bound for `faa-di-bruno` (default 6).
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(ParseError, String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Fdb(#[from] FdbError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    fn diagnostic(&self) -> String {
        match self {
            CliError::Parse(e, src) if !src.contains('\n') => {
                format!("error: {e}\n  {src}\n  {:>width$}\n", "^", width = e.column)
            }
            e => format!("error: {e}\n"),
        }
    }
}

/// Rendered command output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputDoc {
    pub format: Format,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Standard output, absent when the command failed before producing any.
    pub doc: Option<OutputDoc>,
    /// Standard error.
    pub diagnostics: String,
    pub code: i32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Colour PASS/FAIL in text output.
    pub color: bool,
}

/// Decides colouring from the environment: `FORMALCALC_COLOR=always|never`
/// wins, then `NO_COLOR`, then whether stdout is a terminal.
pub fn color_from_env(is_tty: bool) -> bool {
    match std::env::var("FORMALCALC_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => is_tty && std::env::var_os("NO_COLOR").is_none(),
    }
}

struct Payload {
    text: String,
    json: Value,
    latex: Vec<String>,
    passed: bool,
}

impl Payload {
    fn ok(text: String, json: Value, latex: Vec<String>) -> Self {
        Payload {
            text,
            json,
            latex,
            passed: true,
        }
    }
}

/// Runs one command line (including the program name) without touching the
/// process streams.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, RunOptions::default())
}

pub fn run_with<I, T>(args: I, opts: RunOptions) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    doc: None,
                    diagnostics: rendered,
                    code: 2,
                }
            } else {
                Outcome {
                    doc: Some(OutputDoc {
                        format: Format::Text,
                        payload: rendered,
                    }),
                    diagnostics: String::new(),
                    code: 0,
                }
            };
        }
    };
    let payload = match dispatch(&cli.command) {
        Ok(p) => p,
        Err(e) => {
            return Outcome {
                doc: None,
                diagnostics: e.diagnostic(),
                code: 2,
            }
        }
    };
    render(payload, cli.format, cli.standalone, opts)
}

fn render(payload: Payload, format: Format, standalone: bool, opts: RunOptions) -> Outcome {
    let text = match format {
        Format::Text if opts.color => colorize(&payload.text),
        Format::Text => payload.text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&payload.json).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Latex if standalone => latex::standalone(&latex::display(&payload.latex)),
        Format::Latex => latex::display(&payload.latex),
    };
    let (diagnostics, code) = if payload.passed {
        (String::new(), 0)
    } else {
        ("error: verification failed\n".to_owned(), 1)
    };
    Outcome {
        doc: Some(OutputDoc { format, payload: text }),
        diagnostics,
        code,
    }
}

fn colorize(text: &str) -> String {
    text.replace(": PASS", ": \x1b[32mPASS\x1b[0m")
        .replace(": FAIL", ": \x1b[31mFAIL\x1b[0m")
}

fn dispatch(cmd: &Command) -> Result<Payload, CliError> {
    match cmd {
        Command::Expand {
            expr,
            order,
            via,
            formula,
        } => {
            let a = parse_element(expr)?;
            let s = match via {
                Via::Engine => exp_apply(&dx_spec(), &a, *order)?,
                Via::ClosedForm => closed_form(&a, *order, *formula)?,
            };
            Ok(series_payload("expand", expr, &s))
        }
        Command::Lift { expr, order } => {
            let a = parse_element(expr)?;
            Ok(series_payload("lift", expr, &lift_exp(&a, *order)?))
        }
        Command::StirlingTable { max } => Ok(stirling_payload(*max)),
        Command::Verify(args) => Ok(verify_payload(args)),
        Command::FaaDiBruno { order, expr } => faa_di_bruno_payload(expr, *order),
        Command::Umbral { b, depth } => umbral_payload(b, *depth),
    }
}

fn parse_element(src: &str) -> Result<Element, CliError> {
    let e = parse(src).map_err(|e| CliError::Parse(e, src.to_owned()))?;
    Ok(eval_element(&e)?)
}

/// `e^{y d/dx}` of `exp(x)^e` is `exp(x)^e * e^{e y}`.
fn exp_power_series(e: &Exponent, order: usize) -> YSeries {
    let ep = e.to_param_poly();
    let m = Monomial::gen_pow(-1, e.clone());
    let mut fact = BigInt::one();
    let coeffs = (0..=order)
        .map(|k| {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            let c = ep.pow(k as u32).scale(&Rational::new(BigInt::one(), fact.clone()));
            Element::term(c, m.clone())
        })
        .collect();
    YSeries::from_coeffs(order, coeffs)
}

/// Multiplies the per-generator closed forms term by term. Supported: `l_n`
/// for `n >= -1`; deeper exponentials have no closed form here.
pub fn closed_form(a: &Element, order: usize, formula: IteratedLogFormula) -> Result<YSeries, CliError> {
    let mut total = YSeries::zero(order);
    for (m, c) in a.terms() {
        let mut s = YSeries::constant(Element::constant(c.clone()), order);
        for (g, e) in m.powers() {
            let factor = match g {
                0 => binomial_series(e, order),
                1 => log_power_series(e, order),
                -1 => exp_power_series(e, order),
                n if n >= 2 => iterated_log_series(n as usize, e, order, formula),
                n => {
                    return Err(CliError::Unsupported(format!(
                        "no closed form for {}; use --via engine",
                        formalcalc_core::generator_name(n)
                    )))
                }
            };
            s = &s * &factor;
        }
        total = &total + &s;
    }
    Ok(total)
}

fn series_payload(command: &str, expr: &str, s: &YSeries) -> Payload {
    Payload::ok(
        format!("{s}\n"),
        json!({
            "command": command,
            "expr": expr,
            "order": s.order(),
            "series": YSeriesJson::from(s),
        }),
        vec![latex::yseries(s)],
    )
}

fn stirling_payload(max: usize) -> Payload {
    let table = stirling_first_table(max);
    let cells: Vec<Vec<String>> = table
        .iter()
        .enumerate()
        .map(|(k, row)| row[..=k].iter().map(BigInt::to_string).collect())
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain([max.to_string().len(), 3])
        .max()
        .unwrap_or(1);
    let mut text = format!("{:>width$}", "k\\j");
    for j in 0..=max {
        text.push_str(&format!(" {j:>width$}"));
    }
    text.push('\n');
    for (k, row) in cells.iter().enumerate() {
        text.push_str(&format!("{k:>width$}"));
        for c in row {
            text.push_str(&format!(" {c:>width$}"));
        }
        text.push('\n');
    }
    let mut tex = format!("\\begin{{array}}{{r|{}}}\nk \\backslash j", "r".repeat(max + 1));
    for j in 0..=max {
        tex.push_str(&format!(" & {j}"));
    }
    tex.push_str(" \\\\ \\hline");
    for (k, row) in cells.iter().enumerate() {
        tex.push_str(&format!("\n{k}"));
        for c in row {
            tex.push_str(&format!(" & {c}"));
        }
        tex.push_str(" \\\\");
    }
    tex.push_str("\n\\end{array}");
    Payload::ok(
        text,
        json!({"command": "stirling-table", "max": max, "rows": cells}),
        vec![tex],
    )
}

fn verify_payload(args: &VerifyArgs) -> Payload {
    let max = args.max.unwrap_or(6);
    let seed = args.seed;
    let (report, bounds): (VerifyReport, Value) = match args.check {
        Check::Automorphism => {
            let samples = args.samples.unwrap_or(20);
            (
                verify_automorphism(samples, max as usize, seed),
                json!({"order": max, "samples": samples, "seed": seed}),
            )
        }
        Check::Intertwine => {
            let samples = args.samples.unwrap_or(50);
            (
                verify_intertwine_with(max as i64, samples, seed),
                json!({"max_gen": max, "samples": samples, "seed": seed}),
            )
        }
        Check::Lubell => {
            let paren = args.paren_max.unwrap_or(10);
            (verify_lubell(max, paren), json!({"max_n": max, "paren_max": paren}))
        }
        Check::SIdentity => {
            let depth = args.depth.unwrap_or(3);
            (
                verify_s_product_identity(max, depth),
                json!({"max_k": max, "max_n": depth}),
            )
        }
        Check::FaaDiBruno => {
            let samples = args.samples.unwrap_or(20);
            let degree = args.degree.unwrap_or(6);
            (
                verify_faa_di_bruno(samples, max as usize, degree, seed),
                json!({"order": max, "samples": samples, "degree": degree, "seed": seed}),
            )
        }
        Check::Umbral => {
            let samples = args.samples.unwrap_or(20);
            let depth = args.depth.unwrap_or(6);
            (
                verify_umbral(samples, depth, seed),
                json!({"depth": depth, "samples": samples, "seed": seed}),
            )
        }
    };
    let passed = report.passed();
    Payload {
        text: format!("{report}\n"),
        json: json!({
            "command": "verify",
            "check": args.check.to_string(),
            "bounds": bounds,
            "passed": passed,
            "report": report,
        }),
        latex: vec![latex::text(&report.to_string())],
        passed,
    }
}

#[derive(Serialize)]
struct FdbFactorJson {
    var: &'static str,
    index: u32,
    power: u32,
}

#[derive(Serialize)]
struct FdbTermJson {
    coeff: String,
    factors: Vec<FdbFactorJson>,
}

fn fdb_json(a: &FdbElement) -> Value {
    let terms: Vec<FdbTermJson> = a
        .terms()
        .map(|(m, c)| FdbTermJson {
            coeff: rational_to_string(c),
            factors: m
                .iter()
                .map(|(v, p)| {
                    let (var, index) = match v {
                        FdbVar::Y(i) => ("y", *i),
                        FdbVar::X(j) => ("x", *j),
                    };
                    FdbFactorJson { var, index, power: *p }
                })
                .collect(),
        })
        .collect();
    json!({ "terms": terms })
}

fn faa_di_bruno_payload(src: &str, order: usize) -> Result<Payload, CliError> {
    let e = parse(src).map_err(|e| CliError::Parse(e, src.to_owned()))?;
    let a = eval_fdb(&e)?;
    let (text_arg, tex_arg) = if a.len() == 1 {
        (format!(" {a}"), format!(" {}", latex::fdb_element(&a)))
    } else {
        (format!("({a})"), format!("\\left({}\\right)", latex::fdb_element(&a)))
    };
    let mut powers = vec![a];
    for k in 1..=order {
        powers.push(fdb_d(&powers[k - 1]));
    }
    let mut text = String::new();
    let mut tex = Vec::new();
    for (k, p) in powers.iter().enumerate() {
        text.push_str(&format!("D^{k}{text_arg} = {p}\n"));
        tex.push(format!("D^{{{k}}}{tex_arg} &= {}", latex::fdb_element(p)));
    }
    Ok(Payload::ok(
        text,
        json!({
            "command": "faa-di-bruno",
            "expr": src,
            "order": order,
            "derivatives": powers.iter().map(fdb_json).collect::<Vec<_>>(),
        }),
        tex,
    ))
}

fn x_power(k: usize) -> (String, String) {
    match k {
        0 => ("1".into(), "1".into()),
        1 => ("x".into(), "x".into()),
        k => (format!("x^{k}"), format!("x^{{{k}}}")),
    }
}

fn umbral_payload(raw: &[String], depth: usize) -> Result<Payload, CliError> {
    let values = raw
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()?;
    let b = BSequence::new(values)?;
    let table = umbral_solve(&b, depth)?;
    let mut text = String::new();
    let mut tex = Vec::new();
    for (k, img) in table.images().iter().enumerate() {
        let (t, l) = x_power(k);
        text.push_str(&format!("D_B {t} = {img}\n"));
        tex.push(format!("D_B {l} &= {}", latex::upoly(img)));
    }
    Ok(Payload::ok(
        text,
        json!({
            "command": "umbral",
            "B": b.values().iter().map(rational_to_string).collect::<Vec<_>>(),
            "depth": depth,
            "images": table.images(),
        }),
        tex,
    ))
}

/// Reads the `series` field of an `expand`/`lift` JSON document.
pub fn series_from_json(doc: &Value) -> Result<YSeries, serde_json::Error> {
    serde_json::from_value(doc["series"].clone())
}

/// Reads the `images` field of an `umbral` JSON document.
pub fn umbral_images_from_json(doc: &Value) -> Result<Vec<UPoly>, serde_json::Error> {
    serde_json::from_value(doc["images"].clone())
}


#[cfg(test)]
mod tests {
    use super::*;

    fn failing() -> Payload {
        let mut report = VerifyReport::new("demo");
        report.check(false, || "1 != 2".into());
        Payload {
            text: format!("{report}\n"),
            json: json!({"passed": false}),
            latex: vec![latex::text(&report.to_string())],
            passed: false,
        }
    }

    #[test]
    fn failed_verification_exits_one_with_output() {
        let out = render(failing(), Format::Text, false, RunOptions::default());
        assert_eq!(out.code, 1);
        assert!(out.doc.unwrap().payload.starts_with("demo: FAIL"));
        assert_eq!(out.diagnostics, "error: verification failed\n");
    }

    #[test]
    fn colour_only_touches_text() {
        let out = render(failing(), Format::Text, false, RunOptions { color: true });
        assert!(out.doc.unwrap().payload.contains("\x1b[31mFAIL\x1b[0m"));
        let out = render(failing(), Format::Json, false, RunOptions { color: true });
        assert!(!out.doc.unwrap().payload.contains('\x1b'));
    }

    #[test]
    fn closed_form_rejects_deep_exponentials() {
        let a = Element::generator(-2);
        assert!(matches!(closed_form(&a, 2, IteratedLogFormula::Bracket), Err(CliError::Unsupported(_))));
    }
}
