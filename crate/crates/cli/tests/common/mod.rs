//! Helpers shared by the CLI contract tests and the acceptance gate.
#![allow(dead_code)]

use std::path::PathBuf;

use formalcalc_cli::eval::eval_element;
use formalcalc_cli::syntax::parse;
use formalcalc_cli::{run, series_from_json};
use formalcalc_core::derivation::{dx_spec, exp_apply};
use formalcalc_core::{Element, Exponent, Monomial, Param, ParamPoly, Rational, YSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub const GOLDEN: [(&str, &[&str]); 3] = [
    ("expand_log_order3.txt", &["expand", "--expr", "log(x)", "--order", "3"]),
    ("verify_lubell_max8.txt", &["verify", "lubell", "--max", "8"]),
    ("umbral_b10_depth3.txt", &["umbral", "--B", "1,0", "--depth", "3"]),
];

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("formalcalc").chain(args.iter().copied()).map(String::from).collect()
}

/// Runs one documented example and compares stdout byte for byte.
pub fn check_golden(name: &str, args: &[&str]) -> Result<(), String> {
    let expected = std::fs::read_to_string(golden_path(name)).map_err(|e| format!("{name}: {e}"))?;
    let out = run(argv(args));
    if out.code != 0 || !out.diagnostics.is_empty() {
        return Err(format!("{name}: exit {} with `{}`", out.code, out.diagnostics));
    }
    let got = out.doc.map(|d| d.payload).unwrap_or_default();
    if got != expected {
        return Err(format!("{name}: expected {expected:?}, got {got:?}"));
    }
    Ok(())
}

fn rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num).into(), rng.gen_range(1..=den).into())
}

fn params() -> [Param; 2] {
    [Param::new("r"), Param::new("s")]
}

/// Exponents such as `-1`, `1/2`, `r`, `2*r - s + 3/2`.
pub fn random_exponent<R: Rng>(rng: &mut R) -> Exponent {
    let linear: Vec<(Param, num_bigint::BigInt)> = params()
        .into_iter()
        .filter_map(|p| {
            let m: i64 = if rng.gen_bool(0.35) { rng.gen_range(-2..=2) } else { 0 };
            (m != 0).then(|| (p, m.into()))
        })
        .collect();
    let constant = if rng.gen_bool(0.2) { rational(rng, 4, 3) } else { Rational::from_integer(rng.gen_range(-3..=3).into()) };
    Exponent::new(constant, linear)
}

/// Coefficients with parameter powers up to 2, e.g. `1/2*r^2 - 3*r*s + 4`.
pub fn random_coefficient<R: Rng>(rng: &mut R) -> ParamPoly {
    let [r, s] = params();
    let mut c = ParamPoly::constant(rational(rng, 5, 4));
    for _ in 0..rng.gen_range(0..=2) {
        let mono = ParamPoly::param(r.clone())
            .pow(rng.gen_range(0..=2))
            .scale(&rational(rng, 3, 2));
        let mono = &mono * &ParamPoly::param(s.clone()).pow(rng.gen_range(0..=1));
        c = &c + &mono;
    }
    c
}

pub fn random_canonical_element<R: Rng>(rng: &mut R) -> Element {
    let terms = rng.gen_range(1..=4);
    Element::from_terms((0..terms).map(|_| {
        let factors = rng.gen_range(0..=3);
        let m = Monomial::from_powers((0..factors).map(|_| (rng.gen_range(-4..=4), random_exponent(rng))));
        (m, random_coefficient(rng))
    }))
}

/// `print` then `parse` then `eval` gives back the same element, and
/// printing again is stable.
pub fn check_print_parse_round_trip(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let a = if i == 0 { Element::zero() } else { random_canonical_element(&mut rng) };
        let text = a.to_string();
        let expr = parse(&text).map_err(|e| format!("`{text}`: {e}"))?;
        let back = eval_element(&expr).map_err(|e| format!("`{text}`: {e}"))?;
        if back != a {
            return Err(format!("`{text}` re-read as `{back}`"));
        }
        if back.to_string() != text {
            return Err(format!("printing `{text}` is not stable"));
        }
    }
    Ok(count)
}

pub fn schema() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/output.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).expect("schema parses")
}

pub fn validate(validator: &jsonschema::Validator, doc: &Value) -> Result<(), String> {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{e} at {}", e.instance_path)).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}

/// `expand --format json` on random elements: the document validates and its
/// series deserializes to exactly the engine result.
pub fn check_json_round_trip(count: usize, order: usize, seed: u64) -> Result<usize, String> {
    let validator = jsonschema::validator_for(&schema()).map_err(|e| format!("schema: {e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let a = random_canonical_element(&mut rng);
        let text = a.to_string();
        let order_s = order.to_string();
        let out = run(argv(&["expand", "--expr", &text, "--order", &order_s, "--format", "json"]));
        if out.code != 0 {
            return Err(format!("`{text}`: exit {} {}", out.code, out.diagnostics));
        }
        let doc: Value = serde_json::from_str(&out.doc.expect("output").payload).map_err(|e| e.to_string())?;
        validate(&validator, &doc).map_err(|e| format!("`{text}`: {e}"))?;
        let got = series_from_json(&doc).map_err(|e| format!("`{text}`: {e}"))?;
        let expected = exp_apply(&dx_spec(), &a, order).expect("d/dx is closed");
        if got != expected {
            return Err(format!("`{text}`: JSON gave {got}, engine {expected}"));
        }
        let elem_json = serde_json::to_string(&a).map_err(|e| e.to_string())?;
        let elem_back: Element = serde_json::from_str(&elem_json).map_err(|e| e.to_string())?;
        if elem_back != a {
            return Err(format!("`{text}`: element JSON round trip gave {elem_back}"));
        }
        let series_back: YSeries = serde_json::from_str(&serde_json::to_string(&got).unwrap()).map_err(|e| e.to_string())?;
        if series_back != got {
            return Err(format!("`{text}`: series JSON round trip failed"));
        }
    }
    Ok(count)
}
