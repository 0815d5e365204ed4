//! LaTeX rendering. Term order matches the plain-text printers.

use formalcalc_core::fdb::{FdbElement, FdbVar};
use formalcalc_core::param::ParamMonomial;
use formalcalc_core::upoly::UPoly;
use formalcalc_core::{Element, Exponent, Gen, Monomial, ParamPoly, Rational, YSeries};
use num_traits::{One, Signed, Zero};

/// Joins `(negative, magnitude)` pieces into `a - b + c`.
fn signed_sum(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `mag` times `factors`, dropping a unit magnitude.
fn scaled(mag: &Rational, factors: &str) -> String {
    match (factors.is_empty(), mag.is_one()) {
        (true, _) => rational(mag),
        (false, true) => factors.to_owned(),
        (false, false) => format!("{} {factors}", rational(mag)),
    }
}

pub fn rational(q: &Rational) -> String {
    let sign = if q.is_negative() { "-" } else { "" };
    if q.is_integer() {
        format!("{sign}{}", q.numer().abs())
    } else {
        format!("{sign}\\frac{{{}}}{{{}}}", q.numer().abs(), q.denom())
    }
}

fn param_name(name: &str) -> String {
    if name.chars().count() == 1 {
        name.to_owned()
    } else {
        format!("\\mathrm{{{}}}", name.replace('_', "\\_"))
    }
}

fn param_monomial(m: &ParamMonomial) -> String {
    m.iter()
        .map(|(p, d)| match d {
            1 => param_name(p.name()),
            d => format!("{}^{{{d}}}", param_name(p.name())),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn param_poly(p: &ParamPoly) -> String {
    signed_sum(p.terms().rev().map(|(m, c)| (c.is_negative(), scaled(&c.abs(), &param_monomial(m)))))
}

pub fn exponent(e: &Exponent) -> String {
    let mut parts: Vec<(bool, String)> = e
        .linear_part()
        .iter()
        .map(|(p, m)| {
            let mag = m.abs();
            let body = if mag.is_one() {
                param_name(p.name())
            } else {
                format!("{mag}{}", param_name(p.name()))
            };
            (m.is_negative(), body)
        })
        .collect();
    let c = e.constant_part();
    if !c.is_zero() || parts.is_empty() {
        parts.push((c.is_negative(), rational(&c.abs())));
    }
    signed_sum(parts)
}

fn generator_power(g: Gen, e: &Exponent) -> String {
    if e.as_integer() == Some(1) {
        return match g {
            0 => "x".to_owned(),
            1 => "\\log x".to_owned(),
            -1 => "e^{x}".to_owned(),
            n => format!("\\ell_{{{n}}}(x)"),
        };
    }
    let e = exponent(e);
    match g {
        0 => format!("x^{{{e}}}"),
        1 => format!("(\\log x)^{{{e}}}"),
        -1 => format!("(e^{{x}})^{{{e}}}"),
        n => format!("\\ell_{{{n}}}(x)^{{{e}}}"),
    }
}

pub fn monomial(m: &Monomial) -> String {
    m.powers().map(|(g, e)| generator_power(g, e)).collect::<Vec<_>>().join(" ")
}

fn term(c: &ParamPoly, m: &Monomial, ypow: usize) -> (bool, String) {
    let mut factors = monomial(m);
    if ypow > 0 {
        if !factors.is_empty() {
            factors.push(' ');
        }
        factors.push('y');
        if ypow > 1 {
            factors.push_str(&format!("^{{{ypow}}}"));
        }
    }
    let mut terms = c.terms();
    match (terms.next(), terms.next()) {
        (Some((pm, q)), None) => {
            let coeff = param_monomial(pm);
            let body = match (coeff.is_empty(), factors.is_empty()) {
                (true, _) => scaled(&q.abs(), &factors),
                (false, true) => scaled(&q.abs(), &coeff),
                (false, false) => scaled(&q.abs(), &format!("{coeff} {factors}")),
            };
            (q.is_negative(), body)
        }
        _ if factors.is_empty() => (false, format!("\\left({}\\right)", param_poly(c))),
        _ => (false, format!("\\left({}\\right) {factors}", param_poly(c))),
    }
}

pub fn element(a: &Element) -> String {
    signed_sum(a.terms().map(|(m, c)| term(c, m, 0)))
}

pub fn yseries(s: &YSeries) -> String {
    let body = signed_sum(
        s.coeffs()
            .iter()
            .enumerate()
            .flat_map(|(k, c)| c.terms().map(move |(m, q)| term(q, m, k))),
    );
    format!("{body} + O(y^{{{}}})", s.order() + 1)
}

pub fn upoly(p: &UPoly) -> String {
    signed_sum(p.coeffs().iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        let factor = match k {
            0 => String::new(),
            1 => "x".to_owned(),
            k => format!("x^{{{k}}}"),
        };
        (c.is_negative(), scaled(&c.abs(), &factor))
    }))
}

pub fn fdb_element(a: &FdbElement) -> String {
    let terms: Vec<_> = a.terms().collect();
    signed_sum(terms.into_iter().rev().map(|(m, c)| {
        let factors = m
            .iter()
            .map(|(v, e)| {
                let base = match v {
                    FdbVar::Y(i) => format!("y_{{{i}}}"),
                    FdbVar::X(j) => format!("x_{{{j}}}"),
                };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{{{e}}}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ");
        (c.is_negative(), scaled(&c.abs(), &factors))
    }))
}

/// `\text{...}` with the characters LaTeX treats specially escaped.
pub fn text(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 8);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '_' | '#' | '$' | '%' | '&' => {
                out.push('\\');
                out.push(c);
            }
            '^' => out.push_str("\\textasciicircum{}"),
            '~' => out.push_str("\\textasciitilde{}"),
            c => out.push(c),
        }
    }
    format!("\\text{{{out}}}")
}

/// Display-math fragment; several rows are aligned on `&`.
pub fn display(rows: &[String]) -> String {
    if rows.len() == 1 {
        format!("\\[\n{}\n\\]\n", rows[0])
    } else {
        format!("\\[\n\\begin{{aligned}}\n{}\n\\end{{aligned}}\n\\]\n", rows.join(" \\\\\n"))
    }
}

pub fn standalone(fragment: &str) -> String {
    format!(
        "\\documentclass{{article}}\n\\usepackage{{amsmath}}\n\\begin{{document}}\n{fragment}\\end{{document}}\n"
    )
}
