//! JSON form of [`Element`] and [`YSeries`].
//!
//! Rationals and big integers are written as decimal strings (`"-3/2"`,
//! `"7"`) so that no precision is lost. See `docs/output.schema.json` at the
//! repository root for the full schema.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::element::{Element, Gen, Monomial};
use crate::exponent::Exponent;
use crate::param::{Param, ParamMonomial, ParamPoly};
use crate::series::YSeries;
use crate::upoly::UPoly;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("`{0}` is not a rational number")]
    BadRational(String),
    #[error("`{0}` is not an integer")]
    BadInteger(String),
    #[error("parameter degree must be positive")]
    ZeroDegree,
    #[error("series of order {order} needs {} coefficients, got {len}", order + 1)]
    SeriesLength { order: usize, len: usize },
}

pub fn rational_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, JsonError> {
    let bad = || JsonError::BadRational(s.to_owned());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamTermJson {
    pub c: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentJson {
    #[serde(rename = "const")]
    pub constant: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub linear: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerJson {
    pub gen: Gen,
    pub exp: ExponentJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: Vec<ParamTermJson>,
    pub monomial: Vec<PowerJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YSeriesJson {
    pub order: usize,
    pub coeffs: Vec<ElementJson>,
}

impl From<&ParamPoly> for Vec<ParamTermJson> {
    fn from(p: &ParamPoly) -> Self {
        p.terms()
            .map(|(m, c)| ParamTermJson {
                c: rational_to_string(c),
                params: m.iter().map(|(k, d)| (k.name().to_owned(), *d)).collect(),
            })
            .collect()
    }
}

fn param_poly_from_json(terms: &[ParamTermJson]) -> Result<ParamPoly, JsonError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let mut m = ParamMonomial::new();
        for (name, d) in &t.params {
            if *d == 0 {
                return Err(JsonError::ZeroDegree);
            }
            m.insert(Param::new(name), *d);
        }
        out.push((m, parse_rational(&t.c)?));
    }
    Ok(ParamPoly::from_terms(out))
}

impl From<&Exponent> for ExponentJson {
    fn from(e: &Exponent) -> Self {
        ExponentJson {
            constant: rational_to_string(e.constant_part()),
            linear: e
                .linear_part()
                .iter()
                .map(|(p, m)| (p.name().to_owned(), m.to_string()))
                .collect(),
        }
    }
}

impl TryFrom<&ExponentJson> for Exponent {
    type Error = JsonError;
    fn try_from(j: &ExponentJson) -> Result<Self, JsonError> {
        let mut linear = Vec::with_capacity(j.linear.len());
        for (name, m) in &j.linear {
            let m: BigInt = m.parse().map_err(|_| JsonError::BadInteger(m.clone()))?;
            linear.push((Param::new(name), m));
        }
        Ok(Exponent::new(parse_rational(&j.constant)?, linear))
    }
}

impl From<&Element> for ElementJson {
    fn from(e: &Element) -> Self {
        ElementJson {
            terms: e
                .terms()
                .map(|(m, c)| TermJson {
                    coeff: c.into(),
                    monomial: m
                        .powers()
                        .map(|(gen, exp)| PowerJson {
                            gen,
                            exp: exp.into(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ElementJson> for Element {
    type Error = JsonError;
    fn try_from(j: &ElementJson) -> Result<Self, JsonError> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let mut powers = Vec::with_capacity(t.monomial.len());
            for p in &t.monomial {
                powers.push((p.gen, Exponent::try_from(&p.exp)?));
            }
            terms.push((Monomial::from_powers(powers), param_poly_from_json(&t.coeff)?));
        }
        Ok(Element::from_terms(terms))
    }
}

impl From<&YSeries> for YSeriesJson {
    fn from(s: &YSeries) -> Self {
        YSeriesJson {
            order: s.order(),
            coeffs: s.coeffs().iter().map(ElementJson::from).collect(),
        }
    }
}

impl TryFrom<&YSeriesJson> for YSeries {
    type Error = JsonError;
    fn try_from(j: &YSeriesJson) -> Result<Self, JsonError> {
        let coeffs = j
            .coeffs
            .iter()
            .map(Element::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        YSeries::new(j.order, coeffs).map_err(|_| JsonError::SeriesLength {
            order: j.order,
            len: j.coeffs.len(),
        })
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ElementJson::deserialize(d)?;
        Element::try_from(&j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for YSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        YSeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for YSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = YSeriesJson::deserialize(d)?;
        YSeries::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// Polynomials in `x` serialize as their coefficient strings, lowest degree first.
impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs()
            .iter()
            .map(rational_to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>, _>>()
            .map(UPoly::new)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansions::binomial_series;

    #[test]
    fn rational_strings() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(rational_to_string(&q), "-3/2");
        assert_eq!(rational_to_string(&parse_rational("5").unwrap()), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn series_round_trip() {
        let r = Exponent::param(Param::new("r"));
        let s = binomial_series(&(&r + &Exponent::int(-1)), 3);
        let text = serde_json::to_string(&s).unwrap();
        let back: YSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn element_shape() {
        let e = Element::gen_pow(1, Exponent::int(-2)).scale_rational(&Rational::new(1.into(), 2.into()));
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"terms": [{"coeff": [{"c": "1/2"}], "monomial": [{"gen": 1, "exp": {"const": "-2"}}]}]})
        );
    }

    #[test]
    fn wrong_series_length_rejected() {
        let j = r#"{"order": 2, "coeffs": [{"terms": []}]}"#;
        assert!(serde_json::from_str::<YSeries>(j).is_err());
    }
}
