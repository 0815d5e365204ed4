//! Symbolic exponent parameters and exact polynomials in them.
//!
//! A [`ParamPoly`] is the coefficient ring of every formal expression in the
//! crate: a sparse multivariate polynomial over [`Rational`] in a small set of
//! named parameters (`r`, `s`, ...).

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rational;

fn interner() -> &'static Mutex<HashSet<Arc<str>>> {
    static INTERNER: OnceLock<Mutex<HashSet<Arc<str>>>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

/// Interned name of a symbolic parameter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Param(Arc<str>);

impl Param {
    pub fn new(name: &str) -> Self {
        let mut set = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = set.get(name) {
            return Param(existing.clone());
        }
        let arc: Arc<str> = Arc::from(name);
        set.insert(arc.clone());
        Param(arc)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Param {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Power product of parameters, e.g. `r^2 s`. Zero degrees are never stored.
pub type ParamMonomial = BTreeMap<Param, u32>;

/// Exact polynomial in the symbolic parameters with rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamMonomial::new(), c);
        }
        ParamPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn param(p: Param) -> Self {
        let mut mono = ParamMonomial::new();
        mono.insert(p, 1);
        Self::from_term(mono, Rational::one())
    }

    pub fn from_term(mono: ParamMonomial, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(mono, c);
        out
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (ParamMonomial, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, mono: ParamMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(mono.values().all(|&d| d > 0));
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .get(&ParamMonomial::new())
                .cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ParamMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.values().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn params(&self) -> impl Iterator<Item = &Param> {
        self.terms.keys().flat_map(|m| m.keys())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `param` by the rational `value` everywhere.
    pub fn substitute(&self, param: &Param, value: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut m = m.clone();
            let mut c = c.clone();
            if let Some(d) = m.remove(param) {
                c *= pow_rational(value, d);
            }
            (m, c)
        }))
    }

    /// Splits a polynomial of degree at most one into `(constant, linear coefficients)`.
    pub fn as_affine(&self) -> Option<(Rational, BTreeMap<Param, Rational>)> {
        let mut constant = Rational::zero();
        let mut linear = BTreeMap::new();
        for (m, c) in &self.terms {
            match m.len() {
                0 => constant = c.clone(),
                1 => {
                    let (p, &d) = m.iter().next()?;
                    if d != 1 {
                        return None;
                    }
                    linear.insert(p.clone(), c.clone());
                }
                _ => return None,
            }
        }
        Some((constant, linear))
    }
}

pub(crate) fn pow_rational(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

impl From<Rational> for ParamPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for ParamPoly {
    fn from(n: BigInt) -> Self {
        Self::constant(Rational::from_integer(n))
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, rhs: ParamPoly) -> ParamPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: ParamPoly) -> ParamPoly {
        &self - &rhs
    }
}

impl Mul<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = ma.clone();
                for (p, d) in mb {
                    *m.entry(p.clone()).or_insert(0) += d;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        &self * &rhs
    }
}

pub(crate) fn fmt_rational(c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn fmt_param_monomial(m: &ParamMonomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, (p, d)) in m.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        if *d == 1 {
            write!(f, "{p}")?;
        } else {
            write!(f, "{p}^{d}")?;
        }
    }
    Ok(())
}

/// Highest-degree terms first, e.g. `1/2*r^2 - 1/2*r`.
impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_empty() {
                fmt_rational(&mag, f)?;
            } else {
                if !mag.is_one() {
                    fmt_rational(&mag, f)?;
                    f.write_str("*")?;
                }
                fmt_param_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn interning_shares_storage() {
        let a = Param::new("r");
        let b = Param::new("r");
        assert!(Arc::ptr_eq(&a.0, &b.0));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let r = ParamPoly::param(Param::new("r"));
        let z = &r - &r;
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn product_and_display() {
        let r = ParamPoly::param(Param::new("r"));
        let p = &r * &(&r - &ParamPoly::one());
        let p = p.scale(&q(1, 2));
        assert_eq!(p.to_string(), "1/2*r^2 - 1/2*r");
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn substitute_evaluates() {
        let r = Param::new("r");
        let rp = ParamPoly::param(r.clone());
        let p = &(&rp * &rp) + &ParamPoly::from_int(3);
        assert_eq!(p.substitute(&r, &q(1, 2)), ParamPoly::constant(q(13, 4)));
    }

    #[test]
    fn affine_split() {
        let r = Param::new("r");
        let p = &ParamPoly::param(r.clone()).scale(&q(2, 1)) - &ParamPoly::from_int(1);
        let (c, lin) = p.as_affine().unwrap();
        assert_eq!(c, q(-1, 1));
        assert_eq!(lin[&r], q(2, 1));
        assert!(p.pow(2).as_affine().is_none());
    }
}
