//! Monomials over the generators `l_n(x)` and finite sums of them.
//!
//! Generator `l_0` is `x`, `l_n` for `n > 0` is the `n`-th iterated logarithm
//! and `l_n` for `n < 0` the `|n|`-th iterated exponential. The algebra only
//! knows them as commuting symbols with affine exponents.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::Signed;

use crate::exponent::Exponent;
use crate::param::{Param, ParamPoly};
use crate::Rational;

/// Generator index `n` of `l_n(x)`.
pub type Gen = i64;

/// Product of generator powers. Zero exponents are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    powers: BTreeMap<Gen, Exponent>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn gen_pow(g: Gen, e: Exponent) -> Self {
        let mut powers = BTreeMap::new();
        if !e.is_zero() {
            powers.insert(g, e);
        }
        Monomial { powers }
    }

    pub fn from_powers<I: IntoIterator<Item = (Gen, Exponent)>>(iter: I) -> Self {
        let mut m = Monomial::one();
        for (g, e) in iter {
            m.mul_gen(g, &e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn exponent(&self, g: Gen) -> Option<&Exponent> {
        self.powers.get(&g)
    }

    pub fn powers(&self) -> impl Iterator<Item = (Gen, &Exponent)> {
        self.powers.iter().map(|(g, e)| (*g, e))
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.powers.keys().copied()
    }

    /// Multiplies in `g^e` in place.
    pub fn mul_gen(&mut self, g: Gen, e: &Exponent) {
        match self.powers.entry(g) {
            Entry::Occupied(mut o) => {
                let sum = o.get() + e;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                if !e.is_zero() {
                    v.insert(e.clone());
                }
            }
        }
    }

    /// Applies `l_n -> l_{n+k}` to every factor.
    pub fn shifted(&self, k: i64) -> Self {
        Monomial {
            powers: self
                .powers
                .iter()
                .map(|(g, e)| (g + k, e.clone()))
                .collect(),
        }
    }

    pub fn substitute(&self, param: &Param, value: &Rational) -> Self {
        Self::from_powers(
            self.powers
                .iter()
                .map(|(g, e)| (*g, e.substitute(param, value))),
        )
    }

    pub fn params(&self) -> impl Iterator<Item = &Param> {
        self.powers.values().flat_map(|e| e.params())
    }
}

impl Mul<&Monomial> for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (g, e) in &rhs.powers {
            out.mul_gen(*g, e);
        }
        out
    }
}

/// Canonical spelling of a generator: `x`, `log(x)`, `exp(x)`, `l_n(x)`.
pub fn generator_name(g: Gen) -> String {
    match g {
        0 => "x".to_owned(),
        1 => "log(x)".to_owned(),
        -1 => "exp(x)".to_owned(),
        n => format!("l_{n}(x)"),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.powers.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(&generator_name(*g))?;
            if e.as_integer() == Some(1) {
                continue;
            }
            if e.is_atomic() {
                write!(f, "^{e}")?;
            } else {
                write!(f, "^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// Finite sum of `coefficient * monomial` terms in canonical form.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(ParamPoly::one(), Monomial::one())
    }

    pub fn constant(c: ParamPoly) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn rational(c: Rational) -> Self {
        Self::constant(ParamPoly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(ParamPoly::from_int(n))
    }

    pub fn generator(g: Gen) -> Self {
        Self::gen_pow(g, Exponent::int(1))
    }

    pub fn gen_pow(g: Gen, e: Exponent) -> Self {
        Self::term(ParamPoly::one(), Monomial::gen_pow(g, e))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(ParamPoly::one(), m)
    }

    pub fn term(c: ParamPoly, m: Monomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ParamPoly)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&ParamPoly> {
        self.terms.get(m)
    }

    pub fn generators(&self) -> BTreeSet<Gen> {
        self.terms.keys().flat_map(|m| m.generators()).collect()
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.terms
            .iter()
            .flat_map(|(m, c)| m.params().chain(c.params()))
            .cloned()
            .collect()
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&ParamPoly::constant(c.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k * m, v.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces a parameter by a rational value in coefficients and exponents.
    pub fn substitute_param(&self, param: &Param, value: &Rational) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.substitute(param, value), c.substitute(param, value))),
        )
    }

    pub fn map_monomials<F: FnMut(&Monomial) -> Monomial>(&self, mut f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }
}

impl From<Monomial> for Element {
    fn from(m: Monomial) -> Self {
        Element::monomial(m)
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += &rhs;
        self
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Mul<&Element> for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma * mb, ca * cb);
            }
        }
        out
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

/// Writes one `coeff*monomial*y^ypow` term; `first` selects a bare leading
/// sign over a ` + ` / ` - ` separator.
pub(crate) fn fmt_term(
    f: &mut fmt::Formatter<'_>,
    c: &ParamPoly,
    m: &Monomial,
    ypow: usize,
    first: bool,
) -> fmt::Result {
    let mut factors = if m.is_one() { String::new() } else { m.to_string() };
    if ypow > 0 {
        if !factors.is_empty() {
            factors.push('*');
        }
        factors.push('y');
        if ypow > 1 {
            factors.push_str(&format!("^{ypow}"));
        }
    }
    // A single-term coefficient carries its own sign; a sum is parenthesized.
    if let Some((pm, q)) = single_term(c) {
        let neg = q.is_negative();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        let coeff = ParamPoly::from_term(pm.clone(), q.abs());
        if factors.is_empty() {
            write!(f, "{coeff}")
        } else if coeff.is_one() {
            f.write_str(&factors)
        } else {
            write!(f, "{coeff}*{factors}")
        }
    } else {
        if !first {
            f.write_str(" + ")?;
        }
        if factors.is_empty() {
            write!(f, "({c})")
        } else {
            write!(f, "({c})*{factors}")
        }
    }
}

fn single_term(c: &ParamPoly) -> Option<(&crate::param::ParamMonomial, &Rational)> {
    let mut it = c.terms();
    let t = it.next()?;
    if it.next().is_some() {
        None
    } else {
        Some(t)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            fmt_term(f, c, m, 0, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Exponent {
        Exponent::param(Param::new("r"))
    }

    fn s() -> Exponent {
        Exponent::param(Param::new("s"))
    }

    #[test]
    fn values_are_shareable() {
        fn check<T: Send + Sync>() {}
        check::<Element>();
    }

    #[test]
    fn add_identity_and_collection() {
        let x = Element::generator(0);
        assert_eq!(&x + &Element::zero(), x);
        let xr = Element::gen_pow(0, r());
        assert_eq!(&xr + &xr, xr.scale(&ParamPoly::from_int(2)));
    }

    #[test]
    fn add_cancellation() {
        let x = Element::generator(0);
        let lx = Element::generator(1);
        assert_eq!(&(&x + &lx) + &(-&x), lx);
    }

    #[test]
    fn mul_exponent_addition() {
        let prod = &Element::gen_pow(0, r()) * &Element::gen_pow(0, s());
        assert_eq!(prod, Element::gen_pow(0, &r() + &s()));
        let inv = &Element::generator(0) * &Element::gen_pow(0, Exponent::int(-1));
        assert_eq!(inv, Element::one());
    }

    #[test]
    fn mul_scalars_and_generators() {
        let a = Element::generator(0).scale(&ParamPoly::from_int(2));
        let b = Element::generator(1).scale(&ParamPoly::from_int(3));
        let expected = Element::term(
            ParamPoly::from_int(6),
            Monomial::from_powers([(0, Exponent::int(1)), (1, Exponent::int(1))]),
        );
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn substitute_into_derivative_shape() {
        // r * x^(r-1) at r = 3 is 3x^2
        let rp = Param::new("r");
        let e = Element::term(ParamPoly::param(rp.clone()), Monomial::gen_pow(0, r().add_int(-1)));
        let got = e.substitute_param(&rp, &Rational::from_integer(3.into()));
        assert_eq!(got, Element::gen_pow(0, Exponent::int(2)).scale(&ParamPoly::from_int(3)));
    }

    #[test]
    fn substitute_zero_kills_binom() {
        let rp = Param::new("r");
        let e = Element::term(
            crate::binom(&r(), 2),
            Monomial::gen_pow(0, r().add_int(-2)),
        );
        assert!(e.substitute_param(&rp, &Rational::from_integer(0.into())).is_zero());
    }

    #[test]
    fn display_canonical() {
        let e = &(&Element::gen_pow(0, r()) + &Element::generator(1).scale(&ParamPoly::from_int(2)))
            - &Element::gen_pow(-2, Exponent::int(-1));
        assert_eq!(e.to_string(), "-l_-2(x)^(-1) + x^r + 2*log(x)");
        let c = Element::term(
            crate::binom(&r(), 2),
            Monomial::gen_pow(0, r().add_int(-2)),
        );
        assert_eq!(c.to_string(), "(1/2*r^2 - 1/2*r)*x^(r - 2)");
    }
}
