//! Affine exponents `q + m_1 r_1 + ... + m_k r_k` and algebraic binomial
//! coefficients of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::param::{fmt_rational, Param, ParamPoly};
use crate::{AlgebraError, Rational};

/// Exponent of a generator: rational constant plus integer multiples of
/// symbolic parameters.
///
/// Orders by constant first, then by linear part, which fixes the canonical
/// order of monomials.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    constant: Rational,
    linear: BTreeMap<Param, BigInt>,
}

impl Exponent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn constant(q: Rational) -> Self {
        Exponent {
            constant: q,
            linear: BTreeMap::new(),
        }
    }

    pub fn param(p: Param) -> Self {
        Self::new(Rational::zero(), [(p, BigInt::one())])
    }

    /// Builds `constant + sum(m * p)`, dropping zero multiples and merging repeats.
    pub fn new<I: IntoIterator<Item = (Param, BigInt)>>(constant: Rational, linear: I) -> Self {
        let mut map: BTreeMap<Param, BigInt> = BTreeMap::new();
        for (p, m) in linear {
            *map.entry(p).or_default() += m;
        }
        map.retain(|_, m| !m.is_zero());
        Exponent {
            constant,
            linear: map,
        }
    }

    /// Converts a degree-one [`ParamPoly`] with integer linear coefficients.
    pub fn from_affine(p: &ParamPoly) -> Result<Self, AlgebraError> {
        let (constant, lin) = p
            .as_affine()
            .ok_or_else(|| AlgebraError::NonAffineExponent(p.to_string()))?;
        let mut linear = Vec::with_capacity(lin.len());
        for (param, c) in lin {
            if !c.is_integer() {
                return Err(AlgebraError::NonAffineExponent(p.to_string()));
            }
            linear.push((param, c.to_integer()));
        }
        Ok(Self::new(constant, linear))
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn linear_part(&self) -> &BTreeMap<Param, BigInt> {
        &self.linear
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }

    pub fn is_symbolic(&self) -> bool {
        !self.linear.is_empty()
    }

    /// The exponent as a machine integer, when it is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.is_symbolic() || !self.constant.is_integer() {
            return None;
        }
        self.constant.to_integer().to_i64()
    }

    pub fn to_param_poly(&self) -> ParamPoly {
        let mut out = ParamPoly::constant(self.constant.clone());
        for (p, m) in &self.linear {
            out += &ParamPoly::param(p.clone()).scale(&Rational::from_integer(m.clone()));
        }
        out
    }

    pub fn add_int(&self, n: i64) -> Self {
        Exponent {
            constant: &self.constant + Rational::from_integer(n.into()),
            linear: self.linear.clone(),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::new(
            &self.constant * Rational::from_integer(n.clone()),
            self.linear.iter().map(|(p, m)| (p.clone(), m * n)),
        )
    }

    pub fn substitute(&self, param: &Param, value: &Rational) -> Self {
        match self.linear.get(param) {
            None => self.clone(),
            Some(m) => {
                let mut linear = self.linear.clone();
                linear.remove(param);
                Exponent {
                    constant: &self.constant + value * Rational::from_integer(m.clone()),
                    linear,
                }
            }
        }
    }

    pub fn params(&self) -> impl Iterator<Item = &Param> {
        self.linear.keys()
    }
}

impl Add<&Exponent> for &Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        Exponent::new(
            &self.constant + &rhs.constant,
            self.linear
                .iter()
                .chain(rhs.linear.iter())
                .map(|(p, m)| (p.clone(), m.clone())),
        )
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        &self + &rhs
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent {
            constant: -&self.constant,
            linear: self.linear.iter().map(|(p, m)| (p.clone(), -m)).collect(),
        }
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        -&self
    }
}

impl Sub<&Exponent> for &Exponent {
    type Output = Exponent;
    fn sub(self, rhs: &Exponent) -> Exponent {
        self + &(-rhs)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        &self - &rhs
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::int(n)
    }
}

impl From<Param> for Exponent {
    fn from(p: Param) -> Self {
        Exponent::param(p)
    }
}

impl Exponent {
    /// Writes the exponent as a bare expression, e.g. `r - 2`, `-1`, `1/2`.
    pub(crate) fn fmt_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, m) in &self.linear {
            let mag = m.abs();
            if first {
                if m.is_negative() {
                    f.write_str("-")?;
                }
            } else if m.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        if first {
            return fmt_rational(&self.constant, f);
        }
        if !self.constant.is_zero() {
            f.write_str(if self.constant.is_negative() { " - " } else { " + " })?;
            fmt_rational(&self.constant.abs(), f)?;
        }
        Ok(())
    }

    /// True when the exponent prints as a single token after `^`.
    pub(crate) fn is_atomic(&self) -> bool {
        match self.linear.len() {
            0 => self.constant.is_integer() && !self.constant.is_negative(),
            1 => {
                self.constant.is_zero()
                    && self.linear.values().next().is_some_and(|m| m.is_one())
            }
            _ => false,
        }
    }
}

/// `r - 2`, `(r - 2)` is added by the caller where needed.
impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_bare(f)
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exponent({self})")
    }
}

/// Algebraic binomial coefficient `e (e-1) ... (e-n+1) / n!`.
pub fn binom(e: &Exponent, n: u32) -> ParamPoly {
    let base = e.to_param_poly();
    let mut acc = ParamPoly::one();
    let mut fact = BigInt::one();
    for i in 0..n {
        acc = &acc * &(&base - &ParamPoly::from_int(i64::from(i)));
        fact *= BigInt::from(i + 1);
    }
    acc.scale(&Rational::new(BigInt::one(), fact))
}
