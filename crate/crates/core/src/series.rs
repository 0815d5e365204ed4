//! Power series in the expansion variable `y`, truncated at a fixed order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::element::{fmt_term, Element};
use crate::param::{Param, ParamPoly};
use crate::{AlgebraError, Rational};

/// `sum_{k=0}^{N} c_k y^k` with [`Element`] coefficients; `order` is `N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct YSeries {
    order: usize,
    coeffs: Vec<Element>,
}

impl YSeries {
    pub fn new(order: usize, coeffs: Vec<Element>) -> Result<Self, AlgebraError> {
        if coeffs.len() != order + 1 {
            return Err(AlgebraError::SeriesLength {
                order,
                len: coeffs.len(),
            });
        }
        Ok(YSeries { order, coeffs })
    }

    /// Pads with zeros or truncates to exactly `order + 1` coefficients.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<Element>) -> Self {
        coeffs.resize(order + 1, Element::zero());
        YSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(order, Vec::new())
    }

    pub fn constant(a: Element, order: usize) -> Self {
        Self::from_coeffs(order, vec![a])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&Element> {
        self.coeffs.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Element::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        YSeries {
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn map<F: FnMut(&Element) -> Element>(&self, f: F) -> Self {
        YSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &ParamPoly) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn substitute_param(&self, param: &Param, value: &Rational) -> Self {
        self.map(|e| e.substitute_param(param, value))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = YSeries::constant(Element::one(), self.order);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn check_order(&self, other: &YSeries) {
        assert_eq!(
            self.order, other.order,
            "series orders differ ({} vs {})",
            self.order, other.order
        );
    }
}

impl Add<&YSeries> for &YSeries {
    type Output = YSeries;
    fn add(self, rhs: &YSeries) -> YSeries {
        self.check_order(rhs);
        YSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Neg for &YSeries {
    type Output = YSeries;
    fn neg(self) -> YSeries {
        self.map(|e| -e)
    }
}

impl Sub<&YSeries> for &YSeries {
    type Output = YSeries;
    fn sub(self, rhs: &YSeries) -> YSeries {
        self + &(-rhs)
    }
}

/// Cauchy product; terms beyond the common order are dropped.
impl Mul<&YSeries> for &YSeries {
    type Output = YSeries;
    fn mul(self, rhs: &YSeries) -> YSeries {
        self.check_order(rhs);
        let n = self.order;
        let mut coeffs = vec![Element::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        YSeries { order: n, coeffs }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for YSeries {
            type Output = YSeries;
            fn $m(self, rhs: YSeries) -> YSeries {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// `c_0 + c_1*y + ... + O(y^{N+1})`, every element term carrying its y-power.
impl fmt::Display for YSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            for (m, coeff) in c.terms() {
                fmt_term(f, coeff, m, k, first)?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(y^{})", self.order + 1)
    }
}

impl fmt::Debug for YSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YSeries({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Exponent;

    #[test]
    fn length_is_checked() {
        assert!(YSeries::new(2, vec![Element::one()]).is_err());
        assert!(YSeries::new(0, vec![Element::one()]).is_ok());
    }

    #[test]
    fn product_truncates() {
        // (1 + y)^2 truncated at order 1 is 1 + 2y
        let one_plus_y = YSeries::from_coeffs(1, vec![Element::one(), Element::one()]);
        let sq = &one_plus_y * &one_plus_y;
        assert_eq!(sq, YSeries::from_coeffs(1, vec![Element::one(), Element::int(2)]));
    }

    #[test]
    fn display_shapes() {
        let s = YSeries::from_coeffs(
            2,
            vec![
                Element::generator(1),
                Element::one(),
                Element::gen_pow(0, Exponent::int(-2)).scale_rational(&Rational::new((-1).into(), 2.into())),
            ],
        );
        assert_eq!(s.to_string(), "log(x) + y - 1/2*x^(-2)*y^2 + O(y^3)");
        assert_eq!(YSeries::zero(1).to_string(), "0 + O(y^2)");
    }
}
