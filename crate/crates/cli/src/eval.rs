//! Evaluation of parsed expressions into [`Element`]s or [`FdbElement`]s.

use formalcalc_core::fdb::FdbElement;
use formalcalc_core::{Element, Exponent, Monomial, Param, ParamPoly, Rational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::syntax::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("exponent `{0}` must not contain generators or y_i/x_j")]
    ExponentNotScalar(String),
    #[error("exponent `{0}` is not affine in the parameters")]
    NonAffine(String),
    #[error("cannot raise `{base}` to the power `{exp}`: only single terms take non-integer powers")]
    BadPower { base: String, exp: String },
    #[error("cannot mix generators l_n(x) with y_i/x_j in one expression")]
    Mixed,
    #[error("parameters cannot appear in y_i/x_j expressions")]
    ParamInFdb,
    #[error("expected an expression in l_n(x), found y_i/x_j")]
    NotElement,
    #[error("expected an expression in y_i/x_j")]
    NotFdb,
    #[error("exponent {0} is too large")]
    TooLarge(String),
}

/// Intermediate value: a scalar until a generator or letter shows up.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(ParamPoly),
    Elem(Element),
    Fdb(FdbElement),
}

impl Value {
    fn into_element(self) -> Result<Element, EvalError> {
        match self {
            Value::Scalar(p) => Ok(Element::constant(p)),
            Value::Elem(e) => Ok(e),
            Value::Fdb(_) => Err(EvalError::Mixed),
        }
    }

    fn into_fdb(self) -> Result<FdbElement, EvalError> {
        match self {
            Value::Scalar(p) => p.as_constant().map(FdbElement::constant).ok_or(EvalError::ParamInFdb),
            Value::Fdb(e) => Ok(e),
            Value::Elem(_) => Err(EvalError::Mixed),
        }
    }

    fn combine(
        a: Value,
        b: Value,
        scalar: impl Fn(&ParamPoly, &ParamPoly) -> ParamPoly,
        elem: impl Fn(&Element, &Element) -> Element,
        fdb: impl Fn(&FdbElement, &FdbElement) -> FdbElement,
    ) -> Result<Value, EvalError> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(scalar(&x, &y)),
            (a @ Value::Fdb(_), b) | (a, b @ Value::Fdb(_)) => Value::Fdb(fdb(&a.into_fdb()?, &b.into_fdb()?)),
            (a, b) => Value::Elem(elem(&a.into_element()?, &b.into_element()?)),
        })
    }
}

pub fn eval(e: &Expr) -> Result<Value, EvalError> {
    Ok(match e {
        Expr::Num(q) => Value::Scalar(ParamPoly::constant(q.clone())),
        Expr::Param(p) => Value::Scalar(ParamPoly::param(Param::new(p))),
        Expr::Gen(n) => Value::Elem(Element::generator(*n)),
        Expr::Y(i) => Value::Fdb(FdbElement::y(*i)),
        Expr::X(j) => Value::Fdb(FdbElement::x(*j)),
        Expr::Neg(a) => match eval(a)? {
            Value::Scalar(p) => Value::Scalar(-p),
            Value::Elem(x) => Value::Elem(-x),
            Value::Fdb(x) => Value::Fdb(x.scale(&-Rational::one())),
        },
        Expr::Add(a, b) => Value::combine(eval(a)?, eval(b)?, |x, y| x + y, |x, y| x + y, |x, y| x.add(y))?,
        Expr::Sub(a, b) => Value::combine(
            eval(a)?,
            eval(b)?,
            |x, y| x - y,
            |x, y| x - y,
            |x, y| x.add(&y.scale(&-Rational::one())),
        )?,
        Expr::Mul(a, b) => Value::combine(eval(a)?, eval(b)?, |x, y| x * y, |x, y| x * y, |x, y| x.mul(y))?,
        Expr::Pow(a, b) => power(eval(a)?, b)?,
    })
}

pub fn eval_element(e: &Expr) -> Result<Element, EvalError> {
    match eval(e)? {
        Value::Fdb(_) => Err(EvalError::NotElement),
        v => v.into_element(),
    }
}

pub fn eval_fdb(e: &Expr) -> Result<FdbElement, EvalError> {
    match eval(e)? {
        Value::Elem(_) => Err(EvalError::NotFdb),
        v => v.into_fdb(),
    }
}

fn power(base: Value, exp_expr: &Expr) -> Result<Value, EvalError> {
    let exp = match eval(exp_expr)? {
        Value::Scalar(p) => p,
        _ => return Err(EvalError::ExponentNotScalar(exp_expr.to_string())),
    };
    let integer = exp.as_constant().filter(|q| q.is_integer()).map(|q| q.to_integer());
    if let Some(k) = integer.as_ref().filter(|k| !k.is_negative()) {
        let k = k.to_u32().ok_or_else(|| EvalError::TooLarge(k.to_string()))?;
        return Ok(match base {
            Value::Scalar(p) => Value::Scalar(p.pow(k)),
            Value::Elem(x) => Value::Elem(x.pow(k)),
            Value::Fdb(x) => Value::Fdb((0..k).fold(FdbElement::constant(Rational::one()), |acc, _| acc.mul(&x))),
        });
    }
    let bad = |base: &dyn std::fmt::Display| EvalError::BadPower {
        base: base.to_string(),
        exp: exp.to_string(),
    };
    let (coeff, mono) = match &base {
        Value::Scalar(p) => (p.clone(), Monomial::one()),
        Value::Elem(x) if x.len() == 1 => {
            let (m, c) = x.terms().next().expect("one term");
            (c.clone(), m.clone())
        }
        Value::Elem(x) => return Err(bad(x)),
        Value::Fdb(x) => return Err(bad(x)),
    };
    // c^e needs c = 1, or a nonzero rational c with integer e.
    let coeff = if coeff.is_one() {
        ParamPoly::one()
    } else {
        match (coeff.as_constant(), &integer) {
            (Some(c), Some(k)) if !c.is_zero() => {
                let k = k.magnitude().to_u32().ok_or_else(|| EvalError::TooLarge(k.to_string()))?;
                ParamPoly::constant(num_traits::pow(c.recip(), k as usize))
            }
            _ => return Err(bad(&coeff)),
        }
    };
    let mut powers = Vec::new();
    for (g, e) in mono.powers() {
        let prod = &e.to_param_poly() * &exp;
        let e = Exponent::from_affine(&prod).map_err(|_| EvalError::NonAffine(prod.to_string()))?;
        powers.push((g, e));
    }
    Ok(Value::Elem(Element::term(coeff, Monomial::from_powers(powers))))
}
