//! Exact formal calculus over iterated logarithms and exponentials.
//!
//! The crate models the algebra generated by commuting symbols `l_n(x)`
//! (`n` in Z; `l_0 = x`, `l_1 = log x`, `l_{-1} = e^x`, ...) raised to affine
//! symbolic exponents, with coefficients that are polynomials in those
//! symbolic parameters over the rationals. On top of it sit
//!
//! * [`derivation`]: derivations given by their action on generators and the
//!   truncated translation operator `e^{yD}`;
//! * [`expansions`]: closed-form series for `(x+y)^r`, `log(x+y)^r` and
//!   iterated logarithms, used to cross-check the derivation engine;
//! * [`diffrep`]: subscript shifts intertwining `d/dx` with `x d/dx`;
//! * [`combinatorics`]: unsigned Stirling numbers of the first kind in their
//!   several guises and exhaustive identity checks;
//! * [`fdb`]: the Faa di Bruno derivation and umbral shifts.
//!
//! Everything is exact; there is no floating point anywhere.

pub mod combinatorics;
pub mod derivation;
pub mod diffrep;
pub mod element;
pub mod expansions;
pub mod exponent;
pub mod fdb;
pub mod json;
pub mod param;
pub mod report;
pub mod sample;
pub mod series;
pub mod upoly;

use thiserror::Error;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub use element::{generator_name, Element, Gen, Monomial};
pub use exponent::{binom, Exponent};
pub use param::{Param, ParamPoly};
pub use report::VerifyReport;
pub use series::YSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("exponent `{0}` is not affine with integer parameter multiples")]
    NonAffineExponent(String),
    #[error("series of order {order} needs {} coefficients, got {len}", order + 1)]
    SeriesLength { order: usize, len: usize },
}

/// Substitutes `param := value` in an element.
pub fn substitute_param(a: &Element, param: &Param, value: &Rational) -> Element {
    a.substitute_param(param, value)
}
