//! Seeded random elements for sampled identity checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::element::{Element, Gen, Monomial};
use crate::exponent::Exponent;
use crate::param::{Param, ParamPoly};
use crate::Rational;

/// Shape of randomly drawn elements.
#[derive(Debug, Clone)]
pub struct SampleConfig {
    /// Generators are drawn from `-max_gen..=max_gen`.
    pub max_gen: i64,
    pub max_terms: usize,
    pub max_factors: usize,
    /// Largest absolute integer exponent.
    pub max_exp: i64,
    /// Parameters that may appear in exponents and coefficients.
    pub params: Vec<Param>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_gen: 3,
            max_terms: 3,
            max_factors: 2,
            max_exp: 2,
            params: vec![Param::new("r")],
        }
    }
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let mut n = rng.gen_range(-max_num..=max_num);
    if n == 0 {
        n = 1;
    }
    Rational::new(n.into(), rng.gen_range(1..=max_den).into())
}

pub fn random_exponent<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> Exponent {
    let mut k = rng.gen_range(-cfg.max_exp..=cfg.max_exp);
    if k == 0 {
        k = 1;
    }
    match cfg.params.choose(rng) {
        Some(p) if rng.gen_bool(0.3) => &Exponent::param(p.clone()) + &Exponent::int(k - k.signum()),
        _ => Exponent::int(k),
    }
}

pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> Monomial {
    let factors = rng.gen_range(0..=cfg.max_factors);
    Monomial::from_powers((0..factors).map(|_| {
        let g: Gen = rng.gen_range(-cfg.max_gen..=cfg.max_gen);
        (g, random_exponent(rng, cfg))
    }))
}

pub fn random_coefficient<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> ParamPoly {
    let c = ParamPoly::constant(random_rational(rng, 5, 3));
    match cfg.params.choose(rng) {
        Some(p) if rng.gen_bool(0.2) => &c + &ParamPoly::param(p.clone()),
        _ => c,
    }
}

/// A nonzero element with between one and `max_terms` terms.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig) -> Element {
    loop {
        let terms = rng.gen_range(1..=cfg.max_terms.max(1));
        let e = Element::from_terms(
            (0..terms).map(|_| (random_monomial(rng, cfg), random_coefficient(rng, cfg))),
        );
        if !e.is_zero() {
            return e;
        }
    }
}
