//! Subscript shifts `l_n -> l_{n+k}` and the intertwining of `d/dx` with
//! `x d/dx` they realize.
//!
//! The shift by one carries `d/dx` to `l_0 d/dx`, so translation results for
//! `e^{y d/dx}` lift to `e^{y x d/dx}` by conjugation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::derivation::{apply_derivation, dx_spec, exp_apply, xdx_spec, DerivationError};
use crate::element::Element;
use crate::report::VerifyReport;
use crate::sample::{random_element, SampleConfig};
use crate::series::YSeries;

/// Algebra automorphism shifting every generator index by `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubstMap {
    pub shift: i64,
}

impl SubstMap {
    pub fn inverse(self) -> SubstMap {
        SubstMap { shift: -self.shift }
    }

    pub fn then(self, other: SubstMap) -> SubstMap {
        SubstMap {
            shift: self.shift + other.shift,
        }
    }

    pub fn apply(&self, a: &Element) -> Element {
        if self.shift == 0 {
            return a.clone();
        }
        a.map_monomials(|m| m.shifted(self.shift))
    }

    pub fn apply_series(&self, s: &YSeries) -> YSeries {
        s.map(|c| self.apply(c))
    }
}

pub fn shift_map(k: i64) -> SubstMap {
    SubstMap { shift: k }
}

/// Checks `phi . d/dx = (l_0 d/dx) . phi` and
/// `phi^{-1} . (l_0 d/dx) = d/dx . phi^{-1}` on `l_n` for `|n| <= max_gen`,
/// then on `samples` random elements drawn with seed `seed`.
pub fn verify_intertwine_with(max_gen: i64, samples: usize, seed: u64) -> VerifyReport {
    let mut report = VerifyReport::new("intertwine");
    let phi = shift_map(1);
    let phi_inv = phi.inverse();
    let dx = dx_spec();
    let xdx = xdx_spec();
    let check = |a: &Element, report: &mut VerifyReport| {
        let lhs = phi.apply(&apply_derivation(&dx, a).expect("d/dx is closed"));
        let rhs = apply_derivation(&xdx, &phi.apply(a)).expect("x d/dx is closed");
        report.check(lhs == rhs, || {
            format!("phi(d/dx a) = {lhs} but x d/dx(phi a) = {rhs} for a = {a}")
        });
        let lhs = phi_inv.apply(&apply_derivation(&xdx, a).expect("x d/dx is closed"));
        let rhs = apply_derivation(&dx, &phi_inv.apply(a)).expect("d/dx is closed");
        report.check(lhs == rhs, || {
            format!("phi^-1(x d/dx a) = {lhs} but d/dx(phi^-1 a) = {rhs} for a = {a}")
        });
    };
    for n in -max_gen..=max_gen {
        check(&Element::generator(n), &mut report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SampleConfig {
        max_gen,
        ..SampleConfig::default()
    };
    for _ in 0..samples {
        let a = &random_element(&mut rng, &cfg) * &random_element(&mut rng, &cfg);
        check(&a, &mut report);
    }
    report
}

/// [`verify_intertwine_with`] with 50 random products and a fixed seed.
pub fn verify_intertwine(max_gen: i64) -> VerifyReport {
    verify_intertwine_with(max_gen, 50, 0x5eed)
}

/// `e^{y l_0 d/dx} a` computed as `phi . e^{y d/dx} . phi^{-1}` applied to `a`.
pub fn lift_exp(a: &Element, order: usize) -> Result<YSeries, DerivationError> {
    let phi = shift_map(1);
    let lowered = phi.inverse().apply(a);
    Ok(phi.apply_series(&exp_apply(&dx_spec(), &lowered, order)?))
}
