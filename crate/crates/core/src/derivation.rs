//! Derivations on the generator algebra and the truncated operator `e^{yD}`.
//!
//! A derivation is fixed by its images on generators; it extends to monomials
//! by the power rule `D(g^e) = e g^{e-1} D(g)` and to products by Leibniz.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::element::{Element, Gen, Monomial};
use crate::exponent::Exponent;
use crate::report::VerifyReport;
use crate::sample::{random_element, SampleConfig};
use crate::series::YSeries;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("derivation `{derivation}` has no image for generator {}", crate::generator_name(*generator))]
    NotClosed { derivation: String, generator: Gen },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Images {
    Table(BTreeMap<Gen, Element>),
    /// `d/dx` on all of `l_n`, `n` in Z.
    Dx,
    /// `l_0 d/dx` on all of `l_n`.
    XDx,
}

/// A derivation given by the images of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSpec {
    name: String,
    images: Images,
}

/// `d/dx l_n`: `1` for `n = 0`, `l_{-1} ... l_{n}` for `n < 0`,
/// `(l_0 ... l_{n-1})^{-1}` for `n > 0`.
fn dx_image(n: Gen) -> Element {
    match n {
        0 => Element::one(),
        n if n < 0 => Element::monomial(Monomial::from_powers(
            (n..=-1).map(|i| (i, Exponent::int(1))),
        )),
        n => Element::monomial(Monomial::from_powers(
            (0..n).map(|i| (i, Exponent::int(-1))),
        )),
    }
}

impl DerivationSpec {
    /// A user-defined derivation from a finite image table.
    pub fn new(name: impl Into<String>, images: BTreeMap<Gen, Element>) -> Self {
        DerivationSpec {
            name: name.into(),
            images: Images::Table(images),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Image of one generator, if defined.
    pub fn image(&self, g: Gen) -> Option<Element> {
        match &self.images {
            Images::Table(t) => t.get(&g).cloned(),
            Images::Dx => Some(dx_image(g)),
            Images::XDx => Some(dx_image(g).mul_monomial(&Monomial::gen_pow(0, Exponent::int(1)))),
        }
    }

    /// Walks every generator reachable from `a` through images and returns
    /// the image table restricted to them, or the first generator lacking one.
    pub fn resolve(&self, a: &Element) -> Result<ResolvedDerivation, DerivationError> {
        let mut table = BTreeMap::new();
        let mut pending: Vec<Gen> = a.generators().into_iter().collect();
        while let Some(g) = pending.pop() {
            if table.contains_key(&g) {
                continue;
            }
            let img = self.image(g).ok_or_else(|| DerivationError::NotClosed {
                derivation: self.name.clone(),
                generator: g,
            })?;
            pending.extend(img.generators().into_iter().filter(|h| !table.contains_key(h)));
            table.insert(g, img);
        }
        Ok(ResolvedDerivation { images: table })
    }
}

/// `d/dx` on the iterated logarithm / exponential generators.
pub fn dx_spec() -> DerivationSpec {
    DerivationSpec {
        name: "d/dx".to_owned(),
        images: Images::Dx,
    }
}

/// `l_0(x) d/dx`, i.e. `x d/dx`.
pub fn xdx_spec() -> DerivationSpec {
    DerivationSpec {
        name: "x d/dx".to_owned(),
        images: Images::XDx,
    }
}

/// A derivation whose image table is closed over a fixed generator set.
#[derive(Debug, Clone)]
pub struct ResolvedDerivation {
    images: BTreeMap<Gen, Element>,
}

impl ResolvedDerivation {
    pub fn generators(&self) -> BTreeSet<Gen> {
        self.images.keys().copied().collect()
    }

    /// Applies the derivation. Panics if `a` uses a generator outside the
    /// resolved closure.
    pub fn apply(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in a.terms() {
            for (g, e) in m.powers() {
                let img = &self.images[&g];
                if img.is_zero() {
                    continue;
                }
                let mut rest = m.clone();
                rest.mul_gen(g, &Exponent::int(-1));
                let coeff = c * &e.to_param_poly();
                if coeff.is_zero() {
                    continue;
                }
                for (im, ic) in img.terms() {
                    out.add_term(&rest * im, &coeff * ic);
                }
            }
        }
        out
    }
}

pub fn apply_derivation(d: &DerivationSpec, a: &Element) -> Result<Element, DerivationError> {
    Ok(d.resolve(a)?.apply(a))
}

/// `e^{yD} a` truncated at `y^order`: coefficient `k` is `D^k(a) / k!`.
pub fn exp_apply(d: &DerivationSpec, a: &Element, order: usize) -> Result<YSeries, DerivationError> {
    let resolved = d.resolve(a)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut current = a.clone();
    let mut fact = BigInt::one();
    for k in 0..=order {
        if k > 0 {
            current = resolved.apply(&current);
            fact *= BigInt::from(k);
        }
        coeffs.push(current.scale_rational(&Rational::new(BigInt::one(), fact.clone())));
    }
    Ok(YSeries::from_coeffs(order, coeffs))
}

/// Samples random pairs `a, b` and checks `e^{yD}(ab) = e^{yD}a * e^{yD}b`
/// for both `d/dx` and `x d/dx`.
pub fn verify_automorphism(samples: usize, order: usize, seed: u64) -> VerifyReport {
    let mut report = VerifyReport::new("automorphism");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SampleConfig::default();
    let specs = [dx_spec(), xdx_spec()];
    for _ in 0..samples {
        let a = random_element(&mut rng, &cfg);
        let b = random_element(&mut rng, &cfg);
        let ab = &a * &b;
        for d in &specs {
            let lhs = exp_apply(d, &ab, order).expect("built-in derivations are closed");
            let rhs = &exp_apply(d, &a, order).expect("closed") * &exp_apply(d, &b, order).expect("closed");
            report.check(lhs == rhs, || format!("{}: a = {a}, b = {b}", d.name()));
        }
    }
    report
}
