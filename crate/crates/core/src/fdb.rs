//! Faa di Bruno data and umbral shifts.
//!
//! The derivation `D y_i = y_{i+1} x_1`, `D x_j = x_{j+1}` on the polynomial
//! algebra in `y_0, y_1, ...; x_1, x_2, ...` computes higher derivatives of a
//! composite `f(g(x))` once `y_n` is read as `f^{(n)}(g(x))` and `x_m` as
//! `g^{(m)}(x)`. Sending `y_j -> 1` and `x_i -> B_i x` turns `D^n y_0` into
//! polynomials in `x` that determine a unique linear operator `D_B` with
//! `D_B^n(1) = phi_B(D^n y_0)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::param::fmt_rational;
use crate::report::VerifyReport;
use crate::sample::random_rational;
use crate::upoly::UPoly;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FdbError {
    #[error("B sequence is empty")]
    EmptyB,
    #[error("B_1 must be nonzero")]
    ZeroLeadingB,
    #[error("x_{index} needs B_{index}, but only {len} values were given")]
    BIndexOutOfRange { index: u32, len: usize },
    #[error("umbral depth must be at least 1")]
    ZeroDepth,
    #[error("leading coefficient of phi_B(D^{0} y_0) vanishes")]
    DegenerateLeading(usize),
    #[error("D_B is only tabulated up to x^{max}, cannot apply to degree {degree}")]
    BeyondTable { max: usize, degree: usize },
    #[error("umbral shift check failed at n = {n}: D_B^n(1) = {got}, phi_B(D^n y_0) = {expected}")]
    UmbralMismatch { n: usize, got: String, expected: String },
    #[error("composition paths disagree at y^{order}: direct {direct}, via D^n y_0 {via_fdb}")]
    ComposeMismatch { order: usize, direct: String, via_fdb: String },
}

/// A letter of the alphabet `y_0, y_1, ...; x_1, x_2, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FdbVar {
    Y(u32),
    X(u32),
}

impl fmt::Display for FdbVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FdbVar::Y(i) => write!(f, "y_{i}"),
            FdbVar::X(j) => write!(f, "x_{j}"),
        }
    }
}

pub type FdbMonomial = BTreeMap<FdbVar, u32>;

/// Polynomial over the Faa di Bruno alphabet with rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FdbElement {
    terms: BTreeMap<FdbMonomial, Rational>,
}

impl FdbElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(v: FdbVar) -> Self {
        if let FdbVar::X(0) = v {
            panic!("x_0 is not part of the alphabet");
        }
        let mut m = FdbMonomial::new();
        m.insert(v, 1);
        Self::term(m, Rational::one())
    }

    pub fn y(i: u32) -> Self {
        Self::var(FdbVar::Y(i))
    }

    pub fn x(j: u32) -> Self {
        Self::var(FdbVar::X(j))
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(FdbMonomial::new(), c)
    }

    pub fn term(m: FdbMonomial, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (FdbMonomial, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, mut m: FdbMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        m.retain(|_, e| *e > 0);
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FdbMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (v, e) in mb {
                    *m.entry(*v).or_insert(0) += e;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Evaluates with every letter replaced by a polynomial in `x`.
    pub fn evaluate<F>(&self, mut value: F) -> Result<UPoly, FdbError>
    where
        F: FnMut(FdbVar) -> Result<UPoly, FdbError>,
    {
        let mut cache: BTreeMap<FdbVar, UPoly> = BTreeMap::new();
        let mut out = UPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = UPoly::constant(c.clone());
            for (v, e) in m {
                let base = match cache.get(v) {
                    Some(p) => p.clone(),
                    None => {
                        let p = value(*v)?;
                        cache.insert(*v, p.clone());
                        p
                    }
                };
                acc = &acc * &base.pow(*e);
            }
            out = &out + &acc;
        }
        Ok(out)
    }
}

/// Terms with the highest `y` index first: `y_3*x_1^3 + 3*y_2*x_1*x_2 + y_1*x_3`.
impl fmt::Display for FdbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let mag = c.abs();
            if m.is_empty() {
                fmt_rational(&mag, f)?;
                continue;
            }
            if !mag.is_one() {
                fmt_rational(&mag, f)?;
                f.write_str("*")?;
            }
            for (k, (v, e)) in m.iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                if *e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FdbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FdbElement({self})")
    }
}

fn d_image(v: FdbVar) -> FdbElement {
    match v {
        FdbVar::Y(i) => FdbElement::y(i + 1).mul(&FdbElement::x(1)),
        FdbVar::X(j) => FdbElement::x(j + 1),
    }
}

/// The derivation `D y_i = y_{i+1} x_1`, `D x_j = x_{j+1}`.
pub fn fdb_d(a: &FdbElement) -> FdbElement {
    let mut out = FdbElement::zero();
    for (m, c) in &a.terms {
        for (v, e) in m {
            let mut rest = m.clone();
            *rest.get_mut(v).expect("present") -= 1;
            let coeff = c * Rational::from_integer(BigInt::from(*e));
            let rest = FdbElement::term(rest, coeff);
            out = out.add(&rest.mul(&d_image(*v)));
        }
    }
    out
}

pub fn fdb_d_pow(a: &FdbElement, n: usize) -> FdbElement {
    (0..n).fold(a.clone(), |acc, _| fdb_d(&acc))
}

/// `D^n y_0` for `n = 0..=order`.
pub fn d_powers_y0(order: usize) -> Vec<FdbElement> {
    let mut out = Vec::with_capacity(order + 1);
    let mut cur = FdbElement::y(0);
    for n in 0..=order {
        if n > 0 {
            cur = fdb_d(&cur);
        }
        out.push(cur.clone());
    }
    out
}

/// Coefficients `D^n y_0 / n!` of `e^{zD} y_0`, `n = 0..=order`.
pub fn exp_zd_y0(order: usize) -> Vec<FdbElement> {
    let mut fact = BigInt::one();
    d_powers_y0(order)
        .into_iter()
        .enumerate()
        .map(|(n, d)| {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            d.scale(&Rational::new(BigInt::one(), fact.clone()))
        })
        .collect()
}

/// Both computations of the y-coefficients of `f(g(x+y))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposeReport {
    /// From expanding `g(x+y)` binomially and composing.
    pub direct: Vec<UPoly>,
    /// From `D^n y_0 / n!` with `y_n -> f^{(n)}(g(x))`, `x_m -> g^{(m)}(x)`.
    pub via_fdb: Vec<UPoly>,
}

/// `p(x+y)` as y-coefficients up to `order`, using Pascal's triangle.
fn translate(p: &UPoly, order: usize) -> Vec<UPoly> {
    let mut out = vec![UPoly::zero(); order + 1];
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for (k, c) in p.coeffs().iter().enumerate() {
        if k > 0 {
            let mut next = vec![BigInt::one(); k + 1];
            for i in 1..k {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        // c (x+y)^k = c sum_j C(k,j) x^{k-j} y^j
        for (j, binom) in row.iter().enumerate().take(order + 1) {
            let term = UPoly::monomial(c * Rational::from_integer(binom.clone()), k - j);
            out[j] = &out[j] + &term;
        }
    }
    out
}

fn ypoly_mul(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let order = a.len() - 1;
    let mut out = vec![UPoly::zero(); order + 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

/// Computes the y-coefficients of `e^{y d/dx} f(g(x)) = f(g(x+y))` up to
/// `order` in two independent ways and checks they agree.
///
/// `f` and `g` are coefficient lists, lowest degree first.
pub fn compose_oracle(f: &[Rational], g: &[Rational], order: usize) -> Result<ComposeReport, FdbError> {
    let f = UPoly::new(f.to_vec());
    let g = UPoly::new(g.to_vec());

    let g_shift = translate(&g, order);
    let mut direct = vec![UPoly::zero(); order + 1];
    let mut power = {
        let mut one = vec![UPoly::zero(); order + 1];
        one[0] = UPoly::one();
        one
    };
    for (i, fi) in f.coeffs().iter().enumerate() {
        if i > 0 {
            power = ypoly_mul(&power, &g_shift);
        }
        for (d, p) in direct.iter_mut().zip(&power) {
            *d = &*d + &p.scale(fi);
        }
    }

    let via_fdb = exp_zd_y0(order)
        .iter()
        .map(|c| {
            c.evaluate(|v| {
                Ok(match v {
                    FdbVar::Y(n) => f.nth_derivative(n as usize).compose(&g),
                    FdbVar::X(m) => g.nth_derivative(m as usize),
                })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(k) = (0..=order).find(|&k| direct[k] != via_fdb[k]) {
        return Err(FdbError::ComposeMismatch {
            order: k,
            direct: direct[k].to_string(),
            via_fdb: via_fdb[k].to_string(),
        });
    }
    Ok(ComposeReport { direct, via_fdb })
}

/// Substitution data `B_1, B_2, ...` with `B_1 != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BSequence(Vec<Rational>);

impl BSequence {
    pub fn new(values: Vec<Rational>) -> Result<Self, FdbError> {
        match values.first() {
            None => Err(FdbError::EmptyB),
            Some(b1) if b1.is_zero() => Err(FdbError::ZeroLeadingB),
            Some(_) => Ok(BSequence(values)),
        }
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, FdbError> {
        Self::new(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `B_i` (1-based).
    pub fn get(&self, i: u32) -> Option<&Rational> {
        (i as usize).checked_sub(1).and_then(|k| self.0.get(k))
    }

    /// Extends with zeros to at least `len` entries.
    pub fn zero_extended(&self, len: usize) -> Self {
        let mut v = self.0.clone();
        if v.len() < len {
            v.resize(len, Rational::zero());
        }
        BSequence(v)
    }
}

/// `phi_B`: `y_j -> 1`, `x_i -> B_i x`.
pub fn phi_b(b: &BSequence, a: &FdbElement) -> Result<UPoly, FdbError> {
    a.evaluate(|v| match v {
        FdbVar::Y(_) => Ok(UPoly::one()),
        FdbVar::X(i) => b
            .get(i)
            .map(|bi| UPoly::monomial(bi.clone(), 1))
            .ok_or(FdbError::BIndexOutOfRange { index: i, len: b.len() }),
    })
}

/// The umbral shift `D_B` tabulated on `1, x, ..., x^{depth-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UmbralTable {
    b: BSequence,
    images: Vec<UPoly>,
}

impl UmbralTable {
    pub fn b(&self) -> &BSequence {
        &self.b
    }

    /// `D_B x^k` for `k = 0..depth`.
    pub fn images(&self) -> &[UPoly] {
        &self.images
    }

    /// Applies `D_B` by linearity.
    pub fn apply(&self, p: &UPoly) -> Result<UPoly, FdbError> {
        if let Some(d) = p.degree() {
            if d >= self.images.len() {
                return Err(FdbError::BeyondTable {
                    max: self.images.len().saturating_sub(1),
                    degree: d,
                });
            }
        }
        Ok(p
            .coeffs()
            .iter()
            .zip(&self.images)
            .fold(UPoly::zero(), |acc, (c, img)| &acc + &img.scale(c)))
    }
}

/// Solves `D_B(p_{m-1}) = p_m`, `p_m = phi_B(D^m y_0)`, for `D_B x^{m-1}`,
/// `m = 1..=depth`, and checks `D_B^m(1) = p_m` before returning.
///
/// `B` is read as zero beyond its given entries.
pub fn umbral_solve(b: &BSequence, depth: usize) -> Result<UmbralTable, FdbError> {
    if depth == 0 {
        return Err(FdbError::ZeroDepth);
    }
    if b.get(1).is_none_or(Zero::is_zero) {
        return Err(FdbError::ZeroLeadingB);
    }
    let full = b.zero_extended(depth);
    let targets = d_powers_y0(depth)
        .iter()
        .map(|d| phi_b(&full, d))
        .collect::<Result<Vec<_>, _>>()?;

    let mut images: Vec<UPoly> = Vec::with_capacity(depth);
    for m in 1..=depth {
        let prev = &targets[m - 1];
        let lead = prev.coeff(m - 1);
        if lead.is_zero() {
            return Err(FdbError::DegenerateLeading(m - 1));
        }
        let mut rhs = targets[m].clone();
        for (k, img) in images.iter().enumerate() {
            rhs = &rhs - &img.scale(&prev.coeff(k));
        }
        images.push(rhs.scale(&lead.recip()));
    }

    let table = UmbralTable { b: b.clone(), images };
    let mut cur = UPoly::one();
    for (n, expected) in targets.iter().enumerate().skip(1) {
        cur = table.apply(&cur)?;
        if &cur != expected {
            return Err(FdbError::UmbralMismatch {
                n,
                got: cur.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok(table)
}

/// Number of integer partitions of `n`, by direct enumeration of parts in
/// nonincreasing order.
pub fn partition_count(n: u32) -> u64 {
    fn go(left: u32, max_part: u32) -> u64 {
        if left == 0 {
            return 1;
        }
        (1..=max_part.min(left)).map(|p| go(left - p, p)).sum()
    }
    go(n, n)
}

fn random_poly<R: Rng>(rng: &mut R, max_degree: usize) -> Vec<Rational> {
    let deg = rng.gen_range(0..=max_degree);
    (0..=deg)
        .map(|_| {
            if rng.gen_bool(0.2) {
                Rational::zero()
            } else {
                random_rational(rng, 4, 3)
            }
        })
        .collect()
}

/// Random sequence with `B_1` drawn from `{1, 2, -1, 1/2}`.
pub fn random_b_sequence<R: Rng>(rng: &mut R, len: usize) -> BSequence {
    let leads = [(1, 1), (2, 1), (-1, 1), (1, 2)];
    let (n, d) = leads[rng.gen_range(0..leads.len())];
    let mut v = vec![Rational::new(n.into(), d.into())];
    for _ in 1..len {
        v.push(if rng.gen_bool(0.25) {
            Rational::zero()
        } else {
            random_rational(rng, 3, 2)
        });
    }
    BSequence::new(v).expect("leading entry nonzero")
}

/// Dual-path composition check on random `(f, g)`, monomial counts of
/// `D^n y_0` against partition numbers, and the classical third derivative.
pub fn verify_faa_di_bruno(samples: usize, order: usize, max_degree: usize, seed: u64) -> VerifyReport {
    let mut report = VerifyReport::new("faa-di-bruno");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let f = random_poly(&mut rng, max_degree);
        let g = random_poly(&mut rng, max_degree);
        let res = compose_oracle(&f, &g, order);
        report.check(res.is_ok(), || {
            format!("f = {}, g = {}: {}", UPoly::new(f.clone()), UPoly::new(g.clone()), res.unwrap_err())
        });
    }
    for (n, d) in d_powers_y0(order).iter().enumerate() {
        let expected = partition_count(n as u32) as usize;
        report.check(d.len() == expected, || {
            format!("D^{n} y_0 has {} monomials, p({n}) = {expected}", d.len())
        });
    }
    let third = fdb_d_pow(&FdbElement::y(0), 3);
    let expected = classical_third_derivative();
    report.check(third == expected, || format!("D^3 y_0 = {third}, expected {expected}"));
    report
}

/// `y_3 x_1^3 + 3 y_2 x_1 x_2 + y_1 x_3`.
fn classical_third_derivative() -> FdbElement {
    let y = FdbElement::y;
    let x = FdbElement::x;
    y(3).mul(&x(1)).mul(&x(1)).mul(&x(1))
        .add(&y(2).mul(&x(1)).mul(&x(2)).scale(&Rational::from_integer(3.into())))
        .add(&y(1).mul(&x(3)))
}

/// Draws `count` random sequences of length `depth` and solves each.
pub fn verify_umbral(count: usize, depth: usize, seed: u64) -> VerifyReport {
    let mut report = VerifyReport::new("umbral");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let b = random_b_sequence(&mut rng, depth);
        let res = umbral_solve(&b, depth);
        report.check(res.is_ok(), || format!("B = {:?}: {}", b.values(), res.unwrap_err()));
    }
    report
}
