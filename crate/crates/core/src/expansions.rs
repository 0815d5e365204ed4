//! Closed-form expansions of `(x+y)^e`, `log(x+y)`, `log(x+y)^r` and
//! `l_n(x+y)^r`, evaluated directly from their summation formulas rather than
//! through a derivation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::combinatorics::{paren, BracketTable, STable};
use crate::element::{Element, Monomial};
use crate::exponent::{binom, Exponent};
use crate::param::ParamPoly;
use crate::series::YSeries;
use crate::Rational;

/// `(x+y)^e = sum_n binom(e, n) x^{e-n} y^n`.
pub fn binomial_series(e: &Exponent, order: usize) -> YSeries {
    let coeffs = (0..=order)
        .map(|n| Element::term(binom(e, n as u32), Monomial::gen_pow(0, e.add_int(-(n as i64)))))
        .collect();
    YSeries::from_coeffs(order, coeffs)
}

/// `log(1 + y/x) = sum_{i>=1} (-1)^{i-1} y^i / (i x^i)`, without the `log x` term.
fn log_one_plus(order: usize) -> YSeries {
    let mut coeffs = vec![Element::zero()];
    for i in 1..=order {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        coeffs.push(Element::term(
            ParamPoly::constant(Rational::new(sign.into(), BigInt::from(i))),
            Monomial::gen_pow(0, Exponent::int(-(i as i64))),
        ));
    }
    YSeries::from_coeffs(order, coeffs)
}

/// `log(x+y) = log x + log(1 + y/x)`.
pub fn log_series(order: usize) -> YSeries {
    let mut s = log_one_plus(order);
    s = &s + &YSeries::constant(Element::generator(1), order);
    s
}

/// `(log x + log(1 + y/x))^r` expanded binomially in powers of the second
/// summand. Since that summand has y-valuation one, powers above `order` vanish.
pub fn log_power_series(r: &Exponent, order: usize) -> YSeries {
    let inner = log_one_plus(order);
    let mut inner_pow = YSeries::constant(Element::one(), order);
    let mut out = YSeries::zero(order);
    for k in 0..=order {
        if k > 0 {
            inner_pow = &inner_pow * &inner;
        }
        let outer = Element::term(binom(r, k as u32), Monomial::gen_pow(1, r.add_int(-(k as i64))));
        out = &out + &inner_pow.map(|c| c * &outer);
    }
    out
}

/// Which of the three equivalent summation formulas to evaluate in
/// [`iterated_log_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IteratedLogFormula {
    /// Product of bracket numbers over all index tuples.
    Bracket,
    /// Chains `1 <= j_n <= ... <= j_0 = k` weighted by `S(j_n, ..., j_0)`.
    SRecursion,
    /// Weak compositions of `k` weighted by products of `(j_i; alpha_{i+1})`.
    Paren,
}

impl IteratedLogFormula {
    pub const ALL: [IteratedLogFormula; 3] = [Self::Bracket, Self::SRecursion, Self::Paren];
}

impl fmt::Display for IteratedLogFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bracket => "bracket",
            Self::SRecursion => "s-recursion",
            Self::Paren => "paren",
        })
    }
}

impl FromStr for IteratedLogFormula {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bracket" => Ok(Self::Bracket),
            "s-recursion" => Ok(Self::SRecursion),
            "paren" => Ok(Self::Paren),
            other => Err(format!("unknown formula `{other}` (bracket, s-recursion, paren)")),
        }
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn sign(exp: u64) -> BigInt {
    if exp.is_odd() {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// Calls `f` on every tuple in `0..=bound` of the given length.
fn for_each_box(len: usize, bound: u64, f: &mut impl FnMut(&[u64])) {
    fn go(len: usize, bound: u64, buf: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        for v in 0..=bound {
            buf.push(v);
            go(len, bound, buf, f);
            buf.pop();
        }
    }
    go(len, bound, &mut Vec::with_capacity(len), f);
}

/// Calls `f` on every tuple of `len` nonnegative integers summing to `total`.
fn for_each_weak_composition(len: usize, total: u64, f: &mut impl FnMut(&[u64])) {
    fn go(len: usize, left: u64, buf: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if buf.len() + 1 == len {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for v in 0..=left {
            buf.push(v);
            go(len, left - v, buf, f);
            buf.pop();
        }
    }
    go(len, total, &mut Vec::with_capacity(len), f);
}

/// `l_n^{r} * prod_{i=0}^{n} l_i^{-exps[i]}`.
fn log_monomial(n: usize, r: &Exponent, exps: &[u64]) -> Monomial {
    let mut m = Monomial::gen_pow(n as i64, r.clone());
    for (i, &e) in exps.iter().enumerate() {
        m.mul_gen(i as i64, &Exponent::int(-(e as i64)));
    }
    m
}

/// `l_n(x+y)^r` truncated at `y^order`, from one of the three closed formulas.
///
/// `n` must be at least 1.
pub fn iterated_log_series(n: usize, r: &Exponent, order: usize, formula: IteratedLogFormula) -> YSeries {
    assert!(n >= 1, "iterated logarithm depth must be positive");
    let mut coeffs = vec![Element::zero(); order + 1];
    match formula {
        IteratedLogFormula::Bracket => {
            let mut br = BracketTable::new();
            for j0 in 0..=order as u64 {
                // all remaining j_i range over 0..=j0; brackets kill the rest
                for_each_box(n, j0, &mut |rest| {
                    let mut js = Vec::with_capacity(n + 1);
                    js.push(j0);
                    js.extend_from_slice(rest);
                    let prod: BigInt = js.windows(2).map(|w| br.get(w[0], w[1])).product();
                    if prod.is_zero() {
                        return;
                    }
                    let jn = js[n];
                    let scalar = Rational::new(prod * sign(j0 + jn) * factorial(jn), factorial(j0));
                    let c = binom(r, jn as u32).scale(&scalar);
                    coeffs[j0 as usize].add_term(log_monomial(n, r, &js), c);
                });
            }
        }
        IteratedLogFormula::SRecursion => {
            let mut s = STable::new();
            coeffs[0] = Element::gen_pow(n as i64, r.clone());
            for k in 1..=order as u64 {
                let fk = factorial(k);
                // chains k = j_0 >= j_1 >= ... >= j_n >= 1
                let mut chain = vec![k];
                chains_from(&mut chain, n, &mut |js| {
                    let tuple: Vec<i64> = js.iter().rev().map(|&v| v as i64).collect();
                    let sv = s.get(&tuple);
                    if sv.is_zero() {
                        return;
                    }
                    let jn = js[n];
                    let scalar = Rational::new(sv * sign(k + jn) * factorial(jn), fk.clone());
                    let c = binom(r, jn as u32).scale(&scalar);
                    coeffs[k as usize].add_term(log_monomial(n, r, js), c);
                });
            }
        }
        IteratedLogFormula::Paren => {
            for k in 0..=order as u64 {
                let fk = factorial(k);
                for_each_weak_composition(n + 1, k, &mut |js| {
                    // alpha_i = j_i + ... + j_n
                    let mut alpha = vec![0u64; n + 2];
                    for i in (0..=n).rev() {
                        alpha[i] = alpha[i + 1] + js[i];
                    }
                    let prod: BigInt = (0..n).map(|i| paren(js[i], alpha[i + 1])).product();
                    if prod.is_zero() {
                        return;
                    }
                    let jn = js[n];
                    let scalar = Rational::new(prod * factorial(jn), fk.clone());
                    let c = binom(r, jn as u32).scale(&scalar);
                    coeffs[k as usize].add_term(log_monomial(n, r, &alpha[..=n]), c);
                });
            }
        }
    }
    YSeries::from_coeffs(order, coeffs)
}

fn chains_from(buf: &mut Vec<u64>, n: usize, f: &mut impl FnMut(&[u64])) {
    if buf.len() == n + 1 {
        f(buf);
        return;
    }
    let prev = *buf.last().expect("chain starts at j_0");
    for v in 1..=prev {
        buf.push(v);
        chains_from(buf, n, f);
        buf.pop();
    }
}
