//! Unsigned Stirling numbers of the first kind in the forms produced by
//! expanding iterated logarithms: composition sums ("brackets"), signed
//! elementary symmetric sums `(m;n)`, and the multi-index recursion `S`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::report::VerifyReport;
use crate::Rational;

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Calls `f` on every composition of `k` into exactly `j` positive parts.
fn for_each_composition(k: u64, j: u64, f: &mut impl FnMut(&[u64])) {
    fn go(left: u64, parts: u64, buf: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if parts == 0 {
            if left == 0 {
                f(buf);
            }
            return;
        }
        // each remaining part needs at least 1
        if left < parts {
            return;
        }
        for first in 1..=left - (parts - 1) {
            buf.push(first);
            go(left - first, parts - 1, buf, f);
            buf.pop();
        }
    }
    go(k, j, &mut Vec::with_capacity(j as usize), f);
}

/// Bracket number `[k; j] = (k!/j!) * sum over compositions i_1+..+i_j = k of
/// 1/(i_1 ... i_j)`, computed by enumerating the compositions.
pub fn bracket(k: u64, j: u64) -> BigInt {
    let mut sum = Rational::zero();
    for_each_composition(k, j, &mut |parts| {
        let prod: BigInt = parts.iter().map(|&p| BigInt::from(p)).product();
        sum += Rational::new(BigInt::one(), prod);
    });
    let value = sum * Rational::new(factorial(k), factorial(j));
    assert!(value.is_integer(), "bracket({k},{j}) = {value} is not integral");
    value.to_integer()
}

/// Table of unsigned Stirling numbers of the first kind `c(k, j)`, `k, j <= max`,
/// from `c(k,j) = c(k-1,j-1) + (k-1) c(k-1,j)`.
pub fn stirling_first_table(max: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); max + 1]; max + 1];
    t[0][0] = BigInt::one();
    for k in 1..=max {
        for j in 1..=k {
            t[k][j] = &t[k - 1][j - 1] + BigInt::from(k - 1) * &t[k - 1][j];
        }
    }
    t
}

/// Memoized [`bracket`] values.
#[derive(Debug, Default, Clone)]
pub struct BracketTable {
    memo: HashMap<(u64, u64), BigInt>,
}

impl BracketTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, k: u64, j: u64) -> BigInt {
        self.memo
            .entry((k, j))
            .or_insert_with(|| bracket(k, j))
            .clone()
    }
}

/// Elementary symmetric polynomial `e_m(0, 1, ..., top-1)` by subset enumeration.
pub fn elementary_symmetric_range(m: u64, top: u64) -> BigInt {
    fn go(start: u64, left: u64, top: u64, prod: &BigInt, acc: &mut BigInt) {
        if left == 0 {
            *acc += prod;
            return;
        }
        for i in start..top {
            if top - i < left {
                break;
            }
            go(i + 1, left - 1, top, &(prod * BigInt::from(i)), acc);
        }
    }
    let mut acc = BigInt::zero();
    go(0, m, top, &BigInt::one(), &mut acc);
    acc
}

/// `(m;n) = (-1)^m * sum_{0 <= i_1 < ... < i_m <= m+n-1} i_1 ... i_m`.
pub fn paren(m: u64, n: u64) -> BigInt {
    let e = elementary_symmetric_range(m, m + n);
    if m.is_odd() {
        -e
    } else {
        e
    }
}

/// Memoized values of the recursion `S(j_n, ..., j_0)`.
///
/// Tuples are stored in the printed order `(j_n, ..., j_0)`. Rows with
/// `j_0 = 1` follow the initial conditions; any other tuple containing a
/// nonpositive entry or breaking `j_0 >= ... >= j_n` is zero.
#[derive(Debug, Default, Clone)]
pub struct STable {
    memo: HashMap<Vec<i64>, BigInt>,
}

impl STable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, tuple: &[i64]) -> BigInt {
        assert!(!tuple.is_empty(), "S needs at least one index");
        if let Some(v) = self.memo.get(tuple) {
            return v.clone();
        }
        let value = self.compute(tuple);
        self.memo.insert(tuple.to_vec(), value.clone());
        value
    }

    fn compute(&mut self, t: &[i64]) -> BigInt {
        let last = t.len() - 1;
        if t[last] == 1 {
            return if t.iter().all(|&v| v == 1) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        if t.iter().any(|&v| v <= 0) || t.windows(2).any(|w| w[0] > w[1]) {
            return BigInt::zero();
        }
        // Term p decrements positions p..=last and, for p > 0, carries the
        // factor (value at p) - 1; p = 0 is the all-decremented term.
        let mut total = BigInt::zero();
        for p in 0..=last {
            let weight = if p == 0 { 1 } else { t[p] - 1 };
            if weight == 0 {
                continue;
            }
            let next: Vec<i64> = t
                .iter()
                .enumerate()
                .map(|(i, &v)| if i >= p { v - 1 } else { v })
                .collect();
            total += BigInt::from(weight) * self.get(&next);
        }
        total
    }
}

/// `S(j_n, ..., j_0)` with a fresh memo table.
pub fn big_s(tuple: &[i64]) -> BigInt {
    STable::new().get(tuple)
}

/// Calls `f` on every chain `j_0 >= j_1 >= ... >= j_n >= 1` with `j_0 <= max_k`,
/// passed as `[j_0, ..., j_n]`.
pub fn for_each_chain(n: usize, max_k: u64, f: &mut impl FnMut(&[u64])) {
    fn go(prev: u64, left: usize, buf: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if left == 0 {
            f(buf);
            return;
        }
        for v in 1..=prev {
            buf.push(v);
            go(v, left - 1, buf, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(n + 1);
    for j0 in 1..=max_k {
        buf.push(j0);
        go(j0, n, &mut buf, f);
        buf.pop();
    }
}

/// Checks `S(j_n, ..., j_0) = prod_{i<n} [j_i; j_{i+1}]` on every chain with
/// `j_0 <= max_k` and `1 <= n <= max_n`.
pub fn verify_s_product_identity(max_k: u64, max_n: usize) -> VerifyReport {
    let mut report = VerifyReport::new("s-identity");
    let mut s = STable::new();
    let mut br = BracketTable::new();
    for n in 1..=max_n {
        for_each_chain(n, max_k, &mut |chain| {
            let reversed: Vec<i64> = chain.iter().rev().map(|&v| v as i64).collect();
            let lhs = s.get(&reversed);
            let rhs: BigInt = chain.windows(2).map(|w| br.get(w[0], w[1])).product();
            report.check(lhs == rhs, || {
                format!("chain (j_0..j_n) = {chain:?}: S = {lhs}, bracket product = {rhs}")
            });
        });
    }
    report
}

/// Checks, for `1 <= m <= n <= max_n`, that `S(m, n)`, the composition-sum
/// bracket `[n; m]` and `e_{n-m}(0, ..., n-1)` coincide; and that
/// `(m;n) = (-1)^m [m+n; n]` for all `m + n <= max_paren_total`.
pub fn verify_lubell(max_n: u64, max_paren_total: u64) -> VerifyReport {
    let mut report = VerifyReport::new("lubell");
    let mut s = STable::new();
    for n in 1..=max_n {
        for m in 1..=n {
            let s_val = s.get(&[m as i64, n as i64]);
            let br = bracket(n, m);
            let sym = elementary_symmetric_range(n - m, n);
            report.check(s_val == br && br == sym, || {
                format!("(m,n) = ({m},{n}): S = {s_val}, bracket = {br}, symmetric sum = {sym}")
            });
        }
    }
    for total in 0..=max_paren_total {
        for m in 0..=total {
            let n = total - m;
            let lhs = paren(m, n);
            let b = bracket(m + n, n);
            let rhs = if m.is_odd() { -b } else { b };
            report.check(lhs == rhs, || {
                format!("(m;n) with (m,n) = ({m},{n}): {lhs} vs (-1)^m bracket = {rhs}")
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket(3, 2), b(3));
        assert_eq!(bracket(4, 2), b(11));
        for n in 0..8 {
            assert_eq!(bracket(n, n), b(1));
        }
        assert_eq!(bracket(3, 0), b(0));
        assert_eq!(bracket(2, 3), b(0));
    }

    #[test]
    fn bracket_agrees_with_recurrence() {
        let t = stirling_first_table(12);
        for k in 0..=12u64 {
            for j in 0..=12u64 {
                assert_eq!(bracket(k, j), t[k as usize][j as usize], "({k},{j})");
            }
        }
    }

    #[test]
    fn row_sums_are_factorials() {
        for k in 0..=10u64 {
            let sum: BigInt = (0..=k).map(|j| bracket(k, j)).sum();
            assert_eq!(sum, factorial(k));
        }
    }

    #[test]
    fn paren_examples() {
        for n in 0..6 {
            assert_eq!(paren(0, n), b(1));
        }
        assert_eq!(paren(1, 1), b(-1));
        assert_eq!(paren(2, 1), b(2));
        assert_eq!(paren(2, 0), b(0));
    }

    #[test]
    fn big_s_examples() {
        assert_eq!(big_s(&[1]), b(1));
        assert_eq!(big_s(&[1, 1, 1, 1]), b(1));
        assert_eq!(big_s(&[2, 1]), b(0));
        for n in 1..=6i64 {
            let fact: i64 = (1..n).product();
            assert_eq!(big_s(&[1, n]), b(fact), "S(1,{n})");
        }
        assert_eq!(big_s(&[2, 3]), b(3));
        assert_eq!(big_s(&[1, 1, 3]), b(2));
    }

    #[test]
    fn symmetric_sum_examples() {
        // pairs from {0,1,2}: 0*1 + 0*2 + 1*2
        assert_eq!(elementary_symmetric_range(2, 3), b(2));
        assert_eq!(elementary_symmetric_range(0, 0), b(1));
        assert_eq!(elementary_symmetric_range(1, 4), b(6));
    }

    #[test]
    fn lubell_two_three_computed_independently() {
        // S(2,3), [3;2] and e_1(0,1,2) are each 3.
        assert_eq!(big_s(&[2, 3]), b(3));
        assert_eq!(bracket(3, 2), b(3));
        assert_eq!(elementary_symmetric_range(1, 3), b(3));
    }

    #[test]
    fn identity_sweeps_pass() {
        let r = verify_s_product_identity(6, 3);
        assert!(r.passed(), "{r}");
        let r = verify_lubell(8, 10);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn equal_chain_gives_one() {
        for j in 1..=5i64 {
            assert_eq!(big_s(&[j, j, j]), b(1));
        }
    }

    #[test]
    fn chain_enumeration_counts() {
        // chains of length 2 with j_0 <= 3: (1,1),(2,1),(2,2),(3,1),(3,2),(3,3)
        let mut count = 0;
        for_each_chain(1, 3, &mut |_| count += 1);
        assert_eq!(count, 6);
    }
}
