//! Acceptance gate: every criterion at exact equality, one PASS/FAIL line each.
//! Runs without the libtest harness so the lines always reach the terminal.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use formalcalc_core::combinatorics::{bracket, paren, stirling_first_table, verify_lubell, verify_s_product_identity};
use formalcalc_core::derivation::{dx_spec, exp_apply, verify_automorphism, xdx_spec};
use formalcalc_core::diffrep::{lift_exp, verify_intertwine};
use formalcalc_core::expansions::{binomial_series, iterated_log_series, log_power_series, log_series, IteratedLogFormula};
use formalcalc_core::fdb::{
    compose_oracle, d_powers_y0, fdb_d_pow, phi_b, random_b_sequence, umbral_solve, BSequence, FdbElement, FdbError,
};
use formalcalc_core::sample::{random_element, SampleConfig};
use formalcalc_core::upoly::UPoly;
use formalcalc_core::{Element, Exponent, Param, ParamPoly, Rational, YSeries};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn r() -> Exponent {
    Exponent::param(Param::new("r"))
}

/// Unsigned Stirling numbers of the first kind from `[k+1, j] = k [k, j] + [k, j-1]`.
fn stirling_oracle(max: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::from(0); max + 1]; max + 1];
    t[0][0] = BigInt::from(1);
    for k in 0..max {
        for j in 0..=max {
            let below = if j > 0 { t[k][j - 1].clone() } else { BigInt::from(0) };
            t[k + 1][j] = BigInt::from(k) * &t[k][j] + below;
        }
    }
    t
}

fn automorphism() -> Outcome {
    let start = Instant::now();
    let report = verify_automorphism(200, 6, 1);
    ensure(report.passed(), || report.to_string())?;
    ensure(report.checked == 400, || format!("expected 400 comparisons, ran {}", report.checked))?;
    within(start, Duration::from_secs(30))?;
    Ok("200 pairs x {d/dx, x d/dx} at N = 6".into())
}

fn formal_taylor() -> Outcome {
    let start = Instant::now();
    let dx = dx_spec();
    let engine = |a: Element, n: usize| exp_apply(&dx, &a, n).expect("d/dx is closed");

    let bin = binomial_series(&r(), 6);
    ensure(bin == engine(Element::gen_pow(0, r()), 6), || "binomial_series(r, 6) != engine".into())?;
    // coefficient of y^n is r (r-1) ... (r-n+1) / n! x^{r-n}
    let rp = ParamPoly::param(Param::new("r"));
    let mut falling = ParamPoly::one();
    let mut fact = 1i64;
    for n in 0..=6usize {
        if n > 0 {
            falling = &falling * &(&rp - &ParamPoly::from_int(n as i64 - 1));
            fact *= n as i64;
        }
        let expected = Element::term(falling.scale(&q(1, fact)), formalcalc_core::Monomial::gen_pow(0, r().add_int(-(n as i64))));
        ensure(bin.coeffs()[n] == expected, || format!("y^{n} coefficient {} != {expected}", bin.coeffs()[n]))?;
    }

    for n in 0..=6 {
        ensure(log_series(n) == engine(Element::generator(1), n), || format!("log_series({n})"))?;
    }
    ensure(log_power_series(&r(), 5) == engine(Element::gen_pow(1, r()), 5), || "log_power_series(r, 5)".into())?;

    let mut compared = 0;
    for n in 1..=3usize {
        for order in 0..=4usize {
            let e = engine(Element::gen_pow(n as i64, r()), order);
            for f in IteratedLogFormula::ALL {
                ensure(iterated_log_series(n, &r(), order, f) == e, || format!("iterated_log n={n} N={order} {f}"))?;
                compared += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("binomial N=6, log N<=6, log-power N=5, {compared} iterated-log cases"))
}

fn exponent_law() -> Outcome {
    let s = Exponent::param(Param::new("s"));
    let lhs = &binomial_series(&r(), 6) * &binomial_series(&s, 6);
    ensure(lhs == binomial_series(&(&r() + &s), 6), || format!("product {lhs}"))?;
    Ok("(x+y)^r (x+y)^s = (x+y)^(r+s) to y^6".into())
}

fn intertwining_and_lifting() -> Outcome {
    let rep = verify_intertwine(6);
    ensure(rep.passed(), || rep.to_string())?;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = SampleConfig::default();
    for _ in 0..100 {
        let a = random_element(&mut rng, &cfg);
        let lifted = lift_exp(&a, 5).map_err(|e| e.to_string())?;
        let direct = exp_apply(&xdx_spec(), &a, 5).map_err(|e| e.to_string())?;
        ensure(lifted == direct, || format!("a = {a}: lift {lifted} vs direct {direct}"))?;
    }

    // x e^y and log x + y
    let mut fact = 1i64;
    let x_ey: Vec<Element> = (0..=6i64)
        .map(|k| {
            fact *= k.max(1);
            Element::generator(0).scale_rational(&q(1, fact))
        })
        .collect();
    let x_ey = YSeries::new(6, x_ey).unwrap();
    ensure(lift_exp(&Element::generator(0), 6).unwrap() == x_ey, || "x e^y".into())?;
    let log_plus_y = YSeries::from_coeffs(6, vec![Element::generator(1), Element::one()]);
    ensure(lift_exp(&Element::generator(1), 6).unwrap() == log_plus_y, || "log x + y".into())?;
    Ok(format!("{}; 100 lifts at N = 5; x e^y and log x + y", rep))
}

fn s_identity() -> Outcome {
    let start = Instant::now();
    let s = verify_s_product_identity(6, 3);
    ensure(s.passed(), || s.to_string())?;
    let l = verify_lubell(8, 10);
    ensure(l.passed(), || l.to_string())?;
    let oracle = stirling_oracle(10);
    for (total, row) in oracle.iter().enumerate() {
        for m in 0..=total {
            let n = total - m;
            let b = row[n].clone();
            let expected = if m % 2 == 1 { -b } else { b };
            let got = paren(m as u64, n as u64);
            ensure(got == expected, || format!("({m};{n}) = {got}, expected {expected}"))?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{s}; {l}"))
}

fn bracket_cross_check() -> Outcome {
    let oracle = stirling_oracle(12);
    let table = stirling_first_table(12);
    for k in 0..=12usize {
        for j in 0..=12usize {
            let b = bracket(k as u64, j as u64);
            ensure(b == oracle[k][j] && table[k][j] == oracle[k][j], || {
                format!("[{k},{j}]: compositions {b}, table {}, recurrence {}", table[k][j], oracle[k][j])
            })?;
        }
    }
    let mut fact = BigInt::from(1);
    for k in 0..=10u64 {
        if k > 0 {
            fact *= k;
        }
        let sum: BigInt = (0..=k).map(|j| bracket(k, j)).sum();
        ensure(sum == fact, || format!("row {k} sums to {sum}"))?;
    }
    Ok("k, j <= 12 against the recurrence; row sums k! for k <= 10".into())
}

/// Number of partitions of `n`, by the usual coin-change count.
fn partitions(n: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

fn faa_di_bruno() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let poly = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        let deg = rng.gen_range(0..=6);
        (0..=deg).map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()
    };
    for _ in 0..100 {
        let f = poly(&mut rng);
        let g = poly(&mut rng);
        let rep = compose_oracle(&f, &g, 8).map_err(|e| e.to_string())?;
        ensure(rep.direct == rep.via_fdb, || "paths disagree".into())?;
        // third path: Taylor coefficients h^{(k)}(x) / k! of h = f o g
        let h = UPoly::new(f.clone()).compose(&UPoly::new(g.clone()));
        let mut fact = 1i64;
        for k in 0..=8usize {
            fact *= (k as i64).max(1);
            let taylor = h.nth_derivative(k).scale(&q(1, fact));
            ensure(rep.direct[k] == taylor, || format!("y^{k}: {} vs h^({k})/{k}! = {taylor}", rep.direct[k]))?;
        }
    }
    for (n, d) in d_powers_y0(8).iter().enumerate() {
        ensure(d.len() == partitions(n), || format!("D^{n} y_0 has {} monomials, p({n}) = {}", d.len(), partitions(n)))?;
    }
    let (y, x) = (FdbElement::y, FdbElement::x);
    let expected = y(3)
        .mul(&x(1).mul(&x(1)).mul(&x(1)))
        .add(&y(2).mul(&x(1)).mul(&x(2)).scale(&q(3, 1)))
        .add(&y(1).mul(&x(3)));
    let third = fdb_d_pow(&y(0), 3);
    ensure(third == expected, || format!("D^3 y_0 = {third}"))?;
    Ok("100 (f, g) pairs at N = 8 on three paths; p(n) for n <= 8; D^3 y_0".into())
}

fn umbral() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let targets = d_powers_y0(8);
    for _ in 0..20 {
        let b = random_b_sequence(&mut rng, 8);
        let table = umbral_solve(&b, 8).map_err(|e| e.to_string())?;
        let mut cur = UPoly::one();
        for (m, t) in targets.iter().enumerate().skip(1) {
            cur = table.apply(&cur).map_err(|e| e.to_string())?;
            let p = phi_b(&b, t).map_err(|e| e.to_string())?;
            ensure(cur == p, || format!("B = {:?}: D_B^{m}(1) = {cur}, phi_B(D^{m} y_0) = {p}", b.values()))?;
        }
        let b1 = b.values()[0].clone();
        for (k, img) in table.images().iter().enumerate() {
            ensure(img.degree() == Some(k + 1) && img.leading() == Some(&b1), || format!("D_B x^{k} = {img}"))?;
        }
        ensure(umbral_solve(&b, 8).unwrap() == table, || "solution not deterministic".into())?;
    }
    let mut unit = vec![q(1, 1)];
    unit.resize(8, q(0, 1));
    let table = umbral_solve(&BSequence::new(unit).unwrap(), 8).map_err(|e| e.to_string())?;
    for (k, img) in table.images().iter().enumerate() {
        ensure(*img == UPoly::monomial(q(1, 1), k + 1), || format!("B = (1, 0, ...): D_B x^{k} = {img}"))?;
    }
    ensure(BSequence::new(vec![q(0, 1), q(1, 1)]) == Err(FdbError::ZeroLeadingB), || "B_1 = 0 accepted".into())?;
    let cli = formalcalc_cli::run(common::argv(&["umbral", "--B", "0,1", "--depth", "2"]));
    ensure(cli.code == 2, || format!("CLI accepted B_1 = 0 (exit {})", cli.code))?;
    Ok("20 random B at depth 8; B = (1, 0, ...) multiplies by x; B_1 = 0 rejected".into())
}

fn cli_contract() -> Outcome {
    for (name, args) in common::GOLDEN {
        common::check_golden(name, args)?;
    }
    let n = common::check_print_parse_round_trip(1000, 2024)?;
    let j = common::check_json_round_trip(50, 3, 5)?;
    Ok(format!("3 golden files; {n} print/parse round trips; {j} schema-valid JSON round trips"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("automorphism property", automorphism),
        ("formal Taylor theorems", formal_taylor),
        ("exponent law", exponent_law),
        ("intertwining and lifting", intertwining_and_lifting),
        ("S-product and signed bracket identities", s_identity),
        ("bracket cross-check", bracket_cross_check),
        ("Faa di Bruno dual path", faa_di_bruno),
        ("umbral shift", umbral),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match res {
            Ok(detail) => println!("criterion {}: PASS  {name} -- {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} -- {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
