//! Numeric cross-checks between independent evaluation routes.

use mmv_kit::closedforms::{conv_t_in_mtv, eval_closed, pi_normal, psi_via_mtv, Sym};
use mmv_kit::indexcore::{admissible_indices, mmv_to_alternating, positive_compositions, Index};
use mmv_kit::lincomb::{q, LinComb, Q};
use mmv_kit::numeval::partial::mhs_star;
use mmv_kit::numeval::quad::tanh_sinh_vec;
use mmv_kit::numeval::values::eval_alt;
use mmv_kit::numeval::{
    bits_for, consts::ln, eval_index, eval_value, eval_word, eval_word_naive, partial_t, BigReal, NamedValue,
};
use mmv_kit::poset2::{expand, psi_poset};
use mmv_kit::regutils::{rho_series, ConstAtom, ConstComb, ConstMonomial};
use mmv_kit::wordalg::{admissible_words, dual_word, stuffle_indices};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

const D: u32 = 40;

fn close(a: &BigReal, b: &BigReal, e: i32) -> bool {
    (a - b).abs_lt_pow10(e)
}

fn eval_cached(idx: &Index, cache: &mut HashMap<Index, BigReal>) -> BigReal {
    cache.entry(idx.clone()).or_insert_with(|| eval_index(idx, D).unwrap()).clone()
}

#[test]
fn alternating_expansion_matches_mmv_values() {
    for w in 2..=6 {
        for idx in admissible_indices(w) {
            let direct = eval_index(&idx, D).unwrap();
            let mut via = BigReal::zero(bits_for(D, 10));
            for (a, c) in mmv_to_alternating(&idx).unwrap().iter() {
                via += &eval_alt(a, D).unwrap().mul_ratio(c);
            }
            assert!(close(&direct, &via, -30), "{idx}");
        }
    }
}

#[test]
fn accelerated_and_naive_sums_agree() {
    let cutoff = 400;
    for w in 2..=6 {
        for x in admissible_words(w) {
            let fast = eval_word(&x, 30).unwrap();
            let naive = eval_word_naive(&x, cutoff).unwrap();
            let gap = (&fast - &naive.value).abs().to_f64();
            assert!(gap <= naive.tail_bound + 1e-25, "{x}: gap {gap:e} bound {:e}", naive.tail_bound);
        }
    }
}

#[test]
fn stuffle_indices_multiply_values() {
    let mut cache = HashMap::new();
    let by_weight: Vec<Vec<Index>> = (0..=5).map(admissible_indices).collect();
    for wa in 2..=3 {
        for wb in wa..=7 - wa {
            for a in &by_weight[wa as usize] {
                for b in &by_weight[wb as usize] {
                    let prod = &eval_cached(a, &mut cache) * &eval_cached(b, &mut cache);
                    let mut sum = BigReal::zero(bits_for(D, 10));
                    for (i, c) in stuffle_indices(a, b).unwrap().iter() {
                        sum += &eval_cached(i, &mut cache).mul_ratio(c);
                    }
                    assert!(close(&prod, &sum, -30), "{a} * {b}");
                }
            }
        }
    }
}

#[test]
fn duality_holds_at_weight_seven() {
    let mut cache: HashMap<_, BigReal> = HashMap::new();
    let mut ev =
        |x: &mmv_kit::wordalg::Word| cache.entry(x.clone()).or_insert_with(|| eval_word(x, 32).unwrap()).clone();
    for x in admissible_words(7) {
        let Ok(d) = dual_word(&x) else { continue };
        let mut v = BigReal::zero(bits_for(32, 10));
        for (y, c) in d.iter() {
            v += &ev(y).mul_ratio(c);
        }
        assert!(close(&ev(&x), &v, -28), "{x}");
    }
}

#[test]
fn psi_posets_match_t_value_formula() {
    for wk in 1..=5u32 {
        for k in positive_compositions(wk) {
            for p in 1..=6 - wk {
                let mut v = BigReal::zero(bits_for(D, 10));
                for (x, c) in expand(&psi_poset(&k, p).unwrap()).unwrap().iter() {
                    v += &eval_word(x, D).unwrap().mul_ratio(c);
                }
                let mtv = eval_closed(&psi_via_mtv(&k, p).unwrap(), D).unwrap();
                assert!(close(&v, &mtv, -25), "psi({k:?};{})", p + 1);
            }
        }
    }
}

#[test]
fn convoluted_t_values_reduce_to_t_values() {
    for wk in 1..=5u32 {
        for k in positive_compositions(wk) {
            for ql in 1..=6 - wk {
                let cf = conv_t_in_mtv(&k, ql).unwrap();
                assert!(cf.basis().all(|(_, s)| matches!(s, Sym::One | Sym::V(NamedValue::T(_)))), "{k:?} {ql}");
                let direct = eval_value(&NamedValue::Conv(k.clone(), vec![1; ql as usize]), 30).unwrap();
                assert!(close(&direct, &eval_closed(&cf, 30).unwrap(), -24), "{k:?} {ql}");
            }
        }
    }
}

/// ∫₀¹ x^{n−1} log^m(1−x) dx = (−1)^m m! ζ*_n({1}_m)/n.
#[test]
fn log_moments_are_star_harmonic_sums() {
    let bits = bits_for(30, 10);
    let vals = tanh_sinh_vec(
        |t, u| {
            let l = ln(u).unwrap();
            let mut out = Vec::new();
            let mut tp = BigReal::one(bits);
            for _n in 1..=6 {
                let mut lp = l.clone();
                for _m in 1..=6 {
                    out.push(&tp * &lp);
                    lp = &lp * &l;
                }
                tp = &tp * t;
            }
            out
        },
        36,
        bits,
    );
    let mut fact = BigInt::one();
    for m in 1..=6usize {
        fact *= m;
        for n in 1..=6usize {
            let sign = if m % 2 == 0 { q(1) } else { q(-1) };
            let exact = sign * Q::from_integer(fact.clone()) * mhs_star(&vec![1; m], n) / q(n as i64);
            let quad = &vals[(n - 1) * 6 + (m - 1)];
            assert!(close(quad, &BigReal::from_ratio(&exact, bits), -20), "n={n} m={m}");
        }
    }
}

/// The ρ generating series A(u) = exp(Σ_{n≥2} (−1)^n ζ(n) u^n/n) satisfies
/// A(u)A(−u) = πu/sin(πu); the right side is expanded here by inverting sin x/x.
#[test]
fn rho_series_reflection() {
    let n = 10;
    let a = rho_series(n);
    let mono = |x: &ConstMonomial, y: &ConstMonomial| LinComb::single(x.mul(y));
    for deg in 0..=n as usize {
        let mut prod = ConstComb::zero();
        for i in 0..=deg {
            let s = if (deg - i) % 2 == 0 { q(1) } else { q(-1) };
            prod.add_scaled(&a[i].bilinear(&a[deg - i], mono), &s);
        }
        let got = pi_normal(&prod);
        let want: ConstComb = if deg % 2 == 1 {
            ConstComb::zero()
        } else {
            LinComb::term(ConstMonomial::pow(ConstAtom::Pi, deg as i32), x_over_sin(deg / 2))
        };
        assert_eq!(got, want, "u^{deg}");
    }
}

/// Coefficient of x^{2k} in x/sin x.
fn x_over_sin(k: usize) -> Q {
    let mut s = vec![Q::one()];
    let mut f = BigInt::one();
    for j in 1..=k {
        f *= BigInt::from((2 * j) * (2 * j + 1));
        let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        s.push(Q::new(sign, f.clone()));
    }
    let mut c: Vec<Q> = vec![Q::one()];
    for j in 1..=k {
        let mut acc = Q::zero();
        for i in 1..=j {
            acc -= &s[i] * &c[j - i];
        }
        c.push(acc);
    }
    c[k].clone()
}

#[test]
fn partial_t_values_converge_monotonically() {
    for k in [vec![2u32], vec![3], vec![1, 2], vec![2, 2], vec![1, 1, 2]] {
        let limit = eval_value(&NamedValue::T(k.clone()), 30).unwrap();
        let mut prev = f64::INFINITY;
        for n in [10usize, 50, 250, 1000, 2000] {
            let gap = (&BigReal::from_ratio(&partial_t(&k, n), bits_for(30, 10)) - &limit).abs().to_f64();
            assert!(gap < prev, "{k:?} at n = {n}");
            prev = gap;
        }
    }
}
