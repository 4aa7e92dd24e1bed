//! Iterated integrals by truncated power series and path splitting at c = √2 − 1.
//!
//! The involution t ↦ (1−t)/(1+t) fixes c and maps [c,1] onto [0,c], so a
//! word splits as Σ_{w=uv} I_{[0,c]}(dual-reversed u)·I_{[0,c]}(v) and every
//! series is evaluated at c, where terms decay like c^n.

use super::bigreal::{bits_for, BigReal};
use super::consts::sqrt2_minus_1;
use crate::error::{domain, Result};
use crate::wordalg::{Letter, Word};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// One-forms of the evaluator. Beyond ω0, ω+, ω−, the alphabet has
/// Y = dt/(1−t) and A = dt/(1+t), which carry alternating zeta values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    O,
    P,
    N,
    Y,
    A,
}

impl From<Letter> for Form {
    fn from(l: Letter) -> Form {
        match l {
            Letter::O => Form::O,
            Letter::P => Form::P,
            Letter::N => Form::N,
        }
    }
}

impl Form {
    /// Pull-back under t ↦ (1−t)/(1+t) combined with orientation reversal.
    fn dual(self) -> &'static [(Form, i64)] {
        match self {
            Form::O => &[(Form::N, 1)],
            Form::N => &[(Form::O, 1)],
            Form::P => &[(Form::O, 1), (Form::P, 1), (Form::N, -1)],
            Form::Y => &[(Form::O, 1), (Form::A, -1)],
            Form::A => &[(Form::A, 1)],
        }
    }
}

/// Fixed-point coefficient vector: entry n is the coefficient of t^n scaled by 2^bits.
pub(crate) type Coeffs = Vec<BigInt>;

/// g(t) = ∫_0^t form(s)·f(s).
pub(crate) fn apply_form(form: Form, f: &[BigInt]) -> Coeffs {
    let len = f.len();
    let mut g = vec![BigInt::zero(); len];
    match form {
        Form::O => {
            for n in 1..len {
                if !f[n].is_zero() {
                    g[n] = &f[n] / BigInt::from(n);
                }
            }
        }
        Form::N | Form::P | Form::Y | Form::A => {
            // h = multiplier·f, then integrate: g_{n+1} = h_n/(n+1).
            let mut h: Vec<BigInt> = vec![BigInt::zero(); len];
            for n in 0..len {
                let v = match form {
                    Form::N => {
                        let mut v = &f[n] << 1u32;
                        if n >= 2 {
                            v += &h[n - 2];
                        }
                        v
                    }
                    Form::P => {
                        let mut v = if n >= 1 { &f[n - 1] << 1u32 } else { BigInt::zero() };
                        if n >= 2 {
                            v += &h[n - 2];
                        }
                        v
                    }
                    Form::Y => {
                        let mut v = f[n].clone();
                        if n >= 1 {
                            v += &h[n - 1];
                        }
                        v
                    }
                    _ => {
                        let mut v = f[n].clone();
                        if n >= 1 {
                            v -= &h[n - 1];
                        }
                        v
                    }
                };
                h[n] = v;
            }
            for n in 0..len - 1 {
                if !h[n].is_zero() {
                    g[n + 1] = &h[n] / BigInt::from(n + 1);
                }
            }
        }
    }
    g
}

fn apply_comb(comb: &[(Form, i64)], f: &[BigInt]) -> Coeffs {
    let mut out = vec![BigInt::zero(); f.len()];
    for &(form, c) in comb {
        let g = apply_form(form, f);
        for (o, x) in out.iter_mut().zip(g) {
            *o += x * c;
        }
    }
    out
}

/// Powers c^0..c^{len−1} as mantissas at `bits`.
pub(crate) fn powers(x: &BigReal, len: usize) -> Vec<BigInt> {
    let bits = x.bits();
    let mut out = Vec::with_capacity(len);
    let mut p = BigReal::one(bits);
    for _ in 0..len {
        out.push(p.mantissa().clone());
        p = &p * x;
    }
    out
}

pub(crate) fn eval_at(f: &[BigInt], pw: &[BigInt], bits: u32) -> BigReal {
    let mut acc = BigInt::zero();
    for (a, b) in f.iter().zip(pw) {
        if !a.is_zero() {
            acc += a * b;
        }
    }
    BigReal::from_mantissa(acc >> bits, bits)
}

/// Number of series terms for `digits` correct digits at ratio c.
pub(crate) fn series_len(digits: u32, weight: usize) -> usize {
    let per = 0.382_775_f64; // −log10(√2 − 1)
    ((digits as f64 + 4.0 + weight as f64) / per).ceil() as usize + 16 + 2 * weight
}

fn unit(len: usize, bits: u32) -> Coeffs {
    let mut v = vec![BigInt::zero(); len];
    v[0] = BigInt::from(1) << bits;
    v
}

/// Value of ∫_{1>t_1>…>t_n>0} form_1(t_1)⋯form_n(t_n) with form_1 outermost.
pub fn eval_forms(w: &[Form], digits: u32) -> Result<BigReal> {
    if w.is_empty() {
        return Ok(BigReal::one(bits_for(digits, 10)));
    }
    if !matches!(w[0], Form::O | Form::A) {
        return domain("iterated integral diverges at t = 1");
    }
    if matches!(w[w.len() - 1], Form::O) {
        return domain("iterated integral diverges at t = 0");
    }
    let n = w.len();
    let bits = bits_for(digits, 12 + n as u32);
    let len = series_len(digits, n);
    let c = sqrt2_minus_1(bits);
    let pw = powers(&c, len);

    let mut suffix_vals = vec![BigReal::zero(bits); n + 1];
    suffix_vals[n] = BigReal::one(bits);
    let mut s = unit(len, bits);
    for i in (0..n).rev() {
        s = apply_form(w[i], &s);
        suffix_vals[i] = eval_at(&s, &pw, bits);
    }
    let mut total = suffix_vals[0].clone();
    let mut p = unit(len, bits);
    for i in 0..n {
        p = apply_comb(w[i].dual(), &p);
        let pv = eval_at(&p, &pw, bits);
        total += &(&pv * &suffix_vals[i + 1]);
    }
    Ok(total.with_bits(bits_for(digits, 10)))
}

struct Lru {
    map: HashMap<(Vec<Form>, u32), (BigReal, u64)>,
    tick: u64,
    cap: usize,
}

fn word_cache() -> &'static Mutex<Lru> {
    static C: OnceLock<Mutex<Lru>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(Lru { map: HashMap::new(), tick: 0, cap: 8192 }))
}

/// [`eval_forms`] behind a bounded least-recently-used cache.
pub fn eval_forms_cached(w: &[Form], digits: u32) -> Result<BigReal> {
    let key = (w.to_vec(), digits);
    {
        let mut c = word_cache().lock().unwrap();
        c.tick += 1;
        let t = c.tick;
        if let Some(e) = c.map.get_mut(&key) {
            e.1 = t;
            return Ok(e.0.clone());
        }
    }
    let v = eval_forms(w, digits)?;
    let mut c = word_cache().lock().unwrap();
    if c.map.len() >= c.cap {
        let cut = c.tick.saturating_sub(c.cap as u64 / 2);
        c.map.retain(|_, e| e.1 >= cut);
    }
    c.tick += 1;
    let t = c.tick;
    c.map.insert(key, (v.clone(), t));
    Ok(v)
}

/// Value of an admissible word to `digits` decimal digits.
pub fn eval_word(w: &Word, digits: u32) -> Result<BigReal> {
    if !w.is_admissible() {
        return domain(format!("word {w} is not admissible"));
    }
    let forms: Vec<Form> = w.letters().iter().map(|&l| l.into()).collect();
    eval_forms_cached(&forms, digits)
}

/// Value at c of ∫_0^c of the word, as series coefficients (used by the ψ evaluator).
pub(crate) fn series_of(w: &[Form], len: usize, bits: u32) -> Vec<Coeffs> {
    // Returns the suffix series of every tail, innermost first: out[i] is the series of w[i..].
    let n = w.len();
    let mut out = vec![unit(len, bits); n + 1];
    for i in (0..n).rev() {
        out[i] = apply_form(w[i], &out[i + 1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeval::consts::{log2, pi, zeta};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn depth_one_values() {
        let d = 50;
        let b = bits_for(d, 10);
        let p2 = pi(b).square();
        let v = eval_word(&w("0-"), d).unwrap();
        assert!((&v - &p2.div_int(4)).abs_lt_pow10(-48));
        let v = eval_word(&w("00-"), d).unwrap();
        let z3 = zeta(3, b).unwrap();
        assert!((&v - &z3.mul_int(7).div_int(4)).abs_lt_pow10(-48));
        // M(2;+) = 2·Σ_even 1/n² = ζ(2)/2.
        let v = eval_word(&w("0+"), d).unwrap();
        assert!((&v - &p2.div_int(12)).abs_lt_pow10(-48));
    }

    #[test]
    fn alternating_forms() {
        let d = 40;
        let b = bits_for(d, 10);
        // ζ(1̄) = −log 2 = −∫A.
        let v = eval_forms(&[Form::A], d).unwrap();
        assert!((&v - &log2(b)).abs_lt_pow10(-38));
        // ζ(2) = ∫ O Y.
        let v = eval_forms(&[Form::O, Form::Y], d).unwrap();
        assert!((&v - &pi(b).square().div_int(6)).abs_lt_pow10(-38));
        assert!(eval_forms(&[Form::Y], d).is_err());
        assert!(eval_forms(&[Form::O, Form::O], d).is_err());
    }

    #[test]
    fn rejects_non_admissible() {
        assert!(eval_word(&w("-0-"), 20).is_err());
        assert!(eval_word(&w("0-0"), 20).is_err());
    }
}
