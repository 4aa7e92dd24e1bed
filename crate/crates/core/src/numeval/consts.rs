//! Constants and elementary functions at arbitrary precision.

use super::bigreal::{bits_for, BigReal};
use crate::error::{domain, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

type ConstCache = Mutex<HashMap<(&'static str, u32, u32), BigReal>>;

fn cache() -> &'static ConstCache {
    static C: OnceLock<ConstCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(name: &'static str, arg: u32, bits: u32, f: impl FnOnce() -> BigReal) -> BigReal {
    if let Some(v) = cache().lock().unwrap().get(&(name, arg, bits)) {
        return v.clone();
    }
    let v = f();
    cache().lock().unwrap().insert((name, arg, bits), v.clone());
    v
}

/// arctan(1/x) for an integer x ≥ 2.
fn arctan_inv(x: u64, bits: u32) -> BigReal {
    let wb = bits + 16;
    let one = BigInt::one() << wb;
    let x2 = BigInt::from(x * x);
    let mut term = &one / BigInt::from(x);
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = &term / &x2;
        let t = &term / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    BigReal::from_mantissa(sum, wb).with_bits(bits)
}

pub fn pi(bits: u32) -> BigReal {
    cached("pi", 0, bits, || {
        let a = arctan_inv(5, bits + 8).mul_int(16);
        let b = arctan_inv(239, bits + 8).mul_int(4);
        (&a - &b).with_bits(bits)
    })
}

/// artanh(1/x) for an integer x ≥ 2.
fn artanh_inv(x: u64, bits: u32) -> BigReal {
    let wb = bits + 16;
    let x2 = BigInt::from(x * x);
    let mut term = (BigInt::one() << wb) / BigInt::from(x);
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = &term / &x2;
        sum += &term / BigInt::from(2 * k + 1);
        k += 1;
    }
    BigReal::from_mantissa(sum, wb).with_bits(bits)
}

pub fn log2(bits: u32) -> BigReal {
    cached("log2", 0, bits, || artanh_inv(3, bits + 8).mul_int(2).with_bits(bits))
}

/// √2 − 1, the fixed point of t ↦ (1−t)/(1+t) in (0,1).
pub fn sqrt2_minus_1(bits: u32) -> BigReal {
    cached("c", 0, bits, || &BigReal::from_int(2, bits).sqrt() - &BigReal::one(bits))
}

pub fn exp(x: &BigReal) -> BigReal {
    let bits = x.bits();
    let wb = bits + 32;
    let x = x.with_bits(wb);
    let l2 = log2(wb);
    let k = (x.to_f64() / std::f64::consts::LN_2).round() as i64;
    let r = &x - &l2.mul_int(k);
    // Halve r until tiny, run Taylor, then square back.
    let s = 12u32;
    let r = r.shr(s);
    let mut sum = BigReal::one(wb);
    let mut term = BigReal::one(wb);
    let mut n = 1u32;
    loop {
        term = (&term * &r).div_int(n);
        if term.is_zero() {
            break;
        }
        sum += &term;
        n += 1;
    }
    for _ in 0..s {
        sum = sum.square();
    }
    let out = if k >= 0 { sum.shl(k as u32) } else { sum.shr((-k) as u32) };
    out.with_bits(bits)
}

pub fn ln(x: &BigReal) -> Result<BigReal> {
    if x.is_negative() || x.is_zero() {
        return domain("logarithm of a non-positive number");
    }
    let bits = x.bits();
    let wb = bits + 32;
    let x = x.with_bits(wb);
    // x = 2^e · y with y ∈ [1/2, 1).
    let e = x.mantissa().bits() as i64 - wb as i64;
    let y = if e >= 0 { x.shr(e as u32) } else { x.shl((-e) as u32) };
    let one = BigReal::one(wb);
    let z = (&y - &one).div(&(&y + &one));
    let z2 = z.square();
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut k = 1u32;
    loop {
        term = &term * &z2;
        let t = term.div_int(2 * k + 1);
        if t.is_zero() {
            break;
        }
        sum += &t;
        k += 1;
    }
    let out = &sum.mul_int(2) + &log2(wb).mul_int(e);
    Ok(out.with_bits(bits))
}

/// η(n) = Σ (−1)^{k−1}/k^n for n ≥ 1, by Borwein's alternating-series acceleration.
pub fn eta(n: u32, bits: u32) -> BigReal {
    assert!(n >= 1);
    if n == 1 {
        return log2(bits);
    }
    cached("eta", n, bits, || {
        let wb = bits + 32;
        let terms = (wb as f64 * std::f64::consts::LOG10_2 / 0.7655).ceil() as usize + 4;
        // d_k = N Σ_{i≤k} (N+i−1)! 4^i / ((N−i)! (2i)!)
        let nn = terms as i64;
        // d_k = N Σ_{i≤k} (N+i−1)! 4^i / ((N−i)! (2i)!), kept exact.
        let mut d: Vec<BigRational> = Vec::with_capacity(terms + 1);
        let mut term = BigRational::one();
        let mut acc = term.clone();
        d.push(acc.clone());
        for i in 1..=nn {
            term *= BigRational::new(
                BigInt::from(nn + i - 1) * BigInt::from(nn - i + 1) * 4,
                BigInt::from((2 * i) * (2 * i - 1)),
            );
            acc += &term;
            d.push(acc.clone());
        }
        let dn = d[terms].clone();
        let mut sum = BigInt::zero();
        for k in 0..terms {
            let diff = &d[k] - &dn;
            let num = (diff.numer() << wb) / diff.denom();
            let t = num / BigInt::from(k as u64 + 1).pow(n);
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
        }
        let v = -(sum * dn.denom()) / dn.numer();
        BigReal::from_mantissa(v, wb).with_bits(bits)
    })
}

pub fn zeta(n: u32, bits: u32) -> Result<BigReal> {
    if n < 2 {
        return domain("zeta(n) needs n ≥ 2");
    }
    let e = eta(n, bits + 8);
    let f = &BigReal::one(bits + 8) - &BigReal::one(bits + 8).shr(n - 1);
    Ok(e.div(&f).with_bits(bits))
}

/// ζ̄(n) = −ζ(n̄) = (1−2^{1−n})ζ(n); ζ̄(1) = log 2 and ζ̄(0) = 1/2.
pub fn zetabar(n: u32, bits: u32) -> BigReal {
    if n == 0 {
        return BigReal::from_frac(1, 2, bits);
    }
    eta(n, bits)
}

pub fn const_zeta(n: u32, digits: u32) -> Result<BigReal> {
    zeta(n, bits_for(digits, 10))
}

pub fn const_zetabar(n: i64, digits: u32) -> Result<BigReal> {
    if n < 0 {
        return domain("zetabar(n) needs n ≥ 0");
    }
    Ok(zetabar(n as u32, bits_for(digits, 10)))
}

pub fn const_log2(digits: u32) -> BigReal {
    log2(bits_for(digits, 10))
}

pub fn const_pi(digits: u32) -> BigReal {
    pi(bits_for(digits, 10))
}

/// Exact Bernoulli numbers B_0..=B_n (B_1 = −1/2).
pub fn bernoulli(n: usize) -> Vec<num_rational::BigRational> {
    use num_rational::BigRational;
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            let c = num_integer::binomial(BigInt::from(m + 1), BigInt::from(k));
            s += bk * BigRational::from_integer(c);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// ζ(2k) = r·π^{2k}; returns r exactly.
pub fn zeta_even_over_pi(k: u32) -> num_rational::BigRational {
    use num_rational::BigRational;
    let b = bernoulli(2 * k as usize);
    let b2k = b[2 * k as usize].clone();
    let mut fact = BigInt::one();
    for i in 1..=(2 * k) {
        fact *= i;
    }
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let num = BigRational::from_integer(BigInt::from(sign) * (BigInt::one() << (2 * k - 1))) * b2k;
    num / BigRational::from_integer(fact)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI50: &str = "3.14159265358979323846264338327950288419716939937510";
    const LN2_50: &str = "0.69314718055994530941723212145817656807550013436025";
    const Z3_50: &str = "1.20205690315959428539973816151144999076498629234049";

    #[test]
    fn known_digits() {
        assert_eq!(const_pi(50).to_decimal(50), PI50);
        assert_eq!(const_log2(50).to_decimal(50), LN2_50);
        assert_eq!(const_zeta(3, 50).unwrap().to_decimal(50), Z3_50);
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let b = bits_for(60, 10);
        let p = pi(b);
        let d = &zeta(2, b).unwrap() - &p.square().div_int(6);
        assert!(d.abs_lt_pow10(-60));
        let d = &zeta(4, b).unwrap() - &p.powi(4).div_int(90);
        assert!(d.abs_lt_pow10(-60));
    }

    #[test]
    fn zetabar_conventions() {
        let b = bits_for(40, 10);
        assert_eq!(zetabar(0, b), BigReal::from_frac(1, 2, b));
        assert_eq!(zetabar(1, b), log2(b));
        let d = &zetabar(2, b) - &pi(b).square().div_int(12);
        assert!(d.abs_lt_pow10(-40));
        assert!(const_zeta(1, 10).is_err());
        assert!(const_zetabar(-1, 10).is_err());
    }

    #[test]
    fn exp_ln_round_trip() {
        let b = bits_for(50, 10);
        for &(n, d) in &[(1i64, 1i64), (-7, 3), (25, 2), (1, 1000)] {
            let x = BigReal::from_frac(n, d, b);
            let y = ln(&exp(&x)).unwrap();
            assert!((&y - &x).abs_lt_pow10(-48), "{n}/{d}");
        }
        let e = exp(&BigReal::one(b));
        assert!(e.to_decimal(20).starts_with("2.71828182845904523536"));
        assert!(ln(&BigReal::zero(b)).is_err());
    }

    #[test]
    fn even_zeta_ratios() {
        use num_rational::BigRational;
        assert_eq!(zeta_even_over_pi(1), BigRational::new(1.into(), 6.into()));
        assert_eq!(zeta_even_over_pi(2), BigRational::new(1.into(), 90.into()));
        assert_eq!(zeta_even_over_pi(3), BigRational::new(1.into(), 945.into()));
    }
}
