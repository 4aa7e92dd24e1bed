//! Binary fixed-point reals: a `BigInt` mantissa scaled by 2^−bits.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in bits for `digits` decimal digits plus `guard` guard digits.
pub fn bits_for(digits: u32, guard: u32) -> u32 {
    ((digits + guard) as f64 * LOG2_10).ceil() as u32 + 8
}

#[derive(Clone, PartialEq, Eq)]
pub struct BigReal {
    m: BigInt,
    bits: u32,
}

impl BigReal {
    pub fn zero(bits: u32) -> BigReal {
        BigReal { m: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> BigReal {
        BigReal { m: BigInt::one() << bits, bits }
    }

    pub fn from_int<T: Into<BigInt>>(n: T, bits: u32) -> BigReal {
        BigReal { m: n.into() << bits, bits }
    }

    pub fn from_ratio(r: &BigRational, bits: u32) -> BigReal {
        let num = r.numer() << bits;
        BigReal { m: div_round(&num, r.denom()), bits }
    }

    pub fn from_frac(n: i64, d: i64, bits: u32) -> BigReal {
        BigReal::from_ratio(&BigRational::new(n.into(), d.into()), bits)
    }

    pub fn from_mantissa(m: BigInt, bits: u32) -> BigReal {
        BigReal { m, bits }
    }

    /// 10^e, exactly rounded.
    pub fn pow10(e: i32, bits: u32) -> BigReal {
        let p = BigInt::from(10).pow(e.unsigned_abs());
        if e >= 0 {
            BigReal { m: p << bits, bits }
        } else {
            BigReal { m: div_round(&(BigInt::one() << bits), &p), bits }
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn with_bits(&self, bits: u32) -> BigReal {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => BigReal { m: &self.m << (bits - self.bits), bits },
            Ordering::Less => BigReal { m: &self.m >> (self.bits - bits), bits },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn abs(&self) -> BigReal {
        BigReal { m: self.m.abs(), bits: self.bits }
    }

    pub fn mul_int<T: Into<BigInt>>(&self, n: T) -> BigReal {
        BigReal { m: &self.m * n.into(), bits: self.bits }
    }

    pub fn div_int<T: Into<BigInt>>(&self, n: T) -> BigReal {
        BigReal { m: div_round(&self.m, &n.into()), bits: self.bits }
    }

    pub fn mul_ratio(&self, r: &BigRational) -> BigReal {
        BigReal { m: div_round(&(&self.m * r.numer()), r.denom()), bits: self.bits }
    }

    pub fn shl(&self, k: u32) -> BigReal {
        BigReal { m: &self.m << k, bits: self.bits }
    }

    pub fn shr(&self, k: u32) -> BigReal {
        BigReal { m: &self.m >> k, bits: self.bits }
    }

    pub fn div(&self, other: &BigReal) -> BigReal {
        let o = other.with_bits(self.bits);
        assert!(!o.m.is_zero(), "BigReal division by zero");
        BigReal { m: div_round(&(&self.m << self.bits), &o.m), bits: self.bits }
    }

    pub fn recip(&self) -> BigReal {
        BigReal::one(self.bits).div(self)
    }

    pub fn square(&self) -> BigReal {
        self * self
    }

    pub fn powi(&self, n: u32) -> BigReal {
        let mut acc = BigReal::one(self.bits);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(&self) -> BigReal {
        assert!(!self.m.is_negative(), "sqrt of a negative BigReal");
        BigReal { m: (&self.m << self.bits).sqrt(), bits: self.bits }
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.m.bits().saturating_sub(60) as u32;
        let top = (&self.m >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// True when |self| < 10^e.
    pub fn abs_lt_pow10(&self, e: i32) -> bool {
        self.abs() < BigReal::pow10(e, self.bits)
    }

    /// Decimal rendering truncated (toward zero) to `digits` fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = (self.m.abs() * BigInt::from(10).pow(digits)) >> self.bits;
        let s = scaled.to_string();
        let s =
            if s.len() <= digits as usize { format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s) } else { s };
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        let sign = if self.m.sign() == Sign::Minus && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }

    /// Rounds to the nearest rational with denominator 2^bits.
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.m.clone(), BigInt::one() << self.bits)
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if (r << 1u32).abs() >= b.abs() {
        if b.is_positive() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn align<'a>(a: &'a BigReal, b: &'a BigReal) -> (std::borrow::Cow<'a, BigReal>, std::borrow::Cow<'a, BigReal>) {
    use std::borrow::Cow;
    match a.bits.cmp(&b.bits) {
        Ordering::Equal => (Cow::Borrowed(a), Cow::Borrowed(b)),
        Ordering::Less => (Cow::Owned(a.with_bits(b.bits)), Cow::Borrowed(b)),
        Ordering::Greater => (Cow::Borrowed(a), Cow::Owned(b.with_bits(a.bits))),
    }
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        let (a, b) = align(self, o);
        BigReal { m: &a.m + &b.m, bits: a.bits }
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, o: &BigReal) -> BigReal {
        let (a, b) = align(self, o);
        BigReal { m: &a.m - &b.m, bits: a.bits }
    }
}

impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        let (a, b) = align(self, o);
        BigReal { m: (&a.m * &b.m) >> a.bits, bits: a.bits }
    }
}

impl Add for BigReal {
    type Output = BigReal;
    fn add(self, o: BigReal) -> BigReal {
        &self + &o
    }
}

impl Sub for BigReal {
    type Output = BigReal;
    fn sub(self, o: BigReal) -> BigReal {
        &self - &o
    }
}

impl Mul for BigReal {
    type Output = BigReal;
    fn mul(self, o: BigReal) -> BigReal {
        &self * &o
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { m: -self.m, bits: self.bits }
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { m: -&self.m, bits: self.bits }
    }
}

impl AddAssign<&BigReal> for BigReal {
    fn add_assign(&mut self, o: &BigReal) {
        if o.bits == self.bits {
            self.m += &o.m;
        } else {
            *self = &*self + o;
        }
    }
}

impl SubAssign<&BigReal> for BigReal {
    fn sub_assign(&mut self, o: &BigReal) {
        if o.bits == self.bits {
            self.m -= &o.m;
        } else {
            *self = &*self - o;
        }
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, o: &BigReal) -> Option<Ordering> {
        let (a, b) = align(self, o);
        Some(a.m.cmp(&b.m))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = ((self.bits as f64) / LOG2_10).floor() as u32;
        write!(f, "{}", self.to_decimal(d.min(60)))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = ((self.bits as f64) / LOG2_10).floor() as u32;
        write!(f, "{}", self.to_decimal(d.saturating_sub(3)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let b = 200;
        let third = BigReal::from_frac(1, 3, b);
        let x = &third.mul_int(3) - &BigReal::one(b);
        assert!(x.abs_lt_pow10(-55));
        let y = BigReal::from_int(2, b).sqrt();
        assert!((&y.square() - &BigReal::from_int(2, b)).abs_lt_pow10(-55));
        assert_eq!(BigReal::from_frac(-5, 4, b).to_decimal(3), "-1.250");
        assert_eq!(BigReal::from_frac(1, 3, b).to_decimal(5), "0.33333");
        assert_eq!(BigReal::from_frac(-2, 3, b).to_decimal(2), "-0.66");
        assert!((BigReal::from_frac(7, 8, b).to_f64() - 0.875).abs() < 1e-15);
        let d = BigReal::from_int(7, b).div(&BigReal::from_int(-2, b));
        assert_eq!(d.to_decimal(1), "-3.5");
        assert_eq!(BigReal::from_frac(3, 2, b).powi(3).to_decimal(3), "3.375");
    }
}
