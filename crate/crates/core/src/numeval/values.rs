//! Named values: MMVs, T/t/S-values, alternating zeta values, convoluted
//! T-values, the A-function and ψ-values.

use super::bigreal::{bits_for, BigReal};
use super::consts::{ln, sqrt2_minus_1};
use super::series::{eval_at, eval_forms_cached, powers, series_len, series_of, Coeffs, Form};
use crate::error::{domain, Result};
use crate::indexcore::{index_to_word, mmv_series_product, AltIndex, Index};
use crate::lincomb::LinComb;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// Signature of T(k): odd, even, odd, …
pub fn t_signature(r: usize) -> Vec<i8> {
    (0..r).map(|i| if i % 2 == 0 { -1 } else { 1 }).collect()
}

/// Signature of S(k): even, odd, even, …
pub fn s_signature(r: usize) -> Vec<i8> {
    (0..r).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
}

pub fn t_index(k: &[u32]) -> Result<Index> {
    Index::new(k.to_vec(), t_signature(k.len()))
}

pub fn s_index(k: &[u32]) -> Result<Index> {
    Index::new(k.to_vec(), s_signature(k.len()))
}

/// A value that can be evaluated numerically by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedValue {
    M(Index),
    T(Vec<u32>),
    S(Vec<u32>),
    /// Hoffman's t-value (all indices odd, no 2^r factor).
    SmallT(Vec<u32>),
    Zeta(AltIndex),
    /// ψ(k; s) at an integer s ≥ 2.
    Psi(Vec<u32>, u32),
    /// The convoluted value T(k ⊛ l).
    Conv(Vec<u32>, Vec<u32>),
}

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for NamedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedValue::M(i) => write!(f, "{i}"),
            NamedValue::T(k) => write!(f, "T({})", join(k)),
            NamedValue::S(k) => write!(f, "S({})", join(k)),
            NamedValue::SmallT(k) => write!(f, "t({})", join(k)),
            NamedValue::Zeta(a) => write!(f, "{a}"),
            NamedValue::Psi(k, s) => write!(f, "psi({};{s})", join(k)),
            NamedValue::Conv(k, l) => write!(f, "Tconv({}|{})", join(k), join(l)),
        }
    }
}

pub fn eval_index(idx: &Index, digits: u32) -> Result<BigReal> {
    let w = index_to_word(idx)?;
    let forms: Vec<Form> = w.letters().iter().map(|&l| l.into()).collect();
    eval_forms_cached(&forms, digits)
}

/// Letters of ζ(k; σ) over {ω0, Y, A}, outermost first, with the overall sign.
pub fn alt_forms(a: &AltIndex) -> (Vec<Form>, i64) {
    let mut forms = Vec::new();
    let mut sign = 1i64;
    let mut acc = 1i8;
    let r = a.depth();
    let mut letters = vec![Form::O; 0];
    for j in (0..r).rev() {
        acc *= a.sgn[j];
        letters.push(if acc == 1 { Form::Y } else { Form::A });
    }
    for (pos, j) in (0..r).rev().enumerate() {
        forms.extend(std::iter::repeat_n(Form::O, (a.k[j] - 1) as usize));
        let l = letters[pos];
        if l == Form::A {
            sign = -sign;
        }
        forms.push(l);
    }
    (forms, sign)
}

pub fn eval_alt(a: &AltIndex, digits: u32) -> Result<BigReal> {
    if a.depth() == 0 {
        return Ok(BigReal::one(bits_for(digits, 10)));
    }
    if !a.is_admissible() {
        return domain(format!("{a} diverges"));
    }
    let (forms, sign) = alt_forms(a);
    let v = eval_forms_cached(&forms, digits)?;
    Ok(if sign < 0 { -v } else { v })
}

pub fn eval_value(v: &NamedValue, digits: u32) -> Result<BigReal> {
    match v {
        NamedValue::M(i) => eval_index(i, digits),
        NamedValue::T(k) => eval_index(&t_index(k)?, digits),
        NamedValue::S(k) => eval_index(&s_index(k)?, digits),
        NamedValue::SmallT(k) => {
            let idx = Index::new(k.clone(), vec![-1; k.len()])?;
            Ok(eval_index(&idx, digits)?.shr(k.len() as u32))
        }
        NamedValue::Zeta(a) => eval_alt(a, digits),
        NamedValue::Psi(k, s) => {
            if *s < 2 {
                return domain("psi is evaluated at integers s ≥ 2");
            }
            eval_psi_series(k, s - 1, digits)
        }
        NamedValue::Conv(k, l) => eval_conv_t(k, l, digits),
    }
}

/// T(k ⊛ l) as an exact combination of MMVs.
///
/// Products of truncated sums over a common range expand by the series
/// quasi-shuffle, and the outer sum then appends one more slot.
pub fn reduce_conv_t(k: &[u32], l: &[u32]) -> Result<LinComb<Index>> {
    if k.is_empty() || l.is_empty() || k.contains(&0) || l.contains(&0) {
        return domain("Tconv needs two nonempty compositions");
    }
    let kk = k.len();
    let ll = l.len();
    let outer_exp = k[kk - 1] + l[ll - 1];
    if outer_exp < 2 {
        return domain("Tconv diverges");
    }
    let kin: Vec<(u32, i8)> = k[..kk - 1].iter().copied().zip(t_signature(kk - 1)).collect();
    // The l-part is a T-type sum when depths share parity, S-type otherwise.
    let lsig = if (kk + ll).is_multiple_of(2) { t_signature(ll - 1) } else { s_signature(ll - 1) };
    let lin: Vec<(u32, i8)> = l[..ll - 1].iter().copied().zip(lsig).collect();
    let outer_eps: i8 = if kk.is_multiple_of(2) { 1 } else { -1 };
    let mut out = LinComb::zero();
    for (seq, c) in mmv_series_product(&kin, &lin).iter() {
        let mut s = seq.clone();
        s.push((outer_exp, outer_eps));
        out.add_term(Index::from_pairs(&s), c.clone());
    }
    Ok(out)
}

pub fn eval_conv_t(k: &[u32], l: &[u32], digits: u32) -> Result<BigReal> {
    let lc = reduce_conv_t(k, l)?;
    let bits = bits_for(digits, 10);
    let mut acc = BigReal::zero(bits);
    for (idx, c) in lc.iter() {
        acc += &eval_index(idx, digits + 2)?.mul_ratio(c);
    }
    Ok(acc.with_bits(bits))
}

/// T-word of k: ω0^{k_r−1}ω− ⋯ ω0^{k_1−1}ω−, outermost first.
fn t_forms(k: &[u32]) -> Vec<Form> {
    let mut f = Vec::new();
    for &kj in k.iter().rev() {
        f.extend(std::iter::repeat_n(Form::O, (kj - 1) as usize));
        f.push(Form::N);
    }
    f
}

/// log-power series: entry j holds the coefficients of u^n·log^j(u).
type LogSeries = Vec<Coeffs>;

fn fact(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, b| a * b)
}

/// Antiderivative of σ^m log^j σ with m ≥ 0, accumulated into `out`.
fn add_antiderivative(out: &mut LogSeries, m: usize, j: usize, coef: &BigInt) {
    let len = out[0].len();
    if m + 1 >= len {
        return;
    }
    let jf = fact(j);
    for i in 0..=j {
        let num = coef * (&jf / fact(j - i));
        let den = BigInt::from(m as u64 + 1).pow(i as u32 + 1);
        let t = num / den;
        if i % 2 == 0 {
            out[j - i][m + 1] += t;
        } else {
            out[j - i][m + 1] -= t;
        }
    }
}

fn ensure_depth(s: &mut LogSeries, j: usize, len: usize) {
    while s.len() <= j {
        s.push(vec![BigInt::zero(); len]);
    }
}

/// Φ with Φ' = φ·F, φ = 1/σ (`inv`) or 2/(1−σ²).
fn antiderivative(f: &LogSeries, inv: bool) -> LogSeries {
    let len = f[0].len();
    let mut out: LogSeries = vec![vec![BigInt::zero(); len]; f.len() + 1];
    for (j, row) in f.iter().enumerate() {
        if inv {
            for (n, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if n == 0 {
                    out[j + 1][0] += c / BigInt::from(j as u64 + 1);
                } else {
                    add_antiderivative(&mut out, n - 1, j, c);
                }
            }
        } else {
            let mut h = vec![BigInt::zero(); len];
            for n in 0..len {
                let mut v = &row[n] << 1u32;
                if n >= 2 {
                    v += &h[n - 2];
                }
                h[n] = v;
            }
            for (n, c) in h.iter().enumerate() {
                if !c.is_zero() {
                    add_antiderivative(&mut out, n, j, c);
                }
            }
        }
    }
    while out.len() > 1 && out.last().unwrap().iter().all(|x| x.is_zero()) {
        out.pop();
    }
    out
}

fn eval_log_series(s: &LogSeries, pw: &[BigInt], logc: &BigReal, bits: u32) -> BigReal {
    let mut acc = BigReal::zero(bits);
    let mut lp = BigReal::one(bits);
    for row in s {
        acc += &(&eval_at(row, pw, bits) * &lp);
        lp = &lp * logc;
    }
    acc
}

/// G(u) = A(k; (1−u)/(1+u)) as a log-power series in u, valid on (0, c].
fn a_function_near_one(k: &[u32], len: usize, bits: u32, pw: &[BigInt], logc: &BigReal) -> LogSeries {
    let forms = t_forms(k);
    let tails = series_of(&forms, len, bits);
    let mut g: LogSeries = vec![vec![BigInt::zero(); len]];
    g[0][0] = BigInt::from(1) << bits;
    for i in (0..forms.len()).rev() {
        // forms[i] is the outer letter of the tail forms[i..].
        let inv = forms[i] == Form::N;
        let phi = antiderivative(&g, inv);
        let at_c = eval_at(&tails[i], pw, bits);
        let phi_c = eval_log_series(&phi, pw, logc, bits);
        let constant = &at_c + &phi_c;
        let mut next: LogSeries = phi.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        ensure_depth(&mut next, 0, len);
        next[0][0] += constant.mantissa();
        g = next;
    }
    g
}

fn mul_series(a: &[BigInt], b: &[BigInt], bits: u32) -> Coeffs {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    for v in out.iter_mut() {
        *v = &*v >> bits;
    }
    out
}

/// A(k; x) = 2^r Σ x^{n_r} / (n_1^{k_1}⋯n_r^{k_r}) over n_i ≡ i mod 2.
pub fn eval_a(k: &[u32], x: &BigReal, digits: u32) -> Result<BigReal> {
    if k.is_empty() || k.contains(&0) {
        return domain("A needs a nonempty composition");
    }
    let bits = bits_for(digits, 14 + k.iter().sum::<u32>());
    let one = BigReal::one(bits);
    let x = x.with_bits(bits);
    if x >= one {
        return domain("A(k; x) needs x < 1");
    }
    let r = k.len();
    let sign_flip = x.is_negative() && r % 2 == 1;
    let ax = x.abs();
    let out = if ax > one {
        return domain("A(k; x) needs x ≥ −1");
    } else if ax == one {
        if *k.last().unwrap() < 2 {
            return domain("A(k; −1) diverges for k_r = 1");
        }
        eval_index(&t_index(k)?, digits + 2)?.with_bits(bits)
    } else {
        let c = sqrt2_minus_1(bits);
        let len = series_len(digits + 4, k.iter().sum::<u32>() as usize);
        let forms = t_forms(k);
        if ax <= c {
            let tails = series_of(&forms, len, bits);
            eval_at(&tails[0], &powers(&ax, len), bits)
        } else {
            let u = (&one - &ax).div(&(&one + &ax));
            let pw = powers(&c, len);
            let logc = ln(&c)?;
            let g = a_function_near_one(k, len, bits, &pw, &logc);
            eval_log_series(&g, &powers(&u, len), &ln(&u)?, bits)
        }
    };
    let out = if sign_flip { -out } else { out };
    Ok(out.with_bits(bits_for(digits, 10)))
}

/// ψ(k; p+1) = (−1)^p/p! ∫_0^1 log^p((1−x)/(1+x)) A(k;x) dx/x, split at x = c.
///
/// On [0,c] everything is a power series in x. On [c,1] the substitution
/// u = (1−x)/(1+x) turns the integrand into log^p(u)·A·2/(1−u²) with A a
/// log-power series in u, integrated termwise.
pub fn eval_psi_series(k: &[u32], p: u32, digits: u32) -> Result<BigReal> {
    if k.is_empty() || k.contains(&0) {
        return domain("psi needs a nonempty composition");
    }
    if p < 1 {
        return domain("psi series evaluation needs s = p+1 ≥ 2");
    }
    let w = k.iter().sum::<u32>() + p;
    let bits = bits_for(digits, 16 + w);
    let len = series_len(digits + 6, w as usize);
    let c = sqrt2_minus_1(bits);
    let pw = powers(&c, len);
    let logc = ln(&c)?;
    let forms = t_forms(k);

    // I1 on [0, c].
    let tails = series_of(&forms, len, bits);
    let a = &tails[0];
    let mut a_over_x = vec![BigInt::zero(); len];
    a_over_x[..len - 1].clone_from_slice(&a[1..len]);
    let mut l = vec![BigInt::zero(); len];
    let mut j = 1;
    while j < len {
        l[j] = -((BigInt::from(2) << bits) / BigInt::from(j));
        j += 2;
    }
    let mut integrand = a_over_x;
    for _ in 0..p {
        integrand = mul_series(&integrand, &l, bits);
    }
    let mut i1 = BigInt::zero();
    for n in 0..len - 1 {
        if !integrand[n].is_zero() {
            i1 += (&integrand[n] * &pw[n + 1]) / BigInt::from(n + 1);
        }
    }
    let i1 = BigReal::from_mantissa(i1 >> bits, bits);

    // I2 on [0, c] in u.
    let g = a_function_near_one(k, len, bits, &pw, &logc);
    let mut shifted: LogSeries = vec![vec![BigInt::zero(); len]; p as usize];
    shifted.extend(g);
    let phi = antiderivative(&shifted, false);
    let i2 = eval_log_series(&phi, &pw, &logc, bits);

    let mut v = &i1 + &i2;
    if p % 2 == 1 {
        v = -v;
    }
    Ok(v.div_int(fact(p as usize)).with_bits(bits_for(digits, 10)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeval::consts::{log2, pi, zeta};

    fn close(a: &BigReal, b: &BigReal, e: i32) -> bool {
        (a - b).abs_lt_pow10(e)
    }

    #[test]
    fn named_values() {
        let d = 40;
        let b = bits_for(d, 10);
        let p2 = pi(b).square();
        assert!(close(&eval_value(&NamedValue::T(vec![2]), d).unwrap(), &p2.div_int(4), -38));
        assert!(close(&eval_value(&NamedValue::SmallT(vec![2]), d).unwrap(), &p2.div_int(8), -38));
        let m = Index::from_signed(&[-1, 2]).unwrap();
        let z3 = zeta(3, b).unwrap();
        assert!(close(&eval_value(&NamedValue::M(m), d).unwrap(), &z3.mul_int(7).div_int(4), -38));
        let z = AltIndex::from_signed(&[-1]).unwrap();
        assert!(close(&eval_value(&NamedValue::Zeta(z), d).unwrap(), &-log2(b), -38));
        // ζ(2,1) = ζ(3)... in our order ζ(1,2) = Σ_{m1<m2} 1/(m1 m2²) = ζ(3).
        let z = AltIndex::from_signed(&[1, 2]).unwrap();
        assert!(close(&eval_value(&NamedValue::Zeta(z), d).unwrap(), &z3, -38));
    }

    #[test]
    fn alternating_double_known() {
        // ζ(1̄,2) = Σ_{m<n} (−1)^m/(m n²) = ζ(3)/8 − π²/4·log2 ... checked against the naive sum instead.
        let d = 30;
        let a = AltIndex::from_signed(&[-1, 2]).unwrap();
        let v = eval_alt(&a, d).unwrap().to_f64();
        let mut s = 0.0f64;
        let mut inner = 0.0f64;
        for n in 1..200000u64 {
            s += inner / (n as f64 * n as f64);
            inner += if n % 2 == 0 { 1.0 } else { -1.0 } / n as f64;
        }
        assert!((v - s).abs() < 1e-5, "{v} {s}");
    }

    #[test]
    fn conv_t_reductions() {
        // T(k ⊛ (1)) = T(k₊)
        for k in [vec![1u32], vec![2], vec![1, 1], vec![2, 1, 1]] {
            let lc = reduce_conv_t(&k, &[1]).unwrap();
            let mut kp = k.clone();
            *kp.last_mut().unwrap() += 1;
            assert_eq!(lc, LinComb::single(t_index(&kp).unwrap()));
        }
        // T((1) ⊛ l_{2p}) = S((l_{2p})₊)
        let lc = reduce_conv_t(&[1], &[1, 1]).unwrap();
        assert_eq!(lc, LinComb::single(s_index(&[1, 2]).unwrap()));
        assert!(reduce_conv_t(&[], &[1]).is_err());
    }

    #[test]
    fn a_function() {
        let d = 30;
        let b = bits_for(d, 10);
        for (n, den) in [(1i64, 5i64), (3, 5), (9, 10), (-1, 2), (-19, 20)] {
            let x = BigReal::from_frac(n, den, b);
            let one = BigReal::one(b);
            let want = ln(&(&one + &x).div(&(&one - &x))).unwrap();
            let got = eval_a(&[1], &x, d).unwrap();
            assert!(close(&got, &want, -28), "{n}/{den}");
        }
        assert!(eval_a(&[2], &BigReal::zero(b), d).unwrap().is_zero());
        assert!(eval_a(&[2], &BigReal::one(b), d).is_err());
        let m1 = BigReal::from_int(-1, b);
        let t2 = eval_value(&NamedValue::T(vec![2]), d).unwrap();
        assert!(close(&eval_a(&[2], &m1, d).unwrap(), &-t2, -28));
    }

    #[test]
    fn a_function_depth_two_continuity() {
        // The log-series branch and the power-series branch agree around x = c.
        let d = 30;
        let b = bits_for(d, 10);
        let c = sqrt2_minus_1(b);
        let lo = &c - &BigReal::pow10(-6, b);
        let hi = &c + &BigReal::pow10(-6, b);
        let k = [1u32, 2];
        let vlo = eval_a(&k, &lo, d).unwrap();
        let vhi = eval_a(&k, &hi, d).unwrap();
        assert!((&vhi - &vlo).abs_lt_pow10(-4));
        // Compare with a direct partial-sum oracle at x = 0.9.
        let x = 0.9f64;
        let mut s = 0.0;
        let mut inner = 0.0;
        for n in 1..4000u64 {
            if n % 2 == 0 {
                s += 2.0 * inner * x.powi(n as i32) / (n * n) as f64;
            } else {
                inner += 2.0 / n as f64;
            }
        }
        let got = eval_a(&k, &BigReal::from_frac(9, 10, b), d).unwrap().to_f64();
        assert!((got - s).abs() < 1e-10, "{got} {s}");
    }

    #[test]
    fn psi_one_two() {
        let d = 30;
        let b = bits_for(d, 10);
        let want = zeta(3, b).unwrap().mul_int(7).div_int(2);
        let got = eval_psi_series(&[1], 1, d).unwrap();
        assert!(close(&got, &want, -28), "{got:?} {want:?}");
    }
}
