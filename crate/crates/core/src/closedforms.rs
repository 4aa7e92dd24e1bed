//! Closed-form evaluations and the identity-verification harness.
//!
//! A [`ClosedForm`] is a rational combination of (constant monomial × value
//! symbol). Constants are log 2, π, ζ(n) and alternating zeta atoms; symbols
//! are named values such as T(k), S(k), ψ(k; s) and T(k ⊛ l).

use crate::error::{domain, Error, Result};
use crate::indexcore::{b_coeff, compositions, dual_composition, plus_index};
use crate::lincomb::{q, qf, LinComb, Q};
use crate::numeval::consts::{ln, zeta_even_over_pi};
use crate::numeval::partial::{partial_s, partial_t};
use crate::numeval::quad::tanh_sinh_vec;
use crate::numeval::{bits_for, eval_value, BigReal, NamedValue};
use crate::regutils::{eval_const_comb, ConstAtom, ConstComb, ConstMonomial};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Value symbol of a closed form. `One` marks a pure constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    One,
    V(NamedValue),
}

pub type ClosedForm = LinComb<(ConstMonomial, Sym)>;

pub fn cf_const(c: &ConstComb) -> ClosedForm {
    c.iter().map(|(m, x)| ((m.clone(), Sym::One), x.clone())).collect()
}

pub fn cf_value(v: NamedValue) -> ClosedForm {
    LinComb::single((ConstMonomial::one(), Sym::V(v)))
}

pub fn cf_rational(x: Q) -> ClosedForm {
    LinComb::term((ConstMonomial::one(), Sym::One), x)
}

/// Product of a closed form with a constant combination.
pub fn cf_mul_const(cf: &ClosedForm, c: &ConstComb) -> ClosedForm {
    let mut out = LinComb::zero();
    for ((m, s), x) in cf.iter() {
        for (n, y) in c.iter() {
            out.add_term((m.mul(n), s.clone()), x * y);
        }
    }
    out
}

fn const_mul(a: &ConstComb, b: &ConstComb) -> ConstComb {
    a.bilinear(b, |x, y| LinComb::single(x.mul(y)))
}

/// True when every term is a pure constant.
pub fn is_constant(cf: &ClosedForm) -> bool {
    cf.basis().all(|(_, s)| *s == Sym::One)
}

/// The constant part of a closed form with only `One` symbols.
pub fn constant_part(cf: &ClosedForm) -> Result<ConstComb> {
    let mut out = LinComb::zero();
    for ((m, s), x) in cf.iter() {
        if *s != Sym::One {
            return Err(Error::Validation(format!("{} is not a constant", render_sym(s))));
        }
        out.add_term(m.clone(), x.clone());
    }
    Ok(out)
}

/// Replace every ψ(k; s) symbol.
pub fn substitute_psi(cf: &ClosedForm, mut f: impl FnMut(&[u32], u32) -> Result<ClosedForm>) -> Result<ClosedForm> {
    let mut out = LinComb::zero();
    for ((m, s), x) in cf.iter() {
        match s {
            Sym::V(NamedValue::Psi(k, sv)) => {
                let sub = f(k, *sv)?;
                out.add_scaled(&cf_mul_const(&sub, &LinComb::single(m.clone())), x);
            }
            _ => out.add_term((m.clone(), s.clone()), x.clone()),
        }
    }
    Ok(out)
}

/// Anything that evaluates to a real number at a digit target.
pub trait Evaluable {
    fn eval_at(&self, digits: u32) -> Result<BigReal>;
}

impl Evaluable for ClosedForm {
    fn eval_at(&self, digits: u32) -> Result<BigReal> {
        eval_closed(self, digits)
    }
}

pub fn eval_closed(cf: &ClosedForm, digits: u32) -> Result<BigReal> {
    let bits = bits_for(digits, 10);
    let work = digits + 4;
    let mut consts: HashMap<&ConstMonomial, BigReal> = HashMap::new();
    let mut values: HashMap<&NamedValue, BigReal> = HashMap::new();
    let mut acc = BigReal::zero(bits);
    for ((m, s), x) in cf.iter() {
        if !consts.contains_key(m) {
            consts.insert(m, m.eval(work)?);
        }
        let mut t = consts[m].with_bits(bits);
        if let Sym::V(v) = s {
            if !values.contains_key(v) {
                values.insert(v, eval_value(v, work)?);
            }
            t = &t * &values[v].with_bits(bits);
        }
        acc += &t.mul_ratio(x);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Conventions

/// ζ(n) with ζ(0) = −1/2 and ζ(1) = 0.
pub fn zeta_c(n: u32) -> ConstComb {
    match n {
        0 => LinComb::term(ConstMonomial::one(), qf(-1, 2)),
        1 => LinComb::zero(),
        _ => LinComb::single(ConstMonomial::atom(ConstAtom::Zeta(n))),
    }
}

/// ζ̄(n) = −ζ(n̄) = (1 − 2^{1−n}) ζ(n), with ζ̄(0) = 1/2 and ζ̄(1) = log 2.
pub fn zetabar(n: u32) -> ConstComb {
    match n {
        0 => LinComb::term(ConstMonomial::one(), qf(1, 2)),
        1 => LinComb::single(ConstMonomial::atom(ConstAtom::Log2)),
        _ => {
            let c = q(1) - Q::new(BigInt::one(), BigInt::one() << (n - 1));
            LinComb::term(ConstMonomial::atom(ConstAtom::Zeta(n)), c)
        }
    }
}

/// t̃(n) = 2^n t(n) = (2^n − 1) ζ(n), with t̃(1) = 2 log 2.
pub fn t_tilde(n: u32) -> ConstComb {
    match n {
        0 => unreachable!("t̃(0) is never requested"),
        1 => LinComb::term(ConstMonomial::atom(ConstAtom::Log2), q(2)),
        _ => LinComb::term(ConstMonomial::atom(ConstAtom::Zeta(n)), Q::from_integer((BigInt::one() << n) - 1)),
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * i)
}

fn binom(n: i64, k: i64) -> Q {
    if k < 0 || n < k {
        return Q::zero();
    }
    Q::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

fn ones(n: usize) -> Vec<u32> {
    vec![1; n]
}

/// ζ(2k) ↦ r·π^{2k} throughout.
pub fn pi_normal(c: &ConstComb) -> ConstComb {
    let mut out = LinComb::zero();
    for (m, x) in c.iter() {
        let mut rest = ConstMonomial::one();
        let mut coeff = x.clone();
        for (a, &e) in m.atoms() {
            match a {
                ConstAtom::Zeta(n) if n % 2 == 0 && e > 0 => {
                    let r = zeta_even_over_pi(n / 2);
                    for _ in 0..e {
                        coeff *= &r;
                    }
                    rest = rest.mul(&ConstMonomial::pow(ConstAtom::Pi, *n as i32 * e));
                }
                _ => rest = rest.mul(&ConstMonomial::pow(a.clone(), e)),
            }
        }
        out.add_term(rest, coeff);
    }
    out
}

// ---------------------------------------------------------------------------
// Log-power integrals

/// The four parity cases of ∫₀¹ t^a log^b((1−t)/(1+t)) dt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThmICase {
    /// t^{2n−2}, log^{2m}
    EE,
    /// t^{2n−2}, log^{2m−1}
    EO,
    /// t^{2n−1}, log^{2m}
    OE,
    /// t^{2n−1}, log^{2m−1}
    OO,
}

impl ThmICase {
    pub const ALL: [ThmICase; 4] = [ThmICase::EE, ThmICase::EO, ThmICase::OE, ThmICase::OO];

    /// (power of t, power of the logarithm).
    pub fn exponents(self, n: u32, m: u32) -> (u32, u32) {
        match self {
            ThmICase::EE => (2 * n - 2, 2 * m),
            ThmICase::EO => (2 * n - 2, 2 * m - 1),
            ThmICase::OE => (2 * n - 1, 2 * m),
            ThmICase::OO => (2 * n - 1, 2 * m - 1),
        }
    }
}

impl FromStr for ThmICase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ee" => Ok(ThmICase::EE),
            "eo" => Ok(ThmICase::EO),
            "oe" => Ok(ThmICase::OE),
            "oo" => Ok(ThmICase::OO),
            _ => Err(Error::Validation(format!("invalid case tag {s:?}"))),
        }
    }
}

impl fmt::Display for ThmICase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ThmICase::EE => "ee",
            ThmICase::EO => "eo",
            ThmICase::OE => "oe",
            ThmICase::OO => "oo",
        };
        write!(f, "{s}")
    }
}

/// Closed form of the log-power integral, with T_n and S_n as exact rationals.
pub fn thm_i_closed(case: ThmICase, n: u32, m: u32) -> Result<ClosedForm> {
    if n == 0 || m == 0 {
        return domain("the log-power integral needs n, m ≥ 1");
    }
    let nn = n as usize;
    let mut out = LinComb::zero();
    let tn = |j: usize| partial_t(&ones(j), nn);
    let sn = |j: usize| partial_s(&ones(j), nn);
    let f2m = Q::from_integer(factorial(2 * m));
    let f2m1 = Q::from_integer(factorial(2 * m - 1));
    let odd = q(2 * n as i64 - 1);
    match case {
        ThmICase::EE => {
            let pre = q(2) * &f2m / &odd;
            for j in 0..=m {
                out.add_scaled(&zetabar(2 * m - 2 * j), &(&pre * tn(2 * j as usize)));
            }
        }
        ThmICase::EO => {
            let pre = -(q(2) * &f2m1 / &odd);
            for j in 0..m {
                out.add_scaled(&zetabar(2 * m - 1 - 2 * j), &(&pre * tn(2 * j as usize)));
            }
            out.add_term(ConstMonomial::one(), -(&f2m1 / &odd) * sn(2 * m as usize - 1));
        }
        ThmICase::OE => {
            let pre = &f2m / q(n as i64);
            for j in 0..m {
                out.add_scaled(&zetabar(2 * m - 1 - 2 * j), &(&pre * tn(2 * j as usize + 1)));
            }
            out.add_term(ConstMonomial::one(), &f2m / q(2 * n as i64) * sn(2 * m as usize));
        }
        ThmICase::OO => {
            let pre = -(&f2m1 / q(n as i64));
            for j in 0..m {
                out.add_scaled(&zetabar(2 * m - 2 - 2 * j), &(&pre * tn(2 * j as usize + 1)));
            }
        }
    }
    Ok(cf_const(&out))
}

/// ∫₀¹ t^a log^b((1−t)/(1+t)) dt by tanh-sinh quadrature.
pub fn log_power_integral(a: u32, b: u32, digits: u32) -> Result<BigReal> {
    Ok(log_power_integrals(a, b, digits)?.swap_remove((a * (b + 1) + b) as usize))
}

/// The table of ∫₀¹ t^a log^b((1−t)/(1+t)) dt for a ≤ amax, b ≤ bmax, indexed
/// by a·(bmax+1) + b, from one shared set of quadrature nodes.
pub fn log_power_integrals(amax: u32, bmax: u32, digits: u32) -> Result<Vec<BigReal>> {
    let bits = bits_for(digits, 16);
    let one = BigReal::one(bits);
    let n = ((amax + 1) * (bmax + 1)) as usize;
    // Nodes lie strictly inside (0, 1), so the logarithm is defined.
    let v = tanh_sinh_vec(
        |t, u| {
            let l = match ln(&u.div(&(&one + t))) {
                Ok(l) => l,
                Err(_) => return vec![BigReal::zero(bits); n],
            };
            let mut out = Vec::with_capacity(n);
            let mut ta = one.clone();
            for _ in 0..=amax {
                let mut x = ta.clone();
                for _ in 0..=bmax {
                    out.push(x.clone());
                    x = &x * &l;
                }
                ta = &ta * t;
            }
            out
        },
        n,
        bits,
    );
    Ok(v.into_iter().map(|x| x.with_bits(bits_for(digits, 10))).collect())
}

// ---------------------------------------------------------------------------
// ψ-values

fn conv_ones(k: &[u32], n: usize) -> ClosedForm {
    cf_value(NamedValue::Conv(k.to_vec(), ones(n)))
}

fn cf_zetabar_times(n: u32, cf: &ClosedForm, scale: Q) -> ClosedForm {
    cf_mul_const(cf, &zetabar(n).scale(&scale))
}

/// ψ(k; s) through convoluted T-values, selected by the parities of dep(k) and s.
pub fn psi_via_conv_t(k: &[u32], s: u32) -> Result<ClosedForm> {
    if s < 2 {
        return domain("psi_via_conv_t needs s ≥ 2");
    }
    if k.is_empty() || k.contains(&0) {
        return domain("psi_via_conv_t needs a composition");
    }
    let odd_depth = k.len() % 2 == 1;
    let mut out = LinComb::zero();
    match (odd_depth, s.is_multiple_of(2)) {
        (true, true) => {
            let p = s / 2;
            for j in 0..p {
                out.add_scaled(&cf_zetabar_times(2 * p - 1 - 2 * j, &conv_ones(k, 2 * j as usize + 1), q(2)), &q(1));
            }
            out.add_scaled(&conv_ones(k, 2 * p as usize), &q(1));
        }
        (true, false) => {
            let p = s / 2;
            for j in 0..=p {
                out.add_scaled(&cf_zetabar_times(2 * p - 2 * j, &conv_ones(k, 2 * j as usize + 1), q(2)), &q(1));
            }
        }
        (false, true) => {
            let p = s / 2;
            for j in 0..p {
                out.add_scaled(&cf_zetabar_times(2 * p - 2 - 2 * j, &conv_ones(k, 2 * j as usize + 2), q(2)), &q(1));
            }
        }
        (false, false) => {
            let p = s / 2;
            for j in 0..p {
                out.add_scaled(&cf_zetabar_times(2 * p - 1 - 2 * j, &conv_ones(k, 2 * j as usize + 2), q(2)), &q(1));
            }
            out.add_scaled(&conv_ones(k, 2 * p as usize + 1), &q(1));
        }
    }
    Ok(out)
}

/// ψ(k; p+1) = Σ_{|j| = p} b((k₊)*; j) T((k₊)* + j).
pub fn psi_via_mtv(k: &[u32], p: u32) -> Result<ClosedForm> {
    if k.is_empty() || k.contains(&0) || p == 0 {
        return domain("psi_via_mtv needs a composition and p ≥ 1");
    }
    let kstar = dual_composition(&plus_index(k))?;
    let mut out = LinComb::zero();
    for j in compositions(p, kstar.len())? {
        let c = b_coeff(&kstar, &j)?;
        let idx: Vec<u32> = kstar.iter().zip(&j).map(|(a, b)| a + b).collect();
        out.add_term((ConstMonomial::one(), Sym::V(NamedValue::T(idx))), Q::from_integer(c));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Z coefficients and triangular inversion

/// Σ over chains j = i_0 < … < i_k = p of Π step(i_l − i_{l−1}).
fn chain_sum(j: u32, p: u32, step: impl Fn(u32) -> ConstComb) -> ConstComb {
    let len = (p - j) as usize;
    let mut f: Vec<ConstComb> = vec![LinComb::zero(); len + 1];
    f[0] = LinComb::single(ConstMonomial::one());
    for i in 1..=len {
        let mut acc = LinComb::zero();
        for h in 0..i {
            acc.add_scaled(&const_mul(&f[h], &step((i - h) as u32)), &q(1));
        }
        f[i] = acc;
    }
    f.swap_remove(len)
}

/// Z(j, p) = Σ_k (−2)^k Σ_{chains} Π ζ̄(2i_l − 2i_{l−1}), with Z(p, p) = 1.
pub fn zed(j: u32, p: u32) -> Result<ConstComb> {
    if j == 0 || j > p {
        return domain("zed needs 1 ≤ j ≤ p");
    }
    Ok(chain_sum(j, p, |d| zetabar(2 * d).scale(&q(-2))))
}

/// Z̃(j, p) = Σ_k (−1)^k / (2 log^{k+1} 2) Σ_{chains} Π ζ̄(2i_l − 2i_{l−1} + 1).
pub fn zed_tilde(j: u32, p: u32) -> Result<ConstComb> {
    if j == 0 || j > p {
        return domain("zed_tilde needs 1 ≤ j ≤ p");
    }
    let inv_log = ConstMonomial::pow(ConstAtom::Log2, -1);
    let steps = chain_sum(j, p, |d| const_mul(&zetabar(2 * d + 1), &LinComb::single(inv_log.clone())).scale(&q(-1)));
    Ok(const_mul(&steps, &LinComb::term(inv_log.clone(), qf(1, 2))))
}

/// (−1)^w π^{2w} / (2w+1)!.
pub fn zed_closed(w: u32) -> ConstComb {
    let sign = if w.is_multiple_of(2) { 1 } else { -1 };
    let c = Q::new(BigInt::from(sign), factorial(2 * w + 1));
    LinComb::term(ConstMonomial::pow(ConstAtom::Pi, 2 * w as i32), c)
}

/// Solve Σ_{j ≤ p} A_{j,p} B_j = C_p (A_{p,p} = 1) by the alternating chain sum.
///
/// `a[j][p]` is read for j ≤ p only; indices are 0-based.
pub fn invert_triangular(a: &[Vec<Q>], c: &[Q]) -> Result<Vec<Q>> {
    let n = c.len();
    if a.len() < n || a.iter().take(n).any(|r| r.len() < n) {
        return Err(Error::Validation("coefficient family too small".into()));
    }
    for (p, row) in a.iter().enumerate().take(n) {
        if !row[p].is_one() {
            return Err(Error::Validation(format!("A[{p}][{p}] = {} is not 1", row[p])));
        }
    }
    // g[j][p] = Σ_k (−1)^k Σ_{chains j → p} Π A.
    let mut b = vec![Q::zero(); n];
    for j in 0..n {
        let mut g = vec![Q::zero(); n];
        g[j] = Q::one();
        for p in j + 1..n {
            let mut acc = Q::zero();
            for i in j..p {
                acc -= &g[i] * &a[i][p];
            }
            g[p] = acc;
        }
        for p in j..n {
            b[p] += &c[j] * &g[p];
        }
    }
    Ok(b)
}

/// C_p = Σ_{j ≤ p} A_{j,p} B_j.
pub fn forward_substitute(a: &[Vec<Q>], b: &[Q]) -> Vec<Q> {
    (0..b.len()).map(|p| (0..=p).map(|j| &a[j][p] * &b[j]).sum()).collect()
}

// ---------------------------------------------------------------------------
// Convoluted T-values through ψ

/// Which inversion to use for T(k ⊛ {1}_q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvRoute {
    /// Z(j, p) coefficients: odd depth with odd q ≥ 3, or even depth with even q.
    Z,
    /// Z̃(j, p) coefficients: odd depth with odd q, or even depth with even q.
    ZTilde,
}

fn psi_sym(k: &[u32], s: u32) -> ClosedForm {
    cf_value(NamedValue::Psi(k.to_vec(), s))
}

fn t_plus(k: &[u32]) -> ClosedForm {
    cf_value(NamedValue::T(plus_index(k)))
}

/// T(k ⊛ {1}_q) in ψ-values, ζ̄ and Z or Z̃ coefficients.
pub fn conv_t_from_psi(k: &[u32], q_len: u32, route: ConvRoute) -> Result<ClosedForm> {
    if k.is_empty() || k.contains(&0) {
        return domain("conv_t_from_psi needs a composition");
    }
    let odd_depth = k.len() % 2 == 1;
    if odd_depth != (q_len % 2 == 1) {
        return Err(Error::Validation(format!("invalid parity pairing: depth {} with {{1}}_{q_len}", k.len())));
    }
    let mut out = LinComb::zero();
    match (route, odd_depth) {
        (ConvRoute::Z, true) => {
            if q_len < 3 {
                return Err(Error::Validation("the Z route needs q ≥ 3 for odd depth".into()));
            }
            let p = (q_len - 1) / 2;
            for j in 1..=p {
                let mut c = psi_sym(k, 2 * j + 1);
                c.add_scaled(&cf_mul_const(&t_plus(k), &zetabar(2 * j)), &q(-2));
                out.add_scaled(&cf_mul_const(&c, &zed(j, p)?), &q(1));
            }
        }
        (ConvRoute::Z, false) => {
            let p = q_len / 2;
            for j in 1..=p {
                out.add_scaled(&cf_mul_const(&psi_sym(k, 2 * j), &zed(j, p)?), &q(1));
            }
        }
        (ConvRoute::ZTilde, true) => {
            let p = q_len.div_ceil(2);
            for j in 1..=p {
                let mut c = psi_sym(k, 2 * j);
                c.add_scaled(&conv_ones(k, 2 * j as usize), &q(-1));
                out.add_scaled(&cf_mul_const(&c, &zed_tilde(j, p)?), &q(1));
            }
        }
        (ConvRoute::ZTilde, false) => {
            let p = q_len / 2;
            for j in 1..=p {
                let mut c = psi_sym(k, 2 * j + 1);
                c.add_scaled(&conv_ones(k, 2 * j as usize + 1), &q(-1));
                out.add_scaled(&cf_mul_const(&c, &zed_tilde(j, p)?), &q(1));
            }
        }
    }
    Ok(out)
}

/// T(k ⊛ {1}_q) in ψ-values, T(k₊) and single zeta values, for every parity pairing.
pub fn conv_t_in_psi(k: &[u32], q_len: u32) -> Result<ClosedForm> {
    if q_len == 0 {
        return domain("conv_t_in_psi needs q ≥ 1");
    }
    if q_len == 1 {
        return Ok(t_plus(k));
    }
    let odd_depth = k.len() % 2 == 1;
    match (odd_depth, q_len % 2 == 1) {
        (true, true) | (false, false) => conv_t_from_psi(k, q_len, ConvRoute::Z),
        (true, false) => {
            let p = q_len / 2;
            let mut out = psi_sym(k, 2 * p);
            for j in 0..p {
                out.add_scaled(&cf_mul_const(&conv_t_in_psi(k, 2 * j + 1)?, &zetabar(2 * p - 1 - 2 * j)), &q(-2));
            }
            Ok(out)
        }
        (false, true) => {
            let p = q_len / 2;
            let mut out = psi_sym(k, 2 * p + 1);
            for j in 0..p {
                out.add_scaled(&cf_mul_const(&conv_t_in_psi(k, 2 * j + 2)?, &zetabar(2 * p - 1 - 2 * j)), &q(-2));
            }
            Ok(out)
        }
    }
}

/// T(k ⊛ {1}_q) in T-values and single zeta values.
pub fn conv_t_in_mtv(k: &[u32], q_len: u32) -> Result<ClosedForm> {
    substitute_psi(&conv_t_in_psi(k, q_len)?, |kk, s| psi_via_mtv(kk, s - 1))
}

// ---------------------------------------------------------------------------
// Double S-values

/// S̃(p, q) = 2^{p+q−2} S(p, q) for odd p + q, as a combination of zeta values.
pub fn msv_double_tilde(p: u32, qq: u32) -> Result<ConstComb> {
    if p == 0 || qq < 2 {
        return domain("msv_double needs p ≥ 1 and q ≥ 2");
    }
    if (p + qq).is_multiple_of(2) {
        return domain("msv_double needs odd weight");
    }
    let w = (p + qq) as i64;
    let sp: i64 = if p.is_multiple_of(2) { 1 } else { -1 };
    let mut out = LinComb::zero();
    for k in 0..=(p / 2) {
        let c = binom(w - 2 * k as i64 - 1, qq as i64 - 1) * q(2 * sp);
        out.add_scaled(&const_mul(&zeta_c(2 * k), &t_tilde(p + qq - 2 * k)), &c);
    }
    for k in (1..qq).step_by(2) {
        let c = binom(w - k as i64 - 2, p as i64 - 1) * q(2 * sp);
        out.add_scaled(&const_mul(&t_tilde(k + 1), &t_tilde(p + qq - k - 1)), &c);
    }
    if qq.is_multiple_of(2) {
        out.add_scaled(&const_mul(&zeta_c(p), &t_tilde(qq)), &q(-2 * sp));
    }
    // Divide by 1 − (−1)^{p+q} = 2.
    Ok(out.scale(&qf(1, 2)))
}

/// S(p, q) for odd p + q.
pub fn msv_double_closed(p: u32, qq: u32) -> Result<ClosedForm> {
    let t = msv_double_tilde(p, qq)?;
    Ok(cf_const(&t.scale(&Q::new(BigInt::one(), BigInt::one() << (p + qq - 2)))))
}

// ---------------------------------------------------------------------------
// Rendering

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn render_sym(s: &Sym) -> String {
    match s {
        Sym::One => "1".into(),
        Sym::V(v) => v.to_string(),
    }
}

fn render_monomial(m: &ConstMonomial) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (a, &e) in m.atoms() {
        if e < 0 {
            return Err(Error::Validation(format!("cannot render a negative power of {a}")));
        }
        for _ in 0..e {
            out.push(a.to_string());
        }
    }
    Ok(out)
}

/// A closed form in the expression grammar of the command line.
pub fn render(cf: &ClosedForm) -> Result<String> {
    if cf.is_zero() {
        return Ok("0".into());
    }
    let mut out = String::new();
    for (i, ((m, s), x)) in cf.iter().enumerate() {
        let mut factors = render_monomial(m)?;
        if let Sym::V(v) = s {
            factors.push(match v {
                NamedValue::Psi(k, sv) => format!("psi({};{sv})", join(k)),
                _ => v.to_string(),
            });
        }
        let neg = x.is_negative();
        let ax = x.abs();
        let body = if factors.is_empty() {
            ax.to_string()
        } else if ax.is_one() {
            factors.join("*")
        } else {
            format!("{ax}*{}", factors.join("*"))
        };
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Identity verification

/// Outcome of one numeric identity check.
#[derive(Clone, Debug)]
pub struct Verification {
    pub lhs: BigReal,
    pub rhs: BigReal,
    pub residual: BigReal,
    pub tolerance_exp: i32,
    pub pass: bool,
}

/// Compare two sides at `digits`; passes when |lhs − rhs| ≤ 10^{−digits+8}.
pub fn verify_identity<A: Evaluable + ?Sized, B: Evaluable + ?Sized>(
    lhs: &A,
    rhs: &B,
    digits: u32,
) -> Result<Verification> {
    let l = lhs.eval_at(digits)?;
    let r = rhs.eval_at(digits)?;
    let residual = (&l - &r).abs();
    let tolerance_exp = 8 - digits as i32;
    let pass = residual.abs_lt_pow10(tolerance_exp);
    Ok(Verification { lhs: l, rhs: r, residual, tolerance_exp, pass })
}

/// One identity from a JSON-lines fixture file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub digits: u32,
    pub paper_ref: String,
}

pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let f: Fixture =
            serde_json::from_str(line).map_err(|e| Error::Parse { pos: i + 1, msg: format!("fixture line: {e}") })?;
        out.push(f);
    }
    Ok(out)
}

pub fn load_fixtures(path: &Path) -> Result<Vec<Fixture>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_fixtures(&text)
}

/// Numeric value of a constant combination.
pub fn eval_const(c: &ConstComb, digits: u32) -> Result<BigReal> {
    eval_const_comb(c, digits)
}
