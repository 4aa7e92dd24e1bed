//! Exact partial sums: multiple T- and S-harmonic sums, multiple harmonic
//! (star) sums and truncated MMV sums.

use crate::lincomb::{q, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn inv_pow(base: i64, k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::from(base).pow(k))
}

/// Which family of harmonic sums: T starts with an odd index, S with an even one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    T,
    S,
}

/// The table [X_0(k), X_1(k), …, X_n(k)] for X = T_n or S_n.
pub fn partial_table(family: Family, k: &[u32], n: usize) -> Vec<Q> {
    let mut cur: Vec<Q> = vec![q(1); n + 1];
    for (idx, &ki) in k.iter().enumerate() {
        let depth = idx + 1;
        let odd_depth = depth % 2 == 1;
        // T: odd depth uses (2j−1) with j ≤ n; even depth uses (2j) with j ≤ n−1.
        // S: odd depth uses (2j) with j ≤ n−1; even depth uses (2j−1) with j ≤ n.
        let uses_odd = match family {
            Family::T => odd_depth,
            Family::S => !odd_depth,
        };
        let mut next = vec![Q::zero(); n + 1];
        let mut acc = Q::zero();
        for m in 1..=n {
            if uses_odd {
                acc += &cur[m] * inv_pow(2 * m as i64 - 1, ki) * q(2);
                next[m] = acc.clone();
            } else {
                next[m] = acc.clone();
                acc += &cur[m] * inv_pow(2 * m as i64, ki) * q(2);
            }
        }
        next[0] = Q::zero();
        cur = next;
    }
    if k.is_empty() {
        cur[0] = q(1);
    }
    cur
}

pub fn partial_t(k: &[u32], n: usize) -> Q {
    partial_table(Family::T, k, n)[n].clone()
}

pub fn partial_s(k: &[u32], n: usize) -> Q {
    partial_table(Family::S, k, n)[n].clone()
}

/// ζ_n(k) (strict) or ζ*_n(k) (non-strict), tables over n = 0..=nmax.
pub fn mhs_table(k: &[u32], nmax: usize, star: bool) -> Vec<Q> {
    let mut cur: Vec<Q> = vec![q(1); nmax + 1];
    for &ki in k {
        let mut next = vec![Q::zero(); nmax + 1];
        let mut acc = Q::zero();
        for m in 1..=nmax {
            if star {
                acc += &cur[m] * inv_pow(m as i64, ki);
                next[m] = acc.clone();
            } else {
                acc += &cur[m - 1] * inv_pow(m as i64, ki);
                next[m] = acc.clone();
            }
        }
        cur = next;
    }
    cur
}

pub fn mhs(k: &[u32], n: usize) -> Q {
    mhs_table(k, n, false)[n].clone()
}

pub fn mhs_star(k: &[u32], n: usize) -> Q {
    mhs_table(k, n, true)[n].clone()
}

/// M_N(k;ε) = Σ_{m_1<…<m_r≤N} Π (1+ε_j(−1)^{m_j}) / m_j^{k_j}, for N = 0..=nmax.
pub fn mmv_partial_table(k: &[u32], eps: &[i8], nmax: usize) -> Vec<Q> {
    let mut cur: Vec<Q> = vec![q(1); nmax + 1];
    for (&ki, &e) in k.iter().zip(eps) {
        let mut next = vec![Q::zero(); nmax + 1];
        let mut acc = Q::zero();
        for m in 1..=nmax {
            let parity_ok = if m % 2 == 0 { e == 1 } else { e == -1 };
            if parity_ok {
                acc += &cur[m - 1] * inv_pow(m as i64, ki) * q(2);
            }
            next[m] = acc.clone();
        }
        cur = next;
    }
    cur
}
