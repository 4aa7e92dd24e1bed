//! Direct truncated summation, kept as an independent test oracle.

use super::bigreal::BigReal;
use crate::error::{domain, Result};
use crate::indexcore::word_to_index;
use crate::wordalg::Word;
use num_bigint::BigInt;

/// Truncated sum over indices ≤ `cutoff` together with an upper bound on the discarded tail.
pub struct NaiveValue {
    pub value: BigReal,
    pub tail_bound: f64,
}

pub fn eval_word_naive(w: &Word, cutoff: usize) -> Result<NaiveValue> {
    if !w.is_admissible() {
        return domain(format!("word {w} is not admissible"));
    }
    let idx = word_to_index(w)?;
    let bits = 160;
    let r = idx.depth();
    // level[j] = Σ over chains of length j ending at or below the current m.
    let mut level = vec![BigReal::zero(bits); r + 1];
    level[0] = BigReal::one(bits);
    for m in 1..=cutoff {
        let even = m % 2 == 0;
        for j in (1..=r).rev() {
            let e = idx.eps[j - 1];
            if (e == 1) == even {
                let den = BigInt::from(m).pow(idx.k[j - 1]);
                let add = level[j - 1].mul_int(2).div_int(den);
                level[j] += &add;
            }
        }
    }
    let value = level[r].clone();
    let tail_bound = if cutoff == 0 { f64::INFINITY } else { tail(r, idx.k[r - 1], cutoff as f64) };
    Ok(NaiveValue { value, tail_bound })
}

/// ∫_N^∞ 2^r (1+ln x)^{r−1} x^{−k} dx, which dominates the discarded terms.
fn tail(r: usize, k: u32, n: f64) -> f64 {
    let a = (r - 1) as i32;
    let km1 = (k - 1) as f64;
    let l = 1.0 + n.ln();
    let mut s = 0.0;
    let mut fall = 1.0;
    for j in 0..=a {
        s += fall * l.powi(a - j) / km1.powi(j + 1);
        fall *= (a - j) as f64;
    }
    2f64.powi(r as i32) * s * n.powf(-km1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cutoff() {
        let v = eval_word_naive(&Word::parse("0-").unwrap(), 0).unwrap();
        assert!(v.value.is_zero());
        assert!(v.tail_bound.is_infinite());
    }

    #[test]
    fn lambda_two() {
        let v = eval_word_naive(&Word::parse("0-").unwrap(), 20000).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 4.0;
        assert!((v.value.to_f64() - exact).abs() <= v.tail_bound);
        assert!(v.tail_bound < 1e-3);
    }
}
