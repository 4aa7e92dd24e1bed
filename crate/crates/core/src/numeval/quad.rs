//! Tanh-sinh quadrature on [0,1] for integrands with endpoint singularities.

use super::bigreal::BigReal;
use super::consts::{exp, pi};

/// ∫_0^1 f(t) dt. The integrand receives (t, 1−t), both computed without cancellation.
pub fn tanh_sinh<F>(f: F, bits: u32) -> BigReal
where
    F: Fn(&BigReal, &BigReal) -> BigReal,
{
    tanh_sinh_vec(|t, u| vec![f(t, u)], 1, bits).pop().expect("one component")
}

/// Component-wise ∫_0^1 f(t) dt for a vector of `n` integrands sharing nodes.
pub fn tanh_sinh_vec<F>(f: F, n: usize, bits: u32) -> Vec<BigReal>
where
    F: Fn(&BigReal, &BigReal) -> Vec<BigReal>,
{
    let wb = bits + 16;
    let half_pi = pi(wb).shr(1);
    let one = BigReal::one(wb);
    let digits = wb as f64 / std::f64::consts::LOG2_10;
    // Past s_max the nodes sit within 10^{−digits} of an endpoint.
    let s_max = ((digits * std::f64::consts::LN_10 / std::f64::consts::PI).asinh() + 0.5).max(2.0);
    let add_node = |sum: &mut Vec<BigReal>, s: f64| {
        let sr = BigReal::from_ratio(&num_rational::BigRational::from_float(s).unwrap(), wb);
        let es = exp(&sr);
        let sinh = (&es - &es.recip()).shr(1);
        let cosh = (&es + &es.recip()).shr(1);
        let q = exp(&-(&half_pi.shl(1) * &sinh));
        let opq = &one + &q;
        let t = opq.recip();
        let u = q.div(&opq);
        let w = (&(&half_pi * &cosh) * &q.shl(1)).div(&opq.square());
        let (t, u) = (t.with_bits(bits), u.with_bits(bits));
        if w.is_zero() || t.is_zero() || u.is_zero() {
            return;
        }
        for (acc, v) in sum.iter_mut().zip(f(&t, &u)) {
            *acc += &(&v.with_bits(wb) * &w);
        }
    };
    let mut h = 0.5f64;
    let mut sum = vec![BigReal::zero(wb); n];
    add_node(&mut sum, 0.0);
    let mut k = 1;
    while k as f64 * h <= s_max {
        let s = k as f64 * h;
        add_node(&mut sum, s);
        add_node(&mut sum, -s);
        k += 1;
    }
    let tol = BigReal::pow10(-(digits as i32) + 4, wb);
    let scale = |sum: &[BigReal], h: f64| -> Vec<BigReal> {
        let hr = num_rational::BigRational::from_float(h).unwrap();
        sum.iter().map(|x| x.mul_ratio(&hr)).collect()
    };
    let mut est = scale(&sum, h);
    for _level in 0..12 {
        h /= 2.0;
        let mut k = 1;
        while k as f64 * h <= s_max {
            let s = k as f64 * h;
            add_node(&mut sum, s);
            add_node(&mut sum, -s);
            k += 2;
        }
        let next = scale(&sum, h);
        let done = next.iter().zip(&est).all(|(a, b)| (a - b).abs() < tol);
        est = next;
        if done {
            break;
        }
    }
    est.into_iter().map(|x| x.with_bits(bits)).collect()
}
