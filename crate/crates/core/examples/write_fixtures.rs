//! Regenerate the identity fixtures under `fixtures/`.
//!
//! Each side is built as a closed form and rendered in the expression grammar,
//! so `mmv-kit verify fixtures/<file>.jsonl` re-checks them numerically.
//!
//! Run with `cargo run --example write_fixtures`.

use mmv_kit::closedforms::{
    cf_const, cf_mul_const, cf_value, pi_normal, render, zed, zed_tilde, zetabar, ClosedForm, Fixture,
};
use mmv_kit::lincomb::{q, LinComb, Q};
use mmv_kit::numeval::consts::zeta_even_over_pi;
use mmv_kit::numeval::NamedValue;
use mmv_kit::regutils::{ConstAtom, ConstComb, ConstMonomial};
use num_bigint::BigInt;
use num_traits::One;
use std::io::Write;

const DIGITS: u32 = 40;

fn ones_then(n: usize, k: u32) -> Vec<u32> {
    let mut v = vec![1; n];
    v.push(k);
    v
}

fn psi(k: Vec<u32>, s: u32) -> ClosedForm {
    cf_value(NamedValue::Psi(k, s))
}

fn conv(k: Vec<u32>, n: usize) -> ClosedForm {
    cf_value(NamedValue::Conv(k, vec![1; n]))
}

fn t(k: Vec<u32>) -> ClosedForm {
    cf_value(NamedValue::T(k))
}

fn atom(a: ConstAtom) -> ConstComb {
    LinComb::single(ConstMonomial::atom(a))
}

/// Z(j, p) written as a·ζ(2p − 2j).
fn z_as_zeta(j: u32, p: u32) -> ConstComb {
    let w = p - j;
    if w == 0 {
        return LinComb::single(ConstMonomial::one());
    }
    let pin = pi_normal(&zed(j, p).unwrap());
    let c = pin.coeff(&ConstMonomial::pow(ConstAtom::Pi, 2 * w as i32));
    LinComb::term(ConstMonomial::atom(ConstAtom::Zeta(2 * w)), c / zeta_even_over_pi(w))
}

/// log^n 2 · Z̃(j, p), which has no negative powers when n ≥ p.
fn z_tilde_scaled(j: u32, p: u32, n: i32) -> ConstComb {
    let lg = LinComb::single(ConstMonomial::pow(ConstAtom::Log2, n));
    zed_tilde(j, p).unwrap().bilinear(&lg, |x, y| LinComb::single(x.mul(y)))
}

/// Σ_{j ≤ p} (ψ({1}_{2m}, k; 2j+1) − 2ζ̄(2j) T({1}_{2m}, k+1)) Z(j, p).
fn psi_dual_odd(k: u32, m: u32, p: u32) -> ClosedForm {
    let mut out = LinComb::zero();
    for j in 1..=p {
        let mut c = psi(ones_then(2 * m as usize, k), 2 * j + 1);
        c.add_scaled(&cf_mul_const(&t(ones_then(2 * m as usize, k + 1)), &zetabar(2 * j)), &q(-2));
        out.add_scaled(&cf_mul_const(&c, &z_as_zeta(j, p)), &q(1));
    }
    out
}

/// log^n 2 · Σ_{j ≤ p} (ψ(κ; s_j) − T(κ ⊛ {1}_{s_j})) Z̃(j, p) with κ = ({1}_{ones}, k).
fn psi_dual_tilde(k: u32, ones: usize, p: u32, shift: u32, n: i32) -> ClosedForm {
    let kappa = ones_then(ones, k);
    let mut out = LinComb::zero();
    for j in 1..=p {
        let s = 2 * j + shift;
        let mut c = psi(kappa.clone(), s);
        c.add_scaled(&conv(kappa.clone(), s as usize), &q(-1));
        out.add_scaled(&cf_mul_const(&c, &z_tilde_scaled(j, p, n)), &q(1));
    }
    out
}

fn t_tilde(n: u32) -> ConstComb {
    mmv_kit::closedforms::t_tilde(n)
}

fn mul(a: &ConstComb, b: &ConstComb) -> ConstComb {
    a.bilinear(b, |x, y| LinComb::single(x.mul(y)))
}

fn pow2(n: u32) -> Q {
    Q::from_integer(BigInt::one() << n)
}

fn fixture(name: String, lhs: &ClosedForm, rhs: &ClosedForm, note: &str) -> Fixture {
    Fixture { name, lhs: render(lhs).unwrap(), rhs: render(rhs).unwrap(), digits: DIGITS, paper_ref: note.into() }
}

fn literal(name: &str, lhs: &str, rhs: &str, note: &str) -> Fixture {
    Fixture { name: name.into(), lhs: lhs.into(), rhs: rhs.into(), digits: DIGITS, paper_ref: note.into() }
}

fn write(path: &str, items: &[Fixture]) {
    let mut f = std::fs::File::create(path).unwrap();
    for x in items {
        writeln!(f, "{}", serde_json::to_string(x).unwrap()).unwrap();
    }
    println!("{path}: {} fixtures", items.len());
}

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

    let mut duality = Vec::new();
    for (k, m, p) in [(2, 1, 1), (2, 1, 2), (1, 1, 2), (3, 1, 2)] {
        duality.push(fixture(
            format!("psi_duality_z_k{k}_m{m}_p{p}"),
            &psi_dual_odd(k, m, p),
            &psi_dual_odd(k, p, m),
            "psi duality from the Z-inversion of T(({1}_2m, k) * {1}_2p+1)",
        ));
    }
    for (k, m, p) in [(2, 1, 2), (3, 1, 2), (2, 1, 3)] {
        let n = m.max(p) as i32;
        duality.push(fixture(
            format!("psi_duality_ztilde_even_k{k}_m{m}_p{p}"),
            &psi_dual_tilde(k, 2 * m as usize - 2, p, 0, n),
            &psi_dual_tilde(k, 2 * p as usize - 2, m, 0, n),
            "psi duality from the Z-tilde inversion at even s, both sides times log2^max(m,p)",
        ));
        duality.push(fixture(
            format!("psi_duality_ztilde_odd_k{k}_m{m}_p{p}"),
            &psi_dual_tilde(k, 2 * m as usize - 1, p, 1, n),
            &psi_dual_tilde(k, 2 * p as usize - 1, m, 1, n),
            "psi duality from the Z-tilde inversion at odd s, both sides times log2^max(m,p)",
        ));
    }
    write(&format!("{dir}/psi_duality.jsonl"), &duality);

    // (1 + (−1)^q) Σ H²_{n−1}/(n − 1/2)^q with Σ = 2^q (M(1,1,q̌) + S(2,q)).
    let mut triple = Vec::new();
    for qq in [2u32, 4] {
        let mut lhs = cf_value(NamedValue::M(mmv_kit::indexcore::Index::from_signed(&[1, 1, -(qq as i64)]).unwrap()));
        lhs.add_scaled(&cf_value(NamedValue::S(vec![2, qq])), &q(1));
        let lhs = lhs.scale(&(pow2(qq + 1)));
        let mut rhs = cf_value(NamedValue::S(vec![2, qq])).scale(&(pow2(qq) * q(2)));
        rhs.add_scaled(&cf_value(NamedValue::S(vec![1, qq + 1])), &(pow2(qq) * q(2 * qq as i64)));
        let mut c = mul(&atom(ConstAtom::Zeta(2)), &t_tilde(qq)).scale(&q(4));
        c.add_scaled(&t_tilde(qq + 2), &-Q::new(BigInt::from(qq * (qq + 1)), BigInt::from(2)));
        for k1 in (1..qq).step_by(2) {
            for k2 in 0..qq - k1 {
                let k3 = qq - 1 - k1 - k2;
                c.add_scaled(&mul(&mul(&t_tilde(k1 + 1), &t_tilde(k2 + 1)), &t_tilde(k3 + 1)), &q(2));
            }
        }
        rhs.add_scaled(&cf_const(&c), &q(1));
        triple.push(fixture(
            format!("harmonic_square_triple_s_q{qq}"),
            &lhs,
            &rhs,
            "parity evaluation of sum H_{n-1}^2/(n-1/2)^q at m = p = 1, with the double S-values S~(2,q) and S~(1,q+1)",
        ));
    }
    write(&format!("{dir}/triple_s.jsonl"), &triple);

    let mut msv = Vec::new();
    for p in 1..=3u32 {
        let lhs = cf_value(NamedValue::S(ones_then(2 * p as usize - 1, 2)));
        let mut rhs = t(vec![2 * p + 1]).scale(&q(2 * p as i64));
        for j in 0..p {
            rhs.add_scaled(&cf_mul_const(&t(vec![2 * j + 2]), &zetabar(2 * p - 1 - 2 * j)), &q(-2));
        }
        msv.push(fixture(
            format!("s_ones_two_p{p}"),
            &lhs,
            &rhs,
            "S({1}_{2p-1}, 2) through T-values and alternating single zeta values",
        ));
    }
    msv.push(literal(
        "s_1112_closed",
        "S(1,1,1,2)",
        "-15/4*log2*zeta(4) - 9/4*zeta(2)*zeta(3) + 31/4*zeta(5)",
        "S(1,1,1,2) in zeta values",
    ));
    msv.push(literal("s_32_closed", "S(3,2)", "31/4*zeta(5) - 4*zeta(2)*zeta(3)", "double S-value of weight 5"));
    for m in 1..=2u32 {
        let b = 2 * m + 1;
        let mut rhs = format!("2*zeta(1,-{b}) - 2*log2*T({b}) - 2*zeta(-1,{b}) + {}*T({})", 2 * m + 1, 2 * m + 2);
        let mut sum = LinComb::zero();
        for j in 0..m {
            sum.add_scaled(&cf_mul_const(&t(vec![2 * j + 3]), &zetabar(2 * m - 1 - 2 * j)), &q(2));
        }
        rhs.push_str(&format!(" - ({})", render(&sum).unwrap()));
        msv.push(literal(
            &format!("s_ones_even_two_m{m}"),
            &format!("S({})", ones_then(2 * m as usize, 2).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            &rhs,
            "S({1}_{2m}, 2) through alternating double zeta values",
        ));
        let mut lhs = LinComb::zero();
        for j in 0..m {
            lhs.add_scaled(&cf_mul_const(&t(vec![2 * j + 3]), &zetabar(2 * m - 2 - 2 * j)), &q(1));
        }
        msv.push(literal(
            &format!("zetabar_t_sum_m{m}"),
            &render(&lhs).unwrap(),
            &format!("zeta(1,-{e}) - log2*T({e}) - zeta(-1,{e}) + {m}*T({})", 2 * m + 1, e = 2 * m),
            "sum of zetabar(2m-2-2j) T(2j+3) through alternating double zeta values",
        ));
    }
    write(&format!("{dir}/msv.jsonl"), &msv);
}
