//! Closed forms: log-power integrals, ψ-values in T-values, Z coefficients,
//! convoluted T-values and double S-values.
//!
//! Run with `cargo run --release --example closed_forms`.

use mmv_kit::closedforms::{
    conv_t_in_mtv, eval_closed, msv_double_closed, pi_normal, psi_via_mtv, render, thm_i_closed, zed, ThmICase,
};
use mmv_kit::numeval::{eval_value, NamedValue};

fn main() -> mmv_kit::Result<()> {
    for case in ThmICase::ALL {
        let (a, b) = case.exponents(2, 1);
        let cf = thm_i_closed(case, 2, 1)?;
        println!("int t^{a} log^{b}((1-t)/(1+t)) = {}", render(&cf)?);
    }
    let psi = psi_via_mtv(&[1, 2], 2)?;
    println!("psi(1,2;3) = {}", render(&psi)?);
    println!(
        "  check {} vs {}",
        eval_closed(&psi, 25)?.to_decimal(25),
        eval_value(&NamedValue::Psi(vec![1, 2], 3), 25)?.to_decimal(25)
    );
    for (j, p) in [(1, 1), (1, 2), (1, 3), (2, 4)] {
        println!("Z({j},{p}) = {}", pi_normal(&zed(j, p)?));
    }
    println!("T(2 conv {{1}}_3) = {}", render(&conv_t_in_mtv(&[2], 3)?)?);
    for (p, q) in [(3, 2), (2, 3), (1, 6)] {
        println!("S({p},{q}) = {}", render(&msv_double_closed(p, q)?)?);
    }
    Ok(())
}
