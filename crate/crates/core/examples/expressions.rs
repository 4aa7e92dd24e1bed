//! The expression language: parse, render and evaluate.
//!
//! Run with `cargo run --release --example expressions`.

use mmv_kit::closedforms::verify_identity;
use mmv_kit::shell::{parse, render_digits};

fn main() -> mmv_kit::Result<()> {
    for src in ["2*T(3) - psi(1;2)", "M(-1,1,2) - (M(-4) + M(-1,-3) - M(-1,3))", "-(log2 + 1/2)*zeta(-1,2)"] {
        let e = parse(src)?;
        println!("{e}  =  {}", render_digits(&e.eval(30)?, 30));
    }
    let v = verify_identity(&parse("S(3,2)")?, &parse("31/4*zeta(5) - 4*zeta(2)*zeta(3)")?, 40)?;
    println!("S(3,2) closed form: residual {:.2e}, pass {}", v.residual.to_f64(), v.pass);
    match parse("M(1,2") {
        Err(e) => println!("error as expected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
