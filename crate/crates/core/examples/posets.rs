//! 2-posets: the ψ-value poset, its expansion into words and its value.
//!
//! Run with `cargo run --release --example posets`.

use mmv_kit::numeval::values::eval_psi_series;
use mmv_kit::poset2::{count_linear_extensions, expand, poset_value, psi_poset};

fn main() -> mmv_kit::Result<()> {
    for (k, p) in [(vec![1u32], 1u32), (vec![2], 2), (vec![1, 2], 2)] {
        let x = psi_poset(&k, p)?;
        let words = expand(&x)?;
        println!("psi({k:?};{}): {} vertices, {} linear extensions", p + 1, x.len(), count_linear_extensions(&x));
        println!("  expansion: {words}");
        println!("  poset value {}", poset_value(&x, 30)?.to_decimal(30));
        println!("  series      {}", eval_psi_series(&k, p, 30)?.to_decimal(30));
    }
    Ok(())
}
