//! High-precision values of every named family.
//!
//! Run with `cargo run --release --example evaluate_values [digits]`.

use mmv_kit::indexcore::{AltIndex, Index};
use mmv_kit::numeval::{eval_value, NamedValue};

fn main() -> mmv_kit::Result<()> {
    let digits: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let values = [
        NamedValue::M(Index::from_signed(&[-2])?),
        NamedValue::M(Index::from_signed(&[-1, 1, 2])?),
        NamedValue::T(vec![1, 2]),
        NamedValue::S(vec![1, 2]),
        NamedValue::SmallT(vec![3]),
        NamedValue::Zeta(AltIndex::from_signed(&[-1, 3])?),
        NamedValue::Psi(vec![1, 2], 3),
        NamedValue::Conv(vec![2], vec![1, 1, 1]),
    ];
    for v in &values {
        println!("{:<18} {}", v.to_string(), eval_value(v, digits)?.to_decimal(digits));
    }
    Ok(())
}
