//! Shuffle and stuffle regularization, the comparison map and one
//! regularized double shuffle relation.
//!
//! Run with `cargo run --example regularization`.

use mmv_kit::regutils::{reg_dbsf, reg_shuffle, reg_stuffle, rho_map, series_word_to_integral};
use mmv_kit::wordalg::Word;

fn main() -> mmv_kit::Result<()> {
    for s in ["-", "+", "-0-", "+-"] {
        let w = Word::parse(s)?;
        println!("word {w}");
        println!("  shuffle-regularized: {}", reg_shuffle(&w)?);
        let st = reg_stuffle(&w)?;
        println!("  stuffle-regularized: {st}");
        println!("  rho of that:         {}", rho_map(&st));
    }
    let r = reg_dbsf(&Word::parse("-0-")?)?;
    println!("relation from {}: {} = 0", r.word, r.poly);
    println!("(series word 0-+ is integral word {})", series_word_to_integral(&Word::parse("0-+")?)?);
    Ok(())
}
