//! Words, indices and the two products.
//!
//! Run with `cargo run --example words_and_products`.

use mmv_kit::indexcore::{index_to_word, word_to_index, Index};
use mmv_kit::wordalg::{shuffle, stuffle, stuffle_indices, Word};

fn main() -> mmv_kit::Result<()> {
    // M(2,1,3̌) as a word in ω0, ω+, ω−, and back.
    let idx = Index::from_signed(&[2, 1, -3])?;
    let w = index_to_word(&idx)?;
    println!("{idx} <-> {w} <-> {}", word_to_index(&w)?);

    // Series stuffle of two MMVs.
    let a = Index::from_signed(&[1, -3])?;
    let b = Index::from_signed(&[2, -3])?;
    println!("{a} * {b} = {}", stuffle_indices(&a, &b)?);

    // Integral shuffle and the twisted stuffle on words.
    let u = Word::parse("0-")?;
    let v = Word::parse("0+")?;
    println!("{u} sha {v} = {}", shuffle(&u, &v));
    println!("{u} st  {v} = {}", stuffle(&u, &v)?);
    Ok(())
}
