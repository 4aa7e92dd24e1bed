//! Duality of MMVs with odd signature, checked numerically.
//!
//! Run with `cargo run --example duality`.

use mmv_kit::indexcore::{index_to_word, word_to_index, Index};
use mmv_kit::lincomb::LinComb;
use mmv_kit::numeval::eval_word;
use mmv_kit::wordalg::dual_word;

fn main() -> mmv_kit::Result<()> {
    for v in [&[-1i64, 1, 2][..], &[-3], &[-1, -1, 2], &[-2, 1, 2]] {
        let idx = Index::from_signed(v)?;
        let w = index_to_word(&idx)?;
        let dual = dual_word(&w)?;
        let mut rhs: LinComb<Index> = LinComb::zero();
        let mut value = eval_word(&w, 30)?;
        for (x, c) in dual.iter() {
            rhs.add_term(word_to_index(x)?, c.clone());
            value -= &eval_word(x, 30)?.mul_ratio(c);
        }
        println!("{idx} = {rhs}   (residual {:.1e})", value.to_f64());
    }
    Ok(())
}
