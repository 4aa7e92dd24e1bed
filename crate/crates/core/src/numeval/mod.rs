//! Arbitrary-precision numerics.
//!
//! Every evaluator takes a decimal digit target D and returns a value whose
//! absolute error is below 10^−D. Guard digits are added internally.

pub mod bigreal;
pub mod consts;
pub mod naive;
pub mod partial;
pub mod quad;
pub mod series;
pub mod values;

pub use bigreal::{bits_for, BigReal};
pub use consts::{const_log2, const_pi, const_zeta, const_zetabar};
pub use naive::{eval_word_naive, NaiveValue};
pub use partial::{partial_s, partial_t};
pub use series::{eval_forms, eval_word, Form};
pub use values::{
    eval_a, eval_alt, eval_conv_t, eval_index, eval_psi_series, eval_value, reduce_conv_t, s_index, t_index, NamedValue,
};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;

/// Precision from `MMV_KIT_DIGITS`, falling back to [`DEFAULT_DIGITS`].
pub fn digits_from_env() -> u32 {
    std::env::var("MMV_KIT_DIGITS").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_DIGITS)
}
