//! Expression language and command-line front end.

pub mod cli;
pub mod expr;

pub use cli::{exit_code, run};
pub use expr::{parse, render_digits, render_value, Constant, ValueExpr, GUARD_DIGITS};
