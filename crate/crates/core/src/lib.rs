//! Multiple mixed values: word algebra, regularized double shuffle, duality,
//! 2-posets, closed forms and high-precision evaluation.

pub mod closedforms;
pub mod error;
pub mod indexcore;
pub mod lincomb;
pub mod linrel;
pub mod numeval;
pub mod poset2;
pub mod regutils;
pub mod shell;
pub mod wordalg;

pub use error::{Error, Result};
