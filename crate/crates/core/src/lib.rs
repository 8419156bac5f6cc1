pub mod category;
pub mod dot;
pub mod error;
pub mod fpos;
pub mod generate;
pub mod interval;
pub mod json;
pub mod labelled;
pub mod lattice;
pub mod limit;
mod names;
pub mod oracle;
pub mod poset;
pub mod posetal;

pub use error::{Error, Result};
