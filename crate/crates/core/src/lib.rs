pub mod error;
pub mod logic;
pub mod model;
pub mod qe;
pub mod sample;
pub mod skolem;
pub mod qfield;

pub use error::{Error, Result};
