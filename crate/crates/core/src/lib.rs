pub mod cli;
pub mod contour;
pub mod error;
pub mod exactalg;
pub mod qseries;
pub mod registry;
pub mod summation;
pub mod trace;

pub use error::{Error, Result};
