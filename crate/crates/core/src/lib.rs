pub mod asymptotics;
pub mod cli;
pub mod combinatorics;
pub mod discrimination;
pub mod error;
pub mod gram;
pub mod linalg;
mod numeric;
pub mod verify;

pub use error::{BlockTag, Error, Result};
