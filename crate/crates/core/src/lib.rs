pub mod baer;
pub mod dirsys;
pub mod error;
pub mod io;
pub mod linalg;
pub mod module;
pub mod tower;

pub use error::{Error, Result};
