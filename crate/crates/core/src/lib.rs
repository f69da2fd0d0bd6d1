pub mod algebra;
pub mod complexes;
pub mod error;
pub mod fincat;
pub mod linalg;
pub mod modcat;
pub mod quiver;
pub mod repcat;

pub use error::{Error, Result};
