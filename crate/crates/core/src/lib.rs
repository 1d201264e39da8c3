pub mod error;
pub mod geometry;
pub mod numerics;

pub use error::{Error, Result};
pub use geometry::*;
pub mod asymptotics;
pub mod model_kernels;
pub mod oracle;
pub mod validation;
