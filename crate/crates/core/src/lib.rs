pub mod canonical;
pub mod classify;
pub mod error;
pub mod linalg;
pub mod operator;
pub mod rng;
pub mod space;
pub mod spectral;
pub mod synthesis;
pub mod tolerance;

pub use tolerance::Tolerances;

pub use error::{KreinError, Result};
