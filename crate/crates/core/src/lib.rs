pub mod analysis;
pub mod channel;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod montecarlo;
pub mod params;
pub mod streams;

pub use error::{Error, Result};
