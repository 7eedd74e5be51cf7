pub mod analytics;
pub mod bias;
pub mod error;
pub mod estimation;
pub mod generators;
pub mod graph;
pub mod kernel;
pub mod law;
pub mod limit;
pub mod measure;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
