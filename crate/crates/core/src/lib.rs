pub mod descriptor;
pub mod error;
pub mod hochschild;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod module;
pub mod complexes;
pub mod corpus;
pub mod criteria;
pub mod resolutions;
pub mod ring;

pub use error::{Error, Result};
