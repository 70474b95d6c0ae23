//! Hochschild homology and cohomology over the coefficient ring.

pub mod bar;
pub mod diagonal;
pub mod hkr;
pub mod kahler;
pub mod table;

pub use bar::bar_oracle;
pub use diagonal::{diagonal_resolution, enveloping, DiagonalResolution, Enveloping, Strategy};
pub use hkr::{hkr_map, HkrReport};
pub use kahler::{differential_forms, exterior_power, kahler, tensor_modules};
pub use table::{
    default_point, hochschild_cohomology, hochschild_homology, Direction, Hochschild, HochschildTable, TableEntry,
    TableOptions,
};
