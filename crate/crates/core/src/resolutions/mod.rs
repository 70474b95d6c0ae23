//! Resolutions of surjections and of modules.

pub mod surjection;
pub mod closed;
pub mod minimal;
pub mod tate;

pub use surjection::Surjection;
pub use closed::{
    comparison_morphism, deviations, is_p_closed, kernel_generators, koszul_h1_generators, tate_stage, ClosednessCertificate,
    DegreeCheck, Deviations,
};
pub use minimal::{minimal_free_resolution, minimal_resolution};
pub use tate::{basis_count, TateElement, TateStage, Variable, Word};
