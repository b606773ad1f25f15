//! The measures `‖·‖_K` and `q_K` for product, symmetric and antisymmetric
//! vector families.

mod bracket;
mod closed;
mod compat;
mod estimate;
mod lp;
mod members;
mod spec;
mod verdict;
mod witness;

pub use bracket::{
    q_bracket, BoundMethod, Decomposition, DecompositionTerm, ExtReal, NormBracket,
    SECTOR_LEAK_TOL,
};
pub use closed::q_pure_closed_form;
pub use compat::{
    check_compatibility, check_contraction, check_contraction_ops, CompatibilityReport,
    ContractionReport, ContractionSample,
};
pub use estimate::{estimate_k_norm, NormEstimate};
pub use members::{best_response, default_member, is_member, member_overlap_sup, sample};
pub use spec::{Budget, Family, VSetSpec};
pub use verdict::{fermionic_coupling, verdict, CouplingReport, Status, Verdict};
pub use witness::Witness;
