//! Exact combinatorics for toric fans: lattice normal forms, fan validation,
//! Cox data, the cone complex and its moment-angle homology, stability
//! formulas for degree tuples, and finite simplicial resolution models.
//!
//! ```
//! use toric_core::fan::library::hirzebruch;
//! use toric_core::{primitive_collections, r_min, q_sigma};
//!
//! let fan = hirzebruch(2);
//! assert_eq!(r_min(&fan).unwrap(), 2);
//! assert_eq!(q_sigma(&fan).unwrap() + 1, 2);
//! assert_eq!(primitive_collections(&fan).len(), 2);
//! ```

pub mod cox;
pub mod fan;
pub mod homology;
pub mod lattice;
pub mod resolution;
pub mod srcomplex;
pub mod stability;

pub use cox::{
    cox_data, degree_in_gsigma, gsigma, irrelevant_monomials, primitive_collections, r_min,
    verify_zsigma_decomposition, CoxData, CoxError, IrrelevantMonomial, PrimitiveCollection, QuotientGroup,
};
pub use fan::{
    fundamental_group, is_complete, is_simplicial, is_smooth, validate_fan, Fan, FanError, RationalCone, RaySet,
    SmoothnessReport, ValidationReport, Violation,
};
pub use homology::{AbelianGroup, ChainComplex, HomologyGroups};
pub use lattice::{
    cokernel_structure, integer_kernel_basis, smith_normal_form, CokernelStructure, IntMatrix, SmithDecomposition,
};
pub use resolution::{
    build_nondegenerate, filtration_homology, truncate, verify_resolution_equivalence, FiniteCover, LevelHomology,
    ResolutionError, SimplicialResolution,
};
pub use srcomplex::{
    certify_connectivity, full_skeleton_check, k_sigma, moment_angle_homology, q_sigma, reduced_homology,
    ComplexError, ConnectivityCertificate, SimplicialComplex,
};
pub use stability::{
    a_t_minimum, admissible_degrees, ambient_dimension, bundle_rank, config_space_dimension, e1_support,
    shift_degree, stability_dimension, stability_report, star_dimension, DegreeTuple, ResolutionKind,
    StabilityError, StabilityReport, SupportTable,
};

use thiserror::Error;

/// Any failure raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Cox(#[from] CoxError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}
