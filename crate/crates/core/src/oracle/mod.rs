//! Independent numerical verification layer: explicit `w_2'` integrands,
//! adaptive quadrature along complex paths with winding-aware branch
//! tracking, contour residues, and loop continuation of the fundamental
//! matrix.

mod contour;
mod integrand;
mod path;
mod quad;

pub use contour::{
    convergence_probe, loop_around, numeric_monodromy_loop, residue_left_split_contour,
    residue_via_contour, w2_value_dche, w2_value_unfolded, ConvergenceReport,
};
pub use integrand::{
    w2prime_dche, w2prime_unfolded, BranchedIntegrand, DcheW2Prime, PlainIntegrand, UnfoldedW2Prime,
};
pub use path::{ComplexPath, Orientation};
pub use quad::{
    integrate_along_path, integrate_along_path_seeded, integrate_real_interval, EndpointHandling,
    PathIntegral, QuadratureConfig,
};
