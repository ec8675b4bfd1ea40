//! Geometry of surfaces in 4-space swept by curves on a hypersurface:
//! jet arithmetic, adapted frames, soliton residuals and normal
//! curvature invariants.

pub mod cli;
pub mod expr;
pub mod frame;
pub mod invariants;
pub mod linalg4;
pub mod scalar;
pub mod soliton;
pub mod surface;
pub mod taylor;
