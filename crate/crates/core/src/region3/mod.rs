//! The entropy region of three jointly Gaussian vectors.

pub mod achieve;
pub mod boundary;
pub mod classify;
pub mod fdelta;
pub mod kkt;

pub use achieve::{achieve_in_cone, achieve_pair, AchieveStatus, ConeAchievement};
pub use boundary::{build_boundary_covariance, m123_bounds, random_orthogonal, BoundaryCovarianceSpec, Phi13};
pub use classify::{check_continuous3, conjectured_region_classify, BoundBranch, Classification, Verdict};
pub use fdelta::{f_eval, f_profile, f_profile_table, f_stable, ln_f, y_eval, Delta0, FDeltaProfile, XTriple};
pub use kkt::{boundary_optimize, boundary_optimize_with, kkt_residual, stationary_gamma, BoundaryDiagnostics, OptimizeOptions};
