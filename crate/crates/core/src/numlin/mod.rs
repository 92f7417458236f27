//! Dense complex linear-algebra kernel: eigenstructure of single matrices
//! and commuting families, matrix exponential/logarithm, subspace geometry
//! and Ad-norms.

mod adnorm;
mod eig;
mod expm;
mod subspace;

pub use adnorm::{ad_norm, kron};
pub use eig::{
    check_unit_modulus, commutator_residual, joint_eigenblocks, joint_eigenblocks_with_tol,
    spectrum, spectrum_with_tol, JointEigenblock, CLUSTER_TOL,
};
pub use expm::{cscale, log_unipotent, matrix_exp};
pub use subspace::{
    check_finite, condition_number, gap_distance, orthonormalize, spectral_norm, InnerProduct,
    Subspace, RANK_TOL,
};
