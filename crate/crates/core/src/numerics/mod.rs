//! Dense complex linear algebra and scalar search primitives.

mod eigen;
mod matrix;
mod scalar;

pub use eigen::{
    herm_eig, largest_eigval_psd, psd_sqrt, Spectrum, TopEigenspace, HERMITIAN_TOL, PSD_TOL,
    TOP_CLUSTER_TOL,
};
pub use matrix::{frobenius_inner, kron, kron_vec, norm, vdot, ComplexMatrix};
pub use scalar::{loglog_slope, minimize_unimodal, solve_root_bisect};

pub use num_complex::Complex64;

pub(crate) fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Binomial coefficient as a float, exact for the ranges used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
