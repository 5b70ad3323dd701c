//! Density-matrix validation and standard probe states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouville::check_budget;
use crate::numerics::{herm_eig, ComplexMatrix, PSD_TOL};

/// Trace and tracelessness tolerance for states and their derivatives.
pub const TRACE_TOL: f64 = 1e-9;
/// Relative Hermiticity tolerance for state inputs.
pub const STATE_HERMITIAN_TOL: f64 = 1e-9;
/// Largest dimension that gets a full spectral PSD check.
const FULL_PSD_CHECK_DIM: usize = 256;

/// Checks Hermiticity, unit trace and positivity; returns the dimension.
///
/// Above 256 dimensions positivity is only screened through the diagonal
/// and the 2×2 principal minors.
pub fn validate_density_matrix(rho: &ComplexMatrix) -> Result<usize> {
    let d = rho.ensure_square().map_err(|_| {
        Error::InvalidState(format!("density matrix is {}x{}", rho.rows(), rho.cols()))
    })?;
    if d == 0 {
        return Err(Error::InvalidState("empty density matrix".into()));
    }
    let defect = rho.hermitian_defect()?;
    if defect > STATE_HERMITIAN_TOL {
        return Err(Error::InvalidState(format!(
            "not Hermitian (defect {defect:e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    if d <= FULL_PSD_CHECK_DIM {
        let spec = herm_eig(&rho.hermitian_part()?)?;
        let min = spec
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
    } else {
        for i in 0..d {
            let rii = rho[(i, i)].re;
            if rii < -PSD_TOL {
                return Err(Error::InvalidState(format!(
                    "negative diagonal entry {rii:e}"
                )));
            }
            for j in (i + 1)..d {
                if rho[(i, j)].norm_sqr() > rii * rho[(j, j)].re + PSD_TOL {
                    return Err(Error::InvalidState(format!(
                        "2x2 minor ({i},{j}) is negative"
                    )));
                }
            }
        }
    }
    Ok(d)
}

/// Checks that `rho_prime` is a Hermitian, traceless `d × d` operator.
pub fn validate_derivative(rho_prime: &ComplexMatrix, d: usize) -> Result<()> {
    if rho_prime.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            left: (d, d),
            right: rho_prime.shape(),
        });
    }
    let defect = rho_prime.hermitian_defect()?;
    if defect > STATE_HERMITIAN_TOL {
        return Err(Error::InvalidState(format!(
            "derivative not Hermitian (defect {defect:e})"
        )));
    }
    let tr = rho_prime.trace();
    if tr.norm() > TRACE_TOL {
        return Err(Error::NonTraceless { trace: tr.norm() });
    }
    Ok(())
}

pub fn purity(rho: &ComplexMatrix) -> f64 {
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz_ket(n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("GHZ state needs N >= 1".into()));
    }
    let d = check_budget(2, n)?;
    let mut psi = vec![Complex64::new(0.0, 0.0); d];
    psi[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    psi[d - 1] += Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Ok(psi)
}

pub fn ghz_state(n: usize) -> Result<ComplexMatrix> {
    let psi = ghz_ket(n)?;
    Ok(ComplexMatrix::outer(&psi, &psi))
}

pub fn pure_state(psi: &[Complex64]) -> Result<ComplexMatrix> {
    let nrm = crate::numerics::norm(psi);
    if nrm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let psi: Vec<Complex64> = psi.iter().map(|z| z / nrm).collect();
    Ok(ComplexMatrix::outer(&psi, &psi))
}
