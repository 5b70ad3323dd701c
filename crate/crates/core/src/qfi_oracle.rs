//! Reference quantities: exact QFI from the symmetric logarithmic derivative,
//! the exact Bures distance and measurements built on the eigenbasis of ρ'.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{herm_eig, psd_sqrt, ComplexMatrix, HERMITIAN_TOL};
use crate::states::{validate_density_matrix, validate_derivative};

/// Eigenvalue pairs with `λᵢ + λⱼ` at or below this are treated as kernel.
pub const SLD_CUTOFF: f64 = 1e-12;
/// Largest derivative weight tolerated on kernel pairs.
pub const KERNEL_WEIGHT_TOL: f64 = 1e-8;
/// Eigenvalues of ρ' closer than this share one projector.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Outcomes with probability at or below this are excluded from the CFI.
pub const OUTCOME_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SldResult {
    pub sld: ComplexMatrix,
    pub qfi: f64,
    /// Number of unordered eigenvalue pairs `i ≤ j` above the cutoff.
    pub support_dim: usize,
}

/// Solves `ρ' = ½(ρL + Lρ)` in the eigenbasis of ρ; `L` vanishes on the
/// kernel-kernel block.
pub fn exact_qfi(rho: &ComplexMatrix, rho_prime: &ComplexMatrix) -> Result<SldResult> {
    let d = validate_density_matrix(rho)?;
    validate_derivative(rho_prime, d)?;
    let spec = herm_eig(&rho.hermitian_part()?)?;
    let v = &spec.eigenvectors;
    let p = v.adjoint().matmul(&rho_prime.matmul(v)?)?;
    let lam = &spec.eigenvalues;
    let mut l = ComplexMatrix::zeros(d, d);
    let mut qfi = 0.0;
    let mut support_dim = 0;
    for i in 0..d {
        for j in 0..d {
            let s = lam[i] + lam[j];
            let pij = p[(i, j)];
            if s > SLD_CUTOFF {
                l[(i, j)] = pij * (2.0 / s);
                qfi += 2.0 * pij.norm_sqr() / s;
                if i <= j {
                    support_dim += 1;
                }
            } else if pij.norm() > KERNEL_WEIGHT_TOL {
                return Err(Error::UnsupportedDerivative { weight: pij.norm() });
            }
        }
    }
    let sld = v.matmul(&l)?.matmul(&v.adjoint())?.hermitian_part()?;
    Ok(SldResult {
        sld,
        qfi,
        support_dim,
    })
}

/// `d_B² = 2(1 − tr√(√ρ_a ρ_b √ρ_a))`.
pub fn bures_distance_exact(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<f64> {
    let d = validate_density_matrix(rho_a)?;
    let db = validate_density_matrix(rho_b)?;
    if d != db {
        return Err(Error::DimensionMismatch {
            left: rho_a.shape(),
            right: rho_b.shape(),
        });
    }
    let sa = psd_sqrt(&rho_a.hermitian_part()?)?;
    let m = sa.matmul(&rho_b.matmul(&sa)?)?.hermitian_part()?;
    let fidelity = psd_sqrt(&m)?.trace().re.clamp(0.0, 1.0);
    Ok((2.0 * (1.0 - fidelity)).max(0.0))
}

/// A complete set of positive operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    /// Set when some element projects onto a degenerate eigenspace.
    degenerate: bool,
}

impl Povm {
    pub const PSD_TOL: f64 = 1e-10;
    pub const COMPLETENESS_TOL: f64 = 1e-9;

    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_flag(elements, false)
    }

    fn with_flag(elements: Vec<ComplexMatrix>, degenerate: bool) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidArgument("POVM needs at least one element".into()))?;
        let d = first.ensure_square()?;
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &elements {
            if e.shape() != (d, d) {
                return Err(Error::DimensionMismatch {
                    left: (d, d),
                    right: e.shape(),
                });
            }
            let spec = herm_eig(e)?;
            let min = spec.eigenvalues.first().copied().unwrap_or(0.0);
            if min < -Self::PSD_TOL {
                return Err(Error::InvalidArgument(format!(
                    "POVM element has eigenvalue {min:e}"
                )));
            }
            sum = &sum + e;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(d))?;
        if defect > Self::COMPLETENESS_TOL {
            return Err(Error::CompletenessViolation { deviation: defect });
        }
        Ok(Self {
            elements,
            degenerate,
        })
    }

    /// The trivial measurement `{I}`.
    pub fn identity(d: usize) -> Self {
        Self {
            elements: vec![ComplexMatrix::identity(d)],
            degenerate: true,
        }
    }

    /// Rank-1 projectors onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let d = basis.ensure_square()?;
        let elements = (0..d)
            .map(|c| {
                let v: Vec<Complex64> = (0..d).map(|r| basis[(r, c)]).collect();
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Self::new(elements)
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }
}

/// Projectors onto the eigenspaces of ρ'; eigenvalues within
/// [`DEGENERACY_TOL`] are grouped and the result is flagged degenerate.
pub fn optimal_povm_from_rho_prime(rho_prime: &ComplexMatrix) -> Result<Povm> {
    let d = rho_prime.ensure_square()?;
    let defect = rho_prime.hermitian_defect()?;
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian { asymmetry: defect });
    }
    let spec = herm_eig(rho_prime)?;
    let mut elements = Vec::new();
    let mut degenerate = false;
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && spec.eigenvalues[end] - spec.eigenvalues[end - 1] <= DEGENERACY_TOL {
            end += 1;
        }
        degenerate |= end - start > 1;
        let mut proj = ComplexMatrix::zeros(d, d);
        for k in start..end {
            let v = spec.eigenvector(k);
            proj = &proj + &ComplexMatrix::outer(&v, &v);
        }
        elements.push(proj);
        start = end;
    }
    Povm::with_flag(elements, degenerate)
}

fn check_povm_dim(povm: &Povm, m: &ComplexMatrix) -> Result<()> {
    let d = povm.dim();
    if m.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            left: (d, d),
            right: m.shape(),
        });
    }
    Ok(())
}

fn expectation(e: &ComplexMatrix, m: &ComplexMatrix) -> Complex64 {
    // tr(E M) = Σ E_ij M_ji
    let d = e.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += e[(i, j)] * m[(j, i)];
        }
    }
    acc
}

/// `Σ_j |tr(E_j ρ')|²`.
pub fn classical_bound(povm: &Povm, rho_prime: &ComplexMatrix) -> Result<f64> {
    check_povm_dim(povm, rho_prime)?;
    Ok(povm
        .elements
        .iter()
        .map(|e| expectation(e, rho_prime).norm_sqr())
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfiResult {
    pub value: f64,
    /// Outcomes with vanishing probability but nonzero derivative; excluded.
    pub singular_outcomes: Vec<usize>,
}

/// `Σ_j (tr E_jρ')² / tr(E_jρ)` over outcomes with nonzero probability.
pub fn classical_fisher(
    povm: &Povm,
    rho: &ComplexMatrix,
    rho_prime: &ComplexMatrix,
) -> Result<CfiResult> {
    check_povm_dim(povm, rho)?;
    check_povm_dim(povm, rho_prime)?;
    let mut value = 0.0;
    let mut singular_outcomes = Vec::new();
    for (j, e) in povm.elements.iter().enumerate() {
        let p = expectation(e, rho).re;
        let dp = expectation(e, rho_prime).re;
        if p > OUTCOME_CUTOFF {
            value += dp * dp / p;
        } else if dp.abs() > OUTCOME_CUTOFF {
            singular_outcomes.push(j);
        }
    }
    Ok(CfiResult {
        value,
        singular_outcomes,
    })
}
