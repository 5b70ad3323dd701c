//! The lower bound `F↓ = (ρ'|ρ') − |(ρ|ρ')|²/(ρ|ρ)` on the quantum Fisher
//! information, its associated Liouville-space QFI and its maximization over
//! initial states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouville::{
    apply_site_product, check_budget, gram_tensor_power, gram_triple, vectorize, ChannelFamily,
    LiouvilleVector,
};
use crate::numerics::{largest_eigval_psd, vdot, ComplexMatrix};
use crate::states::{ghz_state, pure_state, validate_density_matrix, validate_derivative};

/// Relative tolerance for the equality `F↓(ρ₀) = ½‖Gram‖`.
pub const HALF_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    /// F↓
    pub f_lower: f64,
    /// (ρ'|ρ')
    pub term_grad: f64,
    /// |(ρ|ρ')|² / (ρ|ρ)
    pub term_proj: f64,
    /// (ρ|ρ) = tr ρ²
    pub purity: f64,
}

impl BoundResult {
    /// Associated QFI `F̃ = 4F↓/(ρ|ρ)`.
    pub fn associated_qfi(&self) -> f64 {
        4.0 * self.f_lower / self.purity
    }
}

fn bound_from_vectors(v: &[Complex64], vp: &[Complex64]) -> Result<BoundResult> {
    let purity = vdot(v, v).re;
    if !(purity > 0.0) {
        return Err(Error::ZeroOperator);
    }
    let term_grad = vdot(vp, vp).re;
    let overlap = vdot(v, vp);
    let term_proj = (overlap.norm_sqr() / purity).min(term_grad);
    Ok(BoundResult {
        f_lower: term_grad - term_proj,
        term_grad,
        term_proj,
        purity,
    })
}

pub fn lower_bound_from_state(
    rho: &ComplexMatrix,
    rho_prime: &ComplexMatrix,
) -> Result<BoundResult> {
    let d = validate_density_matrix(rho)?;
    validate_derivative(rho_prime, d)?;
    bound_from_vectors(rho.as_slice(), rho_prime.as_slice())
}

fn check_state_dim(rho0: &ComplexMatrix, d: usize) -> Result<()> {
    let got = validate_density_matrix(rho0)?;
    if got != d {
        return Err(Error::DimensionMismatch {
            left: (d, d),
            right: rho0.shape(),
        });
    }
    Ok(())
}

/// F↓ for `ρ_x = Φ̃_x ρ₀`, `ρ'_x = Φ̃'_x ρ₀`.
pub fn lower_bound_from_channel(
    family: &ChannelFamily,
    x: f64,
    rho0: &ComplexMatrix,
) -> Result<BoundResult> {
    check_state_dim(rho0, family.hilbert_dim())?;
    let r = vectorize(rho0)?;
    let v = family.evaluate(x)?.apply(&r)?;
    let vp = family.derivative(x)?.apply(&r)?;
    bound_from_vectors(v.amplitudes(), vp.amplitudes())
}

/// F↓ for `N` independent uses of the channel, `(Φ̃^⊗N)ρ₀` and its product-rule
/// derivative, applied site by site.
pub fn lower_bound_tensor_power(
    family: &ChannelFamily,
    x: f64,
    n: usize,
    rho0: &ComplexMatrix,
) -> Result<BoundResult> {
    let (v, vp) = tensor_power_action(family, x, n, rho0)?;
    bound_from_vectors(&v, &vp)
}

/// `((Φ̃^⊗N)ρ₀, (Φ̃^⊗N)'ρ₀)` as Liouville amplitudes.
pub fn tensor_power_action(
    family: &ChannelFamily,
    x: f64,
    n: usize,
    rho0: &ComplexMatrix,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power needs N >= 1".into()));
    }
    let d = family.hilbert_dim();
    let total = check_budget(d, n)?;
    check_state_dim(rho0, total)?;
    let phi = family.evaluate(x)?;
    let dphi = family.derivative(x)?;
    let r = rho0.as_slice();
    let v = apply_site_product(&vec![phi.matrix(); n], d, r);
    let mut vp = vec![Complex64::new(0.0, 0.0); r.len()];
    for i in 0..n {
        let factors: Vec<&ComplexMatrix> = (0..n)
            .map(|k| if k == i { dphi.matrix() } else { phi.matrix() })
            .collect();
        for (acc, z) in vp.iter_mut().zip(apply_site_product(&factors, d, r)) {
            *acc += z;
        }
    }
    Ok((v, vp))
}

/// `F̃ = 4[(ρ'|ρ')(ρ|ρ) − |(ρ'|ρ)|²]/(ρ|ρ)²`.
pub fn associated_qfi(rho: &ComplexMatrix, rho_prime: &ComplexMatrix) -> Result<f64> {
    let b = lower_bound_from_state(rho, rho_prime)?;
    let p = b.purity;
    let value = 4.0 * (b.term_grad * p - b.term_proj * p) / (p * p);
    Ok(value.max(0.0))
}

/// Bures distance between the normalized Liouville vectors of two operators,
/// `2(1 − |(ρ_a|ρ_b)| / √((ρ_a|ρ_a)(ρ_b|ρ_b)))`.
pub fn bures_distance_liouville(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<f64> {
    if rho_a.shape() != rho_b.shape() {
        return Err(Error::DimensionMismatch {
            left: rho_a.shape(),
            right: rho_b.shape(),
        });
    }
    for m in [rho_a, rho_b] {
        m.ensure_square()?;
        let defect = m.hermitian_defect()?;
        if defect > crate::states::STATE_HERMITIAN_TOL {
            return Err(Error::NonHermitian { asymmetry: defect });
        }
    }
    let (a, b) = (rho_a.as_slice(), rho_b.as_slice());
    let na = vdot(a, a).re;
    let nb = vdot(b, b).re;
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroOperator);
    }
    // 2(1 − |⟨â|b̂⟩|) = ‖â − c b̂‖² with c the conjugate phase of the overlap
    let ov = vdot(a, b);
    let c = if ov.norm() > 0.0 {
        ov.conj() / ov.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let (sa, sb) = (na.sqrt(), nb.sqrt());
    let dist: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x / sa - c * y / sb).norm_sqr())
        .sum();
    Ok(dist.min(2.0))
}

/// Outcome of maximizing F↓ over initial states for `N` channel uses.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalStateResult {
    /// Largest eigenvalue of `(Φ̃^⊗N)'†(Φ̃^⊗N)'`.
    pub norm_bound: f64,
    pub top_eigenspace: Vec<LiouvilleVector>,
    /// A density matrix reaching `½·norm_bound`, if one was found.
    pub initial_state: Option<ComplexMatrix>,
    /// F↓ at `initial_state`.
    pub state_bound: Option<f64>,
}

impl OptimalStateResult {
    pub fn require_state(&self) -> Result<&ComplexMatrix> {
        self.initial_state.as_ref().ok_or(Error::NoPhysicalState)
    }
}

fn reaches_half_norm(value: f64, norm: f64) -> bool {
    (value - 0.5 * norm).abs() <= HALF_NORM_TOL * (0.5 * norm).max(f64::MIN_POSITIVE)
}

/// Pure candidates `(|a⟩ + e^{iθ}|b⟩)/√2` for the largest off-diagonal entry
/// `|a⟩⟨b|` of a top eigenvector.
fn coherence_candidates(u: &[Complex64], dim: usize) -> Vec<ComplexMatrix> {
    let mut best = (0, 0, 0.0);
    for a in 0..dim {
        for b in 0..dim {
            let w = u[a * dim + b].norm();
            if a != b && w > best.2 {
                best = (a, b, w);
            }
        }
    }
    if best.2 == 0.0 {
        return Vec::new();
    }
    let (a, b, _) = best;
    let phase = u[a * dim + b].arg();
    [0.0, -phase, phase]
        .iter()
        .filter_map(|&theta| {
            let mut psi = vec![Complex64::new(0.0, 0.0); dim];
            psi[a] = Complex64::new(1.0, 0.0);
            psi[b] = Complex64::from_polar(1.0, theta);
            pure_state(&psi).ok()
        })
        .collect()
}

/// Maximizes F↓ over all normalized Liouville vectors, `‖(Φ̃^⊗N)'†(Φ̃^⊗N)'‖`,
/// and looks for a physical state that reaches half of it.
///
/// For qubits the GHZ state is tried first; otherwise pure two-level
/// superpositions read off the top eigenvectors. If none reaches the target
/// `initial_state` is `None` and [`OptimalStateResult::require_state`] fails.
pub fn max_bound_over_states(
    family: &ChannelFamily,
    x: f64,
    n: usize,
) -> Result<OptimalStateResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power needs N >= 1".into()));
    }
    let d = family.hilbert_dim();
    let total = check_budget(d, n)?;
    let gram = gram_tensor_power(&gram_triple(family, x)?, n)?;
    let top = largest_eigval_psd(gram.matrix())?;
    let scale = gram.matrix().max_abs();
    if top.value <= 1e-14 * scale.max(1e-300) || top.value == 0.0 {
        return Ok(OptimalStateResult {
            norm_bound: 0.0,
            top_eigenspace: Vec::new(),
            initial_state: None,
            state_bound: None,
        });
    }
    let top_eigenspace = top
        .vectors
        .iter()
        .map(|v| LiouvilleVector::from_amplitudes(v.clone()))
        .collect::<Result<Vec<_>>>()?;

    let mut candidates = Vec::new();
    if d == 2 {
        candidates.push(ghz_state(n)?);
    }
    for u in &top.vectors {
        candidates.extend(coherence_candidates(u, total));
    }
    for rho0 in candidates {
        let value = lower_bound_tensor_power(family, x, n, &rho0)?.f_lower;
        if reaches_half_norm(value, top.value) {
            return Ok(OptimalStateResult {
                norm_bound: top.value,
                top_eigenspace,
                initial_state: Some(rho0),
                state_bound: Some(value),
            });
        }
    }
    Ok(OptimalStateResult {
        norm_bound: top.value,
        top_eigenspace,
        initial_state: None,
        state_bound: None,
    })
}

/// `N²t²η⊥^{2N}`, the maximal Gram eigenvalue of the phase-covariant family
/// in the short-time regime.
pub fn analytic_max_phase_covariant(n: usize, t: f64, eta_perp: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta_perp) {
        return Err(Error::InvalidArgument(format!(
            "eta_perp must lie in [0, 1], got {eta_perp}"
        )));
    }
    let nf = n as f64;
    Ok(nf * nf * t * t * eta_perp.powi(2 * n as i32))
}
