//! Correlated dephasing of interleaved two-species qubit registers.
//!
//! The register holds `2N` qubits; odd positions (counting from 1 at the most
//! significant bit) belong to species 1, even positions to species 2. The
//! channel is diagonal in the computational Liouville basis:
//! `|μ)(ν| ↦ exp(i(α₁ω₁ + α₂ω₂)t − α²γt)`, with `α_s = Σ (μᵢ − νᵢ)` over
//! the species-`s` qubits and `α = α₁ + α₂`.
//!
//! The estimated parameter is the mean frequency `ω̄ = ω₁ − ω₂` with ω₂ held
//! fixed, so `∂ω̄` brings down `iα₁t`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouville::{check_budget, ChannelFamily, Superoperator};
use crate::numerics::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedDephasing {
    pairs: usize,
    omega2: f64,
    gamma: f64,
    t: f64,
}

impl CorrelatedDephasing {
    pub fn new(pairs: usize, omega2: f64, gamma: f64, t: f64) -> Result<Self> {
        if pairs == 0 {
            return Err(Error::InvalidArgument(
                "need at least one qubit pair".into(),
            ));
        }
        if 2 * pairs >= usize::BITS as usize / 2 {
            return Err(Error::DimensionBudgetExceeded {
                requested: usize::MAX,
                budget: usize::MAX,
            });
        }
        if !(gamma >= 0.0) || !(t >= 0.0) || !omega2.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need gamma >= 0 and t >= 0 (gamma = {gamma}, t = {t})"
            )));
        }
        Ok(Self {
            pairs,
            omega2,
            gamma,
            t,
        })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn qubits(&self) -> usize {
        2 * self.pairs
    }

    /// Hilbert dimension `2^{2N}`.
    pub fn hilbert_dim(&self) -> usize {
        1usize << self.qubits()
    }

    /// `(α₁, α₂)` for basis labels `μ`, `ν`.
    pub fn charges(&self, mu: usize, nu: usize) -> (i64, i64) {
        let q = self.qubits();
        let (mut a1, mut a2) = (0i64, 0i64);
        for pos in 1..=q {
            let bit = q - pos;
            let m = ((mu >> bit) & 1) as i64;
            let n = ((nu >> bit) & 1) as i64;
            let c = m - n;
            if pos % 2 == 1 {
                a1 += c;
            } else {
                a2 += c;
            }
        }
        (a1, a2)
    }

    /// Diagonal element at ω̄.
    pub fn element(&self, omega_bar: f64, mu: usize, nu: usize) -> Complex64 {
        let (a1, a2) = self.charges(mu, nu);
        let omega1 = omega_bar + self.omega2;
        let a = (a1 + a2) as f64;
        let phase = (a1 as f64 * omega1 + a2 as f64 * self.omega2) * self.t;
        Complex64::from_polar((-a * a * self.gamma * self.t).exp(), phase)
    }

    pub fn derivative_element(&self, omega_bar: f64, mu: usize, nu: usize) -> Complex64 {
        let (a1, _) = self.charges(mu, nu);
        Complex64::new(0.0, a1 as f64 * self.t) * self.element(omega_bar, mu, nu)
    }

    /// `(Φ̃'|Φ̃')` on the diagonal: `α₁²t² e^{−2α²γt}`.
    pub fn gram_diagonal(&self, mu: usize, nu: usize) -> f64 {
        let (a1, a2) = self.charges(mu, nu);
        let a = (a1 + a2) as f64;
        (a1 * a1) as f64 * self.t * self.t * (-2.0 * a * a * self.gamma * self.t).exp()
    }

    /// Largest Gram eigenvalue. The Gram is diagonal, so this is a maximum
    /// over charge pairs; each `(α₁, α₂)` with `|α_s| ≤ N` is reachable.
    pub fn max_gram_eigenvalue(&self) -> f64 {
        let n = self.pairs as i64;
        let t2 = self.t * self.t;
        let mut best = 0.0f64;
        for a1 in -n..=n {
            for a2 in -n..=n {
                let a = (a1 + a2) as f64;
                let v = (a1 * a1) as f64 * t2 * (-2.0 * a * a * self.gamma * self.t).exp();
                best = best.max(v);
            }
        }
        best
    }

    fn dense(&self, f: impl Fn(usize, usize) -> Complex64) -> Result<Superoperator> {
        let d = check_budget(2, self.qubits())?;
        let mut diag = Vec::with_capacity(d * d);
        for mu in 0..d {
            for nu in 0..d {
                diag.push(f(mu, nu));
            }
        }
        Superoperator::new(ComplexMatrix::from_diag(&diag), d)
    }

    pub fn superop(&self, omega_bar: f64) -> Result<Superoperator> {
        self.dense(|m, n| self.element(omega_bar, m, n))
    }

    pub fn superop_derivative(&self, omega_bar: f64) -> Result<Superoperator> {
        self.dense(|m, n| self.derivative_element(omega_bar, m, n))
    }

    /// Dense family in ω̄; subject to the Liouville dimension budget.
    pub fn family(&self) -> Result<ChannelFamily> {
        check_budget(2, self.qubits())?;
        let (a, b) = (*self, *self);
        Ok(ChannelFamily::analytic(
            self.hilbert_dim(),
            move |w| a.superop(w),
            move |w| b.superop_derivative(w),
        ))
    }
}
