use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouville::{check_budget, superop_from_kraus, ChannelFamily, Superoperator};
use crate::numerics::{binomial, cplx, kron, ComplexMatrix};

/// Largest Poisson tail of a coherent state tolerated by a Fock truncation.
pub const TRUNCATION_TAIL_TOL: f64 = 1e-12;

/// Beam-splitter loss of transmissivity `eta` on one mode truncated at `n_max`.
pub fn loss_kraus(n_max: usize, eta: f64) -> Result<Vec<ComplexMatrix>> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!(
            "transmissivity must lie in [0, 1], got {eta}"
        )));
    }
    let d = n_max + 1;
    Ok((0..=n_max)
        .map(|l| {
            let mut k = ComplexMatrix::zeros(d, d);
            for n in l..=n_max {
                let w = binomial(n, l) * eta.powi((n - l) as i32) * (1.0 - eta).powi(l as i32);
                k[(n - l, n)] = cplx(w.sqrt(), 0.0);
            }
            k
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerSpec {
    n: usize,
    eta: f64,
    phi: f64,
}

impl InterferometerSpec {
    pub fn new(n: usize, eta: f64, phi: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("photon number must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidArgument(format!(
                "transmissivity must lie in [0, 1], got {eta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidArgument("phase must be finite".into()));
        }
        Ok(Self { n, eta, phi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Liouville index of `|k⟩⟨m|` on arm a.
    pub fn index(&self, k: usize, m: usize) -> usize {
        k * (self.n + 1) + m
    }
}

/// `|k⟩⟨m| ↦ e^{-iφ(k−m)} |k⟩⟨m|` on a mode truncated at `n_max`.
fn phase_diag(n_max: usize, phi: f64, derivative: bool) -> Vec<Complex64> {
    let d = n_max + 1;
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        for m in 0..d {
            let a = k as f64 - m as f64;
            let p = Complex64::from_polar(1.0, -phi * a);
            out.push(if derivative { cplx(0.0, -a) * p } else { p });
        }
    }
    out
}

fn scale_columns(s: &Superoperator, diag: &[Complex64]) -> Result<Superoperator> {
    let mut m = s.matrix().clone();
    let n = m.cols();
    for r in 0..m.rows() {
        for (c, w) in diag.iter().enumerate().take(n) {
            m[(r, c)] *= *w;
        }
    }
    Superoperator::new(m, s.hilbert_dim())
}

/// Loss after phase accumulation on arm a, as a family in φ. Arm b carries
/// neither, so the representation is single-mode `|k⟩⟨m|`, `k, m ≤ N`.
pub fn interferometer_family(spec: &InterferometerSpec) -> Result<ChannelFamily> {
    let n = spec.n;
    check_budget(n + 1, 1)?;
    let loss = superop_from_kraus(&loss_kraus(n, spec.eta)?, true)?;
    let loss2 = loss.clone();
    Ok(ChannelFamily::analytic(
        n + 1,
        move |phi| scale_columns(&loss, &phase_diag(n, phi, false)),
        move |phi| scale_columns(&loss2, &phase_diag(n, phi, true)),
    ))
}

/// Entangled coherent state `N_α(|α,0⟩ + |0,α⟩)` on two modes truncated at `n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcsSpec {
    alpha: Complex64,
    n_max: usize,
}

/// Poisson tail `Σ_{n > n_max} e^{-x} xⁿ/n!` of mean `x`, summed directly.
pub fn poisson_tail(mean: f64, n_max: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let mut log_p = -mean;
    for n in 1..=n_max + 1 {
        log_p += mean.ln() - (n as f64).ln();
    }
    let mut n = n_max + 1;
    let mut tail = 0.0;
    loop {
        let p = log_p.exp();
        tail += p;
        n += 1;
        log_p += mean.ln() - (n as f64).ln();
        if (n as f64) > mean && p < tail * 1e-17 || n > n_max + 100_000 {
            break;
        }
    }
    tail
}

impl EcsSpec {
    pub fn new(alpha: Complex64, n_max: usize) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidArgument(
                "coherent amplitude must be finite".into(),
            ));
        }
        let tail = poisson_tail(alpha.norm_sqr(), n_max);
        if tail >= TRUNCATION_TAIL_TOL {
            return Err(Error::TruncationInsufficient { n_max, tail });
        }
        Ok(Self { alpha, n_max })
    }

    /// Truncation `⌈|α|² + 10|α| + 10⌉`, raised if needed.
    pub fn auto(alpha: Complex64) -> Result<Self> {
        let mean = alpha.norm_sqr();
        let mut n_max = (mean + 10.0 * mean.sqrt() + 10.0).ceil() as usize;
        while poisson_tail(mean, n_max) >= TRUNCATION_TAIL_TOL {
            n_max += 1;
        }
        Self::new(alpha, n_max)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `N_α = [2(1 + e^{−|α|²})]^{−1/2}`.
    pub fn normalization(&self) -> f64 {
        (2.0 * (1.0 + (-self.alpha.norm_sqr()).exp())).powf(-0.5)
    }

    /// `n̄ = 2N_α²|α|²`.
    pub fn mean_photons(&self) -> f64 {
        2.0 * self.normalization().powi(2) * self.alpha.norm_sqr()
    }

    fn coherent_amplitudes(&self) -> Vec<Complex64> {
        let mut c = Vec::with_capacity(self.n_max + 1);
        let mut amp = Complex64::new((-self.alpha.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..=self.n_max {
            if n > 0 {
                amp *= self.alpha / (n as f64).sqrt();
            }
            c.push(amp);
        }
        c
    }

    /// State vector in the basis `|n_a, n_b⟩ ↦ n_a (n_max+1) + n_b`,
    /// renormalized on the truncated space.
    pub fn ket(&self) -> Vec<Complex64> {
        let d = self.n_max + 1;
        let c = self.coherent_amplitudes();
        let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
        for n in 0..d {
            psi[n * d] += c[n];
            psi[n] += c[n];
        }
        let norm = crate::numerics::norm(&psi);
        psi.iter_mut().for_each(|z| *z /= norm);
        psi
    }
}

pub fn ecs_state(spec: &EcsSpec) -> ComplexMatrix {
    let psi = spec.ket();
    ComplexMatrix::outer(&psi, &psi)
}

/// Two-mode loss Kraus set `K_l ⊗ K_j` with the same transmissivity on both arms.
pub fn two_mode_loss_kraus(n_max: usize, eta: f64) -> Result<Vec<ComplexMatrix>> {
    let single = loss_kraus(n_max, eta)?;
    let mut out = Vec::with_capacity(single.len() * single.len());
    for a in &single {
        for b in &single {
            out.push(kron(a, b));
        }
    }
    Ok(out)
}
