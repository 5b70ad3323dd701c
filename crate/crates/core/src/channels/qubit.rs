use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouville::{ChannelFamily, Superoperator};
use crate::numerics::{cplx, ComplexMatrix};

const CPTP_TOL: f64 = 1e-12;

/// Phase-covariant qubit noise: z-displacement `k`, z-contraction `eta_par`,
/// xy-contraction `eta_perp` and rotation offset `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    k: f64,
    eta_par: f64,
    eta_perp: f64,
    theta: f64,
}

impl NoiseParams {
    pub fn new(k: f64, eta_par: f64, eta_perp: f64, theta: f64) -> Result<Self> {
        let p = Self {
            k,
            eta_par,
            eta_perp,
            theta,
        };
        p.validate()?;
        Ok(p)
    }

    pub const fn identity() -> Self {
        Self {
            k: 0.0,
            eta_par: 1.0,
            eta_perp: 1.0,
            theta: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let Self {
            k,
            eta_par,
            eta_perp,
            theta,
        } = *self;
        if ![k, eta_par, eta_perp, theta].iter().all(|v| v.is_finite()) {
            return Err(Error::CptpViolation("non-finite parameter".into()));
        }
        if k.abs() > 1.0 + CPTP_TOL || eta_par.abs() > 1.0 + CPTP_TOL {
            return Err(Error::CptpViolation(format!(
                "k = {k}, eta_par = {eta_par} outside [-1, 1]"
            )));
        }
        if !(-CPTP_TOL..=1.0 + CPTP_TOL).contains(&eta_perp) {
            return Err(Error::CptpViolation(format!(
                "eta_perp = {eta_perp} outside [0, 1]"
            )));
        }
        if eta_par + k > 1.0 + CPTP_TOL || eta_par - k > 1.0 + CPTP_TOL {
            return Err(Error::CptpViolation(format!(
                "eta_par ± k exceeds 1 (k = {k}, eta_par = {eta_par})"
            )));
        }
        let rhs = (k * k + 4.0 * eta_perp * eta_perp).sqrt();
        if 1.0 + eta_par < rhs - CPTP_TOL {
            return Err(Error::CptpViolation(format!(
                "1 + eta_par = {} < sqrt(k² + 4 eta_perp²) = {rhs}",
                1.0 + eta_par
            )));
        }
        Ok(())
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn eta_par(&self) -> f64 {
        self.eta_par
    }

    pub fn eta_perp(&self) -> f64 {
        self.eta_perp
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    /// (J₊₊, J₊₋, J₋₊, J₋₋) with J_{±±} = (1 ± k ± η∥)/2.
    pub fn j_coefficients(&self) -> (f64, f64, f64, f64) {
        let (k, e) = (self.k, self.eta_par);
        (
            (1.0 + k + e) / 2.0,
            (1.0 + k - e) / 2.0,
            (1.0 - k + e) / 2.0,
            (1.0 - k - e) / 2.0,
        )
    }

    /// Largest eigenvalue of the population block of Φ̃†Φ̃,
    /// `(1 + k² + η∥² + sqrt((1 + k² + η∥²)² − 4η∥²)) / 2`.
    pub fn population_gram_max(&self) -> f64 {
        let s = 1.0 + self.k * self.k + self.eta_par * self.eta_par;
        0.5 * (s + (s * s - 4.0 * self.eta_par * self.eta_par).max(0.0).sqrt())
    }

    /// Whether `N` probes are still in the short-time regime where the
    /// all-coherence sector carries the largest Gram eigenvalue, i.e.
    /// `2N²η⊥²/(N−1)² ≥ 1 + k² + η∥² + sqrt(...)`. Always true for `N = 1`.
    pub fn within_tau_regime(&self, n: usize) -> bool {
        if n <= 1 {
            return true;
        }
        let nf = n as f64;
        let lhs = 2.0 * nf * nf / ((nf - 1.0) * (nf - 1.0)) * self.eta_perp * self.eta_perp;
        lhs >= 2.0 * self.population_gram_max()
    }
}

/// Placement of the coherence terms of the phase-covariant matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoherenceLayout {
    /// Anti-diagonal placement exactly as transcribed: `|01) → η⊥e^{iφ}|10)`.
    #[default]
    Swapped,
    /// `|01) → η⊥e^{-iφ}|01)`, `|10) → η⊥e^{iφ}|10)`; reduces to the bare
    /// rotation in the noiseless limit.
    Diagonal,
}

/// Ũ_ω = Σ e^{iαωt} |μν)(μν|, α = μ − ν.
pub fn rotation_superop(omega: f64, t: f64) -> Superoperator {
    let phi = omega * t;
    let diag = [
        cplx(1.0, 0.0),
        Complex64::from_polar(1.0, -phi),
        Complex64::from_polar(1.0, phi),
        cplx(1.0, 0.0),
    ];
    Superoperator::new(ComplexMatrix::from_diag(&diag), 2).expect("4x4")
}

/// ∂_ω Ũ_ω.
pub fn rotation_superop_derivative(omega: f64, t: f64) -> Superoperator {
    let phi = omega * t;
    let diag = [
        cplx(0.0, 0.0),
        cplx(0.0, -t) * Complex64::from_polar(1.0, -phi),
        cplx(0.0, t) * Complex64::from_polar(1.0, phi),
        cplx(0.0, 0.0),
    ];
    Superoperator::new(ComplexMatrix::from_diag(&diag), 2).expect("4x4")
}

/// Family in ω of the noiseless z rotation over time `t`.
pub fn rotation_family(t: f64) -> ChannelFamily {
    ChannelFamily::analytic(
        2,
        move |w| Ok(rotation_superop(w, t)),
        move |w| Ok(rotation_superop_derivative(w, t)),
    )
}

fn phase_covariant_matrix(
    phi: f64,
    params: &NoiseParams,
    layout: CoherenceLayout,
    scale: [Complex64; 2],
) -> ComplexMatrix {
    let (jpp, jpm, jmp, jmm) = params.j_coefficients();
    let e = params.eta_perp;
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = cplx(jpp, 0.0);
    m[(0, 3)] = cplx(jpm, 0.0);
    m[(3, 0)] = cplx(jmm, 0.0);
    m[(3, 3)] = cplx(jmp, 0.0);
    let minus = Complex64::from_polar(e, -phi) * scale[0];
    let plus = Complex64::from_polar(e, phi) * scale[1];
    match layout {
        CoherenceLayout::Swapped => {
            m[(1, 2)] = minus;
            m[(2, 1)] = plus;
        }
        CoherenceLayout::Diagonal => {
            m[(1, 1)] = minus;
            m[(2, 2)] = plus;
        }
    }
    m
}

/// Phase-covariant map with φ = ωt + θ.
pub fn phase_covariant_superop(
    omega: f64,
    t: f64,
    params: &NoiseParams,
    layout: CoherenceLayout,
) -> Superoperator {
    let phi = omega * t + params.theta;
    let m = phase_covariant_matrix(phi, params, layout, [cplx(1.0, 0.0); 2]);
    Superoperator::new(m, 2).expect("4x4")
}

/// ∂_ω of [`phase_covariant_superop`]: populations vanish, coherences pick up ∓it.
pub fn phase_covariant_derivative(
    omega: f64,
    t: f64,
    params: &NoiseParams,
    layout: CoherenceLayout,
) -> Superoperator {
    let phi = omega * t + params.theta;
    let mut m = phase_covariant_matrix(phi, params, layout, [cplx(0.0, -t), cplx(0.0, t)]);
    for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = cplx(0.0, 0.0);
    }
    Superoperator::new(m, 2).expect("4x4")
}

/// Family in ω of the phase-covariant channel at interrogation time `t`.
pub fn phase_covariant_family(
    t: f64,
    params: NoiseParams,
    layout: CoherenceLayout,
) -> ChannelFamily {
    ChannelFamily::analytic(
        2,
        move |w| Ok(phase_covariant_superop(w, t, &params, layout)),
        move |w| Ok(phase_covariant_derivative(w, t, &params, layout)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Dephasing,
    Depolarizing,
    AmplitudeDamping,
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dephasing" => Ok(Self::Dephasing),
            "depolarizing" => Ok(Self::Depolarizing),
            "amplitude-damping" | "amplitude_damping" | "damping" => Ok(Self::AmplitudeDamping),
            other => Err(Error::InvalidArgument(format!(
                "unknown noise kind '{other}'"
            ))),
        }
    }
}

/// Semigroup parameter laws: η(t) = e^{−γt} for dephasing/depolarization,
/// k(t) = 1 − e^{−γt} for amplitude damping.
pub fn named_noise(kind: NoiseKind, strength: f64, t: f64) -> Result<NoiseParams> {
    if !(strength >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise strength must be >= 0, got {strength}"
        )));
    }
    let decay = (-strength * t).exp();
    match kind {
        NoiseKind::Dephasing => NoiseParams::new(0.0, 1.0, decay, 0.0),
        NoiseKind::Depolarizing => NoiseParams::new(0.0, decay, decay, 0.0),
        NoiseKind::AmplitudeDamping => {
            let k = 1.0 - decay;
            NoiseParams::new(k, 1.0 - k, (1.0 - k).sqrt(), 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionForm {
    /// η = 1 − α t^β
    #[default]
    Truncated,
    /// η = exp(−α t^β)
    Exponential,
}

impl std::str::FromStr for ExpansionForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncated" => Ok(Self::Truncated),
            "exponential" => Ok(Self::Exponential),
            other => Err(Error::InvalidArgument(format!(
                "unknown expansion form '{other}'"
            ))),
        }
    }
}

/// Short-time laws for the noise parameters; `k = α_k t^{β_k}` in both forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortTimeModel {
    pub alpha_perp: f64,
    pub beta_perp: f64,
    pub alpha_par: f64,
    pub beta_par: f64,
    pub alpha_k: f64,
    pub beta_k: f64,
    pub form: ExpansionForm,
}

/// Raw parameter values of a [`ShortTimeModel`] at a given time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    pub k: f64,
    pub eta_par: f64,
    pub eta_perp: f64,
}

impl ShortTimeModel {
    pub fn new(
        alpha_perp: f64,
        beta_perp: f64,
        alpha_par: f64,
        beta_par: f64,
        alpha_k: f64,
        beta_k: f64,
        form: ExpansionForm,
    ) -> Result<Self> {
        let m = Self {
            alpha_perp,
            beta_perp,
            alpha_par,
            beta_par,
            alpha_k,
            beta_k,
            form,
        };
        m.validate()?;
        Ok(m)
    }

    /// Pure decay of the coherences: only η⊥ evolves.
    pub fn perp_only(alpha_perp: f64, beta_perp: f64, form: ExpansionForm) -> Result<Self> {
        Self::new(alpha_perp, beta_perp, 0.0, 1.0, 0.0, 1.0, form)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.alpha_perp,
            self.beta_perp,
            self.alpha_par,
            self.beta_par,
            self.alpha_k,
            self.beta_k,
        ];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(
                "non-finite short-time coefficient".into(),
            ));
        }
        if !(self.beta_perp > 0.0 && self.beta_par > 0.0 && self.beta_k > 0.0) {
            return Err(Error::InvalidArgument(
                "short-time exponents must be positive".into(),
            ));
        }
        if self.alpha_perp < 0.0 || self.alpha_par < 0.0 {
            return Err(Error::InvalidArgument(
                "contraction coefficients must be non-negative".into(),
            ));
        }
        Ok(())
    }

    fn decay(&self, alpha: f64, beta: f64, t: f64) -> f64 {
        let x = alpha * t.powf(beta);
        match self.form {
            ExpansionForm::Truncated => 1.0 - x,
            ExpansionForm::Exponential => (-x).exp(),
        }
    }

    pub fn eta_perp_at(&self, t: f64) -> f64 {
        self.decay(self.alpha_perp, self.beta_perp, t)
    }

    /// dη⊥/dt.
    pub fn eta_perp_derivative_at(&self, t: f64) -> f64 {
        let (a, b) = (self.alpha_perp, self.beta_perp);
        let dx = a * b * t.powf(b - 1.0);
        match self.form {
            ExpansionForm::Truncated => -dx,
            ExpansionForm::Exponential => -dx * self.eta_perp_at(t),
        }
    }

    /// Parameter values without range or CPTP checks.
    pub fn raw_at(&self, t: f64) -> RawParams {
        RawParams {
            k: self.alpha_k * t.powf(self.beta_k),
            eta_par: self.decay(self.alpha_par, self.beta_par, t),
            eta_perp: self.eta_perp_at(t),
        }
    }

    /// Time at which η⊥ has decayed to `level`.
    pub fn time_for_eta_perp(&self, level: f64) -> f64 {
        let x = match self.form {
            ExpansionForm::Truncated => 1.0 - level,
            ExpansionForm::Exponential => -level.ln(),
        };
        if self.alpha_perp == 0.0 {
            return f64::INFINITY;
        }
        (x / self.alpha_perp).powf(1.0 / self.beta_perp)
    }
}

pub fn params_at(model: &ShortTimeModel, t: f64) -> Result<NoiseParams> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time must be >= 0, got {t}"
        )));
    }
    let raw = model.raw_at(t);
    if !(0.0..=1.0).contains(&raw.eta_perp) || !(0.0..=1.0).contains(&raw.eta_par) {
        return Err(Error::RangeViolation(format!(
            "at t = {t}: eta_perp = {}, eta_par = {}",
            raw.eta_perp, raw.eta_par
        )));
    }
    if raw.k.abs() > 1.0 {
        return Err(Error::RangeViolation(format!("at t = {t}: k = {}", raw.k)));
    }
    NoiseParams::new(raw.k, raw.eta_par, raw.eta_perp, 0.0)
}

/// Family in x of the unitary `e^{-ixH}` for a Hermitian generator `H`.
pub fn hamiltonian_family(generator: &ComplexMatrix) -> Result<ChannelFamily> {
    let spectrum = crate::numerics::herm_eig(generator)?;
    let d = generator.rows();
    let h = generator.hermitian_part()?;
    let unitary =
        move |x: f64| spectrum.reconstruct_complex(|l| Complex64::from_polar(1.0, -x * l));
    let unitary2 = unitary.clone();
    Ok(ChannelFamily::analytic(
        d,
        move |x| {
            let u = unitary(x);
            Superoperator::new(crate::numerics::kron(&u, &u.conj()), d)
        },
        move |x| {
            let u = unitary2(x);
            let du = (&h * &u).scale(cplx(0.0, -1.0));
            let m = crate::numerics::kron(&du, &u.conj())
                .try_add(&crate::numerics::kron(&u, &du.conj()))?;
            Superoperator::new(m, d)
        },
    ))
}
