//! Estimation scenarios: interrogation-time optimization and the τ window,
//! precision scaling with the number of probes, the lossy Fock-state
//! interferometer and entangled coherent states.

use num_complex::Complex64;

use crate::bound::{analytic_max_phase_covariant, lower_bound_from_state};
use crate::channels::{loss_kraus, EcsSpec, ExpansionForm, ShortTimeModel};
use crate::error::{Error, Result};
use crate::numerics::{
    binomial, loglog_slope, minimize_unimodal, solve_root_bisect, ComplexMatrix,
};

/// η⊥ level that closes the τ search window.
pub const TAU_WINDOW_ETA: f64 = 0.01;
const TAU_GRID: usize = 4000;

/// `(2α⊥N(β⊥+1))^{−1/β⊥}`.
pub fn t_opt_paper(alpha_perp: f64, beta_perp: f64, n: usize) -> Result<f64> {
    if !(alpha_perp > 0.0 && beta_perp > 0.0) || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "need alpha_perp > 0, beta_perp > 0, N >= 1 (got {alpha_perp}, {beta_perp}, {n})"
        )));
    }
    Ok((2.0 * alpha_perp * n as f64 * (beta_perp + 1.0)).powf(-1.0 / beta_perp))
}

fn time_window(model: &ShortTimeModel) -> Result<f64> {
    if !(model.alpha_perp > 0.0) {
        return Err(Error::InvalidArgument("alpha_perp must be positive".into()));
    }
    Ok(model.time_for_eta_perp(TAU_WINDOW_ETA))
}

/// Largest time at which the all-coherence Gram sector still dominates:
/// `2N²η⊥²/(N−1)² = 1 + k² + η∥² + √((1+k²+η∥²)² − 4η∥²)`.
///
/// The last sign change on `(0, t_upper]` is located on a grid and refined by
/// bisection; `t_upper` is where η⊥ reaches 0.01. For `N = 1` the unital
/// closed form `(α⊥)^{−1/β⊥}` (truncated) or `+∞` (exponential) is returned.
pub fn tau_solve(model: &ShortTimeModel, n: usize) -> Result<f64> {
    model.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be >= 1".into()));
    }
    let upper = time_window(model)?;
    if n == 1 {
        return Ok(match model.form {
            ExpansionForm::Truncated => model.alpha_perp.powf(-1.0 / model.beta_perp),
            ExpansionForm::Exponential => f64::INFINITY,
        });
    }
    let nf = n as f64;
    let g = |t: f64| {
        let r = model.raw_at(t);
        let s = 1.0 + r.k * r.k + r.eta_par * r.eta_par;
        let rhs = s + (s * s - 4.0 * r.eta_par * r.eta_par).max(0.0).sqrt();
        2.0 * nf * nf / ((nf - 1.0) * (nf - 1.0)) * r.eta_perp * r.eta_perp - rhs
    };
    let mut prev_t = 0.0;
    let mut prev_g = g(0.0);
    let mut last = None;
    for i in 1..=TAU_GRID {
        let t = upper * i as f64 / TAU_GRID as f64;
        let gt = g(t);
        if prev_g.signum() != gt.signum() && !gt.is_nan() && !prev_g.is_nan() {
            last = Some((prev_t, t));
        }
        prev_t = t;
        prev_g = gt;
    }
    let (lo, hi) =
        last.ok_or_else(|| Error::NoRoot(format!("no sign change on (0, {upper}] for N = {n}")))?;
    solve_root_bisect(g, lo, hi, 1e-15 * hi)
}

/// `t/(T·½N²t²η⊥(t)^{2N})`, the Cramér–Rao cost with the GHZ bound.
pub fn cost_at(model: &ShortTimeModel, n: usize, t: f64, total_time: f64) -> f64 {
    let eta = model.eta_perp_at(t);
    if !(eta > 0.0) || !(t > 0.0) {
        return f64::INFINITY;
    }
    let f_max = 0.5 * analytic_max_phase_covariant(n, t, eta.min(1.0)).unwrap_or(0.0);
    t / (total_time * f_max)
}

/// Minimizer of the cost over `(0, τ)`, found by golden section in `ln t`.
pub fn t_opt_numeric(model: &ShortTimeModel, n: usize) -> Result<f64> {
    let tau = tau_solve(model, n)?;
    let upper = tau.min(time_window(model)?);
    let nf = n as f64;
    let log_cost = |s: f64| {
        let t = s.exp();
        let eta = model.eta_perp_at(t);
        if eta > 0.0 {
            -s - 2.0 * nf * eta.ln()
        } else {
            f64::INFINITY
        }
    };
    // d ln c / d ln t = −1 − 2N t η⊥'/η⊥
    let stationarity = |s: f64| {
        let t = s.exp();
        -1.0 - 2.0 * nf * t * model.eta_perp_derivative_at(t) / model.eta_perp_at(t)
    };
    let (hi, lo) = (upper.ln(), upper.ln() - 60.0);
    let (s, _) = minimize_unimodal(log_cost, lo, hi, 1e-12)?;
    if hi - s < 1e-7 || s - lo < 1e-7 {
        return Err(Error::NoInteriorMinimum { upper });
    }
    let (a, b) = ((s - 1e-3).max(lo), (s + 1e-3).min(hi));
    let s = solve_root_bisect(stationarity, a, b, 1e-15).unwrap_or(s);
    if stationarity(s).abs() > 1e-6 {
        return Err(Error::NoInteriorMinimum { upper });
    }
    let t = s.exp();
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionConfig {
    pub total_time: f64,
    pub n_range: Vec<usize>,
    pub model: ShortTimeModel,
}

impl PrecisionConfig {
    pub fn new(total_time: f64, n_range: Vec<usize>, model: ShortTimeModel) -> Result<Self> {
        let c = Self {
            total_time,
            n_range,
            model,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "total time must be positive, got {}",
                self.total_time
            )));
        }
        if self.n_range.is_empty() || self.n_range[0] == 0 {
            return Err(Error::InvalidArgument(
                "probe counts must be a nonempty list of N >= 1".into(),
            ));
        }
        if self.n_range.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "probe counts must be strictly increasing".into(),
            ));
        }
        self.model.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    pub n: usize,
    pub tau: f64,
    pub t_opt: f64,
    pub min_cost: f64,
    pub t_opt_paper: f64,
    pub cost_closed_form: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingResult {
    pub per_n: Vec<ScalingPoint>,
    /// Log-log slope of the numerically minimized cost.
    pub slope: f64,
    /// Log-log slope of the cost at the closed-form `t_opt`.
    pub slope_closed_form: f64,
    /// `−(2β⊥−1)/β⊥`
    pub predicted_exponent: f64,
    pub c_lower: f64,
}

/// `C↓ = (2α⊥)^{1/β⊥}(1+β⊥)^{(β⊥+1)/β⊥}/(Tβ⊥)`.
pub fn c_lower(alpha_perp: f64, beta_perp: f64, total_time: f64) -> f64 {
    let b = beta_perp;
    (2.0 * alpha_perp).powf(1.0 / b) * (1.0 + b).powf((b + 1.0) / b) / (total_time * b)
}

pub fn precision_scaling(config: &PrecisionConfig) -> Result<ScalingResult> {
    config.validate()?;
    let m = &config.model;
    let mut per_n = Vec::with_capacity(config.n_range.len());
    for &n in &config.n_range {
        let tau = tau_solve(m, n)?;
        let t_opt = t_opt_numeric(m, n)?;
        let tp = t_opt_paper(m.alpha_perp, m.beta_perp, n)?;
        per_n.push(ScalingPoint {
            n,
            tau,
            t_opt,
            min_cost: cost_at(m, n, t_opt, config.total_time),
            t_opt_paper: tp,
            cost_closed_form: cost_at(m, n, tp, config.total_time),
        });
    }
    let pts: Vec<(f64, f64)> = per_n.iter().map(|p| (p.n as f64, p.min_cost)).collect();
    let pts_closed_form: Vec<(f64, f64)> = per_n
        .iter()
        .map(|p| (p.n as f64, p.cost_closed_form))
        .collect();
    let (slope, slope_closed_form) = if per_n.len() >= 2 {
        (loglog_slope(&pts)?, loglog_slope(&pts_closed_form)?)
    } else {
        (f64::NAN, f64::NAN)
    };
    let b = m.beta_perp;
    Ok(ScalingResult {
        per_n,
        slope,
        slope_closed_form,
        predicted_exponent: -(2.0 * b - 1.0) / b,
        c_lower: c_lower(m.alpha_perp, b, config.total_time),
    })
}

/// Gram diagonal of the lossy phase channel at `|k⟩⟨m|`:
/// `Σ_l (k−m)² C(k,l)C(m,l) η^{k+m−2l}(1−η)^{2l}`.
pub fn interferometer_gram_diag(n: usize, eta: f64, k: usize, m: usize) -> Result<f64> {
    if k > n || m > n {
        return Err(Error::IndexOutOfRange { n, k, m });
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!(
            "transmissivity must lie in [0, 1], got {eta}"
        )));
    }
    let diff = k as f64 - m as f64;
    let sum: f64 = (0..=k.min(m))
        .map(|l| {
            binomial(k, l)
                * binomial(m, l)
                * eta.powi((k + m - 2 * l) as i32)
                * (1.0 - eta).powi(2 * l as i32)
        })
        .sum();
    Ok(diff * diff * sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalM {
    pub m_max: usize,
    /// Gram diagonal at `(N, m_max)`.
    pub value: f64,
    /// Whether the exhaustive `(k, m)` scan found nothing larger off row `k = N`.
    pub row_n_is_global: bool,
}

/// `argmax_m` of the `k = N` row, ties going to the smaller `m`.
pub fn interferometer_optimal_m(n: usize, eta: f64) -> Result<OptimalM> {
    if n == 0 {
        return Err(Error::InvalidArgument("photon number must be >= 1".into()));
    }
    let mut best = (0, interferometer_gram_diag(n, eta, n, 0)?);
    for m in 1..n {
        let v = interferometer_gram_diag(n, eta, n, m)?;
        if v > best.1 {
            best = (m, v);
        }
    }
    let mut global = 0.0f64;
    for k in 0..=n {
        for m in 0..k {
            global = global.max(interferometer_gram_diag(n, eta, k, m)?);
        }
    }
    Ok(OptimalM {
        m_max: best.0,
        value: best.1,
        row_n_is_global: global <= best.1 * (1.0 + 1e-12),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcsTerms {
    pub f_lower: f64,
    pub classical_term: f64,
    pub heisenberg_term: f64,
    pub f_c: f64,
    pub f_h: f64,
}

impl EcsTerms {
    fn from_factors(mean: f64, eta: f64, f_c: f64, f_h: f64) -> Self {
        let classical_term = 2.0 * mean * eta * f_c;
        let heisenberg_term = (mean * eta).powi(2) * f_h;
        Self {
            f_lower: classical_term + heisenberg_term,
            classical_term,
            heisenberg_term,
            f_c,
            f_h,
        }
    }
}

/// Closed form `F↓ = 2n̄η f_C + (n̄η)² f_H` for entangled coherent states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcsBreakdown {
    pub mean_photons: f64,
    pub xi: f64,
    pub exact: EcsTerms,
    /// `f_C = (1 + e^{−2(1−η)|α|²})/4`, `f_H = e^{−(1−η)|α|²}/2`.
    pub practical: EcsTerms,
}

pub fn ecs_lower_bound_closed(spec: &EcsSpec, eta: f64) -> Result<EcsBreakdown> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!(
            "transmissivity must lie in [0, 1], got {eta}"
        )));
    }
    let a2 = spec.alpha().norm_sqr();
    let n2 = spec.normalization().powi(2);
    let mean = spec.mean_photons();
    let lost = (-(1.0 - eta) * a2).exp();
    let kept = (-eta * a2).exp();
    let xi = (1.0 + lost).powi(2) * (1.0 + kept) + (1.0 - lost).powi(2) * (1.0 - kept);
    let exact = EcsTerms::from_factors(mean, eta, n2 / 4.0 * xi, 0.5 * (-1.0 + xi / 2.0));
    let practical = EcsTerms::from_factors(
        mean,
        eta,
        (1.0 + (-2.0 * (1.0 - eta) * a2).exp()) / 4.0,
        lost / 2.0,
    );
    Ok(EcsBreakdown {
        mean_photons: mean,
        xi,
        exact,
        practical,
    })
}

/// F↓ of the truncated two-mode state after a phase `e^{−iφn_a}` and photon
/// loss of transmissivity `eta` on both arms, from the density matrix and
/// `ρ' = −i[n_a, ρ]`.
pub fn ecs_lower_bound_numeric(spec: &EcsSpec, eta: f64, phi: f64) -> Result<f64> {
    let kraus = loss_kraus(spec.n_max(), eta)?;
    let d = spec.n_max() + 1;
    let dim = d * d;
    let psi: Vec<Complex64> = spec
        .ket()
        .iter()
        .enumerate()
        .map(|(i, z)| z * Complex64::from_polar(1.0, -phi * (i / d) as f64))
        .collect();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for ka in &kraus {
        let a_psi: Vec<Vec<Complex64>> = (0..d)
            .map(|nb| (0..d).map(|na| psi[na * d + nb]).collect::<Vec<_>>())
            .map(|col| ka.matvec(&col).expect("square"))
            .collect();
        for kb in &kraus {
            let mut out = vec![Complex64::new(0.0, 0.0); dim];
            for na in 0..d {
                let row: Vec<Complex64> = (0..d).map(|nb| a_psi[nb][na]).collect();
                let v = kb.matvec(&row).expect("square");
                out[na * d..(na + 1) * d].copy_from_slice(&v);
            }
            if out.iter().all(|z| z.norm_sqr() == 0.0) {
                continue;
            }
            let data = rho.as_mut_slice();
            for (i, zi) in out.iter().enumerate() {
                if zi.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, zj) in out.iter().enumerate() {
                    data[i * dim + j] += zi * zj.conj();
                }
            }
        }
    }
    let mut drho = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let diff = (i / d) as f64 - (j / d) as f64;
            drho[(i, j)] = Complex64::new(0.0, -diff) * rho[(i, j)];
        }
    }
    Ok(lower_bound_from_state(&rho, &drho)?.f_lower)
}
