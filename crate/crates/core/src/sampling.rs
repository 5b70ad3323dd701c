//! Seeded random instances for property suites: Hermitian operators,
//! unitaries, states, Kraus sets and phase-covariant noise parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{hamiltonian_family, NoiseParams};
use crate::liouville::{superop_from_kraus, ChannelFamily};
use crate::numerics::{cplx, norm, vdot, Complex64, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample (Box–Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    cplx(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite gaussian entries")
}

/// Random Hermitian matrix (GUE-like), scaled to unit spectral spread.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    g.hermitian_part()
        .expect("square")
        .scale_real(1.0 / (n as f64).sqrt())
}

/// Random traceless Hermitian matrix.
pub fn random_traceless_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut h = random_hermitian(rng, n);
    let shift = h.trace() / n as f64;
    for i in 0..n {
        h[(i, i)] -= shift;
    }
    h
}

/// Orthonormalizes the columns of `m` in place order (modified Gram–Schmidt).
fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = m.shape();
    let mut columns: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();
    for j in 0..cols {
        for k in 0..j {
            let (done, rest) = columns.split_at_mut(j);
            let proj = vdot(&done[k], &rest[0]);
            for (x, &q) in rest[0].iter_mut().zip(&done[k]) {
                *x -= proj * q;
            }
        }
        let nrm = norm(&columns[j]);
        for x in columns[j].iter_mut() {
            *x /= nrm;
        }
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    out
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    orthonormalize_columns(&ginibre(rng, n, n))
}

pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let nrm = norm(&v);
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let v = random_ket(rng, n);
    ComplexMatrix::outer(&v, &v)
}

/// Random mixed state G G† / tr(G G†) with a Ginibre G of the given rank.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, rank.max(1));
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitian_part().expect("square")
}

/// Random CPTP channel as `r` Kraus operators on dimension `d`, cut from a
/// random isometry `C^d -> C^{r d}`.
pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, d: usize, r: usize) -> Vec<ComplexMatrix> {
    let v = orthonormalize_columns(&ginibre(rng, r * d, d));
    (0..r)
        .map(|l| {
            let mut k = ComplexMatrix::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    k[(i, j)] = v[(l * d + i, j)];
                }
            }
            k
        })
        .collect()
}

/// Random valid phase-covariant parameters, built by composing amplitude
/// damping (towards either pole), dephasing and depolarization.
pub fn random_phase_covariant_params<R: Rng + ?Sized>(
    rng: &mut R,
    max_strength: f64,
) -> NoiseParams {
    let damping = max_strength * rng.gen::<f64>();
    let toward_ground = rng.gen::<bool>();
    let dephasing = 1.0 - max_strength * rng.gen::<f64>();
    let depolarizing = 1.0 - max_strength * rng.gen::<f64>();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    let k_damp = if toward_ground { damping } else { -damping };
    // composition order: damping, then dephasing, then depolarization
    let eta_par = (1.0 - damping) * depolarizing;
    let k = depolarizing * k_damp;
    let eta_perp = (1.0 - damping).sqrt() * dephasing * depolarizing;
    NoiseParams::new(k, eta_par, eta_perp, theta).expect("composition of valid channels is valid")
}

/// `x ↦ e^{-ixH}` for a random Hermitian `H`.
pub fn random_unitary_family<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ChannelFamily {
    hamiltonian_family(&random_hermitian(rng, d)).expect("random Hermitian generator")
}

/// A random unitary encoding with a random CPTP map applied before or after it.
pub fn random_channel_family<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ChannelFamily {
    let encoding = random_unitary_family(rng, d);
    let rank = rng.gen_range(1..=d * d);
    let noise = superop_from_kraus(&random_kraus(rng, d, rank), true).expect("isometry Kraus set");
    let noise = ChannelFamily::constant(noise);
    if rng.gen::<bool>() {
        encoding.then(&noise).expect("same dimension")
    } else {
        noise.then(&encoding).expect("same dimension")
    }
}

/// Rejection-samples phase-covariant parameters inside the short-time regime
/// for `n` probes (see [`NoiseParams::within_tau_regime`]).
pub fn random_phase_covariant_within_tau<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_strength: f64,
) -> NoiseParams {
    loop {
        let p = random_phase_covariant_params(rng, max_strength);
        if p.within_tau_regime(n) {
            return p;
        }
    }
}
