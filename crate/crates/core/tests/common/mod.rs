#![allow(dead_code)]

use qfibound::liouville::{vectorize, ChannelFamily};
use qfibound::numerics::{kron, ComplexMatrix};
use qfibound::sampling::{random_density_matrix, random_pure_state, SeededRng};
use rand::Rng;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Pure or mixed with equal odds.
pub fn random_state(rng: &mut SeededRng, d: usize) -> ComplexMatrix {
    if rng.gen::<bool>() {
        random_pure_state(rng, d)
    } else {
        let rank = rng.gen_range(1..=d);
        random_density_matrix(rng, d, rank)
    }
}

/// `(ρ_x, ρ'_x)` for a family acting on `rho0`.
pub fn outputs(
    family: &ChannelFamily,
    x: f64,
    rho0: &ComplexMatrix,
) -> (ComplexMatrix, ComplexMatrix) {
    let r = vectorize(rho0).unwrap();
    let rho = family.evaluate(x).unwrap().apply(&r).unwrap().devectorize();
    let drho = family
        .derivative(x)
        .unwrap()
        .apply(&r)
        .unwrap()
        .devectorize();
    (
        rho.hermitian_part().unwrap(),
        drho.hermitian_part().unwrap(),
    )
}

pub fn evolve(family: &ChannelFamily, x: f64, rho0: &ComplexMatrix) -> ComplexMatrix {
    let r = vectorize(rho0).unwrap();
    family
        .evaluate(x)
        .unwrap()
        .apply(&r)
        .unwrap()
        .devectorize()
        .hermitian_part()
        .unwrap()
}

/// `(ρ^⊗ν, Σ_i ρ⊗…ρ'_i…⊗ρ)`.
pub fn product_pair(
    rho: &ComplexMatrix,
    drho: &ComplexMatrix,
    nu: usize,
) -> (ComplexMatrix, ComplexMatrix) {
    let mut p = rho.clone();
    let mut dp = drho.clone();
    for _ in 1..nu {
        dp = &kron(&dp, rho) + &kron(&p, drho);
        p = kron(&p, rho);
    }
    (p, dp)
}

pub fn hs_norm_sq(a: &ComplexMatrix) -> f64 {
    a.as_slice().iter().map(|z| z.norm_sqr()).sum()
}
