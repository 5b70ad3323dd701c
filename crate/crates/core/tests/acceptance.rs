//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
//! Set `QFIBOUND_BLESS=1` to rewrite the golden files instead of comparing.

mod common;

use common::*;
use num_complex::Complex64;
use qfibound::bound::*;
use qfibound::channels::*;
use qfibound::liouville::{gram_tensor_power, gram_triple};
use qfibound::metrology::*;
use qfibound::numerics::largest_eigval_psd;
use qfibound::qfi_oracle::*;
use qfibound::sampling::*;
use qfibound::states::ghz_state;
use rand::Rng;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_time(elapsed: Duration, limit_s: f64, detail: String) -> Outcome {
    let s = elapsed.as_secs_f64();
    if s < limit_s {
        Ok(format!("{detail}, {s:.2}s"))
    } else {
        Err(format!("{detail}, took {s:.2}s (limit {limit_s}s)"))
    }
}

fn half_qfi_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(1);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let d = if i % 2 == 0 { 2 } else { 4 };
        let fam = random_unitary_family(&mut rng, d);
        let (rho, drho) = outputs(
            &fam,
            rng.gen_range(-2.0..2.0),
            &random_pure_state(&mut rng, d),
        );
        let f = lower_bound_from_state(&rho, &drho)
            .map_err(|e| e.to_string())?
            .f_lower;
        let exact = exact_qfi(&rho, &drho).map_err(|e| e.to_string())?.qfi;
        worst = worst.max(rel(f, 0.5 * exact));
    }
    let detail = format!("max rel err {worst:.2e}");
    check(worst <= 1e-9, detail.clone())?;
    within_time(start.elapsed(), 5.0, detail)
}

fn unitary_norm() -> Outcome {
    let mut worst_norm = 0.0f64;
    let mut worst_proj = 0.0f64;
    for n in 1..=6usize {
        let dim = 1usize << n;
        let targets = [dim - 1, (dim - 1) * dim];
        for t in [0.1, 1.0, 2.0] {
            let r =
                max_bound_over_states(&rotation_family(t), 0.0, n).map_err(|e| e.to_string())?;
            worst_norm = worst_norm.max(rel(r.norm_bound, (n * n) as f64 * t * t));
            // ‖P − Q‖_F² = rank P + rank Q − 2 Σ |⟨v_i|e_j⟩|² for orthonormal v_i
            let overlap: f64 = r
                .top_eigenspace
                .iter()
                .map(|v| {
                    targets
                        .iter()
                        .map(|&j| v.amplitudes()[j].norm_sqr())
                        .sum::<f64>()
                })
                .sum();
            let dist2 = r.top_eigenspace.len() as f64 + 2.0 - 2.0 * overlap;
            worst_proj = worst_proj.max(dist2.max(0.0).sqrt());
        }
    }
    check(
        worst_norm <= 1e-10 && worst_proj <= 1e-8,
        format!("max rel err {worst_norm:.2e}, max projector distance {worst_proj:.2e}"),
    )
}

fn ghz_half_norm() -> Outcome {
    let mut rng = rng_from_seed(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        for n in 1..=5 {
            let p = random_phase_covariant_within_tau(&mut rng, n, 0.3);
            let t = rng.gen_range(0.1..2.0);
            let fam = phase_covariant_family(t, p, CoherenceLayout::Swapped);
            let x = rng.gen_range(-1.0..1.0);
            let r = max_bound_over_states(&fam, x, n).map_err(|e| e.to_string())?;
            let ghz = ghz_state(n).map_err(|e| e.to_string())?;
            let f = lower_bound_tensor_power(&fam, x, n, &ghz)
                .map_err(|e| e.to_string())?
                .f_lower;
            worst = worst.max(rel(f, 0.5 * r.norm_bound));
        }
    }
    check(worst <= 1e-9, format!("250 cases, max rel err {worst:.2e}"))
}

fn dephasing_norm(gamma: f64, t: f64, n: usize) -> Result<f64, String> {
    let p = named_noise(NoiseKind::Dephasing, gamma, t).map_err(|e| e.to_string())?;
    let fam = phase_covariant_family(t, p, CoherenceLayout::Swapped);
    let g = gram_tensor_power(&gram_triple(&fam, 0.3).map_err(|e| e.to_string())?, n)
        .map_err(|e| e.to_string())?;
    Ok(largest_eigval_psd(g.matrix())
        .map_err(|e| e.to_string())?
        .value)
}

fn eta_perp_formula() -> Outcome {
    let gamma = 0.5;
    let model = ShortTimeModel::perp_only(gamma, 1.0, ExpansionForm::Exponential)
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut min_excess = f64::INFINITY;
    for n in 1..=5usize {
        let tau = tau_solve(&model, n).map_err(|e| e.to_string())?;
        let inside = if tau.is_finite() { 0.5 * tau } else { 1.0 };
        let formula = |t: f64| (n * n) as f64 * t * t * (-2.0 * n as f64 * gamma * t).exp();
        worst = worst.max(rel(dephasing_norm(gamma, inside, n)?, formula(inside)));
        if n >= 2 {
            let outside = 2.0 * tau;
            let num = dephasing_norm(gamma, outside, n)?;
            min_excess = min_excess.min((num - formula(outside)) / formula(outside));
        }
    }
    check(
        worst <= 1e-9 && min_excess > 0.0,
        format!("max rel err {worst:.2e} at t<τ, min relative excess {min_excess:.2e} at t>τ"),
    )
}

fn bound_validity() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(5);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..1000 {
        let d = if i % 2 == 0 { 2 } else { 4 };
        let fam = random_channel_family(&mut rng, d);
        let (rho, drho) = outputs(&fam, rng.gen_range(-2.0..2.0), &random_state(&mut rng, d));
        let f = lower_bound_from_state(&rho, &drho)
            .map_err(|e| e.to_string())?
            .f_lower;
        let exact = exact_qfi(&rho, &drho).map_err(|e| e.to_string())?.qfi;
        worst = worst.max(f - exact);
    }
    let detail = format!("max F↓ − F {worst:.2e}");
    check(worst <= 1e-9, detail.clone())?;
    within_time(start.elapsed(), 60.0, detail)
}

fn tau_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [0.1, 0.5, 1.0] {
        for beta in [1.0, 2.0] {
            let m = ShortTimeModel::perp_only(alpha, beta, ExpansionForm::Truncated)
                .map_err(|e| e.to_string())?;
            for n in [2usize, 10, 100] {
                let tau = tau_solve(&m, n).map_err(|e| e.to_string())?;
                worst = worst.max(rel(tau, (alpha * n as f64).powf(-1.0 / beta)));
            }
        }
    }
    check(worst <= 1e-8, format!("max rel err {worst:.2e}"))
}

fn scaling_law() -> Outcome {
    let start = Instant::now();
    // both the doubling grid and the step-8 grid
    let grids: [Vec<usize>; 2] = [
        (3..=10).map(|k| 1 << k).collect(),
        (1..=128).map(|k| 8 * k).collect(),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for form in [ExpansionForm::Exponential, ExpansionForm::Truncated] {
        for (beta, target) in [(1.0, -1.0), (2.0, -1.5)] {
            let model = ShortTimeModel::perp_only(0.5, beta, form).map_err(|e| e.to_string())?;
            let mut slopes = Vec::new();
            for ns in &grids {
                let cfg =
                    PrecisionConfig::new(1.0, ns.clone(), model).map_err(|e| e.to_string())?;
                let r = precision_scaling(&cfg).map_err(|e| e.to_string())?;
                for s in [r.slope, r.slope_closed_form] {
                    ok &= (s - target).abs() <= 0.02 * target.abs();
                    slopes.push(format!("{s:.4}"));
                }
            }
            lines.push(format!("{form:?} β={beta}: {}", slopes.join("/")));
        }
    }
    let detail = lines.join(", ");
    check(ok, detail.clone())?;
    within_time(start.elapsed(), 1.0, detail)
}

fn correlated_dfs() -> Outcome {
    let mut worst = 0.0f64;
    let t = 1.3;
    for n in 1..=3 {
        let mut per_gamma = Vec::new();
        for gamma in [0.0, 0.1, 1.0, 10.0] {
            let c = CorrelatedDephasing::new(n, 0.4, gamma, t).map_err(|e| e.to_string())?;
            let d = c.hilbert_dim();
            let mut best = 0.0f64;
            for mu in 0..d {
                for nu in 0..d {
                    best = best.max(c.gram_diagonal(mu, nu));
                }
            }
            worst = worst.max((best - (n * n) as f64 * t * t).abs());
            worst = worst.max((c.max_gram_eigenvalue() - best).abs());
            per_gamma.push(best);
        }
        if per_gamma.iter().any(|&v| v != per_gamma[0]) {
            return Err(format!("N={n}: values differ across γ: {per_gamma:?}"));
        }
    }
    check(worst <= 1e-10, format!("max abs err {worst:.2e}"))
}

fn gram_decomposition() -> Outcome {
    let mut rng = rng_from_seed(9);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = random_phase_covariant_params(&mut rng, 0.6);
        let fam = phase_covariant_family(rng.gen_range(0.1..2.0), p, CoherenceLayout::Swapped);
        let x = rng.gen_range(-2.0..2.0);
        let triple = gram_triple(&fam, x).map_err(|e| e.to_string())?;
        for n in 2..=3 {
            let summed = gram_tensor_power(&triple, n).map_err(|e| e.to_string())?;
            let d = fam
                .tensor_power(n)
                .and_then(|f| f.derivative(x))
                .map_err(|e| e.to_string())?;
            let direct = d.gram_with(&d).map_err(|e| e.to_string())?;
            worst = worst.max(
                summed
                    .matrix()
                    .max_abs_diff(direct.matrix())
                    .map_err(|e| e.to_string())?,
            );
        }
    }
    check(worst <= 1e-10, format!("max entry diff {worst:.2e}"))
}

fn optimal_povm() -> Outcome {
    let mut rng = rng_from_seed(10);
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 200 {
        let d = rng.gen_range(2..=4);
        let drho = random_traceless_hermitian(&mut rng, d);
        let povm = optimal_povm_from_rho_prime(&drho).map_err(|e| e.to_string())?;
        if povm.is_degenerate() {
            continue;
        }
        let value = classical_bound(&povm, &drho).map_err(|e| e.to_string())?;
        worst = worst.max((value - hs_norm_sq(&drho)).abs());
        checked += 1;
    }
    check(worst <= 1e-10, format!("max abs err {worst:.2e}"))
}

fn interferometer() -> Outcome {
    let grid: Vec<f64> = (0..=10).map(|i| 0.5 + 0.05 * i as f64).collect();
    for n in 1..=50 {
        let m = interferometer_optimal_m(n, 1.0)
            .map_err(|e| e.to_string())?
            .m_max;
        if m != 0 {
            return Err(format!("m_max(η=1) = {m} at N={n}"));
        }
    }
    let curve = |n| -> Result<Vec<usize>, String> {
        grid.iter()
            .map(|&e| {
                interferometer_optimal_m(n, e)
                    .map(|r| r.m_max)
                    .map_err(|e| e.to_string())
            })
            .collect()
    };
    let (c20, c50) = (curve(20)?, curve(50)?);
    let monotone = [&c20, &c50]
        .iter()
        .all(|c| c.windows(2).all(|w| w[0] >= w[1]));
    let dominates = c20.iter().zip(&c50).all(|(a, b)| b >= a);
    let hand = interferometer_gram_diag(2, 0.5, 2, 1).map_err(|e| e.to_string())?;
    check(
        monotone && dominates && (hand - 0.375).abs() <= 1e-12,
        format!("N=20 {c20:?}, N=50 {c50:?}, probe {hand}"),
    )
}

fn ecs() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for a2 in [1.0f64, 2.0, 4.0] {
        let spec = EcsSpec::auto(Complex64::new(a2.sqrt(), 0.0)).map_err(|e| e.to_string())?;
        for eta in [0.8, 0.9, 1.0] {
            let closed = ecs_lower_bound_closed(&spec, eta)
                .map_err(|e| e.to_string())?
                .exact
                .f_lower;
            let numeric = ecs_lower_bound_numeric(&spec, eta, 0.0).map_err(|e| e.to_string())?;
            worst = worst.max(rel(numeric, closed));
        }
    }
    let detail = format!("max rel err {worst:.2e}");
    check(worst <= 1e-6, detail.clone())?;
    within_time(start.elapsed(), 30.0, detail)
}

fn bures_consistency() -> Outcome {
    let mut rng = rng_from_seed(13);
    let dx = 1e-4;
    let mut worst_liouville = 0.0f64;
    for i in 0..100 {
        let d = if i % 2 == 0 { 2 } else { 4 };
        let fam = random_channel_family(&mut rng, d);
        let rho0 = random_state(&mut rng, d);
        let x = rng.gen_range(-1.0..1.0);
        let (rho, drho) = outputs(&fam, x, &rho0);
        let ft = associated_qfi(&rho, &drho).map_err(|e| e.to_string())?;
        let (a, b) = (
            evolve(&fam, x - dx / 2.0, &rho0),
            evolve(&fam, x + dx / 2.0, &rho0),
        );
        let db = bures_distance_liouville(&a, &b).map_err(|e| e.to_string())?;
        worst_liouville = worst_liouville.max(rel(4.0 * db / (dx * dx), ft));
    }
    let mut worst_exact = 0.0f64;
    for _ in 0..100 {
        // full-rank outputs: full-rank input through a channel with at least two Kraus operators
        let fam = random_channel_family(&mut rng, 2);
        let rho0 = random_density_matrix(&mut rng, 2, 2);
        let x = rng.gen_range(-1.0..1.0);
        let (rho, drho) = outputs(&fam, x, &rho0);
        let f = exact_qfi(&rho, &drho).map_err(|e| e.to_string())?.qfi;
        let (a, b) = (
            evolve(&fam, x - dx / 2.0, &rho0),
            evolve(&fam, x + dx / 2.0, &rho0),
        );
        let db = bures_distance_exact(&a, &b).map_err(|e| e.to_string())?;
        worst_exact = worst_exact.max(rel(4.0 * db / (dx * dx), f));
    }
    check(
        worst_liouville <= 1e-4 && worst_exact <= 1e-3,
        format!("Liouville max rel err {worst_liouville:.2e}, exact max rel err {worst_exact:.2e}"),
    )
}

fn additivity() -> Outcome {
    let mut rng = rng_from_seed(14);
    let mut worst_add = 0.0f64;
    let mut worst_sub = f64::NEG_INFINITY;
    for _ in 0..100 {
        let fam = random_channel_family(&mut rng, 2);
        let (rho, drho) = outputs(&fam, rng.gen_range(-1.0..1.0), &random_state(&mut rng, 2));
        let ft = associated_qfi(&rho, &drho).map_err(|e| e.to_string())?;
        let f = lower_bound_from_state(&rho, &drho)
            .map_err(|e| e.to_string())?
            .f_lower;
        for nu in 2..=3 {
            let (p, dp) = product_pair(&rho, &drho, nu);
            let ftn = associated_qfi(&p, &dp).map_err(|e| e.to_string())?;
            worst_add = worst_add.max((ftn - nu as f64 * ft).abs() / ft.max(1.0));
            let fnu = lower_bound_from_state(&p, &dp)
                .map_err(|e| e.to_string())?
                .f_lower;
            worst_sub = worst_sub.max(fnu - nu as f64 * f);
        }
    }
    check(
        worst_add <= 1e-9 && worst_sub <= 1e-9,
        format!("additivity err {worst_add:.2e}, max F↓(ρ^⊗ν) − νF↓(ρ) {worst_sub:.2e}"),
    )
}

const GOLDEN: &[(&str, &[&str])] = &[
    (
        "bound.csv",
        &[
            "bound",
            "--channel",
            "dephasing",
            "--gamma",
            "0.1",
            "--N",
            "3",
            "--t",
            "1",
        ],
    ),
    (
        "bound.json",
        &[
            "--format",
            "json",
            "bound",
            "--channel",
            "unitary",
            "--N",
            "4",
            "--t",
            "0.5",
        ],
    ),
    ("sweep.csv", &["sweep"]),
    (
        "sweep.json",
        &[
            "--format",
            "json",
            "sweep",
            "--beta-perp",
            "2",
            "--form",
            "truncated",
        ],
    ),
    ("interferometer.csv", &["interferometer", "--N", "20"]),
    (
        "interferometer.json",
        &[
            "--format",
            "json",
            "interferometer",
            "--N",
            "50",
            "--k",
            "50",
            "--m",
            "3",
        ],
    ),
    ("ecs.csv", &["ecs"]),
    (
        "ecs.json",
        &[
            "--format",
            "json",
            "ecs",
            "--alpha-sq",
            "1",
            "--eta",
            "0.9",
            "--oracle",
        ],
    ),
    ("verify.csv", &["verify"]),
    ("verify.json", &["--format", "json", "verify"]),
];

fn golden_files() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("QFIBOUND_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (file, args) in GOLDEN {
        let out = Command::new(env!("CARGO_BIN_EXE_qfibound"))
            .args(*args)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{file}: exit {:?}", out.status.code()));
        }
        let path = dir.join(file);
        if bless {
            std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
            continue;
        }
        let expected = std::fs::read(&path).map_err(|e| format!("{file}: {e}"))?;
        if expected != out.stdout {
            mismatched.push(*file);
        }
    }
    check(
        mismatched.is_empty(),
        format!("{} files, mismatched {mismatched:?}", GOLDEN.len()),
    )
}

fn main() {
    let criteria: [Criterion; 15] = [
        (
            "half-QFI identity for pure states under unitaries",
            half_qfi_identity,
        ),
        ("unitary norm N²t² and its top eigenspace", unitary_norm),
        (
            "GHZ reaches half the norm inside the τ regime",
            ghz_half_norm,
        ),
        (
            "dephasing norm N²t²η⊥^2N, exceeded beyond τ",
            eta_perp_formula,
        ),
        ("F↓ ≤ exact QFI on random channels", bound_validity),
        ("unital τ closed form", tau_closed_form),
        ("cost scaling slopes −1 and −1.5", scaling_law),
        (
            "correlated dephasing decoherence-free maximum",
            correlated_dfs,
        ),
        ("summed Gram equals product-rule Gram", gram_decomposition),
        ("optimal POVM reaches tr ρ′²", optimal_povm),
        ("interferometer m_max trends", interferometer),
        ("ECS closed form vs truncated oracle", ecs),
        ("Bures second differences", bures_consistency),
        ("additivity of F̃, subadditivity of F↓", additivity),
        ("CLI golden files", golden_files),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
