use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use super::output::{Cell, Report, Table};
use super::{
    BoundArgs, ChannelKind, Cli, CliError, Command, EcsArgs, FormChoice, InterferometerArgs,
    LayoutChoice, StateChoice, SweepArgs, VerifyArgs,
};
use crate::bound::tensor_power_action;
use crate::channels::{
    named_noise, phase_covariant_family, rotation_family, CoherenceLayout, EcsSpec, ExpansionForm,
    NoiseKind, NoiseParams, ShortTimeModel,
};
use crate::error::Error;
use crate::metrology::{
    ecs_lower_bound_closed, ecs_lower_bound_numeric, interferometer_gram_diag,
    interferometer_optimal_m, precision_scaling, PrecisionConfig,
};
use crate::numerics::ComplexMatrix;
use crate::qfi_oracle::exact_qfi;
use crate::states::ghz_state;
use crate::verify::{run_suites, VerifyOptions};

pub(super) fn execute(cli: &Cli) -> Result<(Report, i32), CliError> {
    let (mut report, status) = match &cli.command {
        Command::Bound(a) => (bound(a)?, 0),
        Command::Sweep(a) => (sweep(a)?, 0),
        Command::Interferometer(a) => (interferometer(a)?, 0),
        Command::Ecs(a) => (ecs(a)?, 0),
        Command::Verify(a) => verify(a, cli.seed)?,
    };
    report
        .parameters
        .insert(0, ("seed".into(), Cell::from(cli.seed)));
    Ok((report, status))
}

fn channel_name(kind: ChannelKind) -> &'static str {
    match kind {
        ChannelKind::Unitary => "unitary",
        ChannelKind::Dephasing => "dephasing",
        ChannelKind::Depolarizing => "depolarizing",
        ChannelKind::AmplitudeDamping => "amplitude-damping",
        ChannelKind::PhaseCovariant => "phase-covariant",
    }
}

#[derive(Deserialize)]
struct MatrixFile {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

fn read_state(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read state file {}: {e}", path.display())))?;
    let m: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("state file {}: {e}", path.display())))?;
    let rows: Vec<Vec<Complex64>> =
        m.re.iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &re)| {
                        let im =
                            m.im.as_ref()
                                .and_then(|im| im.get(i))
                                .and_then(|r| r.get(j))
                                .copied()
                                .unwrap_or(0.0);
                        Complex64::new(re, im)
                    })
                    .collect()
            })
            .collect();
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CliError::Domain(Error::InvalidState(
            "state matrix must be square".into(),
        )));
    }
    Ok(ComplexMatrix::from_rows(&rows)?)
}

fn bound(a: &BoundArgs) -> Result<Report, CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("--N must be >= 1".into()));
    }
    if !(a.t >= 0.0) {
        return Err(CliError::Usage(format!("--t must be >= 0, got {}", a.t)));
    }
    let layout = match a.layout {
        LayoutChoice::Swapped => CoherenceLayout::Swapped,
        LayoutChoice::Diagonal => CoherenceLayout::Diagonal,
    };
    let (family, params) = match a.channel {
        ChannelKind::Unitary => (rotation_family(a.t), NoiseParams::identity()),
        ChannelKind::PhaseCovariant => {
            let p = NoiseParams::new(a.k, a.eta_par, a.eta_perp, a.theta)?;
            (phase_covariant_family(a.t, p, layout), p)
        }
        named => {
            let kind = match named {
                ChannelKind::Dephasing => NoiseKind::Dephasing,
                ChannelKind::Depolarizing => NoiseKind::Depolarizing,
                _ => NoiseKind::AmplitudeDamping,
            };
            let p = named_noise(kind, a.gamma, a.t)?;
            (phase_covariant_family(a.t, p, layout), p)
        }
    };
    let rho0 = match a.state {
        StateChoice::Ghz => ghz_state(a.n)?,
        StateChoice::File => {
            let path = a
                .state_file
                .as_ref()
                .ok_or_else(|| CliError::Usage("--state file requires --state-file".into()))?;
            read_state(path)?
        }
    };
    let (v, vp) = tensor_power_action(&family, a.omega, a.n, &rho0)?;
    let dim = rho0.rows();
    let rho = ComplexMatrix::from_vec(dim, dim, v)?.hermitian_part()?;
    let drho = ComplexMatrix::from_vec(dim, dim, vp)?.hermitian_part()?;
    let b = crate::bound::lower_bound_from_state(&rho, &drho)?;
    let f_exact = match exact_qfi(&rho, &drho) {
        Ok(r) => Some(r.qfi),
        Err(Error::UnsupportedDerivative { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let ratio = f_exact.filter(|f| *f > 0.0).map(|f| b.f_lower / f);

    let mut report = Report::new("bound");
    report.param("channel", channel_name(a.channel));
    report.param("gamma", a.gamma);
    report.param("k", params.k());
    report.param("eta_par", params.eta_par());
    report.param("eta_perp", params.eta_perp());
    report.param("theta", params.theta());
    report.param(
        "layout",
        if a.layout == LayoutChoice::Swapped {
            "swapped"
        } else {
            "diagonal"
        },
    );
    report.param("omega", a.omega);
    report.param(
        "state",
        if a.state == StateChoice::Ghz {
            "ghz"
        } else {
            "file"
        },
    );
    let mut t = Table::new(
        "bound",
        &[
            "N", "t", "eta_perp", "f_lower", "f_exact", "ratio", "purity",
        ],
    );
    t.push(vec![
        a.n.into(),
        a.t.into(),
        params.eta_perp().into(),
        b.f_lower.into(),
        f_exact.into(),
        ratio.into(),
        b.purity.into(),
    ]);
    report.tables.push(t);
    Ok(report)
}

fn sweep(a: &SweepArgs) -> Result<Report, CliError> {
    let form = match a.form {
        FormChoice::Truncated => ExpansionForm::Truncated,
        FormChoice::Exponential => ExpansionForm::Exponential,
    };
    let model = ShortTimeModel::new(
        a.alpha_perp,
        a.beta_perp,
        a.alpha_par,
        a.beta_par,
        a.alpha_k,
        a.beta_k,
        form,
    )?;
    let config = PrecisionConfig::new(a.total_time, a.n.clone(), model)?;
    let r = precision_scaling(&config)?;

    let mut report = Report::new("sweep");
    report.param("alpha_perp", a.alpha_perp);
    report.param("beta_perp", a.beta_perp);
    report.param("alpha_par", a.alpha_par);
    report.param("beta_par", a.beta_par);
    report.param("alpha_k", a.alpha_k);
    report.param("beta_k", a.beta_k);
    report.param(
        "form",
        if form == ExpansionForm::Truncated {
            "truncated"
        } else {
            "exponential"
        },
    );
    report.param("T", a.total_time);
    let mut t = Table::new(
        "sweep",
        &[
            "N",
            "tau",
            "t_opt_paper",
            "t_opt_numeric",
            "min_cost",
            "cost_at_t_opt_paper",
        ],
    );
    for p in &r.per_n {
        t.push(vec![
            p.n.into(),
            p.tau.into(),
            p.t_opt_paper.into(),
            p.t_opt.into(),
            p.min_cost.into(),
            p.cost_closed_form.into(),
        ]);
    }
    report.tables.push(t);
    if r.per_n.len() < 2 {
        report.summary("degenerate", "single N: no slope");
    } else {
        report.summary("slope", r.slope);
        report.summary("slope_at_t_opt_paper", r.slope_closed_form);
    }
    report.summary("predicted_exponent", r.predicted_exponent);
    report.summary("c_lower", r.c_lower);
    Ok(report)
}

fn default_eta_grid() -> Vec<f64> {
    (0..=10).map(|i| (50 + 5 * i) as f64 / 100.0).collect()
}

fn interferometer(a: &InterferometerArgs) -> Result<Report, CliError> {
    let etas = if a.eta.is_empty() {
        default_eta_grid()
    } else {
        a.eta.clone()
    };
    let mut report = Report::new("interferometer");
    report.param("N", a.n);
    let mut scan = Table::new("scan", &["eta", "m_max", "gram_value", "row_N_is_global"]);
    for &eta in &etas {
        let r = interferometer_optimal_m(a.n, eta)?;
        scan.push(vec![
            eta.into(),
            r.m_max.into(),
            r.value.into(),
            r.row_n_is_global.into(),
        ]);
    }
    report.tables.push(scan);
    if let (Some(k), Some(m)) = (a.k, a.m) {
        report.param("k", k);
        report.param("m", m);
        let mut probe = Table::new("probe", &["eta", "k", "m", "gram_value"]);
        for &eta in &etas {
            probe.push(vec![
                eta.into(),
                k.into(),
                m.into(),
                interferometer_gram_diag(a.n, eta, k, m)?.into(),
            ]);
        }
        report.tables.push(probe);
    }
    Ok(report)
}

fn ecs(a: &EcsArgs) -> Result<Report, CliError> {
    let mut report = Report::new("ecs");
    report.param("oracle", a.oracle);
    report.param(
        "n_max",
        a.n_max.map_or(Cell::Text("auto".into()), Cell::from),
    );
    let mut cols = vec![
        "alpha_sq",
        "eta",
        "n_bar",
        "xi",
        "f_lower_closed",
        "classical_term",
        "heisenberg_term",
        "f_c",
        "f_h",
        "f_lower_practical",
        "f_c_practical",
        "f_h_practical",
    ];
    if a.oracle {
        cols.extend(["n_max", "f_lower_numeric", "rel_err"]);
    }
    let mut t = Table::new("ecs", &cols);
    for &a2 in &a.alpha_sq {
        if !(a2 >= 0.0) {
            return Err(CliError::Usage(format!(
                "--alpha-sq values must be >= 0, got {a2}"
            )));
        }
        let alpha = Complex64::new(a2.sqrt(), 0.0);
        let spec = match a.n_max {
            Some(n) => EcsSpec::new(alpha, n)?,
            None => EcsSpec::auto(alpha)?,
        };
        for &eta in &a.eta {
            let b = ecs_lower_bound_closed(&spec, eta)?;
            let mut row: Vec<Cell> = vec![
                a2.into(),
                eta.into(),
                b.mean_photons.into(),
                b.xi.into(),
                b.exact.f_lower.into(),
                b.exact.classical_term.into(),
                b.exact.heisenberg_term.into(),
                b.exact.f_c.into(),
                b.exact.f_h.into(),
                b.practical.f_lower.into(),
                b.practical.f_c.into(),
                b.practical.f_h.into(),
            ];
            if a.oracle {
                let numeric = ecs_lower_bound_numeric(&spec, eta, 0.0)?;
                let closed = b.exact.f_lower;
                let rel = if closed == 0.0 {
                    numeric.abs()
                } else {
                    (numeric - closed).abs() / closed
                };
                row.extend([spec.n_max().into(), numeric.into(), rel.into()]);
            }
            t.push(row);
        }
    }
    report.tables.push(t);
    Ok(report)
}

fn verify(a: &VerifyArgs, seed: u64) -> Result<(Report, i32), CliError> {
    let results = run_suites(&VerifyOptions {
        seed,
        inject_corruption: a.inject_corruption,
    });
    let mut report = Report::new("verify");
    if a.inject_corruption {
        report.param("inject_corruption", true);
    }
    let mut t = Table::new(
        "suites",
        &[
            "suite",
            "passed",
            "instances",
            "max_error",
            "tolerance",
            "failure",
        ],
    );
    for r in &results {
        t.push(vec![
            r.name.into(),
            r.passed.into(),
            r.instances.into(),
            r.max_error.into(),
            r.tolerance.into(),
            r.failure.clone().map_or(Cell::Empty, Cell::from),
        ]);
    }
    report.tables.push(t);
    let all = results.iter().all(|r| r.passed);
    report.summary("all_passed", all);
    Ok((report, if all { 0 } else { 1 }))
}
