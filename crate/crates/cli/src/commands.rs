use num_complex::Complex64;
use qgraph_core::dispersion::{dephase, ncube_char_det, GraphSpec, QuasiMomentum};
use qgraph_core::exec::map_collect;
use qgraph_core::interval::{solve_interval, IntervalData, Potential};
use qgraph_core::spectrum::{
    band_surface, brillouin_grid, dispersion_solve, spectrum, tiling_roots, BandSurface,
    DispersionRoot, SurfacePoint,
};
use qgraph_core::verify::run_suite;
use serde::Serialize;

use crate::config::{RunConfig, System};
use crate::error::CliError;
use crate::output::{Cell, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Table of (λ, C, C', S, S') on an interval.
    Interval,
    /// Φ over a θ-grid at fixed λ, or its λ-roots at fixed θ.
    Dispersion,
    /// Point spectrum and bands of identical even edges.
    Bands,
    /// Band surface λ_j(θ) over a θ-grid.
    Surface,
    /// Roots of a tiling's dispersion relation over a θ-grid.
    Tilings,
    /// Oracle-equivalence suite.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Interval => "interval",
            Command::Dispersion => "dispersion",
            Command::Bands => "bands",
            Command::Surface => "surface",
            Command::Tilings => "tilings",
            Command::Verify => "verify",
        }
    }
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    /// One-line summary for the terminal.
    pub summary: Option<String>,
    /// `(failed, total)` checks of a verify run.
    pub failed_checks: Option<(usize, usize)>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome {
            report,
            summary: None,
            failed_checks: None,
        }
    }
}

fn mismatch(cmd: Command, need: &str, cfg: &RunConfig) -> CliError {
    CliError::Usage(format!(
        "`{}` needs {need}, but the config describes {}",
        cmd.name(),
        match cfg.system {
            System::None => "no system".to_owned(),
            ref s => format!("a {}", s.name()),
        }
    ))
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Interval => interval(cfg).map(Into::into),
        Command::Dispersion => dispersion(cfg).map(Into::into),
        Command::Bands => bands(cfg).map(Into::into),
        Command::Surface => surface(cfg).map(Into::into),
        Command::Tilings => tilings(cfg).map(Into::into),
        Command::Verify => verify(cfg),
    }
}

fn window(cfg: &RunConfig) -> (f64, f64) {
    (cfg.params.lambda_min, cfg.params.lambda_max)
}

fn theta_header(n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("theta_{j}")).collect()
}

#[derive(Serialize)]
struct IntervalTable<'a> {
    length: f64,
    potential: &'a Potential,
    rows: Vec<IntervalData>,
}

fn interval(cfg: &RunConfig) -> Result<Report, CliError> {
    let System::Interval { q, a } = &cfg.system else {
        return Err(mismatch(Command::Interval, "an \"interval\" section", cfg));
    };
    let (lo, hi) = window(cfg);
    let k = cfg.params.lambda_points - 1;
    let lambdas: Vec<f64> = (0..=k)
        .map(|i| lo + (hi - lo) * i as f64 / k as f64)
        .collect();
    let spw = cfg.spectrum.steps_per_wavelength;
    let rows = map_collect(cfg.spectrum.execution, &lambdas, |&l| {
        solve_interval(q, *a, l, spw)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(["lambda", "c", "cp", "s", "sp"]);
    for d in &rows {
        t.push(vec![
            d.lambda.into(),
            d.c.into(),
            d.cp.into(),
            d.s.into(),
            d.sp.into(),
        ]);
    }
    Report::new(
        t,
        &IntervalTable {
            length: *a,
            potential: q,
            rows,
        },
    )
}

#[derive(Serialize)]
struct PhiRow {
    theta: Vec<f64>,
    phi_re: f64,
    phi_im: f64,
    phi_dephased: f64,
}

#[derive(Serialize)]
struct PhiGrid {
    lambda: f64,
    n: usize,
    grid_per_axis: usize,
    rows: Vec<PhiRow>,
}

#[derive(Serialize)]
struct RootList<'a> {
    theta: &'a [f64],
    window: (f64, f64),
    roots: Vec<DispersionRoot>,
}

fn graph(cmd: Command, cfg: &RunConfig) -> Result<&GraphSpec, CliError> {
    match &cfg.system {
        System::Graph(g) => Ok(g),
        _ => Err(mismatch(cmd, "a \"graph\" section", cfg)),
    }
}

fn dispersion(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = graph(Command::Dispersion, cfg)?;
    let n = g.n();
    match (cfg.params.lambda, &cfg.params.theta) {
        (Some(lambda), None) => {
            let data = g.edge_data(lambda, cfg.spectrum.steps_per_wavelength)?;
            let grid = brillouin_grid(n, cfg.params.grid)?;
            let rows = map_collect(cfg.spectrum.execution, &grid, |th| {
                let qm = QuasiMomentum::new(th.clone())?;
                let phi: Complex64 = ncube_char_det(&data, &qm)?;
                Ok(PhiRow {
                    theta: th.clone(),
                    phi_re: phi.re,
                    phi_im: phi.im,
                    phi_dephased: dephase(phi, &qm).re,
                })
            })
            .into_iter()
            .collect::<Result<Vec<_>, qgraph_core::Error>>()?;
            let mut header = theta_header(n);
            header.extend(["phi_re", "phi_im", "phi_dephased"].map(String::from));
            let mut t = Table::new(header);
            for r in &rows {
                let mut row: Vec<Cell> = r.theta.iter().map(|&x| x.into()).collect();
                row.extend([r.phi_re.into(), r.phi_im.into(), r.phi_dephased.into()]);
                t.push(row);
            }
            Report::new(
                t,
                &PhiGrid {
                    lambda,
                    n,
                    grid_per_axis: cfg.params.grid,
                    rows,
                },
            )
        }
        (None, Some(theta)) => {
            let qm = QuasiMomentum::new(theta.clone())?;
            let roots = dispersion_solve(g, &qm, window(cfg), &cfg.spectrum)?;
            let mut t = Table::new(["lambda", "kind", "order"]);
            for r in &roots {
                t.push(vec![
                    r.lambda.into(),
                    kind_name(r.kind).into(),
                    r.order.into(),
                ]);
            }
            Report::new(
                t,
                &RootList {
                    theta,
                    window: window(cfg),
                    roots,
                },
            )
        }
        _ => Err(CliError::Usage(
            "`dispersion` needs exactly one of command-params.lambda (values over the \
             theta-grid) and command-params.theta (roots in the lambda window)"
                .into(),
        )),
    }
}

fn kind_name<T: Serialize>(k: T) -> String {
    match serde_json::to_value(k) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

fn bands(cfg: &RunConfig) -> Result<Report, CliError> {
    let (q, a) = match &cfg.system {
        System::Interval { q, a } => (q, *a),
        System::Graph(g) if g.is_uniform() => (&g.potentials()[0], g.lengths()[0]),
        _ => {
            return Err(mismatch(
                Command::Bands,
                "an \"interval\" section or a graph with identical edges",
                cfg,
            ))
        }
    };
    let res = spectrum(q, a, cfg.params.lambda_max, &cfg.spectrum)?;
    let mut t = Table::new([
        "record",
        "lambda_lo",
        "lambda_hi",
        "edge_kind_lo",
        "edge_kind_hi",
    ]);
    for b in &res.ac_bands {
        t.push(vec![
            "band".into(),
            b.lambda_lo.into(),
            b.lambda_hi.into(),
            kind_name(b.edge_kind_lo).into(),
            kind_name(b.edge_kind_hi).into(),
        ]);
    }
    for &l in &res.point_spectrum {
        t.push(vec!["point".into(), l.into(), l.into()]);
    }
    for &l in &res.touchings {
        t.push(vec!["touching".into(), l.into(), l.into()]);
    }
    Report::new(t, &res)
}

fn surface_table(s: &BandSurface) -> Table {
    let k = s.max_root_count();
    let mut header = theta_header(s.n);
    header.push("count".into());
    header.extend((1..=k).map(|j| format!("lambda_{j}")));
    let mut t = Table::new(header);
    for p in &s.points {
        let mut row: Vec<Cell> = p.theta.iter().map(|&x| x.into()).collect();
        row.push(p.roots.len().into());
        row.extend(p.roots.iter().map(|r| Cell::Num(r.lambda)));
        t.push(row);
    }
    t
}

fn surface(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = graph(Command::Surface, cfg)?;
    let s = band_surface(g, cfg.params.grid, window(cfg), &cfg.spectrum)?;
    Report::new(surface_table(&s), &s)
}

fn tilings(cfg: &RunConfig) -> Result<Report, CliError> {
    let System::Tiling { kind, edges } = &cfg.system else {
        return Err(mismatch(Command::Tilings, "a \"tiling\" section", cfg));
    };
    let (grid, per_axis) = match &cfg.params.theta {
        Some(th) if th.len() == 2 => (vec![th.clone()], 1),
        Some(th) => {
            return Err(CliError::Usage(format!(
                "tilings take a 2-component theta, got {}",
                th.len()
            )))
        }
        None => (brillouin_grid(2, cfg.params.grid)?, cfg.params.grid),
    };
    let w = window(cfg);
    let points = map_collect(cfg.spectrum.execution, &grid, |th| {
        tiling_roots(*kind, edges, (th[0], th[1]), w, &cfg.spectrum).map(|roots| SurfacePoint {
            theta: th.clone(),
            roots,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let s = BandSurface {
        n: 2,
        grid_per_axis: per_axis,
        window: w,
        points,
    };
    Report::new(surface_table(&s), &s)
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    checks: &'a [qgraph_core::verify::CheckReport],
    total_checks: usize,
    failed: usize,
    total_trials: usize,
}

fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let reports = run_suite(&cfg.verify)?;
    let mut t = Table::new([
        "check",
        "trials",
        "passed",
        "max_error",
        "tolerance",
        "status",
    ]);
    for r in &reports {
        t.push(vec![
            r.name.as_str().into(),
            r.trials.into(),
            r.passed.into(),
            r.max_error.into(),
            r.tolerance.into(),
            if r.ok() { "pass" } else { "fail" }.into(),
        ]);
    }
    let failed = reports.iter().filter(|r| !r.ok()).count();
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    let summary = format!(
        "verify: {} checks, {} passed, {} failed, {trials} trials",
        reports.len(),
        reports.len() - failed,
        failed
    );
    let report = Report::new(
        t,
        &VerifySummary {
            checks: &reports,
            total_checks: reports.len(),
            failed,
            total_trials: trials,
        },
    )?;
    Ok(Outcome {
        report,
        summary: Some(summary),
        failed_checks: (failed > 0).then_some((failed, reports.len())),
    })
}
