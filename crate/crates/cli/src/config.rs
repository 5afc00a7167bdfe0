//! JSON run configuration.
//!
//! ```json
//! {
//!   "graph": {"kind": "ncube", "n": 3, "lengths": [1.0],
//!             "potentials": [{"kind": "zero"}]},
//!   "command-params": {"lambda-max": 60.0, "grid": 5},
//!   "tolerances": {"steps-per-wavelength": 64}
//! }
//! ```
//!
//! At most one of `graph`, `interval` and `tiling` may be present. A single
//! length or potential is repeated over all sides or edges; otherwise the
//! counts must match the system. Unknown keys are rejected.

use std::path::PathBuf;

use qgraph_core::dispersion::{GraphKind, GraphSpec};
use qgraph_core::exec::Execution;
use qgraph_core::interval::{
    is_even, Potential, PotentialKind, GRAPHENE_DEPTH, GRAPHENE_SCALE, GRAPHENE_SPACING,
};
use qgraph_core::roots::RootOptions;
use qgraph_core::spectrum::SpectrumOptions;
use qgraph_core::tilings::TilingKind;
use qgraph_core::verify::VerifyOptions;
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_LAMBDA_MAX: f64 = 100.0;
pub const DEFAULT_LAMBDA_POINTS: usize = 101;
pub const DEFAULT_GRID: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    graph: Option<RawGraph>,
    interval: Option<RawInterval>,
    tiling: Option<RawTiling>,
    #[serde(default, rename = "command-params", alias = "params")]
    params: RawParams,
    #[serde(default)]
    tolerances: RawTolerances,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    kind: GraphKind,
    n: Option<usize>,
    lengths: Vec<f64>,
    potentials: Vec<RawPotential>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterval {
    length: f64,
    potential: RawPotential,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTiling {
    kind: TilingKind,
    lengths: Vec<f64>,
    potentials: Vec<RawPotential>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawParity {
    Even,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawPotentialKind {
    Zero,
    Constant,
    Graphene,
    Sampled,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    kind: RawPotentialKind,
    value: Option<f64>,
    d: Option<f64>,
    depth: Option<f64>,
    scale: Option<f64>,
    x: Option<Vec<f64>>,
    q: Option<Vec<f64>>,
    parity: Option<RawParity>,
}

impl RawPotential {
    fn present(&self) -> Vec<&'static str> {
        [
            ("value", self.value.is_some()),
            ("d", self.d.is_some()),
            ("depth", self.depth.is_some()),
            ("scale", self.scale.is_some()),
            ("x", self.x.is_some()),
            ("q", self.q.is_some()),
        ]
        .into_iter()
        .filter_map(|(k, p)| p.then_some(k))
        .collect()
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawParams {
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lambda_points: Option<usize>,
    lambda: Option<f64>,
    theta: Option<Vec<f64>>,
    grid: Option<usize>,
    output: Option<PathBuf>,
    format: Option<Format>,
    execution: Option<Execution>,
    trials: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawTolerances {
    steps_per_wavelength: Option<u32>,
    u_tol: Option<f64>,
    verify_tol: Option<f64>,
    drho: Option<f64>,
    parity_tol: Option<f64>,
    touching_width: Option<f64>,
    det_certificate_tol: Option<f64>,
    abs_certificate_tol: Option<f64>,
}

/// The structure a command runs on.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    None,
    Graph(GraphSpec),
    Interval {
        q: Potential,
        a: f64,
    },
    Tiling {
        kind: TilingKind,
        edges: Vec<(Potential, f64)>,
    },
}

impl System {
    pub fn name(&self) -> &'static str {
        match self {
            System::None => "none",
            System::Graph(_) => "graph",
            System::Interval { .. } => "interval",
            System::Tiling { .. } => "tiling",
        }
    }

    fn min_potential(&self) -> Option<f64> {
        match self {
            System::None => None,
            System::Graph(g) => Some(g.min_potential()),
            System::Interval { q, a } => Some(q.min_on(*a)),
            System::Tiling { edges, .. } => Some(
                edges
                    .iter()
                    .map(|(q, a)| q.min_on(*a))
                    .fold(f64::INFINITY, f64::min),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_points: usize,
    pub lambda: Option<f64>,
    pub theta: Option<Vec<f64>>,
    pub grid: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub trials: usize,
    pub seed: u64,
}

/// Validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: System,
    pub params: Params,
    pub spectrum: SpectrumOptions,
    pub verify: VerifyOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config("{}").expect("empty config is valid")
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub lambda_max: Option<f64>,
    pub grid: Option<usize>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(p) = &o.output {
            self.params.output = Some(p.clone());
        }
        if let Some(f) = o.format {
            self.params.format = f;
        }
        if let Some(l) = o.lambda_max {
            self.params.lambda_max = l;
        }
        if let Some(g) = o.grid {
            self.params.grid = g;
        }
        check_params(&self.params)
    }
}

fn semantic(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {msg}"))
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let located = |path: String, inner: serde_json::Error| {
        let at = if path == "." {
            String::new()
        } else {
            format!(" at {path}")
        };
        let what = if inner.is_syntax() || inner.is_eof() {
            "syntax error"
        } else {
            "schema error"
        };
        // serde_json appends "at line L column C" to the message.
        CliError::Config(format!("{what}{at}: {inner}"))
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| located(e.path().to_string(), e.into_inner()))?;
    de.end().map_err(|e| located(".".into(), e))?;
    build(raw)
}

fn build(raw: RawConfig) -> Result<RunConfig, CliError> {
    let spectrum = tolerances(&raw.tolerances)?;
    let present = [
        raw.graph.is_some(),
        raw.interval.is_some(),
        raw.tiling.is_some(),
    ];
    if present.iter().filter(|&&p| p).count() > 1 {
        return Err(semantic(
            "config",
            "give at most one of \"graph\", \"interval\" and \"tiling\"",
        ));
    }
    let system = if let Some(g) = raw.graph {
        System::Graph(graph(g, &spectrum)?)
    } else if let Some(i) = raw.interval {
        let a = length("interval.length", i.length)?;
        let q = potential("interval.potential", i.potential, a, &spectrum)?;
        System::Interval { q, a }
    } else if let Some(t) = raw.tiling {
        tiling(t, &spectrum)?
    } else {
        System::None
    };

    let p = raw.params;
    let lambda_min = match p.lambda_min {
        Some(l) => l,
        None => system.min_potential().map_or(0.0, |m| m - 1.0),
    };
    let execution = p.execution.unwrap_or_default();
    let params = Params {
        lambda_min,
        lambda_max: p.lambda_max.unwrap_or(DEFAULT_LAMBDA_MAX),
        lambda_points: p.lambda_points.unwrap_or(DEFAULT_LAMBDA_POINTS),
        lambda: p.lambda,
        theta: p.theta,
        grid: p.grid.unwrap_or(DEFAULT_GRID),
        output: p.output,
        format: p.format.unwrap_or(Format::Csv),
        trials: p.trials.unwrap_or(VerifyOptions::default().trials),
        seed: p.seed.unwrap_or(VerifyOptions::default().seed),
    };
    check_params(&params)?;
    if let Some(l) = params.lambda {
        if !l.is_finite() {
            return Err(semantic("command-params.lambda", "must be finite"));
        }
    }
    if let Some(th) = &params.theta {
        if th
            .iter()
            .any(|t| !(t.is_finite() && t.abs() <= std::f64::consts::PI + 1e-12))
        {
            return Err(semantic(
                "command-params.theta",
                "components must lie in [-pi, pi]",
            ));
        }
    }
    Ok(RunConfig {
        system,
        verify: VerifyOptions {
            trials: params.trials,
            seed: params.seed,
            execution,
        },
        params,
        spectrum: SpectrumOptions {
            execution,
            ..spectrum
        },
    })
}

fn check_params(p: &Params) -> Result<(), CliError> {
    if !(p.lambda_min.is_finite() && p.lambda_max.is_finite() && p.lambda_max > p.lambda_min) {
        return Err(semantic(
            "command-params",
            format!(
                "lambda window [{}, {}] must be finite with lambda-max > lambda-min",
                p.lambda_min, p.lambda_max
            ),
        ));
    }
    if p.lambda_points < 2 {
        return Err(semantic(
            "command-params.lambda-points",
            "needs at least 2 points",
        ));
    }
    if p.grid < 2 {
        return Err(semantic(
            "command-params.grid",
            "needs at least 2 points per axis",
        ));
    }
    if p.trials == 0 {
        return Err(semantic("command-params.trials", "must be positive"));
    }
    Ok(())
}

fn positive(path: &str, v: Option<f64>, default: f64) -> Result<f64, CliError> {
    match v {
        None => Ok(default),
        Some(x) if x.is_finite() && x > 0.0 => Ok(x),
        Some(x) => Err(semantic(
            path,
            format!("must be positive and finite, got {x}"),
        )),
    }
}

fn tolerances(t: &RawTolerances) -> Result<SpectrumOptions, CliError> {
    let d = SpectrumOptions::default();
    let spw = t.steps_per_wavelength.unwrap_or(d.steps_per_wavelength);
    if spw < 4 {
        return Err(semantic(
            "tolerances.steps-per-wavelength",
            format!("must be at least 4, got {spw}"),
        ));
    }
    let drho = match t.drho {
        None => None,
        Some(x) => Some(positive("tolerances.drho", Some(x), 0.0)?),
    };
    Ok(SpectrumOptions {
        steps_per_wavelength: spw,
        root: RootOptions {
            u_tol: positive("tolerances.u-tol", t.u_tol, d.root.u_tol)?,
            verify_tol: positive("tolerances.verify-tol", t.verify_tol, d.root.verify_tol)?,
            ..d.root
        },
        drho,
        parity_tol: positive("tolerances.parity-tol", t.parity_tol, d.parity_tol)?,
        touching_width: positive(
            "tolerances.touching-width",
            t.touching_width,
            d.touching_width,
        )?,
        det_certificate_tol: positive(
            "tolerances.det-certificate-tol",
            t.det_certificate_tol,
            d.det_certificate_tol,
        )?,
        abs_certificate_tol: positive(
            "tolerances.abs-certificate-tol",
            t.abs_certificate_tol,
            d.abs_certificate_tol,
        )?,
        execution: d.execution,
    })
}

fn length(path: &str, a: f64) -> Result<f64, CliError> {
    if a.is_finite() && a > 0.0 {
        Ok(a)
    } else {
        Err(semantic(path, format!("lengths must be positive, got {a}")))
    }
}

/// Builds the potential on `[0, a]`; parity is inferred unless given.
fn potential(
    path: &str,
    raw: RawPotential,
    a: f64,
    opts: &SpectrumOptions,
) -> Result<Potential, CliError> {
    let err = |e: qgraph_core::Error| semantic(path, e);
    let allowed: &[&str] = match raw.kind {
        RawPotentialKind::Zero => &[],
        RawPotentialKind::Constant => &["value"],
        RawPotentialKind::Graphene => &["d", "depth", "scale"],
        RawPotentialKind::Sampled => &["x", "q"],
    };
    if let Some(k) = raw.present().into_iter().find(|k| !allowed.contains(k)) {
        return Err(semantic(
            path,
            format!("field \"{k}\" does not apply to a {:?} potential", raw.kind),
        ));
    }
    let q = match raw.kind {
        RawPotentialKind::Zero => Potential::zero(),
        RawPotentialKind::Constant => {
            let value = raw
                .value
                .ok_or_else(|| semantic(path, "constant potential needs \"value\""))?;
            if !value.is_finite() {
                return Err(semantic(path, "constant value must be finite"));
            }
            Potential::constant(value)
        }
        RawPotentialKind::Graphene => Potential::graphene_with(
            raw.d.unwrap_or(GRAPHENE_SPACING),
            raw.depth.unwrap_or(GRAPHENE_DEPTH),
            raw.scale.unwrap_or(GRAPHENE_SCALE),
        )
        .map_err(err)?,
        RawPotentialKind::Sampled => {
            let (Some(x), Some(q)) = (raw.x, raw.q) else {
                return Err(semantic(path, "sampled potential needs \"x\" and \"q\""));
            };
            let p = Potential::sampled(x, q).map_err(err)?;
            let end = p.domain_end().unwrap_or(a);
            if (end - a).abs() > 1e-12 * a.max(1.0) {
                return Err(semantic(
                    path,
                    format!("sampled potential ends at {end} but the edge has length {a}"),
                ));
            }
            p
        }
    };
    let numerically_even = || match q.kind {
        PotentialKind::Zero | PotentialKind::Constant { .. } => true,
        _ => is_even(&q, a, opts.parity_tol),
    };
    Ok(match raw.parity {
        Some(RawParity::Unknown) => q.with_parity(qgraph_core::interval::Parity::Unknown),
        Some(RawParity::Even) if !numerically_even() => {
            return Err(semantic(
                path,
                format!("declared even but q(x) != q(a - x) on [0, {a}]"),
            ))
        }
        _ if numerically_even() => q.declare_even(),
        _ => q,
    })
}

/// A single entry is repeated `count` times.
fn broadcast<T>(path: &str, what: &str, v: Vec<T>, count: usize) -> Result<Vec<T>, CliError>
where
    T: Clone,
{
    match v.len() {
        l if l == count => Ok(v),
        1 => Ok(vec![v[0].clone(); count]),
        l => Err(semantic(path, format!("expected {count} {what}, got {l}"))),
    }
}

fn graph(g: RawGraph, opts: &SpectrumOptions) -> Result<GraphSpec, CliError> {
    let n = match (g.kind, g.n) {
        (GraphKind::Rectangle, Some(n)) if n != 2 => {
            return Err(semantic(
                "graph.n",
                format!("a rectangle has n = 2, got {n}"),
            ))
        }
        (GraphKind::Rectangle, _) => 2,
        (GraphKind::Ncube, Some(n)) => n,
        (GraphKind::Ncube, None) => g.lengths.len(),
    };
    if n < 2 {
        return Err(semantic(
            "graph.n",
            format!("an n-cube needs n >= 2, got {n}"),
        ));
    }
    let lengths = broadcast("graph.lengths", "side lengths", g.lengths, n)?;
    for (i, &a) in lengths.iter().enumerate() {
        length(&format!("graph.lengths[{i}]"), a)?;
    }
    let raws = g.potentials;
    let edges = 2 * n;
    if raws.len() != 1 && raws.len() != edges {
        return Err(semantic(
            "graph.potentials",
            format!("expected {edges} edge potentials, got {}", raws.len()),
        ));
    }
    let single = raws.len() == 1;
    // Same side assignment as `GraphSpec::edge_length`.
    let edge_length = |j: usize| {
        let k = j + 1;
        if k == 1 || k == edges {
            lengths[0]
        } else if k <= n {
            lengths[k - 1]
        } else {
            lengths[edges - k]
        }
    };
    let mut potentials = Vec::with_capacity(edges);
    for (i, raw) in raws.into_iter().enumerate() {
        let a = edge_length(i);
        potentials.push(potential(&format!("graph.potentials[{i}]"), raw, a, opts)?);
    }
    if single {
        potentials = vec![potentials[0].clone(); edges];
    }
    let spec = GraphSpec::new(g.kind, lengths, potentials).map_err(|e| semantic("graph", e))?;
    Ok(spec)
}

fn tiling(t: RawTiling, opts: &SpectrumOptions) -> Result<System, CliError> {
    let count = t.kind.data_count();
    let lengths = broadcast("tiling.lengths", "edge lengths", t.lengths, count)?;
    if t.potentials.len() != 1 && t.potentials.len() != count {
        return Err(semantic(
            "tiling.potentials",
            format!(
                "expected {count} edge potentials, got {}",
                t.potentials.len()
            ),
        ));
    }
    let single = t.potentials.len() == 1;
    let mut edges = Vec::with_capacity(count);
    for (i, raw) in t.potentials.into_iter().enumerate() {
        let a = length(&format!("tiling.lengths[{i}]"), lengths[i])?;
        edges.push((
            potential(&format!("tiling.potentials[{i}]"), raw, a, opts)?,
            a,
        ));
    }
    if single {
        let q = edges[0].0.clone();
        edges = lengths.iter().map(|&a| (q.clone(), a)).collect();
        if count > 1 && lengths.iter().any(|&a| a != lengths[0]) {
            return Err(semantic(
                "tiling.potentials",
                "a single potential needs a single edge length",
            ));
        }
    }
    Ok(System::Tiling {
        kind: t.kind,
        edges,
    })
}
