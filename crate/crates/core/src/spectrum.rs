//! Spectra of the periodic operator from the characteristic conditions.
//!
//! * point spectrum: Dirichlet eigenvalues, the zeros of `λ ↦ S(a, λ)`;
//! * absolutely continuous spectrum: `{λ : S'(a, λ) ∈ [-1, 1]}` for identical
//!   even edges;
//! * dispersion surfaces: the `λ`-zeros of the determinant `Φ(λ; θ)` over a
//!   grid of the Brillouin zone.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::detkit::smallest_singular_value;
use crate::dispersion::{
    dephase, ncube_char_det, ncube_matrix, t_bracket, GraphSpec, QuasiMomentum,
};
use crate::error::{invalid, Error, Result};
use crate::exec::{map_collect, Execution};
use crate::interval::{
    is_even, solve_interval, IntervalData, Potential, DEFAULT_STEPS_PER_WAVELENGTH,
};
use crate::roots::{
    abs_min_certificate, find_roots, from_u, golden_min, scan_grid, to_u, Root, RootKind,
    RootOptions, NEGATIVE_SCAN_POINTS,
};
use crate::tilings::{real_polynomial_roots, tiling_band_polynomial, tiling_char, TilingKind};

/// Extra refinement of the determinant scan over the single-edge step.
pub const DETERMINANT_REFINEMENT: f64 = 4.0;

/// Zeros of different factors closer than this many `u_tol` are one zero.
const COINCIDENT_U: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub steps_per_wavelength: u32,
    pub root: RootOptions,
    /// Scan step in `ρ`. `None` means `π / (8 a)` for single-edge functions
    /// and `π / (8 L · DETERMINANT_REFINEMENT)` for graph determinants, `L`
    /// being the total edge length of the fundamental domain: `Φ` has up to
    /// `L / π` zeros per unit of `ρ`, against `a / π` for `S` or `S'`, and
    /// its zeros cluster.
    pub drho: Option<f64>,
    /// Tolerance of the numerical parity check required by [`ac_bands`].
    pub parity_tol: f64,
    /// Gaps narrower than this are reported as touchings.
    pub touching_width: f64,
    /// Touching roots of a determinant need `σ_min / ‖M‖` below this.
    pub det_certificate_tol: f64,
    /// Touching roots of a scalar function need `|f| / scale` below this.
    pub abs_certificate_tol: f64,
    pub execution: Execution,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            steps_per_wavelength: DEFAULT_STEPS_PER_WAVELENGTH,
            root: RootOptions::default(),
            drho: None,
            parity_tol: 1e-9,
            touching_width: 1e-8,
            det_certificate_tol: 1e-9,
            abs_certificate_tol: 1e-10,
            execution: Execution::default(),
        }
    }
}

impl SpectrumOptions {
    /// Scan step for a function with up to `length / π` zeros per unit `ρ`.
    pub fn drho_for(&self, length: f64) -> f64 {
        self.drho.unwrap_or(PI / (8.0 * length))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    PhiPlusOne,
    PhiMinusOne,
    DomainBoundary,
    Touching,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub edge_kind_lo: EdgeKind,
    pub edge_kind_hi: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcSpectrum {
    pub bands: Vec<Band>,
    /// Points inside a band where `|φ|` reaches 1 without leaving `[-1, 1]`,
    /// and gaps narrower than the touching width.
    pub touchings: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub drho: f64,
    pub negative_scan_points: usize,
    pub u_tol: f64,
    pub steps_per_wavelength: u32,
    pub touching_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub point_spectrum: Vec<f64>,
    pub ac_bands: Vec<Band>,
    pub touchings: Vec<f64>,
    pub lambda_range: (f64, f64),
    pub resolution: Resolution,
}

fn resolution(opts: &SpectrumOptions, a_max: f64) -> Resolution {
    Resolution {
        drho: opts.drho_for(a_max),
        negative_scan_points: NEGATIVE_SCAN_POINTS,
        u_tol: opts.root.u_tol,
        steps_per_wavelength: opts.steps_per_wavelength,
        touching_width: opts.touching_width,
    }
}

fn scan_start(q: &Potential, a: f64, lambda_max: f64) -> Result<f64> {
    let lo = q.min_on(a) - 1.0;
    if !(lambda_max > lo + 1.0) {
        return invalid(format!(
            "empty scan range: lambda_max = {lambda_max} does not exceed min q = {}",
            lo + 1.0
        ));
    }
    Ok(lo)
}

/// Dirichlet eigenvalues of the edge, i.e. zeros of `S(a, λ)` in
/// `(min q − 1, λ_max]`.
pub fn dirichlet_eigenvalues(
    q: &Potential,
    a: f64,
    lambda_max: f64,
    opts: &SpectrumOptions,
) -> Result<Vec<f64>> {
    let lo = scan_start(q, a, lambda_max)?;
    dirichlet_in(q, a, (lo, lambda_max), opts)
}

fn dirichlet_in(
    q: &Potential,
    a: f64,
    window: (f64, f64),
    opts: &SpectrumOptions,
) -> Result<Vec<f64>> {
    let spw = opts.steps_per_wavelength;
    let grid = scan_grid(window.0, window.1, opts.drho_for(a))?;
    let f = |l: f64| solve_interval(q, a, l, spw).map(|d| d.s);
    let cert = abs_min_certificate(f, opts.abs_certificate_tol, opts.root.u_tol);
    let roots = find_roots(&f, &grid, &cert, &opts.root)?;
    Ok(roots.into_iter().map(|r| r.lambda).collect())
}

fn require_even(q: &Potential, a: f64, opts: &SpectrumOptions) -> Result<()> {
    if !q.is_declared_even() {
        return Err(Error::Precondition(
            "the band formula φ⁻¹([-1, 1]) needs identical even edge potentials; \
             this potential is not declared even"
                .into(),
        ));
    }
    if !is_even(q, a, opts.parity_tol) {
        return Err(Error::Precondition(format!(
            "the band formula φ⁻¹([-1, 1]) needs identical even edge potentials; \
             q(x) != q(a - x) on [0, {a}]"
        )));
    }
    Ok(())
}

/// Absolutely continuous spectrum `φ⁻¹([-1, 1])`, `φ(λ) = S'(a, λ)`.
///
/// For even `q` we have `C = S'`, so the Lagrange identity gives
/// `φ² − 1 = C'(a) S(a)`. Band edges are therefore the zeros of `S` and of
/// `C'`, which are simple even where a gap closes, and `λ` lies in a band iff
/// `C' S ≤ 0`.
pub fn ac_bands(
    q: &Potential,
    a: f64,
    lambda_max: f64,
    opts: &SpectrumOptions,
) -> Result<AcSpectrum> {
    require_even(q, a, opts)?;
    let lo = scan_start(q, a, lambda_max)?;
    let spw = opts.steps_per_wavelength;
    let grid = scan_grid(lo, lambda_max, opts.drho_for(a))?;
    let solve = |l: f64| solve_interval(q, a, l, spw);

    let mut edges: Vec<(f64, EdgeKind, RootKind)> = Vec::new();
    let pick: [fn(&IntervalData) -> f64; 2] = [|d| d.s, |d| d.cp];
    for get in pick {
        let h = |l: f64| solve(l).map(|d| get(&d));
        let cert = abs_min_certificate(h, opts.abs_certificate_tol, opts.root.u_tol);
        for r in find_roots(&h, &grid, &cert, &opts.root)? {
            let kind = if solve(r.lambda)?.sp > 0.0 {
                EdgeKind::PhiPlusOne
            } else {
                EdgeKind::PhiMinusOne
            };
            edges.push((r.lambda, kind, r.kind));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let inside = |l: f64| solve(l).map(|d| d.cp * d.s <= 0.0);
    assemble_bands(&inside, lo, lambda_max, &edges, opts.touching_width)
}

fn assemble_bands<F>(
    inside_at: &F,
    lo: f64,
    hi: f64,
    edges: &[(f64, EdgeKind, RootKind)],
    touching_width: f64,
) -> Result<AcSpectrum>
where
    F: Fn(f64) -> Result<bool>,
{
    // Breakpoints with the kind of edge they would make.
    let mut pts: Vec<(f64, EdgeKind, Option<RootKind>)> =
        vec![(lo, EdgeKind::DomainBoundary, None)];
    for &(x, k, rk) in edges {
        if x > lo && x < hi {
            pts.push((x, k, Some(rk)));
        }
    }
    pts.push((hi, EdgeKind::DomainBoundary, None));

    let mut bands: Vec<Band> = Vec::new();
    let mut touchings = Vec::new();
    let mut open: Option<(f64, EdgeKind)> = None;
    let mut prev_inside = false;
    for w in 0..pts.len() - 1 {
        let (x0, k0, r0) = pts[w];
        let (x1, k1, _) = pts[w + 1];
        let inside = if x1 > x0 {
            inside_at(from_u(0.5 * (to_u(x0) + to_u(x1))))?
        } else {
            prev_inside
        };
        if w > 0 && inside && prev_inside {
            touchings.push(x0);
        }
        if w > 0 && !inside && !prev_inside && r0 == Some(RootKind::Touching) {
            bands.push(Band {
                lambda_lo: x0,
                lambda_hi: x0,
                edge_kind_lo: EdgeKind::Touching,
                edge_kind_hi: EdgeKind::Touching,
            });
        }
        match (inside, open) {
            (true, None) => open = Some((x0, k0)),
            (false, Some((start, sk))) => {
                bands.push(Band {
                    lambda_lo: start,
                    lambda_hi: x0,
                    edge_kind_lo: sk,
                    edge_kind_hi: k0,
                });
                open = None;
            }
            _ => {}
        }
        if w + 2 == pts.len() {
            if let Some((start, sk)) = open.take() {
                bands.push(Band {
                    lambda_lo: start,
                    lambda_hi: x1,
                    edge_kind_lo: sk,
                    edge_kind_hi: k1,
                });
            }
        }
        prev_inside = inside;
    }

    // Gaps below the touching width are not resolved: merge across them.
    let mut merged: Vec<Band> = Vec::with_capacity(bands.len());
    for b in bands {
        if let Some(last) = merged.last_mut() {
            if b.lambda_lo - last.lambda_hi < touching_width {
                touchings.push(0.5 * (b.lambda_lo + last.lambda_hi));
                last.lambda_hi = last.lambda_hi.max(b.lambda_hi);
                last.edge_kind_hi = b.edge_kind_hi;
                continue;
            }
        }
        merged.push(b);
    }
    touchings.sort_by(f64::total_cmp);
    touchings.dedup_by(|a, b| (*a - *b).abs() < touching_width);
    Ok(AcSpectrum {
        bands: merged,
        touchings,
    })
}

/// Point and absolutely continuous spectrum of the periodic n-cube with
/// identical even edges `(q, a)`.
pub fn spectrum(
    q: &Potential,
    a: f64,
    lambda_max: f64,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult> {
    let ac = ac_bands(q, a, lambda_max, opts)?;
    let point_spectrum = dirichlet_eigenvalues(q, a, lambda_max, opts)?;
    let lo = scan_start(q, a, lambda_max)?;
    Ok(SpectrumResult {
        point_spectrum,
        ac_bands: ac.bands,
        touchings: ac.touchings,
        lambda_range: (lo, lambda_max),
        resolution: resolution(opts, a),
    })
}

/// `S = 0` or `S' = ±T̃/n` within `tol`, where `T̃` is the signed cosine sum.
pub fn singular_condition(d: &IntervalData, theta: &QuasiMomentum, tol: f64) -> Result<bool> {
    let t = t_bracket(theta)? / theta.n() as f64;
    Ok(d.s.abs() <= tol || (d.sp - t).abs() <= tol || (d.sp + t).abs() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionRoot {
    pub lambda: f64,
    pub kind: RootKind,
    /// Estimated order of the zero of `Φ` at `λ`.
    pub order: u32,
}

fn check_window(window: (f64, f64)) -> Result<()> {
    if !(window.0.is_finite() && window.1.is_finite() && window.1 > window.0) {
        return invalid(format!(
            "degenerate lambda window [{}, {}]",
            window.0, window.1
        ));
    }
    Ok(())
}

/// Eigenvalues `λ_j(θ)` of the Bloch operator inside `window`, as zeros of
/// the determinant form of `Φ`.
pub fn dispersion_solve(
    g: &GraphSpec,
    theta: &QuasiMomentum,
    window: (f64, f64),
    opts: &SpectrumOptions,
) -> Result<Vec<DispersionRoot>> {
    check_window(window)?;
    if theta.n() != g.n() {
        return invalid(format!(
            "quasi-momentum has {} components but the graph has n = {}",
            theta.n(),
            g.n()
        ));
    }
    let spw = opts.steps_per_wavelength;
    let drho = opts.drho_for(DETERMINANT_REFINEMENT * total_length(g));
    let grid = scan_grid(window.0, window.1, drho)?;

    let f = |l: f64| -> Result<f64> {
        let data = g.edge_data(l, spw)?;
        Ok(dephase(ncube_char_det(&data, theta)?, theta).re)
    };
    let sigma = |l: f64| -> Result<f64> {
        let m = ncube_matrix(&g.edge_data(l, spw)?, theta)?;
        Ok(smallest_singular_value(&m)? / m.norm())
    };
    let cert = |lo: f64, hi: f64, _scale: f64| -> Result<Option<f64>> {
        let (x, s) = golden_min(&sigma, lo, hi, opts.root.u_tol)?;
        Ok((s <= opts.det_certificate_tol).then_some(x))
    };
    let roots = find_roots(&f, &grid, &cert, &opts.root)?;
    roots
        .into_iter()
        .map(|r| {
            Ok(DispersionRoot {
                lambda: r.lambda,
                kind: r.kind,
                order: estimate_order(&f, r, drho)?,
            })
        })
        .collect()
}

pub fn total_length(g: &GraphSpec) -> f64 {
    (0..2 * g.n()).map(|j| g.edge_length(j)).sum()
}

/// Order of the zero from the decay of `|f|` at distances `δ` and `2δ`.
fn estimate_order<F>(f: &F, r: Root, drho: f64) -> Result<u32>
where
    F: Fn(f64) -> Result<f64>,
{
    let u0 = to_u(r.lambda);
    let delta = 1e-2 * drho;
    let mut estimates = Vec::with_capacity(2);
    for side in [-1.0, 1.0] {
        let near = f(from_u(u0 + side * delta))?.abs();
        let far = f(from_u(u0 + side * 2.0 * delta))?.abs();
        if near > 0.0 && far > 0.0 && near.is_finite() && far.is_finite() {
            estimates.push((far / near).log2());
        }
    }
    if estimates.is_empty() {
        return Ok(1);
    }
    let k = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let order = k.round().max(1.0) as u32;
    // The sign behaviour fixes the parity of the order.
    let want_even = r.kind == RootKind::Touching;
    if order.is_multiple_of(2) == want_even {
        return Ok(order);
    }
    let up = order + 1;
    let down = order.saturating_sub(1);
    let min = if want_even { 2 } else { 1 };
    Ok(if k > order as f64 || down < min {
        up
    } else {
        down
    })
}

/// Zeros of `S'(a, λ) − t` in `window` for even `q`.
///
/// When `|t| = 1` the level is tangent to `S'` at every closed gap. There
/// `S'² − 1 = C'S`, so the level set is the zeros of `C'` and of `S` with
/// `sign S' = sign t`; a zero of both is a closed gap and is reported as a
/// touching root.
fn sp_level_set(
    q: &Potential,
    a: f64,
    t: f64,
    window: (f64, f64),
    opts: &SpectrumOptions,
) -> Result<Vec<Root>> {
    let spw = opts.steps_per_wavelength;
    let grid = scan_grid(window.0, window.1, opts.drho_for(a))?;
    if (t.abs() - 1.0).abs() > 1e-12 {
        let h = |l: f64| solve_interval(q, a, l, spw).map(|d| d.sp - t);
        let cert = abs_min_certificate(h, opts.abs_certificate_tol, opts.root.u_tol);
        return find_roots(&h, &grid, &cert, &opts.root);
    }
    let h = |l: f64| solve_interval(q, a, l, spw).map(|d| d.cp);
    let cert = abs_min_certificate(h, opts.abs_certificate_tol, opts.root.u_tol);
    let mut all: Vec<f64> = find_roots(&h, &grid, &cert, &opts.root)?
        .into_iter()
        .map(|r| r.lambda)
        .collect();
    all.extend(dirichlet_in(q, a, window, opts)?);
    all.sort_by(f64::total_cmp);
    let mut out: Vec<Root> = Vec::with_capacity(all.len());
    for l in all {
        if solve_interval(q, a, l, spw)?.sp * t <= 0.0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if (to_u(last.lambda) - to_u(l)).abs() <= COINCIDENT_U * opts.root.u_tol => {
                last.kind = RootKind::Touching
            }
            _ => out.push(Root {
                lambda: l,
                kind: RootKind::Crossing,
            }),
        }
    }
    Ok(out)
}

/// Solution set of `S = 0` or `S' = ±T̃/n` inside `window` for an n-cube
/// whose edges all carry the even potential `q` on `[0, a]`.
pub fn singular_set(
    q: &Potential,
    a: f64,
    theta: &QuasiMomentum,
    window: (f64, f64),
    opts: &SpectrumOptions,
) -> Result<Vec<f64>> {
    check_window(window)?;
    require_even(q, a, opts)?;
    let target = t_bracket(theta)? / theta.n() as f64;

    let mut all = dirichlet_in(q, a, window, opts)?;
    let targets = if target == 0.0 {
        vec![target]
    } else {
        vec![target, -target]
    };
    for t in targets {
        all.extend(
            sp_level_set(q, a, t, window, opts)?
                .into_iter()
                .map(|r| r.lambda),
        );
    }
    all.sort_by(f64::total_cmp);
    all.dedup_by(|x, y| (to_u(*x) - to_u(*y)).abs() <= 10.0 * opts.root.u_tol);
    Ok(all)
}

/// Zeros in `window` of a tiling's dispersion relation at fixed `θ`.
///
/// `edges` holds one `(q, a)` pair for the identical-edge tilings and three
/// for the general triangular relation. For identical even edges the
/// relation factors as `S^p · bracket(S')` (times `2S' + 1` for the
/// trihexagonal tiling), so the factors are solved separately and the
/// zeros of `S` carry order `p`.
pub fn tiling_roots(
    kind: TilingKind,
    edges: &[(Potential, f64)],
    theta: (f64, f64),
    window: (f64, f64),
    opts: &SpectrumOptions,
) -> Result<Vec<DispersionRoot>> {
    check_window(window)?;
    if edges.len() != kind.data_count() {
        return invalid(format!(
            "{} tiling takes {} edges, got {}",
            kind.name(),
            kind.data_count(),
            edges.len()
        ));
    }
    let spw = opts.steps_per_wavelength;
    let mut out: Vec<DispersionRoot> = Vec::new();
    let Some(p) = kind.s_power() else {
        let length: f64 = edges.iter().map(|e| e.1).sum();
        let drho = opts.drho_for(DETERMINANT_REFINEMENT * length);
        let grid = scan_grid(window.0, window.1, drho)?;
        let f = |l: f64| -> Result<f64> {
            let data = edges
                .iter()
                .map(|(q, a)| solve_interval(q, *a, l, spw))
                .collect::<Result<Vec<_>>>()?;
            tiling_char(kind, &data, theta)
        };
        let cert = abs_min_certificate(f, opts.abs_certificate_tol, opts.root.u_tol);
        return find_roots(&f, &grid, &cert, &opts.root)?
            .into_iter()
            .map(|r| {
                Ok(DispersionRoot {
                    lambda: r.lambda,
                    kind: r.kind,
                    order: estimate_order(&f, r, drho)?,
                })
            })
            .collect();
    };

    let (q, a) = (&edges[0].0, edges[0].1);
    require_even(q, a, opts)?;
    let near = COINCIDENT_U * opts.root.u_tol;
    let close = |x: f64, y: f64| (to_u(x) - to_u(y)).abs() <= near;
    for lambda in dirichlet_in(q, a, window, opts)? {
        out.push(DispersionRoot {
            lambda,
            kind: RootKind::Crossing,
            order: p as u32,
        });
    }
    let mut targets = real_polynomial_roots(&tiling_band_polynomial(kind, theta)?);
    if kind == TilingKind::Trihexagonal {
        targets.push(-0.5);
    }
    for t in targets {
        for r in sp_level_set(q, a, t, window, opts)? {
            out.push(DispersionRoot {
                lambda: r.lambda,
                kind: RootKind::Crossing,
                order: if r.kind == RootKind::Touching { 2 } else { 1 },
            });
        }
    }
    out.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    // Coincident zeros of different factors multiply.
    let mut merged: Vec<DispersionRoot> = Vec::with_capacity(out.len());
    for r in out {
        match merged.last_mut() {
            Some(last) if close(last.lambda, r.lambda) => last.order += r.order,
            _ => merged.push(r),
        }
    }
    for r in &mut merged {
        r.kind = if r.order % 2 == 0 {
            RootKind::Touching
        } else {
            RootKind::Crossing
        };
    }
    Ok(merged)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub theta: Vec<f64>,
    pub roots: Vec<DispersionRoot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSurface {
    pub n: usize,
    pub grid_per_axis: usize,
    pub window: (f64, f64),
    /// Row-major: the first component of `θ` varies slowest.
    pub points: Vec<SurfacePoint>,
}

impl BandSurface {
    pub fn max_root_count(&self) -> usize {
        self.points.iter().map(|p| p.roots.len()).max().unwrap_or(0)
    }

    pub fn all_lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.points
            .iter()
            .flat_map(|p| p.roots.iter().map(|r| r.lambda))
    }
}

/// Closed uniform grid over `[-π, π]ⁿ`, row-major.
pub fn brillouin_grid(n: usize, per_axis: usize) -> Result<Vec<Vec<f64>>> {
    if per_axis < 2 {
        return invalid(format!(
            "grid needs at least 2 points per axis, got {per_axis}"
        ));
    }
    let axis: Vec<f64> = (0..per_axis)
        .map(|k| -PI + 2.0 * PI * k as f64 / (per_axis - 1) as f64)
        .collect();
    let total = per_axis
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidInput(format!("{per_axis}^{n} grid points overflow")))?;
    Ok((0..total)
        .map(|mut idx| {
            let mut th = vec![0.0; n];
            for slot in th.iter_mut().rev() {
                *slot = axis[idx % per_axis];
                idx /= per_axis;
            }
            th
        })
        .collect())
}

/// `dispersion_solve` at every point of the closed Brillouin-zone grid.
pub fn band_surface(
    g: &GraphSpec,
    grid_per_axis: usize,
    window: (f64, f64),
    opts: &SpectrumOptions,
) -> Result<BandSurface> {
    check_window(window)?;
    let grid = brillouin_grid(g.n(), grid_per_axis)?;
    let solved = map_collect(opts.execution, &grid, |th| {
        let qm = QuasiMomentum::new(th.clone())?;
        dispersion_solve(g, &qm, window, opts).map(|roots| SurfacePoint {
            theta: th.clone(),
            roots,
        })
    });
    Ok(BandSurface {
        n: g.n(),
        grid_per_axis,
        window,
        points: solved.into_iter().collect::<Result<Vec<_>>>()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapDecayRow {
    pub rho: f64,
    pub deviation: f64,
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapDecayReport {
    pub rows: Vec<GapDecayRow>,
    /// `sup ρ·|S'(a, ρ²) − cos(ρa)|` over the table.
    pub sup_scaled: f64,
}

impl GapDecayReport {
    /// Least-squares slope of `ρ·|S' − cos ρa|` against `ln ρ` for `ρ ≥ rho_min`.
    pub fn trend_slope(&self, rho_min: f64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.rho >= rho_min)
            .map(|r| (r.rho.ln(), r.scaled))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }
}

/// `|S'(a, ρ²) − cos(ρa)|` and its `ρ`-scaled version at `ρ = 1, 2, …, ρ_max`.
pub fn gap_decay_report(
    q: &Potential,
    a: f64,
    rho_max: f64,
    opts: &SpectrumOptions,
) -> Result<GapDecayReport> {
    if !(rho_max >= 10.0) {
        return invalid(format!("rho_max must be at least 10, got {rho_max}"));
    }
    let rhos: Vec<f64> = (1..=rho_max.floor() as u64).map(|k| k as f64).collect();
    let rows = map_collect(opts.execution, &rhos, |&rho| {
        let d = solve_interval(q, a, rho * rho, opts.steps_per_wavelength)?;
        let deviation = (d.sp - (rho * a).cos()).abs();
        Ok(GapDecayRow {
            rho,
            deviation,
            scaled: rho * deviation,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let sup_scaled = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    Ok(GapDecayReport { rows, sup_scaled })
}
