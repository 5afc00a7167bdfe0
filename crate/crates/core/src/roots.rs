//! Bracketed root finding along the real `λ` axis.
//!
//! All refinement happens in the signed wavenumber `u = sign(λ)·√|λ|`, so a
//! fixed `u`-tolerance means a `ρ`-tolerance for `λ > 0` and stays uniform
//! across `λ = 0`. Sign changes are bisected. A local minimum of `|f|`
//! without a sign change is subdivided a few times, then handed to a
//! certificate that decides whether it is a double (touching) root or a
//! near miss.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Points of the coarse λ-grid used below zero.
pub const NEGATIVE_SCAN_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    /// Absolute tolerance on `u` (i.e. on `ρ` for positive `λ`).
    pub u_tol: f64,
    pub max_iterations: usize,
    /// Sub-intervals used when a local minimum of `|f|` is subdivided.
    pub subdivisions: usize,
    pub max_depth: usize,
    /// A bisected root must satisfy `|f| ≤ verify_tol · scale`.
    pub verify_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            u_tol: 1e-10,
            max_iterations: 200,
            subdivisions: 16,
            max_depth: 6,
            verify_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    /// `f` changes sign.
    Crossing,
    /// `f` reaches zero without changing sign.
    Touching,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub lambda: f64,
    pub kind: RootKind,
}

pub fn to_u(lambda: f64) -> f64 {
    lambda.signum() * lambda.abs().sqrt()
}

pub fn from_u(u: f64) -> f64 {
    u * u.abs()
}

/// Scan points covering `[lo, hi]`: a 64-point λ-grid on the negative part,
/// then uniform steps of `drho` in `ρ` on the positive part.
pub fn scan_grid(lo: f64, hi: f64, drho: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || !(hi > lo) {
        return invalid(format!("degenerate scan window [{lo}, {hi}]"));
    }
    if !(drho.is_finite() && drho > 0.0) {
        return invalid(format!("scan step must be positive, got {drho}"));
    }
    let mut pts = Vec::new();
    if lo < 0.0 {
        let top = hi.min(0.0);
        let n = NEGATIVE_SCAN_POINTS - 1;
        pts.extend((0..=n).map(|i| lo + (top - lo) * i as f64 / n as f64));
        if hi <= 0.0 {
            *pts.last_mut().unwrap() = hi;
            return Ok(pts);
        }
        pts.pop();
    }
    let r0 = lo.max(0.0).sqrt();
    let r1 = hi.sqrt();
    let n = (((r1 - r0) / drho).ceil() as usize).max(1);
    pts.extend((0..=n).map(|i| {
        let r = r0 + (r1 - r0) * i as f64 / n as f64;
        r * r
    }));
    *pts.last_mut().unwrap() = hi;
    Ok(pts)
}

fn linspace_u(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (u0, u1) = (to_u(lo), to_u(hi));
    let mut v: Vec<f64> = (0..=n)
        .map(|i| from_u(u0 + (u1 - u0) * i as f64 / n as f64))
        .collect();
    v[0] = lo;
    v[n] = hi;
    v
}

/// Bisection on a sign change of `f` between `lo` and `hi`.
pub fn bisect<F>(f: &F, lo: f64, hi: f64, flo: f64, opts: &RootOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = (to_u(lo), to_u(hi));
    let mut fa = flo;
    for _ in 0..opts.max_iterations {
        if (b - a).abs() <= opts.u_tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(from_u(m))?;
        if fm == 0.0 {
            return Ok(from_u(m));
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(from_u(0.5 * (a + b)))
}

/// Golden-section minimisation of `f` over `[lo, hi]` in the `u` variable.
pub fn golden_min<F>(f: &F, lo: f64, hi: f64, u_tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (to_u(lo), to_u(hi));
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(from_u(x1))?;
    let mut f2 = f(from_u(x2))?;
    for _ in 0..200 {
        if (b - a).abs() <= u_tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(from_u(x1))?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(from_u(x2))?;
        }
    }
    let (flo, fhi) = (f(from_u(a))?, f(from_u(b))?);
    let best = [(x1, f1), (x2, f2), (a, flo), (b, fhi)]
        .into_iter()
        .fold((x1, f1), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
    Ok((from_u(best.0), best.1))
}

/// Certificate for scalar functions: accept the minimiser of `|f|` when
/// `min |f| ≤ rel_tol · scale`.
pub fn abs_min_certificate<F>(
    f: F,
    rel_tol: f64,
    u_tol: f64,
) -> impl Fn(f64, f64, f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    move |lo, hi, scale| {
        let g = |x: f64| f(x).map(f64::abs);
        let (x, fx) = golden_min(&g, lo, hi, u_tol)?;
        Ok((fx <= rel_tol * scale).then_some(x))
    }
}

/// Every root of `f` detectable on `grid`.
///
/// `certify(lo, hi, scale)` is consulted for unresolved local minima of `|f|`;
/// `scale` is the largest `|f|` among the grid points around the minimum.
pub fn find_roots<F, C>(f: &F, grid: &[f64], certify: &C, opts: &RootOptions) -> Result<Vec<Root>>
where
    F: Fn(f64) -> Result<f64>,
    C: Fn(f64, f64, f64) -> Result<Option<f64>>,
{
    if grid.len() < 2 {
        return invalid("scan grid needs at least two points");
    }
    let vals = grid.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
        return Err(Error::Unconverged {
            lambda: grid[i],
            reason: "function value is not finite".into(),
        });
    }
    let mut roots = Vec::new();
    scan_level(f, grid, &vals, certify, opts, 0, None, &mut roots)?;
    roots.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(dedupe(roots, opts))
}

#[allow(clippy::too_many_arguments)]
fn scan_level<F, C>(
    f: &F,
    xs: &[f64],
    vs: &[f64],
    certify: &C,
    opts: &RootOptions,
    depth: usize,
    outer_scale: Option<f64>,
    out: &mut Vec<Root>,
) -> Result<()>
where
    F: Fn(f64) -> Result<f64>,
    C: Fn(f64, f64, f64) -> Result<Option<f64>>,
{
    let n = xs.len();
    for i in 0..n {
        if vs[i] == 0.0 {
            let left = if i > 0 { vs[i - 1] } else { 0.0 };
            let right = if i + 1 < n { vs[i + 1] } else { 0.0 };
            let kind = if left * right < 0.0 {
                RootKind::Crossing
            } else {
                RootKind::Touching
            };
            out.push(Root {
                lambda: xs[i],
                kind,
            });
        }
    }
    for i in 0..n - 1 {
        if vs[i] * vs[i + 1] < 0.0 {
            let x = bisect(f, xs[i], xs[i + 1], vs[i], opts)?;
            let scale = vs[i]
                .abs()
                .max(vs[i + 1].abs())
                .max(outer_scale.unwrap_or(0.0));
            let fx = f(x)?;
            if fx.abs() > opts.verify_tol * scale {
                return Err(Error::Unconverged {
                    lambda: x,
                    reason: format!("|f| = {:e} after bisection exceeds tolerance", fx.abs()),
                });
            }
            out.push(Root {
                lambda: x,
                kind: RootKind::Crossing,
            });
        }
    }
    let same_sign = |i: usize, j: usize| vs[i] * vs[j] > 0.0;
    for i in 0..n {
        let (lo, hi) = match i {
            0 if n > 1 && vs[0].abs() < vs[1].abs() && same_sign(0, 1) => (0, 1),
            _ if i == n - 1 && i > 0 && vs[i].abs() < vs[i - 1].abs() && same_sign(i, i - 1) => {
                (i - 1, i)
            }
            _ if i > 0
                && i + 1 < n
                && vs[i].abs() < vs[i - 1].abs()
                && vs[i].abs() < vs[i + 1].abs()
                && same_sign(i - 1, i)
                && same_sign(i, i + 1) =>
            {
                (i - 1, i + 1)
            }
            _ => continue,
        };
        // Boundary minima only matter at the top level.
        if depth > 0 && (i == 0 || i == n - 1) {
            continue;
        }
        let scale = outer_scale.unwrap_or_else(|| vs[lo].abs().max(vs[hi].abs()));
        if depth < opts.max_depth {
            let sub = linspace_u(xs[lo], xs[hi], opts.subdivisions);
            let mut sv = Vec::with_capacity(sub.len());
            sv.push(vs[lo]);
            for &x in &sub[1..sub.len() - 1] {
                sv.push(f(x)?);
            }
            sv.push(vs[hi]);
            scan_level(f, &sub, &sv, certify, opts, depth + 1, Some(scale), out)?;
        } else if let Some(x) = certify(xs[lo], xs[hi], scale)? {
            out.push(Root {
                lambda: x,
                kind: RootKind::Touching,
            });
        }
    }
    Ok(())
}

fn dedupe(roots: Vec<Root>, opts: &RootOptions) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(last) = out.last_mut() {
            if (to_u(r.lambda) - to_u(last.lambda)).abs() <= 10.0 * opts.u_tol {
                if r.kind == RootKind::Crossing {
                    last.kind = RootKind::Crossing;
                }
                continue;
            }
        }
        out.push(r);
    }
    out
}
