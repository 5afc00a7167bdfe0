//! Characteristic functions `Φ(ρ; θ)` of periodic rectangular and n-cubic graphs.
//!
//! The fundamental domain holds `2n` edges leaving a common vertex. Edge `j`
//! carries `y_j = A C_j + B_j S_j`; continuity at the origin forces a common
//! `A`, Kirchhoff gives `Σ B_j = 0`, and the Floquet phases `τ_j` glue the far
//! ends together. The resulting `(2n+1) × (2n+1)` determinant is built by
//! [`ncube_char_det`]; [`ncube_char_general`] is its expansion along the first
//! column written with the structured determinants of [`crate::detkit`].
//!
//! For `n = 2` the rectangle routines additionally expose the unreduced
//! 8×8 system and the real closed form in terms of primed four-fold products.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::detkit::{det_lu, product_except, SmallComplexMatrix};
use crate::error::{invalid, Result};
use crate::interval::{solve_interval, IntervalData, Potential};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Quasi-momentum `θ ∈ [-π, π]ⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiMomentum {
    theta: Vec<f64>,
}

impl QuasiMomentum {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return invalid("quasi-momentum needs at least one component");
        }
        if let Some(t) = theta.iter().find(|t| !(t.abs() <= PI * (1.0 + 1e-12))) {
            return invalid(format!("quasi-momentum component {t} is outside [-pi, pi]"));
        }
        Ok(QuasiMomentum { theta })
    }

    /// Skips the Brillouin-zone bound check. Every formula here is
    /// 2π-periodic in each component, so shifted angles are legitimate input.
    pub fn new_unbounded(theta: Vec<f64>) -> Self {
        QuasiMomentum { theta }
    }

    pub fn zero(n: usize) -> Self {
        QuasiMomentum {
            theta: vec![0.0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `Θ = Σ θ_j`.
    pub fn big_theta(&self) -> f64 {
        self.theta.iter().sum()
    }

    pub fn negated(&self) -> Self {
        QuasiMomentum {
            theta: self.theta.iter().map(|t| -t).collect(),
        }
    }
}

/// Floquet phase attached to each of the `2n` edge ends.
#[derive(Debug, Clone, PartialEq)]
pub struct TauFactors(pub Vec<Complex64>);

impl TauFactors {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }
}

/// `τ_1 = 1`, `τ_j = e^{iθ_j}` for `2 ≤ j ≤ n`,
/// `τ_j = e^{i(Θ - θ_{2n-j+1})}` for `n < j < 2n`, `τ_{2n} = e^{iΘ}`.
pub fn tau_factors(theta: &QuasiMomentum) -> Result<TauFactors> {
    let n = theta.n();
    if n < 2 {
        return invalid(format!("tau factors need n >= 2, got {n}"));
    }
    let th = theta.theta();
    let big = theta.big_theta();
    let mut tau = Vec::with_capacity(2 * n);
    tau.push(ONE);
    for t in &th[1..n] {
        tau.push(Complex64::from_polar(1.0, *t));
    }
    for j in n + 1..2 * n {
        tau.push(Complex64::from_polar(1.0, big - th[2 * n - j]));
    }
    tau.push(Complex64::from_polar(1.0, big));
    Ok(TauFactors(tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Rectangle,
    Ncube,
}

/// Rectangle or n-cube: side lengths `a_1..a_n` and one potential per edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    kind: GraphKind,
    lengths: Vec<f64>,
    potentials: Vec<Potential>,
}

impl GraphSpec {
    pub fn new(kind: GraphKind, lengths: Vec<f64>, potentials: Vec<Potential>) -> Result<Self> {
        let n = lengths.len();
        match kind {
            GraphKind::Rectangle if n != 2 => {
                return invalid(format!("a rectangle has n = 2 side lengths, got {n}"))
            }
            GraphKind::Ncube if n < 2 => {
                return invalid(format!("an n-cube needs n >= 2, got {n}"))
            }
            _ => {}
        }
        if let Some(a) = lengths.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return invalid(format!("side lengths must be positive, got {a}"));
        }
        if potentials.len() != 2 * n {
            return invalid(format!(
                "expected {} edge potentials, got {}",
                2 * n,
                potentials.len()
            ));
        }
        let spec = GraphSpec {
            kind,
            lengths,
            potentials,
        };
        for (j, q) in spec.potentials.iter().enumerate() {
            if let Some(end) = q.domain_end() {
                let a = spec.edge_length(j);
                if (end - a).abs() > 1e-12 * a.max(1.0) {
                    return invalid(format!(
                        "edge {} has length {a} but its sampled potential ends at {end}",
                        j + 1
                    ));
                }
            }
        }
        Ok(spec)
    }

    /// All `2n` edges share one potential and all sides one length.
    pub fn uniform(kind: GraphKind, n: usize, a: f64, q: Potential) -> Result<Self> {
        Self::new(kind, vec![a; n], vec![q; 2 * n])
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn potentials(&self) -> &[Potential] {
        &self.potentials
    }

    pub fn max_length(&self) -> f64 {
        self.lengths.iter().copied().fold(0.0, f64::max)
    }

    /// Length of edge `j` (0-based): `a_1` for the first and last edges,
    /// `a_j` for `2 ≤ j ≤ n`, and `a_{2n-j+1}` for `n < j < 2n` (1-based).
    pub fn edge_length(&self, j: usize) -> f64 {
        let n = self.n();
        let one_based = j + 1;
        if one_based == 1 || one_based == 2 * n {
            self.lengths[0]
        } else if one_based <= n {
            self.lengths[one_based - 1]
        } else {
            self.lengths[2 * n - one_based]
        }
    }

    /// Equal sides and one shared potential on every edge.
    pub fn is_uniform(&self) -> bool {
        self.lengths.iter().all(|&a| a == self.lengths[0])
            && self.potentials.iter().all(|q| *q == self.potentials[0])
    }

    pub fn min_potential(&self) -> f64 {
        (0..2 * self.n())
            .map(|j| self.potentials[j].min_on(self.edge_length(j)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Interval data for every edge at energy `λ`; coinciding edges share one
    /// integration.
    pub fn edge_data(&self, lambda: f64, steps_per_wavelength: u32) -> Result<Vec<IntervalData>> {
        let m = 2 * self.n();
        let mut out: Vec<IntervalData> = Vec::with_capacity(m);
        for j in 0..m {
            let a = self.edge_length(j);
            let q = &self.potentials[j];
            let reuse = (0..j).find(|&k| self.edge_length(k) == a && self.potentials[k] == *q);
            let d = match reuse {
                Some(k) => out[k],
                None => solve_interval(q, a, lambda, steps_per_wavelength)?,
            };
            out.push(d);
        }
        Ok(out)
    }
}

fn check_len(data: &[IntervalData], want: usize) -> Result<()> {
    if data.len() != want {
        return invalid(format!("expected {want} interval data, got {}", data.len()));
    }
    Ok(())
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Rectangle phases `(1, e^{iθ_2}, e^{iθ_1}, e^{i(θ_1+θ_2)})`.
fn rect_phases(theta: &QuasiMomentum) -> Result<[Complex64; 4]> {
    if theta.n() != 2 {
        return invalid(format!(
            "rectangle needs a 2-component quasi-momentum, got {}",
            theta.n()
        ));
    }
    let tau = tau_factors(theta)?;
    Ok([tau.0[0], tau.0[1], tau.0[2], tau.0[3]])
}

/// Closed-form rectangle relation, `LHS − RHS`:
/// `Σ (primed four-fold products) − 2[(S₁S₃+S₂S₄)cos θ₁ + (S₁S₂+S₃S₄)cos θ₂
///  + S₂S₃cos(θ₁+θ₂) + S₁S₄cos(θ₁−θ₂)]`.
///
/// The primed product `(X₁X₂X₃X₄)'` is the sum of the four products with
/// exactly one factor replaced by its derivative.
pub fn rect_char_closed(data: &[IntervalData], theta: &QuasiMomentum) -> Result<Complex64> {
    check_len(data, 4)?;
    if theta.n() != 2 {
        return invalid("rectangle needs a 2-component quasi-momentum");
    }
    let (t1, t2) = (theta.theta()[0], theta.theta()[1]);
    let s: Vec<f64> = data.iter().map(|d| d.s).collect();
    let mut lhs = 0.0;
    for j in 0..4 {
        // (S₁..C_j..S₄)' with C_j in slot j.
        for k in 0..4 {
            let mut term = 1.0;
            for (i, d) in data.iter().enumerate() {
                let v = match (i == j, i == k) {
                    (true, true) => d.cp,
                    (true, false) => d.c,
                    (false, true) => d.sp,
                    (false, false) => d.s,
                };
                term *= v;
            }
            lhs += term;
        }
    }
    let rhs = 2.0
        * ((s[0] * s[2] + s[1] * s[3]) * t1.cos()
            + (s[0] * s[1] + s[2] * s[3]) * t2.cos()
            + s[1] * s[2] * (t1 + t2).cos()
            + s[0] * s[3] * (t1 - t2).cos());
    Ok(c(lhs - rhs))
}

/// Matrix of the full rectangle system in the unknowns `(A₁..A₄, B₁..B₄)`.
pub fn rect_matrix8(data: &[IntervalData], theta: &QuasiMomentum) -> Result<SmallComplexMatrix> {
    check_len(data, 4)?;
    let ph = rect_phases(theta)?;
    let mut m = SmallComplexMatrix::zeros(8)?;
    for r in 0..3 {
        m[(r, 0)] = ONE;
        m[(r, r + 1)] = -ONE;
    }
    for j in 4..8 {
        m[(3, j)] = ONE;
    }
    for j in 1..4 {
        let r = 3 + j;
        m[(r, 0)] = c(data[0].c);
        m[(r, j)] = -ph[j] * data[j].c;
        m[(r, 4)] = c(data[0].s);
        m[(r, 4 + j)] = -ph[j] * data[j].s;
    }
    for j in 0..4 {
        m[(7, j)] = ph[j] * data[j].cp;
        m[(7, 4 + j)] = ph[j] * data[j].sp;
    }
    Ok(m)
}

pub fn rect_char_det8(data: &[IntervalData], theta: &QuasiMomentum) -> Result<Complex64> {
    det_lu(&rect_matrix8(data, theta)?)
}

/// The reduced 5×5 rectangle determinant (common `A`, unknowns `B₁..B₄`).
pub fn rect_char_det5(data: &[IntervalData], theta: &QuasiMomentum) -> Result<Complex64> {
    check_len(data, 4)?;
    if theta.n() != 2 {
        return invalid("rectangle needs a 2-component quasi-momentum");
    }
    ncube_char_det(data, theta)
}

/// `4S²(C S' − cos²(θ₁/2) cos²(θ₂/2))` for four identical edges.
pub fn rect_char_simplified(d: &IntervalData, theta: &QuasiMomentum) -> Result<f64> {
    if theta.n() != 2 {
        return invalid("rectangle needs a 2-component quasi-momentum");
    }
    let (t1, t2) = (theta.theta()[0], theta.theta()[1]);
    let cc = (0.5 * t1).cos().powi(2) * (0.5 * t2).cos().powi(2);
    Ok(4.0 * d.s * d.s * (d.c * d.sp - cc))
}

/// Characteristic matrix of the n-cube, size `(2n+1) × (2n+1)`.
pub fn ncube_matrix(data: &[IntervalData], theta: &QuasiMomentum) -> Result<SmallComplexMatrix> {
    let n = theta.n();
    check_len(data, 2 * n)?;
    let tau = tau_factors(theta)?;
    let tau = tau.as_slice();
    let m = 2 * n;
    let mut mat = SmallComplexMatrix::zeros(m + 1)?;
    for j in 1..=m {
        mat[(0, j)] = ONE;
    }
    for j in 1..m {
        mat[(j, 0)] = c(data[0].c) - tau[j] * data[j].c;
        mat[(j, 1)] = c(data[0].s);
        mat[(j, j + 1)] = -tau[j] * data[j].s;
    }
    let cp_sum: Complex64 = (0..m).map(|k| tau[k] * data[k].cp).sum();
    mat[(m, 0)] = cp_sum;
    for k in 0..m {
        mat[(m, k + 1)] = tau[k] * data[k].sp;
    }
    Ok(mat)
}

pub fn ncube_char_det(data: &[IntervalData], theta: &QuasiMomentum) -> Result<Complex64> {
    det_lu(&ncube_matrix(data, theta)?)
}

/// First-column expansion of the n-cube determinant:
///
/// `Φ = −(Σ_k τ_k C'_k) Σ_l Π_{i≠l} τ_i S_i
///      + Σ_{l≥2} (C₁ − τ_l C_l) Σ_{k≠l} Π_{i≠l,k}(τ_i S_i) (τ_k S'_k − τ_l S'_l)`.
pub fn ncube_char_general(data: &[IntervalData], theta: &QuasiMomentum) -> Result<Complex64> {
    let n = theta.n();
    check_len(data, 2 * n)?;
    let tau = tau_factors(theta)?;
    let tau = tau.as_slice();
    let m = 2 * n;
    let a: Vec<Complex64> = (0..m).map(|i| tau[i] * data[i].s).collect();
    let b: Vec<Complex64> = (0..m).map(|i| tau[i] * data[i].sp).collect();
    let cp_sum: Complex64 = (0..m).map(|k| tau[k] * data[k].cp).sum();
    let all_but_one: Complex64 = (0..m).map(|l| product_except(&a, l, None)).sum();
    let mut phi = -cp_sum * all_but_one;
    for l in 1..m {
        let inner: Complex64 = (0..m)
            .filter(|&k| k != l)
            .map(|k| product_except(&a, l, Some(k)) * (b[k] - b[l]))
            .sum();
        phi += (c(data[0].c) - tau[l] * data[l].c) * inner;
    }
    Ok(phi)
}

/// Signed cosine sum `cos(Θ/2) + Σ_{l=2}^{n} cos((Θ − 2θ_l)/2)`.
pub fn t_bracket(theta: &QuasiMomentum) -> Result<f64> {
    let n = theta.n();
    if n < 2 {
        return invalid(format!("need n >= 2, got {n}"));
    }
    let big = theta.big_theta();
    Ok((0.5 * big).cos()
        + theta.theta()[1..]
            .iter()
            .map(|t| (0.5 * (big - 2.0 * t)).cos())
            .sum::<f64>())
}

/// `T = t_bracket²`, which lies in `[0, n²]` and equals `|Σ τ_k|² / 4`.
pub fn t_value(theta: &QuasiMomentum) -> Result<f64> {
    Ok(t_bracket(theta)?.powi(2))
}

/// `4 e^{inΘ} S^{2n−2} (T − n² S'²)` for identical even edges.
pub fn ncube_char_simplified(d: &IntervalData, theta: &QuasiMomentum) -> Result<Complex64> {
    let n = theta.n();
    let t = t_value(theta)?;
    let nf = n as f64;
    let real = 4.0 * d.s.powi(2 * n as i32 - 2) * (t - nf * nf * d.sp * d.sp);
    Ok(Complex64::from_polar(1.0, nf * theta.big_theta()) * real)
}

/// Same as [`ncube_char_simplified`] but with `C S'` in place of `S'²`, valid
/// for identical edges without the evenness assumption.
pub fn ncube_char_identical(d: &IntervalData, theta: &QuasiMomentum) -> Result<Complex64> {
    let n = theta.n();
    let t = t_value(theta)?;
    let nf = n as f64;
    let real = 4.0 * d.s.powi(2 * n as i32 - 2) * (t - nf * nf * d.c * d.sp);
    Ok(Complex64::from_polar(1.0, nf * theta.big_theta()) * real)
}

/// Removes the `e^{inΘ}` phase so that the characteristic function is real
/// along the real `λ` axis.
pub fn dephase(phi: Complex64, theta: &QuasiMomentum) -> Complex64 {
    phi * Complex64::from_polar(1.0, -(theta.n() as f64) * theta.big_theta())
}

/// Determinant-form `Φ` of a graph at `(λ, θ)`.
pub fn graph_char(
    g: &GraphSpec,
    lambda: f64,
    theta: &QuasiMomentum,
    steps_per_wavelength: u32,
) -> Result<Complex64> {
    if theta.n() != g.n() {
        return invalid(format!(
            "quasi-momentum has {} components but the graph has n = {}",
            theta.n(),
            g.n()
        ));
    }
    let data = g.edge_data(lambda, steps_per_wavelength)?;
    ncube_char_det(&data, theta)
}
