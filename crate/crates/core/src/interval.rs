//! Fundamental solutions of `-y'' + q y = λ y` on a single edge `[0, a]`.
//!
//! The cosine-like solution `C` starts from `(1, 0)` and the sine-like
//! solution `S` from `(0, 1)`. Both are propagated together as the columns of
//! a 2×2 transfer matrix using a fourth-order Magnus integrator with two
//! Gauss–Legendre nodes per step. Each step is the exponential of a traceless
//! matrix, so the Wronskian `C S' - S C'` stays at 1 up to rounding, the
//! scheme is exact for constant potentials, and its time-symmetry keeps
//! `S'(a) = C(a)` for potentials symmetric about `a/2`.
//!
//! Nothing in the integrator depends on `ρ = √λ`; the `λ ≤ 0` range is
//! handled by the same formulas.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_STEPS_PER_WAVELENGTH: u32 = 64;
pub const MIN_STEPS: usize = 64;

/// Nearest-neighbour carbon spacing, in Å.
pub const GRAPHENE_SPACING: f64 = 1.43;
pub const GRAPHENE_DEPTH: f64 = -0.85;
pub const GRAPHENE_SCALE: f64 = 1.34;

/// Number of points in the reflection probe grid used by [`is_even`].
pub const PARITY_PROBE_POINTS: usize = 1025;

pub const DEFAULT_LAGRANGE_TOL: f64 = 1e-8;
pub const DEFAULT_EVEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PotentialKind {
    Zero,
    Constant {
        c: f64,
    },
    /// `depth + (d / scale) sin²(π x / d)`.
    Graphene {
        d: f64,
        depth: f64,
        scale: f64,
    },
    /// Piecewise-linear interpolation of `(x, q)` samples.
    Sampled {
        x: Vec<f64>,
        q: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    DeclaredEven,
    Unknown,
}

/// Edge potential together with its declared parity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub kind: PotentialKind,
    pub parity: Parity,
}

impl Potential {
    pub fn zero() -> Self {
        Potential {
            kind: PotentialKind::Zero,
            parity: Parity::DeclaredEven,
        }
    }

    pub fn constant(c: f64) -> Self {
        Potential {
            kind: PotentialKind::Constant { c },
            parity: Parity::DeclaredEven,
        }
    }

    /// Graphene bond potential with the default spacing, depth and scale.
    pub fn graphene() -> Self {
        Potential {
            kind: PotentialKind::Graphene {
                d: GRAPHENE_SPACING,
                depth: GRAPHENE_DEPTH,
                scale: GRAPHENE_SCALE,
            },
            parity: Parity::Unknown,
        }
    }

    pub fn graphene_with(d: f64, depth: f64, scale: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return invalid(format!("graphene spacing d must be positive, got {d}"));
        }
        if !(scale.is_finite() && scale != 0.0) {
            return invalid(format!(
                "graphene scale must be finite and nonzero, got {scale}"
            ));
        }
        if !depth.is_finite() {
            return invalid("graphene depth must be finite");
        }
        Ok(Potential {
            kind: PotentialKind::Graphene { d, depth, scale },
            parity: Parity::Unknown,
        })
    }

    /// Samples must start at `x = 0`, be strictly ascending and finite.
    pub fn sampled(x: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if x.len() < 2 {
            return invalid("sampled potential needs at least two points");
        }
        if x.len() != q.len() {
            return invalid(format!(
                "sampled potential has {} x-values but {} q-values",
                x.len(),
                q.len()
            ));
        }
        if x[0] != 0.0 {
            return invalid(format!(
                "sampled potential must start at x = 0, got {}",
                x[0]
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("sampled potential x-values must be strictly ascending");
        }
        if x.iter().chain(q.iter()).any(|v| !v.is_finite()) {
            return invalid("sampled potential contains a non-finite value");
        }
        Ok(Potential {
            kind: PotentialKind::Sampled { x, q },
            parity: Parity::Unknown,
        })
    }

    pub fn declare_even(mut self) -> Self {
        self.parity = Parity::DeclaredEven;
        self
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn is_declared_even(&self) -> bool {
        self.parity == Parity::DeclaredEven
    }

    /// Right end of the sample grid for sampled potentials.
    pub fn domain_end(&self) -> Option<f64> {
        match &self.kind {
            PotentialKind::Sampled { x, .. } => x.last().copied(),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Zero => 0.0,
            PotentialKind::Constant { c } => *c,
            PotentialKind::Graphene { d, depth, scale } => {
                let s = (PI * x / d).sin();
                depth + d / scale * s * s
            }
            PotentialKind::Sampled { x: xs, q } => interpolate(xs, q, x),
        }
    }

    /// Lower bound of `q` on `[0, a]`.
    pub fn min_on(&self, a: f64) -> f64 {
        match &self.kind {
            PotentialKind::Zero => 0.0,
            PotentialKind::Constant { c } => *c,
            PotentialKind::Graphene { d, depth, scale } => {
                let amp = d / scale;
                if amp >= 0.0 {
                    *depth
                } else if a >= 0.5 * d {
                    depth + amp
                } else {
                    probe_min(self, a)
                }
            }
            // Piecewise-linear: extremes sit at the nodes.
            PotentialKind::Sampled { q, .. } => q.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

fn probe_min(q: &Potential, a: f64) -> f64 {
    let n = PARITY_PROBE_POINTS - 1;
    (0..=n)
        .map(|i| q.eval(a * i as f64 / n as f64))
        .fold(f64::INFINITY, f64::min)
}

fn interpolate(xs: &[f64], q: &[f64], x: f64) -> f64 {
    let last = xs.len() - 1;
    if x <= xs[0] {
        return q[0];
    }
    if x >= xs[last] {
        return q[last];
    }
    let hi = xs.partition_point(|&v| v <= x).min(last);
    let lo = hi - 1;
    let t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    q[lo] + t * (q[hi] - q[lo])
}

/// Which branch of `ρ = √λ` is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `λ ≥ 0`, `ρ = √λ`.
    Real,
    /// `λ < 0`, `ρ = i √(-λ)`.
    Imaginary,
}

/// Spectral parameter `λ` with the branch of `ρ` it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParameter {
    pub lambda: f64,
    pub branch: Branch,
}

impl SpectralParameter {
    pub fn new(lambda: f64) -> Self {
        let branch = if lambda >= 0.0 {
            Branch::Real
        } else {
            Branch::Imaginary
        };
        SpectralParameter { lambda, branch }
    }

    pub fn from_rho(rho: f64) -> Self {
        Self::new(rho * rho)
    }

    pub fn rho(&self) -> Complex64 {
        match self.branch {
            Branch::Real => Complex64::new(self.lambda.sqrt(), 0.0),
            Branch::Imaginary => Complex64::new(0.0, (-self.lambda).sqrt()),
        }
    }

    /// `|ρ|`, the local wavenumber used for step-size and grid choices.
    pub fn rho_abs(&self) -> f64 {
        self.lambda.abs().sqrt()
    }
}

/// `(C, C', S, S')` at the right end of an edge of length `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalData {
    pub a: f64,
    pub lambda: f64,
    pub c: f64,
    pub cp: f64,
    pub s: f64,
    pub sp: f64,
}

impl IntervalData {
    pub fn wronskian(&self) -> f64 {
        self.c * self.sp - self.s * self.cp
    }

    pub fn lagrange_defect(&self) -> f64 {
        (self.wronskian() - 1.0).abs()
    }

    /// `φ(λ) = S'(a, λ)`; equals half the Hill discriminant for even `q`.
    pub fn phi(&self) -> f64 {
        self.sp
    }

    pub fn half_discriminant(&self) -> f64 {
        0.5 * (self.c + self.sp)
    }
}

/// Number of integration steps for an edge of length `a` at energy `λ`.
pub fn step_count(a: f64, lambda: f64, steps_per_wavelength: u32) -> usize {
    let rho = lambda.abs().sqrt().max(1.0);
    let wanted = (steps_per_wavelength as f64 * rho * a / (2.0 * PI)).ceil();
    (wanted as usize).max(MIN_STEPS)
}

/// Integrates the two fundamental solutions across `[0, a]`.
pub fn solve_interval(
    q: &Potential,
    a: f64,
    lambda: f64,
    steps_per_wavelength: u32,
) -> Result<IntervalData> {
    if !(a.is_finite() && a > 0.0) {
        return invalid(format!("edge length must be positive and finite, got {a}"));
    }
    if !lambda.is_finite() {
        return invalid(format!("lambda must be finite, got {lambda}"));
    }
    if steps_per_wavelength < 4 {
        return invalid(format!(
            "steps_per_wavelength must be at least 4, got {steps_per_wavelength}"
        ));
    }
    if let Some(end) = q.domain_end() {
        if (end - a).abs() > 1e-12 * a.max(1.0) {
            return invalid(format!(
                "sampled potential covers [0, {end}] but the edge has length {a}"
            ));
        }
    }

    let n = step_count(a, lambda, steps_per_wavelength);
    let h = a / n as f64;
    // Gauss–Legendre nodes on [0, 1].
    let g = 3f64.sqrt() / 6.0;
    let (t1, t2) = (0.5 - g, 0.5 + g);
    let comm = 3f64.sqrt() * h * h / 12.0;

    // Columns: (C, C') and (S, S').
    let (mut c, mut cp, mut s, mut sp) = (1.0, 0.0, 0.0, 1.0);
    for k in 0..n {
        let x0 = k as f64 * h;
        let q1 = q.eval(x0 + t1 * h);
        let q2 = q.eval(x0 + t2 * h);
        if !(q1.is_finite() && q2.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "potential is not finite near x = {x0}"
            )));
        }
        let alpha = comm * (q1 - q2);
        let gamma = 0.5 * h * ((q1 - lambda) + (q2 - lambda));
        let (ch, sh) = traceless_exp_coeffs(alpha * alpha + h * gamma);
        // exp(Ω) = ch·I + sh·Ω with Ω = [[α, h], [γ, -α]].
        let e11 = ch + sh * alpha;
        let e12 = sh * h;
        let e21 = sh * gamma;
        let e22 = ch - sh * alpha;
        let (nc, ncp) = (e11 * c + e12 * cp, e21 * c + e22 * cp);
        let (ns, nsp) = (e11 * s + e12 * sp, e21 * s + e22 * sp);
        c = nc;
        cp = ncp;
        s = ns;
        sp = nsp;
    }

    Ok(IntervalData {
        a,
        lambda,
        c,
        cp,
        s,
        sp,
    })
}

/// `(cosh √μ, sinh √μ / √μ)` continued analytically through `μ ≤ 0`.
fn traceless_exp_coeffs(mu: f64) -> (f64, f64) {
    if mu.abs() < 1e-2 {
        let m2 = mu * mu;
        let ch = 1.0 + mu / 2.0 + m2 / 24.0 + m2 * mu / 720.0 + m2 * m2 / 40320.0;
        let sh = 1.0 + mu / 6.0 + m2 / 120.0 + m2 * mu / 5040.0 + m2 * m2 / 362880.0;
        (ch, sh)
    } else if mu > 0.0 {
        let r = mu.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-mu).sqrt();
        (r.cos(), r.sin() / r)
    }
}

/// Exact `(C, C', S, S')` for zero and constant potentials.
pub fn closed_form_interval(q: &Potential, a: f64, lambda: f64) -> Result<IntervalData> {
    let shift = match q.kind {
        PotentialKind::Zero => 0.0,
        PotentialKind::Constant { c } => c,
        _ => return invalid("closed form is only available for zero and constant potentials"),
    };
    if !(a.is_finite() && a > 0.0) {
        return invalid(format!("edge length must be positive and finite, got {a}"));
    }
    let mu = lambda - shift;
    let (c, cp, s, sp) = if mu > 0.0 {
        let k = mu.sqrt();
        let (sin, cos) = (k * a).sin_cos();
        (cos, -k * sin, sin / k, cos)
    } else if mu < 0.0 {
        let k = (-mu).sqrt();
        let (sinh, cosh) = ((k * a).sinh(), (k * a).cosh());
        (cosh, k * sinh, sinh / k, cosh)
    } else {
        (1.0, 0.0, a, 1.0)
    };
    Ok(IntervalData {
        a,
        lambda,
        c,
        cp,
        s,
        sp,
    })
}

/// True when `q(x) = q(a - x)` on a fixed probe grid within `tol`.
pub fn is_even(q: &Potential, a: f64, tol: f64) -> bool {
    match q.kind {
        PotentialKind::Zero | PotentialKind::Constant { .. } => true,
        _ => {
            let n = PARITY_PROBE_POINTS - 1;
            (0..=n).all(|i| {
                let x = a * i as f64 / n as f64;
                (q.eval(x) - q.eval(a - x)).abs() <= tol
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_potential_at_pi_squared() {
        let d = solve_interval(&Potential::zero(), 1.0, PI * PI, 64).unwrap();
        assert_abs_diff_eq!(d.c, -1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(d.cp, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(d.s, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(d.sp, -1.0, epsilon = 1e-8);
    }

    #[test]
    fn zero_potential_at_zero_energy() {
        let d = solve_interval(&Potential::zero(), 1.0, 0.0, 64).unwrap();
        assert_abs_diff_eq!(d.c, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.cp, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.s, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.sp, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_potential_shifts_energy() {
        let d = solve_interval(&Potential::constant(5.0), 1.0, 5.0, 64).unwrap();
        assert_abs_diff_eq!(d.c, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.cp, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.s, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.sp, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_trig_hyperbolic_and_negative() {
        let d = closed_form_interval(&Potential::zero(), 2.0, PI * PI / 4.0).unwrap();
        assert_abs_diff_eq!(d.c, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.s, 0.0, epsilon = 1e-15);

        let d = closed_form_interval(&Potential::constant(1.0), 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(d.c, 1f64.cosh(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.s, 1f64.sinh(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.sp, 1f64.cosh(), epsilon = 1e-15);

        let d = closed_form_interval(&Potential::zero(), 1.0, -4.0).unwrap();
        assert_abs_diff_eq!(d.c, 2f64.cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(d.s, 2f64.sinh() / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_rejects_graphene() {
        assert!(closed_form_interval(&Potential::graphene(), 1.0, 1.0).is_err());
    }

    #[test]
    fn input_errors() {
        assert!(solve_interval(&Potential::zero(), 0.0, 1.0, 64).is_err());
        assert!(solve_interval(&Potential::zero(), -1.0, 1.0, 64).is_err());
        assert!(solve_interval(&Potential::zero(), 1.0, f64::NAN, 64).is_err());
        assert!(solve_interval(&Potential::zero(), 1.0, 1.0, 3).is_err());
        let bad = Potential::graphene_with(1.0, f64::INFINITY, 1.0);
        assert!(bad.is_err());
        // Sampled grid that does not match the edge.
        let q = Potential::sampled(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(solve_interval(&q, 2.0, 1.0, 64).is_err());
    }

    #[test]
    fn non_finite_potential_is_rejected() {
        // A huge graphene amplitude overflows to inf inside the step.
        let q = Potential::graphene_with(1.0, 0.0, 1e-320).unwrap();
        assert!(solve_interval(&q, 1.0, 1.0, 64).is_err());
    }

    #[test]
    fn sampled_validation() {
        assert!(Potential::sampled(vec![0.0], vec![1.0]).is_err());
        assert!(Potential::sampled(vec![0.1, 1.0], vec![1.0, 2.0]).is_err());
        assert!(Potential::sampled(vec![0.0, 0.5, 0.5], vec![1.0, 2.0, 3.0]).is_err());
        assert!(Potential::sampled(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(Potential::sampled(vec![0.0, 1.0], vec![f64::NAN, 1.0]).is_err());
        let q = Potential::sampled(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_abs_diff_eq!(q.eval(0.25), 1.0);
        assert_abs_diff_eq!(q.eval(0.75), 1.0);
        assert_abs_diff_eq!(q.eval(1.0), 0.0);
    }

    #[test]
    fn parity_probe() {
        assert!(is_even(&Potential::zero(), 3.0, 0.0));
        let ramp = Potential::sampled(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(!is_even(&ramp, 1.0, 1e-9));
        assert!(is_even(&Potential::graphene(), GRAPHENE_SPACING, 1e-9));
        assert!(is_even(
            &Potential::graphene(),
            2.0 * GRAPHENE_SPACING,
            1e-9
        ));
        assert!(!is_even(&Potential::graphene(), 1.0, 1e-9));
    }

    #[test]
    fn graphene_defaults_and_minimum() {
        let q = Potential::graphene();
        assert_eq!(
            q.kind,
            PotentialKind::Graphene {
                d: 1.43,
                depth: -0.85,
                scale: 1.34
            }
        );
        assert_abs_diff_eq!(q.eval(0.0), -0.85);
        assert_abs_diff_eq!(q.eval(0.715), -0.85 + 1.43 / 1.34, epsilon = 1e-12);
        assert_eq!(q.min_on(1.43), -0.85);
    }

    #[test]
    fn spectral_parameter_branches() {
        let p = SpectralParameter::new(-4.0);
        assert_eq!(p.branch, Branch::Imaginary);
        let r = p.rho();
        assert_abs_diff_eq!((r * r).re, -4.0, epsilon = 1e-15);
        let p = SpectralParameter::from_rho(3.0);
        assert_eq!(p.lambda, 9.0);
        assert_eq!(p.rho().re, 3.0);
    }

    #[test]
    fn deterministic_output() {
        let q = Potential::graphene();
        let a = solve_interval(&q, 1.43, 17.3, 64).unwrap();
        let b = solve_interval(&q, 1.43, 17.3, 64).unwrap();
        assert_eq!(a, b);
    }
}
