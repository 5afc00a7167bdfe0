//! Reference computations for the test suites.
//!
//! Nothing here shares code with `qgraph-core`: potentials are plain closures,
//! the integrator is an adaptive Dormand–Prince 5(4) pair, and eigenvalues
//! and band edges come from bisection on Prüfer-angle Sturm counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// `(C, C', S, S')` at the end of the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fundamental {
    pub c: f64,
    pub cp: f64,
    pub s: f64,
    pub sp: f64,
}

pub fn graphene(x: f64) -> f64 {
    let d = 1.43;
    -0.85 + (d / 1.34) * (PI * x / d).sin().powi(2)
}

type State = [f64; 4];

fn rhs(q: &dyn Fn(f64) -> f64, lambda: f64, x: f64, y: &State) -> State {
    let k = q(x) - lambda;
    [y[1], k * y[0], y[3], k * y[2]]
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..4 {
            out[i] += h * w * k[i];
        }
    }
    out
}

/// Integrates `y'' = (q − λ) y` for both fundamental solutions with the
/// Dormand–Prince 5(4) pair under a mixed error tolerance `tol`.
pub fn dopri_fundamental(q: &dyn Fn(f64) -> f64, a: f64, lambda: f64, tol: f64) -> Fundamental {
    let mut y: State = [1.0, 0.0, 0.0, 1.0];
    let mut x = 0.0;
    let mut h = (a / 64.0).min(0.1 / (1.0 + lambda.abs().sqrt()));
    while x < a {
        if x + h > a {
            h = a - x;
        }
        let k1 = rhs(q, lambda, x, &y);
        let k2 = rhs(q, lambda, x + h / 5.0, &axpy(&y, h, &[(1.0 / 5.0, &k1)]));
        let k3 = rhs(
            q,
            lambda,
            x + 3.0 * h / 10.0,
            &axpy(&y, h, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]),
        );
        let k4 = rhs(
            q,
            lambda,
            x + 4.0 * h / 5.0,
            &axpy(
                &y,
                h,
                &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)],
            ),
        );
        let k5 = rhs(
            q,
            lambda,
            x + 8.0 * h / 9.0,
            &axpy(
                &y,
                h,
                &[
                    (19372.0 / 6561.0, &k1),
                    (-25360.0 / 2187.0, &k2),
                    (64448.0 / 6561.0, &k3),
                    (-212.0 / 729.0, &k4),
                ],
            ),
        );
        let k6 = rhs(
            q,
            lambda,
            x + h,
            &axpy(
                &y,
                h,
                &[
                    (9017.0 / 3168.0, &k1),
                    (-355.0 / 33.0, &k2),
                    (46732.0 / 5247.0, &k3),
                    (49.0 / 176.0, &k4),
                    (-5103.0 / 18656.0, &k5),
                ],
            ),
        );
        let y5 = axpy(
            &y,
            h,
            &[
                (35.0 / 384.0, &k1),
                (500.0 / 1113.0, &k3),
                (125.0 / 192.0, &k4),
                (-2187.0 / 6784.0, &k5),
                (11.0 / 84.0, &k6),
            ],
        );
        let k7 = rhs(q, lambda, x + h, &y5);
        let y4 = axpy(
            &y,
            h,
            &[
                (5179.0 / 57600.0, &k1),
                (7571.0 / 16695.0, &k3),
                (393.0 / 640.0, &k4),
                (-92097.0 / 339200.0, &k5),
                (187.0 / 2100.0, &k6),
                (1.0 / 40.0, &k7),
            ],
        );
        let err = (0..4)
            .map(|i| ((y5[i] - y4[i]) / (tol * (1.0 + y[i].abs().max(y5[i].abs())))).powi(2))
            .sum::<f64>()
            .sqrt()
            / 2.0;
        if err <= 1.0 {
            x += h;
            y = y5;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Fundamental {
        c: y[0],
        cp: y[1],
        s: y[2],
        sp: y[3],
    }
}

/// Scaled Prüfer angle `φ(a)` of the solution with `φ(0) = phi0`, where
/// `y = r sin φ`, `y' = k r cos φ`, `k = max(1, √|λ|)` and
/// `φ' = k cos²φ + ((λ − q)/k) sin²φ`, from a fixed RK4 grid of `steps`
/// points. The scaling keeps `φ'` nearly constant for large `λ`.
pub fn prufer_angle(q: &dyn Fn(f64) -> f64, a: f64, lambda: f64, phi0: f64, steps: usize) -> f64 {
    let h = a / steps as f64;
    let k = lambda.abs().sqrt().max(1.0);
    let f = |x: f64, p: f64| k * p.cos().powi(2) + (lambda - q(x)) / k * p.sin().powi(2);
    let mut p = phi0;
    for k in 0..steps {
        let x = k as f64 * h;
        let k1 = f(x, p);
        let k2 = f(x + h / 2.0, p + h / 2.0 * k1);
        let k3 = f(x + h / 2.0, p + h / 2.0 * k2);
        let k4 = f(x + h, p + h * k3);
        p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    p
}

fn steps_for(a: f64, lambda: f64) -> usize {
    let rho = lambda.abs().sqrt().max(1.0);
    ((640.0 * rho * a / (2.0 * PI)).ceil() as usize).max(4000)
}

/// Number of Dirichlet eigenvalues (`y(0) = y(a) = 0`) strictly below `λ`.
pub fn dirichlet_count(q: &dyn Fn(f64) -> f64, a: f64, lambda: f64, steps: usize) -> usize {
    let p = prufer_angle(q, a, lambda, 0.0, steps);
    (p / PI).floor().max(0.0) as usize
}

/// Number of Neumann eigenvalues (`y'(0) = y'(a) = 0`) strictly below `λ`.
pub fn neumann_count(q: &dyn Fn(f64) -> f64, a: f64, lambda: f64, steps: usize) -> usize {
    let p = prufer_angle(q, a, lambda, PI / 2.0, steps);
    if p <= PI / 2.0 {
        0
    } else {
        ((p - PI / 2.0) / PI).floor() as usize + 1
    }
}

type Counter = fn(&dyn Fn(f64) -> f64, f64, f64, usize) -> usize;

fn eigenvalues_by_count(
    count: Counter,
    q: &dyn Fn(f64) -> f64,
    a: f64,
    lambda_min: f64,
    lambda_max: f64,
    tol: f64,
) -> Vec<f64> {
    let steps = steps_for(a, lambda_max.abs().max(lambda_min.abs()));
    let n = |l: f64| count(q, a, l, steps);
    let base = n(lambda_min);
    let total = n(lambda_max);
    (base..total)
        .map(|k| {
            // k-th eigenvalue: smallest λ with n(λ) > k.
            let (mut lo, mut hi) = (lambda_min, lambda_max);
            while hi - lo > tol * hi.abs().max(1.0) {
                let mid = 0.5 * (lo + hi);
                if n(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Dirichlet eigenvalues in `[lambda_min, lambda_max)` by bisection on the
/// Sturm count.
pub fn dirichlet_eigenvalues(
    q: &dyn Fn(f64) -> f64,
    a: f64,
    lambda_min: f64,
    lambda_max: f64,
    tol: f64,
) -> Vec<f64> {
    eigenvalues_by_count(dirichlet_count, q, a, lambda_min, lambda_max, tol)
}

pub fn neumann_eigenvalues(
    q: &dyn Fn(f64) -> f64,
    a: f64,
    lambda_min: f64,
    lambda_max: f64,
    tol: f64,
) -> Vec<f64> {
    eigenvalues_by_count(neumann_count, q, a, lambda_min, lambda_max, tol)
}

/// Bands `{λ : |Δ(λ)| ≤ 1}` of an even potential on `[0, a]`, where
/// `Δ = (C + S')/2`. Evenness gives `Δ² − 1 = C'(a) S(a)`, so the edges are
/// the merged Dirichlet and Neumann spectra; the lowest one is Neumann and
/// the bands are `[e₀, e₁], [e₂, e₃], …`. `lambda_min` must lie below the
/// ground state. Gaps narrower than `merge_width` are closed.
pub fn discriminant_bands(
    q: &dyn Fn(f64) -> f64,
    a: f64,
    lambda_min: f64,
    lambda_max: f64,
    merge_width: f64,
) -> Vec<(f64, f64)> {
    let mut e = dirichlet_eigenvalues(q, a, lambda_min, lambda_max, 1e-13);
    e.extend(neumann_eigenvalues(q, a, lambda_min, lambda_max, 1e-13));
    e.sort_by(f64::total_cmp);
    let bands = e
        .chunks(2)
        .map(|c| (c[0], if c.len() == 2 { c[1] } else { lambda_max }))
        .collect();
    merge_bands(bands, merge_width)
}

/// Closes gaps narrower than `width` between consecutive bands.
pub fn merge_bands(bands: Vec<(f64, f64)>, width: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(bands.len());
    for b in bands {
        match out.last_mut() {
            Some(last) if b.0 - last.1 < width => last.1 = last.1.max(b.1),
            _ => out.push(b),
        }
    }
    out
}

/// Seeded random source for Lagrange-consistent data and quasi-momenta.
pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.gen_range(lo..hi)
    }

    /// `(c, c', s, s')` with `c s' − c' s = 1` and `|s| ≥ 0.1`.
    pub fn lagrange(&mut self) -> Fundamental {
        let mut s = self.uniform(-2.0, 2.0);
        if s.abs() < 0.1 {
            s = 0.1f64.copysign(s + f64::MIN_POSITIVE);
        }
        let c = self.uniform(-2.0, 2.0);
        let sp = self.uniform(-2.0, 2.0);
        Fundamental {
            c,
            cp: (c * sp - 1.0) / s,
            s,
            sp,
        }
    }

    /// As [`Sampler::lagrange`] but with `c = s'`, the even case.
    pub fn lagrange_even(&mut self) -> Fundamental {
        let f = self.lagrange();
        Fundamental {
            c: f.sp,
            cp: (f.sp * f.sp - 1.0) / f.s,
            ..f
        }
    }

    pub fn theta(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.uniform(-PI, PI)).collect()
    }
}

/// Zero-potential data `(cos ρa, −ρ sin ρa, sin ρa / ρ, cos ρa)` for `λ = ρ² > 0`.
pub fn free_fundamental(a: f64, lambda: f64) -> Fundamental {
    let r = lambda.sqrt();
    Fundamental {
        c: (r * a).cos(),
        cp: -r * (r * a).sin(),
        s: (r * a).sin() / r,
        sp: (r * a).cos(),
    }
}
