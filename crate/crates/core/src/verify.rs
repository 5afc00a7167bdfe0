//! Seeded oracle-equivalence suite: every closed form against its brute-force
//! counterpart on random inputs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::detkit::{build_u_matrix, build_v_matrix, det_lu, u_m, v_ml};
use crate::dispersion::{
    ncube_char_det, ncube_char_general, ncube_char_simplified, rect_char_closed, rect_char_det5,
    rect_char_det8, rect_char_simplified, QuasiMomentum,
};
use crate::error::Result;
use crate::exec::{map_collect, Execution};
use crate::interval::{
    closed_form_interval, solve_interval, IntervalData, Potential, DEFAULT_STEPS_PER_WAVELENGTH,
};

/// `e^{2iΘ} · closed = KAPPA_RECT_CLOSED · det5`.
pub const KAPPA_RECT_CLOSED: f64 = -1.0;
/// `det8 = KAPPA_RECT_DET8 · det5`.
pub const KAPPA_RECT_DET8: f64 = 1.0;
/// `det = KAPPA_NCUBE_GENERAL · general`.
pub const KAPPA_NCUBE_GENERAL: f64 = 1.0;
/// `det = KAPPA_NCUBE_SIMPLIFIED · simplified` for identical even edges.
pub const KAPPA_NCUBE_SIMPLIFIED: f64 = 1.0;

pub const DETERMINANT_TOL: f64 = 1e-9;
pub const LEMMA_TOL: f64 = 1e-10;
pub const LAGRANGE_TOL: f64 = 1e-8;
pub const CLOSED_FORM_TOL: f64 = 1e-9;
pub const EVEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Trials per check (per `m` for the structured determinants, per `n`
    /// for the n-cube chain).
    pub trials: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 100,
            seed: 0x5eed,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.trials > 0 && self.passed == self.trials
    }
}

/// Relative distance `|x − y| / max(|x|, |y|)`, zero when both vanish.
pub fn rel_dev(x: Complex64, y: Complex64) -> f64 {
    let d = (x - y).norm();
    let s = x.norm().max(y.norm());
    if s == 0.0 {
        0.0
    } else {
        d / s
    }
}

fn rng_for(seed: u64, check: u64, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ check.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    r.set_stream(trial as u64);
    r
}

fn complex(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))
}

fn theta(r: &mut ChaCha8Rng, n: usize) -> QuasiMomentum {
    QuasiMomentum::new_unbounded((0..n).map(|_| r.gen_range(-PI..PI)).collect())
}

/// Wronskian-normalised data with `|S| ≥ 0.1`; with `even`, `C = S'`.
pub fn random_lagrange_data(r: &mut ChaCha8Rng, even: bool) -> IntervalData {
    let mut s: f64 = r.gen_range(-2.0..2.0);
    if s.abs() < 0.1 {
        s = if s < 0.0 { -0.1 } else { 0.1 };
    }
    let sp = r.gen_range(-2.0..2.0);
    let c = if even { sp } else { r.gen_range(-2.0..2.0) };
    IntervalData {
        a: 1.0,
        lambda: 0.0,
        c,
        cp: (c * sp - 1.0) / s,
        s,
        sp,
    }
}

fn random_potential(r: &mut ChaCha8Rng, a: f64) -> Potential {
    match r.gen_range(0..4) {
        0 => Potential::zero(),
        1 => Potential::constant(r.gen_range(-5.0..5.0)),
        2 => Potential::graphene_with(a, r.gen_range(-2.0..0.0), r.gen_range(0.5..2.0))
            .expect("valid graphene parameters"),
        _ => {
            let k: usize = r.gen_range(4..20);
            let x = (0..k).map(|i| a * i as f64 / (k - 1) as f64).collect();
            let q = (0..k).map(|_| r.gen_range(-3.0..3.0)).collect();
            Potential::sampled(x, q).expect("increasing sample grid")
        }
    }
}

fn report<F>(
    name: &str,
    check: u64,
    tol: f64,
    trials: usize,
    opts: &VerifyOptions,
    f: F,
) -> Result<CheckReport>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send,
{
    let ids: Vec<usize> = (0..trials).collect();
    let errs = map_collect(opts.execution, &ids, |&t| {
        f(&mut rng_for(opts.seed, check, t))
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(CheckReport {
        name: name.to_string(),
        trials,
        passed: errs.iter().filter(|e| **e <= tol).count(),
        max_error: errs.iter().copied().fold(0.0, f64::max),
        tolerance: tol,
    })
}

pub fn check_lemma_u(m: usize, opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        &format!("lemma_u m={m}"),
        100 + m as u64,
        LEMMA_TOL,
        opts.trials,
        opts,
        |r| {
            let a: Vec<Complex64> = (0..m).map(|_| complex(r)).collect();
            Ok(rel_dev(det_lu(&build_u_matrix(&a)?)?, u_m(&a)?))
        },
    )
}

/// All `l ∈ 2..=m` are checked in every trial.
pub fn check_lemma_v(m: usize, opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        &format!("lemma_v m={m}"),
        200 + m as u64,
        LEMMA_TOL,
        opts.trials,
        opts,
        |r| {
            let a: Vec<Complex64> = (0..m).map(|_| complex(r)).collect();
            let b: Vec<Complex64> = (0..m).map(|_| complex(r)).collect();
            let mut worst = 0.0f64;
            for l in 2..=m {
                worst = worst.max(rel_dev(
                    det_lu(&build_v_matrix(&a, &b, l)?)?,
                    v_ml(&a, &b, l)?,
                ));
            }
            Ok(worst)
        },
    )
}

pub fn check_rect_closed(opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        "rectangle closed vs det5",
        300,
        DETERMINANT_TOL,
        opts.trials,
        opts,
        |r| {
            let d: Vec<IntervalData> = (0..4).map(|_| random_lagrange_data(r, false)).collect();
            let th = theta(r, 2);
            let phase = Complex64::from_polar(1.0, 2.0 * th.big_theta());
            Ok(rel_dev(
                phase * rect_char_closed(&d, &th)?,
                KAPPA_RECT_CLOSED * rect_char_det5(&d, &th)?,
            ))
        },
    )
}

pub fn check_rect_det8(opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        "rectangle det8 vs det5",
        301,
        DETERMINANT_TOL,
        opts.trials,
        opts,
        |r| {
            let d: Vec<IntervalData> = (0..4).map(|_| random_lagrange_data(r, false)).collect();
            let th = theta(r, 2);
            Ok(rel_dev(
                rect_char_det8(&d, &th)?,
                KAPPA_RECT_DET8 * rect_char_det5(&d, &th)?,
            ))
        },
    )
}

pub fn check_rect_simplified(opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        "rectangle det5 vs simplified",
        302,
        DETERMINANT_TOL,
        opts.trials,
        opts,
        |r| {
            let e = random_lagrange_data(r, true);
            let th = theta(r, 2);
            let phase = Complex64::from_polar(1.0, 2.0 * th.big_theta());
            Ok(rel_dev(
                rect_char_det5(&[e; 4], &th)?,
                -4.0 * phase * rect_char_simplified(&e, &th)?,
            ))
        },
    )
}

pub fn check_ncube_general(n: usize, opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        &format!("ncube det vs general n={n}"),
        400 + n as u64,
        DETERMINANT_TOL,
        opts.trials,
        opts,
        |r| {
            let d: Vec<IntervalData> = (0..2 * n).map(|_| random_lagrange_data(r, false)).collect();
            let th = theta(r, n);
            Ok(rel_dev(
                ncube_char_det(&d, &th)?,
                KAPPA_NCUBE_GENERAL * ncube_char_general(&d, &th)?,
            ))
        },
    )
}

pub fn check_ncube_simplified(n: usize, opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        &format!("ncube det vs simplified n={n}"),
        500 + n as u64,
        DETERMINANT_TOL,
        opts.trials,
        opts,
        |r| {
            let e = random_lagrange_data(r, true);
            let th = theta(r, n);
            Ok(rel_dev(
                ncube_char_det(&vec![e; 2 * n], &th)?,
                KAPPA_NCUBE_SIMPLIFIED * ncube_char_simplified(&e, &th)?,
            ))
        },
    )
}

/// `|C S' − S C' − 1|` across random potentials of every kind.
pub fn check_lagrange(opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        "lagrange identity",
        600,
        LAGRANGE_TOL,
        2 * opts.trials,
        opts,
        |r| {
            let a = r.gen_range(0.5..2.0);
            let q = random_potential(r, a);
            let lambda = r.gen_range(-10.0..500.0);
            Ok(solve_interval(&q, a, lambda, DEFAULT_STEPS_PER_WAVELENGTH)?.lagrange_defect())
        },
    )
}

/// `|S' − C|` for even potentials on their symmetric interval.
pub fn check_even_reduction(opts: &VerifyOptions) -> Result<CheckReport> {
    report("even reduction", 700, EVEN_TOL, opts.trials, opts, |r| {
        let (q, a) = if r.gen_bool(0.5) {
            let a = r.gen_range(0.5..2.0);
            (Potential::constant(r.gen_range(-5.0..5.0)), a)
        } else {
            (Potential::graphene(), crate::interval::GRAPHENE_SPACING)
        };
        let d = solve_interval(
            &q,
            a,
            r.gen_range(-50.0..500.0),
            DEFAULT_STEPS_PER_WAVELENGTH,
        )?;
        Ok((d.sp - d.c).abs())
    })
}

/// Integrated zero and constant potentials against `cos`, `sin`, `cosh`, `sinh`.
pub fn check_closed_forms(opts: &VerifyOptions) -> Result<CheckReport> {
    report(
        "zero/constant closed forms",
        800,
        CLOSED_FORM_TOL,
        opts.trials,
        opts,
        |r| {
            let a = r.gen_range(0.5..2.0);
            let q = if r.gen_bool(0.5) {
                Potential::zero()
            } else {
                Potential::constant(r.gen_range(-5.0..5.0))
            };
            let lambda = r.gen_range(-10.0..500.0);
            let got = solve_interval(&q, a, lambda, DEFAULT_STEPS_PER_WAVELENGTH)?;
            let want = closed_form_interval(&q, a, lambda)?;
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
            Ok(rel(got.c, want.c)
                .max(rel(got.cp, want.cp))
                .max(rel(got.s, want.s))
                .max(rel(got.sp, want.sp)))
        },
    )
}

/// Runs every check.
pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for m in 2..=12 {
        out.push(check_lemma_u(m, opts)?);
        out.push(check_lemma_v(m, opts)?);
    }
    out.push(check_rect_closed(opts)?);
    out.push(check_rect_det8(opts)?);
    out.push(check_rect_simplified(opts)?);
    for n in 2..=4 {
        out.push(check_ncube_general(n, opts)?);
        out.push(check_ncube_simplified(n, opts)?);
    }
    out.push(check_lagrange(opts)?);
    out.push(check_even_reduction(opts)?);
    out.push(check_closed_forms(opts)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let opts = VerifyOptions {
            trials: 20,
            ..VerifyOptions::default()
        };
        for rep in run_suite(&opts).unwrap() {
            assert!(rep.ok(), "{rep:?}");
        }
    }

    #[test]
    fn execution_modes_agree() {
        let seq = VerifyOptions {
            trials: 10,
            execution: Execution::Sequential,
            ..VerifyOptions::default()
        };
        let par = VerifyOptions {
            execution: Execution::Parallel,
            ..seq
        };
        assert_eq!(run_suite(&seq).unwrap(), run_suite(&par).unwrap());
    }

    #[test]
    fn rel_dev_basics() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(rel_dev(z, z), 0.0);
        assert_eq!(rel_dev(Complex64::new(1.0, 0.0), z), 1.0);
    }
}
