//! Dispersion relations of four Archimedean tilings with identical even edges,
//! plus the general triangular relation for three distinct edges.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::interval::IntervalData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TilingKind {
    /// 3⁶
    Triangular,
    /// 3³.4²
    ElongatedTriangular,
    /// 4.8²
    TruncatedSquare,
    /// 3.6.3.6
    Trihexagonal,
    /// 3⁶ with three independent edge potentials.
    TriangularGeneral,
}

impl TilingKind {
    pub const ALL: [TilingKind; 5] = [
        TilingKind::Triangular,
        TilingKind::ElongatedTriangular,
        TilingKind::TruncatedSquare,
        TilingKind::Trihexagonal,
        TilingKind::TriangularGeneral,
    ];

    pub fn data_count(self) -> usize {
        match self {
            TilingKind::TriangularGeneral => 3,
            _ => 1,
        }
    }

    /// Power of `S` in front of the band bracket.
    pub fn s_power(self) -> Option<i32> {
        match self {
            TilingKind::Triangular | TilingKind::TruncatedSquare => Some(2),
            TilingKind::ElongatedTriangular | TilingKind::Trihexagonal => Some(3),
            TilingKind::TriangularGeneral => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TilingKind::Triangular => "triangular",
            TilingKind::ElongatedTriangular => "elongated_triangular",
            TilingKind::TruncatedSquare => "truncated_square",
            TilingKind::Trihexagonal => "trihexagonal",
            TilingKind::TriangularGeneral => "triangular_general",
        }
    }
}

fn half_cos(t: f64) -> f64 {
    (0.5 * t).cos()
}

/// `cos(θ₁/2) cos(θ₂/2) cos((θ₁−θ₂)/2)`.
fn triple(t1: f64, t2: f64) -> f64 {
    half_cos(t1) * half_cos(t2) * half_cos(t1 - t2)
}

/// The bracketed polynomial in `S'` (without the `S` power, and without the
/// `2S'+1` factor of the trihexagonal relation).
pub fn tiling_band_condition(kind: TilingKind, sp: f64, theta: (f64, f64)) -> Result<f64> {
    let (t1, t2) = theta;
    Ok(match kind {
        TilingKind::Triangular => 3.0 * sp + 1.0 - 4.0 * triple(t1, t2),
        TilingKind::ElongatedTriangular => {
            25.0 * sp * sp
                - 20.0 * t1.cos() * sp
                - 8.0 * triple(t1, t2)
                - 4.0 * t1.cos().powi(2)
                - 1.0
        }
        TilingKind::TruncatedSquare => {
            let s2 = sp * sp;
            81.0 * s2 * s2 - 54.0 * s2 - 12.0 * sp * (t1.cos() + t2.cos()) + 1.0
                - 4.0 * t1.cos() * t2.cos()
        }
        TilingKind::Trihexagonal => 2.0 * sp * sp - sp - triple(t1, t2),
        TilingKind::TriangularGeneral => {
            return invalid("the general triangular relation has no single-S' band condition")
        }
    })
}

/// Coefficients of the band bracket as a polynomial in `S'`, highest degree
/// first.
pub fn tiling_band_polynomial(kind: TilingKind, theta: (f64, f64)) -> Result<Vec<f64>> {
    let (t1, t2) = theta;
    let p = triple(t1, t2);
    Ok(match kind {
        TilingKind::Triangular => vec![3.0, 1.0 - 4.0 * p],
        TilingKind::ElongatedTriangular => vec![
            25.0,
            -20.0 * t1.cos(),
            -8.0 * p - 4.0 * t1.cos().powi(2) - 1.0,
        ],
        TilingKind::TruncatedSquare => vec![
            81.0,
            0.0,
            -54.0,
            -12.0 * (t1.cos() + t2.cos()),
            1.0 - 4.0 * t1.cos() * t2.cos(),
        ],
        TilingKind::Trihexagonal => vec![2.0, -1.0, -p],
        TilingKind::TriangularGeneral => {
            return invalid("the general triangular relation has no single-S' band condition")
        }
    })
}

fn horner(c: &[f64], x: Complex64) -> Complex64 {
    c.iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * x + k)
}

/// Real roots of a polynomial (highest degree first), ascending.
///
/// Durand–Kerner iteration on all complex roots, then Newton polishing of
/// the ones whose imaginary part vanishes. A real double root may come out
/// as a pair with imaginary part of order `√ε`; both are kept as one root.
pub fn real_polynomial_roots(coeffs: &[f64]) -> Vec<f64> {
    let lead = coeffs.iter().position(|&c| c != 0.0);
    let Some(lead) = lead else {
        return Vec::new();
    };
    let c: Vec<f64> = coeffs[lead..].iter().map(|&k| k / coeffs[lead]).collect();
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let radius = 1.0 + c[1..].iter().fold(0.0_f64, |m, k| m.max(k.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * PI * k as f64 / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for i in 0..deg {
            let denom = (0..deg)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = horner(&c, z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-15 * radius {
            break;
        }
    }
    let dc: Vec<f64> = c[..deg]
        .iter()
        .enumerate()
        .map(|(k, &v)| v * (deg - k) as f64)
        .collect();
    let mut out: Vec<f64> = z
        .into_iter()
        .filter(|r| r.im.abs() <= 1e-7 * (1.0 + r.re.abs()))
        .map(|r| {
            let mut x = r.re;
            for _ in 0..4 {
                let d = horner(&dc, x.into()).re;
                if d == 0.0 {
                    break;
                }
                let nx = x - horner(&c, x.into()).re / d;
                if !nx.is_finite() || (nx - x).abs() > 1e-6 * (1.0 + x.abs()) {
                    break;
                }
                x = nx;
            }
            x
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-7 * (1.0 + b.abs()));
    out
}

/// Full left-hand side of the tiling's dispersion relation.
pub fn tiling_char(kind: TilingKind, data: &[IntervalData], theta: (f64, f64)) -> Result<f64> {
    if data.len() != kind.data_count() {
        return invalid(format!(
            "{} tiling takes {} interval data, got {}",
            kind.name(),
            kind.data_count(),
            data.len()
        ));
    }
    if kind == TilingKind::TriangularGeneral {
        let (t1, t2) = theta;
        let [d1, d2, d3] = [data[0], data[1], data[2]];
        let v = d1.sp * d2.s * d3.s
            + d1.s * d2.sp * d3.s
            + d1.s * d2.s * d3.sp
            + d1.c * d2.s * d3.s
            + d2.c * d1.s * d3.s
            + d3.c * d1.s * d2.s
            - 2.0 * d1.s * d2.s * (t1 - t2).cos()
            - 2.0 * d2.s * d3.s * t1.cos()
            - 2.0 * d1.s * d3.s * t2.cos();
        return Ok(v);
    }
    let d = data[0];
    let p = kind.s_power().unwrap_or(0);
    let mut v = d.s.powi(p) * tiling_band_condition(kind, d.sp, theta)?;
    if kind == TilingKind::Trihexagonal {
        v *= 2.0 * d.sp + 1.0;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_matches_bracket() {
        for kind in &TilingKind::ALL[..4] {
            for &(t1, t2, sp) in &[(0.3, -1.2, 0.7), (2.0, 0.5, -1.4), (-3.0, 3.1, 0.05)] {
                let c = tiling_band_polynomial(*kind, (t1, t2)).unwrap();
                let v = horner(&c, sp.into()).re;
                let w = tiling_band_condition(*kind, sp, (t1, t2)).unwrap();
                assert!((v - w).abs() < 1e-12, "{kind:?}");
            }
        }
    }

    #[test]
    fn polynomial_real_roots() {
        // (x - 1)(x + 2)(x - 3) = x³ - 2x² - 5x + 6
        let r = real_polynomial_roots(&[1.0, -2.0, -5.0, 6.0]);
        assert_eq!(r.len(), 3);
        for (x, w) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((x - w).abs() < 1e-12);
        }
        assert!(real_polynomial_roots(&[1.0, 0.0, 1.0]).is_empty());
        let d = real_polynomial_roots(&[1.0, -2.0, 1.0]);
        assert_eq!(d.len(), 1);
        assert!((d[0] - 1.0).abs() < 1e-7);
        assert_eq!(real_polynomial_roots(&[0.0, 3.0, -1.5]), vec![0.5]);
    }

    fn even(s: f64, sp: f64) -> IntervalData {
        IntervalData {
            a: 1.0,
            lambda: 0.0,
            c: sp,
            cp: (sp * sp - 1.0) / s,
            s,
            sp,
        }
    }

    #[test]
    fn vanishing_s() {
        let d = IntervalData {
            a: 1.0,
            lambda: 0.0,
            c: 1.0,
            cp: 0.3,
            s: 0.0,
            sp: 1.0,
        };
        for kind in TilingKind::ALL {
            let data = vec![d; kind.data_count()];
            assert_eq!(
                tiling_char(kind, &data, (0.4, -1.0)).unwrap(),
                0.0,
                "{kind:?}"
            );
        }
    }

    #[test]
    fn band_conditions_at_gamma() {
        let z = (0.0, 0.0);
        assert_eq!(
            tiling_band_condition(TilingKind::Triangular, 1.0, z).unwrap(),
            0.0
        );
        assert_eq!(
            tiling_band_condition(TilingKind::TruncatedSquare, 1.0, z).unwrap(),
            0.0
        );
        assert_eq!(
            tiling_band_condition(TilingKind::ElongatedTriangular, 1.0, z).unwrap(),
            -8.0
        );
        assert!(tiling_band_condition(TilingKind::TriangularGeneral, 1.0, z).is_err());
    }

    #[test]
    fn trihexagonal_flat_band() {
        for th in [(0.0, 0.0), (1.0, -2.0), (PI, PI)] {
            let v = tiling_char(TilingKind::Trihexagonal, &[even(0.7, -0.5)], th).unwrap();
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn wrong_data_count() {
        let d = even(0.5, 0.2);
        assert!(tiling_char(TilingKind::Triangular, &[d, d], (0.0, 0.0)).is_err());
        assert!(tiling_char(TilingKind::TriangularGeneral, &[d], (0.0, 0.0)).is_err());
    }

    #[test]
    fn general_triangular_reduces_to_identical_form() {
        for &(s, sp, t1, t2) in &[
            (0.4, 0.3, 0.2, -1.4),
            (-1.1, 0.9, 2.5, 3.0),
            (0.7, -0.6, -3.0, 0.1),
        ] {
            let d = even(s, sp);
            let general = tiling_char(TilingKind::TriangularGeneral, &[d, d, d], (t1, t2)).unwrap();
            let tri = tiling_char(TilingKind::Triangular, &[d], (t1, t2)).unwrap();
            assert!((general - 2.0 * tri).abs() < 1e-13);
        }
    }
}
