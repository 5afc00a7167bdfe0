use num_complex::Complex64;
use proptest::prelude::*;
use qgraph_core::detkit::{build_u_matrix, build_v_matrix, det_lu, u_m, v_ml};
use qgraph_core::dispersion::{
    dephase, ncube_char_det, ncube_char_general, ncube_char_identical, ncube_char_simplified,
    rect_char_closed, rect_char_det5, rect_char_det8, t_bracket, t_value, tau_factors,
    QuasiMomentum,
};
use qgraph_core::interval::{is_even, solve_interval, IntervalData, Potential};
use qgraph_core::tilings::{tiling_char, TilingKind};
use qgraph_core::verify::{
    rel_dev, KAPPA_NCUBE_GENERAL, KAPPA_NCUBE_SIMPLIFIED, KAPPA_RECT_CLOSED, KAPPA_RECT_DET8,
};
use std::f64::consts::PI;

fn lagrange(s: f64, c: f64, sp: f64) -> IntervalData {
    IntervalData {
        a: 1.0,
        lambda: 0.0,
        c,
        cp: (c * sp - 1.0) / s,
        s,
        sp,
    }
}

fn s_value() -> impl Strategy<Value = f64> {
    prop_oneof![-2.0..-0.1f64, 0.1..2.0f64]
}

fn data(count: usize) -> impl Strategy<Value = Vec<IntervalData>> {
    prop::collection::vec(
        (s_value(), -2.0..2.0f64, -2.0..2.0f64).prop_map(|(s, c, sp)| lagrange(s, c, sp)),
        count,
    )
}

fn even_datum() -> impl Strategy<Value = IntervalData> {
    (s_value(), -2.0..2.0f64).prop_map(|(s, sp)| lagrange(s, sp, sp))
}

fn theta(n: usize) -> impl Strategy<Value = QuasiMomentum> {
    prop::collection::vec(-PI..PI, n).prop_map(QuasiMomentum::new_unbounded)
}

fn complex_vec(m: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(r, i)| Complex64::new(r, i)),
        m,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lemma_closed_forms(a in complex_vec(7), b in complex_vec(7), m in 2usize..=7) {
        let (a, b) = (&a[..m], &b[..m]);
        prop_assert!(rel_dev(det_lu(&build_u_matrix(a).unwrap()).unwrap(), u_m(a).unwrap()) < 1e-10);
        for l in 2..=m {
            let brute = det_lu(&build_v_matrix(a, b, l).unwrap()).unwrap();
            prop_assert!(rel_dev(brute, v_ml(a, b, l).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn rectangle_chain(d in data(4), th in theta(2)) {
        let det5 = rect_char_det5(&d, &th).unwrap();
        let det8 = rect_char_det8(&d, &th).unwrap();
        let closed = rect_char_closed(&d, &th).unwrap();
        let phase = Complex64::from_polar(1.0, 2.0 * th.big_theta());
        prop_assert!(rel_dev(det8, KAPPA_RECT_DET8 * det5) < 1e-9);
        prop_assert!(rel_dev(phase * closed, KAPPA_RECT_CLOSED * det5) < 1e-9);
        prop_assert_eq!(closed.im, 0.0);
    }

    #[test]
    fn ncube_determinant_equals_expansion(d in data(8), th in theta(4), n in 2usize..=4) {
        let th = QuasiMomentum::new_unbounded(th.theta()[..n].to_vec());
        let d = &d[..2 * n];
        prop_assert!(rel_dev(
            ncube_char_det(d, &th).unwrap(),
            KAPPA_NCUBE_GENERAL * ncube_char_general(d, &th).unwrap()
        ) < 1e-9);
    }

    #[test]
    fn ncube_simplified_for_identical_even_edges(e in even_datum(), th in theta(4), n in 2usize..=4) {
        let th = QuasiMomentum::new_unbounded(th.theta()[..n].to_vec());
        let det = ncube_char_det(&vec![e; 2 * n], &th).unwrap();
        prop_assert!(rel_dev(det, KAPPA_NCUBE_SIMPLIFIED * ncube_char_simplified(&e, &th).unwrap()) < 1e-9);
    }

    #[test]
    fn ncube_identical_form_without_evenness(d in data(1), th in theta(3), n in 2usize..=3) {
        let th = QuasiMomentum::new_unbounded(th.theta()[..n].to_vec());
        let det = ncube_char_det(&vec![d[0]; 2 * n], &th).unwrap();
        prop_assert!(rel_dev(det, ncube_char_identical(&d[0], &th).unwrap()) < 1e-9);
    }

    #[test]
    fn dephased_determinant_is_real(d in data(8), th in theta(4), n in 2usize..=4) {
        let th = QuasiMomentum::new_unbounded(th.theta()[..n].to_vec());
        let phi = ncube_char_det(&d[..2 * n], &th).unwrap();
        let r = dephase(phi, &th);
        prop_assert!(r.im.abs() <= 1e-10 * phi.norm().max(1e-300));
    }

    #[test]
    fn determinant_is_2pi_periodic(d in data(6), th in theta(3), j in 0usize..3, k in -2i32..=2) {
        let mut shifted = th.theta().to_vec();
        shifted[j] += 2.0 * PI * k as f64;
        let a = ncube_char_det(&d, &th).unwrap();
        let b = ncube_char_det(&d, &QuasiMomentum::new_unbounded(shifted)).unwrap();
        prop_assert!(rel_dev(a, b) < 1e-9);
    }

    #[test]
    fn conjugation_symmetry(d in data(6), th in theta(3)) {
        let a = ncube_char_det(&d, &th).unwrap();
        let b = ncube_char_det(&d, &th.negated()).unwrap();
        prop_assert!(rel_dev(a.conj(), b) < 1e-9);
    }

    #[test]
    fn t_value_is_quarter_tau_sum(th in theta(4), n in 2usize..=4) {
        let th = QuasiMomentum::new_unbounded(th.theta()[..n].to_vec());
        let tau: Complex64 = tau_factors(&th).unwrap().0.iter().sum();
        let t = t_value(&th).unwrap();
        prop_assert!((4.0 * t - tau.norm_sqr()).abs() < 1e-12 * (1.0 + tau.norm_sqr()));
        prop_assert!(t >= 0.0 && t <= (n * n) as f64 + 1e-12);
    }

    #[test]
    fn square_bracket_reduction(t1 in -PI..PI, t2 in -PI..PI) {
        let th = QuasiMomentum::new_unbounded(vec![t1, t2]);
        let want = 4.0 * (0.5 * t1).cos().powi(2) * (0.5 * t2).cos().powi(2);
        prop_assert!((t_value(&th).unwrap() - want).abs() < 1e-12);
        prop_assert!(t_bracket(&th).unwrap().abs() <= 2.0 + 1e-12);
    }

    #[test]
    fn tilings_periodic_and_even(e in even_datum(), t1 in -PI..PI, t2 in -PI..PI, k in -1i32..=1) {
        let s = 2.0 * PI * k as f64;
        for kind in [TilingKind::Triangular, TilingKind::ElongatedTriangular, TilingKind::TruncatedSquare, TilingKind::Trihexagonal] {
            let v = tiling_char(kind, &[e], (t1, t2)).unwrap();
            let p1 = tiling_char(kind, &[e], (t1 + s, t2)).unwrap();
            let p2 = tiling_char(kind, &[e], (t1, t2 + s)).unwrap();
            prop_assert!((v - p1).abs() < 1e-9 * (1.0 + v.abs()), "{:?}", kind);
            prop_assert!((v - p2).abs() < 1e-9 * (1.0 + v.abs()), "{:?}", kind);
            if kind != TilingKind::ElongatedTriangular {
                let m = tiling_char(kind, &[e], (-t1, -t2)).unwrap();
                prop_assert!((v - m).abs() < 1e-9 * (1.0 + v.abs()), "{:?}", kind);
            }
        }
    }

    #[test]
    fn general_triangular_is_twice_triangular(e in even_datum(), t1 in -PI..PI, t2 in -PI..PI) {
        let g = tiling_char(TilingKind::TriangularGeneral, &[e, e, e], (t1, t2)).unwrap();
        let t = tiling_char(TilingKind::Triangular, &[e], (t1, t2)).unwrap();
        prop_assert!((g - 2.0 * t).abs() < 1e-10 * (1.0 + g.abs()));
    }

    #[test]
    fn lagrange_identity_for_sampled_potentials(
        qs in prop::collection::vec(-3.0..3.0f64, 4..16),
        a in 0.5..2.0f64,
        lambda in -10.0..500.0f64,
    ) {
        let k = qs.len();
        let x = (0..k).map(|i| a * i as f64 / (k - 1) as f64).collect();
        let q = Potential::sampled(x, qs).unwrap();
        let d = solve_interval(&q, a, lambda, 64).unwrap();
        prop_assert!(d.lagrange_defect() < 1e-8);
    }

    #[test]
    fn even_potential_has_c_equal_s_prime(c in -5.0..5.0f64, a in 0.5..2.0f64, lambda in -50.0..500.0f64) {
        for q in [Potential::constant(c), Potential::graphene_with(a, -0.85, 1.34).unwrap()] {
            prop_assert!(is_even(&q, a, 1e-9));
            let d = solve_interval(&q, a, lambda, 64).unwrap();
            prop_assert!((d.sp - d.c).abs() < 1e-6);
        }
    }

    #[test]
    fn homogeneous_in_edge_scaling(d in data(4), th in theta(2), k in 0.25..4.0f64) {
        // Multiplying every (C, C', S, S') by k scales each entry row, hence the
        // 5×5 determinant, by a fixed power.
        let scaled: Vec<IntervalData> = d.iter().map(|e| IntervalData {
            c: k * e.c, cp: k * e.cp, s: k * e.s, sp: k * e.sp, ..*e
        }).collect();
        let a = ncube_char_det(&d, &th).unwrap();
        let b = ncube_char_det(&scaled, &th).unwrap();
        prop_assert!(rel_dev(b, a * k.powi(4)) < 1e-9);
    }
}
