use qgraph_core::interval::{
    closed_form_interval, solve_interval, Potential, DEFAULT_STEPS_PER_WAVELENGTH as SPW,
    GRAPHENE_SPACING,
};
use qgraph_core::spectrum::{ac_bands, dirichlet_eigenvalues, SpectrumOptions};
use qgraph_oracles::{discriminant_bands, dopri_fundamental, graphene, merge_bands};
use std::f64::consts::PI;

#[test]
fn graphene_matches_adaptive_integrator() {
    let q = Potential::graphene();
    for lambda in [-0.5, 3.0, 10.0, 57.0, 180.0] {
        let d = solve_interval(&q, GRAPHENE_SPACING, lambda, SPW).unwrap();
        let o = dopri_fundamental(&graphene, GRAPHENE_SPACING, lambda, 1e-13);
        let scale = lambda.abs().sqrt().max(1.0);
        assert!((d.c - o.c).abs() < 1e-7, "C at {lambda}");
        assert!((d.s - o.s).abs() < 1e-7, "S at {lambda}");
        assert!((d.sp - o.sp).abs() < 1e-7, "S' at {lambda}");
        assert!((d.cp - o.cp).abs() < 1e-7 * scale, "C' at {lambda}");
    }
}

#[test]
fn integrator_matches_closed_forms() {
    for q in [
        Potential::zero(),
        Potential::constant(2.0),
        Potential::constant(-3.5),
    ] {
        for lambda in [-10.0, 0.0, 1.0, PI * PI, 100.0] {
            let a = 1.0;
            let d = solve_interval(&q, a, lambda, SPW).unwrap();
            let e = closed_form_interval(&q, a, lambda).unwrap();
            for (x, y) in [(d.c, e.c), (d.cp, e.cp), (d.s, e.s), (d.sp, e.sp)] {
                assert!(
                    (x - y).abs() < 1e-8 * y.abs().max(1.0),
                    "{q:?} {lambda}: {x} vs {y}"
                );
            }
        }
    }
}

#[test]
fn graphene_dirichlet_matches_sturm_oracle() {
    let q = Potential::graphene();
    let got =
        dirichlet_eigenvalues(&q, GRAPHENE_SPACING, 200.0, &SpectrumOptions::default()).unwrap();
    let want =
        qgraph_oracles::dirichlet_eigenvalues(&graphene, GRAPHENE_SPACING, -1.85, 200.0, 1e-13);
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() <= 1e-6 * w.abs(), "{g} vs {w}");
    }
}

#[test]
fn graphene_bands_match_discriminant_oracle() {
    let q = Potential::graphene().declare_even();
    let ac = ac_bands(&q, GRAPHENE_SPACING, 200.0, &SpectrumOptions::default()).unwrap();
    let got = merge_bands(
        ac.bands
            .iter()
            .map(|b| (b.lambda_lo, b.lambda_hi))
            .collect(),
        1e-6,
    );
    let want = discriminant_bands(&graphene, GRAPHENE_SPACING, -1.85, 200.0, 1e-6);
    assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
    for (g, w) in got.iter().zip(&want) {
        assert!(
            (g.0 - w.0).abs() < 1e-6 && (g.1 - w.1).abs() < 1e-6,
            "{g:?} vs {w:?}"
        );
    }
}

#[test]
fn point_eigenvalues_are_roots_and_band_edges() {
    let q = Potential::graphene().declare_even();
    let a = GRAPHENE_SPACING;
    for l in dirichlet_eigenvalues(&q, a, 300.0, &SpectrumOptions::default()).unwrap() {
        let d = solve_interval(&q, a, l, SPW).unwrap();
        assert!(d.s.abs() < 1e-8 * (1.0 + l.abs()));
        assert!((d.sp.abs() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn band_interiors_satisfy_the_band_condition() {
    let q = Potential::graphene().declare_even();
    let a = GRAPHENE_SPACING;
    let ac = ac_bands(&q, a, 200.0, &SpectrumOptions::default()).unwrap();
    for w in ac.bands.windows(2) {
        assert!(w[0].lambda_hi < w[1].lambda_lo);
    }
    for b in &ac.bands {
        assert!(b.lambda_lo <= b.lambda_hi);
        for k in 1..20 {
            let l = b.lambda_lo + (b.lambda_hi - b.lambda_lo) * k as f64 / 20.0;
            let d = solve_interval(&q, a, l, SPW).unwrap();
            assert!(d.sp.abs() <= 1.0 + 1e-9, "{l}: {}", d.sp);
        }
    }
}
