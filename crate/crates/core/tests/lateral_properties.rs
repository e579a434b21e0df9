use std::f64::consts::PI;

use approx::assert_relative_eq;
use bisa_mech_core::lateral::{
    evaluation_function, influence_bending, influence_torsion, lateral_stiffness,
    lateral_stiffness_quadrature, working_condition,
};
use bisa_mech_core::{derive_section, BlsModel, LoadCase, Material};
use proptest::prelude::*;

fn model(e: f64, nu: f64, b: f64, lambda: f64, c: f64) -> BlsModel {
    BlsModel::new(
        Material::new(e, nu).unwrap(),
        derive_section(b, lambda).unwrap(),
        c,
        0.006,
        0.08,
        10,
        20.0,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_quadrature(
        alpha in 1e-3f64..=PI,
        lambda in 0.1f64..4.0,
        nu in 0.0f64..0.49,
        e in 1e5f64..1e10,
        b in 1e-3f64..2e-2,
        c in 1e-2f64..0.3,
    ) {
        let m = model(e, nu, b, lambda, c);
        let closed = lateral_stiffness(&m, alpha).unwrap().stiffness;
        let quad = lateral_stiffness_quadrature(&m, alpha, 4096).unwrap();
        prop_assert!(((closed - quad) / closed).abs() < 1e-9, "{closed} vs {quad}");
    }

    #[test]
    fn stiffness_scales_with_e_i_and_c(
        alpha in 0.05f64..=PI,
        factor in 0.2f64..5.0,
    ) {
        let base = model(2e9, 0.35, 0.004, 1.0, 0.08);
        let k = lateral_stiffness(&base, alpha).unwrap().stiffness;

        let stiffer = model(2e9 * factor, 0.35, 0.004, 1.0, 0.08);
        let ks = lateral_stiffness(&stiffer, alpha).unwrap().stiffness;
        prop_assert!((ks / k - factor).abs() < 1e-12 * factor);

        // I scales with b⁴ at fixed λ.
        let wider = model(2e9, 0.35, 0.004 * factor.powf(0.25), 1.0, 0.08);
        let kw = lateral_stiffness(&wider, alpha).unwrap().stiffness;
        prop_assert!((kw / k - factor).abs() < 1e-12 * factor);

        let longer = model(2e9, 0.35, 0.004, 1.0, 0.08 * factor);
        let kl = lateral_stiffness(&longer, alpha).unwrap().stiffness;
        prop_assert!((kl / k - factor.powi(-3)).abs() < 1e-12 * factor.powi(-3));
    }

    #[test]
    fn evaluation_is_dimensionless(
        alpha in 0.01f64..=PI,
        s in 0.1f64..10.0,
    ) {
        let a = model(2e9, 0.35, 0.004, 1.5, 0.08);
        let b = model(2e9 * s, 0.35, 0.004 * s, 1.5, 0.08 * s);
        let fa = lateral_stiffness(&a, alpha).unwrap().evaluation;
        let fb = lateral_stiffness(&b, alpha).unwrap().evaluation;
        prop_assert_eq!(fa, fb);
        prop_assert_eq!(fa, evaluation_function(alpha, 0.35, 1.5).unwrap());
    }

    #[test]
    fn margin_is_linear_in_pretension_and_load(
        ft in 0.0f64..100.0,
        fext in 0.0f64..10.0,
        d in 0.0f64..5.0,
    ) {
        let m = model(2e9, 0.35, 0.004, 1.0, 0.08).with_pretension(ft).unwrap();
        let base = working_condition(&m, &LoadCase::new(fext, 0.0).unwrap()).margin;
        let more_tension = working_condition(
            &m.with_pretension(ft + d).unwrap(),
            &LoadCase::new(fext, 0.0).unwrap(),
        )
        .margin;
        let more_load = working_condition(&m, &LoadCase::new(fext + d, 0.0).unwrap()).margin;
        prop_assert!((more_tension - base - d * m.structure_height()).abs() < 1e-12);
        prop_assert!((base - more_load - d * m.segment_length()).abs() < 1e-12);
    }
}

#[test]
fn straight_limit_matches_cantilever() {
    let m = model(2.7e9, 0.35, 0.004, 1.0, 0.08);
    let k = lateral_stiffness(&m, 1e-5).unwrap().stiffness;
    let cantilever = 3.0 * m.flexural_rigidity() / 0.08f64.powi(3);
    assert_relative_eq!(k, cantilever, max_relative = 1e-6);
}

#[test]
fn result_factors_are_consistent() {
    let m = model(2.7e9, 0.35, 0.004, 1.0, 0.08);
    for d in 1..=180 {
        let r = lateral_stiffness(&m, f64::from(d).to_radians()).unwrap();
        let back = r.stiffness * 0.08f64.powi(3) / (4.0 * m.flexural_rigidity());
        assert_relative_eq!(back, r.evaluation, max_relative = 1e-12);
        assert!(r.stiffness > 0.0);
    }
}

#[test]
fn torsion_share_grows_with_angle() {
    let ratios: Vec<f64> = (1..=180)
        .map(|d| {
            let a = f64::from(d).to_radians();
            influence_torsion(a).unwrap() / influence_bending(a).unwrap()
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0]));
}
