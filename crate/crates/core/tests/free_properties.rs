mod common;

use std::f64::consts::PI;

use fluidjac::{force_moment_ratio, Deformation, FreeDesign};
use proptest::prelude::*;

fn design_strategy() -> impl Strategy<Value = FreeDesign> {
    (
        0.02f64..0.3,
        0.002f64..0.02,
        2f64..88.0,
        any::<bool>(),
        1e4f64..5e5,
    )
        .prop_map(|(l, r, deg, neg, pmax)| {
            let angle = if neg { -deg } else { deg }.to_radians();
            FreeDesign::new("p", l, r, angle, pmax).unwrap()
        })
}

/// Valid deformation as fractions of the admissible ranges.
fn deformation_for(d: &FreeDesign, ext: f64, twist: f64) -> Deformation {
    let geo = d.derived();
    let l = d.length + ext * (geo.fiber_length - d.length);
    let dl = if ext >= 0.0 {
        l - d.length
    } else {
        ext * 0.9 * d.length
    };
    let wind = 2.0 * PI * geo.revolutions;
    Deformation::new(dl, -wind * 0.9 * twist)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn relaxed_state_closure(d in design_strategy()) {
        let v = d.enclosed_volume(Deformation::RELAXED).unwrap();
        let expect = PI * d.radius * d.radius * d.length;
        prop_assert!(((v - expect) / expect).abs() <= 1e-12);
        let r = d.deformed_radius(Deformation::RELAXED).unwrap();
        prop_assert!(((r - d.radius) / d.radius).abs() <= 1e-12);
    }

    #[test]
    fn volume_equals_cylinder_formula(d in design_strategy(), ext in -0.9f64..0.9, tw in -0.9f64..0.9) {
        let q = deformation_for(&d, ext, tw);
        prop_assume!(d.validate_deformation(q).is_valid());
        let r = d.deformed_radius(q).unwrap();
        let l = d.deformed_length(q).unwrap();
        let v = d.enclosed_volume(q).unwrap();
        prop_assert!(v > 0.0);
        prop_assert!(((v - PI * r * r * l) / v).abs() <= 1e-12);
    }

    #[test]
    fn power_balance(
        d in design_strategy(), ext in -0.8f64..0.8, tw in -0.8f64..0.8,
        ql in -1.0f64..1.0, qp in -1.0f64..1.0, frac in 0.0f64..1.0,
    ) {
        let q = deformation_for(&d, ext, tw);
        prop_assume!(d.validate_deformation(q).is_valid());
        let p = frac * d.p_max;
        let tau = d.axial_wrench(q, p).unwrap();
        let j = d.fluid_jacobian(q).unwrap();
        let mech = tau.force * ql + tau.moment * qp;
        let fluid = p * (j.dv_dl * ql + j.dv_dphi * qp);
        let scale = (tau.force * ql).abs() + (tau.moment * qp).abs();
        prop_assert!((mech - fluid).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn chirality_mirror(d in design_strategy(), ext in -0.8f64..0.8) {
        let mirrored = FreeDesign::new("m", d.length, d.radius, -d.fiber_angle, d.p_max).unwrap();
        let q = deformation_for(&d, ext, 0.0);
        prop_assume!(d.validate_deformation(q).is_valid());
        let a = d.fluid_jacobian(q).unwrap();
        let b = mirrored.fluid_jacobian(q).unwrap();
        prop_assert_eq!(a.dv_dl, b.dv_dl);
        prop_assert_eq!(a.dv_dphi, -b.dv_dphi);
    }

    #[test]
    fn ratio_closure(d in design_strategy()) {
        let j = d.fluid_jacobian(Deformation::RELAXED).unwrap();
        let direct = d.radius * j.dv_dl / j.dv_dphi;
        let closed = force_moment_ratio(d.fiber_angle).unwrap();
        prop_assert!((direct - closed).abs() <= 1e-9 * closed.abs().max(1e-12));
    }

    #[test]
    fn force_sign_regimes(d in design_strategy()) {
        let j = d.fluid_jacobian(Deformation::RELAXED).unwrap();
        let critical = (1.0 / 3f64.sqrt()).acos();
        prop_assume!((d.fiber_angle.abs() - critical).abs() > 1e-9);
        prop_assert_eq!(j.dv_dl < 0.0, d.fiber_angle.abs() < critical);
    }
}

#[test]
fn jacobian_matches_central_differences_on_rig_designs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for deg in [48.0, -48.0, -85.0] {
        let d = common::rig_design("d", deg);
        let mut checked = 0;
        while checked < 100 {
            let q = Deformation::new(rng.gen_range(-0.02..0.04), rng.gen_range(-1.0..1.0));
            if !d.validate_deformation(q).is_valid() {
                continue;
            }
            let h = 1e-7;
            let v = |dl, dp| d.enclosed_volume(Deformation::new(dl, dp)).unwrap();
            let fl = (v(q.dl + h, q.dphi) - v(q.dl - h, q.dphi)) / (2.0 * h);
            let fp = (v(q.dl, q.dphi + h) - v(q.dl, q.dphi - h)) / (2.0 * h);
            let j = d.fluid_jacobian(q).unwrap();
            assert!(((j.dv_dl - fl) / j.dv_dl).abs() < 1e-6, "{deg} {q:?}");
            assert!(((j.dv_dphi - fp) / j.dv_dphi).abs() < 1e-6, "{deg} {q:?}");
            checked += 1;
        }
    }
}
