#![allow(dead_code)]

use fluidjac::{Actuator, Assembly, DofSelection, FreeDesign, Placement, PlatformState};
use nalgebra::Vector3;
use rand::Rng;

pub fn rig_design(name: &str, deg: f64) -> FreeDesign {
    FreeDesign::new(name, 0.1, 0.005, deg.to_radians(), 103_400.0).unwrap()
}

pub fn reference_rig() -> Assembly {
    fluidjac::io::paper_rig().to_assembly().unwrap()
}

/// Fiber angle with |angle| in [5, 85] degrees and random sign.
pub fn random_angle<R: Rng>(rng: &mut R) -> f64 {
    let mag: f64 = rng.gen_range(5f64..85.0).to_radians();
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

pub fn random_design<R: Rng>(rng: &mut R, name: String) -> FreeDesign {
    FreeDesign::new(
        name,
        rng.gen_range(0.02..0.3),
        rng.gen_range(0.002..0.02),
        random_angle(rng),
        rng.gen_range(50e3..300e3),
    )
    .unwrap()
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Random assembly with arbitrary axes and attachment points within 3 cm.
pub fn random_assembly<R: Rng>(rng: &mut R, n: usize, dofs: DofSelection) -> Assembly {
    let actuators = (0..n)
        .map(|i| Actuator {
            design: random_design(rng, format!("f{i}")),
            placement: Placement::new(
                Vector3::new(
                    rng.gen_range(-0.03..0.03),
                    rng.gen_range(-0.03..0.03),
                    rng.gen_range(-0.03..0.03),
                ),
                random_unit(rng),
            )
            .unwrap(),
        })
        .collect();
    Assembly::new(actuators, dofs).unwrap()
}

/// A platform state within a centimetre and half a radian of rest at which
/// every FREE is valid and keeps its radius within a factor of four of rest.
/// Beyond that the fibers are nearly unwound and the model leaves its
/// physical range (radii of metres).
pub fn random_state<R: Rng>(rng: &mut R, assembly: &Assembly) -> PlatformState {
    loop {
        let s = PlatformState::new(rng.gen_range(-0.01..0.01), rng.gen_range(-0.5..0.5));
        let Ok(qs) = assembly.map_platform_state(s) else {
            continue;
        };
        let plausible = assembly.actuators().iter().zip(qs).all(|(a, q)| {
            let r = a.design.deformed_radius(q).unwrap();
            (0.25..=4.0).contains(&(r / a.design.radius))
        });
        if plausible {
            return s;
        }
    }
}
