//! Fixtures shared by the benchmarks.

use bisa_mech_core::kinematics::Point;
use bisa_mech_core::{derive_section, BlsModel, Material};

/// A 4 mm square PLA-like chain, 80 mm long.
pub fn reference_chain() -> BlsModel {
    BlsModel::new(
        Material::new(2.7e9, 0.35).expect("material"),
        derive_section(0.004, 1.0).expect("section"),
        0.08,
        0.006,
        0.08,
        10,
        19.62,
    )
    .expect("chain")
}

/// Points scattered on a deterministic spiral.
pub fn spiral_points(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let t = i as f64 * 0.618_033_988_75;
            let r = (i as f64).sqrt();
            [
                r * (t * std::f64::consts::TAU).cos(),
                r * (t * std::f64::consts::TAU).sin(),
            ]
        })
        .collect()
}
