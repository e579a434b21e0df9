//! Planar constant-curvature kinematics and distal-point statistics.
//!
//! Poses start at the origin with the base tangent along +x and bend
//! towards +y. The bending angle is the change of tangent direction from
//! base to tip.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{finite, non_negative, positive, MechError, Result};

pub type Point = [f64; 2];

/// Seed of the shuffle inside [`min_enclosing_circle`].
const CIRCLE_SEED: u64 = 0x5eed_c1ac_1e00_0001;

/// A chain of constant-curvature segments, stored as junction points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pose2D {
    /// `segment_angles.len() + 1` points, base first.
    pub points: Vec<Point>,
    /// Tangent-angle change across each segment, in radians.
    pub segment_angles: Vec<f64>,
}

impl Pose2D {
    pub fn base(&self) -> Point {
        self.points[0]
    }

    /// Tip position.
    pub fn distal(&self) -> Point {
        *self.points.last().expect("pose has at least two points")
    }

    /// Total tangent rotation, base to tip.
    pub fn total_angle(&self) -> f64 {
        self.segment_angles.iter().sum()
    }

    /// Arc length recovered from each chord `c` and angle `φ` as
    /// `c·(φ/2)/sin(φ/2)`.
    pub fn arc_length(&self) -> f64 {
        self.points
            .windows(2)
            .zip(&self.segment_angles)
            .map(|(w, &phi)| distance(w[0], w[1]) * arc_over_chord(phi))
            .sum()
    }

    /// `x_mm,y_mm` CSV of the junction points.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_mm,y_mm\n");
        for p in &self.points {
            out.push_str(&format!("{},{}\n", p[0] * 1000.0, p[1] * 1000.0));
        }
        out
    }
}

/// `(φ/2) / sin(φ/2)`, the arc-to-chord ratio of a circular arc.
fn arc_over_chord(phi: f64) -> f64 {
    let h = 0.5 * phi;
    if h.abs() < 1e-4 {
        1.0 + h * h / 6.0
    } else {
        h / h.sin()
    }
}

pub fn distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Offset of the end of an arc of length `len` turning through `phi`,
/// in the frame of its starting tangent: `R(sin φ, 1 − cos φ)`.
fn local_arc_offset(len: f64, phi: f64) -> Point {
    if phi == 0.0 {
        return [len, 0.0];
    }
    let r = len / phi;
    let s = (0.5 * phi).sin();
    [r * phi.sin(), 2.0 * r * s * s]
}

/// One constant-curvature arc of total length `total_length` bent through
/// `angle`, split into `segments` equal pieces.
pub fn arc_pose(total_length: f64, angle: f64, segments: usize) -> Result<Pose2D> {
    positive("total_length", total_length)?;
    non_negative("angle", angle)?;
    if angle >= std::f64::consts::TAU {
        return Err(MechError::domain(
            "angle",
            format!("must be below 2π, got {angle}"),
        ));
    }
    if segments == 0 {
        return Err(MechError::domain("segments", "need at least one segment"));
    }
    let n = segments as f64;
    let points = (0..=segments)
        .map(|i| {
            let frac = i as f64 / n;
            local_arc_offset(total_length * frac, angle * frac)
        })
        .collect();
    Ok(Pose2D {
        points,
        segment_angles: vec![angle / n; segments],
    })
}

/// Chains constant-curvature arcs with tangent continuity.
pub fn piecewise_pose(lengths: &[f64], angles: &[f64]) -> Result<Pose2D> {
    if lengths.len() != angles.len() {
        return Err(MechError::domain(
            "angles",
            format!(
                "{} angles given for {} segment lengths",
                angles.len(),
                lengths.len()
            ),
        ));
    }
    if lengths.is_empty() {
        return Err(MechError::domain("lengths", "need at least one segment"));
    }
    let mut points = Vec::with_capacity(lengths.len() + 1);
    let mut pos = [0.0, 0.0];
    let mut heading = 0.0f64;
    points.push(pos);
    for (&len, &phi) in lengths.iter().zip(angles) {
        positive("lengths", len)?;
        finite("angles", phi)?;
        let [dx, dy] = local_arc_offset(len, phi);
        let (sh, ch) = heading.sin_cos();
        pos = [pos[0] + ch * dx - sh * dy, pos[1] + sh * dx + ch * dy];
        points.push(pos);
        heading += phi;
    }
    Ok(Pose2D {
        points,
        segment_angles: angles.to_vec(),
    })
}

/// Circle covering a set of points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CirclePatch {
    pub center: Point,
    pub radius: f64,
}

impl CirclePatch {
    fn covers(&self, p: Point) -> bool {
        distance(self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-15
    }

    fn diameter(a: Point, b: Point) -> Self {
        let center = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        Self {
            center,
            radius: distance(a, center).max(distance(b, center)),
        }
    }

    fn circumscribed(a: Point, b: Point, c: Point) -> Option<Self> {
        // Work relative to the bounding-box centre for accuracy.
        let ox = (a[0].min(b[0]).min(c[0]) + a[0].max(b[0]).max(c[0])) / 2.0;
        let oy = (a[1].min(b[1]).min(c[1]) + a[1].max(b[1]).max(c[1])) / 2.0;
        let (ax, ay) = (a[0] - ox, a[1] - oy);
        let (bx, by) = (b[0] - ox, b[1] - oy);
        let (cx, cy) = (c[0] - ox, c[1] - oy);
        let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
        if d == 0.0 {
            return None;
        }
        let a2 = ax * ax + ay * ay;
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let x = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
        let y = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
        let center = [ox + x, oy + y];
        let radius = distance(center, a)
            .max(distance(center, b))
            .max(distance(center, c));
        Some(Self { center, radius })
    }
}

/// Smallest circle enclosing `points`.
///
/// Randomised incremental construction. The points are first put in a
/// canonical order and then shuffled with a fixed seed, so the result does
/// not depend on the order of the input.
pub fn min_enclosing_circle(points: &[Point]) -> Result<CirclePatch> {
    if points.is_empty() {
        return Err(MechError::domain("points", "need at least one point"));
    }
    for p in points {
        finite("points", p[0])?;
        finite("points", p[1])?;
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(CIRCLE_SEED));

    let mut circle = CirclePatch {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if !circle.covers(pts[i]) {
            circle = circle_with_one(&pts[..i], pts[i]);
        }
    }
    Ok(circle)
}

fn circle_with_one(points: &[Point], p: Point) -> CirclePatch {
    let mut circle = CirclePatch {
        center: p,
        radius: 0.0,
    };
    for j in 0..points.len() {
        if !circle.covers(points[j]) {
            circle = circle_with_two(&points[..j], p, points[j]);
        }
    }
    circle
}

fn circle_with_two(points: &[Point], p: Point, q: Point) -> CirclePatch {
    let mut circle = CirclePatch::diameter(p, q);
    for &r in points {
        if !circle.covers(r) {
            circle = CirclePatch::circumscribed(p, q, r).unwrap_or_else(|| {
                // Collinear: the two farthest of the three span the circle.
                let cands = [
                    CirclePatch::diameter(p, q),
                    CirclePatch::diameter(p, r),
                    CirclePatch::diameter(q, r),
                ];
                cands
                    .into_iter()
                    .max_by(|a, b| a.radius.total_cmp(&b.radius))
                    .expect("three candidates")
            });
        }
    }
    circle
}

/// Spread of the distal points of several poses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingError {
    /// Largest distance between any two distal points, in m.
    #[serde(rename = "max_pairwise_m")]
    pub max_pairwise: f64,
    /// Minimum enclosing circle of the distal points; its centre is taken
    /// as the average position.
    pub circle: CirclePatch,
}

/// Compares the tip positions reached under different load cases.
pub fn coupling_error(poses: &[Pose2D]) -> Result<CouplingError> {
    if poses.len() < 2 {
        return Err(MechError::domain(
            "poses",
            format!("need at least two poses, got {}", poses.len()),
        ));
    }
    let tips: Vec<Point> = poses.iter().map(Pose2D::distal).collect();
    let mut max_pairwise: f64 = 0.0;
    for (i, a) in tips.iter().enumerate() {
        for b in &tips[i + 1..] {
            max_pairwise = max_pairwise.max(distance(*a, *b));
        }
    }
    Ok(CouplingError {
        max_pairwise,
        circle: min_enclosing_circle(&tips)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_point(p: Point, q: Point, tol: f64) {
        assert!(distance(p, q) < tol, "{p:?} vs {q:?}");
    }

    #[test]
    fn arc_pose_examples() {
        let straight = arc_pose(0.1, 0.0, 10).unwrap();
        assert_eq!(straight.points.len(), 11);
        assert_point(straight.distal(), [0.1, 0.0], 1e-15);

        let l0 = 0.08;
        let half = arc_pose(l0, PI, 8).unwrap();
        assert_point(half.distal(), [0.0, 2.0 * l0 / PI], 1e-12);

        let quarter = arc_pose(l0, FRAC_PI_2, 8).unwrap();
        let r = 2.0 * l0 / PI;
        assert_point(quarter.distal(), [r, r], 1e-12);

        assert!(arc_pose(0.0, 1.0, 4).is_err());
        assert!(arc_pose(0.1, 1.0, 0).is_err());
        assert!(arc_pose(0.1, 7.0, 4).is_err());
    }

    #[test]
    fn endpoint_identity_on_degree_grid() {
        let l = 0.08;
        for d in 1..360 {
            let a = f64::from(d).to_radians();
            let pose = arc_pose(l, a, 12).unwrap();
            let r = l / a;
            let expect = [r * a.sin(), r * (1.0 - a.cos())];
            assert!(distance(pose.distal(), expect) < 1e-9 * l);
            assert_relative_eq!(pose.arc_length(), l, max_relative = 1e-9);
        }
    }

    #[test]
    fn piecewise_reduces_to_arc() {
        let one = piecewise_pose(&[0.08], &[1.2]).unwrap();
        let arc = arc_pose(0.08, 1.2, 1).unwrap();
        assert_point(one.distal(), arc.distal(), 1e-15);

        let n = 9;
        let a = 2.0;
        let chain = piecewise_pose(&vec![0.01; n], &vec![a / n as f64; n]).unwrap();
        let arc = arc_pose(0.01 * n as f64, a, n).unwrap();
        for (p, q) in chain.points.iter().zip(&arc.points) {
            assert_point(*p, *q, 1e-12);
        }

        let flat = piecewise_pose(&[0.01, 0.02, 0.03], &[0.0; 3]).unwrap();
        assert_point(flat.distal(), [0.06, 0.0], 1e-15);
        assert!(flat.points.iter().all(|p| p[1] == 0.0));

        assert!(piecewise_pose(&[0.01], &[0.1, 0.2]).is_err());
        assert!(piecewise_pose(&[0.01, -0.01], &[0.1, 0.2]).is_err());
    }

    #[test]
    fn segmented_curvature_differs_from_uniform_arc() {
        let total = 0.09;
        let third = total / 3.0;
        let segmented = piecewise_pose(
            &[third; 3],
            &[30f64.to_radians(), 10f64.to_radians(), 30f64.to_radians()],
        )
        .unwrap();
        let uniform = arc_pose(total, 70f64.to_radians(), 3).unwrap();
        assert_relative_eq!(
            segmented.total_angle(),
            uniform.total_angle(),
            max_relative = 1e-12
        );
        let gap = distance(segmented.distal(), uniform.distal());
        // Regression value for this geometry.
        assert_relative_eq!(gap, 1.1954768613212268e-3, max_relative = 1e-9);
    }

    #[test]
    fn circle_small_cases() {
        let c = min_enclosing_circle(&[[0.3, -0.2]]).unwrap();
        assert_eq!(c.radius, 0.0);
        assert_eq!(c.center, [0.3, -0.2]);

        let c = min_enclosing_circle(&[[0.0, 0.0], [2.0, 2.0]]).unwrap();
        assert_point(c.center, [1.0, 1.0], 1e-15);
        assert_relative_eq!(c.radius, 2f64.sqrt(), max_relative = 1e-15);

        let tri = [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]];
        let c = min_enclosing_circle(&tri).unwrap();
        assert!((c.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);

        assert!(min_enclosing_circle(&[]).is_err());
    }

    #[test]
    fn circle_with_duplicates_and_collinear_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 0.0], [0.5, 0.0]];
        let c = min_enclosing_circle(&pts).unwrap();
        assert_point(c.center, [1.0, 0.0], 1e-15);
        assert_relative_eq!(c.radius, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn coupling_examples() {
        let pose = arc_pose(0.08, 1.0, 8).unwrap();
        let e = coupling_error(&[pose.clone(), pose.clone()]).unwrap();
        assert_eq!(e.max_pairwise, 0.0);
        assert_eq!(e.circle.radius, 0.0);

        let shifted = |dx: f64| {
            let mut p = pose.clone();
            for q in &mut p.points {
                q[0] += dx;
            }
            p
        };
        let e = coupling_error(&[pose.clone(), shifted(0.0015)]).unwrap();
        assert_relative_eq!(e.max_pairwise, 0.0015, max_relative = 1e-9);

        let e = coupling_error(&[pose.clone(), shifted(0.001), shifted(0.002)]).unwrap();
        assert_relative_eq!(e.max_pairwise, 0.002, max_relative = 1e-9);
        assert_relative_eq!(e.circle.radius, 0.001, max_relative = 1e-9);

        assert!(coupling_error(&[pose]).is_err());
    }

    #[test]
    fn pose_csv_is_in_millimetres() {
        let csv = arc_pose(0.1, 0.0, 2).unwrap().to_csv();
        assert_eq!(csv, "x_mm,y_mm\n0,0\n50,0\n100,0\n");
    }
}
