//! OFF mesh export for 4-node instances (3-dimensional polytopes).
//!
//! Vertices are projected isometrically onto the ambient hyperplane
//! `sum x_i = total` using a fixed orthogonal basis of the sum-zero
//! subspace, so the export is deterministic. Exact integers are converted
//! to floats only here, at the very end.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use tubix_core::realize::{HRep, RealizedVertex};

/// Orthogonal (unnormalized) basis of `{x : sum x = 0}` in R^4 with
/// squared norms 2, 6, 12. Their pairwise dot products vanish, and each
/// row sums to zero, so centering drops out of the projection.
const BASIS: [[i64; 4]; 3] = [[1, -1, 0, 0], [1, 1, -2, 0], [1, 1, 1, -3]];
const BASIS_NORM_SQ: [f64; 3] = [2.0, 6.0, 12.0];

fn project(coords: &[BigInt]) -> [f64; 3] {
    let mut out = [0.0f64; 3];
    for (k, basis) in BASIS.iter().enumerate() {
        let mut dot = BigInt::from(0);
        for (c, &b) in coords.iter().zip(basis) {
            dot += c * b;
        }
        let dot = dot.to_f64().expect("projection of a desk-scale coordinate");
        out[k] = dot / BASIS_NORM_SQ[k].sqrt();
    }
    out
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let len = dot(v, v).sqrt();
    [v[0] / len, v[1] / len, v[2] / len]
}

/// Builds the OFF text: one face per halfspace, each face's vertex cycle
/// ordered by angle around the facet centroid, counterclockwise seen from
/// outside the polytope.
pub fn export_off(vertices: &[RealizedVertex], h: &HRep) -> String {
    assert_eq!(h.n, 4, "OFF export is for 3-dimensional polytopes");
    let points: Vec<[f64; 3]> = vertices.iter().map(|v| project(v.point.coords())).collect();

    let mut center = [0.0f64; 3];
    for p in &points {
        for (c, x) in center.iter_mut().zip(p) {
            *c += x;
        }
    }
    for c in &mut center {
        *c /= points.len() as f64;
    }

    let mut faces: Vec<Vec<usize>> = Vec::with_capacity(h.halfspaces.len());
    for hs in &h.halfspaces {
        let mut face: Vec<usize> = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                let sum: BigInt = hs.support.iter().map(|i| v.point.coords()[i].clone()).sum();
                sum == hs.rhs
            })
            .map(|(i, _)| i)
            .collect();

        let mut face_center = [0.0f64; 3];
        for &i in &face {
            for (c, x) in face_center.iter_mut().zip(&points[i]) {
                *c += x;
            }
        }
        for c in &mut face_center {
            *c /= face.len() as f64;
        }

        let normal = normalize(sub(face_center, center));
        let seed = (0..3)
            .min_by(|&a, &b| {
                let na = normal[a].abs();
                let nb = normal[b].abs();
                na.total_cmp(&nb)
            })
            .expect("three axes");
        let mut axis = [0.0f64; 3];
        axis[seed] = 1.0;
        let u = normalize(cross(normal, axis));
        let v = cross(normal, u);

        face.sort_by(|&a, &b| {
            let da = sub(points[a], face_center);
            let db = sub(points[b], face_center);
            let angle_a = dot(da, v).atan2(dot(da, u));
            let angle_b = dot(db, v).atan2(dot(db, u));
            angle_a.total_cmp(&angle_b)
        });
        faces.push(face);
    }

    let edge_count: usize = faces.iter().map(Vec::len).sum::<usize>() / 2;
    let mut out = String::from("OFF\n");
    out.push_str(&format!(
        "{} {} {}\n",
        points.len(),
        faces.len(),
        edge_count
    ));
    for p in &points {
        out.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", p[0], p[1], p[2]));
    }
    for face in &faces {
        out.push_str(&face.len().to_string());
        for i in face {
            out.push_str(&format!(" {i}"));
        }
        out.push('\n');
    }
    out
}
