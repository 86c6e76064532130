//! Small constructors for test and demo geometry.

use std::f64::consts::TAU;

use crate::complex::{Simplex, SimplicialSet};
use crate::point::Point;

/// The segment `[a, b]` as a 1-complex.
pub fn segment(a: &[f64], b: &[f64]) -> SimplicialSet {
    polyline(&[Point::from(a.to_vec()), Point::from(b.to_vec())], false)
}

/// Polyline through `pts`; `closed` joins the last point to the first.
pub fn polyline(pts: &[Point], closed: bool) -> SimplicialSet {
    let n = pts.first().map_or(0, Point::dim);
    let k = pts.len();
    let mut simplices: Vec<Simplex> = (0..k.saturating_sub(1)).map(|i| Simplex::new([i, i + 1])).collect();
    if closed && k > 2 {
        simplices.push(Simplex::new([k - 1, 0]));
    }
    SimplicialSet::from_parts(n, pts.to_vec(), simplices).expect("polyline is valid")
}

/// Regular `segments`-gon inscribed in the circle of the given radius in the
/// coordinate plane `(axes.0, axes.1)` through `center`.
pub fn circle(center: &[f64], radius: f64, segments: usize, axes: (usize, usize)) -> SimplicialSet {
    let c = Point::from(center.to_vec());
    let pts: Vec<Point> = (0..segments)
        .map(|k| {
            let a = TAU * k as f64 / segments as f64;
            let mut p = c.clone();
            p[axes.0] += radius * a.cos();
            p[axes.1] += radius * a.sin();
            p
        })
        .collect();
    polyline(&pts, true)
}

/// Axis-aligned square `[o, o+side]²` split into two triangles.
pub fn square(origin: &[f64; 2], side: f64) -> SimplicialSet {
    let [x, y] = *origin;
    SimplicialSet::from_parts(
        2,
        vec![
            Point::from([x, y]),
            Point::from([x + side, y]),
            Point::from([x + side, y + side]),
            Point::from([x, y + side]),
        ],
        vec![Simplex::new([0, 1, 2]), Simplex::new([0, 2, 3])],
    )
    .expect("square is valid")
}

/// Triangulated disk in R²: `rings` concentric rings of `segments` points
/// joined to the center.
pub fn disk(center: &[f64; 2], radius: f64, segments: usize, rings: usize) -> SimplicialSet {
    let rings = rings.max(1);
    let mut verts = vec![Point::from(*center)];
    for r in 1..=rings {
        let rr = radius * r as f64 / rings as f64;
        for k in 0..segments {
            let a = TAU * k as f64 / segments as f64;
            verts.push(Point::from([center[0] + rr * a.cos(), center[1] + rr * a.sin()]));
        }
    }
    let ring = |r: usize, k: usize| 1 + (r - 1) * segments + (k % segments);
    let mut simplices = Vec::new();
    for k in 0..segments {
        simplices.push(Simplex::new([0, ring(1, k), ring(1, k + 1)]));
    }
    for r in 2..=rings {
        for k in 0..segments {
            simplices.push(Simplex::new([ring(r - 1, k), ring(r, k), ring(r, k + 1)]));
            simplices.push(Simplex::new([ring(r - 1, k), ring(r, k + 1), ring(r - 1, k + 1)]));
        }
    }
    SimplicialSet::from_parts(2, verts, simplices).expect("disk is valid")
}

/// Finite point set as a 0-complex.
pub fn points(pts: &[&[f64]]) -> SimplicialSet {
    let n = pts.first().map_or(0, |p| p.len());
    SimplicialSet::from_points(n, pts.iter().map(|p| Point::from(p.to_vec())))
}
