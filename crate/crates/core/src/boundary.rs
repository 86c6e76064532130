//! The relative boundary part `∂(Z, W)` of a set `Z ⊂ B` on a slice `W`.
//!
//! A simplex σ of `Z` contributes `σ ∩ ∂(W∩B)` exactly when it meets
//! `int(W(ε) ∩ B)`. For a convex piece `P = σ ∩ W(ε)` this happens iff the
//! vertex centroid of `P` lies strictly inside the box and the ball, which
//! makes the result independent of `ε`.

use crate::clip::{clip_simplex, intersect_slice};
use crate::complex::{SimplicialSet, Tag};
use crate::error::Result;
use crate::point::{ClosedBall, Point};
use crate::slice::DSlice;

fn fattened_bounds(w: &DSlice, eps: f64) -> Vec<(usize, f64, f64)> {
    let mut b: Vec<(usize, f64, f64)> = w
        .free_indices()
        .map(|i| {
            let iv = w.bounds(i).unwrap();
            (i, iv.lo, iv.hi)
        })
        .chain(w.fixed_indices().map(|j| {
            let c = w.fixed_value(j).unwrap();
            (j, c - eps, c + eps)
        }))
        .collect();
    b.sort_by_key(|t| t.0);
    b
}

/// Whether the simplex with vertices `pts` meets `int(W(ε) ∩ B)`.
pub fn meets_fattened_interior(pts: &[&Point], w: &DSlice, ball: &ClosedBall, eps: f64, tol: f64) -> Result<bool> {
    let bounds = fattened_bounds(w, eps);
    let pieces = clip_simplex(pts, &bounds, tol * 1e-3)?;
    let verts: Vec<Point> = pieces.into_iter().flatten().collect();
    let Some(c) = Point::centroid(&verts) else {
        return Ok(false);
    };
    let in_box = bounds
        .iter()
        .all(|&(i, lo, hi)| c[i] > lo + tol && c[i] < hi - tol);
    Ok(in_box && ball.contains_interior(&c, tol))
}

/// `∂(Z, W)` as a simplicial set of dimension at most `Z.dim − 1` (plus
/// isolated points on the sphere). Simplices of `Z` lying in a face of
/// `W` are tagged `degenerate`.
pub fn del_zw(z: &SimplicialSet, w: &DSlice, ball: &ClosedBall, eps: f64, tol: f64) -> Result<SimplicialSet> {
    let n = z.ambient_dim();
    let mut keep = Vec::with_capacity(z.simplices().len());
    for s in z.simplices() {
        keep.push(meets_fattened_interior(&z.points_of(s), w, ball, eps, tol)?);
    }
    let mut it = keep.into_iter();
    let touching = z.filter(|_| it.next().unwrap());
    let mut out = SimplicialSet::empty(n);
    if touching.is_empty() {
        return Ok(out);
    }
    let free: Vec<usize> = w.free_indices().collect();
    for &i in &free {
        let iv = w.bounds(i).unwrap();
        for b in [iv.lo, iv.hi] {
            if !b.is_finite() {
                continue;
            }
            let face = w.fix(i, b)?;
            let cut = intersect_slice(&touching, &face, tol)?;
            let mut piece = cut.set;
            if cut.tangential > 0 {
                log::warn!("tangential contact with the face x_{i} = {b}");
                let top = touching.dim();
                for s in piece.simplices_mut() {
                    if s.dim() as i32 == top {
                        s.tags.insert(Tag::Degenerate);
                    }
                }
            }
            out.append(&piece);
        }
    }
    for p in touching.used_vertices() {
        if w.contains(p, tol) && ball.on_boundary(p, tol) {
            out.push_point(p.clone(), []);
        }
    }
    let mut out = out.weld(tol);
    out.shrink_dim();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn setup() -> (DSlice, ClosedBall) {
        (
            DSlice::rectangle(&[(0.0, 1.0), (0.0, 1.0)]).unwrap(),
            ClosedBall::new([0.5, 0.5], 5.0).unwrap(),
        )
    }

    #[test]
    fn transversal_crossing() {
        let (w, b) = setup();
        let z = shapes::segment(&[0.5, 0.5], &[1.5, 0.5]);
        let d = del_zw(&z, &w, &b, 0.1, 1e-9).unwrap();
        let v = d.used_vertices();
        assert_eq!(v.len(), 1);
        assert!(v[0].dist(&Point::from([1.0, 0.5])) < 1e-12);
        let half = del_zw(&z, &w, &b, 0.05, 1e-9).unwrap();
        assert_eq!(d, half);
    }

    #[test]
    fn interior_and_outside_contacts() {
        let (w, b) = setup();
        let inside = shapes::segment(&[0.2, 0.5], &[0.8, 0.5]);
        assert!(del_zw(&inside, &w, &b, 0.1, 1e-9).unwrap().is_empty());
        let outside = shapes::segment(&[1.0, 0.5], &[2.0, 0.5]);
        assert!(del_zw(&outside, &w, &b, 0.1, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn sphere_endpoint() {
        let w = DSlice::full(2);
        let b = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
        let z = shapes::segment(&[0.0, 0.0], &[1.0, 0.0]);
        let d = del_zw(&z, &w, &b, 0.1, 1e-9).unwrap();
        assert_eq!(d.used_vertices().len(), 1);
        assert_eq!(d.used_vertices()[0], &Point::from([1.0, 0.0]));
    }
}
