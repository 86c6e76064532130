//! Exact intersection of simplices with axis-aligned hyperplanes, half-spaces
//! and slices.
//!
//! Slicing handles simplices of dimension ≤ 3 and clipping handles simplices
//! of dimension ≤ 2; higher dimensions return [`Error::Unsupported`].

use crate::complex::{Simplex, SimplicialSet, Tag};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::slice::DSlice;

/// Result of slicing a set by a hyperplane.
#[derive(Clone, Debug)]
pub struct Sliced {
    pub set: SimplicialSet,
    /// Number of top simplices lying inside the hyperplane.
    pub tangential: usize,
}

/// Crossing point of an edge with `{x_axis = c}`, computed from a canonical
/// endpoint order so shared edges produce bit-identical points.
fn crossing(a: &Point, b: &Point, axis: usize, c: f64) -> Point {
    let (a, b) = if a.lex_cmp(b).is_le() { (a, b) } else { (b, a) };
    let sa = a[axis] - c;
    let sb = b[axis] - c;
    let t = sa / (sa - sb);
    let mut q = a.lerp(b, t);
    q[axis] = c;
    q
}

fn push_unique(out: &mut Vec<Point>, q: Point, tol: f64) {
    if !out.iter().any(|o| o.dist(&q) <= tol) {
        out.push(q);
    }
}

/// Orders coplanar points of a convex polygon cyclically.
pub fn convex_polygon_order(pts: &[Point]) -> Vec<Point> {
    if pts.len() <= 3 {
        return pts.to_vec();
    }
    let c = Point::centroid(pts).unwrap();
    // orthonormal basis of the plane spanned by pts - c
    let mut u = pts
        .iter()
        .map(|p| p.sub(&c))
        .max_by(|a, b| a.norm_sq().total_cmp(&b.norm_sq()))
        .unwrap();
    let un = u.norm();
    if un == 0.0 {
        return vec![pts[0].clone()];
    }
    u = u.scale(1.0 / un);
    let mut v = Point::origin(c.dim());
    let mut best = 0.0;
    for p in pts {
        let d = p.sub(&c);
        let w = d.axpy(-d.dot(&u), &u);
        let wn = w.norm_sq();
        if wn > best {
            best = wn;
            v = w;
        }
    }
    let vn = v.norm();
    let mut keyed: Vec<(f64, Point)> = pts
        .iter()
        .map(|p| {
            let d = p.sub(&c);
            let ang = if vn > 0.0 {
                (d.dot(&v) / vn).atan2(d.dot(&u))
            } else {
                d.dot(&u)
            };
            (ang, p.clone())
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, p)| p).collect()
}

/// Splits a convex polygon into simplices (fan from the first vertex).
fn polygon_pieces(poly: Vec<Point>) -> Vec<Vec<Point>> {
    match poly.len() {
        0 => vec![],
        1 | 2 | 3 => vec![poly],
        _ => (1..poly.len() - 1)
            .map(|i| vec![poly[0].clone(), poly[i].clone(), poly[i + 1].clone()])
            .collect(),
    }
}

/// Intersection of one simplex with `{x_axis = c}`. Returns the pieces and
/// whether the whole simplex lies in the hyperplane.
pub fn slice_simplex(pts: &[&Point], axis: usize, c: f64, tol: f64) -> Result<(Vec<Vec<Point>>, bool)> {
    let k = pts.len() - 1;
    if k > 3 {
        return Err(Error::Unsupported(format!("slicing a {k}-simplex")));
    }
    let s: Vec<f64> = pts.iter().map(|p| p[axis] - c).collect();
    let on: Vec<bool> = s.iter().map(|v| v.abs() <= tol).collect();
    if on.iter().all(|&o| o) {
        let snapped = pts
            .iter()
            .map(|p| {
                let mut q = (*p).clone();
                q[axis] = c;
                q
            })
            .collect();
        return Ok((vec![snapped], true));
    }
    let mut out: Vec<Point> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if on[i] {
            let mut q = (*p).clone();
            q[axis] = c;
            push_unique(&mut out, q, tol);
        }
    }
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            if !on[a] && !on[b] && s[a] * s[b] < 0.0 {
                push_unique(&mut out, crossing(pts[a], pts[b], axis, c), tol);
            }
        }
    }
    let pieces = match out.len() {
        0 => vec![],
        4 => polygon_pieces(convex_polygon_order(&out)),
        _ => vec![out],
    };
    Ok((pieces, false))
}

/// Intersection of a set with the hyperplane `{x_axis = c}`.
///
/// Top simplices lying inside the hyperplane are replaced by their facets
/// (tagged [`Tag::Tangential`]) and counted; lower simplices inside the
/// hyperplane are kept whole.
pub fn slice_set(x: &SimplicialSet, axis: usize, c: f64, tol: f64) -> Result<Sliced> {
    let n = x.ambient_dim();
    let mut out = SimplicialSet::empty(n);
    let mut tangential = 0;
    for s in x.simplices() {
        let pts = x.points_of(s);
        // quick reject
        let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p[axis]), hi.max(p[axis]))
        });
        if lo > c + tol || hi < c - tol {
            continue;
        }
        let (pieces, tang) = slice_simplex(&pts, axis, c, tol)?;
        if tang && s.dim() as i32 == x.dim() && s.dim() > 0 {
            if !s.has(&Tag::Degenerate) {
                tangential += 1;
            }
            let whole = &pieces[0];
            for skip in 0..whole.len() {
                let facet: Vec<Point> = whole
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, p)| p.clone())
                    .collect();
                let tags = s.tags.iter().cloned().chain([Tag::Tangential]);
                out.push_points(&facet, tags);
            }
            continue;
        }
        for piece in pieces {
            out.push_points(&piece, s.tags.iter().cloned());
        }
    }
    let mut set = out.weld(tol).with_declared_dim(x.dim() - 1);
    if set.is_empty() {
        set = SimplicialSet::empty(n).with_declared_dim(-1);
    }
    Ok(Sliced { set, tangential })
}

/// Clips a point list (a point, a segment, or a convex polygon) to the
/// closed half-space `sign·(x_axis − c) ≤ 0`.
fn clip_convex(poly: &[Point], axis: usize, c: f64, sign: f64, tol: f64) -> Vec<Point> {
    let s = |p: &Point| sign * (p[axis] - c);
    let inside = |p: &Point| s(p) <= tol;
    match poly.len() {
        0 => vec![],
        1 => {
            if inside(&poly[0]) {
                poly.to_vec()
            } else {
                vec![]
            }
        }
        2 => {
            let (a, b) = (&poly[0], &poly[1]);
            match (inside(a), inside(b)) {
                (true, true) => poly.to_vec(),
                (false, false) => vec![],
                (true, false) => vec![a.clone(), crossing(a, b, axis, c)],
                (false, true) => vec![crossing(a, b, axis, c), b.clone()],
            }
        }
        _ => {
            let mut out: Vec<Point> = Vec::with_capacity(poly.len() + 1);
            for i in 0..poly.len() {
                let cur = &poly[i];
                let nxt = &poly[(i + 1) % poly.len()];
                let (ci, ni) = (inside(cur), inside(nxt));
                if ci {
                    out.push(cur.clone());
                }
                if ci != ni && s(cur).abs() > tol && s(nxt).abs() > tol {
                    out.push(crossing(cur, nxt, axis, c));
                }
            }
            let mut dedup: Vec<Point> = Vec::with_capacity(out.len());
            for p in out {
                if dedup.last().map_or(true, |l| l.dist(&p) > tol) {
                    dedup.push(p);
                }
            }
            while dedup.len() > 1 && dedup[0].dist(dedup.last().unwrap()) <= tol {
                dedup.pop();
            }
            dedup
        }
    }
}

/// Clips a simplex (dimension ≤ 2) to an axis box given as `(axis, lo, hi)`
/// triples. Infinite bounds are ignored.
pub fn clip_simplex(pts: &[&Point], bounds: &[(usize, f64, f64)], tol: f64) -> Result<Vec<Vec<Point>>> {
    if pts.len() > 3 {
        return Err(Error::Unsupported(format!(
            "clipping a {}-simplex",
            pts.len() - 1
        )));
    }
    let mut poly: Vec<Point> = pts.iter().map(|p| (*p).clone()).collect();
    for &(axis, lo, hi) in bounds {
        if lo.is_finite() {
            poly = clip_convex(&poly, axis, lo, -1.0, tol);
        }
        if hi.is_finite() {
            poly = clip_convex(&poly, axis, hi, 1.0, tol);
        }
        if poly.is_empty() {
            break;
        }
    }
    if poly.len() == 2 && poly[0].dist(&poly[1]) <= tol {
        poly.pop();
    }
    Ok(polygon_pieces(poly))
}

/// Intersection of a set with a box `(axis, lo, hi)`, keeping tags.
pub fn clip_set(x: &SimplicialSet, bounds: &[(usize, f64, f64)], tol: f64) -> Result<SimplicialSet> {
    let mut out = SimplicialSet::empty(x.ambient_dim());
    for s in x.simplices() {
        let pts = x.points_of(s);
        let outside = bounds.iter().any(|&(axis, lo, hi)| {
            pts.iter().all(|p| p[axis] < lo - tol) || pts.iter().all(|p| p[axis] > hi + tol)
        });
        if outside {
            continue;
        }
        let inside = bounds.iter().all(|&(axis, lo, hi)| {
            pts.iter().all(|p| p[axis] >= lo - tol && p[axis] <= hi + tol)
        });
        if inside {
            let owned: Vec<Point> = pts.iter().map(|p| (*p).clone()).collect();
            out.push_points(&owned, s.tags.iter().cloned());
            continue;
        }
        for piece in clip_simplex(&pts, bounds, tol)? {
            out.push_points(&piece, s.tags.iter().cloned());
        }
    }
    Ok(out.weld(tol).with_declared_dim(x.dim()))
}

/// `X ∩ W`: slices by every fixed coordinate of `W`, then clips to the free
/// bounds. `tangential` counts top simplices lying in a fixed hyperplane.
pub fn intersect_slice(x: &SimplicialSet, w: &DSlice, tol: f64) -> Result<Sliced> {
    let mut cur = x.clone();
    let mut tangential = 0;
    for j in w.fixed_indices().collect::<Vec<_>>() {
        let c = w.fixed_value(j).unwrap();
        let sl = slice_set(&cur, j, c, tol)?;
        tangential += sl.tangential;
        cur = sl.set;
    }
    let bounds: Vec<(usize, f64, f64)> = w
        .free_indices()
        .map(|i| {
            let b = w.bounds(i).unwrap();
            (i, b.lo, b.hi)
        })
        .collect();
    let set = clip_set(&cur, &bounds, tol)?;
    Ok(Sliced { set, tangential })
}

/// Keeps the simplices of `x` that lie entirely in the closed slice `w`.
pub fn simplices_within(x: &SimplicialSet, w: &DSlice, tol: f64) -> SimplicialSet {
    x.filter(|s: &Simplex| {
        s.vertices
            .iter()
            .all(|&v| w.contains(&x.vertices()[v], tol))
    })
}
