//! Inward cones `C(X, p)` and the cone measure bound.

use serde::{Deserialize, Serialize};

use crate::complex::{simplex_volume, Simplex, SimplicialSet, Tag};
use crate::distance::distance_to_set;
use crate::error::{Error, Result};
use crate::measure::measure_or_infinite;
use crate::point::{ClosedBall, Point};
use crate::slice::DSlice;
use crate::GEOM_TOL;

/// Relative volume below which a cone simplex counts as degenerate.
const CONE_DEGENERACY: f64 = 1e-12;

/// `C(X, p)`: `X`, the apex `p`, and the join of every maximal simplex of
/// `X` with `p`. Joins whose span contains `p` are tagged `degenerate`. The
/// cone over the empty set is `{p}`.
pub fn cone(x: &SimplicialSet, p: &Point) -> SimplicialSet {
    let mut out = x.clone();
    let apex = out.push_vertex(p.clone());
    out.push_simplex(Simplex::new([apex]));
    for i in x.maximal_simplices() {
        let s = &x.simplices()[i];
        let pts = x.points_of(s);
        // the join with a simplex having p as a vertex is the simplex itself
        if pts.iter().any(|q| q.dist(p) == 0.0) {
            continue;
        }
        let mut all = pts.clone();
        all.push(p);
        let scale = all
            .iter()
            .flat_map(|a| all.iter().map(move |b| a.dist(b)))
            .fold(0.0, f64::max);
        let vol = simplex_volume(&all);
        let mut t = Simplex::new(s.vertices.iter().copied().chain([apex]));
        t.tags = s.tags.clone();
        t.tags.remove(&Tag::Degenerate);
        if vol <= CONE_DEGENERACY * scale.powi(all.len() as i32 - 1) {
            t.tags.insert(Tag::Degenerate);
        }
        out.push_simplex(t);
    }
    out.with_declared_dim(x.dim() + 1)
}

/// Cone apex for a base-case node: the lexicographically smallest vertex of
/// `(A∩W) \ S`, or the deepest point of `W ∩ int(B)` when that set is empty.
pub fn pick_cone_point(a_w: &SimplicialSet, s: &SimplicialSet, w: &DSlice, ball: &ClosedBall) -> Result<Point> {
    let candidate = a_w
        .used_vertices()
        .into_iter()
        .filter(|v| s.is_empty() || distance_to_set(s, v) > GEOM_TOL)
        .min_by(|a, b| a.lex_cmp(b));
    if let Some(v) = candidate {
        return Ok(v.clone());
    }
    interior_point(w, ball)
}

/// Deepest point of `W ∩ int(B)`.
pub fn interior_point(w: &DSlice, ball: &ClosedBall) -> Result<Point> {
    w.deepest_point(ball)
        .map(|(p, _)| p)
        .ok_or_else(|| Error::Precondition("slice does not meet the interior of the ball".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeBound {
    pub m: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    /// `m = 1` is outside the bound's domain.
    pub skipped: bool,
}

/// Checks `𝓗^m(C(X,p)) ≤ 2^{2m−1}·r·𝓗^{m−1}(X)` for `X ⊂ N(p, r)`, where
/// `m = X.dim + 1`.
pub fn cone_bound_check(x: &SimplicialSet, p: &Point, r: f64, tol: f64) -> Result<ConeBound> {
    if let Some(v) = x.used_vertices().into_iter().find(|v| v.dist(p) > r + GEOM_TOL) {
        return Err(Error::Precondition(format!(
            "vertex {v:?} lies outside N(p, {r})"
        )));
    }
    let m = (x.dim() + 1).max(0) as usize;
    if m < 2 {
        return Ok(ConeBound {
            m,
            lhs: 0.0,
            rhs: 0.0,
            pass: true,
            skipped: true,
        });
    }
    let lhs = measure_or_infinite(&cone(x, p), m);
    let rhs = 2f64.powi(2 * m as i32 - 1) * r * measure_or_infinite(x, m - 1);
    Ok(ConeBound {
        m,
        lhs,
        rhs,
        pass: lhs <= rhs + tol,
        skipped: false,
    })
}
