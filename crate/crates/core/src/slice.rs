//! Axis-aligned d-slices of a ball.
//!
//! A d-slice fixes `n - d` coordinates and bounds the remaining `d` free
//! coordinates by (possibly infinite) closed intervals. Infinite bounds are
//! stored as `±inf` and serialized as `null`; they are clipped to the ball's
//! bounding box only where a finite extent is needed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{ClosedBall, Point};

/// Closed interval `[lo, hi]` with `lo < hi`; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "lower_bound")]
    pub lo: f64,
    #[serde(with = "upper_bound")]
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn unbounded() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    pub fn contains_strictly(&self, x: f64, tol: f64) -> bool {
        x > self.lo + tol && x < self.hi - tol
    }
}

mod lower_bound {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

mod upper_bound {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// An axis-aligned d-dimensional rectangle in R^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DSlice {
    n: usize,
    free: BTreeMap<usize, Interval>,
    fixed: BTreeMap<usize, f64>,
}

impl DSlice {
    pub fn new(
        n: usize,
        free: impl IntoIterator<Item = (usize, Interval)>,
        fixed: impl IntoIterator<Item = (usize, f64)>,
    ) -> Result<Self> {
        let slice = DSlice {
            n,
            free: free.into_iter().collect(),
            fixed: fixed.into_iter().collect(),
        };
        slice.validate()?;
        Ok(slice)
    }

    /// The whole of R^n as an n-slice.
    pub fn full(n: usize) -> Self {
        DSlice {
            n,
            free: (0..n).map(|i| (i, Interval::unbounded())).collect(),
            fixed: BTreeMap::new(),
        }
    }

    /// The n-slice `[lo_1, hi_1] × … × [lo_n, hi_n]`.
    pub fn rectangle(bounds: &[(f64, f64)]) -> Result<Self> {
        DSlice::new(
            bounds.len(),
            bounds
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| (i, Interval::new(lo, hi))),
            [],
        )
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            let f = self.free.contains_key(&i);
            let x = self.fixed.contains_key(&i);
            if f == x {
                return Err(Error::InvalidGeometry(format!(
                    "coordinate {i} must be exactly one of free/fixed"
                )));
            }
        }
        if self.free.len() + self.fixed.len() != self.n {
            return Err(Error::InvalidGeometry(
                "slice indices exceed ambient dimension".into(),
            ));
        }
        for (i, b) in &self.free {
            if !(b.lo < b.hi) || b.lo.is_nan() || b.hi.is_nan() {
                return Err(Error::InvalidGeometry(format!(
                    "bounds of coordinate {i} must satisfy l < r, got [{}, {}]",
                    b.lo, b.hi
                )));
            }
        }
        for (j, c) in &self.fixed {
            if !c.is_finite() {
                return Err(Error::InvalidGeometry(format!(
                    "fixed coordinate {j} is not finite"
                )));
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Dimension `d = |I|`.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn free_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.free.keys().copied()
    }

    pub fn fixed_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.fixed.keys().copied()
    }

    pub fn bounds(&self, i: usize) -> Option<Interval> {
        self.free.get(&i).copied()
    }

    pub fn fixed_value(&self, j: usize) -> Option<f64> {
        self.fixed.get(&j).copied()
    }

    pub fn is_free(&self, i: usize) -> bool {
        self.free.contains_key(&i)
    }

    /// Width `r_i - l_i` in the direction of `e_i`.
    pub fn direction_width(&self, i: usize) -> Result<f64> {
        self.free
            .get(&i)
            .map(Interval::width)
            .ok_or(Error::NotFreeDirection { index: i })
    }

    /// `inf over k-subsets of sup of widths`: the k-th smallest width.
    pub fn k_width(&self, k: usize) -> Result<f64> {
        let d = self.dim();
        if k > d {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as i64,
                min: 0,
                max: d as i64,
            });
        }
        if k == 0 {
            return Ok(0.0);
        }
        let mut widths: Vec<f64> = self.free.values().map(Interval::width).collect();
        widths.sort_by(f64::total_cmp);
        Ok(widths[k - 1])
    }

    /// Replaces infinite (and oversized) bounds by the ball's bounding box.
    pub fn clipped_to(&self, ball: &ClosedBall) -> DSlice {
        let mut out = self.clone();
        for (i, b) in out.free.iter_mut() {
            let c = ball.center[*i];
            b.lo = b.lo.max(c - ball.radius);
            b.hi = b.hi.min(c + ball.radius);
        }
        out
    }

    /// Same slice with the bounds of free coordinate `i` replaced.
    pub fn with_bounds(&self, i: usize, lo: f64, hi: f64) -> Result<DSlice> {
        if !self.is_free(i) {
            return Err(Error::NotFreeDirection { index: i });
        }
        let mut out = self.clone();
        out.free.insert(i, Interval::new(lo, hi));
        out.validate()?;
        Ok(out)
    }

    /// The (d-1)-slice obtained by fixing free coordinate `i` at `value`.
    pub fn fix(&self, i: usize, value: f64) -> Result<DSlice> {
        if !self.is_free(i) {
            return Err(Error::NotFreeDirection { index: i });
        }
        let mut out = self.clone();
        out.free.remove(&i);
        out.fixed.insert(i, value);
        Ok(out)
    }

    /// `W(eps) = W + Q_eps`: the n-slice fattening every fixed coordinate.
    pub fn fatten(&self, eps: f64) -> DSlice {
        let mut out = self.clone();
        for (j, c) in std::mem::take(&mut out.fixed) {
            out.free.insert(j, Interval::new(c - eps, c + eps));
        }
        out
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.fixed.iter().all(|(j, c)| (p[*j] - c).abs() <= tol)
            && self.free.iter().all(|(i, b)| b.contains(p[*i], tol))
    }

    /// Membership in the relative interior (free coordinates strictly inside).
    pub fn contains_relint(&self, p: &Point, tol: f64) -> bool {
        self.fixed.iter().all(|(j, c)| (p[*j] - c).abs() <= tol)
            && self.free.iter().all(|(i, b)| b.contains_strictly(p[*i], tol))
    }

    /// Projects a point onto the affine hull (overwrites fixed coordinates).
    pub fn project_to_hull(&self, p: &Point) -> Point {
        let mut q = p.clone();
        for (j, c) in &self.fixed {
            q[*j] = *c;
        }
        q
    }

    /// Nearest point of the (closed) slice to `p`.
    pub fn clamp(&self, p: &Point) -> Point {
        let mut q = self.project_to_hull(p);
        for (i, b) in &self.free {
            q[*i] = q[*i].clamp(b.lo, b.hi);
        }
        q
    }

    /// The ball `B ∩ aff(W)` as (center, radius) within the affine hull.
    pub fn ball_section(&self, ball: &ClosedBall) -> Option<(Point, f64)> {
        let center = self.project_to_hull(&ball.center);
        let off = center.dist_sq(&ball.center);
        let r2 = ball.radius * ball.radius - off;
        (r2 > 0.0).then(|| (center, r2.sqrt()))
    }

    /// Chebyshev-style deepest point of `W ∩ B`: maximizes the smaller of
    /// the clearance to the box faces and to the sphere. Returns the point
    /// and its clearance, or `None` if `W ∩ int(B)` is empty.
    pub fn deepest_point(&self, ball: &ClosedBall) -> Option<(Point, f64)> {
        let (center, rho) = self.ball_section(ball)?;
        let shrunk_clamp = |t: f64| -> Option<Point> {
            let mut q = center.clone();
            for (i, b) in &self.free {
                let (lo, hi) = (b.lo + t, b.hi - t);
                if lo > hi {
                    return None;
                }
                q[*i] = q[*i].clamp(lo, hi);
            }
            Some(q)
        };
        let feasible = |t: f64| match shrunk_clamp(t) {
            Some(q) => q.dist(&center) <= rho - t,
            None => false,
        };
        if !feasible(0.0) {
            return None;
        }
        let (mut lo, mut hi) = (0.0, rho);
        if feasible(hi) {
            lo = hi;
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-15 * rho.max(1.0) {
                    break;
                }
            }
        }
        if lo <= 0.0 {
            return None;
        }
        shrunk_clamp(lo).map(|q| (q, lo))
    }

    /// Whether `W ∩ int(B)` is nonempty.
    pub fn meets_interior(&self, ball: &ClosedBall) -> bool {
        self.deepest_point(ball).is_some()
    }

    /// Whether the cross-section `W ∩ {x_i = s}` meets `int(B)` and `s` lies
    /// strictly inside the bounds of `i`.
    pub fn cut_meets_interior(&self, i: usize, s: f64, ball: &ClosedBall, tol: f64) -> bool {
        let Some(b) = self.bounds(i) else {
            return false;
        };
        if !b.contains_strictly(s, tol) {
            return false;
        }
        let Ok(cut) = self.fix(i, s) else {
            return false;
        };
        let Some((center, rho)) = cut.ball_section(ball) else {
            return false;
        };
        cut.clamp(&center).dist(&center) < rho - tol
    }

    /// Membership test for `∂(W∩B)`: the boundary of `W ∩ B` inside the
    /// affine hull of `W`.
    pub fn on_boundary(&self, p: &Point, ball: &ClosedBall, tol: f64) -> bool {
        if !self.contains(p, tol) || !ball.contains(p, tol) {
            return false;
        }
        let on_face = self
            .free
            .iter()
            .any(|(i, b)| (p[*i] - b.lo).abs() <= tol || (p[*i] - b.hi).abs() <= tol);
        on_face || ball.on_boundary(p, tol)
    }
}

/// Membership test for `∂(W ∩ B)`.
pub fn boundary_of_slice(w: &DSlice, ball: &ClosedBall, p: &Point, tol: f64) -> bool {
    w.on_boundary(p, ball, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slab() -> DSlice {
        DSlice::rectangle(&[(0.0, 3.0), (0.0, 1.0)]).unwrap()
    }

    #[test]
    fn widths() {
        let w = slab();
        assert_eq!(w.direction_width(0).unwrap(), 3.0);
        let half = DSlice::new(2, [(0, Interval::new(0.0, 3.0)), (1, Interval::unbounded())], [])
            .unwrap();
        assert_eq!(half.direction_width(1).unwrap(), f64::INFINITY);
        let line = w.fix(1, 0.5).unwrap();
        assert_eq!(
            line.direction_width(1),
            Err(Error::NotFreeDirection { index: 1 })
        );
    }

    #[test]
    fn k_width_examples() {
        let w = DSlice::rectangle(&[(0.0, 3.0), (0.0, 1.0), (0.0, 5.0)]).unwrap();
        // enumerate 2-subsets: {3,1}->3, {3,5}->5, {1,5}->5; inf = 3
        let subsets = [(0usize, 1usize), (0, 2), (1, 2)];
        let brute = subsets
            .iter()
            .map(|&(a, b)| {
                w.direction_width(a)
                    .unwrap()
                    .max(w.direction_width(b).unwrap())
            })
            .fold(f64::INFINITY, f64::min);
        assert_eq!(w.k_width(2).unwrap(), brute);
        assert_eq!(brute, 3.0);
        assert_eq!(w.k_width(0).unwrap(), 0.0);
        assert!(w.k_width(4).is_err());
        let strip =
            DSlice::new(2, [(0, Interval::new(0.0, 1.0)), (1, Interval::unbounded())], []).unwrap();
        assert_eq!(strip.k_width(2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn validation() {
        assert!(DSlice::rectangle(&[(1.0, 1.0)]).is_err());
        assert!(DSlice::new(2, [(0, Interval::new(0.0, 1.0))], []).is_err());
    }

    #[test]
    fn deepest_point_of_disk() {
        let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
        let (p, depth) = DSlice::full(2).deepest_point(&ball).unwrap();
        assert!(p.norm() < 1e-12);
        assert!((depth - 1.0).abs() < 1e-12);
        // a slab [0.5, 2] x R: deepest point balances face and sphere
        let w = DSlice::rectangle(&[(0.5, 2.0), (-5.0, 5.0)]).unwrap();
        let (p, depth) = w.deepest_point(&ball).unwrap();
        assert!((p[0] - 0.5 - depth).abs() < 1e-9);
        assert!((1.0 - p.norm() - depth).abs() < 1e-9);
        // tangent slab has no interior
        let t = DSlice::rectangle(&[(1.0, 2.0), (-5.0, 5.0)]).unwrap();
        assert!(t.deepest_point(&ball).is_none());
    }

    #[test]
    fn boundary_membership() {
        let ball = ClosedBall::new([0.5, 0.5], 2.0).unwrap();
        let w = DSlice::rectangle(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(w.on_boundary(&Point::from([0.0, 0.5]), &ball, 1e-9));
        assert!(!w.on_boundary(&Point::from([0.5, 0.5]), &ball, 1e-9));
        // 1-slice y = 0.3 through the unit disk: endpoint on the circle
        let disk = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
        let seg = DSlice::full(2).fix(1, 0.3).unwrap();
        let x = (1.0f64 - 0.09).sqrt();
        assert!(seg.on_boundary(&Point::from([x, 0.3]), &disk, 1e-9));
        assert!(!seg.on_boundary(&Point::from([0.0, 0.3]), &disk, 1e-9));
    }

    #[test]
    fn infinite_bounds_serialize_as_null() {
        let w = DSlice::full(1);
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.contains("null"));
        let back: DSlice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }
}
