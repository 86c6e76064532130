//! Families of parallel hyperplanes `{x = t + jL}` and the slab
//! decomposition of a slice.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clip::slice_set;
use crate::complex::SimplicialSet;
use crate::error::{Error, Result};
use crate::measure::measure_or_infinite;
use crate::point::{ClosedBall, Point};
use crate::slice::DSlice;

/// Folds `y` into the fundamental slab `t ≤ y_x < t + L` by subtracting
/// `L·⌊(y_x − t)/L⌋` along `e_x`.
pub fn pi_gamma(y: &Point, offset: f64, l: f64, direction: usize) -> Point {
    let mut out = y.clone();
    let k = ((y[direction] - offset) / l).floor();
    out[direction] -= l * k;
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlabDecomposition {
    pub direction: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub offset: f64,
    /// Interior walls, in increasing order.
    pub interior: Vec<f64>,
    /// `Σ_0 … Σ_{M+1}`; empty until [`consecutive_planes`] runs.
    pub planes: Vec<f64>,
    pub wall_measures: Vec<f64>,
    pub exceptional_wall_measures: Vec<f64>,
    pub wall_measure: f64,
    pub exceptional_wall_measure: f64,
    /// `2·L^{−1}·𝓗^{m−1}(A∩W)`.
    pub bound: f64,
    pub n_offsets: usize,
    /// The choice preserving rectifiability is automatic for simplicial sets.
    pub rectifiability: String,
}

impl SlabDecomposition {
    /// Number `M` of interior walls.
    pub fn m_walls(&self) -> usize {
        self.interior.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub direction: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub n_offsets: usize,
    /// Dimension of the spanning set; walls are measured in `m − 2`.
    pub m: usize,
    pub tol: f64,
}

/// Planes `t + jL` strictly inside the x-bounds of `W` whose cross-section
/// meets `int(B)`.
pub fn interior_planes(w: &DSlice, ball: &ClosedBall, direction: usize, offset: f64, l: f64, tol: f64) -> Vec<f64> {
    let iv = w.bounds(direction).expect("direction is free");
    let lo = iv.lo.max(ball.center[direction] - ball.radius);
    let hi = iv.hi.min(ball.center[direction] + ball.radius);
    let first = ((lo - offset) / l).floor() as i64;
    let last = ((hi - offset) / l).ceil() as i64;
    (first..=last)
        .map(|j| offset + j as f64 * l)
        .filter(|&s| w.cut_meets_interior(direction, s, ball, tol))
        .collect()
}

fn wall_measures(set: &SimplicialSet, planes: &[f64], direction: usize, dim: usize, tol: f64) -> Vec<f64> {
    planes
        .iter()
        .map(|&s| match slice_set(set, direction, s, tol) {
            Ok(sl) if sl.tangential > 0 => f64::INFINITY,
            Ok(sl) => measure_or_infinite(&sl.set, dim),
            Err(_) => f64::INFINITY,
        })
        .collect()
}

/// Searches offsets `t ∈ {0, L/n, 2L/n, …}` for the family minimizing the
/// total wall measure `Σ 𝓗^{m−2}(A_W ∩ Σ_j)`, then the exceptional wall
/// measure, then `t`. Fails with `AveragingFailed` if the minimum exceeds
/// `2·L^{−1}·𝓗^{m−1}(A_W)`.
pub fn choose_hyperplane_family(
    a_w: &SimplicialSet,
    s_w: &SimplicialSet,
    w: &DSlice,
    ball: &ClosedBall,
    params: FamilyParams,
) -> Result<SlabDecomposition> {
    let FamilyParams {
        direction,
        l,
        n_offsets,
        m,
        tol,
    } = params;
    if !(l > 0.0) {
        return Err(Error::Precondition(format!("L must be positive, got {l}")));
    }
    if m < 2 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            min: 2,
            max: w.ambient_dim() as i64,
        });
    }
    let width = w.direction_width(direction)?;
    if !(width > l) {
        return Err(Error::Precondition(format!(
            "width {width} in direction {direction} does not exceed L = {l}"
        )));
    }
    let n_offsets = n_offsets.max(1);
    let wall_dim = m - 2;
    // 𝓗^{m−3} of the exceptional walls; for m = 2 this is a point count
    let exc_dim = m.saturating_sub(3);
    let bound = 2.0 / l * measure_or_infinite(a_w, m - 1);

    let evaluate = |k: usize| {
        let t = l * k as f64 / n_offsets as f64;
        let planes = interior_planes(w, ball, direction, t, l, tol);
        let wm = wall_measures(a_w, &planes, direction, wall_dim, tol);
        let em = wall_measures(s_w, &planes, direction, exc_dim, tol);
        (k, t, planes, wm, em)
    };
    let candidates: Vec<_> = (0..n_offsets).into_par_iter().map(evaluate).collect();
    let best = candidates
        .into_iter()
        .map(|(k, t, planes, wm, em)| {
            let total: f64 = wm.iter().sum();
            let exc: f64 = em.iter().sum();
            (total, exc, k, t, planes, wm, em)
        })
        .min_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.cmp(&b.2))
        })
        .expect("at least one offset");
    let (total, exc, _, t, planes, wm, em) = best;
    let slack = 1e-12 * bound.max(1.0);
    if !(total <= bound + slack) {
        return Err(Error::AveragingFailed { best: total, bound });
    }
    Ok(SlabDecomposition {
        direction,
        l,
        offset: t,
        interior: planes,
        planes: Vec::new(),
        wall_measures: wm,
        exceptional_wall_measures: em,
        wall_measure: total,
        exceptional_wall_measure: exc,
        bound,
        n_offsets,
        rectifiability: "not_applicable".into(),
    })
}

/// Adds the outer planes `Σ_0` and `Σ_{M+1}` so that `W ∩ B` lies between
/// them. With no interior wall these are the grid planes bracketing the
/// deepest point of `W ∩ B`.
pub fn consecutive_planes(w: &DSlice, ball: &ClosedBall, mut family: SlabDecomposition) -> Result<SlabDecomposition> {
    let l = family.l;
    family.planes = if let (Some(first), Some(last)) = (family.interior.first(), family.interior.last()) {
        let mut p = Vec::with_capacity(family.interior.len() + 2);
        p.push(first - l);
        p.extend(family.interior.iter().copied());
        p.push(last + l);
        p
    } else {
        let (deep, _) = w
            .deepest_point(ball)
            .ok_or_else(|| Error::Precondition("slice does not meet the interior of the ball".into()))?;
        let x = deep[family.direction];
        let s0 = family.offset + ((x - family.offset) / l).floor() * l;
        vec![s0, s0 + l]
    };
    Ok(family)
}

/// The slabs `W_j`: `W` with the x-bounds replaced by
/// `[max(l_x, Σ_j), min(r_x, Σ_{j+1})]`.
pub fn slab_decompose(w: &DSlice, family: &SlabDecomposition) -> Result<Vec<DSlice>> {
    if family.planes.len() < 2 {
        return Err(Error::Precondition("planes not computed; run consecutive_planes".into()));
    }
    let x = family.direction;
    let iv = w.bounds(x).ok_or(Error::NotFreeDirection { index: x })?;
    family
        .planes
        .windows(2)
        .map(|pair| w.with_bounds(x, iv.lo.max(pair[0]), iv.hi.min(pair[1])))
        .collect()
}
