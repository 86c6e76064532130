//! Hausdorff measure normalized by `1/2^d`, slice restriction, and the
//! coarea-type inequality checker.

use std::collections::HashSet;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clip::{clip_set, slice_set};
use crate::complex::{SimplicialSet, Tag};
use crate::error::{Error, Result};
use crate::GEOM_TOL;

/// Volume of the unit d-ball: `α_0 = 1`, `α_1 = 2`, `α_d = α_{d-2}·2π/d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Simplicial,
    Covering,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub dimension: usize,
    pub value: f64,
    pub method: Method,
    /// Grid size for the covering estimator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
}

/// Number of distinct used vertices (up to `GEOM_TOL`).
fn count_points(x: &SimplicialSet) -> usize {
    x.filter(|_| true).weld(GEOM_TOL).used_vertices().len()
}

/// `𝓗^d` of a simplicial set, allowing any declared dimension: simplices of
/// dimension below `d` contribute zero, non-degenerate simplices above `d`
/// make the measure infinite.
pub fn measure_or_infinite(x: &SimplicialSet, d: usize) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    if x
        .simplices()
        .iter()
        .any(|s| s.dim() > d && !s.has(&Tag::Degenerate) && x.volume_of(s) > 0.0)
    {
        return f64::INFINITY;
    }
    if d == 0 {
        return count_points(x) as f64;
    }
    let top: Vec<usize> = x
        .maximal_simplices()
        .into_iter()
        .filter(|&i| {
            let s = &x.simplices()[i];
            s.dim() == d && !s.has(&Tag::Degenerate)
        })
        .collect();
    // collect before summing so the result does not depend on the thread split
    let volumes: Vec<f64> = top
        .par_iter()
        .map(|&i| x.volume_of(&x.simplices()[i]))
        .collect();
    volumes.iter().fold(0.0, |acc, v| acc + v) / unit_ball_volume(d)
}

/// `𝓗^d(X)` as (sum of top simplex volumes) / α_d; counting measure for
/// `d = 0`. A set of lower dimension has measure zero.
pub fn measure_simplicial(x: &SimplicialSet, d: usize) -> Result<MeasureReport> {
    if x.dim() > d as i32 {
        return Err(Error::DimensionMismatch {
            expected: d as i64,
            found: x.dim() as i64,
        });
    }
    Ok(MeasureReport {
        dimension: d,
        value: measure_or_infinite(x, d),
        method: Method::Simplicial,
        resolution: None,
    })
}

/// Upper estimator: Σ (diam/2)^d over the pieces of `X` inside the occupied
/// cubes of a grid of side `grid_r`.
pub fn measure_covering(x: &SimplicialSet, d: usize, grid_r: f64) -> Result<MeasureReport> {
    if !(grid_r > 0.0) {
        return Err(Error::Precondition(format!("grid size must be positive, got {grid_r}")));
    }
    let report = |value| MeasureReport {
        dimension: d,
        value,
        method: Method::Covering,
        resolution: Some(grid_r),
    };
    if x.is_empty() {
        return Ok(report(0.0));
    }
    let n = x.ambient_dim();
    let cell_of = |c: &[f64]| -> Vec<i64> { c.iter().map(|v| (v / grid_r).floor() as i64).collect() };
    // candidate cells: those met by each simplex's bounding box
    let mut cells: HashSet<Vec<i64>> = HashSet::new();
    for s in x.simplices() {
        let pts = x.points_of(s);
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for p in &pts {
            for i in 0..n {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let (clo, chi) = (cell_of(&lo), cell_of(&hi));
        let mut idx = clo.clone();
        loop {
            cells.insert(idx.clone());
            let mut i = 0;
            while i < n {
                idx[i] += 1;
                if idx[i] <= chi[i] {
                    break;
                }
                idx[i] = clo[i];
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    let mut cells: Vec<Vec<i64>> = cells.into_iter().collect();
    cells.sort();
    let pieces: Vec<f64> = cells
        .par_iter()
        .map(|cell| {
            let bounds: Vec<(usize, f64, f64)> = cell
                .iter()
                .enumerate()
                .map(|(i, &c)| (i, c as f64 * grid_r, (c + 1) as f64 * grid_r))
                .collect();
            let piece = clip_set(x, &bounds, 1e-14).unwrap_or_else(|_| SimplicialSet::empty(n));
            let pts = piece.used_vertices();
            if pts.is_empty() {
                return 0.0;
            }
            let mut diam: f64 = 0.0;
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    diam = diam.max(pts[a].dist(pts[b]));
                }
            }
            if d == 0 {
                1.0
            } else {
                (diam / 2.0).powi(d as i32)
            }
        })
        .collect();
    let total = pieces.iter().fold(0.0, |acc, v| acc + v);
    Ok(report(total))
}

/// Axis-aligned hyperplane `{x_axis = offset}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub axis: usize,
    pub offset: f64,
}

/// `X ∩ H` as a set of dimension `X.dim − 1`. Top simplices lying inside
/// `H` contribute their facets, tagged `tangential`, with a warning.
pub fn slice_restriction(x: &SimplicialSet, h: Hyperplane) -> Result<SimplicialSet> {
    if x.dim() < 1 {
        return Err(Error::OutOfRange {
            what: "slice dimension",
            value: x.dim() as i64,
            min: 1,
            max: x.ambient_dim() as i64,
        });
    }
    let sliced = slice_set(x, h.axis, h.offset, GEOM_TOL)?;
    if sliced.tangential > 0 {
        log::warn!(
            "{} simplices lie inside the hyperplane x_{} = {}; using their facets",
            sliced.tangential,
            h.axis,
            h.offset
        );
    }
    Ok(sliced.set)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EilenbergCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Midpoint-rule check of `∫_0^∞ 𝓗^{m−1}(X_h) d𝓗¹(h) ≤ 𝓗^m(X)`, where `X_h`
/// are the points of `X` at distance `h` from `H₀` (both sides). The factor
/// `1/2` converts Lebesgue `dh` to the normalized `𝓗¹`.
pub fn eilenberg_check(x: &SimplicialSet, h0: Hyperplane, n_samples: usize, tol: f64) -> Result<EilenbergCheck> {
    if x.is_empty() {
        return Ok(EilenbergCheck {
            lhs: 0.0,
            rhs: 0.0,
            pass: true,
        });
    }
    let m = x.dim();
    if m < 1 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            min: 1,
            max: x.ambient_dim() as i64,
        });
    }
    let m = m as usize;
    let rhs = measure_simplicial(x, m)?.value;
    let hmax = x
        .used_vertices()
        .iter()
        .map(|p| (p[h0.axis] - h0.offset).abs())
        .fold(0.0, f64::max);
    let n_samples = n_samples.max(1);
    let dh = hmax / n_samples as f64;
    let integral: f64 = if hmax == 0.0 {
        0.0
    } else {
        (0..n_samples)
            .into_par_iter()
            .map(|k| {
                let h = (k as f64 + 0.5) * dh;
                [h0.offset + h, h0.offset - h]
                    .iter()
                    .map(|&c| {
                        slice_set(x, h0.axis, c, 1e-14)
                            .map(|s| measure_or_infinite(&s.set, m - 1))
                            .unwrap_or(0.0)
                    })
                    .sum::<f64>()
            })
            .collect::<Vec<f64>>()
            .iter()
            .fold(0.0, |acc, v| acc + v)
            * dh
    };
    let lhs = 0.5 * integral;
    Ok(EilenbergCheck {
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn unit_ball_volumes() {
        assert_eq!(unit_ball_volume(0), 1.0);
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn segment_and_points() {
        let seg = shapes::segment(&[0.0, 0.0], &[1.0, 0.0]);
        assert!((measure_simplicial(&seg, 1).unwrap().value - 0.5).abs() < 1e-15);
        let pts = shapes::points(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(measure_simplicial(&pts, 0).unwrap().value, 3.0);
        assert!(measure_simplicial(&seg, 0).is_err());
    }

    #[test]
    fn square_slice() {
        let sq = shapes::square(&[0.0, 0.0], 1.0);
        let s = slice_restriction(&sq, Hyperplane { axis: 0, offset: 0.5 }).unwrap();
        assert!((measure_simplicial(&s, 1).unwrap().value - 0.5).abs() < 1e-12);
        let far = slice_restriction(&sq, Hyperplane { axis: 0, offset: 3.0 }).unwrap();
        assert!(far.is_empty());
    }

    #[test]
    fn square_eilenberg() {
        let sq = shapes::square(&[0.0, 0.0], 1.0);
        let e = eilenberg_check(&sq, Hyperplane { axis: 0, offset: 0.0 }, 512, 0.02).unwrap();
        assert!((e.lhs - 0.25).abs() < 1e-9, "{}", e.lhs);
        assert!((e.rhs - 1.0 / PI).abs() < 1e-15);
        assert!(e.pass);
    }

    #[test]
    fn covering_segment() {
        let seg = shapes::segment(&[0.0, 0.0], &[1.0, 0.0]);
        let c = measure_covering(&seg, 1, 1e-3).unwrap();
        assert!((c.value - 0.5).abs() < 0.025, "{}", c.value);
    }
}
