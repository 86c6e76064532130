//! Projections onto convex hulls, neighborhoods, and Hausdorff distance.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::complex::SimplicialSet;
use crate::error::{Error, Result};
use crate::point::Point;

/// Nearest point of a convex hull together with its convex weights.
#[derive(Clone, Debug)]
pub struct Projection {
    pub point: Point,
    pub dist: f64,
    /// `(index, weight)` pairs with positive weight.
    pub weights: Vec<(usize, f64)>,
}

/// Minimizes `|Σ w_i v_i|` over convex weights restricted to `active`
/// without the sign constraint (affine minimization).
fn affine_min(vs: &[Point], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] = vs[active[a]].dot(&vs[active[b]]);
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|x| x.is_finite()))
        .or_else(|| m.svd(true, true).solve(&rhs, 1e-14).ok())?;
    Some(sol.iter().take(k).copied().collect())
}

/// Wolfe's minimum-norm-point algorithm on `conv(points) - q`.
pub fn project_onto_hull(points: &[Point], q: &Point) -> Result<Projection> {
    if points.is_empty() {
        return Err(Error::EmptyInput("convex hull of no points"));
    }
    if points.len() == 1 {
        return Ok(Projection {
            point: points[0].clone(),
            dist: points[0].dist(q),
            weights: vec![(0, 1.0)],
        });
    }
    let vs: Vec<Point> = points.iter().map(|p| p.sub(q)).collect();
    let scale = vs.iter().map(Point::norm_sq).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-12 * scale;

    let start = (0..vs.len())
        .min_by(|&a, &b| vs[a].norm_sq().total_cmp(&vs[b].norm_sq()))
        .unwrap();
    let mut active = vec![start];
    let mut lambda = vec![1.0];
    let mut x = vs[start].clone();

    for _major in 0..(50 * vs.len() + 100) {
        let (j, xpj) = (0..vs.len())
            .map(|i| (i, x.dot(&vs[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if x.norm_sq() - xpj <= eps || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);
        loop {
            let Some(mu) = affine_min(&vs, &active) else {
                break;
            };
            if mu.iter().all(|&m| m > 1e-14) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0_f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= 1e-14 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l += theta * (m - *l);
            }
            let mut keep_a = Vec::with_capacity(active.len());
            let mut keep_l = Vec::with_capacity(active.len());
            for (a, l) in active.iter().zip(&lambda) {
                if *l > 1e-14 {
                    keep_a.push(*a);
                    keep_l.push(*l);
                }
            }
            if keep_a.is_empty() {
                // numerical collapse: fall back to the best single vertex
                keep_a.push(active[0]);
                keep_l.push(1.0);
            }
            let total: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= total);
            active = keep_a;
            lambda = keep_l;
            if active.len() == 1 {
                break;
            }
        }
        let mut next = Point::origin(q.dim());
        for (a, l) in active.iter().zip(&lambda) {
            next = next.axpy(*l, &vs[*a]);
        }
        x = next;
    }
    Ok(Projection {
        dist: x.norm(),
        point: x.add(q),
        weights: active.into_iter().zip(lambda).collect(),
    })
}

/// `dist(q, Conv(points))`.
pub fn hull_distance(points: &[Point], q: &Point) -> Result<f64> {
    project_onto_hull(points, q).map(|p| p.dist)
}

/// Whether `dist(q, Conv(points)) ≤ tol`.
pub fn convex_hull_contains(points: &[Point], q: &Point, tol: f64) -> Result<bool> {
    Ok(hull_distance(points, q)? <= tol + 1e-15)
}

/// Distance from `q` to the segment `[a, b]`.
pub fn point_segment_distance(q: &Point, a: &Point, b: &Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.norm_sq();
    if len2 == 0.0 {
        return q.dist(a);
    }
    let t = (q.sub(a).dot(&ab) / len2).clamp(0.0, 1.0);
    q.dist(&a.axpy(t, &ab))
}

/// Distance from `q` to the simplex with the given vertices.
pub fn point_simplex_distance(q: &Point, verts: &[&Point]) -> f64 {
    match verts.len() {
        0 => f64::INFINITY,
        1 => q.dist(verts[0]),
        2 => point_segment_distance(q, verts[0], verts[1]),
        _ => {
            let pts: Vec<Point> = verts.iter().map(|p| (*p).clone()).collect();
            hull_distance(&pts, q).unwrap_or(f64::INFINITY)
        }
    }
}

/// `dist(q, X)` for a simplicial set; `+inf` when `X` has no simplices.
pub fn distance_to_set(x: &SimplicialSet, q: &Point) -> f64 {
    x.simplices()
        .iter()
        .map(|s| point_simplex_distance(q, &x.points_of(s)))
        .fold(f64::INFINITY, f64::min)
}

/// Membership in the closed neighborhood `N(X, r)`.
pub fn neighborhood_contains(x: &SimplicialSet, q: &Point, r: f64) -> bool {
    distance_to_set(x, q) <= r + 1e-15
}

fn directed(xs: &[Point], ys: &[Point]) -> f64 {
    xs.par_iter()
        .map(|x| ys.iter().map(|y| x.dist_sq(y)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max)
        .sqrt()
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(xs: &[Point], ys: &[Point]) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptyInput("hausdorff distance of an empty set"));
    }
    Ok(directed(xs, ys).max(directed(ys, xs)))
}

/// One-sided distance `sup_{x∈xs} dist(x, ys)`.
pub fn directed_hausdorff(xs: &[Point], ys: &[Point]) -> Result<f64> {
    if ys.is_empty() {
        return Err(Error::EmptyInput("directed distance to an empty set"));
    }
    if xs.is_empty() {
        return Ok(0.0);
    }
    Ok(directed(xs, ys))
}

/// A finite-precision limit point of a doubly indexed family.
#[derive(Clone, Debug)]
pub struct LimitPoint {
    pub set: Vec<Point>,
    /// `(i, j)` pairs along which the family approaches `set`.
    pub path: Vec<(usize, usize)>,
    /// Hausdorff distance from each path entry to `set`.
    pub gaps: Vec<f64>,
}

/// Diagonal argument on a grid `Z[i][j] = f_j(Z_i)`.
///
/// Rows converge for each column to `C_j` (approximated by the last row),
/// and the columns converge to `W'` (approximated by the last `C_j`). The
/// path takes, for every column, the first row within `tol/2` of `C_j`.
pub fn diagonal_limit_point(grid: &[Vec<Vec<Point>>], tol: f64) -> Result<LimitPoint> {
    let rows = grid.len();
    if rows < 2 {
        return Err(Error::EmptyInput("grid needs at least two rows"));
    }
    let cols = grid[0].len();
    if cols < 2 || grid.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidGeometry("grid must be rectangular with ≥ 2 columns".into()));
    }
    let half = 0.5 * tol;
    let limits: Vec<&Vec<Point>> = (0..cols).map(|j| &grid[rows - 1][j]).collect();
    for j in 0..cols {
        let gap = hausdorff_distance(&grid[rows - 2][j], limits[j])?;
        if gap > half {
            return Err(Error::NoLimitFound { gap });
        }
    }
    let tail = hausdorff_distance(limits[cols - 2], limits[cols - 1])?;
    if tail > half {
        return Err(Error::NoLimitFound { gap: tail });
    }
    let w = limits[cols - 1].clone();
    let mut path = Vec::with_capacity(cols);
    let mut gaps = Vec::with_capacity(cols);
    let mut i_prev = 0;
    for j in 0..cols {
        let mut chosen = rows - 1;
        for i in i_prev..rows {
            if hausdorff_distance(&grid[i][j], limits[j])? <= half {
                chosen = i;
                break;
            }
        }
        i_prev = chosen;
        path.push((chosen, j));
        gaps.push(hausdorff_distance(&grid[chosen][j], &w)?);
    }
    Ok(LimitPoint {
        set: w,
        path,
        gaps,
    })
}
