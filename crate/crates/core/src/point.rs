//! Points in R^n and closed balls.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A point of R^n. Coordinates live inline for n ≤ 4.
#[derive(Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Point {
    coords: SmallVec<[f64; 4]>,
}

impl Point {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Self {
        Point {
            coords: coords.into_iter().collect(),
        }
    }

    /// Like [`Point::new`] but rejects non-finite coordinates.
    pub fn try_new(coords: impl IntoIterator<Item = f64>) -> Result<Self> {
        let p = Point::new(coords);
        if p.coords.iter().all(|c| c.is_finite()) {
            Ok(p)
        } else {
            Err(Error::InvalidGeometry(format!("non-finite coordinate in {p:?}")))
        }
    }

    pub fn origin(n: usize) -> Self {
        Point {
            coords: SmallVec::from_elem(0.0, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b))
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b))
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::new(self.coords.iter().map(|a| a * s))
    }

    /// `self + s * dir`
    pub fn axpy(&self, s: f64, dir: &Point) -> Point {
        Point::new(self.coords.iter().zip(&dir.coords).map(|(a, b)| a + s * b))
    }

    /// Point on the segment from `self` to `other` at parameter `t`.
    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + t * (b - a)),
        )
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn centroid<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Point> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut acc = first.clone();
        let mut count = 1.0;
        for p in iter {
            for (a, b) in acc.coords.iter_mut().zip(&p.coords) {
                *a += b;
            }
            count += 1.0;
        }
        Some(acc.scale(1.0 / count))
    }

    /// Lexicographic order on coordinates (total, via `f64::total_cmp`).
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl std::ops::IndexMut<usize> for Point {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.coords[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point::new(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point::new(v)
    }
}

/// Closed Euclidean ball `N(center, radius)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedBall {
    pub center: Point,
    pub radius: f64,
}

impl ClosedBall {
    pub fn new(center: impl Into<Point>, radius: f64) -> Result<Self> {
        let center = center.into();
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::InvalidGeometry("ball center not finite".into()));
        }
        Ok(ClosedBall { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        p.dist(&self.center) <= self.radius + tol
    }

    pub fn contains_interior(&self, p: &Point, tol: f64) -> bool {
        p.dist(&self.center) < self.radius - tol
    }

    pub fn on_boundary(&self, p: &Point, tol: f64) -> bool {
        (p.dist(&self.center) - self.radius).abs() <= tol
    }
}
