//! Tagged simplicial sets embedded in R^n.
//!
//! A [`SimplicialSet`] is a list of vertices and a list of simplices (vertex
//! index tuples) of mixed dimension up to `dim`. `dim = -1` encodes the empty
//! set. Simplices carry tags that record where they came from.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::point::Point;

/// Default threshold below which a top simplex is considered degenerate.
pub const DEGENERACY_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    /// Part of an exceptional set (S, S̃, T_j).
    Exceptional,
    /// Zero-volume simplex kept for combinatorial validity.
    Degenerate,
    /// Simplex lying inside a slicing hyperplane.
    Tangential,
    /// Produced on interior wall `j` of a slab decomposition.
    OriginWall(usize),
    /// Produced inside slab `j` of a slab decomposition.
    OriginSlab(usize),
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Exceptional => f.write_str("exceptional"),
            Tag::Degenerate => f.write_str("degenerate"),
            Tag::Tangential => f.write_str("tangential"),
            Tag::OriginWall(j) => write!(f, "origin-wall-{j}"),
            Tag::OriginSlab(j) => write!(f, "origin-slab-{j}"),
        }
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let idx = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad tag index in {s:?}")))
        };
        match s {
            "exceptional" => Ok(Tag::Exceptional),
            "degenerate" => Ok(Tag::Degenerate),
            "tangential" => Ok(Tag::Tangential),
            _ => {
                if let Some(rest) = s.strip_prefix("origin-wall-") {
                    Ok(Tag::OriginWall(idx(rest)?))
                } else if let Some(rest) = s.strip_prefix("origin-slab-") {
                    Ok(Tag::OriginSlab(idx(rest)?))
                } else {
                    Err(Error::Parse(format!("unknown tag {s:?}")))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    pub vertices: SmallVec<[usize; 4]>,
    pub tags: BTreeSet<Tag>,
}

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        Simplex {
            vertices: vertices.into_iter().collect(),
            tags: BTreeSet::new(),
        }
    }

    pub fn tagged(mut self, tag: Tag) -> Self {
        self.tags.insert(tag);
        self
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn has(&self, tag: &Tag) -> bool {
        self.tags.contains(tag)
    }

    fn key(&self) -> SmallVec<[usize; 4]> {
        let mut k = self.vertices.clone();
        k.sort_unstable();
        k
    }
}

/// d-volume of the simplex spanned by `points`: `|det R| / d!` from a
/// Householder QR of the edge vectors. The Gram determinant would square the
/// conditioning and lose slivers.
pub fn simplex_volume(points: &[&Point]) -> f64 {
    let k = points.len().saturating_sub(1);
    match k {
        0 => 1.0,
        1 => points[0].dist(points[1]),
        _ => {
            let n = points[0].dim();
            if n < k {
                return 0.0;
            }
            let edges = DMatrix::from_fn(n, k, |i, j| points[j + 1][i] - points[0][i]);
            let r = edges.qr().unpack_r();
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            (0..k).map(|i| r[(i, i)].abs()).product::<f64>() / fact
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialSet {
    n: usize,
    dim: i32,
    vertices: Vec<Point>,
    simplices: Vec<Simplex>,
}

impl SimplicialSet {
    /// The empty set in R^n (`dim = -1`).
    pub fn empty(n: usize) -> Self {
        SimplicialSet {
            n,
            dim: -1,
            vertices: Vec::new(),
            simplices: Vec::new(),
        }
    }

    pub fn new(n: usize, dim: i32, vertices: Vec<Point>, simplices: Vec<Simplex>) -> Result<Self> {
        let set = SimplicialSet {
            n,
            dim,
            vertices,
            simplices,
        };
        set.validate()?;
        Ok(set)
    }

    /// Builds a set whose declared dimension is the largest simplex dimension.
    pub fn from_parts(n: usize, vertices: Vec<Point>, simplices: Vec<Simplex>) -> Result<Self> {
        let dim = simplices.iter().map(|s| s.dim() as i32).max().unwrap_or(-1);
        SimplicialSet::new(n, dim, vertices, simplices)
    }

    /// A finite point set as a 0-dimensional complex.
    pub fn from_points(n: usize, points: impl IntoIterator<Item = Point>) -> Self {
        let mut set = SimplicialSet::empty(n);
        for p in points {
            set.push_point(p, []);
        }
        set
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < -1 {
            return Err(Error::InvalidGeometry(format!("dimension {} < -1", self.dim)));
        }
        for v in &self.vertices {
            if v.dim() != self.n {
                return Err(Error::InvalidGeometry(format!(
                    "vertex {v:?} is not in R^{}",
                    self.n
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidGeometry(format!("vertex {v:?} not finite")));
            }
        }
        for (si, s) in self.simplices.iter().enumerate() {
            if s.vertices.is_empty() || s.dim() as i32 > self.dim {
                return Err(Error::InvalidGeometry(format!(
                    "simplex {si} has {} vertices in a {}-dimensional set",
                    s.vertices.len(),
                    self.dim
                )));
            }
            let mut seen = s.key();
            seen.dedup();
            if seen.len() != s.vertices.len() {
                return Err(Error::InvalidGeometry(format!(
                    "simplex {si} repeats a vertex"
                )));
            }
            if let Some(&bad) = s.vertices.iter().find(|&&v| v >= self.vertices.len()) {
                return Err(Error::InvalidGeometry(format!(
                    "simplex {si} references missing vertex {bad}"
                )));
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> i32 {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplices_mut(&mut self) -> &mut [Simplex] {
        &mut self.simplices
    }

    pub fn points_of(&self, s: &Simplex) -> Vec<&Point> {
        s.vertices.iter().map(|&i| &self.vertices[i]).collect()
    }

    pub fn volume_of(&self, s: &Simplex) -> f64 {
        simplex_volume(&self.points_of(s))
    }

    pub fn push_vertex(&mut self, p: Point) -> usize {
        debug_assert_eq!(p.dim(), self.n);
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    /// Appends a simplex, raising the declared dimension if needed.
    pub fn push_simplex(&mut self, s: Simplex) -> usize {
        self.dim = self.dim.max(s.dim() as i32);
        self.simplices.push(s);
        self.simplices.len() - 1
    }

    /// Appends a simplex given by its vertex positions.
    pub fn push_points(&mut self, pts: &[Point], tags: impl IntoIterator<Item = Tag>) -> usize {
        let base = self.vertices.len();
        self.vertices.extend(pts.iter().cloned());
        let mut s = Simplex::new(base..base + pts.len());
        s.tags.extend(tags);
        self.push_simplex(s)
    }

    pub fn push_point(&mut self, p: Point, tags: impl IntoIterator<Item = Tag>) -> usize {
        self.push_points(&[p], tags)
    }

    /// Raises the declared dimension (e.g. an empty cone is declared `d+1`).
    pub fn with_declared_dim(mut self, dim: i32) -> Self {
        self.dim = self.dim.max(dim);
        self
    }

    /// Resets the declared dimension to the largest simplex dimension.
    pub fn shrink_dim(&mut self) {
        self.dim = self
            .simplices
            .iter()
            .map(|s| s.dim() as i32)
            .max()
            .unwrap_or(-1);
    }

    /// Disjoint union of two complexes in the same R^n (no welding).
    pub fn union(&self, other: &SimplicialSet) -> SimplicialSet {
        let mut out = self.clone();
        out.append(other);
        out
    }

    pub fn append(&mut self, other: &SimplicialSet) {
        assert_eq!(self.n, other.n, "union of complexes in different R^n");
        let base = self.vertices.len();
        self.vertices.extend(other.vertices.iter().cloned());
        for s in &other.simplices {
            let mut t = s.clone();
            for v in t.vertices.iter_mut() {
                *v += base;
            }
            self.simplices.push(t);
        }
        self.dim = self.dim.max(other.dim);
    }

    /// Adds `tag` to every simplex.
    pub fn tag_all(&mut self, tag: Tag) {
        for s in &mut self.simplices {
            s.tags.insert(tag.clone());
        }
    }

    /// Sub-complex of the simplices satisfying `keep`, with unused vertices
    /// dropped. The declared dimension is preserved.
    pub fn filter(&self, mut keep: impl FnMut(&Simplex) -> bool) -> SimplicialSet {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut out = SimplicialSet::empty(self.n);
        for s in &self.simplices {
            if !keep(s) {
                continue;
            }
            let mut t = s.clone();
            for v in t.vertices.iter_mut() {
                let next = out.vertices.len();
                let idx = *remap.entry(*v).or_insert_with(|| {
                    out.vertices.push(self.vertices[*v].clone());
                    next
                });
                *v = idx;
            }
            out.simplices.push(t);
        }
        out.dim = self.dim;
        out
    }

    /// Vertices referenced by at least one simplex, in index order.
    pub fn used_vertices(&self) -> Vec<&Point> {
        let used: BTreeSet<usize> = self
            .simplices
            .iter()
            .flat_map(|s| s.vertices.iter().copied())
            .collect();
        used.into_iter().map(|i| &self.vertices[i]).collect()
    }

    /// Applies `f` to every vertex.
    pub fn map_vertices(&self, mut f: impl FnMut(&Point) -> Point) -> SimplicialSet {
        let mut out = self.clone();
        for v in out.vertices.iter_mut() {
            *v = f(v);
        }
        out
    }

    /// Simplices that are not a face of another simplex.
    pub fn maximal_simplices(&self) -> Vec<usize> {
        let mut faces: BTreeSet<SmallVec<[usize; 4]>> = BTreeSet::new();
        for s in &self.simplices {
            let key = s.key();
            let k = key.len();
            if k < 2 {
                continue;
            }
            // all proper nonempty faces
            for mask in 1..(1u32 << k) - 1 {
                let face: SmallVec<[usize; 4]> = (0..k)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| key[b])
                    .collect();
                faces.insert(face);
            }
        }
        let mut seen = BTreeSet::new();
        (0..self.simplices.len())
            .filter(|&i| {
                let key = self.simplices[i].key();
                !faces.contains(&key) && seen.insert(key)
            })
            .collect()
    }

    /// Tags every top-dimensional simplex whose volume is below `tol` as
    /// degenerate. Returns the number of newly tagged simplices.
    pub fn tag_degenerate(&mut self, tol: f64) -> usize {
        let mut count = 0;
        for i in 0..self.simplices.len() {
            let s = &self.simplices[i];
            if s.dim() == 0 || s.dim() as i32 != self.dim || s.has(&Tag::Degenerate) {
                continue;
            }
            if self.volume_of(s) < tol {
                self.simplices[i].tags.insert(Tag::Degenerate);
                count += 1;
            }
        }
        count
    }

    /// Merges vertices closer than `tol`, collapses simplices that repeat a
    /// vertex, and removes duplicate simplices (merging their tags).
    pub fn weld(&self, tol: f64) -> SimplicialSet {
        let n = self.vertices.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.vertices[a].lex_cmp(&self.vertices[b]));
        let mut rep: Vec<usize> = (0..n).collect();
        let mut reps: Vec<usize> = Vec::new();
        for &i in &order {
            let pi = &self.vertices[i];
            let mut found = None;
            for &r in reps.iter().rev() {
                let pr = &self.vertices[r];
                if self.n > 0 && pi[0] - pr[0] > tol {
                    break;
                }
                if pi.dist(pr) <= tol {
                    found = Some(r);
                    break;
                }
            }
            match found {
                Some(r) => rep[i] = r,
                None => reps.push(i),
            }
        }
        let mut out = SimplicialSet::empty(self.n);
        let mut new_index: HashMap<usize, usize> = HashMap::new();
        let mut by_key: HashMap<SmallVec<[usize; 4]>, usize> = HashMap::new();
        for s in &self.simplices {
            let mut verts: SmallVec<[usize; 4]> = SmallVec::new();
            for &v in &s.vertices {
                let r = rep[v];
                let next = out.vertices.len();
                let idx = *new_index.entry(r).or_insert_with(|| {
                    out.vertices.push(self.vertices[r].clone());
                    next
                });
                if !verts.contains(&idx) {
                    verts.push(idx);
                }
            }
            let mut key = verts.clone();
            key.sort_unstable();
            match by_key.get(&key) {
                Some(&existing) => {
                    let tags = s.tags.clone();
                    out.simplices[existing].tags.extend(tags);
                }
                None => {
                    by_key.insert(key, out.simplices.len());
                    out.simplices.push(Simplex {
                        vertices: verts,
                        tags: s.tags.clone(),
                    });
                }
            }
        }
        out.dim = self.dim;
        out
    }

    /// Uniform refinement: each edge is split into `density` pieces.
    /// Supported for simplices of dimension ≤ 2.
    pub fn refine(&self, density: usize) -> Result<SimplicialSet> {
        let density = density.max(1);
        if density == 1 {
            return Ok(self.clone());
        }
        let mut out = SimplicialSet::empty(self.n);
        out.dim = self.dim;
        for s in &self.simplices {
            let pts = self.points_of(s);
            match s.dim() {
                0 => {
                    out.push_points(&[pts[0].clone()], s.tags.iter().cloned());
                }
                1 => {
                    for k in 0..density {
                        let a = pts[0].lerp(pts[1], k as f64 / density as f64);
                        let b = pts[0].lerp(pts[1], (k + 1) as f64 / density as f64);
                        out.push_points(&[a, b], s.tags.iter().cloned());
                    }
                }
                2 => {
                    let m = density;
                    let at = |i: usize, j: usize| {
                        // barycentric (i/m, j/m) along edges from vertex 0
                        let u = i as f64 / m as f64;
                        let v = j as f64 / m as f64;
                        let e1 = pts[1].sub(pts[0]);
                        let e2 = pts[2].sub(pts[0]);
                        pts[0].axpy(u, &e1).axpy(v, &e2)
                    };
                    for i in 0..m {
                        for j in 0..m - i {
                            out.push_points(
                                &[at(i, j), at(i + 1, j), at(i, j + 1)],
                                s.tags.iter().cloned(),
                            );
                            if i + j + 1 < m {
                                out.push_points(
                                    &[at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)],
                                    s.tags.iter().cloned(),
                                );
                            }
                        }
                    }
                }
                d => {
                    return Err(Error::Unsupported(format!(
                        "refinement of {d}-simplices"
                    )))
                }
            }
        }
        Ok(out.weld(0.0))
    }

    /// Sample points: every used vertex and the barycenter of every simplex
    /// and of every edge.
    pub fn sample_points(&self) -> Vec<Point> {
        let mut out: Vec<Point> = self.used_vertices().into_iter().cloned().collect();
        for s in &self.simplices {
            let pts = self.points_of(s);
            if pts.len() >= 2 {
                for a in 0..pts.len() {
                    for b in a + 1..pts.len() {
                        out.push(pts[a].lerp(pts[b], 0.5));
                    }
                }
            }
            if pts.len() >= 3 {
                out.extend(Point::centroid(pts.iter().copied()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> SimplicialSet {
        SimplicialSet::from_parts(
            2,
            vec![
                Point::from([0.0, 0.0]),
                Point::from([1.0, 0.0]),
                Point::from([1.0, 1.0]),
                Point::from([0.0, 1.0]),
            ],
            vec![Simplex::new([0, 1, 2]), Simplex::new([0, 2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn tag_round_trip() {
        for t in [
            Tag::Exceptional,
            Tag::Degenerate,
            Tag::Tangential,
            Tag::OriginWall(3),
            Tag::OriginSlab(0),
        ] {
            assert_eq!(t.to_string().parse::<Tag>().unwrap(), t);
        }
        assert!("bogus".parse::<Tag>().is_err());
    }

    #[test]
    fn volumes() {
        let o = Point::from([0.0, 0.0, 0.0]);
        let x = Point::from([1.0, 0.0, 0.0]);
        let y = Point::from([0.0, 1.0, 0.0]);
        let z = Point::from([0.0, 0.0, 1.0]);
        assert!((simplex_volume(&[&o, &x]) - 1.0).abs() < 1e-15);
        assert!((simplex_volume(&[&o, &x, &y]) - 0.5).abs() < 1e-15);
        assert!((simplex_volume(&[&o, &x, &y, &z]) - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn validation_catches_bad_indices() {
        let bad = SimplicialSet::new(2, 1, vec![Point::from([0.0, 0.0])], vec![Simplex::new([0, 1])]);
        assert!(bad.is_err());
        let rep = SimplicialSet::new(
            2,
            1,
            vec![Point::from([0.0, 0.0])],
            vec![Simplex::new([0, 0])],
        );
        assert!(rep.is_err());
    }

    #[test]
    fn maximal_and_weld() {
        let mut s = square();
        s.push_simplex(Simplex::new([0, 1]));
        s.push_simplex(Simplex::new([3]));
        assert_eq!(s.maximal_simplices(), vec![0, 1]);
        let doubled = s.union(&s).weld(1e-12);
        assert_eq!(doubled.vertices().len(), 4);
        assert_eq!(doubled.simplices().len(), 4);
    }

    #[test]
    fn refine_preserves_area() {
        let s = square();
        let r = s.refine(4).unwrap();
        let area: f64 = r.simplices().iter().map(|t| r.volume_of(t)).sum();
        assert!((area - 1.0).abs() < 1e-12);
        assert_eq!(r.simplices().len(), 2 * 16);
    }

    #[test]
    fn degenerate_tagging() {
        let mut s = SimplicialSet::from_parts(
            2,
            vec![
                Point::from([0.0, 0.0]),
                Point::from([1.0, 0.0]),
                Point::from([2.0, 0.0]),
            ],
            vec![Simplex::new([0, 1, 2])],
        )
        .unwrap();
        assert_eq!(s.tag_degenerate(DEGENERACY_TOL), 1);
        assert!(s.simplices()[0].has(&Tag::Degenerate));
    }
}
