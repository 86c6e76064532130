//! Deformation flows that push a set onto the cone over its trace on a
//! slice.
//!
//! Given a slice `Q` with free directions `E` and fixed directions `G`, a
//! point `p ∈ Q`, and a flat disk `D = p + (N(0, 7δ/8) ∩ G)`, the field is
//! `V = θ·V̂` with `V̂(y + e) = −e` for `y ∈ D`, `e ∈ E`. The cutoff
//! `θ(x) = min(1, dist(x, D∪A∪F)/ρ)²` vanishes exactly on `D ∪ A ∪ F`,
//! where `F` is the complement of `int(((N(0,δ/2)∩G) + Q) ∩ B)`.
//! Trajectories are straight segments toward `D`, so the flow at large times
//! maps the part of a set inside `Q` close to `{p} ∪ C(A∩Q, p)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::del_zw;
use crate::clip::{clip_set, intersect_slice};
use crate::complex::SimplicialSet;
use crate::cone::cone;
use crate::distance::distance_to_set;
use crate::error::{Error, Result};
use crate::point::{ClosedBall, Point};
use crate::slice::DSlice;
use crate::span::Check;
use crate::GEOM_TOL;

/// Describes the cutoff used in place of a smooth partition-of-unity series.
pub const CUTOFF_NOTE: &str =
    "theta(x) = min(1, dist(x, D ∪ A ∪ F)/rho)^2: same zero set as a smooth cutoff, locally Lipschitz";

fn default_rho() -> f64 {
    1.0
}
fn default_dt() -> f64 {
    1e-3
}
fn default_density() -> usize {
    4
}
fn default_tol() -> f64 {
    GEOM_TOL
}

/// One application of the flow construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowScenario {
    pub ball: ClosedBall,
    /// The slice `Q`.
    pub q: DSlice,
    /// The cone point.
    pub p: Point,
    /// Points the flow must fix.
    pub a: SimplicialSet,
    /// Fattening radius of `Q(ε)`.
    pub eps: f64,
    /// Disk radius parameter; `ε/4` when absent.
    #[serde(default)]
    pub delta: Option<f64>,
    /// Distance at which the cutoff saturates.
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Refinement density (pieces per input edge).
    #[serde(default = "default_density")]
    pub density: usize,
    /// Allowed excursion outside `B` before integration is declared unstable.
    #[serde(default = "default_tol")]
    pub tol: f64,
}

impl FlowScenario {
    pub fn new(ball: ClosedBall, q: DSlice, p: Point, a: SimplicialSet, eps: f64) -> Self {
        FlowScenario {
            ball,
            q,
            p,
            a,
            eps,
            delta: None,
            rho: default_rho(),
            dt: default_dt(),
            density: default_density(),
            tol: default_tol(),
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(self.eps / 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ball.dim();
        for (what, found) in [
            ("slice", self.q.ambient_dim()),
            ("cone point", self.p.dim()),
            ("fixed set", self.a.ambient_dim()),
        ] {
            if found != n {
                return Err(Error::InvalidGeometry(format!(
                    "{what} lives in R^{found}, ball in R^{n}"
                )));
            }
        }
        let delta = self.delta();
        if !(self.eps > 0.0 && delta > 0.0 && delta < self.eps) {
            return Err(Error::Precondition(format!(
                "need 0 < delta < eps, got delta = {delta}, eps = {}",
                self.eps
            )));
        }
        if !(self.rho > 0.0 && self.dt > 0.0) {
            return Err(Error::Precondition("rho and dt must be positive".into()));
        }
        if !self.q.contains(&self.p, self.tol) || !self.ball.contains(&self.p, self.tol) {
            return Err(Error::Precondition(format!(
                "cone point {:?} is not in Q ∩ B",
                self.p
            )));
        }
        // every translate x + Q with |x| ≤ δ along G must meet int(B)
        let off = self.q.project_to_hull(&self.ball.center).dist(&self.ball.center);
        if off + delta >= self.ball.radius {
            return Err(Error::Precondition(format!(
                "delta = {delta} too large: translates of Q miss int(B)"
            )));
        }
        Ok(())
    }
}

/// The flat disk `D = center + (N(0, radius) ∩ G)` and the sampled checks
/// of its three defining conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatDisk {
    pub center: Point,
    pub radius: f64,
    /// Coordinate axes spanning `G`.
    pub normal_axes: Vec<usize>,
    /// How far the disk stays from `∂B` and from the relative boundary of `Q`.
    pub clearance: f64,
    /// `D \ {p} ⊂ int(((N(0,δ)∩G) + Q) ∩ B)`.
    pub interior: bool,
    /// Projection onto `p + G` is injective.
    pub injective: bool,
    /// Projection image contains `p + (N(0, 3δ/4) ∩ G)`.
    pub covers: bool,
}

fn sphere_samples(k: usize, radius: f64) -> Vec<Vec<f64>> {
    // axis directions and pairwise diagonals
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..k {
        for s in [-1.0, 1.0] {
            let mut v = vec![0.0; k];
            v[i] = s;
            dirs.push(v);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; k];
                v[i] = si / 2f64.sqrt();
                v[j] = sj / 2f64.sqrt();
                dirs.push(v);
            }
        }
    }
    let mut out = vec![vec![0.0; k]];
    for frac in [0.25, 0.5, 0.75, 1.0] {
        out.extend(
            dirs.iter()
                .map(|d| d.iter().map(|c| c * radius * frac).collect::<Vec<_>>()),
        );
    }
    out
}

/// Builds the flat disk through `p` normal to `Q`. With `Q` of full
/// dimension the disk is `{p}`.
pub fn build_disk(q: &DSlice, p: &Point, delta: f64, ball: &ClosedBall) -> Result<FlatDisk> {
    let g: Vec<usize> = q.fixed_indices().collect();
    if g.is_empty() {
        return Ok(FlatDisk {
            center: p.clone(),
            radius: 0.0,
            normal_axes: g,
            clearance: ball.radius - p.dist(&ball.center),
            interior: true,
            injective: true,
            covers: true,
        });
    }
    let radius = 7.0 * delta / 8.0;
    let rel = p.sub(&ball.center);
    let e_sq: f64 = q.free_indices().map(|i| rel[i] * rel[i]).sum();
    let g_norm: f64 = g.iter().map(|&j| rel[j] * rel[j]).sum::<f64>().sqrt();
    let far = (e_sq + (g_norm + radius).powi(2)).sqrt();
    let relint = q
        .free_indices()
        .map(|i| {
            let b = q.bounds(i).unwrap();
            (p[i] - b.lo).min(b.hi - p[i])
        })
        .fold(f64::INFINITY, f64::min);
    let clearance = (ball.radius - far).min(relint);
    if !(clearance > 0.0) {
        return Err(Error::NeedCurvedDisk { clearance });
    }

    let samples: Vec<Point> = sphere_samples(g.len(), radius)
        .into_iter()
        .map(|off| {
            let mut x = p.clone();
            for (k, &j) in g.iter().enumerate() {
                x[j] += off[k];
            }
            x
        })
        .collect();
    let interior = samples.iter().all(|x| {
        let gn: f64 = g.iter().map(|&j| (x[j] - p[j]).powi(2)).sum::<f64>().sqrt();
        gn < delta && q.fatten(delta).contains_relint(x, 0.0) && ball.contains_interior(x, 0.0)
    });
    let injective = samples.iter().enumerate().all(|(a, x)| {
        samples[a + 1..].iter().all(|y| {
            let dg: f64 = g.iter().map(|&j| (x[j] - y[j]).powi(2)).sum();
            dg > 0.0 || x == y
        })
    });
    let covers = radius >= 0.75 * delta;
    if !interior {
        return Err(Error::NeedCurvedDisk { clearance });
    }
    Ok(FlatDisk {
        center: p.clone(),
        radius,
        normal_axes: g,
        clearance,
        interior,
        injective,
        covers,
    })
}

/// Precomputed pieces of the field for one scenario.
struct Field<'a> {
    sc: &'a FlowScenario,
    free: Vec<usize>,
    fixed: Vec<(usize, f64)>,
    /// Finite free bounds `(axis, lo, hi)`.
    faces: Vec<(usize, f64, f64)>,
    disk_radius: f64,
    half_delta: f64,
}

impl<'a> Field<'a> {
    fn new(sc: &'a FlowScenario) -> Self {
        let free: Vec<usize> = sc.q.free_indices().collect();
        let fixed: Vec<(usize, f64)> = sc
            .q
            .fixed_indices()
            .map(|j| (j, sc.q.fixed_value(j).unwrap()))
            .collect();
        let faces = free
            .iter()
            .map(|&i| {
                let b = sc.q.bounds(i).unwrap();
                (i, b.lo, b.hi)
            })
            .collect();
        let delta = sc.delta();
        Field {
            sc,
            free,
            disk_radius: if fixed.is_empty() { 0.0 } else { 7.0 * delta / 8.0 },
            half_delta: delta / 2.0,
            fixed,
            faces,
        }
    }

    /// `|G-component of x − p|`.
    fn g_norm(&self, x: &Point) -> f64 {
        self.fixed
            .iter()
            .map(|&(j, _)| (x[j] - self.sc.p[j]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn e_norm_sq(&self, x: &Point) -> f64 {
        self.free.iter().map(|&i| (x[i] - self.sc.p[i]).powi(2)).sum()
    }

    fn dist_disk(&self, x: &Point) -> f64 {
        let over = (self.g_norm(x) - self.disk_radius).max(0.0);
        (self.e_norm_sq(x) + over * over).sqrt()
    }

    fn dist_f(&self, x: &Point) -> f64 {
        let ball = &self.sc.ball;
        let mut d = ball.radius - x.dist(&ball.center);
        if !self.fixed.is_empty() {
            let g: f64 = self
                .fixed
                .iter()
                .map(|&(j, c)| (x[j] - c).powi(2))
                .sum::<f64>()
                .sqrt();
            d = d.min(self.half_delta - g);
        }
        for &(i, lo, hi) in &self.faces {
            if lo.is_finite() {
                d = d.min(x[i] - lo);
            }
            if hi.is_finite() {
                d = d.min(hi - x[i]);
            }
        }
        d.max(0.0)
    }

    fn theta(&self, x: &Point) -> f64 {
        let mut d = self.dist_f(x);
        if d > 0.0 {
            d = d.min(self.dist_disk(x));
        }
        if d > 0.0 {
            d = d.min(distance_to_set(&self.sc.a, x));
        }
        (d / self.sc.rho).min(1.0).powi(2)
    }

    /// `V̂(x)`: `−e` on `D + E`, zero elsewhere. `G` components are exactly 0.
    fn v_hat(&self, x: &Point) -> Point {
        let mut v = Point::origin(x.dim());
        if self.g_norm(x) <= self.disk_radius {
            for &i in &self.free {
                v[i] = self.sc.p[i] - x[i];
            }
        }
        v
    }

    fn velocity(&self, x: &Point) -> Point {
        let th = self.theta(x);
        if th == 0.0 {
            return Point::origin(x.dim());
        }
        self.v_hat(x).scale(th)
    }
}

/// `θ(x)`.
pub fn cutoff_theta(x: &Point, sc: &FlowScenario) -> f64 {
    Field::new(sc).theta(x)
}

/// `V(x) = θ(x)·V̂(x)`.
pub fn vector_field(x: &Point, sc: &FlowScenario) -> Point {
    Field::new(sc).velocity(x)
}

/// Straight-line deviation of one trajectory: distance from `x` to the ray
/// from `x0` toward `D`, including any drift in the `G` coordinates.
fn ray_deviation(field: &Field, x0: &Point, x: &Point) -> f64 {
    let p = &field.sc.p;
    let g_drift: f64 = field
        .fixed
        .iter()
        .map(|&(j, _)| (x[j] - x0[j]).powi(2))
        .sum();
    let e0: Vec<f64> = field.free.iter().map(|&i| x0[i] - p[i]).collect();
    let e: Vec<f64> = field.free.iter().map(|&i| x[i] - p[i]).collect();
    let n0: f64 = e0.iter().map(|c| c * c).sum::<f64>().sqrt();
    let cross_sq = if n0 == 0.0 {
        e.iter().map(|c| c * c).sum::<f64>()
    } else {
        let s: f64 = e.iter().zip(&e0).map(|(a, b)| a * b).sum::<f64>() / n0;
        e.iter()
            .zip(&e0)
            .map(|(a, b)| (a - s * b / n0).powi(2))
            .sum::<f64>()
    };
    (g_drift + cross_sq).sqrt()
}

/// Integrates one vertex with classical RK4, recording its position at each
/// of the (sorted) `times`. Stops early at a rest point of the field.
fn integrate(field: &Field, x0: &Point, times: &[f64]) -> Result<Vec<Point>> {
    let sc = field.sc;
    let dt = sc.dt;
    let mut x = x0.clone();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    let mut at_rest = false;
    for &target in times {
        while !at_rest && t < target - 1e-12 {
            let h = dt.min(target - t);
            let k1 = field.velocity(&x);
            if k1.norm_sq() == 0.0 {
                // autonomous field: a zero of V is a fixed point
                at_rest = true;
                break;
            }
            let k2 = field.velocity(&x.axpy(h / 2.0, &k1));
            let k3 = field.velocity(&x.axpy(h / 2.0, &k2));
            let k4 = field.velocity(&x.axpy(h, &k3));
            let step = k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4);
            x = x.axpy(h / 6.0, &step);
            t += h;
            let excess = x.dist(&sc.ball.center) - sc.ball.radius;
            if !x.is_finite() || excess > sc.tol {
                return Err(Error::IntegrationBlowup {
                    excess: if excess.is_finite() { excess } else { f64::INFINITY },
                });
            }
        }
        out.push(x.clone());
    }
    Ok(out)
}

fn split_at(x: &SimplicialSet, axis: usize, value: f64) -> Result<SimplicialSet> {
    let below = clip_set(x, &[(axis, f64::NEG_INFINITY, value)], 0.0)?;
    let above = clip_set(x, &[(axis, value, f64::INFINITY)], 0.0)?;
    Ok(below.union(&above).weld(1e-12).with_declared_dim(x.dim()))
}

/// Subdivides `z` so that the hyperplanes bounding the flow's support,
/// `Q(δ/2)`, `Q(ε)`, and `Q` itself carry vertices. Sets of dimension
/// above 2 are returned unchanged.
pub fn split_for_scenario(z: &SimplicialSet, sc: &FlowScenario) -> Result<SimplicialSet> {
    if z.dim() > 2 || z.is_empty() {
        return Ok(z.clone());
    }
    let mut cur = z.clone();
    let delta = sc.delta();
    for j in sc.q.fixed_indices().collect::<Vec<_>>() {
        let c = sc.q.fixed_value(j).unwrap();
        for v in [c - sc.eps, c - delta / 2.0, c, c + delta / 2.0, c + sc.eps] {
            cur = split_at(&cur, j, v)?;
        }
    }
    for i in sc.q.free_indices().collect::<Vec<_>>() {
        let b = sc.q.bounds(i).unwrap();
        for v in [b.lo, b.hi] {
            if v.is_finite() {
                cur = split_at(&cur, i, v)?;
            }
        }
    }
    Ok(cur)
}

/// Positions of the vertices of a prepared set at each sampled time.
#[derive(Clone, Debug)]
pub struct FlowRun {
    /// The split and refined input whose vertices were advected.
    pub initial: SimplicialSet,
    pub times: Vec<f64>,
    pub snapshots: Vec<SimplicialSet>,
    /// Largest distance of any vertex from its initial ray.
    pub ray_deviation: f64,
}

fn sorted_times(times: &[f64]) -> Result<Vec<f64>> {
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(Error::Precondition(format!("flow time {t} is not a finite t ≥ 0")));
    }
    let mut ts = times.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    Ok(ts)
}

fn advect(prepared: SimplicialSet, sc: &FlowScenario, times: &[f64]) -> Result<FlowRun> {
    sc.validate()?;
    if prepared.ambient_dim() != sc.ball.dim() {
        return Err(Error::DimensionMismatch {
            expected: sc.ball.dim() as i64,
            found: prepared.ambient_dim() as i64,
        });
    }
    build_disk(&sc.q, &sc.p, sc.delta(), &sc.ball)?;
    let times = sorted_times(times)?;
    let field = Field::new(sc);
    let paths: Vec<Vec<Point>> = prepared
        .vertices()
        .par_iter()
        .map(|v| integrate(&field, v, &times))
        .collect::<Result<_>>()?;
    let ray_deviation = prepared
        .vertices()
        .iter()
        .zip(&paths)
        .flat_map(|(x0, path)| path.iter().map(|x| ray_deviation(&field, x0, x)))
        .fold(0.0, f64::max);
    let snapshots = (0..times.len())
        .map(|k| {
            let mut it = paths.iter();
            prepared.map_vertices(|_| it.next().unwrap()[k].clone())
        })
        .collect();
    Ok(FlowRun {
        initial: prepared,
        times,
        snapshots,
        ray_deviation,
    })
}

/// Splits, refines, and advects `z` under the scenario's flow, sampling at
/// every time in `times`.
pub fn flow_run(z: &SimplicialSet, sc: &FlowScenario, times: &[f64]) -> Result<FlowRun> {
    let prepared = split_for_scenario(z, sc)?.refine(sc.density)?;
    advect(prepared, sc, times)
}

/// `φ_t(Z)`: vertices (after splitting and refinement) advected to time `t`.
pub fn flow_evolve(z: &SimplicialSet, sc: &FlowScenario, t: f64) -> Result<SimplicialSet> {
    let mut run = flow_run(z, sc, &[t])?;
    Ok(run.snapshots.pop().unwrap())
}

/// `Z ∩ ∂(Q ∩ B)`, the trace of `Z` on the relative boundary of `Q ∩ B`.
pub fn boundary_trace(z: &SimplicialSet, q: &DSlice, ball: &ClosedBall, tol: f64) -> Result<SimplicialSet> {
    let inside = intersect_slice(z, q, tol)?.set;
    let mut out = SimplicialSet::empty(z.ambient_dim());
    for i in q.free_indices().collect::<Vec<_>>() {
        let b = q.bounds(i).unwrap();
        for v in [b.lo, b.hi] {
            if v.is_finite() {
                out.append(&intersect_slice(&inside, &q.fix(i, v)?, tol)?.set);
            }
        }
    }
    for p in inside.used_vertices() {
        if ball.on_boundary(p, tol) {
            out.push_point(p.clone(), []);
        }
    }
    let mut out = out.weld(tol);
    out.shrink_dim();
    Ok(out)
}

fn distance_to_union(sets: &[&SimplicialSet], x: &Point) -> f64 {
    sets.iter()
        .map(|s| distance_to_set(s, x))
        .fold(f64::INFINITY, f64::min)
}

/// Largest distance from the sample points of `x` to the union of `target`.
fn excess(x: &SimplicialSet, target: &[&SimplicialSet]) -> f64 {
    x.sample_points()
        .par_iter()
        .map(|y| distance_to_union(target, y))
        .reduce(|| 0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSample {
    pub t: f64,
    /// Largest distance from `Z_t ∩ Q` to the cone target.
    pub distance: f64,
    /// Symmetric Hausdorff distance between `Z_t ∩ Q` and the cone target.
    pub hausdorff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stationarity {
    pub vertices_outside: usize,
    pub max_movement: f64,
    /// No vertex outside the support moved at all.
    pub exact: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub cutoff: String,
    pub delta: f64,
    pub eps: f64,
    pub rho: f64,
    pub dt: f64,
    pub disk: FlatDisk,
    pub vertices: usize,
    pub samples: Vec<TimeSample>,
    /// `Z_T ∩ Q` near `{p} ∪ C(A∩Q, p) ∪ (Z ∩ ∂(Q∩B))`.
    pub cone_containment: Check,
    pub decay_monotone: bool,
    pub hausdorff_monotone: bool,
    /// `Z_T = Z` off the support.
    pub stationarity: Stationarity,
    /// `∂(Z_T, Q(ε))` near `{p} ∪ C(A∩Q, p) ∪ ∂(Z, Q(ε))`.
    pub boundary_containment: Check,
    pub ray_deviation: f64,
    /// `ray_deviation / T`.
    pub ray_deviation_rate: f64,
    pub pass: bool,
}

/// Evolves `z` and checks the three conclusions of the flow construction at
/// the largest sampled time, with distance tolerance `tol`.
pub fn check_lemma2(sc: &FlowScenario, z: &SimplicialSet, times: &[f64], tol: f64) -> Result<(FlowRun, Lemma2Report)> {
    sc.validate()?;
    if times.is_empty() {
        return Err(Error::EmptyInput("flow times"));
    }
    let disk = build_disk(&sc.q, &sc.p, sc.delta(), &sc.ball)?;
    let rel = del_zw(z, &sc.q, &sc.ball, sc.eps, GEOM_TOL)?;
    for x in rel.sample_points() {
        let d = distance_to_set(&sc.a, &x);
        if d > tol {
            return Err(Error::Hypothesis(format!(
                "∂(Z, Q) reaches {x:?}, at distance {d} from A"
            )));
        }
    }

    let run = flow_run(z, sc, times)?;
    let a_q = intersect_slice(&sc.a, &sc.q, GEOM_TOL)?.set;
    let cone_target = cone(&a_q, &sc.p);
    let trace = boundary_trace(&run.initial, &sc.q, &sc.ball, GEOM_TOL)?;
    let target = [&cone_target, &trace];
    let target_samples: Vec<Point> = cone_target
        .refine(16)?
        .sample_points()
        .into_iter()
        .chain(trace.sample_points())
        .collect();

    let mut samples = Vec::with_capacity(run.times.len());
    for (t, zt) in run.times.iter().zip(&run.snapshots) {
        let zq = intersect_slice(zt, &sc.q, GEOM_TOL)?.set;
        let distance = if zq.is_empty() { 0.0 } else { excess(&zq, &target) };
        let back = if zq.is_empty() {
            0.0
        } else {
            target_samples
                .par_iter()
                .map(|y| distance_to_set(&zq, y))
                .reduce(|| 0.0, f64::max)
        };
        samples.push(TimeSample {
            t: *t,
            distance,
            hausdorff: distance.max(back),
        });
    }
    let last = run.snapshots.last().unwrap();
    let t_max = *run.times.last().unwrap();
    let monotone = |f: fn(&TimeSample) -> f64| samples.windows(2).all(|w| f(&w[1]) <= f(&w[0]) + 1e-12);
    let decay_monotone = monotone(|s| s.distance);
    let hausdorff_monotone = monotone(|s| s.hausdorff);
    let final_distance = samples.last().unwrap().distance;
    let cone_containment = Check {
        lhs: final_distance,
        rhs: tol,
        pass: final_distance <= tol,
    };

    let q_eps = sc.q.fatten(sc.eps);
    let in_support = |x: &Point| {
        *x == sc.p
            || (sc.q.contains(x, 0.0) && sc.ball.contains_interior(x, 0.0))
            || (q_eps.contains_relint(x, 0.0) && sc.ball.contains_interior(x, 0.0))
    };
    let mut outside = 0;
    let mut max_movement: f64 = 0.0;
    for (x0, x) in run.initial.vertices().iter().zip(last.vertices()) {
        if !in_support(x0) {
            outside += 1;
            max_movement = max_movement.max(x0.dist(x));
        }
    }
    let stationarity = Stationarity {
        vertices_outside: outside,
        max_movement,
        exact: max_movement == 0.0,
        pass: max_movement <= tol,
    };

    let before = del_zw(&run.initial, &q_eps, &sc.ball, sc.eps, GEOM_TOL)?;
    let after = del_zw(last, &q_eps, &sc.ball, sc.eps, GEOM_TOL)?;
    let lhs = if after.is_empty() { 0.0 } else { excess(&after, &[&cone_target, &before]) };
    let boundary_containment = Check {
        lhs,
        rhs: tol,
        pass: lhs <= tol,
    };

    let ray_deviation_rate = run.ray_deviation / t_max.max(1.0);
    let pass = cone_containment.pass && decay_monotone && stationarity.pass && boundary_containment.pass;
    let report = Lemma2Report {
        cutoff: CUTOFF_NOTE.into(),
        delta: sc.delta(),
        eps: sc.eps,
        rho: sc.rho,
        dt: sc.dt,
        disk,
        vertices: run.initial.vertices().len(),
        samples,
        cone_containment,
        decay_monotone,
        hausdorff_monotone,
        stationarity,
        boundary_containment,
        ray_deviation: run.ray_deviation,
        ray_deviation_rate,
        pass,
    };
    Ok((run, report))
}

/// A slice `W` cut into slabs `W_0 … W_M` by the planes `Σ_0 < … < Σ_{M+1}`
/// along one direction, with the wall outputs `X_1 … X_M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlabLayout {
    pub w: DSlice,
    pub direction: usize,
    pub planes: Vec<f64>,
    pub walls: Vec<SimplicialSet>,
}

impl SlabLayout {
    pub fn slabs(&self) -> Result<Vec<DSlice>> {
        let iv = self
            .w
            .bounds(self.direction)
            .ok_or(Error::NotFreeDirection { index: self.direction })?;
        self.planes
            .windows(2)
            .map(|p| self.w.with_bounds(self.direction, iv.lo.max(p[0]), iv.hi.min(p[1])))
            .collect()
    }

    /// `X_j` with `X_0 = X_{M+1} = ∅`.
    fn wall(&self, j: usize) -> Option<&SimplicialSet> {
        if j == 0 {
            None
        } else {
            self.walls.get(j - 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlabContainment {
    pub slab: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: String,
    pub vertices: usize,
    pub ray_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub stages: Vec<StageReport>,
    /// `∂(Y′, W_j) ⊂ (∂(Y, W) ∩ W_j) ∪ X_j ∪ X_{j+1}` for each slab.
    pub relative_boundary: Vec<SlabContainment>,
    /// `Y′ ∩ ∂(W_j ∩ B) ⊂ (Y ∩ ∂(W ∩ B)) ∪ X_j ∪ X_{j+1}` for each slab.
    pub slab_boundary: Vec<SlabContainment>,
    pub pass: bool,
}

fn check_stages(layout: &SlabLayout, walls: &[FlowScenario], slabs: &[FlowScenario], z: &SimplicialSet) -> Result<()> {
    let bad = |msg: String| Err(Error::Incompatible(msg));
    let m = layout.walls.len();
    if layout.planes.len() != m + 2 {
        return bad(format!("{} planes for {m} walls", layout.planes.len()));
    }
    if layout.planes.windows(2).any(|p| !(p[0] < p[1])) {
        return bad("planes are not increasing".into());
    }
    if walls.len() != m {
        return bad(format!("{} wall stages for {m} walls", walls.len()));
    }
    if !slabs.is_empty() && slabs.len() != m + 1 {
        return bad(format!("{} slab stages for {} slabs", slabs.len(), m + 1));
    }
    let Some(first) = walls.first().or(slabs.first()) else {
        return bad("no stages".into());
    };
    for sc in walls.iter().chain(slabs) {
        if sc.ball != first.ball {
            return bad("stages use different balls".into());
        }
        if sc.q.ambient_dim() != z.ambient_dim() {
            return bad("stage dimension differs from the input set".into());
        }
    }
    let x = layout.direction;
    for (j, sc) in walls.iter().enumerate() {
        let plane = layout.planes[j + 1];
        match sc.q.fixed_value(x) {
            Some(c) if (c - plane).abs() <= GEOM_TOL => {}
            _ => return bad(format!("wall stage {} is not on the plane x_{x} = {plane}", j + 1)),
        }
        let gap = (plane - layout.planes[j]).min(layout.planes[j + 2] - plane);
        if !(sc.eps < gap / 2.0) {
            return bad(format!(
                "wall stage {} has eps = {} but the neighboring planes are {gap} away",
                j + 1,
                sc.eps
            ));
        }
    }
    for (j, (sc, slab)) in slabs.iter().zip(layout.slabs()?).enumerate() {
        if sc.q != slab {
            return bad(format!("slab stage {j} does not act on slab {j}"));
        }
    }
    Ok(())
}

/// Applies the wall flows and then the slab flows, each for `t_per_stage`,
/// and checks the slab-boundary containments on the set obtained after the
/// wall flows. The input is refined once with the first stage's density.
pub fn compose_flows(
    layout: &SlabLayout,
    walls: &[FlowScenario],
    slabs: &[FlowScenario],
    z: &SimplicialSet,
    t_per_stage: f64,
    tol: f64,
) -> Result<(SimplicialSet, CompositionReport)> {
    check_stages(layout, walls, slabs, z)?;
    let ball = &walls.first().or(slabs.first()).unwrap().ball;
    let density = walls.first().or(slabs.first()).unwrap().density;
    let y = z.refine(density)?;
    let mut cur = y.clone();
    let mut stages = Vec::new();
    let mut run_stage = |name: String, sc: &FlowScenario, cur: &mut SimplicialSet| -> Result<()> {
        let prepared = split_for_scenario(cur, sc)?;
        let mut run = advect(prepared, sc, &[t_per_stage])?;
        stages.push(StageReport {
            stage: name,
            vertices: run.initial.vertices().len(),
            ray_deviation: run.ray_deviation,
        });
        *cur = run.snapshots.pop().unwrap();
        Ok(())
    };
    for (j, sc) in walls.iter().enumerate() {
        run_stage(format!("wall[{}]", j + 1), sc, &mut cur)?;
    }
    let y_prime = cur.clone();

    let eps = walls
        .iter()
        .chain(slabs)
        .map(|s| s.eps)
        .fold(f64::INFINITY, f64::min);
    let del_y = del_zw(&y, &layout.w, ball, eps, GEOM_TOL)?;
    let trace_y = boundary_trace(&y, &layout.w, ball, GEOM_TOL)?;
    let empty = SimplicialSet::empty(z.ambient_dim());
    let mut relative_boundary = Vec::new();
    let mut slab_boundary = Vec::new();
    for (j, w_j) in layout.slabs()?.iter().enumerate() {
        let xj = layout.wall(j).unwrap_or(&empty);
        let xj1 = layout.wall(j + 1).unwrap_or(&empty);
        let del_in_slab = intersect_slice(&del_y, w_j, GEOM_TOL)?.set;
        let lhs_set = del_zw(&y_prime, w_j, ball, eps, GEOM_TOL)?;
        let lhs = if lhs_set.is_empty() { 0.0 } else { excess(&lhs_set, &[&del_in_slab, xj, xj1]) };
        relative_boundary.push(SlabContainment {
            slab: j,
            lhs,
            rhs: tol,
            pass: lhs <= tol,
        });
        let trace = boundary_trace(&y_prime, w_j, ball, GEOM_TOL)?;
        let lhs = if trace.is_empty() { 0.0 } else { excess(&trace, &[&trace_y, xj, xj1]) };
        slab_boundary.push(SlabContainment {
            slab: j,
            lhs,
            rhs: tol,
            pass: lhs <= tol,
        });
    }

    for (j, sc) in slabs.iter().enumerate() {
        run_stage(format!("slab[{j}]"), sc, &mut cur)?;
    }
    let pass = relative_boundary.iter().chain(&slab_boundary).all(|c| c.pass);
    Ok((
        cur,
        CompositionReport {
            stages,
            relative_boundary,
            slab_boundary,
            pass,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn disk_scenario() -> (FlowScenario, SimplicialSet) {
        let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
        let a = shapes::points(&[&[-1.0, 0.0], &[1.0, 0.0]]);
        let arc: Vec<Point> = (0..=64)
            .map(|k| {
                let x = -1.0 + 2.0 * k as f64 / 64.0;
                Point::from([x, -1.0 + (2.0 - x * x).sqrt()])
            })
            .collect();
        let z = shapes::polyline(&arc, false);
        let mut sc = FlowScenario::new(ball, DSlice::full(2), Point::from([0.0, 0.1]), a, 0.2);
        sc.rho = 0.005;
        (sc, z)
    }

    #[test]
    fn theta_formula() {
        let (mut sc, _) = disk_scenario();
        sc.rho = 1.0;
        sc.ball = ClosedBall::new([0.0, 0.0], 10.0).unwrap();
        sc.a = SimplicialSet::empty(2);
        let x = Point::from([0.0, 0.6]);
        assert!((cutoff_theta(&x, &sc) - 0.25).abs() < 1e-12);
        assert_eq!(cutoff_theta(&Point::from([0.0, 3.0]), &sc), 1.0);
        assert_eq!(cutoff_theta(&sc.p.clone(), &sc), 0.0);
        let v = vector_field(&x, &sc);
        assert!((v[1] + 0.25 * 0.5).abs() < 1e-12 && v[0] == 0.0);
    }

    #[test]
    fn disk_in_codimension_one() {
        let q = DSlice::full(3).fix(2, 0.0).unwrap();
        let b = ClosedBall::new([0.0, 0.0, 0.0], 1.0).unwrap();
        let d = build_disk(&q, &Point::from([0.0, 0.0, 0.0]), 0.1, &b).unwrap();
        assert_eq!(d.normal_axes, vec![2]);
        assert!((d.radius - 0.0875).abs() < 1e-15);
        assert!(d.interior && d.injective && d.covers);
        let near = build_disk(&q, &Point::from([0.999, 0.0, 0.0]), 0.1, &b);
        assert!(matches!(near, Err(Error::NeedCurvedDisk { .. })));
    }

    #[test]
    fn arc_collapses_onto_cone() {
        let (sc, z) = disk_scenario();
        let (_, rep) = check_lemma2(&sc, &z, &[1.0, 2.0, 5.0, 10.0, 50.0], 1e-3).unwrap();
        assert!(rep.pass, "{rep:#?}");
        assert!(rep.stationarity.exact);
        assert!(rep.ray_deviation_rate < 1e-6);
    }
}
