//! Randomized property suites driven by a seeded ChaCha stream.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use reifenberg::cone::cone_bound_check;
use reifenberg::distance::hausdorff_distance;
use reifenberg::measure::{eilenberg_check, measure_or_infinite, Hyperplane};
use reifenberg::shapes;
use reifenberg::slicing::{choose_hyperplane_family, FamilyParams};
use reifenberg::span::{span, LChoice, SpanConfig};
use reifenberg::{ClosedBall, DSlice, Point, Simplex, SimplicialSet};

/// Outcome of one suite: how many trials ran and the worst observed ratio
/// `lhs / rhs` (≤ 1 when the inequality holds).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_ratio: f64,
    pub pass: bool,
    /// Per-trial notes for failed trials.
    pub failed: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            trials: 0,
            failures: 0,
            worst_ratio: 0.0,
            pass: true,
            failed: Vec::new(),
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, ok: bool, note: impl FnOnce() -> String) {
        self.trials += 1;
        let ratio = if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
        self.worst_ratio = self.worst_ratio.max(ratio);
        if !ok {
            self.failures += 1;
            self.pass = false;
            self.failed.push(note());
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the ball `N(center, r)` by rejection.
pub fn point_in_ball(rng: &mut impl Rng, center: &Point, r: f64) -> Point {
    let n = center.dim();
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm2: f64 = v.iter().map(|c| c * c).sum();
        if norm2 <= 1.0 {
            return Point::new(center.coords().iter().zip(v).map(|(c, x)| c + r * x));
        }
    }
}

/// Open polyline with `k` vertices uniform in `N(center, r)`.
pub fn random_polyline(rng: &mut impl Rng, center: &Point, r: f64, k: usize) -> SimplicialSet {
    let pts: Vec<Point> = (0..k).map(|_| point_in_ball(rng, center, r)).collect();
    shapes::polyline(&pts, false)
}

/// Closed star-shaped polygon in the plane around `center` with radii in
/// `[r_min, r_max]`.
pub fn random_star_polygon(rng: &mut impl Rng, center: [f64; 2], r_min: f64, r_max: f64, k: usize) -> SimplicialSet {
    let phase = rng.gen_range(0.0..2.0 * PI);
    let pts: Vec<Point> = (0..k)
        .map(|i| {
            let t = phase + 2.0 * PI * (i as f64 + rng.gen_range(0.0..0.8)) / k as f64;
            let r = rng.gen_range(r_min..r_max);
            Point::from([center[0] + r * t.cos(), center[1] + r * t.sin()])
        })
        .collect();
    shapes::polyline(&pts, true)
}

/// Triangulated height field over a jittered `g × g` grid in the unit
/// square, lifted into R^3.
pub fn random_surface(rng: &mut impl Rng, g: usize) -> SimplicialSet {
    let g = g.max(2);
    let step = 1.0 / (g - 1) as f64;
    let mut vertices = Vec::with_capacity(g * g);
    for i in 0..g {
        for j in 0..g {
            let jitter = |rng: &mut dyn rand::RngCore, k: usize| {
                if k == 0 || k == g - 1 {
                    0.0
                } else {
                    rng.gen_range(-0.3..0.3) * step
                }
            };
            let x = i as f64 * step + jitter(rng, i);
            let y = j as f64 * step + jitter(rng, j);
            vertices.push(Point::from([x, y, rng.gen_range(-0.5..0.5)]));
        }
    }
    let idx = |i: usize, j: usize| i * g + j;
    let mut simplices = Vec::new();
    for i in 0..g - 1 {
        for j in 0..g - 1 {
            simplices.push(Simplex::new([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]));
            simplices.push(Simplex::new([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]));
        }
    }
    SimplicialSet::from_parts(3, vertices, simplices).expect("grid triangulation is valid")
}

/// Cone bound `𝓗²(C(X,p)) ≤ 8·r·𝓗¹(X)` for random polylines in R^3.
pub fn cone_suite(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = rng(seed);
    let mut rep = SuiteReport::new("cone_bound");
    for t in 0..trials {
        let p = point_in_ball(&mut rng, &Point::origin(3), 2.0);
        let r = rng.gen_range(0.1..2.0);
        let k = rng.gen_range(2..=12);
        let x = random_polyline(&mut rng, &p, r, k);
        match cone_bound_check(&x, &p, r, 1e-9) {
            Ok(b) => rep.record(b.lhs, b.rhs, b.pass, || format!("trial {t}: {} > {}", b.lhs, b.rhs)),
            Err(e) => rep.record(f64::INFINITY, 0.0, false, || format!("trial {t}: {e}")),
        }
    }
    rep
}

/// Slicing inequality `½∫𝓗^{m−1}(X_h) dh ≤ 𝓗^m(X)·(1 + slack)` for random
/// surfaces in R^3 and random polylines in R^2, plus the unit square.
pub fn eilenberg_suite(seed: u64, surfaces: usize, polylines: usize, slack: f64) -> SuiteReport {
    let mut rng = rng(seed);
    let mut rep = SuiteReport::new("eilenberg");
    let run = |rep: &mut SuiteReport, x: &SimplicialSet, h: Hyperplane, label: String| {
        match eilenberg_check(x, h, 256, slack) {
            Ok(c) => rep.record(c.lhs, c.rhs, c.pass, || format!("{label}: {} > {}", c.lhs, c.rhs)),
            Err(e) => rep.record(f64::INFINITY, 0.0, false, || format!("{label}: {e}")),
        }
    };
    let square = shapes::square(&[0.0, 0.0], 1.0);
    run(&mut rep, &square, Hyperplane { axis: 0, offset: 0.0 }, "unit square".into());
    for t in 0..surfaces {
        let g = rng.gen_range(2..=6);
        let x = random_surface(&mut rng, g);
        let h = Hyperplane {
            axis: rng.gen_range(0..3),
            offset: rng.gen_range(-0.5..1.0),
        };
        run(&mut rep, &x, h, format!("surface {t}"));
    }
    for t in 0..polylines {
        let k = rng.gen_range(2..=15);
        let x = random_polyline(&mut rng, &Point::origin(2), 1.0, k);
        let h = Hyperplane {
            axis: rng.gen_range(0..2),
            offset: rng.gen_range(-1.0..1.0),
        };
        run(&mut rep, &x, h, format!("polyline {t}"));
    }
    rep
}

/// Wall-count bound `Σ #(A ∩ Σ_j) ≤ 2·L^{−1}·𝓗¹(A∩W)` for random closed
/// polygons in the plane.
pub fn slicing_suite(seed: u64, trials: usize, ls: &[f64], n_offsets: usize) -> SuiteReport {
    let mut rng = rng(seed);
    let mut rep = SuiteReport::new("slicing_bound");
    let ball = ClosedBall::new([0.0, 0.0], 1.5).expect("valid ball");
    let w = DSlice::full(2).clipped_to(&ball);
    let empty = SimplicialSet::empty(2);
    for t in 0..trials {
        let k = rng.gen_range(3..=24);
        let a = random_star_polygon(&mut rng, [0.0, 0.0], 0.2, 1.4, k);
        for &l in ls {
            let params = FamilyParams {
                direction: rng.gen_range(0..2),
                l,
                n_offsets,
                m: 2,
                tol: 1e-9,
            };
            match choose_hyperplane_family(&a, &empty, &w, &ball, params) {
                Ok(f) => rep.record(f.wall_measure, f.bound, f.wall_measure <= f.bound, || {
                    format!("trial {t}, L = {l}: {} > {}", f.wall_measure, f.bound)
                }),
                Err(e) => rep.record(f64::INFINITY, 0.0, false, || format!("trial {t}, L = {l}: {e}")),
            }
        }
    }
    rep
}

/// Symmetry and the triangle inequality for the Hausdorff distance on
/// random point clouds.
pub fn hausdorff_suite(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = rng(seed);
    let mut rep = SuiteReport::new("hausdorff_metric");
    let cloud = |rng: &mut ChaCha8Rng| -> Vec<Point> {
        let k = rng.gen_range(1..=20);
        (0..k).map(|_| point_in_ball(rng, &Point::origin(3), 1.0)).collect()
    };
    for t in 0..trials {
        let (x, y, z) = (cloud(&mut rng), cloud(&mut rng), cloud(&mut rng));
        let dxy = hausdorff_distance(&x, &y).unwrap();
        let dyx = hausdorff_distance(&y, &x).unwrap();
        let dxz = hausdorff_distance(&x, &z).unwrap();
        let dzy = hausdorff_distance(&z, &y).unwrap();
        let ok = dxy == dyx && dxy <= dxz + dzy + 1e-12;
        rep.record(dxy, dxz + dzy, ok, || format!("trial {t}: d(x,y) = {dxy}, d(y,x) = {dyx}"));
    }
    rep
}

/// End-to-end span of random polygons: every node property and the
/// isoperimetric inequality.
pub fn span_suite(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = rng(seed);
    let mut rep = SuiteReport::new("span");
    let ball = ClosedBall::new([0.0, 0.0], 1.5).expect("valid ball");
    let cfg = SpanConfig {
        n_offsets: 64,
        ..SpanConfig::default()
    };
    for t in 0..trials {
        let k = rng.gen_range(3..=16);
        let r_max = rng.gen_range(0.1..1.4);
        let a = random_star_polygon(&mut rng, [0.0, 0.0], 0.05, r_max, k);
        match span(&a, &ball, 2, LChoice::Auto, &cfg) {
            Ok(res) => {
                let v = reifenberg::span::verify_properties(&res);
                let lhs = measure_or_infinite(res.a_tilde(), 2);
                rep.record(res.theorem.lhs, res.theorem.rhs, v.all_pass, || {
                    format!("trial {t}: {} failures, H^2 = {lhs}", v.failures.len())
                });
            }
            Err(e) => rep.record(f64::INFINITY, 0.0, false, || format!("trial {t}: {e}")),
        }
    }
    rep
}
