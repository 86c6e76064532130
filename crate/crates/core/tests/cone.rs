use std::f64::consts::PI;

use proptest::prelude::*;

use reifenberg::cone::{cone, cone_bound_check, pick_cone_point};
use reifenberg::measure::{measure_or_infinite, measure_simplicial};
use reifenberg::{shapes, ClosedBall, DSlice, Point, Simplex, SimplicialSet};

fn in_ball(center: [f64; 3], r: f64) -> impl Strategy<Value = Point> {
    (prop::array::uniform3(-1.0..1.0f64), 0.0..1.0f64).prop_map(move |(v, s)| {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-12);
        Point::from([0, 1, 2].map(|i| center[i] + r * s * v[i] / norm))
    })
}

fn cross_norm(u: &Point, v: &Point) -> f64 {
    let c = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

fn triple(u: &Point, v: &Point, w: &Point) -> f64 {
    (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The fan over a polyline is a union of triangles with apex `p`.
    #[test]
    fn polyline_fans_match_triangle_areas(
        p in in_ball([0.0; 3], 2.0),
        r in 0.1..2.0f64,
        offsets in prop::collection::vec(in_ball([0.0; 3], 1.0), 2..10),
    ) {
        let pts: Vec<Point> = offsets.iter().map(|o| p.add(&o.scale(r))).collect();
        let x = shapes::polyline(&pts, false);
        let fan: f64 = pts
            .windows(2)
            .map(|s| 0.5 * cross_norm(&s[0].sub(&p), &s[1].sub(&p)))
            .sum::<f64>()
            / PI;
        let c = cone(&x, &p);
        prop_assert!((measure_or_infinite(&c, 2) - fan).abs() <= 1e-12 * fan.max(1.0));
        let b = cone_bound_check(&x, &p, r, 1e-9).unwrap();
        prop_assert!(b.pass && b.lhs <= 8.0 * r * measure_simplicial(&x, 1).unwrap().value + 1e-9);
    }

    /// `m = 3`: cones over triangle soups are tetrahedra with apex `p`.
    #[test]
    fn surface_cones_obey_the_bound(
        p in in_ball([0.0; 3], 2.0),
        r in 0.1..2.0f64,
        tris in prop::collection::vec(prop::array::uniform3(in_ball([0.0; 3], 1.0)), 1..6),
    ) {
        let vertices: Vec<Point> = tris.iter().flatten().map(|o| p.add(&o.scale(r))).collect();
        let simplices = (0..tris.len()).map(|i| Simplex::new([3 * i, 3 * i + 1, 3 * i + 2])).collect();
        let x = SimplicialSet::from_parts(3, vertices.clone(), simplices).unwrap();
        let vol: f64 = vertices
            .chunks(3)
            .map(|t| triple(&t[0].sub(&p), &t[1].sub(&p), &t[2].sub(&p)) / 6.0)
            .sum::<f64>()
            / (4.0 * PI / 3.0);
        let c = cone(&x, &p);
        prop_assert!((measure_or_infinite(&c, 3) - vol).abs() <= 1e-12 * vol.max(1.0));
        let b = cone_bound_check(&x, &p, r, 1e-9).unwrap();
        prop_assert_eq!(b.m, 3);
        prop_assert!(b.pass, "{} > {}", b.lhs, b.rhs);
    }

    #[test]
    fn cone_contains_base_and_apex(
        p in in_ball([0.0; 3], 1.0),
        pts in prop::collection::vec(in_ball([0.0; 3], 1.0), 2..8),
    ) {
        let x = shapes::polyline(&pts, true);
        let c = cone(&x, &p);
        prop_assert!(c.used_vertices().contains(&&p));
        for s in x.simplices() {
            let seg: Vec<&Point> = x.points_of(s);
            prop_assert!(c.simplices().iter().any(|t| c.points_of(t) == seg));
        }
        // coning twice adds only flat simplices
        let cc = cone(&c, &p);
        let (once, twice) = (measure_or_infinite(&c, 2), measure_or_infinite(&cc, 2));
        prop_assert!((once - twice).abs() <= 1e-12 * once.max(1.0));
    }
}

#[test]
fn unit_circle_fan() {
    let x = shapes::circle(&[0.0, 0.0, 0.0], 1.0, 256, (0, 1));
    let b = cone_bound_check(&x, &Point::origin(3), 1.0, 1e-9).unwrap();
    let inscribed = 128.0 * (2.0 * PI / 256.0).sin() / PI;
    assert!((b.lhs - inscribed).abs() < 1e-12);
    // 𝓗¹ of the 256-gon is half its perimeter
    assert!((b.rhs - 8.0 * 256.0 * (PI / 256.0).sin()).abs() < 1e-9);
    assert!(b.pass);
}

#[test]
fn points_are_out_of_domain() {
    let x = shapes::points(&[&[1.0, 0.0]]);
    let b = cone_bound_check(&x, &Point::origin(2), 1.0, 1e-9).unwrap();
    assert!(b.skipped && b.pass);
}

#[test]
fn apex_falls_back_to_the_slice_interior() {
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    let w = DSlice::rectangle(&[(0.0, 0.5), (-0.5, 0.5)]).unwrap();
    let a = shapes::points(&[&[0.2, 0.1]]);
    let mut s = a.clone();
    s.tag_all(reifenberg::Tag::Exceptional);
    for apex in [
        pick_cone_point(&a, &s, &w, &ball).unwrap(),
        pick_cone_point(&SimplicialSet::empty(2), &SimplicialSet::empty(2), &w, &ball).unwrap(),
    ] {
        assert!(w.contains_relint(&apex, 0.0) && ball.contains_interior(&apex, 0.0));
    }
}
