use proptest::prelude::*;

use reifenberg::boundary::del_zw;
use reifenberg::distance::{diagonal_limit_point, hausdorff_distance, neighborhood_contains};
use reifenberg::slice::boundary_of_slice;
use reifenberg::{shapes, ClosedBall, DSlice, Error, Interval, Point};

fn point(n: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-1.0..1.0f64, n).prop_map(Point::from)
}

fn cloud() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point(3), 1..12)
}

/// Free directions with widths drawn from a mix of finite and infinite.
fn slice() -> impl Strategy<Value = DSlice> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![3 => 0.01..10.0f64, 1 => Just(f64::INFINITY)], n).prop_map(move |w| {
            let free = w.iter().enumerate().map(|(i, &w)| {
                let iv = if w.is_finite() { Interval::new(-w / 2.0, w / 2.0) } else { Interval::unbounded() };
                (i, iv)
            });
            DSlice::new(n, free, []).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn k_width_is_monotone(w in slice()) {
        let widths: Vec<f64> = (0..=w.dim()).map(|k| w.k_width(k).unwrap()).collect();
        prop_assert_eq!(widths[0], 0.0);
        prop_assert!(widths.windows(2).all(|p| p[0] <= p[1]), "{:?}", widths);
        prop_assert!(w.k_width(w.dim() + 1).is_err());
    }

    #[test]
    fn hausdorff_is_a_metric(x in cloud(), y in cloud(), z in cloud()) {
        let dxy = hausdorff_distance(&x, &y).unwrap();
        prop_assert_eq!(dxy, hausdorff_distance(&y, &x).unwrap());
        prop_assert_eq!(hausdorff_distance(&x, &x).unwrap(), 0.0);
        let via = hausdorff_distance(&x, &z).unwrap() + hausdorff_distance(&z, &y).unwrap();
        prop_assert!(dxy <= via + 1e-12);
    }

    /// A segment from inside the unit square to outside it crosses one
    /// wall; the crossing does not depend on the fattening radius.
    #[test]
    fn relative_boundary_ignores_eps(
        inside in (0.1..0.9f64, 0.1..0.9f64),
        angle in 0.0..std::f64::consts::TAU,
        eps in 0.01..0.5f64,
    ) {
        let w = DSlice::rectangle(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let ball = ClosedBall::new([0.5, 0.5], 3.0).unwrap();
        let a = [inside.0, inside.1];
        let b = [a[0] + 2.0 * angle.cos(), a[1] + 2.0 * angle.sin()];
        let z = shapes::segment(&a, &b);
        let wide = del_zw(&z, &w, &ball, eps, 1e-9).unwrap();
        let narrow = del_zw(&z, &w, &ball, eps / 2.0, 1e-9).unwrap();
        let (pw, pn) = (wide.used_vertices(), narrow.used_vertices());
        prop_assert_eq!(pw.len(), 1);
        prop_assert_eq!(pw, pn);
    }

    #[test]
    fn slice_boundary_members_are_near_the_boundary(t in 0.0..4.0f64, off in -1e-11..1e-11f64) {
        let w = DSlice::rectangle(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let ball = ClosedBall::new([0.5, 0.5], 5.0).unwrap();
        let frame = shapes::polyline(
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]].map(Point::from),
            true,
        );
        // walk the perimeter, nudged off it by less than the tolerance
        let (side, s) = (t.floor() as usize, t.fract());
        let p = match side {
            0 => Point::from([s, off]),
            1 => Point::from([1.0 + off, s]),
            2 => Point::from([1.0 - s, 1.0 + off]),
            _ => Point::from([off, 1.0 - s]),
        };
        if boundary_of_slice(&w, &ball, &p, 1e-9) {
            prop_assert!(neighborhood_contains(&frame, &p, 1e-9));
        }
        let q = Point::from([0.25 + 0.5 * s, 0.5]);
        prop_assert!(!boundary_of_slice(&w, &ball, &q, 1e-9));
    }
}

#[test]
fn direction_widths() {
    let w = DSlice::new(2, [(0, Interval::new(0.0, 3.0)), (1, Interval::unbounded())], []).unwrap();
    assert_eq!(w.direction_width(0).unwrap(), 3.0);
    assert_eq!(w.direction_width(1).unwrap(), f64::INFINITY);
    let fixed = w.fix(1, 0.5).unwrap();
    assert!(matches!(fixed.direction_width(1), Err(Error::NotFreeDirection { index: 1 })));
}

#[test]
fn segment_through_disk_ends_on_the_sphere() {
    // the line y = 0.6 meets the unit circle at x = ±0.8
    let w = DSlice::full(2).fix(1, 0.6).unwrap();
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    assert!(boundary_of_slice(&w, &ball, &Point::from([0.8, 0.6]), 1e-9));
    assert!(boundary_of_slice(&w, &ball, &Point::from([-0.8, 0.6]), 1e-9));
    assert!(!boundary_of_slice(&w, &ball, &Point::from([0.0, 0.6]), 1e-9));
}

#[test]
fn constant_grid_limits_to_itself() {
    let x = vec![Point::from([0.3, 0.1]), Point::from([-0.2, 0.7])];
    let grid = vec![vec![x.clone(); 5]; 5];
    let lim = diagonal_limit_point(&grid, 1e-9).unwrap();
    assert_eq!(hausdorff_distance(&lim.set, &x).unwrap(), 0.0);
}
