use proptest::prelude::*;

use reifenberg::slicing::{
    choose_hyperplane_family, consecutive_planes, interior_planes, pi_gamma, slab_decompose, FamilyParams,
};
use reifenberg::{shapes, ClosedBall, DSlice, Error, Point, SimplicialSet};

fn params(direction: usize, l: f64, n_offsets: usize) -> FamilyParams {
    FamilyParams {
        direction,
        l,
        n_offsets,
        m: 2,
        tol: 1e-9,
    }
}

/// Number of polygon edges crossing `{x_axis = s}`, counted independently of
/// the slicer: sign changes between consecutive vertices.
fn crossings(pts: &[Point], axis: usize, s: f64) -> usize {
    (0..pts.len())
        .filter(|&i| {
            let (a, b) = (pts[i][axis] - s, pts[(i + 1) % pts.len()][axis] - s);
            (a < 0.0) != (b < 0.0)
        })
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn folding_is_idempotent(y in -50.0..50.0f64, z in -1.0..1.0f64, t in -3.0..3.0f64, l in 0.01..5.0f64) {
        let p = Point::from([y, z]);
        let once = pi_gamma(&p, t, l, 0);
        prop_assert_eq!(once[1], z);
        let s = once[0] - t;
        prop_assert!(s >= -1e-12 && s < l + 1e-12, "signed distance {} outside [0, {})", s, l);
        let twice = pi_gamma(&once, t, l, 0);
        prop_assert!((twice[0] - once[0]).abs() <= 1e-12 * (1.0 + y.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Slabs of a random circle's family tile `W ∩ B`: consecutive slabs
    /// share their wall, each has width at most `L`, and random points of
    /// `W ∩ B` fall in some slab.
    #[test]
    fn slabs_cover_the_slice(
        center in (-0.5..0.5f64, -0.5..0.5f64),
        radius in 0.1..0.9f64,
        l in 0.15..1.0f64,
        direction in 0usize..2,
        probes in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 50),
    ) {
        let ball = ClosedBall::new([0.0, 0.0], 1.5).unwrap();
        let w = DSlice::full(2).clipped_to(&ball);
        let a = shapes::circle(&[center.0, center.1], radius, 64, (0, 1));
        let fam = choose_hyperplane_family(&a, &SimplicialSet::empty(2), &w, &ball, params(direction, l, 64)).unwrap();
        prop_assert!(fam.wall_measure <= fam.bound);
        let fam = consecutive_planes(&w, &ball, fam).unwrap();
        let slabs = slab_decompose(&w, &fam).unwrap();
        prop_assert_eq!(slabs.len(), fam.m_walls() + 1);
        for pair in slabs.windows(2) {
            prop_assert_eq!(pair[0].bounds(direction).unwrap().hi, pair[1].bounds(direction).unwrap().lo);
        }
        for s in &slabs {
            prop_assert!(s.direction_width(direction).unwrap() <= l + 1e-12);
            prop_assert!(s.k_width(1).unwrap() <= l + 1e-12);
        }
        for (x, y) in probes {
            let p = Point::from([1.5 * x, 1.5 * y]);
            if ball.contains(&p, 0.0) {
                prop_assert!(slabs.iter().any(|s| s.contains(&p, 1e-12)), "{:?} in no slab", p);
            }
        }
    }
}

#[test]
fn circle_family_counts_match_brute_force() {
    let a = shapes::circle(&[0.0, 0.0], 1.0, 256, (0, 1));
    let pts: Vec<Point> = a.vertices().to_vec();
    let ball = ClosedBall::new([0.0, 0.0], 1.5).unwrap();
    let w = DSlice::full(2).clipped_to(&ball);
    let fam = choose_hyperplane_family(&a, &SimplicialSet::empty(2), &w, &ball, params(0, 0.5, 1000)).unwrap();
    assert!(fam.wall_measure <= 4.0 * std::f64::consts::PI);
    let counted: usize = fam.interior.iter().map(|&s| crossings(&pts, 0, s)).sum();
    assert_eq!(fam.wall_measure, counted as f64);
    // the search minimizes over the same offsets the brute force sees
    let best = (0..1000)
        .map(|k| {
            let t = 0.5 * k as f64 / 1000.0;
            interior_planes(&w, &ball, 0, t, 0.5, 1e-9)
                .iter()
                .map(|&s| crossings(&pts, 0, s))
                .sum::<usize>()
        })
        .min()
        .unwrap();
    assert_eq!(fam.wall_measure, best as f64);
}

#[test]
fn segment_on_a_wall_position_is_avoided() {
    // a segment lying on x = 0, which is a wall for offset t = 0
    let a = shapes::segment(&[0.0, -0.5], &[0.0, 0.5]);
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    let w = DSlice::full(2).clipped_to(&ball);
    let fam = choose_hyperplane_family(&a, &SimplicialSet::empty(2), &w, &ball, params(0, 0.5, 16)).unwrap();
    assert_ne!(fam.offset, 0.0);
    assert_eq!(fam.wall_measure, 0.0);
    assert!(fam.interior.iter().all(|&s| s != 0.0));
}

#[test]
fn empty_family_takes_the_first_offset() {
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    let w = DSlice::full(2).clipped_to(&ball);
    let empty = SimplicialSet::empty(2);
    let fam = choose_hyperplane_family(&empty, &empty, &w, &ball, params(1, 0.3, 32)).unwrap();
    assert_eq!((fam.offset, fam.wall_measure), (0.0, 0.0));
}

#[test]
fn planes_through_the_unit_disk() {
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    let w = DSlice::full(2).clipped_to(&ball);
    assert_eq!(interior_planes(&w, &ball, 0, 0.0, 0.5, 1e-9), vec![-0.5, 0.0, 0.5]);
    assert_eq!(interior_planes(&w, &ball, 0, 0.25, 0.5, 1e-9), vec![-0.75, -0.25, 0.25, 0.75]);
    // x = ±1 only touch the circle
    assert_eq!(interior_planes(&w, &ball, 0, 0.0, 1.0, 1e-9), vec![0.0]);
    assert!(interior_planes(&w, &ball, 0, 1.5, 3.0, 1e-9).is_empty());
}

#[test]
fn single_slab_when_l_exceeds_the_extent() {
    // W is wide but W ∩ B is only 0.6 across; a segment on x = 0 rules out
    // the offset 0, leaving t = 0.5 with no plane inside the ball
    let ball = ClosedBall::new([0.0, 0.0], 0.3).unwrap();
    let w = DSlice::rectangle(&[(-2.0, 2.0), (-1.0, 1.0)]).unwrap();
    let a = shapes::segment(&[0.0, -0.1], &[0.0, 0.1]);
    let fam = choose_hyperplane_family(&a, &SimplicialSet::empty(2), &w, &ball, params(0, 1.0, 2)).unwrap();
    assert_eq!((fam.offset, fam.m_walls()), (0.5, 0));
    let fam = consecutive_planes(&w, &ball, fam).unwrap();
    assert_eq!(fam.planes, vec![-0.5, 0.5]);
    let slabs = slab_decompose(&w, &fam).unwrap();
    assert_eq!(slabs, vec![w.with_bounds(0, -0.5, 0.5).unwrap()]);

    let narrow = DSlice::rectangle(&[(-0.4, 0.4), (-0.5, 0.5)]).unwrap();
    let empty = SimplicialSet::empty(2);
    assert!(matches!(
        choose_hyperplane_family(&empty, &empty, &narrow, &ball, params(0, 0.8, 4)),
        Err(Error::Precondition(_))
    ));
}
