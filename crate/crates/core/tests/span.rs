use reifenberg::cone::cone_bound_check;
use reifenberg::distance::{distance_to_set, hull_distance};
use reifenberg::measure::measure_or_infinite;
use reifenberg::span::{span, verify_properties, LChoice, NodeKind, SpanConfig, SpanResult};
use reifenberg::{shapes, ClosedBall, Point, Simplex, SimplicialSet, Tag};

fn config(n_offsets: usize) -> SpanConfig {
    SpanConfig {
        n_offsets,
        ..SpanConfig::default()
    }
}

/// Two circles of radius `r` at heights `±h`.
fn circles(r: f64, h: f64) -> SimplicialSet {
    let top = shapes::circle(&[0.0, 0.0, h], r, 48, (0, 1));
    let bottom = shapes::circle(&[0.0, 0.0, -h], r, 48, (0, 1));
    top.union(&bottom)
}

/// Unit circles at heights ±0.5, both on the sphere of radius √1.25.
fn catenoid() -> (SimplicialSet, ClosedBall) {
    (circles(1.0, 0.5), ClosedBall::new([0.0, 0.0, 0.0], 1.25f64.sqrt()).unwrap())
}

fn assert_sound(res: &SpanResult, a: &SimplicialSet, ball: &ClosedBall) {
    let v = verify_properties(res);
    assert!(v.all_pass, "{:?}", v.failures);
    for x in res.a_tilde().used_vertices() {
        if ball.on_boundary(x, 1e-9) {
            assert!(distance_to_set(a, x) <= 1e-9, "{x:?} on the sphere but not on A");
        }
    }
    let hull: Vec<Point> = a.used_vertices().into_iter().cloned().collect();
    let at = res.a_tilde();
    for s in at.simplices().iter().filter(|s| !s.has(&Tag::Exceptional)) {
        for &i in &s.vertices {
            assert!(hull_distance(&hull, &at.vertices()[i]).unwrap() <= 1e-6);
        }
    }
}

#[test]
fn catenoid_boundary_is_spanned() {
    let (a, ball) = catenoid();
    let res = span(&a, &ball, 2, LChoice::Auto, &config(64)).unwrap();
    assert_sound(&res, &a, &ball);
    assert!(res.theorem.pass);
    // the output meets both circles
    for z in [0.5, -0.5] {
        assert!(res.a_tilde().used_vertices().iter().any(|v| (v[2] - z).abs() < 1e-12));
    }
}

#[test]
fn small_catenoid_recurses() {
    // L = 4·𝓗¹(A) = 0.4π is below the width of the unit ball
    let a = circles(0.05, 0.02);
    let ball = ClosedBall::new([0.0, 0.0, 0.0], 1.0).unwrap();
    let res = span(&a, &ball, 2, LChoice::Auto, &config(32)).unwrap();
    assert!(res.root.walk().iter().any(|n| n.kind == NodeKind::Step));
    assert_sound(&res, &a, &ball);
    // every step node keeps the slab outputs within the additive bound
    for node in res.root.walk().into_iter().filter(|n| n.kind == NodeKind::Step) {
        let parts: f64 = node.children.iter().map(|c| c.output_measure).sum();
        assert!(node.output_measure <= parts * (1.0 + 1e-9) + 1e-12, "{}", node.path);
    }
    let depth = res.root.walk().iter().map(|n| n.path.matches('/').count()).max().unwrap();
    assert!(depth <= (3 + 1) * 2, "depth {depth}");
}

#[test]
fn base_nodes_reproduce_the_cone_bound() {
    let a = shapes::circle(&[0.2, 0.1], 0.3, 32, (0, 1));
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    let res = span(&a, &ball, 2, LChoice::Auto, &config(64)).unwrap();
    for node in res.root.walk().into_iter().filter(|n| n.kind == NodeKind::Base) {
        let apex = node.apex.as_ref().unwrap();
        let r = node.a_w.used_vertices().iter().map(|v| v.dist(apex)).fold(0.0, f64::max);
        if r == 0.0 {
            continue;
        }
        let cone_b = cone_bound_check(&node.a_w, apex, r, 1e-9).unwrap();
        assert!((cone_b.lhs - node.output_measure).abs() <= 1e-12 * cone_b.lhs.max(1.0));
        assert!(node.checks.b.pass);
    }
}

#[test]
fn corrupted_output_is_flagged() {
    let a = shapes::circle(&[0.0, 0.0], 0.5, 32, (0, 1));
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    let mut res = span(&a, &ball, 2, LChoice::Auto, &config(64)).unwrap();
    assert!(verify_properties(&res).all_pass);

    // a triangle reaching the sphere away from A, far outside Conv(A)
    let at = &mut res.root.a_tilde;
    let i = at.push_vertex(Point::from([0.0, 1.0]));
    let j = at.push_vertex(Point::from([0.1, 0.9]));
    let k = at.push_vertex(Point::from([-0.1, 0.9]));
    at.push_simplex(Simplex::new([i, j, k]));
    let v = verify_properties(&res);
    assert!(!v.all_pass);
    let flagged: Vec<&str> = v.failures.iter().filter(|f| f.path == "root").map(|f| f.property.as_str()).collect();
    assert!(flagged.contains(&"a"), "{flagged:?}");
    assert!(flagged.contains(&"d_hull"), "{flagged:?}");
}

#[test]
fn empty_boundary_with_given_l() {
    let a = SimplicialSet::empty(3).with_declared_dim(1);
    let ball = ClosedBall::new([0.0, 0.0, 0.0], 1.0).unwrap();
    let res = span(&a, &ball, 2, LChoice::Value(0.5), &config(16)).unwrap();
    assert_eq!(measure_or_infinite(res.a_tilde(), 2), 0.0);
    assert!(res.theorem.pass);
}

#[test]
fn results_are_reproducible() {
    let a = shapes::circle(&[0.1, -0.2], 0.05, 32, (0, 1));
    let ball = ClosedBall::new([0.0, 0.0], 1.0).unwrap();
    let run = || serde_json::to_string(&span(&a, &ball, 2, LChoice::Auto, &config(128)).unwrap()).unwrap();
    assert_eq!(run(), run());
}
