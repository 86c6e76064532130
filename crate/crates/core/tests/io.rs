use proptest::prelude::*;

use reifenberg::io::{from_json, from_obj, from_off, to_json, to_obj, to_off};
use reifenberg::measure::measure_or_infinite;
use reifenberg::{Point, Simplex, SimplicialSet, Tag};

/// Random triangle soup in R^n with some simplices tagged exceptional.
fn soup(n: usize) -> impl Strategy<Value = SimplicialSet> {
    let vertex = prop::collection::vec(-10.0..10.0f64, n).prop_map(Point::from);
    (prop::collection::vec(vertex, 3..20), prop::collection::vec((any::<prop::sample::Index>(), any::<bool>()), 1..12))
        .prop_map(move |(vertices, picks)| {
            let k = vertices.len();
            let simplices = picks
                .iter()
                .map(|(ix, exc)| {
                    let i = ix.index(k);
                    let s = Simplex::new([i, (i + 1) % k, (i + 2) % k]);
                    if *exc {
                        s.tagged(Tag::Exceptional)
                    } else {
                        s
                    }
                })
                .collect();
            SimplicialSet::from_parts(n, vertices, simplices).unwrap()
        })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn json_round_trip_is_exact(x in (2usize..=4).prop_flat_map(soup)) {
        let back = from_json(&to_json(&x)).unwrap();
        prop_assert_eq!(&back, &x);
    }

    #[test]
    fn obj_round_trip_keeps_measure(x in soup(3)) {
        let back = from_obj(&to_obj(&x).unwrap()).unwrap();
        prop_assert!(close(measure_or_infinite(&back, 2), measure_or_infinite(&x, 2)));
    }

    #[test]
    fn off_round_trip_keeps_measure(x in (2usize..=4).prop_flat_map(soup)) {
        let back = from_off(&to_off(&x)).unwrap();
        prop_assert_eq!(back.ambient_dim(), x.ambient_dim());
        prop_assert!(close(measure_or_infinite(&back, 2), measure_or_infinite(&x, 2)));
    }
}

#[test]
fn malformed_inputs_are_parse_errors() {
    assert_eq!(from_json("{\"n\": 2, \"vertices\": [[0, 1]").unwrap_err().kind(), "Parse");
    assert!(from_off("OFF\n1 0 0\n").is_err());
    assert!(from_obj("f 1 2 3\n").is_err());
}
