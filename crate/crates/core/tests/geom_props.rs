use mdp_core::certify::curve_length;
use mdp_core::curve_builder::{Curve, Provenance};
use mdp_core::geom::*;
use proptest::prelude::*;

fn brute_diameter(pts: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max(a.dist(*b));
        }
    }
    best
}

fn brute_half_width(pts: &[Point]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = b - a;
            let n = Point::new(-d.y, d.x) * (1.0 / d.norm());
            let lo = pts.iter().map(|&p| n.dot(p)).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|&p| n.dot(p)).fold(f64::NEG_INFINITY, f64::max);
            best = best.min((hi - lo) / 2.0);
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

fn points(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

/// Points on a line with perturbations far below the tolerance.
fn nearly_collinear() -> impl Strategy<Value = Vec<Point>> {
    (
        prop::collection::vec((0.0..1.0f64, -1e-13..1e-13f64), 2..30),
        0.0..std::f64::consts::PI,
    )
        .prop_map(|(v, angle)| {
            let (s, c) = angle.sin_cos();
            v.into_iter()
                .map(|(t, h)| Point::new(0.3 + t * c - h * s, 0.7 + t * s + h * c))
                .collect()
        })
}

/// Small integer lattice points, rich in exact collinearities.
fn lattice() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0..6i32, 0..6i32), 1..25).prop_map(|v| {
        v.into_iter()
            .map(|(x, y)| Point::new(x as f64 / 9.0, y as f64 / 7.0))
            .collect()
    })
}

fn any_points() -> impl Strategy<Value = Vec<Point>> {
    prop_oneof![points(40), nearly_collinear(), lattice()]
}

proptest! {
    #[test]
    fn hull_contains_input_and_is_idempotent(pts in any_points()) {
        let h = convex_hull(&pts).unwrap();
        let scale = PointSet::new(pts.clone()).unwrap().scale();
        for &p in &pts {
            prop_assert!(h.contains(p, EPS * scale), "{p:?} outside {:?}", h.vertices());
        }
        for v in h.vertices() {
            prop_assert!(pts.contains(v));
        }
        let again = convex_hull(h.vertices()).unwrap();
        prop_assert_eq!(again.rank(), h.rank());
        prop_assert_eq!(again.vertices().len(), h.vertices().len());
    }

    #[test]
    fn diameter_matches_brute_force(pts in any_points()) {
        let e = PointSet::new(pts).unwrap();
        let brute = brute_diameter(e.points());
        let (a, b, d) = diameter_pair(e.hull());
        prop_assert!((d - brute).abs() <= 1e-12 * brute.max(1.0), "{d} vs {brute}");
        prop_assert_eq!(a.dist(b), d);
        prop_assert!(e.points().contains(&a) && e.points().contains(&b));
    }

    #[test]
    fn width_matches_pair_direction_oracle(pts in any_points()) {
        let e = PointSet::new(pts).unwrap();
        let fit = min_width_strip(e.points()).unwrap();
        let oracle = brute_half_width(e.points());
        let tol = EPS * e.scale();
        prop_assert!((fit.half_width() - oracle).abs() <= tol, "{} vs {oracle}", fit.half_width());
        for &p in e.points() {
            prop_assert!(fit.dist_to_center(p) <= fit.half_width() + tol);
        }
    }

    #[test]
    fn points_project_into_diameter_segment(pts in any_points()) {
        let e = PointSet::new(pts).unwrap();
        let (a, b, d) = diameter_pair(e.hull());
        prop_assume!(d > 0.0);
        let seg = Segment::new(a, b);
        for &p in e.points() {
            let t = project_onto_segment_line(p, &seg).unwrap();
            prop_assert!((-EPS..=1.0 + EPS).contains(&t), "t = {t}");
        }
    }

    #[test]
    fn beta_hat_range_and_area_sandwich(pts in any_points()) {
        let h = convex_hull(&pts).unwrap();
        let b = hull_beta_hat(&h);
        prop_assert!((0.0..=3f64.sqrt() / 2.0 + EPS).contains(&b), "beta_hat = {b}");
        if h.rank() == Rank::Polygon {
            let d = h.diameter();
            let area = hull_area(&h);
            let tol = EPS * d * d;
            prop_assert!(0.5 * b * d * d <= area + tol);
            prop_assert!(area <= 2.0 * b * d * d + tol);
        } else {
            prop_assert_eq!(b, 0.0);
        }
    }

    #[test]
    fn segment_distance_is_symmetric_and_zero_on_crossing(
        a in (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64),
        b in (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64),
    ) {
        let s = Segment::new(Point::new(a.0, a.1), Point::new(a.2, a.3));
        let t = Segment::new(Point::new(b.0, b.1), Point::new(b.2, b.3));
        let d = dist_segment_segment(&s, &t);
        prop_assert_eq!(d, dist_segment_segment(&t, &s));
        if segments_intersect(&s, &t) {
            prop_assert_eq!(d, 0.0);
        } else {
            let sampled = (0..=50)
                .map(|i| dist_point_segment(s.at(i as f64 / 50.0), &t))
                .fold(f64::INFINITY, f64::min);
            prop_assert!(d <= sampled + 1e-12);
        }
    }

    #[test]
    fn union_length_ignores_repeats_and_orientation(
        segs in prop::collection::vec((0..5i32, 0..5i32, 0..5i32, 0..5i32), 1..12)
    ) {
        let mut once = Curve::default();
        let mut twice = Curve::default();
        let mut listed = 0.0;
        for &(a, b, c, d) in &segs {
            let s = Segment::new(Point::new(a as f64, b as f64), Point::new(c as f64, d as f64));
            listed += s.length();
            once.push(s, Provenance::Bridge(String::new()));
            twice.push(Segment::new(s.q, s.p), Provenance::Bridge(String::new()));
            twice.push(s, Provenance::Bridge(String::new()));
        }
        let l = curve_length(&once);
        prop_assert!((l - curve_length(&twice)).abs() <= 1e-9);
        prop_assert!(l <= listed + 1e-9);
    }
}

#[test]
fn near_vertical_run_keeps_extreme_points() {
    // x coordinates differ in the last bit, which reorders the lexicographic sort
    let pts = vec![
        Point::new(0.7777777777777778, 0.0),
        Point::new(0.7777777777777777, 0.04276668660663896),
        Point::new(0.7777777777777778, 0.06415002990995844),
        Point::new(0.8333333333333334, 0.09622504486493764),
        Point::new(0.7839506172839507, 0.010691671651659736),
    ];
    let e = PointSet::new(pts).unwrap();
    assert!((e.diameter() - brute_diameter(e.points())).abs() < 1e-15);
    assert!(e.hull().contains(Point::new(0.7777777777777778, 0.0), 0.0));
}
