mod common;

use approx::assert_abs_diff_eq;
use bicombing_core::{
    check_axioms, distance, evaluate_bicombing, make_lp_space, make_product, sample_segment,
    BicombedSpace, Error, Exponent, HyperbolicPlane, MetricTree, MetricTreeSpec, NormedSpaceSpec,
    Point, Quadruple, Result, Space,
};
use common::pt;

fn lp(n: usize, p: Exponent) -> Space {
    make_lp_space(&NormedSpaceSpec { n, p }).unwrap()
}

/// Euclidean plane whose segments are traversed at speed `sqrt(t)`.
struct Bent(Space);

impl BicombedSpace for Bent {
    fn describe(&self) -> String {
        "bent plane".into()
    }
    fn canonicalize(&self, p: &Point) -> Result<Point> {
        self.0.canonicalize(p)
    }
    fn dist(&self, x: &Point, y: &Point) -> f64 {
        self.0.dist(x, y)
    }
    fn combing(&self, x: &Point, y: &Point, t: f64) -> Point {
        self.0.combing(x, y, t.sqrt())
    }
}

#[test]
fn euclidean_distance_examples() {
    let s = Space::euclidean(2);
    assert_eq!(distance(&s, &pt(&[0.0, 0.0]), &pt(&[3.0, 4.0])).unwrap(), 5.0);
    assert_eq!(distance(&s, &pt(&[0.3, -7.0]), &pt(&[0.3, -7.0])).unwrap(), 0.0);
}

#[test]
fn hyperbolic_unit_distance() {
    let s = Space::Hyperbolic(HyperbolicPlane);
    let x = Point::Hyperboloid([1.0, 0.0, 0.0]);
    let y = Point::Hyperboloid([1f64.cosh(), 1f64.sinh(), 0.0]);
    assert_abs_diff_eq!(distance(&s, &x, &y).unwrap(), 1.0, epsilon = 1e-14);
    assert_eq!(distance(&s, &x, &x).unwrap(), 0.0);
}

#[test]
fn mismatched_point_is_rejected() {
    let s = Space::euclidean(2);
    let err = distance(&s, &pt(&[0.0, 0.0]), &Point::Hyperboloid([1.0, 0.0, 0.0])).unwrap_err();
    assert!(matches!(err, Error::PointMismatch { .. }), "{err}");
    assert!(distance(&s, &pt(&[0.0, 0.0]), &pt(&[1.0])).is_err());
}

#[test]
fn bicombing_examples() {
    let s = Space::euclidean(2);
    let m = evaluate_bicombing(&s, &pt(&[0.0, 0.0]), &pt(&[2.0, 2.0]), 0.5).unwrap();
    assert_eq!(m, pt(&[1.0, 1.0]));
    let x = pt(&[0.4, -1.2]);
    assert_eq!(evaluate_bicombing(&s, &x, &x, 0.37).unwrap(), x);
    assert!(evaluate_bicombing(&s, &x, &x, 1.5).is_err());
    assert!(evaluate_bicombing(&s, &x, &x, -0.1).is_err());

    let h = Space::Hyperbolic(HyperbolicPlane);
    let p = HyperbolicPlane::from_polar(0.8, 2.0);
    assert_eq!(evaluate_bicombing(&h, &p, &p, 0.37).unwrap(), p);
}

#[test]
fn tree_path_quarter_point() {
    let spec = MetricTreeSpec::path(&["a", "m", "b"], &[1.5, 2.5]);
    let tree = MetricTree::new(&spec).unwrap();
    let (a, b) = (tree.node_point_by_name("a").unwrap(), tree.node_point_by_name("b").unwrap());
    let s = Space::Tree(tree);
    let q = evaluate_bicombing(&s, &a, &b, 0.25).unwrap();
    assert_abs_diff_eq!(s.dist(&a, &q), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(s.dist(&q, &b), 3.0, epsilon = 1e-15);
    assert_eq!(q, Point::Tree { edge: 0, offset: 1.0 });
}

#[test]
fn sample_segment_examples() {
    let s = Space::euclidean(2);
    let (x, y) = (pt(&[0.0, 0.0]), pt(&[1.0, 0.0]));
    assert_eq!(sample_segment(&s, &x, &y, 1).unwrap(), vec![x.clone(), y.clone()]);
    let expected: Vec<Point> = [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|&a| pt(&[a, 0.0])).collect();
    assert_eq!(sample_segment(&s, &x, &y, 4).unwrap(), expected);
    assert_eq!(sample_segment(&s, &x, &x, 3).unwrap(), vec![x.clone(); 4]);
    assert!(sample_segment(&s, &x, &y, 0).is_err());
}

#[test]
fn axioms_hold_on_hand_worked_quadruple() {
    // t -> |(1-t)u + tv| with u = x - x', v = y - y' is convex.
    let s = Space::euclidean(2);
    let q = Quadruple::new(pt(&[0.0, 0.0]), pt(&[4.0, 0.0]), pt(&[0.0, 3.0]), pt(&[0.0, -3.0]));
    let report = check_axioms(&s, &[q], 16, 1e-9).unwrap();
    assert!(report.passed);
    assert!(report.max_convexity_violation <= 1e-12);
    assert_eq!(report.max_endpoint_error, 0.0);
}

#[test]
fn constant_quadruple_has_no_error() {
    let s = Space::Hyperbolic(HyperbolicPlane);
    let p = HyperbolicPlane::from_polar(1.3, 0.4);
    let q = Quadruple::new(p.clone(), p.clone(), p.clone(), p);
    let report = check_axioms(&s, &[q], 16, 1e-9).unwrap();
    assert_eq!(report.max_endpoint_error, 0.0);
    assert_eq!(report.max_idempotence_error, 0.0);
    assert_eq!(report.max_convexity_violation, 0.0);
    assert!(report.worst_witness.is_none());
}

#[test]
fn broken_bicombing_is_caught() {
    let s = Bent(Space::euclidean(2));
    let q = Quadruple::new(pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 0.0]), pt(&[0.0, 0.0]));
    let report = check_axioms(&s, &[q], 16, 1e-9).unwrap();
    assert!(!report.passed);
    assert!(report.max_convexity_violation > 1e-3);
    assert!(report.worst_witness.is_some());
}

#[test]
fn check_axioms_rejects_coarse_grid() {
    let s = Space::euclidean(1);
    let q = Quadruple::new(pt(&[0.0]), pt(&[1.0]), pt(&[2.0]), pt(&[3.0]));
    assert!(check_axioms(&s, &[q], 1, 1e-9).is_err());
}

#[test]
fn lp_examples() {
    let l2 = lp(2, Exponent::Finite(2.0));
    assert_eq!(l2.dist(&pt(&[0.0, 0.0]), &pt(&[1.0, 1.0])), 2f64.sqrt());
    let linf = lp(2, Exponent::INFINITY);
    assert_eq!(linf.dist(&pt(&[0.0, 0.0]), &pt(&[1.0, -2.0])), 2.0);
    let l1 = lp(3, Exponent::Finite(1.0));
    assert_eq!(l1.combing(&pt(&[0.0, 0.0, 0.0]), &pt(&[2.0, 0.0, 2.0]), 0.5), pt(&[1.0, 0.0, 1.0]));
    assert!(make_lp_space(&NormedSpaceSpec { n: 2, p: Exponent::Finite(0.5) }).is_err());
    assert!(make_lp_space(&NormedSpaceSpec { n: 0, p: Exponent::Finite(2.0) }).is_err());
}

#[test]
fn hyperbolic_midpoint_through_origin() {
    let s = Space::Hyperbolic(HyperbolicPlane);
    let x = Point::Hyperboloid([1.0, 0.0, 0.0]);
    let y = Point::Hyperboloid([2f64.cosh(), 2f64.sinh(), 0.0]);
    let Point::Hyperboloid(m) = s.combing(&x, &y, 0.5) else { panic!("wrong variant") };
    assert_abs_diff_eq!(m[0], 1f64.cosh(), epsilon = 1e-12);
    assert_abs_diff_eq!(m[1], 1f64.sinh(), epsilon = 1e-12);
    assert_abs_diff_eq!(m[2], 0.0, epsilon = 1e-12);
}

#[test]
fn hyperbolic_rejects_off_sheet_points() {
    let s = Space::Hyperbolic(HyperbolicPlane);
    assert!(s.canonicalize(&Point::Hyperboloid([1.0, 0.5, 0.0])).is_err());
    assert!(s.canonicalize(&Point::Hyperboloid([-1.0, 0.0, 0.0])).is_err());
}

#[test]
fn star_tree_examples() {
    let (s, leaves) = common::star(3);
    assert_eq!(s.dist(&leaves[0], &leaves[1]), 2.0);
    let tree = s.as_tree().unwrap();
    let center = tree.node_point_by_name("c").unwrap();
    assert_eq!(s.combing(&leaves[0], &leaves[1], 0.5), center);
}

#[test]
fn tree_path_three_quarter_point() {
    let tree = MetricTree::new(&MetricTreeSpec::path(&["a", "b", "c"], &[1.0, 2.0])).unwrap();
    let (a, c) = (tree.node_point_by_name("a").unwrap(), tree.node_point_by_name("c").unwrap());
    let s = Space::Tree(tree);
    assert_eq!(s.combing(&a, &c, 0.75), Point::Tree { edge: 1, offset: 1.25 });
}

#[test]
fn malformed_trees_are_rejected() {
    let cyc = MetricTreeSpec {
        nodes: vec!["a".into(), "b".into(), "c".into()],
        edges: vec![("a".into(), "b".into(), 1.0), ("b".into(), "c".into(), 1.0), ("c".into(), "a".into(), 1.0)],
    };
    assert!(MetricTree::new(&cyc).is_err());
    let split = MetricTreeSpec {
        nodes: vec!["a".into(), "b".into(), "c".into(), "d".into()],
        edges: vec![("a".into(), "b".into(), 1.0), ("a".into(), "b".into(), 1.0), ("c".into(), "d".into(), 1.0)],
    };
    assert!(MetricTree::new(&split).is_err());
    assert!(MetricTree::new(&MetricTreeSpec::path(&["a", "b"], &[0.0])).is_err());
}

#[test]
fn product_of_lines_matches_plane() {
    let line = lp(1, Exponent::Finite(2.0));
    let prod = make_product(line.clone(), line);
    let plane = Space::euclidean(2);
    let pairs = [([0.0, 0.0], [3.0, 4.0]), ([-1.5, 2.0], [0.25, -0.75]), ([1.0, 1.0], [1.0, 1.0])];
    for (a, b) in pairs {
        let pa = Point::product(pt(&a[..1]), pt(&a[1..]));
        let pb = Point::product(pt(&b[..1]), pt(&b[1..]));
        assert_eq!(prod.dist(&pa, &pb), plane.dist(&pt(&a), &pt(&b)));
        let Point::Product(l, r) = prod.combing(&pa, &pb, 0.3) else { panic!() };
        let Point::Euclidean(m) = plane.combing(&pt(&a), &pt(&b), 0.3) else { panic!() };
        assert_eq!((*l, *r), (pt(&m[..1]), pt(&m[1..])));
    }
}

#[test]
fn tree_times_line_combines_factor_distances() {
    let (tree, leaves) = common::star(3);
    let line = Space::euclidean(1);
    let prod = make_product(tree.clone(), line.clone());
    let center = tree.as_tree().unwrap().node_point_by_name("c").unwrap();
    let cases = [
        (leaves[0].clone(), 0.0, leaves[1].clone(), 1.0),
        (center.clone(), -2.0, leaves[2].clone(), 2.0),
        (Point::Tree { edge: 1, offset: 0.25 }, 0.5, Point::Tree { edge: 1, offset: 0.75 }, 0.5),
    ];
    for (a, u, b, v) in cases {
        let expected = tree.dist(&a, &b).hypot(line.dist(&pt(&[u]), &pt(&[v])));
        let got = prod.dist(&Point::product(a, pt(&[u])), &Point::product(b, pt(&[v])));
        assert_abs_diff_eq!(got, expected, epsilon = 1e-15);
    }
}

#[test]
fn tree_times_hyperbolic_passes_axioms() {
    use rand::{Rng, SeedableRng};
    let (tree, _) = common::star(4);
    let prod = make_product(tree, Space::Hyperbolic(HyperbolicPlane));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut point = || {
        let edge = rng.gen_range(0..4);
        let t = Point::Tree { edge, offset: rng.gen_range(0.0..1.0) };
        let h = HyperbolicPlane::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.3));
        Point::product(t, h)
    };
    let quads: Vec<Quadruple> = (0..50).map(|_| Quadruple::new(point(), point(), point(), point())).collect();
    let report = check_axioms(&prod, &quads, 16, 1e-7).unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn hyperbolic_axioms_on_fine_grid() {
    use rand::{Rng, SeedableRng};
    let s = Space::Hyperbolic(HyperbolicPlane);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut point = || HyperbolicPlane::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.3));
    let quads: Vec<Quadruple> = (0..100).map(|_| Quadruple::new(point(), point(), point(), point())).collect();
    let report = check_axioms(&s, &quads, 64, 1e-7).unwrap();
    assert!(report.passed);
    assert!(report.max_convexity_violation <= 1e-7);
}
