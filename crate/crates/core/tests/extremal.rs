mod common;

use bicombing_core::{
    argmax_face, extremal_points, is_extremal_point, is_extremal_set, minimal_extremal_descent,
    BicombedSpace, ConvexFunctional, ExtremalParams, HyperbolicPlane, Point, PointNet, Space,
};
use common::{brute_extremal_points, hull_of, pt, same_set, square_corners};

fn segment_net(n: usize) -> (Space, PointNet) {
    let s = Space::euclidean(2);
    let pts = (0..=n).map(|k| pt(&[k as f64 / n as f64, 0.0])).collect();
    let net = PointNet::new(&s, pts, 1.0 / n as f64).unwrap();
    (s, net)
}

fn exact(net: &PointNet) -> ExtremalParams {
    ExtremalParams::sample_exact(net.eps(), 8)
}

#[test]
fn params_are_validated() {
    assert!(ExtremalParams::new(0.1, 0.05, 7, 0.01).is_err());
    assert!(ExtremalParams::new(0.1, 0.1, 2, 0.01).is_err());
    assert!(ExtremalParams::new(0.0, 0.1, 7, 0.01).is_err());
    assert!(ExtremalParams::new(0.1, 0.1, 7, 0.0).is_err());
    let p = ExtremalParams::for_net(0.05, 2f64.sqrt());
    assert_eq!(p.delta, (0.05 * 2f64.sqrt()).sqrt());
    assert_eq!(p.face_tol, 0.0125);
}

#[test]
fn argmax_face_examples() {
    let s = Space::euclidean(2);
    let corners = PointNet::new(&s, square_corners(), 0.1).unwrap();
    let all = argmax_face(&s, &corners, &ConvexFunctional::Constant(1.0), 1e-9).unwrap();
    assert_eq!(all, corners);
    let far = argmax_face(&s, &corners, &ConvexFunctional::DistToPoint(pt(&[0.0, 0.0])), 1e-9).unwrap();
    assert_eq!(far.points(), &[pt(&[1.0, 1.0])]);

    let eps = 0.1;
    let disk = hull_of(&s, (0..64).map(|k| {
        let (y, x) = (k as f64 * std::f64::consts::TAU / 64.0).sin_cos();
        pt(&[x, y])
    }).collect(), eps);
    let phi = ConvexFunctional::Linear(vec![1.0, 0.0]);
    let face = argmax_face(&s, &disk, &phi, eps).unwrap();
    let max = disk.points().iter().map(|p| phi.evaluate(&s, p).unwrap()).fold(f64::MIN, f64::max);
    let expected: Vec<Point> = disk
        .points()
        .iter()
        .filter(|p| phi.evaluate(&s, p).unwrap() >= max - eps)
        .cloned()
        .collect();
    assert!(same_set(face.points(), &expected));
    assert!(face.points().iter().all(|p| s.dist(p, &pt(&[1.0, 0.0])) < 0.5));
}

#[test]
fn singleton_point_is_extremal() {
    let s = Space::euclidean(2);
    let net = PointNet::new(&s, vec![pt(&[0.2, 0.2])], 0.05).unwrap();
    let params = ExtremalParams::for_net(0.05, 0.0);
    assert!(is_extremal_point(&s, &net, &pt(&[0.2, 0.2]), &params).unwrap().extremal);
}

#[test]
fn segment_point_verdicts() {
    let (s, net) = segment_net(20);
    for params in [exact(&net), ExtremalParams::for_net(net.eps(), 1.0)] {
        let mid = is_extremal_point(&s, &net, &pt(&[0.5, 0.0]), &params).unwrap();
        assert!(!mid.extremal);
        let w = mid.witness.unwrap();
        assert!(s.dist(&w.x, &pt(&[0.5, 0.0])) > params.delta);
        assert!(s.dist(&w.y, &pt(&[0.5, 0.0])) > params.delta);
        assert!(s.dist(&s.combing(&w.x, &w.y, w.t), &pt(&[0.5, 0.0])) < params.eps);
        assert!(w.t > 0.0 && w.t < 1.0);
        assert!(is_extremal_point(&s, &net, &pt(&[0.0, 0.0]), &params).unwrap().extremal);
    }
    assert!(is_extremal_point(&s, &net, &pt(&[0.5, 1.0]), &exact(&net)).is_err());
}

#[test]
fn star_tree_point_verdicts() {
    let (tree, leaves) = common::star(3);
    let net = hull_of(&tree, leaves[..2].to_vec(), 0.05);
    let center = tree.as_tree().unwrap().node_point_by_name("c").unwrap();
    for params in [exact(&net), ExtremalParams::for_net(0.05, 2.0)] {
        assert!(!is_extremal_point(&tree, &net, &center, &params).unwrap().extremal);
        assert!(is_extremal_point(&tree, &net, &leaves[0], &params).unwrap().extremal);
    }
}

#[test]
fn square_lattice_has_four_corners() {
    let s = Space::euclidean(2);
    let net = PointNet::new(&s, common::square_lattice(20), 0.05).unwrap();
    let ext = extremal_points(&s, &net, &exact(&net)).unwrap();
    assert!(same_set(&ext.points, &square_corners()));
    assert!(ext.diagnostic.is_none());
}

#[test]
fn segment_has_two_endpoints() {
    let (s, net) = segment_net(20);
    let ext = extremal_points(&s, &net, &exact(&net)).unwrap();
    assert!(same_set(&ext.points, &[pt(&[0.0, 0.0]), pt(&[1.0, 0.0])]));
}

#[test]
fn batch_matches_brute_force_oracle() {
    let plane = Space::euclidean(2);
    let hyp = Space::Hyperbolic(HyperbolicPlane);
    let (star3, leaves3) = common::star(3);
    let (star5, leaves5) = common::star(5);
    let circle: Vec<Point> = (0..24)
        .map(|k| {
            let (y, x) = (k as f64 * std::f64::consts::TAU / 24.0).sin_cos();
            pt(&[x, y])
        })
        .collect();
    let cases: Vec<(Space, PointNet, bool)> = vec![
        (plane.clone(), hull_of(&plane, square_corners(), 0.2), true),
        (hyp.clone(), hull_of(&hyp, common::hyperbolic_triangle(1.0), 0.15), true),
        (star3.clone(), hull_of(&star3, leaves3, 0.1), true),
        (star5.clone(), hull_of(&star5, leaves5, 0.2), true),
        (plane.clone(), hull_of(&plane, circle, 0.3), false),
    ];
    for (space, net, sample_exact) in cases {
        let params = if sample_exact { exact(&net) } else { ExtremalParams::for_net(net.eps(), net.diameter(&space)) };
        let fast = extremal_points(&space, &net, &params).unwrap().points;
        let slow = brute_extremal_points(&space, &net, &params);
        assert!(same_set(&fast, &slow), "{}: {} vs {}", space.describe(), fast.len(), slow.len());
        for p in &fast {
            assert!(net.contains(p));
            assert!(is_extremal_point(&space, &net, p, &params).unwrap().extremal);
        }
    }
}

#[test]
fn hyperbolic_triangle_has_three_vertices() {
    let s = Space::Hyperbolic(HyperbolicPlane);
    let verts = common::hyperbolic_triangle(1.0);
    let net = hull_of(&s, verts.clone(), 0.05);
    let ext = extremal_points(&s, &net, &exact(&net)).unwrap();
    let expected: Vec<Point> = verts.iter().map(|v| s.canonicalize(v).unwrap()).collect();
    assert!(same_set(&ext.points, &expected));
}

#[test]
fn star_hulls_have_their_leaves() {
    for k in [2, 3, 5] {
        let (tree, leaves) = common::star(k);
        let net = hull_of(&tree, leaves.clone(), 0.05);
        let ext = extremal_points(&tree, &net, &exact(&net)).unwrap();
        assert!(same_set(&ext.points, &leaves), "star with {k} leaves");
    }
}

#[test]
fn larger_delta_never_removes_extremal_points() {
    let s = Space::euclidean(2);
    let net = hull_of(&s, vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.2]), pt(&[0.3, 0.9])], 0.1);
    let mut previous: Option<Vec<Point>> = None;
    for delta in [0.1, 0.2, 0.3, 0.5] {
        let params = ExtremalParams::new(0.1, delta, 7, 0.025).unwrap();
        let ext = extremal_points(&s, &net, &params).unwrap().points;
        if let Some(prev) = &previous {
            assert!(prev.iter().all(|p| ext.contains(p)), "delta {delta}");
        }
        previous = Some(ext);
    }
}

#[test]
fn extremal_set_examples() {
    let s = Space::euclidean(2);
    let net = PointNet::new(&s, common::square_lattice(20), 0.05).unwrap();
    let params = exact(&net);
    assert!(is_extremal_set(&s, &net, &net, &params).unwrap().extremal);

    let edge: Vec<Point> = net.points().iter().filter(|p| matches!(p, Point::Euclidean(v) if v[0] == 1.0)).cloned().collect();
    let edge = PointNet::new(&s, edge, net.eps()).unwrap();
    assert_eq!(edge.len(), 21);
    assert!(is_extremal_set(&s, &net, &edge, &params).unwrap().extremal);

    let center = PointNet::new(&s, vec![pt(&[0.5, 0.5])], net.eps()).unwrap();
    let v = is_extremal_set(&s, &net, &center, &params).unwrap();
    assert!(!v.extremal);
    let w = v.witness.unwrap();
    assert!(s.dist(&s.combing(&w.x, &w.y, w.t_enter), &pt(&[0.5, 0.5])) < params.eps);

    let outside = PointNet::new(&s, vec![pt(&[3.0, 3.0])], net.eps()).unwrap();
    assert!(is_extremal_set(&s, &net, &outside, &params).is_err());
}

#[test]
fn descent_on_singleton_stops_at_once() {
    let s = Space::euclidean(2);
    let net = PointNet::new(&s, vec![pt(&[0.4, 0.4])], 0.05).unwrap();
    let d = minimal_extremal_descent(&s, &net, &pt(&[0.4, 0.4]), &ExtremalParams::for_net(0.05, 0.0), 50).unwrap();
    assert_eq!(d.point, pt(&[0.4, 0.4]));
    assert_eq!(d.iterations, 0);
    assert!(d.converged);
}

#[test]
fn descent_from_segment_midpoint_reaches_an_endpoint() {
    let (s, net) = segment_net(20);
    let params = exact(&net);
    let a = minimal_extremal_descent(&s, &net, &pt(&[0.5, 0.0]), &params, 50).unwrap();
    let b = minimal_extremal_descent(&s, &net, &pt(&[0.5, 0.0]), &params, 50).unwrap();
    assert_eq!(a, b);
    assert!(a.point == pt(&[0.0, 0.0]) || a.point == pt(&[1.0, 0.0]));
    assert!(a.trace.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn descent_from_square_center_reaches_a_corner() {
    let s = Space::euclidean(2);
    let net = hull_of(&s, square_corners(), 0.05);
    let params = exact(&net);
    let d = minimal_extremal_descent(&s, &net, &pt(&[0.5, 0.5]), &params, 50).unwrap();
    assert!(d.converged);
    assert!(square_corners().contains(&d.point));
    assert!(is_extremal_point(&s, &net, &d.point, &params).unwrap().extremal);
    assert!(minimal_extremal_descent(&s, &net, &pt(&[5.0, 5.0]), &params, 50).is_err());
}

#[test]
fn descent_reports_exhausted_iterations() {
    let s = Space::euclidean(2);
    let net = hull_of(&s, square_corners(), 0.1);
    let params = exact(&net);
    let d = minimal_extremal_descent(&s, &net, &pt(&[0.5, 0.5]), &params, 0).unwrap();
    assert!(!d.converged);
    assert_eq!(d.trace, vec![net.len()]);
}
