#![allow(dead_code)]

use std::f64::consts::PI;

use bicombing_core::{
    hull_closure, BicombedSpace, ExtremalParams, HyperbolicPlane, MetricTree, MetricTreeSpec,
    Point, PointNet, Space,
};

pub fn pt(c: &[f64]) -> Point {
    Point::euclidean(c.to_vec())
}

pub fn square_corners() -> Vec<Point> {
    vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0]), pt(&[1.0, 1.0])]
}

/// `(n+1)^2` grid points of the unit square.
pub fn square_lattice(n: usize) -> Vec<Point> {
    let h = 1.0 / n as f64;
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            out.push(pt(&[i as f64 * h, j as f64 * h]));
        }
    }
    out
}

pub fn hull_of(space: &Space, seed: Vec<Point>, eps: f64) -> PointNet {
    let net = PointNet::new(space, seed, eps).unwrap();
    let hull = hull_closure(space, &net, 8, 64).unwrap();
    assert!(hull.converged);
    hull.net
}

pub fn hyperbolic_triangle(side: f64) -> Vec<Point> {
    let r = ((2.0 * side.cosh() + 1.0) / 3.0).sqrt().acosh();
    (0..3)
        .map(|k| HyperbolicPlane::from_polar(r, 2.0 * PI * k as f64 / 3.0))
        .collect()
}

pub fn star(leaves: usize) -> (Space, Vec<Point>) {
    let tree = MetricTree::new(&MetricTreeSpec::star(leaves, 1.0)).unwrap();
    let pts = (0..leaves)
        .map(|i| tree.node_point_by_name(&format!("l{i}")).unwrap())
        .collect();
    (Space::Tree(tree), pts)
}

/// Direct transcription of the extremal-point predicate: no pruning, no index.
pub fn brute_is_extremal(space: &Space, net: &PointNet, p: &Point, params: &ExtremalParams) -> bool {
    let pts = net.points();
    let g = params.t_grid;
    for x in pts {
        if space.dist(x, p) <= params.delta {
            continue;
        }
        for y in pts {
            if space.dist(y, p) <= params.delta {
                continue;
            }
            for k in 1..=g {
                let t = k as f64 / (g + 1) as f64;
                if space.dist(&space.combing(x, y, t), p) < params.eps {
                    return false;
                }
            }
        }
    }
    true
}

pub fn brute_extremal_points(space: &Space, net: &PointNet, params: &ExtremalParams) -> Vec<Point> {
    net.points()
        .iter()
        .filter(|p| brute_is_extremal(space, net, p, params))
        .cloned()
        .collect()
}

pub fn same_set(a: &[Point], b: &[Point]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.canonical_cmp(y));
    b.sort_by(|x, y| x.canonical_cmp(y));
    a == b
}
