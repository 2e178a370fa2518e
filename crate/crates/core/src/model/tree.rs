use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::point::Point;
use crate::space::BicombedSpace;

/// Nodes plus weighted edges `(tail, head, length)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricTreeSpec {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String, f64)>,
}

impl MetricTreeSpec {
    /// Star with `leaves` spokes of the given length around a center `c`.
    /// Leaves are named `l0, l1, ...`; spoke `i` is edge `i` with tail `c`.
    pub fn star(leaves: usize, length: f64) -> Self {
        let mut nodes = vec!["c".to_string()];
        let mut edges = Vec::with_capacity(leaves);
        for i in 0..leaves {
            let name = format!("l{i}");
            nodes.push(name.clone());
            edges.push(("c".to_string(), name, length));
        }
        Self { nodes, edges }
    }

    /// Path through the given nodes with consecutive edge lengths.
    pub fn path(nodes: &[&str], lengths: &[f64]) -> Self {
        Self {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: nodes
                .windows(2)
                .zip(lengths)
                .map(|(w, &l)| (w[0].to_string(), w[1].to_string(), l))
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeEdge {
    pub tail: usize,
    pub head: usize,
    pub length: f64,
}

/// A finite metric tree with the geodesic bicombing.
///
/// Node-to-node distances come from weighted depths below node 0 and a
/// lowest-common-ancestor climb.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTree {
    names: Vec<String>,
    edges: Vec<TreeEdge>,
    incident: Vec<Vec<usize>>,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<f64>,
    level: Vec<usize>,
}

impl MetricTree {
    pub fn new(spec: &MetricTreeSpec) -> Result<Self> {
        if spec.nodes.is_empty() {
            return Err(invalid("metric tree needs at least one node"));
        }
        let mut index = HashMap::new();
        for (i, name) in spec.nodes.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(invalid(format!("duplicate tree node {name:?}")));
            }
        }
        let n = spec.nodes.len();
        if spec.edges.len() + 1 != n {
            return Err(invalid(format!(
                "a tree on {n} nodes has {} edges, got {} (cyclic or disconnected)",
                n - 1,
                spec.edges.len()
            )));
        }
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut incident = vec![Vec::new(); n];
        for (id, (a, b, len)) in spec.edges.iter().enumerate() {
            let lookup = |s: &String| {
                index
                    .get(s.as_str())
                    .copied()
                    .ok_or_else(|| invalid(format!("edge {id} references unknown node {s:?}")))
            };
            let (tail, head) = (lookup(a)?, lookup(b)?);
            if tail == head {
                return Err(invalid(format!("edge {id} is a self-loop")));
            }
            if !(len.is_finite() && *len > 0.0) {
                return Err(invalid(format!("edge {id} has non-positive length {len}")));
            }
            edges.push(TreeEdge { tail, head, length: *len });
            incident[tail].push(id);
            incident[head].push(id);
        }

        let mut parent = vec![None; n];
        let mut depth = vec![0.0; n];
        let mut level = vec![0; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &e in &incident[u] {
                let edge = edges[e];
                let v = if edge.tail == u { edge.head } else { edge.tail };
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                parent[v] = Some((u, e));
                depth[v] = depth[u] + edge.length;
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
        if let Some(lost) = seen.iter().position(|s| !s) {
            return Err(invalid(format!(
                "tree is disconnected: node {:?} unreachable",
                spec.nodes[lost]
            )));
        }

        Ok(Self {
            names: spec.nodes.clone(),
            edges,
            incident,
            parent,
            depth,
            level,
        })
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.incident[node].len()
    }

    /// Canonical point at a node. A single-node tree has no edges and no points.
    pub fn node_point(&self, node: usize) -> Result<Point> {
        let &e = self
            .incident
            .get(node)
            .and_then(|inc| inc.iter().min())
            .ok_or_else(|| invalid(format!("node {node} has no incident edge")))?;
        let edge = self.edges[e];
        let offset = if edge.tail == node { 0.0 } else { edge.length };
        Ok(Point::Tree { edge: e, offset })
    }

    pub fn node_point_by_name(&self, name: &str) -> Result<Point> {
        let node = self
            .node_index(name)
            .ok_or_else(|| invalid(format!("unknown tree node {name:?}")))?;
        self.node_point(node)
    }

    pub fn point_on_edge(&self, edge: usize, offset: f64) -> Result<Point> {
        self.canonicalize(&Point::Tree { edge, offset })
    }

    fn parts(p: &Point) -> (usize, f64) {
        match p {
            Point::Tree { edge, offset } => (*edge, *offset),
            other => panic!("metric tree received a {} point", other.variant_name()),
        }
    }

    fn snap(&self, edge: usize, offset: f64) -> Point {
        let e = self.edges[edge];
        if offset <= 0.0 {
            self.node_point(e.tail).expect("tail has an incident edge")
        } else if offset >= e.length {
            self.node_point(e.head).expect("head has an incident edge")
        } else {
            Point::Tree { edge, offset }
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.level[a] > self.level[b] {
            a = self.parent[a].expect("non-root has parent").0;
        }
        while self.level[b] > self.level[a] {
            b = self.parent[b].expect("non-root has parent").0;
        }
        while a != b {
            a = self.parent[a].expect("non-root has parent").0;
            b = self.parent[b].expect("non-root has parent").0;
        }
        a
    }

    fn node_dist(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let c = self.lca(a, b);
        (self.depth[a] - self.depth[c]) + (self.depth[b] - self.depth[c])
    }

    /// Edges of the node path `a -> b` as `(edge, entered_from)`.
    fn node_path(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let c = self.lca(a, b);
        let mut up = Vec::new();
        let mut u = a;
        while u != c {
            let (p, e) = self.parent[u].expect("non-root has parent");
            up.push((e, u));
            u = p;
        }
        let mut down = Vec::new();
        let mut v = b;
        while v != c {
            let (p, e) = self.parent[v].expect("non-root has parent");
            down.push((e, p));
            v = p;
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// `(node, distance from the point to that node along its edge)` for both edge ends.
    fn ends(&self, edge: usize, offset: f64) -> [(usize, f64); 2] {
        let e = self.edges[edge];
        [(e.tail, offset), (e.head, e.length - offset)]
    }

    /// Best exit/entry node pair for a path between points on different edges.
    fn route(&self, p: (usize, f64), q: (usize, f64)) -> (f64, (usize, f64), (usize, f64)) {
        let mut best = (f64::INFINITY, (0, 0.0), (0, 0.0));
        for a in self.ends(p.0, p.1) {
            for b in self.ends(q.0, q.1) {
                let total = a.1 + self.node_dist(a.0, b.0) + b.1;
                if total < best.0 {
                    best = (total, a, b);
                }
            }
        }
        best
    }

    /// Point `s` units from node `from` along `edge`.
    fn along(&self, edge: usize, from: usize, s: f64) -> Point {
        let e = self.edges[edge];
        let offset = if e.tail == from { s } else { e.length - s };
        self.snap(edge, offset.clamp(0.0, e.length))
    }
}

impl BicombedSpace for MetricTree {
    fn describe(&self) -> String {
        format!(
            "metric tree ({} nodes, {} edges)",
            self.names.len(),
            self.edges.len()
        )
    }

    fn canonicalize(&self, p: &Point) -> Result<Point> {
        let mismatch = |reason: String| Error::PointMismatch { space: self.describe(), reason };
        match *p {
            Point::Tree { edge, offset } => {
                let e = self
                    .edges
                    .get(edge)
                    .ok_or_else(|| mismatch(format!("unknown edge {edge}")))?;
                let slack = 1e-12 * (1.0 + e.length);
                if !offset.is_finite() || offset < -slack || offset > e.length + slack {
                    return Err(mismatch(format!(
                        "offset {offset} outside edge {edge} of length {}",
                        e.length
                    )));
                }
                Ok(self.snap(edge, offset))
            }
            ref other => Err(mismatch(format!("{} point", other.variant_name()))),
        }
    }

    fn dist(&self, x: &Point, y: &Point) -> f64 {
        // Evaluate in canonical argument order so the result is exactly symmetric.
        let (x, y) = match x.canonical_cmp(y) {
            Ordering::Greater => (y, x),
            _ => (x, y),
        };
        let (p, q) = (Self::parts(x), Self::parts(y));
        if p.0 == q.0 {
            return (p.1 - q.1).abs();
        }
        self.route(p, q).0
    }

    fn combing(&self, x: &Point, y: &Point, t: f64) -> Point {
        if t == 0.0 || x == y {
            return x.clone();
        }
        if t == 1.0 {
            return y.clone();
        }
        let (p, q) = (Self::parts(x), Self::parts(y));
        if p.0 == q.0 {
            return self.snap(p.0, p.1 + t * (q.1 - p.1));
        }
        let (total, exit, entry) = self.route(p, q);
        let mut s = t * total;
        if s <= exit.1 {
            return self.along(p.0, exit.0, exit.1 - s);
        }
        s -= exit.1;
        for (edge, from) in self.node_path(exit.0, entry.0) {
            let len = self.edges[edge].length;
            if s <= len {
                return self.along(edge, from, s);
            }
            s -= len;
        }
        self.along(q.0, entry.0, s)
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{distance, evaluate_bicombing};

    fn star3() -> MetricTree {
        MetricTree::new(&MetricTreeSpec::star(3, 1.0)).unwrap()
    }

    #[test]
    fn star_distances_and_midpoint() {
        let t = star3();
        let a = t.node_point_by_name("l0").unwrap();
        let b = t.node_point_by_name("l1").unwrap();
        let c = t.node_point_by_name("c").unwrap();
        assert_eq!(distance(&t, &a, &b).unwrap(), 2.0);
        assert_eq!(evaluate_bicombing(&t, &a, &b, 0.5).unwrap(), c);
    }

    #[test]
    fn path_walk_crosses_interior_node() {
        let t = MetricTree::new(&MetricTreeSpec::path(&["a", "b", "c"], &[1.0, 2.0])).unwrap();
        let a = t.node_point_by_name("a").unwrap();
        let c = t.node_point_by_name("c").unwrap();
        // 0.75 * 3 = 2.25 from a: 1.25 past b on edge b-c (edge 1, tail b).
        let p = evaluate_bicombing(&t, &a, &c, 0.75).unwrap();
        assert_eq!(p, Point::Tree { edge: 1, offset: 1.25 });
        let back = evaluate_bicombing(&t, &c, &a, 0.25).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn nodes_are_canonicalized() {
        let t = star3();
        // Center is the tail of every spoke; edge 0 wins.
        let p = t.point_on_edge(2, 0.0).unwrap();
        assert_eq!(p, Point::Tree { edge: 0, offset: 0.0 });
        let leaf = t.point_on_edge(1, 1.0).unwrap();
        assert_eq!(leaf, Point::Tree { edge: 1, offset: 1.0 });
        assert!(t.point_on_edge(1, 1.5).is_err());
        assert!(t.point_on_edge(7, 0.5).is_err());
    }

    #[test]
    fn rejects_bad_trees() {
        let cyclic = MetricTreeSpec {
            nodes: vec!["a".into(), "b".into(), "c".into()],
            edges: vec![
                ("a".into(), "b".into(), 1.0),
                ("b".into(), "c".into(), 1.0),
                ("c".into(), "a".into(), 1.0),
            ],
        };
        assert!(MetricTree::new(&cyclic).is_err());
        let disconnected = MetricTreeSpec {
            nodes: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            edges: vec![
                ("a".into(), "b".into(), 1.0),
                ("b".into(), "a".into(), 1.0),
                ("c".into(), "d".into(), 1.0),
            ],
        };
        assert!(MetricTree::new(&disconnected).is_err());
        let zero = MetricTreeSpec::path(&["a", "b"], &[0.0]);
        assert!(MetricTree::new(&zero).is_err());
    }

    #[test]
    fn interior_points_on_different_spokes() {
        let t = star3();
        let p = t.point_on_edge(0, 0.25).unwrap();
        let q = t.point_on_edge(2, 0.5).unwrap();
        assert_eq!(t.dist(&p, &q), 0.75);
        let m = t.combing(&p, &q, 0.5);
        assert_eq!(m, Point::Tree { edge: 2, offset: 0.125 });
    }
}
