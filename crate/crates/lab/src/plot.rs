//! Fixed 2D projections and CSV export of report point sets.

use std::f64::consts::PI;

use bicombing_core::{HyperbolicPlane, MetricTree, Point, Space, SpaceSpec};

use crate::error::{LabError, LabResult};
use crate::run::Report;

/// Straight-line drawing of a tree with true edge lengths. Children of the
/// root sit at equal angles; deeper subtrees split their parent's wedge.
pub struct TreeEmbedding {
    positions: Vec<[f64; 2]>,
}

impl TreeEmbedding {
    pub fn new(tree: &MetricTree) -> Self {
        let n = tree.node_names().len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in tree.edges() {
            adj[e.tail].push((e.head, e.length));
            adj[e.head].push((e.tail, e.length));
        }
        let mut positions = vec![[0.0; 2]; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        // (node, first child angle, angular step)
        let root_step = 2.0 * PI / adj[0].len().max(1) as f64;
        let mut stack = vec![(0usize, 0.0, root_step)];
        while let Some((v, start, step)) = stack.pop() {
            let children: Vec<(usize, f64)> = adj[v].iter().copied().filter(|&(c, _)| !seen[c]).collect();
            for (j, &(c, len)) in children.iter().enumerate() {
                seen[c] = true;
                let angle = start + step * j as f64;
                positions[c] = [positions[v][0] + len * angle.cos(), positions[v][1] + len * angle.sin()];
                let m = adj[c].len().saturating_sub(1).max(1) as f64;
                let sub = step / m;
                stack.push((c, angle - step / 2.0 + sub / 2.0, sub));
            }
        }
        Self { positions }
    }

    pub fn node(&self, node: usize) -> [f64; 2] {
        self.positions[node]
    }

    pub fn project(&self, tree: &MetricTree, p: &Point) -> Option<[f64; 2]> {
        let Point::Tree { edge, offset } = p else { return None };
        let e = tree.edges().get(*edge)?;
        let (a, b) = (self.positions[e.tail], self.positions[e.head]);
        let s = offset / e.length;
        Some([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])])
    }
}

/// Arclength coordinate along a path tree, from its lowest-numbered end.
fn path_coordinate(tree: &MetricTree) -> Option<impl Fn(&Point) -> Option<f64> + '_> {
    let n = tree.node_names().len();
    if (0..n).any(|v| tree.degree(v) > 2) {
        return None;
    }
    let start = (0..n).find(|&v| tree.degree(v) <= 1)?;
    let mut at = vec![f64::NAN; n];
    at[start] = 0.0;
    let mut frontier = vec![start];
    while let Some(v) = frontier.pop() {
        for e in tree.edges() {
            let next = if e.tail == v { e.head } else if e.head == v { e.tail } else { continue };
            if at[next].is_nan() {
                at[next] = at[v] + e.length;
                frontier.push(next);
            }
        }
    }
    Some(move |p: &Point| {
        let Point::Tree { edge, offset } = p else { return None };
        let e = tree.edges().get(*edge)?;
        let dir = if at[e.head] > at[e.tail] { 1.0 } else { -1.0 };
        Some(at[e.tail] + dir * offset)
    })
}

fn line_coordinate(space: &Space, p: &Point) -> Option<f64> {
    match (space, p) {
        (Space::Lp(s), Point::Euclidean(v)) if s.dimension() == 1 => v.first().copied(),
        (Space::Tree(t), _) => path_coordinate(t)?(p),
        _ => None,
    }
}

fn has_line_coordinate(space: &Space) -> bool {
    match space {
        Space::Lp(s) => s.dimension() == 1,
        Space::Tree(t) => path_coordinate(t).is_some(),
        _ => false,
    }
}

/// Planar projection for spaces that have one.
pub enum Projection {
    Plane,
    Disk,
    Tree(MetricTree, TreeEmbedding),
    Lines(Space, Space),
}

impl Projection {
    pub fn for_space(space: &Space) -> Option<Self> {
        match space {
            Space::Lp(s) if s.dimension() == 2 => Some(Projection::Plane),
            Space::Hyperbolic(_) => Some(Projection::Disk),
            Space::Tree(t) => Some(Projection::Tree(t.clone(), TreeEmbedding::new(t))),
            Space::Product(s) if has_line_coordinate(s.left()) && has_line_coordinate(s.right()) => {
                Some(Projection::Lines(s.left().clone(), s.right().clone()))
            }
            _ => None,
        }
    }

    pub fn project(&self, p: &Point) -> Option<[f64; 2]> {
        match (self, p) {
            (Projection::Plane, Point::Euclidean(v)) if v.len() == 2 => Some([v[0], v[1]]),
            (Projection::Disk, _) => HyperbolicPlane::to_disk(p),
            (Projection::Tree(tree, emb), _) => emb.project(tree, p),
            (Projection::Lines(a, b), Point::Product(l, r)) => {
                Some([line_coordinate(a, l)?, line_coordinate(b, r)?])
            }
            _ => None,
        }
    }
}

/// Nine significant digits; positional unless the magnitude is extreme.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if !(-5..=8).contains(&exp) {
        return sci;
    }
    let decimals = (8 - exp) as usize;
    format!("{x:.decimals$}")
}

pub fn plot_csv(report: &Report) -> LabResult<String> {
    let space = report.space.build()?;
    let projection = Projection::for_space(&space).ok_or_else(|| {
        LabError::Usage(format!("no 2D projection for space {}", describe_spec(&report.space)))
    })?;
    let mut out = String::from("x,y,label\n");
    let groups = [
        ("net", Some(&report.net)),
        ("extremal", report.extremal.as_ref()),
        ("hull_of_extremal", report.hull_of_extremal.as_ref()),
    ];
    for (label, points) in groups {
        for p in points.into_iter().flatten() {
            let [x, y] = projection.project(p).ok_or_else(|| {
                LabError::Usage(format!("report point {p:?} does not belong to the report's space"))
            })?;
            out.push_str(&format!("{},{},{label}\n", format_sig(x), format_sig(y)));
        }
    }
    Ok(out)
}

fn describe_spec(spec: &SpaceSpec) -> String {
    serde_json::to_string(spec).unwrap_or_else(|_| format!("{spec:?}"))
}
