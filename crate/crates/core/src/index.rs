//! Bucketed range queries over a growing point list.
//!
//! Each point is mapped to a key vector that is 1-Lipschitz into the max
//! norm: the space's chart when it has one, otherwise distances to up to
//! three pivots. Points whose distance to a query is at most `r` then sit in
//! grid cells within `ceil(r / cell)` of the query's cell, and every key
//! coordinate gives a lower bound on the true distance.
//!
//! Cells inside the key bounding box of the pivot source (padded) live in a
//! dense array; the rest go to a hash map. Both store per-cell linked lists
//! threaded through `next`.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::point::Point;
use crate::space::BicombedSpace;

const HASHED_DIMS: usize = 3;
const MAX_PIVOTS: usize = 3;
const MAX_KEY: usize = 8;
const MAX_DENSE_CELLS: usize = 1 << 22;
const PAD_CELLS: i64 = 4;
const NIL: u32 = u32::MAX;

#[derive(Default)]
struct CellHasher(u64);

impl Hasher for CellHasher {
    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            self.write_u64(u64::from_le_bytes(buf));
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

type Cell = [i64; HASHED_DIMS];

#[derive(Clone, Copy)]
struct Key {
    v: [f64; MAX_KEY],
    len: usize,
}

impl Key {
    fn as_slice(&self) -> &[f64] {
        &self.v[..self.len]
    }
}

struct Dense {
    origin: Cell,
    extent: Cell,
    heads: Vec<u32>,
}

impl Dense {
    fn slot(&self, c: &Cell) -> Option<usize> {
        let mut slot = 0usize;
        for d in 0..HASHED_DIMS {
            let off = c[d] - self.origin[d];
            if off < 0 || off >= self.extent[d] {
                return None;
            }
            slot = slot * self.extent[d] as usize + off as usize;
        }
        Some(slot)
    }
}

pub(crate) struct NetIndex {
    cell: f64,
    pivots: Option<Vec<Point>>,
    key_len: usize,
    dims: usize,
    keys: Vec<f64>,
    next: Vec<u32>,
    dense: Option<Dense>,
    sparse: HashMap<Cell, u32, BuildHasherDefault<CellHasher>>,
}

impl NetIndex {
    /// Empty index; pivots (if the space has no chart) and the dense region
    /// are derived from `pivot_source`.
    pub fn empty<S: BicombedSpace + ?Sized>(space: &S, pivot_source: &[Point], cell: f64) -> Self {
        assert!(cell > 0.0, "index cell size must be positive");
        let probe = pivot_source.first();
        let pivots = match probe.and_then(|p| space.chart(p)) {
            Some(_) => None,
            None => Some(choose_pivots(space, pivot_source)),
        };
        let mut idx = Self {
            cell,
            pivots,
            key_len: 0,
            dims: 0,
            keys: Vec::new(),
            next: Vec::new(),
            dense: None,
            sparse: HashMap::default(),
        };
        if let Some(p) = probe {
            idx.key_len = idx.key(space, p).len;
            idx.dims = idx.key_len.min(HASHED_DIMS);
            idx.dense = idx.dense_region(space, pivot_source);
        }
        idx
    }

    pub fn build<S: BicombedSpace + ?Sized>(space: &S, points: &[Point], cell: f64) -> Self {
        let mut idx = Self::empty(space, points, cell);
        for p in points {
            idx.insert(space, p);
        }
        idx
    }

    fn dense_region<S: BicombedSpace + ?Sized>(&self, space: &S, source: &[Point]) -> Option<Dense> {
        let mut lo = [0i64; HASHED_DIMS];
        let mut hi = [0i64; HASHED_DIMS];
        for (n, p) in source.iter().enumerate() {
            let c = self.cell_of(&self.key(space, p));
            for d in 0..self.dims {
                if n == 0 || c[d] < lo[d] {
                    lo[d] = c[d];
                }
                if n == 0 || c[d] > hi[d] {
                    hi[d] = c[d];
                }
            }
        }
        let mut origin = [0i64; HASHED_DIMS];
        let mut extent = [1i64; HASHED_DIMS];
        let mut total = 1usize;
        for d in 0..self.dims {
            origin[d] = lo[d] - PAD_CELLS;
            extent[d] = hi[d] - lo[d] + 1 + 2 * PAD_CELLS;
            total = total.checked_mul(extent[d] as usize)?;
        }
        (total <= MAX_DENSE_CELLS).then(|| Dense { origin, extent, heads: vec![NIL; total] })
    }

    pub fn len(&self) -> usize {
        self.next.len()
    }

    fn key<S: BicombedSpace + ?Sized>(&self, space: &S, p: &Point) -> Key {
        let mut key = Key { v: [0.0; MAX_KEY], len: 0 };
        match &self.pivots {
            None => {
                let chart = space.chart(p).expect("space chart is total");
                key.len = chart.len().min(MAX_KEY);
                key.v[..key.len].copy_from_slice(&chart[..key.len]);
            }
            Some(pivots) => {
                key.len = pivots.len();
                for (slot, v) in key.v.iter_mut().zip(pivots) {
                    *slot = space.dist(v, p);
                }
            }
        }
        key
    }

    fn cell_of(&self, key: &Key) -> Cell {
        let mut c = [0i64; HASHED_DIMS];
        for d in 0..self.dims {
            c[d] = (key.v[d] / self.cell).floor() as i64;
        }
        c
    }

    fn head(&self, c: &Cell) -> u32 {
        if let Some(slot) = self.dense.as_ref().and_then(|g| g.slot(c)) {
            return self.dense.as_ref().expect("checked").heads[slot];
        }
        self.sparse.get(c).copied().unwrap_or(NIL)
    }

    /// Appends `p`; its id is the previous `len()`.
    pub fn insert<S: BicombedSpace + ?Sized>(&mut self, space: &S, p: &Point) {
        let key = self.key(space, p);
        let cell = self.cell_of(&key);
        let id = self.next.len() as u32;
        self.keys.extend_from_slice(key.as_slice());
        let head = match self.dense.as_mut().and_then(|g| g.slot(&cell).map(|s| (g, s))) {
            Some((g, s)) => &mut g.heads[s],
            None => self.sparse.entry(cell).or_insert(NIL),
        };
        self.next.push(*head);
        *head = id;
    }

    /// Calls `visit(id)` for every stored point whose key is within `r` of
    /// `key` in every coordinate, until `visit` returns `true`.
    fn scan(&self, key: &Key, r: f64, mut visit: impl FnMut(usize) -> bool) -> bool {
        let center = self.cell_of(key);
        let reach = (r / self.cell).ceil().max(1.0) as i64;
        let span = |d: usize| if d < self.dims { -reach..=reach } else { 0..=0 };
        let q = key.as_slice();
        for a in span(0) {
            for b in span(1) {
                for c in span(2) {
                    let mut id = self.head(&[center[0] + a, center[1] + b, center[2] + c]);
                    while id != NIL {
                        let i = id as usize;
                        let stored = &self.keys[i * self.key_len..(i + 1) * self.key_len];
                        if stored.iter().zip(q).all(|(s, k)| (s - k).abs() <= r) && visit(i) {
                            return true;
                        }
                        id = self.next[i];
                    }
                }
            }
        }
        false
    }

    /// Whether some stored point lies within distance `r` (inclusive) of `q`.
    pub fn any_within<S: BicombedSpace + ?Sized>(
        &self,
        space: &S,
        points: &[Point],
        q: &Point,
        r: f64,
    ) -> bool {
        if self.next.is_empty() {
            return false;
        }
        let key = self.key(space, q);
        self.scan(&key, r, |id| space.dist(&points[id], q) <= r)
    }

    /// Nearest stored point; ties go to the smallest id.
    pub fn nearest<S: BicombedSpace + ?Sized>(
        &self,
        space: &S,
        points: &[Point],
        q: &Point,
    ) -> Option<(usize, f64)> {
        if self.next.is_empty() {
            return None;
        }
        let key = self.key(space, q);
        let mut best: Option<(usize, f64)> = None;
        for rings in 1..=4 {
            let r = rings as f64 * self.cell;
            self.scan(&key, r, |id| {
                let d = space.dist(&points[id], q);
                if best.map_or(true, |(bi, bd)| d < bd || (d == bd && id < bi)) {
                    best = Some((id, d));
                }
                false
            });
            if let Some((_, d)) = best {
                if d <= r {
                    return best;
                }
            }
        }
        points[..self.len()]
            .iter()
            .enumerate()
            .map(|(i, p)| (i, space.dist(p, q)))
            .fold(None, |acc, (i, d)| match acc {
                Some((_, bd)) if bd <= d => acc,
                _ => Some((i, d)),
            })
    }
}

fn choose_pivots<S: BicombedSpace + ?Sized>(space: &S, source: &[Point]) -> Vec<Point> {
    let Some(first) = source.first() else { return Vec::new() };
    let mut pivots = vec![first.clone()];
    let mut nearest: Vec<f64> = source.iter().map(|p| space.dist(first, p)).collect();
    while pivots.len() < MAX_PIVOTS {
        let (far, &d) = nearest
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, (i, d)| if *d > *acc.1 { (i, d) } else { acc });
        if d <= 0.0 {
            break;
        }
        let pivot = source[far].clone();
        for (n, p) in nearest.iter_mut().zip(source) {
            *n = n.min(space.dist(&pivot, p));
        }
        pivots.push(pivot);
    }
    pivots
}
