//! Perfect matchings of snake graphs and the rotation lattice.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Cover, CoverLattice};
use crate::snake::{Edge, Point, Side, SnakeGraph};

/// Edges kept sorted, so the derived ordering is lexicographic on the sorted
/// edge lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PerfectMatching(Vec<Edge>);

impl PerfectMatching {
    pub fn new(mut edges: Vec<Edge>) -> Self {
        edges.sort();
        edges.dedup();
        PerfectMatching(edges)
    }

    /// Checked constructor.
    pub fn of(g: &SnakeGraph, edges: Vec<Edge>) -> Result<Self> {
        let p = PerfectMatching::new(edges);
        if is_perfect(g, p.edges()) { Ok(p) } else { Err(Error::NotPerfect) }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.binary_search(e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Every vertex of `g` lies on exactly one of `edges`, all of which are
/// edges of `g`.
pub fn is_perfect(g: &SnakeGraph, edges: &[Edge]) -> bool {
    let all: BTreeSet<Edge> = g.edges().into_iter().collect();
    if !edges.iter().all(|e| all.contains(e)) {
        return false;
    }
    let mut seen: BTreeMap<Point, usize> = g.vertices().into_iter().map(|v| (v, 0)).collect();
    for e in edges {
        for v in [e.0, e.1] {
            *seen.get_mut(&v).expect("endpoint of a graph edge") += 1;
        }
    }
    seen.values().all(|&c| c == 1)
}

/// Depth-first completion: always match the smallest uncovered vertex.
pub fn enumerate_matchings(g: &SnakeGraph) -> Vec<PerfectMatching> {
    let verts = g.vertices();
    let index: HashMap<Point, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: Vec<Vec<(usize, Edge)>> = vec![Vec::new(); verts.len()];
    for e in g.edges() {
        let (a, b) = (index[&e.0], index[&e.1]);
        adj[a].push((b, e));
        adj[b].push((a, e));
    }

    fn go(adj: &[Vec<(usize, Edge)>], used: &mut [bool], from: usize, cur: &mut Vec<Edge>, out: &mut Vec<PerfectMatching>) {
        let Some(v) = (from..used.len()).find(|&i| !used[i]) else {
            out.push(PerfectMatching::new(cur.clone()));
            return;
        };
        used[v] = true;
        for &(u, e) in &adj[v] {
            if !used[u] {
                used[u] = true;
                cur.push(e);
                go(adj, used, v + 1, cur, out);
                cur.pop();
                used[u] = false;
            }
        }
        used[v] = false;
    }

    let mut out = Vec::new();
    go(&adj, &mut vec![false; verts.len()], 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The boundary cycle alternates between the two boundary-only matchings;
/// the minimal one contains the west edge of tile 1. A lone tile takes its
/// horizontal pair instead.
pub fn minimal_matching(g: &SnakeGraph) -> PerfectMatching {
    if g.tile_count() == 1 {
        return PerfectMatching::new(vec![g.edge(1, Side::North), g.edge(1, Side::South)]);
    }
    let boundary = g.boundary_edges();
    let mut at: HashMap<Point, Vec<Edge>> = HashMap::new();
    for e in &boundary {
        at.entry(e.0).or_default().push(*e);
        at.entry(e.1).or_default().push(*e);
    }
    let start = g.edge(1, Side::West);
    let mut picked = vec![start];
    let (mut prev, mut v) = (start, start.1);
    for step in 1..boundary.len() {
        let next = *at[&v].iter().find(|&&e| e != prev).expect("boundary is a cycle");
        if step % 2 == 0 {
            picked.push(next);
        }
        v = if next.0 == v { next.1 } else { next.0 };
        prev = next;
    }
    PerfectMatching::new(picked)
}

pub fn maximal_matching(g: &SnakeGraph) -> PerfectMatching {
    let pmin = minimal_matching(g);
    PerfectMatching::new(g.boundary_edges().into_iter().filter(|e| !pmin.contains(e)).collect())
}

pub fn symmetric_difference(g: &SnakeGraph, p: &PerfectMatching, q: &PerfectMatching) -> Result<Vec<Edge>> {
    if !is_perfect(g, p.edges()) || !is_perfect(g, q.edges()) {
        return Err(Error::NotPerfect);
    }
    Ok(sym_diff(p, q))
}

fn sym_diff(p: &PerfectMatching, q: &PerfectMatching) -> Vec<Edge> {
    let a: BTreeSet<Edge> = p.edges().iter().copied().collect();
    let b: BTreeSet<Edge> = q.edges().iter().copied().collect();
    a.symmetric_difference(&b).copied().collect()
}

/// A maximal run of consecutive enclosed tiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TileInterval {
    pub start: usize,
    pub end: usize,
}

/// Tiles inside the cycles of `p ⊖ pmin`, as a sorted list of positions. A
/// tile is inside iff an odd number of horizontal difference edges lie in its
/// column at or below its floor.
pub fn enclosed_set(g: &SnakeGraph, p: &PerfectMatching, pmin: &PerfectMatching) -> Vec<usize> {
    let diff: Vec<Edge> = sym_diff(p, pmin).into_iter().filter(Edge::is_horizontal).collect();
    (1..=g.tile_count())
        .filter(|&k| {
            let (x, y) = g.tile(k);
            diff.iter().filter(|e| e.0 .0 == x && e.0 .1 <= y).count() % 2 == 1
        })
        .collect()
}

pub fn intervals(positions: &[usize]) -> Vec<TileInterval> {
    let mut out: Vec<TileInterval> = Vec::new();
    for &p in positions {
        match out.last_mut() {
            Some(iv) if iv.end + 1 == p => iv.end = p,
            _ => out.push(TileInterval { start: p, end: p }),
        }
    }
    out
}

pub fn enclosed_tiles(g: &SnakeGraph, p: &PerfectMatching) -> Vec<TileInterval> {
    intervals(&enclosed_set(g, p, &minimal_matching(g)))
}

pub fn rotate_tile(g: &SnakeGraph, p: &PerfectMatching, tile: usize) -> Result<PerfectMatching> {
    if tile < 1 || tile > g.tile_count() {
        return Err(Error::NotRotatable(tile));
    }
    let [n, e, s, w] = g.tile_edges(tile);
    let (old, new) = if p.contains(&n) && p.contains(&s) {
        ([n, s], [e, w])
    } else if p.contains(&e) && p.contains(&w) {
        ([e, w], [n, s])
    } else {
        return Err(Error::NotRotatable(tile));
    };
    let mut edges: Vec<Edge> = p.edges().iter().copied().filter(|x| !old.contains(x)).collect();
    edges.extend(new);
    Ok(PerfectMatching::new(edges))
}

/// Covers go from P to the rotation at tile t whenever the rotation adds t to
/// the enclosed set; labels are tile positions.
pub fn matching_lattice(g: &SnakeGraph) -> CoverLattice<PerfectMatching> {
    let nodes = enumerate_matchings(g);
    let pmin = minimal_matching(g);
    let index: HashMap<&PerfectMatching, usize> = nodes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let enclosed: Vec<Vec<usize>> = nodes.iter().map(|p| enclosed_set(g, p, &pmin)).collect();
    let mut covers = Vec::new();
    for (i, p) in nodes.iter().enumerate() {
        for t in 1..=g.tile_count() {
            if enclosed[i].contains(&t) {
                continue;
            }
            if let Ok(q) = rotate_tile(g, p, t) {
                let j = index[&q];
                if enclosed[j].contains(&t) {
                    covers.push(Cover { lo: i, hi: j, label: t as u32 });
                }
            }
        }
    }
    CoverLattice::new(nodes, covers).expect("matchings of a snake graph form a lattice")
}
