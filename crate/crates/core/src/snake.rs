//! Snake graphs in the fixed chart: tile 1 has its lower-left corner at the
//! origin and each further tile is glued to the right of or on top of the
//! previous one.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::strings::{ArrowWord, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Dir {
    #[serde(rename = "R")]
    Right,
    #[serde(rename = "U")]
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Right => Dir::Up,
            Dir::Up => Dir::Right,
        }
    }

    fn step(self) -> Point {
        match self {
            Dir::Right => (1, 0),
            Dir::Up => (0, 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

pub type Point = (i32, i32);

/// A unit segment, stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub Point, pub Point);

impl Edge {
    pub fn new(p: Point, q: Point) -> Edge {
        if p <= q { Edge(p, q) } else { Edge(q, p) }
    }

    pub fn is_horizontal(&self) -> bool {
        self.0 .1 == self.1 .1
    }

    pub fn touches(&self, v: Point) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn translate(&self, by: Point) -> Edge {
        Edge::new((self.0 .0 + by.0, self.0 .1 + by.1), (self.1 .0 + by.0, self.1 .1 + by.1))
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0 .0, self.0 .1, self.1 .0, self.1 .1].serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    North,
    East,
    South,
    West,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnakeGraph {
    directions: Vec<Dir>,
    weights: Vec<u32>,
    #[serde(skip)]
    tiles: Vec<Point>,
}

/// A contiguous run of tiles cut out of a host graph, re-embedded in its own
/// chart. `offset` is where the window's origin sits in the host chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub graph: SnakeGraph,
    pub start: usize,
    pub end: usize,
    pub offset: Point,
}

impl SnakeGraph {
    pub fn from_directions(directions: Vec<Dir>, weights: Option<Vec<u32>>) -> Result<Self> {
        let m = directions.len() + 1;
        let weights = weights.unwrap_or_else(|| (1..=m as u32).collect());
        if weights.len() != m {
            return Err(Error::LabelCount { expected: m, got: weights.len() });
        }
        let mut tiles = Vec::with_capacity(m);
        tiles.push((0, 0));
        for d in &directions {
            let (x, y) = *tiles.last().unwrap();
            let (dx, dy) = d.step();
            tiles.push((x + dx, y + dy));
        }
        Ok(SnakeGraph { directions, weights, tiles })
    }

    /// Zigzag inside each maximal run of equal letters, straight across run
    /// boundaries.
    pub fn build(w: &ArrowWord) -> SnakeGraph {
        let a = w.letters();
        let mut dirs: Vec<Dir> = Vec::with_capacity(a.len());
        for (k, &l) in a.iter().enumerate() {
            let d = match dirs.last() {
                None => if l == Letter::Direct { Dir::Right } else { Dir::Up },
                Some(&prev) if a[k - 1] == l => prev.flip(),
                Some(&prev) => prev,
            };
            dirs.push(d);
        }
        let weights = (1..=w.vertex_count()).map(|p| w.label(p)).collect();
        SnakeGraph::from_directions(dirs, Some(weights)).expect("weights sized from the word")
    }

    pub fn directions(&self) -> &[Dir] {
        &self.directions
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    /// Lower-left corners, tile 1 first.
    pub fn tiles(&self) -> &[Point] {
        &self.tiles
    }

    pub fn tile(&self, k: usize) -> Point {
        self.tiles[k - 1]
    }

    pub fn weight(&self, k: usize) -> u32 {
        self.weights[k - 1]
    }

    pub fn edge(&self, k: usize, side: Side) -> Edge {
        let (x, y) = self.tile(k);
        match side {
            Side::North => Edge((x, y + 1), (x + 1, y + 1)),
            Side::East => Edge((x + 1, y), (x + 1, y + 1)),
            Side::South => Edge((x, y), (x + 1, y)),
            Side::West => Edge((x, y), (x, y + 1)),
        }
    }

    /// North, east, south, west.
    pub fn tile_edges(&self, k: usize) -> [Edge; 4] {
        [Side::North, Side::East, Side::South, Side::West].map(|s| self.edge(k, s))
    }

    /// Edge shared by tiles `k` and `k + 1`.
    pub fn shared_edge(&self, k: usize) -> Edge {
        match self.directions[k - 1] {
            Dir::Right => self.edge(k, Side::East),
            Dir::Up => self.edge(k, Side::North),
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        let set: BTreeSet<Edge> = (1..=self.tile_count()).flat_map(|k| self.tile_edges(k)).collect();
        set.into_iter().collect()
    }

    pub fn interior_edges(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = (1..self.tile_count()).map(|k| self.shared_edge(k)).collect();
        v.sort();
        v
    }

    pub fn boundary_edges(&self) -> Vec<Edge> {
        let interior: BTreeSet<Edge> = self.interior_edges().into_iter().collect();
        self.edges().into_iter().filter(|e| !interior.contains(e)).collect()
    }

    pub fn vertices(&self) -> Vec<Point> {
        let set: BTreeSet<Point> = self.edges().iter().flat_map(|e| [e.0, e.1]).collect();
        set.into_iter().collect()
    }

    /// Tiles containing the edge (one for boundary edges, two otherwise).
    pub fn tiles_of_edge(&self, e: &Edge) -> Vec<usize> {
        (1..=self.tile_count()).filter(|&k| self.tile_edges(k).contains(e)).collect()
    }

    /// Whether tiles `j, j+1, j+2` form a zigzag (as opposed to a straight piece).
    pub fn is_zigzag(&self, j: usize) -> bool {
        self.directions[j - 1] != self.directions[j]
    }

    pub fn arrow_function(&self, sign: Sign) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(self.directions.len());
        for k in 0..self.directions.len() {
            let v = match out.last() {
                None => if sign == Sign::Plus { Letter::Direct } else { Letter::Inverse },
                Some(&prev) if self.is_zigzag(k) => prev,
                Some(&prev) => prev.flip(),
            };
            out.push(v);
        }
        out
    }

    pub fn recover_word(&self, sign: Sign) -> ArrowWord {
        ArrowWord::labeled(self.arrow_function(sign), self.weights.clone()).expect("one weight per tile")
    }

    /// The word this graph is built from: `f+` when the first gluing goes
    /// right, `f-` otherwise.
    pub fn canonical_word(&self) -> ArrowWord {
        let sign = match self.directions.first() {
            Some(Dir::Up) => Sign::Minus,
            _ => Sign::Plus,
        };
        self.recover_word(sign)
    }

    pub fn restrict(&self, start: usize, end: usize) -> Result<Window> {
        if start < 1 || start > end || end > self.tile_count() {
            return Err(Error::Window { start, end, tiles: self.tile_count() });
        }
        let graph = SnakeGraph::from_directions(
            self.directions[start - 1..end - 1].to_vec(),
            Some(self.weights[start - 1..end].to_vec()),
        )?;
        Ok(Window { graph, start, end, offset: self.tile(start) })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    /// Neato-style drawing with pinned coordinates; tile weights sit at tile
    /// centres.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph snake {\n  node [shape=point];\n");
        for (x, y) in self.vertices() {
            let _ = writeln!(s, "  \"{x},{y}\" [pos=\"{x},{y}!\"];");
        }
        for Edge((a, b), (c, d)) in self.edges() {
            let _ = writeln!(s, "  \"{a},{b}\" -- \"{c},{d}\";");
        }
        for k in 1..=self.tile_count() {
            let (x, y) = self.tile(k);
            let _ = writeln!(
                s,
                "  t{k} [shape=plaintext, label=\"{}\", pos=\"{}.5,{}.5!\"];",
                self.weight(k),
                x,
                y
            );
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_snake(w: &ArrowWord) -> SnakeGraph {
    SnakeGraph::build(w)
}
