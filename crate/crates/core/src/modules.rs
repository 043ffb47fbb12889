//! String modules through their supports: a submodule is a set of vertex
//! positions closed under following arrows.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Cover, CoverLattice, Poset};
use crate::matchings::{enclosed_set, enumerate_matchings, intervals, is_perfect, minimal_matching, PerfectMatching, TileInterval};
use crate::snake::{Edge, SnakeGraph};
use crate::strings::{ArrowWord, Letter};

/// Multiplicity of each vertex label.
pub type DimensionVector = BTreeMap<u32, usize>;

/// Sorted support of a canonical submodule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Submodule(Vec<usize>);

impl Submodule {
    pub fn support(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn intervals(&self) -> Vec<TileInterval> {
        intervals(&self.0)
    }
}

#[derive(Clone, Debug)]
pub struct StringModule {
    word: ArrowWord,
    graph: SnakeGraph,
    pmin: PerfectMatching,
}

impl StringModule {
    pub fn new(word: &ArrowWord) -> Self {
        let graph = SnakeGraph::build(word);
        let pmin = minimal_matching(&graph);
        StringModule { word: word.clone(), graph, pmin }
    }

    /// The module of the word a graph is built from.
    pub fn from_graph(g: &SnakeGraph) -> Self {
        Self::new(&g.canonical_word())
    }

    pub fn word(&self) -> &ArrowWord {
        &self.word
    }

    pub fn graph(&self) -> &SnakeGraph {
        &self.graph
    }

    pub fn minimal_matching(&self) -> &PerfectMatching {
        &self.pmin
    }

    pub fn dim(&self) -> usize {
        self.word.vertex_count()
    }

    pub fn label(&self, p: usize) -> u32 {
        self.word.label(p)
    }

    fn letter(&self, k: usize) -> Letter {
        self.word.letter(k)
    }

    /// Both neighbours point into `p`.
    pub fn is_socle(&self, p: usize) -> bool {
        (p == 1 || self.letter(p - 1) == Letter::Direct) && (p == self.dim() || self.letter(p) == Letter::Inverse)
    }

    /// `p` points into both neighbours.
    pub fn is_top(&self, p: usize) -> bool {
        (p == 1 || self.letter(p - 1) == Letter::Inverse) && (p == self.dim() || self.letter(p) == Letter::Direct)
    }

    /// A direct letter between k and k+1 forces k+1 once k is present; an
    /// inverse one forces k once k+1 is present.
    pub fn is_submodule(&self, support: &[usize]) -> bool {
        let has = |p: usize| support.contains(&p);
        support.iter().all(|&p| (1..=self.dim()).contains(&p))
            && (1..self.dim()).all(|k| match self.letter(k) {
                Letter::Direct => !has(k) || has(k + 1),
                Letter::Inverse => !has(k + 1) || has(k),
            })
    }

    pub fn submodule(&self, support: &[usize]) -> Result<Submodule> {
        let mut s = support.to_vec();
        s.sort_unstable();
        s.dedup();
        if self.is_submodule(&s) { Ok(Submodule(s)) } else { Err(Error::NotSubmodule(s)) }
    }

    pub fn dimension_vector(&self, n: &Submodule) -> DimensionVector {
        let mut v = DimensionVector::new();
        for &p in n.support() {
            *v.entry(self.label(p)).or_insert(0) += 1;
        }
        v
    }

    pub fn matching_to_submodule(&self, p: &PerfectMatching) -> Submodule {
        Submodule(enclosed_set(&self.graph, p, &self.pmin))
    }

    /// Each support interval H takes the boundary edges of H missing from
    /// the minimal matching; the rest of the graph keeps the minimal matching.
    pub fn submodule_to_matching(&self, n: &Submodule) -> Result<PerfectMatching> {
        if !self.is_submodule(n.support()) {
            return Err(Error::NotSubmodule(n.support().to_vec()));
        }
        let mut edges: Vec<Edge> = Vec::new();
        let mut covered = BTreeSet::new();
        for iv in n.intervals() {
            let win = self.graph.restrict(iv.start, iv.end)?;
            for e in win.graph.boundary_edges() {
                let e = e.translate(win.offset);
                covered.extend([e.0, e.1]);
                if !self.pmin.contains(&e) {
                    edges.push(e);
                }
            }
        }
        edges.extend(self.pmin.edges().iter().filter(|e| !covered.contains(&e.0) && !covered.contains(&e.1)));
        if !is_perfect(&self.graph, &edges) {
            return Err(Error::NotPerfect);
        }
        Ok(PerfectMatching::new(edges))
    }

    /// Every successor-closed support, smallest first.
    pub fn submodules(&self) -> Vec<Submodule> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([Vec::new()]);
        let mut frontier = vec![Vec::new()];
        while let Some(s) = frontier.pop() {
            for p in 1..=self.dim() {
                if s.contains(&p) {
                    continue;
                }
                let mut t = s.clone();
                t.push(p);
                t.sort_unstable();
                if self.is_submodule(&t) && seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        let mut out: Vec<Submodule> = seen.into_iter().map(Submodule).collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// Ordered by inclusion; a cover adds one position and is labeled by it.
    pub fn submodule_lattice(&self) -> CoverLattice<Submodule> {
        let nodes = self.submodules();
        let index: HashMap<&[usize], usize> = nodes.iter().enumerate().map(|(i, n)| (n.support(), i)).collect();
        let mut covers = Vec::new();
        for (i, n) in nodes.iter().enumerate() {
            for p in 1..=self.dim() {
                if n.contains(p) {
                    continue;
                }
                let mut t = n.support().to_vec();
                t.push(p);
                t.sort_unstable();
                if let Some(&j) = index.get(t.as_slice()) {
                    covers.push(Cover { lo: i, hi: j, label: p as u32 });
                }
            }
        }
        CoverLattice::new(nodes, covers).expect("closed supports form a lattice")
    }

    /// Submodules with dimension vector `e`, counted once over supports and
    /// once over perfect matchings; the two counts must agree.
    pub fn count_submodules(&self, e: &DimensionVector) -> Result<usize> {
        let e: DimensionVector = e.iter().filter(|(_, &c)| c > 0).map(|(&k, &c)| (k, c)).collect();
        let direct = self.submodules().iter().filter(|n| self.dimension_vector(n) == e).count();
        let via_matchings = enumerate_matchings(&self.graph)
            .iter()
            .filter(|p| self.dimension_vector(&self.matching_to_submodule(p)) == e)
            .count();
        if direct == via_matchings {
            Ok(direct)
        } else {
            Err(Error::CountMismatch { direct, via_matchings })
        }
    }

    /// Support of the submodule generated by `p`: extend left across inverse
    /// letters and right across direct ones.
    pub fn generated(&self, p: usize) -> TileInterval {
        let (mut l, mut r) = (p, p);
        while l > 1 && self.letter(l - 1) == Letter::Inverse {
            l -= 1;
        }
        while r < self.dim() && self.letter(r) == Letter::Direct {
            r += 1;
        }
        TileInterval { start: l, end: r }
    }

    /// The submodules with simple top, one per position, ordered by
    /// inclusion and labeled by position.
    pub fn join_irreducible_poset(&self) -> Poset {
        let gens: Vec<TileInterval> = (1..=self.dim()).map(|p| self.generated(p)).collect();
        let inside = |a: &TileInterval, b: &TileInterval| b.start <= a.start && a.end <= b.end;
        let leq = gens.iter().map(|a| gens.iter().map(|b| inside(a, b)).collect()).collect();
        Poset::from_leq((1..=self.dim() as u32).collect(), leq).expect("interval inclusion is a partial order")
    }
}
