//! Finite lattices given by labeled cover relations, plus the posets and
//! order-ideal lattices needed for Birkhoff's representation.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cover {
    pub lo: usize,
    pub hi: usize,
    pub label: u32,
}

impl Serialize for Cover {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.lo, self.hi, self.label).serialize(s)
    }
}

/// Nodes carry arbitrary payloads; order, meets and joins are derived from
/// the covers at construction and cached.
#[derive(Clone, Debug)]
pub struct CoverLattice<T> {
    nodes: Vec<T>,
    covers: Vec<Cover>,
    up: Vec<Vec<(usize, u32)>>,
    down: Vec<Vec<(usize, u32)>>,
    topo: Vec<usize>,
    rank: Vec<usize>,
    leq: Vec<Vec<bool>>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::NotLattice(msg.into())
}

impl<T> CoverLattice<T> {
    pub fn new(nodes: Vec<T>, mut covers: Vec<Cover>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(invalid("no nodes"));
        }
        covers.sort();
        covers.dedup();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for c in &covers {
            if c.lo >= n || c.hi >= n || c.lo == c.hi {
                return Err(invalid(format!("bad cover {c:?}")));
            }
            up[c.lo].push((c.hi, c.label));
            down[c.hi].push((c.lo, c.label));
        }

        let sources: Vec<usize> = (0..n).filter(|&i| down[i].is_empty()).collect();
        let sinks: Vec<usize> = (0..n).filter(|&i| up[i].is_empty()).collect();
        if sources.len() != 1 || sinks.len() != 1 {
            return Err(invalid(format!("{} minimal and {} maximal nodes", sources.len(), sinks.len())));
        }
        let (bottom, top) = (sources[0], sinks[0]);

        // Kahn's algorithm; rank is the longest path from the bottom.
        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut rank = vec![0; n];
        let mut topo = Vec::with_capacity(n);
        let mut queue = VecDeque::from([bottom]);
        while let Some(x) = queue.pop_front() {
            topo.push(x);
            for &(y, _) in &up[x] {
                rank[y] = rank[y].max(rank[x] + 1);
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if topo.len() != n {
            return Err(invalid("cover graph has a cycle"));
        }

        let mut leq = vec![vec![false; n]; n];
        for &x in topo.iter().rev() {
            leq[x][x] = true;
            for &(y, _) in &up[x] {
                let above_y = leq[y].clone();
                for (dst, src) in leq[x].iter_mut().zip(above_y) {
                    *dst |= src;
                }
            }
        }

        let mut lat = CoverLattice {
            nodes,
            covers,
            up,
            down,
            topo,
            rank,
            leq,
            meet: vec![usize::MAX; n * n],
            join: vec![usize::MAX; n * n],
            bottom,
            top,
        };
        lat.fill_meets()?;
        lat.fill_joins()?;
        Ok(lat)
    }

    /// meet(a, b) for a not below b is the largest of meet(a', b) over the
    /// lower covers a' of a; in a lattice that largest element exists.
    fn fill_meets(&mut self) -> Result<()> {
        let n = self.len();
        for ai in 0..n {
            let a = self.topo[ai];
            for b in 0..n {
                let m = if self.leq[a][b] {
                    a
                } else if self.leq[b][a] {
                    b
                } else {
                    let cands: Vec<usize> = self.down[a].iter().map(|&(a2, _)| self.meet[a2 * n + b]).collect();
                    *cands
                        .iter()
                        .find(|&&c| cands.iter().all(|&d| self.leq[d][c]))
                        .ok_or_else(|| invalid(format!("nodes {a} and {b} have no meet")))?
                };
                self.meet[a * n + b] = m;
            }
        }
        Ok(())
    }

    fn fill_joins(&mut self) -> Result<()> {
        let n = self.len();
        for ai in (0..n).rev() {
            let a = self.topo[ai];
            for b in 0..n {
                let j = if self.leq[b][a] {
                    a
                } else if self.leq[a][b] {
                    b
                } else {
                    let cands: Vec<usize> = self.up[a].iter().map(|&(a2, _)| self.join[a2 * n + b]).collect();
                    *cands
                        .iter()
                        .find(|&&c| cands.iter().all(|&d| self.leq[c][d]))
                        .ok_or_else(|| invalid(format!("nodes {a} and {b} have no join")))?
                };
                self.join[a * n + b] = j;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &T {
        &self.nodes[i]
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[(usize, u32)] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[(usize, u32)] {
        &self.down[i]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Nodes in an order compatible with the lattice order.
    pub fn topological(&self) -> &[usize] {
        &self.topo
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn height(&self) -> usize {
        self.rank[self.top]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn find(&self, pred: impl Fn(&T) -> bool) -> Option<usize> {
        self.nodes.iter().position(pred)
    }

    /// All maximal chains have the same length.
    pub fn is_graded(&self) -> bool {
        self.covers.iter().all(|c| self.rank[c.hi] == self.rank[c.lo] + 1)
    }

    /// Both distributive laws over all triples.
    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    self.join(x, self.meet(y, z)) == self.meet(self.join(x, y), self.join(x, z))
                        && self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                })
            })
        })
    }

    pub fn maximal_chain_count(&self) -> u128 {
        let mut paths = vec![0u128; self.len()];
        paths[self.bottom] = 1;
        for &x in &self.topo {
            for &(y, _) in &self.up[x] {
                paths[y] += paths[x];
            }
        }
        paths[self.top]
    }

    /// Label sequences of all maximal chains, bottom to top.
    pub fn maximal_chains(&self) -> Vec<Vec<u32>> {
        fn walk<T>(l: &CoverLattice<T>, x: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if x == l.top {
                out.push(cur.clone());
                return;
            }
            for &(y, lab) in &l.up[x] {
                cur.push(lab);
                walk(l, y, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, self.bottom, &mut Vec::new(), &mut out);
        out
    }

    /// Elements with exactly one lower cover, labeled by that cover.
    pub fn join_irreducibles(&self) -> Poset {
        let elems: Vec<usize> = (0..self.len()).filter(|&i| self.down[i].len() == 1).collect();
        let labels = elems.iter().map(|&i| self.down[i][0].1).collect();
        let leq = elems.iter().map(|&a| elems.iter().map(|&b| self.leq[a][b]).collect()).collect();
        Poset::from_leq(labels, leq).expect("restriction of a partial order")
    }

    pub fn map_nodes<U>(&self, f: impl FnMut(&T) -> U) -> CoverLattice<U> {
        CoverLattice {
            nodes: self.nodes.iter().map(f).collect(),
            covers: self.covers.clone(),
            up: self.up.clone(),
            down: self.down.clone(),
            topo: self.topo.clone(),
            rank: self.rank.clone(),
            leq: self.leq.clone(),
            meet: self.meet.clone(),
            join: self.join.clone(),
            bottom: self.bottom,
            top: self.top,
        }
    }

    pub fn to_dot(&self, name: impl Fn(usize, &T) -> String) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
        for (i, t) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", name(i, t).replace('"', "\\\""));
        }
        for c in &self.covers {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", c.lo, c.hi, c.label);
        }
        s.push_str("}\n");
        s
    }
}

impl<T: Serialize> Serialize for CoverLattice<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CoverLattice", 2)?;
        st.serialize_field("nodes", &self.nodes)?;
        st.serialize_field("covers", &self.covers)?;
        st.end()
    }
}

/// A node bijection `a -> b` preserving covers and their labels.
///
/// Nodes are placed bottom-up; each node is sent along a cover carrying the
/// same label as one of its own lower covers, so with distinct labels on the
/// covers out of each node the search never branches.
pub fn labeled_isomorphic<A, B>(a: &CoverLattice<A>, b: &CoverLattice<B>) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.covers.len() != b.covers.len() {
        return None;
    }
    let bset: HashSet<(usize, usize, u32)> = b.covers.iter().map(|c| (c.lo, c.hi, c.label)).collect();
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    map[a.bottom] = b.bottom;
    used[b.bottom] = true;

    fn place<A, B>(
        a: &CoverLattice<A>,
        b: &CoverLattice<B>,
        bset: &HashSet<(usize, usize, u32)>,
        idx: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&x) = a.topo.get(idx) else { return true };
        let (y, lab) = a.down[x][0];
        for &(cand, l) in &b.up[map[y]] {
            if l != lab || used[cand] || b.down[cand].len() != a.down[x].len() {
                continue;
            }
            if a.down[x].iter().all(|&(y2, l2)| bset.contains(&(map[y2], cand, l2))) {
                map[x] = cand;
                used[cand] = true;
                if place(a, b, bset, idx + 1, map, used) {
                    return true;
                }
                used[cand] = false;
                map[x] = usize::MAX;
            }
        }
        false
    }

    if place(a, b, &bset, 1, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// A finite poset with a label per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<u32>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Reflexive-transitive closure of `less` (pairs `a < b`).
    pub fn new(labels: Vec<u32>, less: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in less {
            if a >= n || b >= n {
                return Err(invalid(format!("relation ({a}, {b}) out of range")));
            }
            leq[a][b] = true;
        }
        // Warshall: anything below k reaches everything above k.
        for k in 0..n {
            let above = leq[k].clone();
            for row in leq.iter_mut().filter(|r| r[k]) {
                for (x, &up) in row.iter_mut().zip(&above) {
                    *x |= up;
                }
            }
        }
        Self::from_leq(labels, leq)
    }

    pub fn from_leq(labels: Vec<u32>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(invalid(format!("relation matrix is not {n} x {n}")));
        }
        if let Some((a, b)) = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| leq[a][b] && leq[b][a]) {
            return Err(invalid(format!("elements {a} and {b} are mutually below")));
        }
        Ok(Poset { labels, leq })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Cover pairs `(a, b)` with `a < b` and nothing in between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let lt = |a: usize, b: usize| a != b && self.leq[a][b];
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Strict order relation expressed through labels.
    pub fn relation_by_label(&self) -> BTreeSet<(u32, u32)> {
        let n = self.len();
        let mut out = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] {
                    out.insert((self.labels[a], self.labels[b]));
                }
            }
        }
        out
    }

    /// Equality up to relabeling-preserving bijection. Requires distinct
    /// labels on both sides, in which case the bijection is forced.
    pub fn same_labeled(&self, other: &Poset) -> bool {
        let distinct = |p: &Poset| p.labels.iter().collect::<BTreeSet<_>>().len() == p.len();
        assert!(distinct(self) && distinct(other), "same_labeled needs distinct labels");
        let mut l1 = self.labels.clone();
        let mut l2 = other.labels.clone();
        l1.sort_unstable();
        l2.sort_unstable();
        l1 == l2 && self.relation_by_label() == other.relation_by_label()
    }

    /// All down-closed subsets ordered by inclusion; a cover adds one element
    /// and carries its label.
    pub fn order_ideals(&self) -> CoverLattice<Vec<usize>> {
        let n = self.len();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut nodes: Vec<Vec<usize>> = vec![Vec::new()];
        index.insert(Vec::new(), 0);
        let mut covers = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let cur = nodes[i].clone();
            for e in 0..n {
                if cur.contains(&e) {
                    continue;
                }
                if (0..n).all(|d| d == e || !self.leq[d][e] || cur.contains(&d)) {
                    let mut next = cur.clone();
                    next.push(e);
                    next.sort_unstable();
                    let j = *index.entry(next.clone()).or_insert_with(|| {
                        nodes.push(next);
                        nodes.len() - 1
                    });
                    covers.push(Cover { lo: i, hi: j, label: self.labels[e] });
                }
            }
            i += 1;
        }
        CoverLattice::new(nodes, covers).expect("ideals of a finite poset form a lattice")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(labels: &[u32]) -> CoverLattice<usize> {
        let covers = labels.iter().enumerate().map(|(i, &l)| Cover { lo: i, hi: i + 1, label: l }).collect();
        CoverLattice::new((0..=labels.len()).collect(), covers).unwrap()
    }

    fn diamond(k: usize) -> CoverLattice<usize> {
        let mut covers = Vec::new();
        for i in 1..=k {
            covers.push(Cover { lo: 0, hi: i, label: i as u32 });
            covers.push(Cover { lo: i, hi: k + 1, label: 9 });
        }
        CoverLattice::new((0..k + 2).collect(), covers).unwrap()
    }

    #[test]
    fn chains_are_distributive() {
        assert!(chain(&[1, 2, 3]).is_distributive());
        assert!(diamond(2).is_distributive());
        assert!(!diamond(3).is_distributive());
    }

    #[test]
    fn pentagon_is_not_distributive() {
        // 0 < a < b < 1 and 0 < c < 1
        let covers = vec![
            Cover { lo: 0, hi: 1, label: 1 },
            Cover { lo: 1, hi: 2, label: 2 },
            Cover { lo: 2, hi: 4, label: 3 },
            Cover { lo: 0, hi: 3, label: 4 },
            Cover { lo: 3, hi: 4, label: 5 },
        ];
        let l = CoverLattice::new((0..5).collect(), covers).unwrap();
        assert!(!l.is_distributive());
        assert!(!l.is_graded());
    }

    #[test]
    fn rejects_non_lattices() {
        // two atoms with two common upper bounds
        let covers = vec![
            Cover { lo: 0, hi: 1, label: 1 },
            Cover { lo: 0, hi: 2, label: 2 },
            Cover { lo: 1, hi: 3, label: 3 },
            Cover { lo: 2, hi: 3, label: 3 },
            Cover { lo: 1, hi: 4, label: 4 },
            Cover { lo: 2, hi: 4, label: 4 },
            Cover { lo: 3, hi: 5, label: 5 },
            Cover { lo: 4, hi: 5, label: 5 },
        ];
        assert!(matches!(CoverLattice::new((0..6).collect(), covers), Err(Error::NotLattice(_))));
        let two_tops = vec![Cover { lo: 0, hi: 1, label: 1 }, Cover { lo: 0, hi: 2, label: 1 }];
        assert!(CoverLattice::new(vec![(); 3], two_tops).is_err());
        let cycle = vec![Cover { lo: 0, hi: 1, label: 1 }, Cover { lo: 1, hi: 0, label: 1 }];
        assert!(CoverLattice::new(vec![(); 2], cycle).is_err());
    }

    #[test]
    fn join_irreducibles_of_small_lattices() {
        let c = chain(&[1]);
        assert_eq!(c.join_irreducibles().len(), 1);
        let c4 = chain(&[3, 2, 1]);
        let p = c4.join_irreducibles();
        assert_eq!(p.len(), 3);
        assert_eq!(p.hasse().len(), 2);
        let b = diamond(2).join_irreducibles();
        assert_eq!(b.len(), 2);
        assert!(b.hasse().is_empty());
    }

    #[test]
    fn ideals() {
        let anti = Poset::new(vec![1, 2], &[]).unwrap();
        let l = anti.order_ideals();
        assert_eq!(l.len(), 4);
        let ch = Poset::new(vec![1, 2, 3], &[(0, 1), (1, 2)]).unwrap();
        let l = ch.order_ideals();
        assert_eq!(l.len(), 4);
        assert_eq!(l.maximal_chains(), vec![vec![1, 2, 3]]);
        assert!(Poset::new(vec![1, 2], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn isomorphism_respects_labels() {
        assert!(labeled_isomorphic(&chain(&[1]), &chain(&[1])).is_some());
        assert!(labeled_isomorphic(&chain(&[1]), &chain(&[2])).is_none());
        assert!(labeled_isomorphic(&chain(&[1, 2]), &chain(&[2, 1])).is_none());
        let d = diamond(2);
        assert_eq!(labeled_isomorphic(&d, &d), Some((0..4).collect()));
    }

    #[test]
    fn lattice_json() {
        let v = serde_json::to_string(&chain(&[2])).unwrap();
        assert_eq!(v, r#"{"nodes":[0,1],"covers":[[0,1,2]]}"#);
    }
}
