//! Permutations, reduced words and intervals of the right weak order.
//!
//! Words are evaluated left to right starting from the identity: the letter
//! `i` swaps the entries in positions `i` and `i + 1` of the one-line form,
//! i.e. multiplies by `s_i` on the right.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{labeled_isomorphic, Cover, CoverLattice};
use crate::matchings::matching_lattice;
use crate::modules::StringModule;
use crate::verify::Falsification;

pub type ReducedWord = Vec<u32>;

/// One-line notation on `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn from_one_line(v: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; v.len()];
        for &x in &v {
            let i = (x as usize).checked_sub(1)?;
            if i >= v.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(v))
    }

    /// Evaluate a word in `S_n`, first letter first.
    pub fn from_word(n: usize, word: &[u32]) -> Self {
        word.iter().fold(Self::identity(n), |p, &i| p.times_simple(i))
    }

    pub fn one_line(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let v = &self.0;
        (0..v.len()).map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count()).sum()
    }

    pub fn times_simple(&self, i: u32) -> Self {
        let mut v = self.0.clone();
        v.swap(i as usize - 1, i as usize);
        Permutation(v)
    }

    pub fn inverse(&self) -> Self {
        let mut v = vec![0; self.n()];
        for (j, &x) in self.0.iter().enumerate() {
            v[x as usize - 1] = j as u32 + 1;
        }
        Permutation(v)
    }

    /// `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&j| self.0[j as usize - 1]).collect())
    }

    /// Positions `i` with `σ(i) > σ(i+1)`.
    pub fn right_descents(&self) -> Vec<u32> {
        (1..self.n()).filter(|&i| self.0[i - 1] > self.0[i]).map(|i| i as u32).collect()
    }

    pub fn below_in_weak_order(&self, sigma: &Permutation) -> bool {
        self.length() + self.inverse().compose(sigma).length() == sigma.length()
    }
}

/// All reduced words, sorted; recursion peels a right descent off the end.
pub fn reduced_words(sigma: &Permutation) -> Vec<ReducedWord> {
    fn go(p: &Permutation, memo: &mut HashMap<Permutation, Vec<ReducedWord>>) -> Vec<ReducedWord> {
        if let Some(w) = memo.get(p) {
            return w.clone();
        }
        let descents = p.right_descents();
        let out = if descents.is_empty() {
            vec![Vec::new()]
        } else {
            let mut out = Vec::new();
            for i in descents {
                for mut w in go(&p.times_simple(i), memo) {
                    w.push(i);
                    out.push(w);
                }
            }
            out
        };
        memo.insert(p.clone(), out.clone());
        out
    }
    let mut out = go(sigma, &mut HashMap::new());
    out.sort();
    out
}

/// `[e, σ]` in the right weak order; covers `u ⋖ u·s_i` carry label `i`.
pub fn weak_interval(sigma: &Permutation) -> CoverLattice<Permutation> {
    let e = Permutation::identity(sigma.n());
    let mut index: HashMap<Permutation, usize> = HashMap::from([(e.clone(), 0)]);
    let mut nodes = vec![e];
    let mut covers = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        let u = nodes[x].clone();
        for i in 1..sigma.n() as u32 {
            if u.0[i as usize - 1] > u.0[i as usize] {
                continue;
            }
            let v = u.times_simple(i);
            if !v.below_in_weak_order(sigma) {
                continue;
            }
            let y = *index.entry(v.clone()).or_insert_with(|| {
                nodes.push(v);
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            covers.push(Cover { lo: x, hi: y, label: i });
        }
    }
    CoverLattice::new(nodes, covers).expect("weak-order intervals are lattices")
}

/// The permutation read along maximal chains of a position-labeled lattice,
/// in `S_{m+1}` for labels `1..=m`. Every chain is checked: each node gets
/// the product along one chain reaching it, and every cover must agree.
pub fn coxeter_element<T>(l: &CoverLattice<T>) -> Result<(Permutation, ReducedWord)> {
    let n = l.covers().iter().map(|c| c.label as usize).max().unwrap_or(0) + 1;
    let mut perm: Vec<Option<Permutation>> = vec![None; l.len()];
    let mut witness: Vec<ReducedWord> = vec![Vec::new(); l.len()];
    perm[l.bottom()] = Some(Permutation::identity(n));
    for &x in l.topological() {
        let px = perm[x].clone().expect("reached in topological order");
        for &(y, lab) in l.upper_covers(x) {
            let cand = px.times_simple(lab);
            let mut word = witness[x].clone();
            word.push(lab);
            match &perm[y] {
                None => {
                    perm[y] = Some(cand);
                    witness[y] = word;
                }
                Some(q) if *q == cand => {}
                Some(_) => return Err(Error::ChainProducts(witness[y].clone(), word)),
            }
        }
    }
    let top = l.top();
    Ok((perm[top].clone().expect("top reached"), witness[top].clone()))
}

/// Any two words are linked by swaps of adjacent commuting letters.
pub fn commutation_connected(words: &[ReducedWord]) -> bool {
    let Some(first) = words.first() else { return true };
    let all: BTreeSet<&ReducedWord> = words.iter().collect();
    let mut seen: BTreeSet<ReducedWord> = BTreeSet::from([first.clone()]);
    let mut stack = vec![first.clone()];
    while let Some(w) = stack.pop() {
        for k in 0..w.len().saturating_sub(1) {
            if w[k].abs_diff(w[k + 1]) > 1 {
                let mut v = w.clone();
                v.swap(k, k + 1);
                if all.contains(&v) && seen.insert(v.clone()) {
                    stack.push(v);
                }
            }
        }
    }
    seen.len() == all.len()
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreeWayReport {
    pub word: String,
    pub matching_nodes: usize,
    pub submodule_nodes: usize,
    pub interval_nodes: usize,
    pub sigma: Option<Permutation>,
    pub witness: ReducedWord,
    pub reduced_words: usize,
    pub maximal_chains: u128,
    pub failures: Vec<Falsification>,
}

impl ThreeWayReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Matching lattice, submodule lattice and weak-order interval of a string
/// module, compared pairwise as labeled lattices.
pub fn verify_three_way(m: &StringModule) -> ThreeWayReport {
    let lg = matching_lattice(m.graph());
    let lm = m.submodule_lattice();
    let mut failures = Vec::new();
    let mut fail = |property: &'static str, detail: String| failures.push(Falsification::new(property, m.word(), detail));

    if labeled_isomorphic(&lg, &lm).is_none() {
        fail("matching lattice is isomorphic to submodule lattice", format!("{} vs {} nodes", lg.len(), lm.len()));
    }
    let (sigma, witness) = match coxeter_element(&lm) {
        Ok(x) => x,
        Err(e) => {
            fail("maximal chains evaluate to one permutation", e.to_string());
            let n = lm.len();
            return ThreeWayReport {
                word: m.word().to_string(),
                matching_nodes: lg.len(),
                submodule_nodes: n,
                interval_nodes: 0,
                sigma: None,
                witness: Vec::new(),
                reduced_words: 0,
                maximal_chains: lm.maximal_chain_count(),
                failures,
            };
        }
    };
    if sigma.length() != witness.len() {
        fail("chain words are reduced", format!("{:?} has length {}", witness, sigma.length()));
    }
    let interval = weak_interval(&sigma);
    if labeled_isomorphic(&lm, &interval).is_none() {
        fail("submodule lattice is isomorphic to the weak-order interval", format!("{} vs {} nodes", lm.len(), interval.len()));
    }
    if labeled_isomorphic(&lg, &interval).is_none() {
        fail("matching lattice is isomorphic to the weak-order interval", format!("{} vs {} nodes", lg.len(), interval.len()));
    }
    let words = reduced_words(&sigma);
    let chains = lm.maximal_chain_count();
    if words.len() as u128 != chains {
        fail("reduced words correspond to maximal chains", format!("{} words, {} chains", words.len(), chains));
    }
    ThreeWayReport {
        word: m.word().to_string(),
        matching_nodes: lg.len(),
        submodule_nodes: lm.len(),
        interval_nodes: interval.len(),
        sigma: Some(sigma),
        witness,
        reduced_words: words.len(),
        maximal_chains: chains,
        failures,
    }
}
