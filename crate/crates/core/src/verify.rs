//! Whole-pipeline checks on single words and exhaustive sweeps.

use std::collections::HashMap;

use serde::Serialize;

use crate::bruhat::{commutation_connected, reduced_words, verify_three_way};
use crate::exec::Exec;
use crate::lattice::labeled_isomorphic;
use crate::matchings::{enumerate_matchings, matching_lattice, maximal_matching, minimal_matching};
use crate::modules::StringModule;
use crate::snake::{Sign, SnakeGraph};
use crate::strings::{ArrowWord, Letter};

/// A violated property together with the input that violates it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Falsification {
    pub property: String,
    pub input: String,
    pub detail: String,
}

impl Falsification {
    pub fn new(property: &str, input: impl ToString, detail: impl Into<String>) -> Self {
        Falsification { property: property.to_string(), input: input.to_string(), detail: detail.into() }
    }
}

/// Building then reading back the word gives the word.
pub fn check_roundtrip(w: &ArrowWord) -> Vec<Falsification> {
    let w = if w.is_labeled() { w.clone() } else { w.with_default_labels() };
    let g = SnakeGraph::build(&w);
    let sign = match w.letters().first() {
        Some(Letter::Inverse) => Sign::Minus,
        _ => Sign::Plus,
    };
    let mut out = Vec::new();
    if g.recover_word(sign) != w {
        out.push(Falsification::new("word is recovered from its snake graph", &w, g.recover_word(sign).to_string()));
    }
    if g.canonical_word() != w {
        out.push(Falsification::new("canonical word of the graph is the source word", &w, g.canonical_word().to_string()));
    }
    out
}

/// Matchings and submodules translate into each other and back.
pub fn check_bijection(w: &ArrowWord) -> Vec<Falsification> {
    let m = StringModule::new(w);
    let g = m.graph();
    let mut out = Vec::new();
    let matchings = enumerate_matchings(g);
    let boundary_only: Vec<_> = {
        let b = g.boundary_edges();
        matchings.iter().filter(|p| p.edges().iter().all(|e| b.contains(e))).cloned().collect()
    };
    let mut expected = vec![minimal_matching(g), maximal_matching(g)];
    expected.sort();
    if boundary_only != expected {
        out.push(Falsification::new("exactly the extreme matchings are boundary-only", w, format!("{} boundary-only", boundary_only.len())));
    }
    let socles: Vec<usize> = (1..=m.dim()).filter(|&p| m.is_socle(p)).collect();
    let doubled: Vec<usize> = (1..=m.dim())
        .filter(|&k| g.tile_edges(k).iter().filter(|e| m.minimal_matching().contains(e)).count() == 2)
        .collect();
    if g.tile_count() > 1 && socles != doubled {
        out.push(Falsification::new("minimal matching doubles exactly the socle tiles", w, format!("{socles:?} vs {doubled:?}")));
    }
    for p in &matchings {
        let n = m.matching_to_submodule(p);
        if !m.is_submodule(n.support()) {
            out.push(Falsification::new("enclosed tiles form a submodule", w, format!("{:?}", n.support())));
            continue;
        }
        match m.submodule_to_matching(&n) {
            Ok(q) if q == *p => {}
            Ok(_) => out.push(Falsification::new("submodule of a matching maps back to it", w, format!("{:?}", n.support()))),
            Err(e) => out.push(Falsification::new("submodule of a matching maps back to it", w, e.to_string())),
        }
    }
    let subs = m.submodules();
    if subs.len() != matchings.len() {
        out.push(Falsification::new("submodules and matchings are equinumerous", w, format!("{} vs {}", subs.len(), matchings.len())));
    }
    for n in &subs {
        match m.submodule_to_matching(n) {
            Ok(q) if m.matching_to_submodule(&q) == *n => {}
            _ => out.push(Falsification::new("matching of a submodule maps back to it", w, format!("{:?}", n.support()))),
        }
    }
    out
}

/// Distributivity, grading, Birkhoff reconstruction and the join-irreducible
/// poset read from the string.
pub fn check_lattices(w: &ArrowWord) -> Vec<Falsification> {
    let m = StringModule::new(w);
    let lg = matching_lattice(m.graph());
    let lm = m.submodule_lattice();
    let mut out = Vec::new();
    for (name, ok) in [
        ("matching lattice is distributive", lg.is_distributive()),
        ("submodule lattice is distributive", lm.is_distributive()),
        ("matching lattice is graded", lg.is_graded()),
        ("matching lattice runs from minimal to maximal matching", {
            lg.node(lg.bottom()) == m.minimal_matching() && *lg.node(lg.top()) == maximal_matching(m.graph())
        }),
    ] {
        if !ok {
            out.push(Falsification::new(name, w, ""));
        }
    }
    let pmin = m.minimal_matching();
    let graded_by_size = (0..lg.len()).all(|i| lg.rank(i) == m.matching_to_submodule(lg.node(i)).len() && {
        let _ = pmin;
        true
    });
    if !graded_by_size {
        out.push(Falsification::new("rank equals number of enclosed tiles", w, ""));
    }
    let perm: Vec<u32> = (1..=m.dim() as u32).collect();
    for chain in lg.maximal_chains() {
        let mut c = chain.clone();
        c.sort_unstable();
        if c != perm {
            out.push(Falsification::new("maximal chain labels are a permutation of the tiles", w, format!("{chain:?}")));
            break;
        }
    }
    let ji = lg.join_irreducibles();
    if labeled_isomorphic(&ji.order_ideals(), &lg).is_none() {
        out.push(Falsification::new("order ideals of join irreducibles rebuild the lattice", w, ""));
    }
    if ji.len() != m.dim() {
        out.push(Falsification::new("one join irreducible per position", w, format!("{}", ji.len())));
    } else if !m.join_irreducible_poset().same_labeled(&ji) {
        out.push(Falsification::new("join irreducibles read from the string", w, ""));
    }
    let simple_tops = (0..lm.len()).filter(|&i| {
        let n = lm.node(i);
        n.support().iter().filter(|&&p| lm.find(|x| x.support() == remove(n.support(), p)).is_some()).count() == 1
    });
    let one_lower: Vec<usize> = (0..lm.len()).filter(|&i| lm.lower_covers(i).len() == 1).collect();
    if simple_tops.collect::<Vec<_>>() != one_lower {
        out.push(Falsification::new("join irreducibles are the submodules with simple top", w, ""));
    }
    out
}

fn remove(s: &[usize], p: usize) -> Vec<usize> {
    s.iter().copied().filter(|&x| x != p).collect()
}

/// Three-way isomorphism plus the reduced-word properties of the Coxeter
/// element.
pub fn check_bruhat(w: &ArrowWord) -> Vec<Falsification> {
    let m = StringModule::new(w);
    let r = verify_three_way(&m);
    let mut out = r.failures.clone();
    if let Some(sigma) = &r.sigma {
        let words = reduced_words(sigma);
        if !commutation_connected(&words) {
            out.push(Falsification::new("reduced words form one commutation class", w, ""));
        }
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for &i in &r.witness {
            *counts.entry(i).or_insert(0) += 1;
        }
        if counts.values().any(|&c| c != 1) {
            out.push(Falsification::new("each generator occurs once", w, format!("{:?}", r.witness)));
        }
    }
    out
}

pub fn check_word(w: &ArrowWord) -> Vec<Falsification> {
    let mut out = check_roundtrip(w);
    out.extend(check_bijection(w));
    out.extend(check_lattices(w));
    out.extend(check_bruhat(w));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub max_len: usize,
    pub words: usize,
    pub failures: Vec<Falsification>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run `check` on every unlabeled word with at most `max_len` letters.
pub fn sweep_with(max_len: usize, exec: Exec, check: impl Fn(&ArrowWord) -> Vec<Falsification> + Sync + Send) -> SweepReport {
    let words: Vec<ArrowWord> = ArrowWord::all_up_to(max_len).collect();
    let failures = exec.map(&words, check).into_iter().flatten().collect();
    SweepReport { max_len, words: words.len(), failures }
}

pub fn sweep(max_len: usize, exec: Exec) -> SweepReport {
    sweep_with(max_len, exec, check_word)
}
