use proptest::prelude::*;

use snakelat_core::calculus::{find_crossings, resolve_crossing, Grafting, Instance, Resolved};
use snakelat_core::lattice::labeled_isomorphic;
use snakelat_core::matchings::{enclosed_tiles, matching_lattice, maximal_matching, TileInterval};
use snakelat_core::modules::DimensionVector;
use snakelat_core::{ArrowWord, Exec, Letter, SnakeGraph, StringModule};

fn letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop_oneof![Just(Letter::Direct), Just(Letter::Inverse)], 0..=max)
}

fn word(max: usize) -> impl Strategy<Value = ArrowWord> {
    letters(max).prop_map(ArrowWord::new)
}

fn labeled(max: usize) -> impl Strategy<Value = ArrowWord> {
    letters(max).prop_flat_map(|l| {
        let n = l.len() + 1;
        prop::collection::vec(1u32..=5, n).prop_map(move |labels| ArrowWord::labeled(l.clone(), labels).unwrap())
    })
}

proptest! {
    #[test]
    fn text_roundtrip(w in prop_oneof![word(10), labeled(10)]) {
        prop_assert_eq!(w.to_string().parse::<ArrowWord>().unwrap(), w);
    }

    #[test]
    fn inverse_and_complement_are_involutions(w in labeled(10)) {
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert_eq!(w.complement().complement(), w.clone());
        prop_assert_eq!(w.inverse().len(), w.len());
    }

    #[test]
    fn runs_partition_the_word(w in word(10)) {
        prop_assume!(!w.is_empty());
        let runs = w.decompose_runs().unwrap();
        let flat: Vec<Letter> = runs.iter().flat_map(|r| std::iter::repeat_n(r.letter, r.len)).collect();
        prop_assert_eq!(flat.as_slice(), w.letters());
        prop_assert!(runs.windows(2).all(|p| p[0].letter != p[1].letter));
    }

    #[test]
    fn labeled_words_are_recovered(w in labeled(9)) {
        let g = SnakeGraph::build(&w);
        prop_assert_eq!(g.canonical_word(), w);
    }

    #[test]
    fn string_and_inverse_have_isomorphic_lattices(w in word(6)) {
        let a = StringModule::new(&w).submodule_lattice();
        let b = StringModule::new(&w.inverse()).submodule_lattice();
        prop_assert_eq!(a.len(), b.len());
        prop_assert_eq!(a.maximal_chain_count(), b.maximal_chain_count());
        // Positions reverse under inversion.
        let n = w.vertex_count() as u32;
        let relabeled = b.map_nodes(|s| s.clone());
        let flipped = snakelat_core::CoverLattice::new(
            relabeled.nodes().to_vec(),
            relabeled.covers().iter().map(|c| snakelat_core::Cover { label: n + 1 - c.label, ..*c }).collect(),
        ).unwrap();
        prop_assert!(labeled_isomorphic(&a, &flipped).is_some());
    }

    #[test]
    fn maximal_matching_encloses_everything(w in word(8)) {
        let g = SnakeGraph::build(&w);
        let n = g.tile_count();
        prop_assert_eq!(enclosed_tiles(&g, &maximal_matching(&g)), vec![TileInterval { start: 1, end: n }]);
        let l = matching_lattice(&g);
        prop_assert_eq!(l.rank(l.top()), n);
    }

    #[test]
    fn counts_agree_for_any_dimension_vector(w in labeled(7), e in prop::collection::btree_map(1u32..=5, 0usize..=3, 0..=3)) {
        let e: DimensionVector = e;
        prop_assert!(StringModule::new(&w).count_submodules(&e).is_ok());
    }

    #[test]
    fn crossings_preserve_vertices(w1 in labeled(5), w2 in labeled(5)) {
        for x in find_crossings(&w1, &w2) {
            let r = resolve_crossing(&x);
            let v = |s: &snakelat_core::calculus::Summand| s.word().map_or(0, |w| w.vertex_count());
            prop_assert_eq!(v(&r.w3) + v(&r.w4), w1.vertex_count() + w2.vertex_count());
            let mut a: Vec<u32> = r.w3.word().unwrap().labels().unwrap().to_vec();
            a.extend(r.w4.word().unwrap().labels().unwrap());
            let mut b: Vec<u32> = w1.labels().unwrap().to_vec();
            b.extend(w2.labels().unwrap());
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn grafting_phi_is_bijective(w1 in word(4), w2 in word(4), pos in 0usize..5, e in any::<bool>()) {
        let pos = pos % (w1.len() + 1) + 1;
        let e = match (pos <= w1.len()).then(|| w1.letter(pos)) {
            Some(a) => a.flip(),
            None => if e { Letter::Direct } else { Letter::Inverse },
        };
        let g = Grafting::new(w1, pos, e, w2).unwrap();
        let rep = Resolved::new(Instance::Grafting(g)).verify(Exec::Sequential);
        prop_assert!(rep.passed(), "{:?}", rep.failures);
    }
}
