//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines always show; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use snakelat_core::calculus::{find_crossings, Grafting, resolve_crossing, Instance, Resolved, Summand};
use snakelat_core::matchings::{matching_lattice, PerfectMatching};
use snakelat_core::snake::{Dir, Edge, Sign};
use snakelat_core::strings::Letter::{Direct as D, Inverse as I};
use snakelat_core::verify::{check_bijection, check_bruhat, check_lattices, check_roundtrip, sweep_with};
use snakelat_core::{ArrowWord, Exec, SnakeGraph, StringModule};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn w(s: &str) -> ArrowWord {
    s.parse().unwrap()
}

fn within(limit: Duration, t: Instant) -> std::result::Result<Duration, String> {
    let e = t.elapsed();
    if e <= limit { Ok(e) } else { Err(format!("took {e:?}, limit {limit:?}")) }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn arrow_functions() -> Outcome {
    let word = w("1>2>3>4<5>6");
    let t = Instant::now();
    let g = SnakeGraph::build(&word);
    let dirs = g.directions().to_vec();
    let plus = g.arrow_function(Sign::Plus);
    let minus = g.arrow_function(Sign::Minus);
    let e = within(Duration::from_millis(1), t)?;
    ensure(dirs == [Dir::Right, Dir::Up, Dir::Right, Dir::Right, Dir::Right], || format!("directions {dirs:?}"))?;
    ensure(plus == [D, D, D, I, D], || format!("f+ {plus:?}"))?;
    ensure(minus == [I, I, I, D, I], || format!("f- {minus:?}"))?;
    Ok(format!("{e:?}"))
}

fn straight_lattice() -> Outcome {
    let t = Instant::now();
    let l = matching_lattice(&SnakeGraph::from_directions(vec![Dir::Right, Dir::Right], None).unwrap());
    let e = within(Duration::from_millis(1), t)?;
    ensure(l.len() == 5, || format!("{} matchings", l.len()))?;
    let bottom: Vec<u32> = l.upper_covers(l.bottom()).iter().map(|c| c.1).collect();
    ensure(bottom == [2], || format!("covers above bottom {bottom:?}"))?;
    let mut chains = l.maximal_chains();
    chains.sort();
    ensure(chains == [vec![2, 1, 3], vec![2, 3, 1]], || format!("chains {chains:?}"))?;
    ensure(l.covers().len() == 5, || format!("{} covers", l.covers().len()))?;
    Ok(format!("{e:?}"))
}

fn displayed_matchings() -> Outcome {
    let m = StringModule::new(&w("1>2>3>4<5"));
    let e = |a: (i32, i32), b: (i32, i32)| Edge::new(a, b);
    let first = PerfectMatching::of(
        m.graph(),
        vec![e((0, 0), (0, 1)), e((1, 0), (2, 0)), e((1, 1), (2, 1)), e((1, 2), (2, 2)), e((3, 1), (3, 2)), e((4, 1), (4, 2))],
    )
    .map_err(|x| x.to_string())?;
    let second = PerfectMatching::of(
        m.graph(),
        vec![e((0, 0), (0, 1)), e((1, 0), (2, 0)), e((1, 1), (1, 2)), e((2, 1), (2, 2)), e((3, 1), (3, 2)), e((4, 1), (4, 2))],
    )
    .map_err(|x| x.to_string())?;
    let a = m.matching_to_submodule(&first);
    let b = m.matching_to_submodule(&second);
    ensure(a.support() == [3, 4], || format!("first {:?}", a.support()))?;
    ensure(b.support() == [4], || format!("second {:?}", b.support()))?;
    ensure(m.submodule_to_matching(&a) == Ok(first) && m.submodule_to_matching(&b) == Ok(second), || "inverse map".into())?;
    Ok("{3,4} and {4}".into())
}

fn roundtrips() -> Outcome {
    let t = Instant::now();
    let unlabeled = sweep_with(8, Exec::default(), |x| {
        let mut f = check_roundtrip(x);
        f.extend(check_bijection(x));
        f
    });
    // Labeled variants: repeated and shuffled face weights.
    let labeled = sweep_with(8, Exec::default(), |x| {
        let n = x.vertex_count() as u32;
        let cyc = ArrowWord::labeled(x.letters().to_vec(), (0..n).map(|i| i % 3 + 1).collect()).unwrap();
        let rev = ArrowWord::labeled(x.letters().to_vec(), (1..=n).rev().collect()).unwrap();
        let mut f = check_roundtrip(&cyc);
        f.extend(check_roundtrip(&rev));
        f.extend(check_bijection(&cyc));
        f
    });
    let e = within(Duration::from_secs(60), t)?;
    let failures: Vec<_> = unlabeled.failures.iter().chain(&labeled.failures).collect();
    ensure(failures.is_empty(), || format!("{} failures, first {:?}", failures.len(), failures[0]))?;
    Ok(format!("{} words, {e:?}", unlabeled.words))
}

fn three_way() -> Outcome {
    let t = Instant::now();
    let r = sweep_with(7, Exec::default(), check_bruhat);
    let e = within(Duration::from_secs(300), t)?;
    ensure(r.passed(), || format!("{} failures, first {:?}", r.failures.len(), r.failures[0]))?;
    Ok(format!("{} words, {e:?}", r.words))
}

fn birkhoff() -> Outcome {
    let r = sweep_with(7, Exec::default(), check_lattices);
    ensure(r.passed(), || format!("{} failures, first {:?}", r.failures.len(), r.failures[0]))?;
    let x = w("1<2>3>1<2");
    ensure(check_lattices(&x).is_empty(), || "worked example".into())?;
    let m = StringModule::new(&x);
    let ji = matching_lattice(m.graph()).join_irreducibles();
    ensure(m.join_irreducible_poset().same_labeled(&ji), || "worked example poset".into())?;
    // Positions 4 and 5 carry face weights 1 and 2.
    ensure((m.label(4), m.label(5)) == (1, 2), || "identifications".into())?;
    let cover: Vec<(u32, u32)> = ji.hasse().into_iter().map(|(a, b)| (ji.labels()[a], ji.labels()[b])).collect();
    ensure(cover.len() == 4, || format!("hasse {cover:?}"))?;
    Ok(format!("{} words, worked example hasse {cover:?}", r.words))
}

fn crossing_golden() -> Outcome {
    let xs = find_crossings(&w("1>2>3>4<5>6"), &w("7<3>4>8"));
    ensure(xs.len() == 1, || format!("{} crossings", xs.len()))?;
    let r = resolve_crossing(&xs[0]);
    let got = r.summands().map(Summand::to_string);
    ensure(got == ["1>2>3>4>8", "7<3>4<5>6", "1>2<7", "6<5<8"], || format!("{got:?}"))?;
    let c = Resolved::new(Instance::Crossing(xs[0].clone())).matchings().map(|m| m.len());
    ensure(c[4] == 5 && c[5] == 4, || format!("counts {c:?}"))?;
    ensure(c[0] * c[1] == c[2] * c[3] + c[4] * c[5], || format!("counts {c:?}"))?;
    Ok(format!("counts {c:?}"))
}

/// Deterministic spread over crossings and graftings with words of up to six
/// letters: every k-th instance with both words nonempty.
fn generated_suite() -> Vec<Instance> {
    let mut crossings = Vec::new();
    let mut graftings = Vec::new();
    let words: Vec<ArrowWord> = ArrowWord::all_up_to(6).filter(|x| x.len() >= 2).collect();
    for (i, w1) in words.iter().enumerate().step_by(7) {
        let found = (0..words.len()).map(|k| &words[(i * 7 + 3 + k * 13) % words.len()]).find_map(|w2| {
            let xs = find_crossings(w1, w2);
            let n = xs.len();
            xs.into_iter().nth(i % n.max(1))
        });
        crossings.extend(found.map(Instance::Crossing));
    }
    for (i, w1) in words.iter().enumerate().step_by(11) {
        let w2 = &words[(i * 5 + 1) % words.len()];
        let pos = i % (w1.len() + 1) + 1;
        let e = match (pos <= w1.len()).then(|| w1.letter(pos)) {
            Some(a) => a.flip(),
            None if i % 2 == 0 => D,
            None => I,
        };
        graftings.push(Instance::Grafting(Grafting::new(w1.clone(), pos, e, w2.clone()).unwrap()));
    }
    crossings.truncate(15);
    graftings.truncate(15);
    crossings.extend(graftings);
    crossings
}

fn phi() -> Outcome {
    let t = Instant::now();
    let mut suite = vec![Instance::Crossing(find_crossings(&w("1>2>3>4<5>6"), &w("7<3>4>8")).remove(0))];
    suite.extend(generated_suite());
    let n = suite.len();
    let graftings = suite.iter().filter(|i| matches!(i, Instance::Grafting(_))).count();
    ensure(n >= 21 && graftings >= 10, || format!("suite has {n} instances, {graftings} graftings"))?;
    let reports = Exec::default().map(&suite, |i| Resolved::new(i.clone()).verify(Exec::Sequential));
    let e = within(Duration::from_secs(120), t)?;
    let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    ensure(bad.is_empty(), || format!("{} failing, first {} {:?}", bad.len(), bad[0].instance, bad[0].failures.first()))?;
    let pairs: usize = reports.iter().map(|r| r.pairs).sum();
    let resolved: usize = reports.iter().map(|r| r.resolved).sum();
    Ok(format!("{n} instances, {pairs} pairs, {resolved} additive extensions checked, {e:?}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("arrow functions of 1>2>3>4<5>6", arrow_functions),
        ("three-tile straight matching lattice", straight_lattice),
        ("displayed matchings of 1>2>3>4<5", displayed_matchings),
        ("roundtrips for words up to length 8", roundtrips),
        ("three-way isomorphism up to length 7", three_way),
        ("distributivity, Birkhoff, join irreducibles", birkhoff),
        ("crossing resolution golden", crossing_golden),
        ("phi bijectivity and additivity", phi),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(info) => println!("criterion {}: PASS  {name} ({info})", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
