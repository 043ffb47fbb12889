//! Crossings and graftings of strings, their four resolution strings, and the
//! bijection Φ between matchings of the two inputs and matchings of the
//! resolution.
//!
//! Φ is computed on submodules: a pair of matchings is turned into a pair of
//! submodules, spliced or restricted along the vertex provenance of the
//! resolution strings, and turned back into matchings.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::matchings::{enumerate_matchings, is_perfect, PerfectMatching};
use crate::modules::{DimensionVector, StringModule, Submodule};
use crate::strings::{ArrowWord, Letter};
use crate::verify::Falsification;

/// Vertex `pos` of input string `word` (1 or 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub word: u8,
    pub pos: usize,
}

impl Serialize for Site {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.word, self.pos).serialize(s)
    }
}

fn site(word: u8, pos: usize) -> Site {
    Site { word, pos }
}

/// One of w3..w6; the empty summand has no vertices and a single (empty)
/// matching.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Summand {
    Empty,
    Word(ArrowWord),
}

impl Summand {
    pub fn word(&self) -> Option<&ArrowWord> {
        match self {
            Summand::Empty => None,
            Summand::Word(w) => Some(w),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Summand::Empty)
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Empty => f.write_str("EMPTY"),
            Summand::Word(w) => w.fmt(f),
        }
    }
}

impl Serialize for Summand {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `w1 = u1 a m b v1`, `w2 = u2 c m d v2` with `a, d` direct and `b, c`
/// inverse. `m` spans vertices `s..=t` of w1 and `s2..=t2` of w2, where w2 is
/// already oriented (inverted if `w2_inverted`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub w1: ArrowWord,
    pub w2: ArrowWord,
    pub w2_inverted: bool,
    pub s: usize,
    pub t: usize,
    pub s2: usize,
    pub t2: usize,
}

fn labels_agree(w1: &ArrowWord, p: usize, w2: &ArrowWord, q: usize) -> bool {
    !(w1.is_labeled() && w2.is_labeled()) || w1.label(p) == w2.label(q)
}

impl Crossing {
    pub fn new(w1: ArrowWord, w2: ArrowWord, s: usize, t: usize, s2: usize, t2: usize) -> Result<Self> {
        let x = Crossing { w1, w2, w2_inverted: false, s, t, s2, t2 };
        x.check()?;
        Ok(x)
    }

    fn check(&self) -> Result<()> {
        let (w1, w2) = (&self.w1, &self.w2);
        let (n1, n2) = (w1.len(), w2.len());
        let (s, t, s2, t2) = (self.s, self.t, self.s2, self.t2);
        let bad = |m: &str| Err(Error::Crossing(m.to_string()));
        if s < 1 || s > t || t > n1 + 1 || s2 < 1 || s2 > t2 || t2 > n2 + 1 || t - s != t2 - s2 {
            return bad("overlap out of range");
        }
        if (0..t - s).any(|k| w1.letter(s + k) != w2.letter(s2 + k)) {
            return bad("overlap letters differ");
        }
        if (0..=t - s).any(|k| !labels_agree(w1, s + k, w2, s2 + k)) {
            return bad("overlap labels differ");
        }
        if (s > 1 && w1.letter(s - 1) != Letter::Direct)
            || (t <= n1 && w1.letter(t) != Letter::Inverse)
            || (s2 > 1 && w2.letter(s2 - 1) != Letter::Inverse)
            || (t2 <= n2 && w2.letter(t2) != Letter::Direct)
        {
            return bad("arrows around the overlap do not cross");
        }
        if s == 1 && s2 == 1 {
            return bad("overlap starts both strings");
        }
        if t == n1 + 1 && t2 == n2 + 1 {
            return bad("overlap ends both strings");
        }
        Ok(())
    }

    /// Vertex of w1 an overlap vertex of w2 is identified with.
    fn to_w1(&self, q: usize) -> usize {
        q - self.s2 + self.s
    }

    fn in_overlap2(&self, q: usize) -> bool {
        (self.s2..=self.t2).contains(&q)
    }
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {} at [{},{}]~[{},{}]", self.w1, self.w2, self.s, self.t, self.s2, self.t2)?;
        if self.w2_inverted {
            f.write_str(" (second inverted)")?;
        }
        Ok(())
    }
}

/// All crossings of w1 with w2 or its inverse, ordered by orientation and
/// overlap start.
pub fn find_crossings(w1: &ArrowWord, w2: &ArrowWord) -> Vec<Crossing> {
    let mut out = Vec::new();
    let inv = w2.inverse();
    let orientations: Vec<(bool, &ArrowWord)> = if inv == *w2 { vec![(false, w2)] } else { vec![(false, w2), (true, &inv)] };
    let (n1, n2) = (w1.len(), w2.len());
    for (inverted, w2o) in orientations {
        for s in 1..=n1 + 1 {
            for t in s..=n1 + 1 {
                for s2 in 1..=n2 + 1 {
                    let t2 = s2 + t - s;
                    if t2 > n2 + 1 {
                        break;
                    }
                    let x = Crossing { w1: w1.clone(), w2: w2o.clone(), w2_inverted: inverted, s, t, s2, t2 };
                    if x.check().is_ok() {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// `w2` attached to w1 at vertex `pos` through the connector `e`. When pos
/// is not the last vertex the letter `a` after it must be the complement of
/// `e`. A grafting at a direct letter is stored on the inverse of w1 (where
/// the letter becomes inverse); `normalized` records that.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grafting {
    pub w1: ArrowWord,
    pub pos: usize,
    pub connector: Letter,
    pub w2: ArrowWord,
    pub normalized: bool,
}

impl Grafting {
    pub fn new(w1: ArrowWord, pos: usize, connector: Letter, w2: ArrowWord) -> Result<Self> {
        let n1 = w1.len();
        if pos < 1 || pos > n1 + 1 {
            return Err(Error::Grafting(format!("vertex {pos} out of range 1..={}", n1 + 1)));
        }
        if pos <= n1 {
            let a = w1.letter(pos);
            if connector != a.flip() {
                return Err(Error::Grafting(format!("connector must be the complement of {}", a.symbol())));
            }
            if a == Letter::Direct {
                return Ok(Grafting { w1: w1.inverse(), pos: n1 + 1 - pos, connector: Letter::Direct, w2, normalized: true });
            }
        }
        Ok(Grafting { w1, pos, connector, w2, normalized: false })
    }

    /// The letter after the grafting vertex, if any.
    pub fn marked(&self) -> Option<Letter> {
        (self.pos <= self.w1.len()).then(|| self.w1.letter(self.pos))
    }
}

impl fmt::Display for Grafting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} {} {}", self.w1, self.pos, self.connector.symbol(), self.w2)?;
        if self.normalized {
            f.write_str(" (first inverted)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Instance {
    Crossing(Crossing),
    Grafting(Grafting),
}

impl Instance {
    pub fn w1(&self) -> &ArrowWord {
        match self {
            Instance::Crossing(x) => &x.w1,
            Instance::Grafting(g) => &g.w1,
        }
    }

    pub fn w2(&self) -> &ArrowWord {
        match self {
            Instance::Crossing(x) => &x.w2,
            Instance::Grafting(g) => &g.w2,
        }
    }

    /// Identifies sites glued by the resolution: overlap vertices of w2 are
    /// their w1 partners, everything else is distinct.
    fn key(&self, x: Site) -> usize {
        let n1 = self.w1().len();
        match (self, x.word) {
            (_, 1) => x.pos,
            (Instance::Crossing(c), _) if c.in_overlap2(x.pos) => c.to_w1(x.pos),
            _ => n1 + 1 + x.pos,
        }
    }

    /// Face weight of a site; unlabeled inputs use the glued vertex itself.
    fn label(&self, x: Site) -> u32 {
        match (self.w1().is_labeled() && self.w2().is_labeled(), x.word) {
            (false, _) => self.key(x) as u32,
            (true, 1) => self.w1().label(x.pos),
            (true, _) => self.w2().label(x.pos),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Crossing(x) => x.fmt(f),
            Instance::Grafting(g) => g.fmt(f),
        }
    }
}

/// w3..w6 with the input vertex each of their vertices comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub w3: Summand,
    pub w4: Summand,
    pub w5: Summand,
    pub w6: Summand,
    pub sites: [Vec<Site>; 4],
}

impl Resolution {
    pub fn summands(&self) -> [&Summand; 4] {
        [&self.w3, &self.w4, &self.w5, &self.w6]
    }
}

/// Assembles a string from runs of input vertices. Letters inside a run are
/// read off the input; between runs an explicit connector is given.
struct Builder<'a> {
    words: [&'a ArrowWord; 2],
    sites: Vec<Site>,
    letters: Vec<Letter>,
}

impl<'a> Builder<'a> {
    fn new(w1: &'a ArrowWord, w2: &'a ArrowWord) -> Self {
        Builder { words: [w1, w2], sites: Vec::new(), letters: Vec::new() }
    }

    fn join(mut self, a: Letter) -> Self {
        self.letters.push(a);
        self
    }

    /// Vertices `from..=to` of input `word`, in either direction.
    fn run(mut self, word: u8, from: usize, to: usize) -> Self {
        let w = self.words[word as usize - 1];
        let step: Vec<usize> = if from <= to { (from..=to).collect() } else { (to..=from).rev().collect() };
        for (i, &p) in step.iter().enumerate() {
            if i > 0 {
                let q = step[i - 1];
                self.letters.push(if p == q + 1 { w.letter(q) } else { w.letter(p).flip() });
            }
            self.sites.push(site(word, p));
        }
        self
    }

    fn finish(self) -> (Summand, Vec<Site>) {
        debug_assert_eq!(self.letters.len() + 1, self.sites.len());
        let [w1, w2] = self.words;
        let word = if w1.is_labeled() && w2.is_labeled() {
            let labels = self.sites.iter().map(|x| self.words[x.word as usize - 1].label(x.pos)).collect();
            ArrowWord::labeled(self.letters, labels).expect("one label per vertex")
        } else {
            ArrowWord::new(self.letters)
        };
        (Summand::Word(word), self.sites)
    }
}

fn empty() -> (Summand, Vec<Site>) {
    (Summand::Empty, Vec::new())
}

/// Last vertex left of `end` after stripping the maximal run of `x` letters
/// ending at `end` and one more vertex; 0 if nothing is left.
fn strip_back(w: &ArrowWord, mut end: usize, x: Letter) -> usize {
    while end > 1 && w.letter(end - 1) == x {
        end -= 1;
    }
    end - 1
}

/// First vertex right of `start` after stripping the maximal run of `x`
/// letters starting at `start` and one more vertex; past the end if nothing
/// is left.
fn strip_front(w: &ArrowWord, mut start: usize, x: Letter) -> usize {
    while start <= w.len() && w.letter(start) == x {
        start += 1;
    }
    start + 1
}

pub fn resolve_crossing(x: &Crossing) -> Resolution {
    use Letter::{Direct, Inverse};
    let (w1, w2) = (&x.w1, &x.w2);
    let (n1, n2) = (w1.len(), w2.len());
    let b = || Builder::new(w1, w2);

    let mut w3 = b().run(1, 1, x.t);
    if x.t2 <= n2 {
        w3 = w3.join(Direct).run(2, x.t2 + 1, n2 + 1);
    }
    let mut w4 = b().run(2, 1, x.t2);
    if x.t <= n1 {
        w4 = w4.join(Inverse).run(1, x.t + 1, n1 + 1);
    }

    let w5 = match (x.s > 1, x.s2 > 1) {
        (true, true) => b().run(1, 1, x.s - 1).join(Inverse).run(2, x.s2 - 1, 1).finish(),
        (false, true) => match strip_back(w2, x.s2 - 1, Direct) {
            0 => empty(),
            j => b().run(2, 1, j).finish(),
        },
        (true, false) => match strip_back(w1, x.s - 1, Inverse) {
            0 => empty(),
            j => b().run(1, 1, j).finish(),
        },
        (false, false) => empty(),
    };
    let w6 = match (x.t <= n1, x.t2 <= n2) {
        (true, true) => b().run(1, n1 + 1, x.t + 1).join(Inverse).run(2, x.t2 + 1, n2 + 1).finish(),
        (false, true) => match strip_front(w2, x.t2 + 1, Inverse) {
            j if j > n2 + 1 => empty(),
            j => b().run(2, j, n2 + 1).finish(),
        },
        (true, false) => match strip_front(w1, x.t + 1, Direct) {
            j if j > n1 + 1 => empty(),
            j => b().run(1, j, n1 + 1).finish(),
        },
        (false, false) => empty(),
    };
    assemble(w3.finish(), w4.finish(), w5, w6)
}

pub fn resolve_grafting(g: &Grafting) -> Resolution {
    let (w1, w2, p, e) = (&g.w1, &g.w2, g.pos, g.connector);
    let (n1, n2) = (w1.len(), w2.len());
    let b = || Builder::new(w1, w2);
    let w3 = b().run(1, 1, p).join(e).run(2, 1, n2 + 1).finish();
    match g.marked() {
        Some(a) => {
            let w4 = match strip_front(w1, p + 1, a) {
                j if j > n1 + 1 => empty(),
                j => b().run(1, j, n1 + 1).finish(),
            };
            let w5 = match strip_back(w1, p, a) {
                0 => empty(),
                j => b().run(1, 1, j).finish(),
            };
            let w6 = b().run(1, n1 + 1, p + 1).join(a).run(2, 1, n2 + 1).finish();
            assemble(w3, w4, w5, w6)
        }
        None => {
            let x = e.flip();
            let w5 = match strip_back(w1, p, x) {
                0 => empty(),
                j => b().run(1, 1, j).finish(),
            };
            let w6 = match strip_front(w2, 1, x) {
                j if j > n2 + 1 => empty(),
                j => b().run(2, j, n2 + 1).finish(),
            };
            assemble(w3, empty(), w5, w6)
        }
    }
}

fn assemble(w3: (Summand, Vec<Site>), w4: (Summand, Vec<Site>), w5: (Summand, Vec<Site>), w6: (Summand, Vec<Site>)) -> Resolution {
    Resolution { w3: w3.0, w4: w4.0, w5: w5.0, w6: w6.0, sites: [w3.1, w4.1, w5.1, w6.1] }
}

pub fn resolve(instance: &Instance) -> Resolution {
    match instance {
        Instance::Crossing(x) => resolve_crossing(x),
        Instance::Grafting(g) => resolve_grafting(g),
    }
}

/// Which side of the bijection an input pair lands on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Resolved,
    Residual,
}

impl Serialize for Route {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Route::Resolved => "34",
            Route::Residual => "56",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhiImage {
    pub route: Route,
    /// Splitting vertex of the overlap, for crossings routed to (P3, P4).
    pub split: Option<usize>,
    pub first: PerfectMatching,
    pub second: PerfectMatching,
}

/// Per-summand module, `None` for the empty summand.
type Slot = Option<StringModule>;

/// An instance together with its resolution and all six string modules.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub instance: Instance,
    pub resolution: Resolution,
    m1: StringModule,
    m2: StringModule,
    slots: [Slot; 4],
}

fn membership(m: &StringModule, n: &Submodule) -> Vec<bool> {
    let mut v = vec![false; m.dim() + 2];
    for &p in n.support() {
        v[p] = true;
    }
    v
}

impl Resolved {
    pub fn new(instance: Instance) -> Self {
        let resolution = resolve(&instance);
        let m1 = StringModule::new(instance.w1());
        let m2 = StringModule::new(instance.w2());
        let slots = resolution.summands().map(|s| s.word().map(StringModule::new));
        Resolved { instance, resolution, m1, m2, slots }
    }

    pub fn modules(&self) -> (&StringModule, &StringModule) {
        (&self.m1, &self.m2)
    }

    pub fn summand_module(&self, k: usize) -> Option<&StringModule> {
        self.slots[k - 3].as_ref()
    }

    /// Matchings of g1..g6; an empty summand has exactly one, empty matching.
    pub fn matchings(&self) -> [Vec<PerfectMatching>; 6] {
        let of = |s: &Slot| match s {
            Some(m) => enumerate_matchings(m.graph()),
            None => vec![PerfectMatching::new(Vec::new())],
        };
        [
            enumerate_matchings(self.m1.graph()),
            enumerate_matchings(self.m2.graph()),
            of(&self.slots[0]),
            of(&self.slots[1]),
            of(&self.slots[2]),
            of(&self.slots[3]),
        ]
    }

    fn closed(&self, k: usize, support: &[usize]) -> bool {
        match &self.slots[k - 3] {
            Some(m) => m.is_submodule(support),
            None => support.is_empty(),
        }
    }

    fn to_matching(&self, k: usize, support: Vec<usize>) -> Result<PerfectMatching> {
        match &self.slots[k - 3] {
            Some(m) => m.submodule_to_matching(&m.submodule(&support)?),
            None if support.is_empty() => Ok(PerfectMatching::new(Vec::new())),
            None => Err(Error::NotSubmodule(support)),
        }
    }

    /// Positions of summand `k` whose source vertex satisfies `pick`.
    fn select(&self, k: usize, pick: impl Fn(Site) -> bool) -> Vec<usize> {
        self.resolution.sites[k - 3].iter().enumerate().filter(|(_, &x)| pick(x)).map(|(j, _)| j + 1).collect()
    }

    /// Φ on submodules. Returns the route, the split and the two image
    /// supports.
    pub fn phi_submodules(&self, n1: &Submodule, n2: &Submodule) -> (Route, Option<usize>, Vec<usize>, Vec<usize>) {
        let (a, b) = (membership(&self.m1, n1), membership(&self.m2, n2));
        let has = |x: Site| if x.word == 1 { a[x.pos] } else { b[x.pos] };
        match &self.instance {
            Instance::Crossing(c) => {
                // Overlap vertices up to the split come from N1 in w3 and
                // from N2 in w4; past the split the roles swap.
                for i in c.s - 1..=c.t {
                    let n3 = self.select(3, |x| match x.word {
                        1 if x.pos > i && x.pos >= c.s && x.pos <= c.t => b[x.pos - c.s + c.s2],
                        _ => has(x),
                    });
                    let n4 = self.select(4, |x| match x.word {
                        2 if c.in_overlap2(x.pos) && c.to_w1(x.pos) > i => a[c.to_w1(x.pos)],
                        _ => has(x),
                    });
                    if self.closed(3, &n3) && self.closed(4, &n4) {
                        return (Route::Resolved, Some(i), n3, n4);
                    }
                }
            }
            Instance::Grafting(_) => {
                let n3 = self.select(3, has);
                let n4 = self.select(4, has);
                if n3.len() + n4.len() == n1.len() + n2.len() && self.closed(3, &n3) && self.closed(4, &n4) {
                    return (Route::Resolved, None, n3, n4);
                }
            }
        }
        (Route::Residual, None, self.select(5, has), self.select(6, has))
    }

    pub fn phi(&self, p1: &PerfectMatching, p2: &PerfectMatching) -> Result<PhiImage> {
        if !is_perfect(self.m1.graph(), p1.edges()) || !is_perfect(self.m2.graph(), p2.edges()) {
            return Err(Error::NotPerfect);
        }
        let n1 = self.m1.matching_to_submodule(p1);
        let n2 = self.m2.matching_to_submodule(p2);
        let (route, split, x, y) = self.phi_submodules(&n1, &n2);
        let (k, l) = if route == Route::Resolved { (3, 4) } else { (5, 6) };
        Ok(PhiImage { route, split, first: self.to_matching(k, x)?, second: self.to_matching(l, y)? })
    }

    fn dimension_vector(&self, k: usize, support: &[usize]) -> DimensionVector {
        let mut v = DimensionVector::new();
        for &p in support {
            *v.entry(self.instance.label(self.resolution.sites[k - 3][p - 1])).or_insert(0) += 1;
        }
        v
    }

    /// h(N1) + h(N2) = h(N3) + h(N4) for pairs routed to (P3, P4). Compared
    /// both on labels and on the underlying glued vertices. `None` when the
    /// pair is routed to (P5, P6).
    pub fn extension_dimension_check(&self, p1: &PerfectMatching, p2: &PerfectMatching) -> Result<Option<DimensionCheck>> {
        let image = self.phi(p1, p2)?;
        if image.route != Route::Resolved {
            return Ok(None);
        }
        let n1 = self.m1.matching_to_submodule(p1);
        let n2 = self.m2.matching_to_submodule(p2);
        let n3 = self.submodule_of(3, &image.first);
        let n4 = self.submodule_of(4, &image.second);
        let mut lhs = DimensionVector::new();
        for x in n1.support().iter().map(|&p| site(1, p)).chain(n2.support().iter().map(|&q| site(2, q))) {
            *lhs.entry(self.instance.label(x)).or_insert(0) += 1;
        }
        let mut rhs = self.dimension_vector(3, &n3);
        for (k, c) in self.dimension_vector(4, &n4) {
            *rhs.entry(k).or_insert(0) += c;
        }
        let keys = |sites: Vec<Site>| {
            let mut m: BTreeMap<usize, usize> = BTreeMap::new();
            for x in sites {
                *m.entry(self.instance.key(x)).or_insert(0) += 1;
            }
            m
        };
        let left_sites = keys(n1.support().iter().map(|&p| site(1, p)).chain(n2.support().iter().map(|&q| site(2, q))).collect());
        let right_sites = keys(
            n3.iter()
                .map(|&p| self.resolution.sites[0][p - 1])
                .chain(n4.iter().map(|&p| self.resolution.sites[1][p - 1]))
                .collect(),
        );
        let holds = lhs == rhs && left_sites == right_sites;
        Ok(Some(DimensionCheck { inputs: lhs, images: rhs, holds }))
    }

    fn submodule_of(&self, k: usize, p: &PerfectMatching) -> Vec<usize> {
        match &self.slots[k - 3] {
            Some(m) => m.matching_to_submodule(p).support().to_vec(),
            None => Vec::new(),
        }
    }

    /// Runs Φ on every input pair and checks totality, validity, injectivity,
    /// surjectivity and dimension additivity.
    pub fn verify(&self, exec: Exec) -> PhiReport {
        let all = self.matchings();
        let counts = [0, 1, 2, 3, 4, 5].map(|i| all[i].len());
        let identity_holds = counts[0] * counts[1] == counts[2] * counts[3] + counts[4] * counts[5];
        let name = self.instance.to_string();
        let rows = exec.map(&all[0], |p1| {
            let mut images = Vec::new();
            let mut failures = Vec::new();
            for p2 in &all[1] {
                match self.phi(p1, p2) {
                    Ok(img) => {
                        let (k, l) = if img.route == Route::Resolved { (2, 3) } else { (4, 5) };
                        if !all[k].contains(&img.first) || !all[l].contains(&img.second) {
                            failures.push(Falsification::new("image is a pair of perfect matchings", &name, ""));
                        }
                        if img.route == Route::Resolved {
                            match self.extension_dimension_check(p1, p2) {
                                Ok(Some(c)) if c.holds => {}
                                _ => failures.push(Falsification::new(
                                    "dimension vectors add up along the extension",
                                    &name,
                                    format!("{:?} / {:?}", p1.edges(), p2.edges()),
                                )),
                            }
                        }
                        images.push(img);
                    }
                    Err(e) => failures.push(Falsification::new("every pair has an image", &name, e.to_string())),
                }
            }
            (images, failures)
        });
        let mut seen: HashSet<(Route, PerfectMatching, PerfectMatching)> = HashSet::new();
        let mut failures = Vec::new();
        let (mut resolved, mut residual, mut pairs) = (0, 0, 0);
        let mut routes = Vec::new();
        for (images, f) in rows {
            failures.extend(f);
            for img in images {
                pairs += 1;
                routes.push(img.route);
                match img.route {
                    Route::Resolved => resolved += 1,
                    Route::Residual => residual += 1,
                }
                if !seen.insert((img.route, img.first, img.second)) {
                    failures.push(Falsification::new("distinct pairs have distinct images", &name, ""));
                }
            }
        }
        if !identity_holds {
            failures.push(Falsification::new("matching counts satisfy the resolution identity", &name, format!("{counts:?}")));
        }
        let bijective = seen.len() == pairs && pairs == counts[0] * counts[1] && identity_holds && failures.is_empty();
        PhiReport { instance: name, counts, identity_holds, pairs, resolved, residual, bijective, routes, failures }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionCheck {
    pub inputs: DimensionVector,
    pub images: DimensionVector,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub instance: String,
    /// |Match(g1)| .. |Match(g6)|.
    pub counts: [usize; 6],
    pub identity_holds: bool,
    pub pairs: usize,
    pub resolved: usize,
    pub residual: usize,
    pub bijective: bool,
    /// Route of each input pair, row-major over the sorted matchings of g1
    /// and g2.
    pub routes: Vec<Route>,
    pub failures: Vec<Falsification>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.failures.is_empty()
    }
}

/// Every crossing and grafting between unlabeled words with at most
/// `max_len` letters. Graftings at a direct letter are skipped since they
/// normalize onto graftings at an inverse one.
pub fn all_instances(max_len: usize) -> Vec<Instance> {
    let words: Vec<ArrowWord> = ArrowWord::all_up_to(max_len).collect();
    let mut out = Vec::new();
    for w1 in &words {
        for w2 in &words {
            out.extend(find_crossings(w1, w2).into_iter().map(Instance::Crossing));
            for pos in 1..=w1.len() + 1 {
                let connectors = match (pos <= w1.len()).then(|| w1.letter(pos)) {
                    Some(Letter::Direct) => vec![],
                    Some(Letter::Inverse) => vec![Letter::Direct],
                    None => vec![Letter::Direct, Letter::Inverse],
                };
                for e in connectors {
                    let g = Grafting::new(w1.clone(), pos, e, w2.clone()).expect("valid by construction");
                    out.push(Instance::Grafting(g));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ArrowWord {
        s.parse().unwrap()
    }

    fn strs(r: &Resolution) -> [String; 4] {
        r.summands().map(|s| s.to_string())
    }

    #[test]
    fn example_crossing() {
        let xs = find_crossings(&w("1>2>3>4<5>6"), &w("7<3>4>8"));
        assert_eq!(xs.len(), 1);
        let x = &xs[0];
        assert_eq!((x.s, x.t, x.s2, x.t2, x.w2_inverted), (3, 4, 2, 3, false));
        assert_eq!(strs(&resolve_crossing(x)), ["1>2>3>4>8", "7<3>4<5>6", "1>2<7", "6<5<8"].map(String::from));
    }

    #[test]
    fn crossing_patterns() {
        assert!(find_crossings(&w("1>2"), &w("1>2")).is_empty());
        assert!(find_crossings(&w("1>2<3"), &w("4>2<5")).is_empty());
        // The inverse 5<2>4 crosses as well.
        let xs = find_crossings(&w("1>2<3"), &w("4<2>5"));
        assert_eq!(xs.len(), 2);
        assert!(!xs[0].w2_inverted && xs[1].w2_inverted);
        assert_eq!((xs[0].s, xs[0].t), (2, 2));
        assert_eq!(strs(&resolve_crossing(&xs[0])), ["1>2>5", "4<2<3", "1<4", "3<5"].map(String::from));
    }

    #[test]
    fn crossing_with_one_missing_prefix() {
        // u1 empty: w5 is u2 minus its direct suffix and one more vertex.
        let x = Crossing::new(w("1<2"), w("3<4>6<1<2>5"), 1, 2, 4, 5).unwrap();
        assert_eq!(resolve_crossing(&x).w5.to_string(), "3");
        let x = Crossing::new(w("1<2"), w("3>4<1<2>5"), 1, 2, 3, 4).unwrap();
        assert_eq!(resolve_crossing(&x).w5, Summand::Empty);
    }

    #[test]
    fn rejects_degenerate_crossings() {
        assert!(Crossing::new(w("1<2"), w("1<2>5"), 1, 2, 1, 2).is_err());
    }

    #[test]
    fn grafting_at_end() {
        let g = Grafting::new(w("1>2"), 2, Letter::Inverse, w("3>4")).unwrap();
        let r = resolve_grafting(&g);
        assert_eq!(r.w3.to_string(), "1>2<3>4");
        assert_eq!(r.w4, Summand::Empty);
        assert_eq!(r.w5, Summand::Empty);
        assert_eq!(r.w6, Summand::Empty);
        let g = Grafting::new(w("1<2"), 2, Letter::Inverse, w("3<4>5")).unwrap();
        assert_eq!(strs(&resolve_grafting(&g)), ["1<2<3<4>5", "EMPTY", "1", "4>5"].map(String::from));
    }

    #[test]
    fn grafting_full_strip() {
        let g = Grafting::new(w("1<2<3"), 1, Letter::Direct, w("4")).unwrap();
        let r = resolve_grafting(&g);
        assert_eq!(strs(&r), ["1>4", "EMPTY", "EMPTY", "3>2<4"].map(String::from));
    }

    #[test]
    fn grafting_at_direct_letter_normalizes() {
        let g = Grafting::new(w("1>2"), 1, Letter::Inverse, w("3")).unwrap();
        assert!(g.normalized);
        assert_eq!((g.w1.to_string().as_str(), g.pos, g.connector), ("2<1", 1, Letter::Direct));
        assert!(Grafting::new(w("1>2"), 1, Letter::Direct, w("3")).is_err());
    }

    #[test]
    fn phi_on_the_example_is_bijective() {
        let x = find_crossings(&w("1>2>3>4<5>6"), &w("7<3>4>8")).remove(0);
        let r = Resolved::new(Instance::Crossing(x));
        let rep = r.verify(Exec::Sequential);
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.counts[4], 5);
        assert_eq!(rep.counts[5], 4);
    }

    #[test]
    fn phi_small_exhaustive() {
        for inst in all_instances(3) {
            let rep = Resolved::new(inst).verify(Exec::Sequential);
            assert!(rep.passed(), "{}: {:?}", rep.instance, rep.failures);
        }
    }
}
