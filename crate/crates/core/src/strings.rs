//! Words over {direct, inverse}, optionally carrying vertex labels.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Direct,
    Inverse,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::Direct => Letter::Inverse,
            Letter::Inverse => Letter::Direct,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::Direct => '>',
            Letter::Inverse => '<',
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.symbol())
    }
}

/// A string `v1 a1 v2 ... an v(n+1)`. Vertices are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowWord {
    letters: Vec<Letter>,
    labels: Option<Vec<u32>>,
}

/// A maximal run of equal letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    pub letter: Letter,
    pub len: usize,
}

impl ArrowWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        ArrowWord { letters, labels: None }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    pub fn labeled(letters: Vec<Letter>, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != letters.len() + 1 {
            return Err(Error::LabelCount { expected: letters.len() + 1, got: labels.len() });
        }
        if let Some(i) = labels.iter().position(|&l| l == 0) {
            return Err(Error::Syntax { pos: i, msg: "labels must be positive".into() });
        }
        Ok(ArrowWord { letters, labels: Some(labels) })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.letters.len() + 1
    }

    /// Label of vertex `p` (1-based); unlabeled words number their vertices.
    pub fn label(&self, p: usize) -> u32 {
        match &self.labels {
            Some(l) => l[p - 1],
            None => p as u32,
        }
    }

    /// Letter between vertex `k` and `k + 1`.
    pub fn letter(&self, k: usize) -> Letter {
        self.letters[k - 1]
    }

    pub fn with_default_labels(&self) -> ArrowWord {
        let labels = (1..=self.vertex_count() as u32).collect();
        ArrowWord { letters: self.letters.clone(), labels: Some(labels) }
    }

    pub fn unlabeled(&self) -> ArrowWord {
        ArrowWord::new(self.letters.clone())
    }

    pub fn inverse(&self) -> ArrowWord {
        ArrowWord {
            letters: self.letters.iter().rev().map(|a| a.flip()).collect(),
            labels: self.labels.as_ref().map(|l| l.iter().rev().copied().collect()),
        }
    }

    /// Letterwise complement; labels unchanged.
    pub fn complement(&self) -> ArrowWord {
        ArrowWord {
            letters: self.letters.iter().map(|a| a.flip()).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn decompose_runs(&self) -> Result<Vec<Run>> {
        if self.letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut runs: Vec<Run> = Vec::new();
        for &a in &self.letters {
            match runs.last_mut() {
                Some(r) if r.letter == a => r.len += 1,
                _ => runs.push(Run { letter: a, len: 1 }),
            }
        }
        Ok(runs)
    }

    /// All unlabeled words with exactly `n` letters, in lexicographic order
    /// with `>` before `<`.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = ArrowWord> {
        (0u64..1 << n).map(move |bits| {
            let letters = (0..n)
                .map(|i| if bits >> (n - 1 - i) & 1 == 0 { Letter::Direct } else { Letter::Inverse })
                .collect();
            ArrowWord::new(letters)
        })
    }

    pub fn all_up_to(n: usize) -> impl Iterator<Item = ArrowWord> {
        (0..=n).flat_map(Self::all_of_len)
    }
}

impl fmt::Display for ArrowWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.labels {
            None if self.letters.is_empty() => f.write_str("%"),
            None => self.letters.iter().try_for_each(|a| write!(f, "{}", a.symbol())),
            Some(labels) => {
                write!(f, "{}", labels[0])?;
                for (a, l) in self.letters.iter().zip(&labels[1..]) {
                    write!(f, "{}{}", a.symbol(), l)?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for ArrowWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn symbol(c: u8) -> Option<Letter> {
    match c {
        b'>' => Some(Letter::Direct),
        b'<' => Some(Letter::Inverse),
        _ => None,
    }
}

/// Same as `text.parse::<ArrowWord>()`.
pub fn parse_word(text: &str) -> Result<ArrowWord> {
    text.parse()
}

impl FromStr for ArrowWord {
    type Err = Error;

    /// Accepts `%`, a nonempty run of `>`/`<`, or labels interleaved with
    /// symbols such as `1>2<3`. A lone label (`7`) is read as a labeled
    /// single vertex so that every rendered word parses back.
    fn from_str(text: &str) -> Result<Self> {
        let b = text.as_bytes();
        let err = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
        match b.first() {
            None => Err(err(0, "empty input")),
            Some(b'%') if b.len() == 1 => Ok(ArrowWord::empty()),
            Some(b'%') => Err(err(1, "trailing input after '%'")),
            Some(&c) if symbol(c).is_some() => {
                let mut letters = Vec::with_capacity(b.len());
                for (i, &c) in b.iter().enumerate() {
                    letters.push(symbol(c).ok_or_else(|| err(i, "expected '>' or '<'"))?);
                }
                Ok(ArrowWord::new(letters))
            }
            Some(_) => {
                let mut letters = Vec::new();
                let mut labels = Vec::new();
                let mut i = 0;
                loop {
                    if i >= b.len() || !(b'1'..=b'9').contains(&b[i]) {
                        return Err(err(i, "expected a label [1-9][0-9]*"));
                    }
                    let start = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    let label = text[start..i].parse().map_err(|_| err(start, "label out of range"))?;
                    labels.push(label);
                    if i == b.len() {
                        break;
                    }
                    letters.push(symbol(b[i]).ok_or_else(|| err(i, "expected '>' or '<'"))?);
                    i += 1;
                }
                ArrowWord::labeled(letters, labels)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::{Direct as D, Inverse as I};

    #[test]
    fn parses_the_three_forms() {
        let w: ArrowWord = "1>2>3>4<5>6".parse().unwrap();
        assert_eq!(w.letters(), &[D, D, D, I, D]);
        assert_eq!(w.labels(), Some(&[1, 2, 3, 4, 5, 6][..]));
        let e: ArrowWord = "%".parse().unwrap();
        assert!(e.is_empty() && !e.is_labeled());
        let s: ArrowWord = "><<".parse().unwrap();
        assert_eq!(s.letters(), &[D, I, I]);
    }

    #[test]
    fn reports_error_positions() {
        assert_eq!("1>>2".parse::<ArrowWord>().unwrap_err(), Error::Syntax { pos: 2, msg: "expected a label [1-9][0-9]*".into() });
        assert!(matches!("><x".parse::<ArrowWord>(), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!("0>1".parse::<ArrowWord>(), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!("1>2>".parse::<ArrowWord>(), Err(Error::Syntax { pos: 4, .. })));
        assert!("".parse::<ArrowWord>().is_err());
        assert!("%>".parse::<ArrowWord>().is_err());
    }

    #[test]
    fn inverse_flips_and_reverses() {
        let w = ArrowWord::new(vec![D, D, I]);
        assert_eq!(w.inverse().letters(), &[D, I, I]);
        assert_eq!(ArrowWord::empty().inverse(), ArrowWord::empty());
        let l: ArrowWord = "7<3>4>8".parse().unwrap();
        assert_eq!(l.inverse().to_string(), "8<4<3>7");
    }

    #[test]
    fn runs() {
        let w = ArrowWord::new(vec![D, D, D, I, D]);
        let r = w.decompose_runs().unwrap();
        assert_eq!(r, vec![Run { letter: D, len: 3 }, Run { letter: I, len: 1 }, Run { letter: D, len: 1 }]);
        assert_eq!(ArrowWord::new(vec![I]).decompose_runs().unwrap(), vec![Run { letter: I, len: 1 }]);
        assert_eq!(ArrowWord::new(vec![D, I, D, I]).decompose_runs().unwrap().len(), 4);
        assert_eq!(ArrowWord::empty().decompose_runs(), Err(Error::EmptyWord));
    }

    #[test]
    fn lone_label_is_a_vertex() {
        let w: ArrowWord = "7".parse().unwrap();
        assert_eq!(w.vertex_count(), 1);
        assert_eq!(w.to_string(), "7");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(ArrowWord::all_of_len(0).count(), 1);
        assert_eq!(ArrowWord::all_up_to(4).count(), 31);
        assert_eq!(ArrowWord::all_of_len(2).map(|w| w.to_string()).collect::<Vec<_>>(), [">>", "><", "<>", "<<"]);
    }
}
