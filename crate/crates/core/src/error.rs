use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("operation needs a nonempty word")]
    EmptyWord,
    #[error("tile window [{start}, {end}] out of range for {tiles} tiles")]
    Window { start: usize, end: usize, tiles: usize },
    #[error("tile {0} is not rotatable in this matching")]
    NotRotatable(usize),
    #[error("edge set is not a perfect matching of the graph")]
    NotPerfect,
    #[error("support {0:?} is not closed under successors")]
    NotSubmodule(Vec<usize>),
    #[error("cover data does not describe a lattice: {0}")]
    NotLattice(String),
    #[error("maximal chains disagree: {0:?} vs {1:?}")]
    ChainProducts(Vec<u32>, Vec<u32>),
    #[error("invalid crossing: {0}")]
    Crossing(String),
    #[error("invalid grafting: {0}")]
    Grafting(String),
    #[error("submodule counts disagree: {direct} via submodules, {via_matchings} via matchings")]
    CountMismatch { direct: usize, via_matchings: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
