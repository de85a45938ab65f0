use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("not a permutation of 1..{n}: {word:?}")]
    InvalidPermutation { n: usize, word: Vec<usize> },

    #[error("simple reflection index {index} out of range for n = {n}")]
    LetterOutOfRange { index: usize, n: usize },

    #[error("reduced word {letters:?} is not reduced")]
    NotReduced { letters: Vec<usize> },

    #[error("{v:?} is not below {w:?} in Bruhat order")]
    NotBelow { v: Vec<usize>, w: Vec<usize> },

    #[error("prefix size {k} out of range 1..={n}")]
    PrefixOutOfRange { k: usize, n: usize },

    #[error("leading principal minor {0} vanishes")]
    SingularPrincipalMinor(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),

    #[error("bad index set {0:?}")]
    BadIndexSet(Vec<usize>),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid cell point: {0}")]
    InvalidCell(String),

    #[error("matrix is not in the isospectral set of the given spectrum")]
    NotIsospectral,

    #[error("basis exchange axiom fails for {0:?} and {1:?}")]
    ExchangeAxiom(Vec<usize>, Vec<usize>),

    #[error("all tau weights vanish at level {0}")]
    EmptyTau(usize),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
