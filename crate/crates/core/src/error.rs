use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: variable x{index} is out of range (n = {n})")]
    IndexOutOfRange { line: usize, index: usize, n: usize },

    #[error("line {line}: `{literal}` is not a rational number")]
    NonRationalBound { line: usize, literal: String },

    #[error("line {line}: not a 4-constraint: {positive} positive and {negative} negative variable occurrences (at most 2 each)")]
    TooManyOccurrences {
        line: usize,
        positive: i64,
        negative: i64,
    },

    #[error("n = {n} exceeds the supported maximum of {max} variables")]
    TooManyVariables { n: usize, max: usize },

    #[error("a system needs at least one variable")]
    NoVariables,

    #[error("difference-bound matrix must be square, got {rows} rows and a row of length {len}")]
    NonSquare { rows: usize, len: usize },

    #[error("index ({i}, {j}, {p}, {q}) out of range for n = {n}")]
    CellOutOfRange {
        i: usize,
        j: usize,
        p: usize,
        q: usize,
        n: usize,
    },

    #[error("family of {size} vectors exceeds the enumeration cap of {cap}")]
    FamilyTooLarge { size: usize, cap: usize },

    #[error("vector family is not simple positively dependent")]
    NotSimple,

    #[error("families must consist of distinct nonzero vectors of equal length")]
    InvalidFamily,

    #[error("Fourier-Motzkin elimination exceeded the cap of {cap} rows")]
    EliminationBlowUp { cap: usize },

    #[error("constraint system is infeasible")]
    Infeasible,

    #[error("variable x{var} is unbounded; witness extraction needs a bounded system")]
    Unbounded { var: usize },

    #[error("witness extraction failed: {0}")]
    WitnessFailed(String),

    #[error("invalid matrix json: {0}")]
    Json(String),
}
