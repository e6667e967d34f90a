//! Crate-wide error type. Budget refusals are deliberate, recoverable
//! outcomes (the caller asked for more enumeration than it allowed) and
//! carry the count that triggered them.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("player {player}: {what} needs {required} enumerations, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        player: usize,
        required: u128,
        budget: u128,
    },

    #[error("{what} needs {required} enumerations, budget is {budget}")]
    GlobalBudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("payoff tensor for player {player} has {actual} entries, expected {expected}")]
    TensorCardinality {
        player: usize,
        expected: usize,
        actual: usize,
    },

    #[error("no payoff matrix for ordered pair ({0}, {1})")]
    MissingPairMatrix(usize, usize),

    #[error("hyperedge references player {player} but the game has {n} players")]
    PlayerOutOfRange { player: usize, n: usize },

    #[error("not a graphical game: player {player} owns {count} hyperedges, expected exactly 1")]
    NotGraphical { player: usize, count: usize },

    #[error("payoffs are not normalized to [0,1]: entry {value} in hyperedge {edge}")]
    NotNormalized { edge: usize, value: f64 },

    #[error("player subset of size {0} is too large for subset expansion (limit {1})")]
    SubsetTooLarge(usize, usize),

    #[error("primal graph is not a tree: cycle through players {0:?}")]
    NonTreePrimal(Vec<usize>),

    #[error("mixed strategy for player {player} is invalid: {reason}")]
    BadStrategy { player: usize, reason: String },

    #[error("game is structurally invalid: {0}")]
    InvalidGame(String),

    #[error("not a 2-player 2-action game (n={n}, actions={actions:?})")]
    NotTwoByTwo { n: usize, actions: Vec<usize> },

    #[error("{0}")]
    Format(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code contract: 1 domain failure, 2 usage/parse, 3 budget refusal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } | Error::GlobalBudgetExceeded { .. } => 3,
            Error::Json(_) | Error::Format(_) | Error::Usage(_) => 2,
            _ => 1,
        }
    }
}
