use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modulus {0}")]
    InvalidModulus(u64),

    #[error("{what} = {value} is outside {expected}")]
    Domain {
        what: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("pole: {0}")]
    Pole(String),

    #[error("{what} = {requested} exceeds the sieve limit {limit}")]
    Range {
        what: &'static str,
        requested: f64,
        limit: u64,
    },

    #[error("zero coverage insufficient: need zeros to height {needed}, have {available}")]
    Coverage { needed: f64, available: f64 },

    #[error("point {re} + {im}i lies outside the evaluator window")]
    Window { re: f64, im: f64 },

    #[error("contour passes within {distance:e} of a zero after {attempts} perturbations")]
    ContourHitsZero { attempts: usize, distance: f64 },

    #[error("zero search incomplete: located {located} zeros, winding number is {expected}")]
    IncompleteSearch { located: usize, expected: i64 },

    #[error("tolerance {target:e} unreachable, achieved {achieved:e}")]
    Tolerance { target: f64, achieved: f64 },

    #[error("degenerate search grid: {0}")]
    DegenerateGrid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: impl ToString, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value: value.to_string(),
            expected,
        }
    }
}
