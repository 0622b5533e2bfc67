use alloc::string::String;
use core::fmt;

/// Failure modes shared by every computation in the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// A formula was asked for outside the window where it is claimed to hold.
    /// Distinct from a failed check: the formula says nothing there.
    Precondition { what: &'static str, value: f64, limit: f64 },
    /// A lookup fell outside a precomputed table.
    Range {
        what: &'static str,
        value: f64,
        covered: (f64, f64),
    },
    /// A table would exceed its configured memory budget, or is too small.
    Resource {
        what: &'static str,
        requested: u64,
        budget: u64,
    },
    /// Adaptive quadrature hit its depth limit.
    Quadrature { a: f64, b: f64, coarse: f64, fine: f64 },
    /// A root could not be bracketed or refined.
    Solver {
        what: &'static str,
        lo: (f64, f64),
        hi: (f64, f64),
    },
    /// Any other numerical breakdown.
    Numerical(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Precondition { what, value, limit } => {
                write!(f, "precondition violated: {what} (got {value}, limit {limit})")
            }
            Error::Range { what, value, covered } => write!(
                f,
                "range error: {what} {value} outside covered [{}, {}]",
                covered.0, covered.1
            ),
            Error::Resource {
                what,
                requested,
                budget,
            } => write!(
                f,
                "resource error: {what} needs {requested} entries, budget is {budget}"
            ),
            Error::Quadrature { a, b, coarse, fine } => write!(
                f,
                "quadrature did not converge on [{a}, {b}]: last estimates {coarse} and {fine}"
            ),
            Error::Solver { what, lo, hi } => write!(
                f,
                "solver error: {what}; f({}) = {}, f({}) = {}",
                lo.0, lo.1, hi.0, hi.1
            ),
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
