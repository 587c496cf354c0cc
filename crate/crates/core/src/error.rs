use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Two objects that must agree in shape do not.
    DimensionMismatch { context: &'static str, expected: usize, found: usize },
    /// A matrix entry is NaN or infinite.
    NonFinite,
    /// Input required to be positive is not; carries the offending eigenvalue.
    NotPositive { min_eigenvalue: f64 },
    /// A family required to be tight is not; carries the measured spread.
    NotTight { which: &'static str, spread: f64 },
    /// Generator request cannot be satisfied (e.g. members cannot span H).
    DegenerateSpec(&'static str),
    /// A numerical construction hit a rank-deficient input.
    Degenerate(&'static str),
    /// Invalid numeric range for a generator.
    BadRange(&'static str),
    /// An alpha constant is outside the interval the theorem needs.
    AlphaOutOfRange { name: &'static str, value: f64 },
    /// Structurally invalid input (empty family, zero dimension, ...).
    Invalid(&'static str),
    /// Two routes that must agree did not.
    InternalConsistency(&'static str),
}

impl Error {
    pub(crate) fn shape(context: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { context, expected, found }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { context, expected, found } => {
                write!(f, "dimension mismatch in {context}: expected {expected}, found {found}")
            }
            Error::NonFinite => f.write_str("matrix contains a non-finite entry"),
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "element is not positive (smallest eigenvalue {min_eigenvalue:e})")
            }
            Error::NotTight { which, spread } => {
                write!(f, "family {which} is not tight (bound spread {spread:e})")
            }
            Error::DegenerateSpec(msg) => write!(f, "degenerate generator spec: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
            Error::BadRange(msg) => write!(f, "bad range: {msg}"),
            Error::AlphaOutOfRange { name, value } => write!(f, "{name} = {value} is out of range"),
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::InternalConsistency(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
