use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A 1-based coordinate index outside `1..=n`.
    IndexOutOfRange { index: usize, n: usize },
    /// Two operands built for different orders.
    OrderMismatch { left: usize, right: usize },
    /// Order is zero or exceeds the mask width.
    InvalidOrder(usize),
    /// An operation that needs even `n` received an odd one.
    OddOrder(usize),
    /// Shift distance outside `1..=n/2`.
    ShiftOutOfRange { d: usize, n: usize },
    /// Autocorrelation lag outside `0..n`.
    LagOutOfRange { d: usize, n: usize },
    /// Dense transform input whose length is not a power of two.
    NotPowerOfTwo(usize),
    /// Entry that is not +1 or -1.
    NotSign(i64),
    /// Requested order is above the configured cap.
    OrderTooLarge { n: usize, cap: usize },
    /// Multiplier sharing a factor with `n`.
    NotCoprime { k: usize, n: usize },
    /// Symmetric witnesses need `4 | n`.
    NotDivisibleByFour(usize),
    /// Certificate was produced under another convention.
    ConventionMismatch(String),
    /// Rational with a denominator divisible by the chosen prime.
    UnluckyPrime(u64),
    /// Column or vector length disagreement.
    DimensionMismatch { expected: usize, found: usize },
    /// Malformed input data.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IndexOutOfRange { index, n } => {
                write!(f, "index {index} outside 1..={n}")
            }
            Error::OrderMismatch { left, right } => {
                write!(f, "order mismatch: {left} vs {right}")
            }
            Error::InvalidOrder(n) => write!(f, "invalid order {n}"),
            Error::OddOrder(n) => write!(f, "order {n} must be even"),
            Error::ShiftOutOfRange { d, n } => {
                write!(f, "shift {d} outside 1..={}", n / 2)
            }
            Error::LagOutOfRange { d, n } => write!(f, "lag {d} outside 0..{n}"),
            Error::NotPowerOfTwo(len) => write!(f, "length {len} is not a power of two"),
            Error::NotSign(v) => write!(f, "entry {v} is not +1 or -1"),
            Error::OrderTooLarge { n, cap } => write!(f, "order {n} exceeds cap {cap}"),
            Error::NotCoprime { k, n } => write!(f, "multiplier {k} is not coprime to {n}"),
            Error::NotDivisibleByFour(n) => write!(f, "order {n} is not divisible by 4"),
            Error::ConventionMismatch(tag) => {
                write!(f, "convention tag {tag:?} does not match {:?}", crate::CONVENTION_TAG)
            }
            Error::UnluckyPrime(p) => write!(f, "prime {p} divides a denominator"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
