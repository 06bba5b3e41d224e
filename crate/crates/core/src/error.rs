use thiserror::Error;

/// Problems with a problem document. Receiver numbers in messages are one-based.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemError {
    #[error("malformed problem document: {0}")]
    Malformed(String),
    #[error("n must be between 1 and {max}, got {n}")]
    BadSize { n: usize, max: usize },
    #[error("{field} has {got} entries, expected n = {n}")]
    WrongLength { field: &'static str, got: usize, n: usize },
    #[error("receiver {receiver}: index {index} in {field} is out of range 1..={n}")]
    IndexOutOfRange { receiver: usize, field: &'static str, index: usize, n: usize },
    #[error("receiver {receiver}: side information contains its own message")]
    OwnMessageInSideInfo { receiver: usize },
    #[error("receiver {receiver}: prohibited message {message} is not an interfering message")]
    ProhibitedNotInterfering { receiver: usize, message: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("empty subset has no MDS parameter")]
    EmptySubset,
    #[error("receiver {receiver} has no prohibited messages")]
    NoProhibited { receiver: usize },
    #[error("extension set {set} is not contained in the complement of B_{receiver}")]
    BadExtension { receiver: usize, set: String },
    #[error("instance too large for {what}: n = {n}, limit {limit}")]
    SizeGuard { what: &'static str, n: usize, limit: usize },
    #[error("LP dimension overflow: {0}")]
    LpDimension(String),
    #[error("LP is {0}")]
    LpStatus(&'static str),
    #[error("LP solution failed re-verification: {0}")]
    LpVerification(String),
    #[error("unsupported field GF(2^{0}); m must be in 1..=16")]
    FieldDegree(u32),
    #[error("field of order {q} too small: need at least {needed} distinct elements")]
    FieldTooSmall { q: usize, needed: usize },
    #[error("secure clique-cover rate is 0: nothing to build")]
    ZeroRate,
    #[error("invalid code parameters: {0}")]
    BadCode(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("secure code search exhausted after {attempts} attempts over GF(2^{m}): {diagnostic}")]
    SearchExhausted { attempts: usize, m: u32, diagnostic: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
