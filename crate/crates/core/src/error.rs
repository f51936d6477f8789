use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A slope given as a finite continued-fraction prefix does not pin down
    /// the requested value. Extending the prefix beyond `depth` terms is the
    /// only fix.
    #[error("precision exhausted: {what} is not determined by the {depth}-term continued-fraction prefix; extend the prefix")]
    PrecisionExhausted { what: String, depth: usize },

    /// No length-`n` factor repeats inside the examined window, so the
    /// pigeonhole construction cannot run. Signals that the complexity
    /// hypothesis `p(n) <= kappa * n` failed at this `n`.
    #[error("infeasible at n = {n}: no repeated factor of length {n} in the first {window} symbols (kappa = {kappa})")]
    Infeasible { n: usize, kappa: u64, window: usize },

    /// The rational has `p` in its denominator, so it is not a p-adic integer
    /// and has no digit expansion starting at exponent zero.
    #[error("{value} is not a {p}-adic integer (denominator divisible by {p})")]
    NotPadicInteger { value: String, p: u64 },

    /// The digit stream looks ultimately periodic on the examined window, so
    /// the number it defines is rational and outside the scope of the
    /// classification machinery.
    #[error("digits look ultimately periodic (preperiod {preperiod}, period {period}) on the examined window; the value is rational")]
    RationalValue { preperiod: usize, period: usize },

    /// A hypothesis of an exact-inequality check failed; names the index and
    /// the condition so the caller can see exactly what was violated.
    #[error("hypothesis violated at index {index}: {condition}")]
    HypothesisViolation { index: usize, condition: String },

    /// Malformed sequence-spec file.
    #[error("spec parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
