use std::fmt;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A word must contain at least one symbol.
    EmptyWord,
    /// Alphabet sizes below 2 are meaningless.
    AlphabetTooSmall(u32),
    /// A symbol was not in `[0, q-1]`.
    SymbolOutOfRange { symbol: u32, q: u32 },
    /// Word text that does not parse in the expected format.
    MalformedWord(String),
    /// A parameter violated an operation's domain.
    Domain(String),
    /// The closed form is only available at radius one.
    UnsupportedRadius(usize),
    /// The refined maximum requires a non-binary alphabet.
    UnsupportedAlphabet(u32),
    /// An exhaustive enumeration was refused up front.
    BudgetExceeded { required: u128, budget: u128 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyWord => write!(f, "empty word"),
            Error::AlphabetTooSmall(q) => write!(f, "alphabet size {q} is too small (need q >= 2)"),
            Error::SymbolOutOfRange { symbol, q } => {
                write!(f, "symbol {symbol} is outside the alphabet [0, {}]", q - 1)
            }
            Error::MalformedWord(text) => write!(f, "malformed word text: {text}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::UnsupportedRadius(t) => {
                write!(
                    f,
                    "unsupported radius t={t}: the explicit size is only known for t=1"
                )
            }
            Error::UnsupportedAlphabet(q) => {
                write!(
                    f,
                    "unsupported alphabet q={q}: the refined maximum requires q >= 3"
                )
            }
            Error::BudgetExceeded { required, budget } => write!(
                f,
                "enumeration would visit {required} words, exceeding the budget of {budget}"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
