use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` out of range: {msg}")]
    Param { name: String, msg: String },
    #[error("pole: {0}")]
    Pole(String),
    #[error("divergent product: base of modulus {0} >= 1")]
    Divergent(f64),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &str, msg: impl Into<String>) -> Error {
    Error::Param { name: name.to_string(), msg: msg.into() }
}
