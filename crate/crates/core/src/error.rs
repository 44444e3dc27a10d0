use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed tree encoding `{0}`")]
    MalformedTree(String),
    #[error("generator f_{{{j},{n}}} out of range")]
    GeneratorIndex { j: usize, n: usize },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("not a bijection: {0}")]
    NotBijective(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("element {0} is out of range")]
    ElementRange(usize),
    #[error("element {0} is not central")]
    NotCentral(usize),
    #[error("element {0} does not have order dividing 2")]
    NotInvolution(usize),
    #[error("cocycle identity fails: {0}")]
    CocycleIdentity(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
