use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("tree: {0}")]
    Tree(String),
    #[error("simplicial set: {0}")]
    SSet(String),
    #[error("operad: {0}")]
    Operad(String),
    #[error("dendroidal: {0}")]
    Dendroidal(String),
    #[error("preoperad: {0}")]
    Preoperad(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
