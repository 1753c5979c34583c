use thiserror::Error;

use crate::block::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order {0} does not admit a (K4-e)-design")]
    InadmissibleOrder(usize),
    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("invalid block [{0},{1},{2}-{3}]: vertices must be distinct")]
    InvalidBlock(usize, usize, usize, usize),
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("expected {expected} blocks, found {found}")]
    WrongBlockCount { expected: usize, found: usize },
    #[error("edge {0} is covered more than once")]
    EdgeCollision(Edge),
    #[error("edge {0} is not covered")]
    EdgeMissing(Edge),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("(X, D) is not 2-regular: vertex degrees {0:?}")]
    NotTwoRegular(Vec<usize>),
    #[error("order {0} is outside the supported reference data")]
    UnsupportedOrder(usize),
    #[error("class list for order {order} has {found} pairwise non-isomorphic representatives, expected {expected}")]
    IncompleteClassList {
        order: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class bookkeeping failed for order {order}: {detail}")]
    ClassCountMismatch { order: usize, detail: String },
    #[error("malformed input: {0}")]
    Parse(String),
}
