pub mod audit;
pub mod block;
pub mod canon;
pub mod certificates;
pub mod classify;
pub mod design;
pub mod edges;
pub mod enumerate;
pub mod error;
pub mod parallel;
pub mod perm;
pub mod spectrum;
pub mod structure;

pub use block::{admissible_order, num_blocks, Block, Edge, Triangle, Vertex, MAX_ORDER};
pub use design::{apply_permutation, validate_design, Design, DesignRecord};
pub use edges::EdgeMask;
pub use enumerate::{enumerate_labeled, Enumerator, ExpandedEnumerator, LabeledSearch, Strategy, SubtreeSearch};
pub use error::{Error, Result};
pub use perm::Permutation;
