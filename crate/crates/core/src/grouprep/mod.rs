//! Group descriptors, words in generators and abelianization.

mod desc;
mod graph;
mod word;

use thiserror::Error;

use crate::zlattice::LatticeError;

pub use desc::{
    abelianize, center_info, char_space, evaluate_word, Abelianization, CenterInfo, CharSpace,
    FinitenessBound, GroupDesc, SubgroupEmbedding, TableGroup,
};
pub(crate) use desc::garside;
pub use graph::{Edge, LabeledGraph};
pub use word::{Word, WordDisplay};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("generator index {index} out of range ({generators} generators)")]
    IndexOutOfRange { index: usize, generators: usize },
    #[error("cannot parse word '{word}': {reason}")]
    WordParse { word: String, reason: String },
    #[error("not computable from the descriptor: {0}")]
    NotComputable(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
