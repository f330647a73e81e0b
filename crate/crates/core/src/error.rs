use thiserror::Error;

/// Errors reported by construction, surgery, enumeration and sampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("images do not form a permutation of 0..{size}")]
    InvalidPermutation { size: usize },

    #[error("permutation sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("pairing must be a fixed-point-free involution (offending half-edge {half_edge})")]
    InvalidInvolution { half_edge: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram is not a perfect matching (position {position} is unpaired)")]
    NotPerfectMatching { position: usize },

    #[error("permutation pair is not unicellular: the face walk has {found} cycles")]
    NotUnicellular { found: usize },

    #[error("vertex handles must name distinct vertices")]
    VerticesNotDistinct,

    #[error("a glued vertex set must contain an odd number (at least 3) of vertices, got {0}")]
    BadVertexSetSize(usize),

    #[error("half-edge {0} is not a trisection of this map")]
    NotATrisection(usize),

    #[error("the trisection image must follow both vertex anchors in tour order")]
    InvalidGlueOrder,

    #[error("no structures with {edges} arcs have genus {genus}")]
    InfeasibleMatching { edges: usize, genus: usize },

    #[error("no diagrams of length {length} have genus {genus}")]
    InfeasibleDiagram { length: usize, genus: usize },

    #[error("requested {requested} vertices but the map has only {available}")]
    NotEnoughVertices { requested: usize, available: usize },

    #[error("loop energy is only defined for genus 0 and 1, got genus {0}")]
    UnsupportedGenus(usize),

    #[error("a labeled structure carries between 1 and 3 labels, got {0}")]
    BadLabelCount(usize),

    #[error("invalid energy parameter file: {0}")]
    BadParameterFile(String),

    #[error("distribution weights must be positive and sum to one")]
    BadDistribution,
}

pub type Result<T> = std::result::Result<T, Error>;
