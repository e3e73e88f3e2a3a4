use thiserror::Error;

/// Errors raised by validation and construction routines.
///
/// Edge, vertex and group elements are reported by their string ids so that
/// messages survive serialization across the CLI boundary.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KgtError {
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertexId(String),
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("rank {0} outside the supported range 1..={1}")]
    UnsupportedRank(usize, usize),
    #[error("edge `{0}` has color {1}, outside 1..={2}")]
    BadEdgeColor(String, usize, usize),
    #[error("unknown vertex `{0}` referenced by `{1}`")]
    UnknownVertex(String, String),
    #[error("unknown edge `{0}` referenced by a square")]
    UnknownEdge(String),
    #[error("no factorisation square for the composable pair ({0}, {1})")]
    MissingSquare(String, String),
    #[error("factorisation squares are not a bijection: {0}")]
    NonBijectiveSquares(String),
    #[error("square ({0}, {1}) -> ({2}, {3}) has mismatched endpoints or colors")]
    EndpointMismatch(String, String, String, String),
    #[error("cube condition fails on the composable triple ({0}, {1}, {2})")]
    CubeViolation(String, String, String),
    #[error("unique factorisation fails for a path of degree {0} split at {1}")]
    FactorisationViolation(String, String),

    #[error("source/range mismatch: cannot compose `{0}` after `{1}`")]
    ComposeMismatch(String, String),
    #[error("degree out of range: {0} not within 0 <= p <= q <= {1}")]
    DegreeOutOfRange(String, String),
    #[error("path belongs to a different graph")]
    GraphMismatch,
    #[error("ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("group invalid: {0}")]
    GroupInvalid(String),
    #[error("group of order {0} exceeds the cap {1}")]
    GroupTooLarge(usize, usize),
    #[error("map is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("surjectivity fails for the quotient onto level {0}")]
    SurjectivityFailure(usize),
    #[error("cocycle label missing for edge `{0}`")]
    MissingLabel(String),
    #[error("cocycle breaks the square ({0}, {1}) -> ({2}, {3})")]
    SquareIncompatible(String, String, String, String),
    #[error("cocycle chain incompatible at level {0} on edge `{1}`")]
    ChainIncompatible(usize, String),
    #[error("profinite components incompatible at level {0}")]
    IncompatibleComponents(usize),
    #[error("profinite levels differ: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("level {0} outside 1..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),

    #[error("covering map is not surjective on {0}")]
    NotSurjective(String),
    #[error("covering map not injective on the color-{1} edges at vertex `{0}`")]
    NotLocallyInjective(String, usize),
    #[error("covering map not surjective on the color-{1} edges at vertex `{0}`")]
    NotLocallySurjective(String, usize),
    #[error("covering map does not preserve the square ({0}, {1})")]
    SquareNotPreserved(String, String),
    #[error("covering map is not a functor: {0}")]
    NotAFunctor(String),
    #[error("covering sequence mismatched at index {0}")]
    ChainMismatch(usize),

    #[error("graph has a source: vertex `{0}` receives no color-{1} edge")]
    HasSources(String, usize),
    #[error("triple (v={0}, p={1}, q={2}) is not locally periodic; refusing to evaluate")]
    TripleNotPeriodic(String, String, String),
    #[error("cycle of an infinite path spec must have strictly positive degree, got {0}")]
    DegenerateCycle(String),
    #[error("infinite path spec invalid: {0}")]
    BadInfinitePathSpec(String),
    #[error("profinite element has {0} components but depth {1} is required")]
    LevelTooShallow(usize, usize),
    #[error("tower path prefix too shallow to decompose: {0}")]
    InsufficientDepth(String),
    #[error("projective tuple incompatible at level {0}")]
    IncompatibleTuple(usize),

    #[error("enumeration would produce {0} paths, above the cap {1}")]
    EnumerationCapExceeded(u64, u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, KgtError>;
