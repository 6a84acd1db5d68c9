//! Finite exact patches of a Markovian family in the plane, rectangle paths over them,
//! boundary points, cycles and the flow comparison built on top.

pub mod cycles;
pub mod develop;
pub mod geometry;
pub mod paths;
pub mod render;

use anosov_exact::ExactError;

pub use develop::{develop, Budget, DeckTransform, DevelopedPatch, DevelopedRectangle, RectId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlaneError {
    #[error("budget exhausted after {rects} rectangles")]
    BudgetExhausted { rects: usize },
    #[error("u is not identically +1; use the orientation double cover")]
    OrientationNotPositive,
    #[error("the Perron root is 1, so there is no expansion")]
    LambdaNotExpanding,
    #[error("transition matrix is not irreducible")]
    NotIrreducible,
    #[error("rectangle {0} has not been developed")]
    FrontierIncomplete(RectId),
    #[error("rectangles are not comparable")]
    NotComparable,
    #[error("search depth exceeded")]
    DepthExceeded,
    #[error("rectangle does not contain the required germ")]
    GermNotContained,
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("abstract step expects type {expected}, found {found}")]
    TypeMismatch { expected: usize, found: usize },
    #[error("orbit could not be matched")]
    NotMatched,
    #[error("not a rectangle path at step {0}")]
    NotAPath(usize),
    #[error("inconsistent development: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T> = std::result::Result<T, PlaneError>;
