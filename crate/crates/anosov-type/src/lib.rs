//! Geometric types `(n, h, v, φ, u)` and their subshift-of-finite-type shadow.

pub mod geomtype;
pub mod sft;

pub use geomtype::{
    all_equivalences, equivalence_class, is_equal, is_equivalent, orientation_double_cover, EquivalenceWitness,
    GeometricType, HandleKind, RawType, SubrectHandle, ValidationError,
};
pub use sft::{entropy, periodic_word_count, transition_matrix, Entropy, SftError, TransitionMatrix};
