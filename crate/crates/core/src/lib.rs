//! Matroids of hyperplane arrangements, their lattices of flats, and the
//! tropical fans supported on their tropical linear spaces.
//!
//! ```
//! use bergman::{corpus, bergman_fan, fine_subdivision};
//!
//! let m = corpus::m_a3();
//! assert_eq!(fine_subdivision(&m)?.cones.len(), 18);
//! assert_eq!(bergman_fan(&m)?.cones().len(), 15);
//! # Ok::<(), bergman::Error>(())
//! ```

pub mod corpus;
pub mod endo;
pub mod error;
pub mod fan;
pub mod generators;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod matroid;
pub mod subset;
pub mod tropical;
pub mod verify;

pub use endo::{check_fan_compatibility, is_matroid_automorphism, maps_into_trop, permutation_map, CompatibilityReport, IntegerLinearMap};
pub use error::{Error, Result};
pub use fan::{bergman_fan, fine_subdivision, nested_fan, BergmanCone, BergmanFan, Fan, FanCone, SpanCanonicalForm};
pub use lattice::{BuildingSet, ChainOfFlats, LatticeOfFlats, NestedSet};
pub use linalg::{ExactMatrix, FieldKind};
pub use matroid::Matroid;
pub use subset::{GroundSet, Limits, Subset};
pub use tropical::{Partition, QuotientVector, TropicalLinearSpace};
pub use verify::{Verdict, VerificationReport, Witness};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/matroids.md")]
    mod matroids {}
    #[doc = include_str!("../../../book/src/flats.md")]
    mod flats {}
    #[doc = include_str!("../../../book/src/fans.md")]
    mod fans {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/endomorphisms.md")]
    mod endomorphisms {}
}
