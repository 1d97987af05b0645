//! Real phase structures on matroid fans and matroid orientations.
//!
//! This crate implements both sides of the correspondence between
//! orientations of a matroid and real phase structures on its Bergman fan:
//!
//! * [`gf2`] — exact linear/affine algebra over Z/2 on bitmask vectors,
//!   together with the even-cover and necklace predicates.
//! * [`matroid`] — matroids as full rank tables, with constructors from
//!   circuits, bases, graphs and rational matrices, minors, lattices of
//!   flats and characteristic polynomials.
//! * [`fan`] — the fine (Ardila–Klivans) fan of a matroid: faces as chains
//!   of flats, mod-2 tangent spaces, adjacency and facet lifts.
//! * [`phase`] — real phase structures: verification, necklace orderings,
//!   reorientation, minors, real subfans and exhaustive search.
//! * [`oriented`] — oriented matroids as covector sets, with constructors
//!   from topes, signed circuits and rational matrices.
//! * [`bridge`] — the round trip between oriented matroids and phase
//!   structures, signed-circuit recovery and orientation counting.
//! * [`doc`] — JSON document schemas for all of the above.
//! * [`fixtures`] — the bundled example corpus.

pub mod bridge;
pub mod doc;
pub mod fan;
pub mod fixtures;
pub mod gf2;
pub mod matroid;
pub mod oriented;
pub mod phase;

pub use fan::{ChainOfFlats, FanMode};
pub use gf2::{AffineSubspaceGF2, BitVector, LinearSubspaceGF2};
pub use matroid::Matroid;
pub use oriented::{OrientedMatroid, SignVector, SignedCircuitSet};
pub use phase::{NecklaceOrdering, RealPhaseStructure};

#[cfg(test)]
mod thread_contract {
    //! Every value is immutable after construction and every operation is
    //! a pure function, so the core types are shareable across threads.

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_share_safe() {
        assert_send_sync::<crate::BitVector>();
        assert_send_sync::<crate::LinearSubspaceGF2>();
        assert_send_sync::<crate::AffineSubspaceGF2>();
        assert_send_sync::<crate::Matroid>();
        assert_send_sync::<crate::ChainOfFlats>();
        assert_send_sync::<crate::SignVector>();
        assert_send_sync::<crate::OrientedMatroid>();
        assert_send_sync::<crate::RealPhaseStructure>();
    }
}
