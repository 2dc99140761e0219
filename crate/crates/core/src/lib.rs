//! A word calculus for inverse systems of finite graphs.
//!
//! The crate models a compact one-dimensional space as a finite tower of
//! approximating graphs with simplicial bonding maps into subdivisions, and
//! works with the edge-path words those graphs carry:
//!
//! * [`graph`] — the towers themselves: levels, subdivisions, bonding maps,
//!   parsing, validation and serialization.
//! * [`word`] — per-level words, the one-step projection `phi`, backtrack
//!   reduction and concatenation.
//! * [`sequence`] — level-indexed word sequences: coherence checking,
//!   term-wise reduction, stabilization of reduced sequences, the completion
//!   step that reinserts letters only visited in the limit, stable initial
//!   matches and end-equivalence of words that approach the same point from
//!   different sides.
//! * [`dyadic`] / [`metric`] — exact dyadic weights for letters, two-sided
//!   length bounds for sequences, the induced radial pseudo-metric, tree
//!   neighborhoods and a four-point (0-hyperbolicity) checker.
//! * [`group`] — the group of stabilized returning sequences under
//!   concatenate-reduce-restabilize, its action on based sequences,
//!   per-level free groups, and essential vertex multiplicities.
//! * [`spaces`] — built-in example systems.
//! * [`sample`] / [`suites`] — seeded random data and the invariant suites
//!   behind `check`.
//!
//! Everything is exact: the only numbers in the crate are arbitrary-precision
//! dyadic rationals, and all truncation effects are reported as explicit
//! windows, verdicts or trust flags instead of being rounded away.

pub mod dyadic;
pub mod error;
pub mod graph;
pub mod group;
pub mod json;
pub mod metric;
pub mod sample;
pub mod sequence;
pub mod spaces;
pub mod suites;
pub mod word;

pub use dyadic::Dyadic;
pub use error::{Error, Result, Violation};
pub use graph::{BondingMap, GraphLevel, InverseSystem, SubdividedVertex, VertexId};
pub use group::{GroupElement, MultiplicityReport};
pub use metric::{FourPointReport, LengthBound, RhoResult, Separation, TreeBall, WeightedSequence};
pub use sequence::{
    CanonicalOutcome, CompletionReport, SequenceKind, StabilityVerdict, WordSequence,
};
pub use word::Word;
