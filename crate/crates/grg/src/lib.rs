//! Functional symbolic tensor calculus.
//!
//! Tensor fields are functions from signed index tuples to symbolic
//! expressions, evaluated on demand and memoized per component — nothing is
//! computed until a component is requested, and nothing is computed twice.
//! A positive index selects a covariant slot, a negative one contravariant;
//! index raising/lowering happens transparently through the metric of the
//! currently open manifold.
//!
//! The crate builds up from a self-contained expression kernel
//! ([`symexpr`]), through manifold declaration ([`manifold`]) and the lazy
//! tensor-field registry ([`tensor`]), to curvature ([`curvature`]),
//! derivative operators ([`deriv`]), hypersurface projection
//! ([`hypersurface`]), and the Carminati–McLenaghan curvature invariants
//! ([`invariants`]). The `grg` binary exposes all of it over manifold spec
//! files.

pub mod error;
pub mod symexpr;

pub mod cli;
pub(crate) mod curvature;
pub(crate) mod deriv;
pub(crate) mod hypersurface;
pub mod invariants;
pub mod manifold;
pub mod tensor;

pub use error::{Error, Result};
pub use invariants::{CmInvariant, ALL_INVARIANTS};
pub use tensor::{IndexTuple, Scope, Session, SessionCore};
