//! Exact symbolic computation for rational homotopy theory.
//!
//! Everything here runs over the rationals with arbitrary precision; there are
//! no floating point numbers anywhere in the computational paths. The main
//! objects are free graded-commutative cochain algebras (Sullivan models,
//! module [`cdga`]) and free differential graded Lie algebras (Quillen models,
//! module [`dgl`]). On top of those sit:
//!
//! * [`exactla`] — dense rational row reduction, linear solving, and integer
//!   Smith normal form with unimodular transforms;
//! * [`cohomology`] — cochain cohomology in a fixed degree, with reduction of
//!   arbitrary cocycles against a deterministic representative basis;
//! * [`elliptic`] — formal dimension and the structural inequalities satisfied
//!   by elliptic models, plus window evidence for cohomology vanishing;
//! * [`whitehead`] — the linear maps `b^q : V^q -> H^{q+1}` of truncations,
//!   assembled into exact-sequence tables with junction verification;
//! * [`selfequiv`] — monomial self-equivalence groups, diagram commutation
//!   checks, reduction certificates, and infiniteness criteria;
//! * [`catalog`] — built-in example models (spheres, two-stage algebras, the
//!   Arkowitz-Lupton algebra, graph-realization models) and graph utilities;
//! * [`text`] — the plain-text model/graph formats and canonical serialization.

pub mod catalog;
pub mod cdga;
pub mod cohomology;
pub mod dgl;
pub mod elliptic;
pub mod error;
pub mod exactla;
pub mod selfequiv;
pub mod text;
pub mod whitehead;

pub use error::Error;
pub use exactla::Q;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
