//! Harder-Narasimhan games on finite bounded lattices.
//!
//! A game is a finite bounded lattice, an ordered value domain and a pay-off
//! on every strictly ordered pair. The crate computes the first-mover
//! thresholds, semi-stability, the Harder-Narasimhan filtration and
//! Jordan-Hölder filtrations exactly, and ships instance builders
//! (weighted graphs, degree/rank slopes, finite abelian groups) plus brute
//! force oracles for cross-checking.
//!
//! The engine is generic over the value lattice. [`DynGame`] uses the
//! runtime-selected [`ValueDomain`]; [`ScalarGame`] works over any ordered
//! scalar extended by `±∞`.

pub mod filtration;
pub mod format;
pub mod game;
pub mod instances;
pub mod lattice;
pub mod oracle;
pub mod report;
pub mod value;

pub use format::{FormatError, GameFile, LoadedGame};
pub use filtration::{Filtration, FiltrationDefect};
pub use game::{Game, GameError, Verdict};
pub use lattice::{ElementId, FiniteLattice, LatticeError, RelationKind};
pub use report::GameReport;
pub use value::{Comparison, Extended, Ordered, PrimeSet, Value, ValueDomain, ValueError, ValueLattice};

/// Exact rational scalar used by the dynamic value domain.
pub type Rational = num_rational::BigRational;

/// A game over the runtime-selected value domain.
pub type DynGame = Game<ValueDomain>;

/// A game whose values are a scalar type extended by `±∞`.
pub type ScalarGame<T> = Game<Ordered<Extended<T>>>;
