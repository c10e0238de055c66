//! Builders turning user-level descriptions into games.

mod dag;
mod degree_rank;
pub mod module;

use thiserror::Error;

use crate::game::GameError;
use crate::lattice::LatticeError;

pub use dag::game_from_dag;
pub use degree_rank::{game_from_degree_rank, scalar_degree_rank, DegreeRankData};
pub use module::{ass_payoff, coprimary_filtration, CoprimaryFiltration, FiniteAbelianModule, ModuleError, ModuleInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("no weight given for the pair ({0}, {1})")]
    MissingWeight(String, String),
    #[error("expected {expected} entries for `{what}`, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("degree of `{0}` must be a finite rational or lex tuple of the domain")]
    BadDegree(String),
    #[error("rank of `{0}` is negative")]
    NegativeRank(String),
    #[error("rank decreases from `{0}` to `{1}`")]
    RankNotMonotone(String, String),
    #[error("rank is constant from `{0}` to `{1}` but the degree does not increase")]
    ZeroRankNonPositiveDegree(String, String),
}
