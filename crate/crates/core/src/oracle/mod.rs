//! Brute-force references and seeded random instances for cross-checking
//! the engine.

mod brute;
pub mod fuzz;
pub mod laws;
pub mod random;

pub use brute::{ass_brute, brute_mu_a, enumerate_hn_candidates};
pub use random::{random_downset_lattice, random_game, DomainKind, OracleError, PayoffKind, RandomInstanceConfig};
