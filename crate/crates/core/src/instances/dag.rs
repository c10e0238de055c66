use crate::game::{Game, GameError};
use crate::lattice::{FiniteLattice, RelationKind};
use crate::value::ValueLattice;

use super::InstanceError;

/// A game drawn as an edge-weighted directed graph.
///
/// The lattice order is the reflexive-transitive closure of the edges, so
/// every weighted edge is also a relation. Every strictly ordered pair,
/// not only the covers, needs a weight.
pub fn game_from_dag<D: ValueLattice, S: AsRef<str>>(
    labels: &[S],
    edges: &[(S, S, D::Value)],
    domain: D,
) -> Result<Game<D>, InstanceError> {
    let pairs: Vec<(&str, &str)> = edges.iter().map(|(a, b, _)| (a.as_ref(), b.as_ref())).collect();
    let labels: Vec<&str> = labels.iter().map(AsRef::as_ref).collect();
    let lattice = FiniteLattice::build(&labels, &pairs, RelationKind::Covers)?;
    let entries: Vec<_> = edges
        .iter()
        .map(|(a, b, v)| (lattice.id(a.as_ref()).expect("known"), lattice.id(b.as_ref()).expect("known"), v.clone()))
        .collect();
    Game::from_entries(lattice, domain, entries).map_err(|e| match e {
        GameError::MissingPayoff(a, b) => InstanceError::MissingWeight(a, b),
        other => other.into(),
    })
}
