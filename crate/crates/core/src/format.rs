//! The JSON game-file format.
//!
//! ```json
//! {
//!   "elements": ["bot", "x", "top"],
//!   "order": {"kind": "covers", "pairs": [["bot", "x"], ["x", "top"]]},
//!   "value_domain": {"mode": "rational"},
//!   "payoff": {"kind": "table", "entries": [["bot", "x", 1], ["x", "top", "0"], ["bot", "top", "1/2"]]}
//! }
//! ```
//!
//! Other domain modes are `lex_tuple` (with `length`), `prime_set` and
//! `finite_poset` (with its own `elements` and `order`); any mode may carry
//! `"reversed": true`. Other pay-off kinds are `degree_rank` (maps
//! `degree` and `rank` from labels to values) and `module`
//! (`invariant_factors`), which derives the lattice itself.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

use crate::game::{Game, GameError};
use crate::instances::{ass_payoff, game_from_degree_rank, DegreeRankData, FiniteAbelianModule, InstanceError, ModuleError, ModuleInstance};
use crate::lattice::{FiniteLattice, LatticeError, RelationKind};
use crate::value::{parse_rational, DomainMode, ValueDomain, ValueError};
use crate::DynGame;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_domain: Option<DomainSpec>,
    pub payoff: PayoffSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Covers,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderSpec {
    pub kind: OrderKind,
    pub pairs: Vec<(String, String)>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Rational {
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
    LexTuple {
        length: usize,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
    PrimeSet {
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
    FinitePoset {
        elements: Vec<String>,
        order: OrderSpec,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PayoffSpec {
    Table { entries: Vec<(String, String, Json)> },
    DegreeRank { degree: BTreeMap<String, Json>, rank: BTreeMap<String, Json> },
    Module { invariant_factors: Vec<u64> },
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid game file: {0}")]
    Syntax(String),
    #[error("invalid game file: {0}")]
    Schema(String),
    #[error("{context}: {source}")]
    Value { context: String, source: ValueError },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Game(#[from] GameError),
}

impl FormatError {
    /// Syntax and schema problems are parse errors; everything else is a
    /// structural problem of an otherwise well-formed game.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, FormatError::Syntax(_) | FormatError::Schema(_) | FormatError::Value { .. })
    }
}

/// A loaded game, with the subgroup data when it came from a module.
#[derive(Clone, Debug)]
pub struct LoadedGame {
    pub game: DynGame,
    pub module: Option<ModuleInstance>,
}

impl GameFile {
    pub fn from_json_str(s: &str) -> Result<GameFile, FormatError> {
        serde_json::from_str(s).map_err(|e| match e.classify() {
            serde_json::error::Category::Data => FormatError::Schema(e.to_string()),
            _ => FormatError::Syntax(e.to_string()),
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("game files serialize");
        s.push('\n');
        s
    }

    pub fn load(&self) -> Result<LoadedGame, FormatError> {
        if let PayoffSpec::Module { invariant_factors } = &self.payoff {
            if let Some(d) = &self.value_domain {
                if !matches!(d, DomainSpec::PrimeSet { reversed: false }) {
                    return Err(FormatError::Schema("module pay-offs use the prime_set domain".into()));
                }
            }
            let inst = ass_payoff(&FiniteAbelianModule::new(invariant_factors)?)?;
            return Ok(LoadedGame { game: inst.game.clone(), module: Some(inst) });
        }
        let elements = self.elements.as_ref().ok_or_else(|| FormatError::Schema("missing field `elements`".into()))?;
        let order = self.order.as_ref().ok_or_else(|| FormatError::Schema("missing field `order`".into()))?;
        let spec = self.value_domain.as_ref().ok_or_else(|| FormatError::Schema("missing field `value_domain`".into()))?;
        let lattice = build_lattice(elements, order)?;
        let domain = spec.to_domain()?;
        let game = match &self.payoff {
            PayoffSpec::Table { entries } => {
                let mut parsed = Vec::with_capacity(entries.len());
                for (a, b, v) in entries {
                    let id = |s: &str| lattice.id(s).ok_or_else(|| LatticeError::UnknownLabel(s.into()));
                    let value = domain
                        .parse_value(v)
                        .map_err(|source| FormatError::Value { context: format!("pay-off of ({a}, {b})"), source })?;
                    parsed.push((id(a)?, id(b)?, value));
                }
                Game::from_entries(lattice, domain, parsed).map_err(|e| match e {
                    GameError::MissingPayoff(a, b) => FormatError::Instance(InstanceError::MissingWeight(a, b)),
                    other => other.into(),
                })?
            }
            PayoffSpec::DegreeRank { degree, rank } => {
                for label in degree.keys().chain(rank.keys()) {
                    if lattice.id(label).is_none() {
                        return Err(LatticeError::UnknownLabel(label.clone()).into());
                    }
                }
                let mut data = DegreeRankData { degree: Vec::new(), rank: Vec::new() };
                for label in lattice.labels() {
                    let missing = |what: &str| FormatError::Schema(format!("no {what} given for `{label}`"));
                    let d = degree.get(label).ok_or_else(|| missing("degree"))?;
                    let r = rank.get(label).ok_or_else(|| missing("rank"))?;
                    data.degree.push(
                        domain
                            .parse_value(d)
                            .map_err(|source| FormatError::Value { context: format!("degree of `{label}`"), source })?,
                    );
                    data.rank.push(parse_rational(r).ok_or_else(|| FormatError::Value {
                        context: format!("rank of `{label}`"),
                        source: ValueError::Parse(r.to_string()),
                    })?);
                }
                game_from_degree_rank(lattice, &data, domain)?
            }
            PayoffSpec::Module { .. } => unreachable!("handled above"),
        };
        Ok(LoadedGame { game, module: None })
    }

    /// The table form of a game: covers order, element order preserved.
    pub fn from_game(g: &DynGame) -> GameFile {
        let l = g.lattice();
        let d = g.domain();
        let entries = l
            .strict_pairs()
            .into_iter()
            .map(|(x, y)| (l.label(x).to_string(), l.label(y).to_string(), d.value_to_json(g.payoff(x, y).expect("strict"))))
            .collect();
        GameFile {
            elements: Some(l.labels().to_vec()),
            order: Some(covers_spec(l)),
            value_domain: Some(DomainSpec::from_domain(d)),
            payoff: PayoffSpec::Table { entries },
        }
    }
}

fn covers_spec(l: &FiniteLattice) -> OrderSpec {
    let pairs = l.covers().into_iter().map(|(a, b)| (l.label(a).to_string(), l.label(b).to_string())).collect();
    OrderSpec { kind: OrderKind::Covers, pairs }
}

fn build_lattice(elements: &[String], order: &OrderSpec) -> Result<FiniteLattice, LatticeError> {
    let kind = match order.kind {
        OrderKind::Covers => RelationKind::Covers,
        OrderKind::Full => RelationKind::FullOrder,
    };
    let pairs: Vec<(&str, &str)> = order.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let elements: Vec<&str> = elements.iter().map(String::as_str).collect();
    FiniteLattice::build(&elements, &pairs, kind)
}

impl DomainSpec {
    pub fn to_domain(&self) -> Result<ValueDomain, FormatError> {
        Ok(match self {
            DomainSpec::Rational { reversed } => ValueDomain::rational().with_reversed(*reversed),
            DomainSpec::LexTuple { length, reversed } => {
                if *length == 0 {
                    return Err(FormatError::Schema("lex_tuple length must be positive".into()));
                }
                ValueDomain::lex_tuple(*length).with_reversed(*reversed)
            }
            DomainSpec::PrimeSet { reversed } => ValueDomain::prime_set().with_reversed(*reversed),
            DomainSpec::FinitePoset { elements, order, reversed } => {
                ValueDomain::finite_poset(build_lattice(elements, order)?).with_reversed(*reversed)
            }
        })
    }

    pub fn from_domain(d: &ValueDomain) -> DomainSpec {
        let reversed = d.is_reversed();
        match d.mode() {
            DomainMode::ExtendedRational => DomainSpec::Rational { reversed },
            DomainMode::LexTuple(length) => DomainSpec::LexTuple { length: *length, reversed },
            DomainMode::PrimeSet => DomainSpec::PrimeSet { reversed },
            DomainMode::FinitePoset(l) => {
                DomainSpec::FinitePoset { elements: l.labels().to_vec(), order: covers_spec(l), reversed }
            }
        }
    }
}
