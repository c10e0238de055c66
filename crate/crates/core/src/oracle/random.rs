//! Seeded random games on distributive lattices.
//!
//! A random poset on `k ≤ 7` points is drawn, and the lattice is the set of
//! its down-sets ordered by inclusion. Down-set lattices are always
//! lattices and carry additive valuations, which makes modular degree/rank
//! pay-offs easy to build.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::Game;
use crate::instances::{game_from_degree_rank, DegreeRankData, InstanceError};
use crate::lattice::FiniteLattice;
use crate::value::{Value, ValueDomain};
use crate::DynGame;

pub const MAX_POSET_SIZE: usize = 7;
pub const DEFAULT_REJECTION_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("generator poset size {0} exceeds {MAX_POSET_SIZE}")]
    SizeCap(usize),
    #[error("no convex table found after {0} draws")]
    RejectionBudgetExceeded(usize),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayoffKind {
    /// Slopes of additive degree and rank valuations.
    ModularDegreeRank,
    /// A table conditioned on convexity by rejection sampling.
    RandomTableConvex,
    /// An unconstrained table.
    RandomTableAny,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Rational,
    LexTuple(usize),
}

impl DomainKind {
    fn domain(self) -> ValueDomain {
        match self {
            DomainKind::Rational => ValueDomain::rational(),
            DomainKind::LexTuple(k) => ValueDomain::lex_tuple(k),
        }
    }

    fn width(self) -> usize {
        match self {
            DomainKind::Rational => 1,
            DomainKind::LexTuple(k) => k,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomInstanceConfig {
    pub seed: u64,
    pub poset_size: usize,
    pub payoff_kind: PayoffKind,
    pub domain: DomainKind,
    pub rejection_budget: usize,
}

impl RandomInstanceConfig {
    pub fn new(seed: u64, poset_size: usize, payoff_kind: PayoffKind) -> Self {
        RandomInstanceConfig {
            seed,
            poset_size,
            payoff_kind,
            domain: DomainKind::Rational,
            rejection_budget: DEFAULT_REJECTION_BUDGET,
        }
    }

    pub fn with_domain(mut self, domain: DomainKind) -> Self {
        self.domain = domain;
        self
    }
}

/// `below[i]` is the bitmask of points strictly below point `i`.
fn random_poset(rng: &mut ChaCha8Rng, k: usize) -> Vec<u32> {
    let mut below = vec![0u32; k];
    for j in 0..k {
        for i in 0..j {
            if rng.gen_bool(0.4) {
                below[j] |= 1 << i | below[i];
            }
        }
    }
    below
}

fn mask_label(mask: u32) -> String {
    let names: Vec<String> = (0..32).filter(|b| mask >> b & 1 == 1).map(|b| ((b'a' + b as u8) as char).to_string()).collect();
    format!("{{{}}}", names.join(","))
}

/// The down-set lattice of a random poset, with the down-set (as a point
/// bitmask) behind each element. Elements are sorted by size, then mask.
pub fn random_downset_lattice(cfg: &RandomInstanceConfig) -> Result<(FiniteLattice, Vec<u32>), OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    downset_lattice(&mut rng, cfg.poset_size)
}

fn downset_lattice(rng: &mut ChaCha8Rng, k: usize) -> Result<(FiniteLattice, Vec<u32>), OracleError> {
    if k > MAX_POSET_SIZE {
        return Err(OracleError::SizeCap(k));
    }
    if k == 0 {
        return Err(OracleError::SizeCap(0));
    }
    let below = random_poset(rng, k);
    let mut masks: Vec<u32> =
        (0..1u32 << k).filter(|&m| (0..k).all(|i| m >> i & 1 == 0 || below[i] & !m == 0)).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let labels = masks.iter().map(|&m| mask_label(m)).collect();
    let lattice = FiniteLattice::from_leq(labels, |i, j| masks[i] & !masks[j] == 0).expect("down-sets form a lattice");
    Ok((lattice, masks))
}

fn small_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(lo..=hi)), BigInt::from(rng.gen_range(1..=3i64)))
}

fn pack(domain: DomainKind, coords: Vec<BigRational>) -> Value {
    match domain {
        DomainKind::Rational => Value::Rational(coords.into_iter().next().expect("one coordinate")),
        DomainKind::LexTuple(_) => Value::LexTuple(coords),
    }
}

/// A reproducible random game: identical configs give identical games.
pub fn random_game(cfg: &RandomInstanceConfig) -> Result<DynGame, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lattice, masks) = downset_lattice(&mut rng, cfg.poset_size)?;
    let domain = cfg.domain.domain();
    let width = cfg.domain.width();
    match cfg.payoff_kind {
        PayoffKind::ModularDegreeRank => {
            let k = cfg.poset_size;
            let w_r: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=2)).collect();
            let w_d: Vec<Vec<BigRational>> = w_r
                .iter()
                .map(|&r| {
                    (0..width)
                        .map(|c| if r == 0 && c == 0 { small_rational(&mut rng, 1, 6) } else { small_rational(&mut rng, -6, 6) })
                        .collect()
                })
                .collect();
            let degree = masks
                .iter()
                .map(|&m| {
                    let coords = (0..width)
                        .map(|c| (0..k).filter(|&p| m >> p & 1 == 1).map(|p| w_d[p][c].clone()).sum())
                        .collect();
                    pack(cfg.domain, coords)
                })
                .collect();
            let rank = masks
                .iter()
                .map(|&m| BigRational::from_integer((0..k).filter(|&p| m >> p & 1 == 1).map(|p| w_r[p]).sum::<i64>().into()))
                .collect();
            Ok(game_from_degree_rank(lattice, &DegreeRankData { degree, rank }, domain)?)
        }
        PayoffKind::RandomTableAny => {
            let game = Game::new(lattice, domain, |_, _| {
                pack(cfg.domain, (0..width).map(|_| small_rational(&mut rng, -5, 5)).collect())
            })
            .expect("values fit the domain");
            Ok(game)
        }
        PayoffKind::RandomTableConvex => {
            // The proposal grows with the height of the lower end and has
            // occasional spikes, so draws are convex often but not always.
            for _ in 0..cfg.rejection_budget {
                let game = Game::new(lattice.clone(), domain.clone(), |a, _| {
                    let height = masks[a.0].count_ones() as i64;
                    let coords = (0..width)
                        .map(|_| {
                            let noise = if rng.gen_bool(0.02) { rng.gen_range(3..=6) } else { rng.gen_range(0..=2) };
                            BigRational::from_integer((2 * height + noise).into())
                        })
                        .collect();
                    pack(cfg.domain, coords)
                })
                .expect("values fit the domain");
                if game.is_convex() {
                    return Ok(game);
                }
            }
            Err(OracleError::RejectionBudgetExceeded(cfg.rejection_budget))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ElementId;

    #[test]
    fn one_point_is_two_chain() {
        let (l, masks) = random_downset_lattice(&RandomInstanceConfig::new(3, 1, PayoffKind::ModularDegreeRank)).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(masks, vec![0, 1]);
    }

    #[test]
    fn antichain_gives_boolean_lattice() {
        // Two points stay unrelated unless the coin relates them; the first seed that leaves them so.
        let (l, masks) = (0..)
            .map(|seed| random_downset_lattice(&RandomInstanceConfig::new(seed, 2, PayoffKind::RandomTableAny)).unwrap())
            .find(|(l, _)| l.len() == 4)
            .unwrap();
        assert_eq!(masks, vec![0, 1, 2, 3]);
        assert!(!l.comparable(ElementId(1), ElementId(2)));
    }

    #[test]
    fn pinned_lattice() {
        let (l, _) = random_downset_lattice(&RandomInstanceConfig::new(42, 4, PayoffKind::ModularDegreeRank)).unwrap();
        let covers: Vec<String> =
            l.covers().iter().map(|&(a, b)| format!("{}<{}", l.label(a), l.label(b))).collect();
        assert_eq!(l.labels().join(" "), PINNED_LABELS);
        assert_eq!(covers.join(" "), PINNED_COVERS);
    }

    const PINNED_LABELS: &str = "{} {a} {b} {c} {a,b} {a,c} {b,c} {a,b,c} {b,c,d} {a,b,c,d}";
    const PINNED_COVERS: &str = "{}<{a} {}<{b} {}<{c} {a}<{a,b} {a}<{a,c} {b}<{a,b} {b}<{b,c} {c}<{a,c} {c}<{b,c} \
         {a,b}<{a,b,c} {a,c}<{a,b,c} {b,c}<{a,b,c} {b,c}<{b,c,d} {a,b,c}<{a,b,c,d} {b,c,d}<{a,b,c,d}";

    #[test]
    fn size_cap() {
        let cfg = RandomInstanceConfig::new(1, 8, PayoffKind::RandomTableAny);
        assert_eq!(random_game(&cfg).unwrap_err(), OracleError::SizeCap(8));
    }

    #[test]
    fn deterministic() {
        for kind in [PayoffKind::ModularDegreeRank, PayoffKind::RandomTableAny, PayoffKind::RandomTableConvex] {
            for domain in [DomainKind::Rational, DomainKind::LexTuple(2)] {
                let cfg = RandomInstanceConfig::new(7, 4, kind).with_domain(domain);
                let (a, b) = (random_game(&cfg).unwrap(), random_game(&cfg).unwrap());
                assert_eq!(a.lattice(), b.lattice());
                for (x, y) in a.lattice().strict_pairs() {
                    assert_eq!(a.payoff(x, y), b.payoff(x, y));
                }
            }
        }
    }

    #[test]
    fn modular_is_affine_and_slope_like() {
        for seed in 0..20 {
            for domain in [DomainKind::Rational, DomainKind::LexTuple(2)] {
                let g = random_game(&RandomInstanceConfig::new(seed, 4, PayoffKind::ModularDegreeRank).with_domain(domain)).unwrap();
                assert!(g.is_affine(), "seed {seed}");
                assert!(g.is_slope_like().unwrap(), "seed {seed}");
            }
        }
    }

    #[test]
    fn table_kinds() {
        let mut non_convex = 0;
        for seed in 0..20 {
            let g = random_game(&RandomInstanceConfig::new(seed, 4, PayoffKind::RandomTableConvex)).unwrap();
            assert!(g.is_convex());
            let h = random_game(&RandomInstanceConfig::new(seed, 4, PayoffKind::RandomTableAny)).unwrap();
            if let Some(&(x, y)) = h.convexity().witness() {
                let l = h.lattice();
                let lhs = h.payoff(l.meet(x, y), x).unwrap();
                let rhs = h.payoff(y, l.join(x, y)).unwrap();
                use crate::value::ValueLattice;
                assert!(!h.domain().leq(lhs, rhs));
                non_convex += 1;
            }
        }
        assert!(non_convex > 0);
    }

    #[test]
    fn zero_rank_weights_give_infinite_slopes() {
        // Search seeds for a draw with all rank weights zero.
        let g = (0..500)
            .map(|s| random_game(&RandomInstanceConfig::new(s, 1, PayoffKind::ModularDegreeRank)).unwrap())
            .find(|g| g.mu_a_star() == Value::PosInfinity)
            .expect("some seed draws w_r = 0");
        assert!(g.is_semistable());
    }
}
