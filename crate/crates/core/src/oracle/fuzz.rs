//! Seeded random cross-checks of the engine against the oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::GameFile;
use crate::game::Verdict;
use crate::lattice::ElementId;
use crate::value::ValueLattice;
use crate::DynGame;

use super::brute::{brute_mu_a, enumerate_hn_candidates};
use super::laws::check_laws;
use super::random::{random_game, DomainKind, OracleError, PayoffKind, RandomInstanceConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    /// Largest generator poset size; each instance draws a size in `1..=size`.
    pub size: usize,
    /// Test hook: compare the oracle against `μ_max` instead of `μ_A`.
    pub inject_fault: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzSummary {
    pub instances: usize,
    pub pair_checks: usize,
    pub law_checks: usize,
    pub hn_checks: usize,
    /// Convex-table draws that ran out of rejection budget.
    pub skipped: usize,
}

#[derive(Clone, Debug)]
pub struct FuzzFailure {
    pub instance: usize,
    pub config: RandomInstanceConfig,
    pub check: &'static str,
    pub detail: String,
    pub game: Option<DynGame>,
}

impl FuzzFailure {
    fn new(instance: usize, config: RandomInstanceConfig, check: &'static str, detail: String, game: &DynGame) -> Self {
        FuzzFailure { instance, config, check, detail, game: Some(game.clone()) }
    }
}

/// The instance configurations a fuzz run visits, in order.
pub fn instance_configs(cfg: &FuzzConfig) -> Vec<RandomInstanceConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let kinds = [PayoffKind::ModularDegreeRank, PayoffKind::RandomTableConvex, PayoffKind::RandomTableAny];
    (0..cfg.count)
        .map(|i| {
            let domain = if rng.gen_bool(0.25) { DomainKind::LexTuple(2) } else { DomainKind::Rational };
            RandomInstanceConfig::new(rng.gen(), rng.gen_range(1..=cfg.size.max(1)), kinds[i % kinds.len()]).with_domain(domain)
        })
        .collect()
}

fn pair_label(g: &DynGame, x: ElementId, y: ElementId) -> String {
    format!("({}, {})", g.lattice().label(x), g.lattice().label(y))
}

/// Runs every check on one game, updating `summary`.
pub fn check_game(g: &DynGame, inject_fault: bool, summary: &mut FuzzSummary) -> Result<(), (&'static str, String)> {
    let d = g.domain();
    for (x, y) in g.lattice().strict_pairs() {
        let engine = if inject_fault { g.mu_max(x, y) } else { g.mu_a(x, y) }.expect("strict pair");
        let oracle = brute_mu_a(g, x, y).expect("strict pair");
        summary.pair_checks += 1;
        if engine != oracle {
            return Err((
                "oracle equivalence",
                format!("mu_A{} engine {} oracle {}", pair_label(g, x, y), d.render(&engine), d.render(&oracle)),
            ));
        }
    }

    let total = d.is_total();
    if total && g.is_convex() {
        let hn = g.hn_filtration().map_err(|e| ("hn filtration", e.to_string()))?;
        if let Verdict::Fails(defect) = g.verify_filtration(&hn.chain).expect("chain") {
            return Err(("hn verification", defect.to_string()));
        }
        let candidates = enumerate_hn_candidates(g).expect("total order");
        summary.hn_checks += 1;
        if candidates != vec![hn.clone()] {
            return Err(("hn uniqueness", format!("{} candidates, engine chain {:?}", candidates.len(), hn.chain)));
        }
    }

    let dual = g.dual();
    if !d.equal(&dual.mu_b_star(), &g.mu_a_star()) || !d.equal(&dual.mu_a_star(), &g.mu_b_star()) {
        return Err(("duality", "first-mover thresholds are not swapped".into()));
    }
    let text = GameFile::from_game(g).to_json_string();
    let reparsed = GameFile::from_json_str(&GameFile::from_game(&dual.dual()).to_json_string())
        .and_then(|f| f.load())
        .map_err(|e| ("serialization", e.to_string()))?;
    if GameFile::from_game(&reparsed.game).to_json_string() != text {
        return Err(("duality", "dual of the dual serializes differently".into()));
    }

    if total && g.is_slope_like().expect("total order") {
        let r = g.report();
        if !r.statements_agree() {
            return Err(("equivalence theorem", format!("{:?}", r.statements)));
        }
        if r.mu_a_star != r.mu_min_top || r.mu_b_star != r.mu_max_top {
            return Err(("first mover", "thresholds differ from mu_min(top) / mu_max(top)".into()));
        }
    }

    summary.law_checks += check_laws(g).map_err(|v| ("laws", v.to_string()))?;
    Ok(())
}

/// Generates `count` instances and checks each. Stops at the first failure.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzSummary, FuzzFailure> {
    let mut summary = FuzzSummary::default();
    for (i, icfg) in instance_configs(cfg).into_iter().enumerate() {
        let g = match random_game(&icfg) {
            Ok(g) => g,
            Err(OracleError::RejectionBudgetExceeded(_)) => {
                summary.skipped += 1;
                continue;
            }
            Err(e) => {
                return Err(FuzzFailure { instance: i, config: icfg, check: "generation", detail: e.to_string(), game: None });
            }
        };
        if let Err((check, detail)) = check_game(&g, cfg.inject_fault, &mut summary) {
            return Err(FuzzFailure::new(i, icfg, check, detail, &g));
        }
        summary.instances += 1;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run() {
        let s = run_fuzz(&FuzzConfig { seed: 1, count: 12, size: 3, inject_fault: false }).unwrap();
        assert_eq!(s.instances, 12);
        assert!(s.pair_checks > 0 && s.law_checks > 0 && s.hn_checks > 0);
    }

    #[test]
    fn empty_run() {
        let s = run_fuzz(&FuzzConfig { seed: 5, count: 0, size: 4, inject_fault: false }).unwrap();
        assert_eq!(s, FuzzSummary::default());
    }

    #[test]
    fn injected_fault_is_caught() {
        let f = run_fuzz(&FuzzConfig { seed: 1, count: 20, size: 3, inject_fault: true }).unwrap_err();
        assert_eq!(f.check, "oracle equivalence");
        assert!(f.game.is_some());
    }
}
