//! Harder-Narasimhan games: a bounded lattice, an ordered value domain and a
//! pay-off on every strictly ordered pair.
//!
//! Alice picks `x`, Bob answers with some `y > x`; Alice minimises `μ(x, y)`
//! and Bob maximises it. The optimal threshold of the game restricted to an
//! interval `[x, y]` is
//!
//! ```text
//! μ_A(x, y) = inf_{x ≤ a < y} μ_max(a, y),   μ_max(a, y) = sup_{a < b ≤ y} μ(a, b)
//! ```
//!
//! Both tables are computed once per game (O(n³) comparisons) and reused by
//! every predicate and by the filtration code.
//!
//! The lattice is finite, so the ascending chain condition and the
//! `μ_A`-descending chain condition hold trivially and are never checked.

use std::sync::OnceLock;

use thiserror::Error;

use crate::lattice::{ElementId, FiniteLattice, LatticeError};
use crate::value::ValueLattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("`{0}` is not strictly below `{1}`")]
    NotStrictlyOrdered(String, String),
    #[error("Alice cannot pick the top element")]
    TopNotAllowed,
    #[error("no pay-off given for the pair ({0}, {1})")]
    MissingPayoff(String, String),
    #[error("pay-off given twice for the pair ({0}, {1})")]
    DuplicatePayoff(String, String),
    #[error("({0}, {1}) is not a strictly ordered pair")]
    NotAStrictPair(String, String),
    #[error("pay-off on ({lo}, {hi}) is outside the value domain: {value}")]
    ForeignValue { lo: String, hi: String, value: String },
    #[error("operation needs a totally ordered value domain")]
    PartialDomainUnsupported,
    #[error("pay-off is not convex: witness ({0}, {1})")]
    NotConvex(String, String),
    #[error("destabilizing set above `{base}` has no greatest element; maximal members: {maximal:?}")]
    NoGreatestDestabilizer { base: String, maximal: Vec<String> },
    #[error("not a chain from bottom to top: {0}")]
    NotAChain(String),
    #[error("game is not semi-stable: `{0}` destabilizes the top")]
    NotSemistable(String),
    #[error("pay-off is not slope-like: witness ({0}, {1}, {2})")]
    NotSlopeLike(String, String, String),
    #[error("pay-off of (bottom, top) is +inf")]
    InfiniteTopSlope,
}

/// Outcome of a predicate that carries a counterexample on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

struct Tables<V> {
    mu_max: Vec<Option<V>>,
    mu_a: Vec<Option<V>>,
}

/// A Harder-Narasimhan game. Immutable; the threshold tables are built on
/// first use and shared afterwards.
pub struct Game<D: ValueLattice> {
    lattice: FiniteLattice,
    domain: D,
    payoff: Vec<Option<D::Value>>,
    tables: OnceLock<Tables<D::Value>>,
}

impl<D: ValueLattice> Clone for Game<D> {
    fn clone(&self) -> Self {
        Game {
            lattice: self.lattice.clone(),
            domain: self.domain.clone(),
            payoff: self.payoff.clone(),
            tables: OnceLock::new(),
        }
    }
}

impl<D: ValueLattice + std::fmt::Debug> std::fmt::Debug for Game<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Game")
            .field("elements", &self.lattice.labels())
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl<D: ValueLattice> Game<D> {
    /// Builds a game by evaluating `payoff` on every strictly ordered pair.
    pub fn new(
        lattice: FiniteLattice,
        domain: D,
        mut payoff: impl FnMut(ElementId, ElementId) -> D::Value,
    ) -> Result<Self, GameError> {
        let n = lattice.len();
        let mut table = vec![None; n * n];
        for (x, y) in lattice.strict_pairs() {
            table[x.0 * n + y.0] = Some(payoff(x, y));
        }
        Self::from_table(lattice, domain, table)
    }

    /// Builds a game from explicit entries; every strict pair must appear exactly once.
    pub fn from_entries(
        lattice: FiniteLattice,
        domain: D,
        entries: impl IntoIterator<Item = (ElementId, ElementId, D::Value)>,
    ) -> Result<Self, GameError> {
        let n = lattice.len();
        let mut table = vec![None; n * n];
        for (x, y, v) in entries {
            if !lattice.lt(x, y) {
                return Err(GameError::NotAStrictPair(lattice.label(x).into(), lattice.label(y).into()));
            }
            if table[x.0 * n + y.0].replace(v).is_some() {
                return Err(GameError::DuplicatePayoff(lattice.label(x).into(), lattice.label(y).into()));
            }
        }
        for (x, y) in lattice.strict_pairs() {
            if table[x.0 * n + y.0].is_none() {
                return Err(GameError::MissingPayoff(lattice.label(x).into(), lattice.label(y).into()));
            }
        }
        Self::from_table(lattice, domain, table)
    }

    fn from_table(lattice: FiniteLattice, domain: D, payoff: Vec<Option<D::Value>>) -> Result<Self, GameError> {
        let n = lattice.len();
        for (x, y) in lattice.strict_pairs() {
            let v = payoff[x.0 * n + y.0].as_ref().expect("filled");
            if !domain.contains(v) {
                return Err(GameError::ForeignValue {
                    lo: lattice.label(x).into(),
                    hi: lattice.label(y).into(),
                    value: format!("{v:?}"),
                });
            }
        }
        Ok(Game { lattice, domain, payoff, tables: OnceLock::new() })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn bottom(&self) -> ElementId {
        self.lattice.bottom()
    }

    pub fn top(&self) -> ElementId {
        self.lattice.top()
    }

    fn idx(&self, x: ElementId, y: ElementId) -> usize {
        x.0 * self.lattice.len() + y.0
    }

    fn require_lt(&self, x: ElementId, y: ElementId) -> Result<(), GameError> {
        if self.lattice.lt(x, y) {
            Ok(())
        } else {
            Err(GameError::NotStrictlyOrdered(self.lattice.label(x).into(), self.lattice.label(y).into()))
        }
    }

    /// The pay-off `μ(x, y)`, defined only for `x < y`.
    pub fn payoff(&self, x: ElementId, y: ElementId) -> Option<&D::Value> {
        self.payoff.get(self.idx(x, y)).and_then(Option::as_ref)
    }

    /// `μ(x, y)` for a pair already known to be strict.
    pub(crate) fn mu(&self, x: ElementId, y: ElementId) -> &D::Value {
        self.payoff[self.idx(x, y)].as_ref().expect("strict pair")
    }

    /// `V_A(x)`: every pay-off Bob can force after Alice picks `x`.
    pub fn possible_payoffs(&self, x: ElementId) -> Result<Vec<D::Value>, GameError> {
        if x == self.top() {
            return Err(GameError::TopNotAllowed);
        }
        Ok(self.lattice.above(x).map(|y| self.mu(x, y).clone()).collect())
    }

    fn tables(&self) -> &Tables<D::Value> {
        self.tables.get_or_init(|| self.build_tables())
    }

    fn build_tables(&self) -> Tables<D::Value> {
        let l = &self.lattice;
        let n = l.len();
        let d = &self.domain;
        let mut mu_max: Vec<Option<D::Value>> = vec![None; n * n];
        for (a, y) in l.strict_pairs() {
            let bs = l.above(a).filter(|&b| l.leq(b, y));
            mu_max[a.0 * n + y.0] = Some(d.sup(bs.map(|b| self.mu(a, b))).expect("b = y is a candidate"));
        }
        let mut mu_a: Vec<Option<D::Value>> = vec![None; n * n];
        for (x, y) in l.strict_pairs() {
            let r#as = l.elements().filter(|&a| l.leq(x, a) && l.lt(a, y));
            let vals = r#as.map(|a| mu_max[a.0 * n + y.0].as_ref().expect("a < y"));
            mu_a[x.0 * n + y.0] = Some(d.inf(vals).expect("a = x is a candidate"));
        }
        Tables { mu_max, mu_a }
    }

    pub(crate) fn mu_max_unchecked(&self, x: ElementId, y: ElementId) -> &D::Value {
        self.tables().mu_max[self.idx(x, y)].as_ref().expect("strict pair")
    }

    pub(crate) fn mu_a_unchecked(&self, x: ElementId, y: ElementId) -> &D::Value {
        self.tables().mu_a[self.idx(x, y)].as_ref().expect("strict pair")
    }

    /// `μ_max(x, y) = sup { μ(x, w) : x < w ≤ y }`.
    pub fn mu_max(&self, x: ElementId, y: ElementId) -> Result<D::Value, GameError> {
        self.require_lt(x, y)?;
        Ok(self.mu_max_unchecked(x, y).clone())
    }

    /// `μ_min(x, y) = inf { μ(w, y) : x ≤ w < y }`.
    pub fn mu_min(&self, x: ElementId, y: ElementId) -> Result<D::Value, GameError> {
        self.require_lt(x, y)?;
        let l = &self.lattice;
        let ws = l.elements().filter(|&w| l.leq(x, w) && l.lt(w, y));
        Ok(self.domain.inf(ws.map(|w| self.mu(w, y))).expect("w = x is a candidate"))
    }

    /// Optimal threshold of the game restricted to `[x, y]` when Alice moves first.
    pub fn mu_a(&self, x: ElementId, y: ElementId) -> Result<D::Value, GameError> {
        self.require_lt(x, y)?;
        Ok(self.mu_a_unchecked(x, y).clone())
    }

    /// Whether the infimum defining `μ_A(x, y)` is reached by some `a`.
    /// Always true for totally ordered domains.
    pub fn mu_a_attained(&self, x: ElementId, y: ElementId) -> Result<bool, GameError> {
        self.require_lt(x, y)?;
        let l = &self.lattice;
        let target = self.mu_a_unchecked(x, y);
        Ok(l.elements()
            .filter(|&a| l.leq(x, a) && l.lt(a, y))
            .any(|a| self.domain.equal(self.mu_max_unchecked(a, y), target)))
    }

    /// `μ_A*`, the threshold of the whole game when Alice moves first.
    pub fn mu_a_star(&self) -> D::Value {
        self.mu_a_unchecked(self.bottom(), self.top()).clone()
    }

    /// `μ_B* = sup_{y ≠ ⊥} inf_{x < y} μ(x, y)`, the threshold when Bob moves first.
    pub fn mu_b_star(&self) -> D::Value {
        let b = self.bottom();
        let mins: Vec<D::Value> = self.lattice.above(b).map(|y| self.mu_min(b, y).expect("b < y")).collect();
        self.domain.sup(&mins).expect("top is above bottom")
    }

    /// The game restricted to the interval `[x, y]`.
    pub fn restrict(&self, x: ElementId, y: ElementId) -> Result<Game<D>, GameError> {
        let iv = self.lattice.interval(x, y).map_err(|_| {
            GameError::NotStrictlyOrdered(self.lattice.label(x).into(), self.lattice.label(y).into())
        })?;
        let members = iv.members.clone();
        let sub = iv.to_lattice();
        Game::new(sub, self.domain.clone(), |a, b| self.mu(members[a.0], members[b.0]).clone())
    }

    /// The dual game: reversed lattice order, reversed value order and
    /// transposed pay-off `μ̃(y, x) = μ(x, y)`.
    pub fn dual(&self) -> Game<D> {
        let n = self.lattice.len();
        let mut payoff = vec![None; n * n];
        for (x, y) in self.lattice.strict_pairs() {
            payoff[y.0 * n + x.0] = Some(self.mu(x, y).clone());
        }
        Game { lattice: self.lattice.dual(), domain: self.domain.reversed(), payoff, tables: OnceLock::new() }
    }

    /// The game whose pay-off is `μ_max`. It has the same `μ_A` as `self`.
    pub fn max_game(&self) -> Game<D> {
        Game::new(self.lattice.clone(), self.domain.clone(), |x, y| self.mu_max_unchecked(x, y).clone())
            .expect("values come from the same domain")
    }

    /// Ordered pairs `(x, y)` with `x` and `y` incomparable, in index order.
    fn incomparable_pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        let l = &self.lattice;
        l.elements().flat_map(move |x| l.elements().filter(move |&y| !l.comparable(x, y)).map(move |y| (x, y)))
    }

    /// Convexity: `μ(x∧y, x) ≤ μ(y, x∨y)` whenever `x ≰ y`. Pairs with
    /// `y < x` satisfy it with equality, so only incomparable pairs are checked.
    pub fn convexity(&self) -> Verdict<(ElementId, ElementId)> {
        let l = &self.lattice;
        for (x, y) in self.incomparable_pairs() {
            if !self.domain.leq(self.mu(l.meet(x, y), x), self.mu(y, l.join(x, y))) {
                return Verdict::Fails((x, y));
            }
        }
        Verdict::Holds
    }

    pub fn is_convex(&self) -> bool {
        self.convexity().holds()
    }

    /// Affinity: `μ(a∧b, a) = μ(b, a∨b)` whenever `a ≰ b`.
    pub fn affinity(&self) -> Verdict<(ElementId, ElementId)> {
        let l = &self.lattice;
        for (x, y) in self.incomparable_pairs() {
            if !self.domain.equal(self.mu(l.meet(x, y), x), self.mu(y, l.join(x, y))) {
                return Verdict::Fails((x, y));
            }
        }
        debug_assert!(self.is_convex(), "affine implies convex");
        Verdict::Holds
    }

    pub fn is_affine(&self) -> bool {
        self.affinity().holds()
    }

    /// Slope-likeness, checked through the see-saw trichotomy: for every
    /// `x < y < z`, `(μ(x,y), μ(x,z), μ(y,z))` is strictly increasing,
    /// strictly decreasing, or constant.
    pub fn slope_likeness(&self) -> Result<Verdict<(ElementId, ElementId, ElementId)>, GameError> {
        if !self.domain.is_total() {
            return Err(GameError::PartialDomainUnsupported);
        }
        let l = &self.lattice;
        let d = &self.domain;
        for (x, z) in l.strict_pairs() {
            for y in l.above(x).filter(|&y| l.lt(y, z)) {
                let (p, q, r) = (self.mu(x, y), self.mu(x, z), self.mu(y, z));
                let ok = (d.lt(p, q) && d.lt(q, r)) || (d.gt(p, q) && d.gt(q, r)) || (d.equal(p, q) && d.equal(q, r));
                if !ok {
                    return Ok(Verdict::Fails((x, y, z)));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    pub fn is_slope_like(&self) -> Result<bool, GameError> {
        Ok(self.slope_likeness()?.holds())
    }

    /// St of the restriction to `[base, ⊤]`: elements `x > base` that no
    /// `y > base` beats (`μ_A(base,y) ≯ μ_A(base,x)`) and that dominate every tie.
    pub fn st_set_above(&self, base: ElementId) -> Vec<ElementId> {
        let l = &self.lattice;
        let d = &self.domain;
        let cands: Vec<ElementId> = l.above(base).collect();
        cands
            .iter()
            .copied()
            .filter(|&x| {
                let vx = self.mu_a_unchecked(base, x);
                cands.iter().all(|&y| {
                    let vy = self.mu_a_unchecked(base, y);
                    match d.compare(vy, vx) {
                        crate::value::Comparison::Greater => false,
                        crate::value::Comparison::Equal => l.leq(y, x),
                        _ => true,
                    }
                })
            })
            .collect()
    }

    /// The destabilizing set St(μ).
    pub fn st_set(&self) -> Vec<ElementId> {
        self.st_set_above(self.bottom())
    }

    /// Whether the restriction to `[lo, hi]` is semi-stable; returns the first
    /// destabilizing element otherwise.
    pub fn semistability_between(&self, lo: ElementId, hi: ElementId) -> Result<Verdict<ElementId>, GameError> {
        self.require_lt(lo, hi)?;
        let l = &self.lattice;
        let target = self.mu_a_unchecked(lo, hi);
        for z in l.above(lo).filter(|&z| l.leq(z, hi)) {
            if self.domain.gt(self.mu_a_unchecked(lo, z), target) {
                return Ok(Verdict::Fails(z));
            }
        }
        Ok(Verdict::Holds)
    }

    /// No `x ≠ ⊥` has `μ_A(x) > μ_A(⊤)`. Incomparable values do not destabilize.
    pub fn is_semistable(&self) -> bool {
        self.semistability_between(self.bottom(), self.top()).expect("bottom < top").holds()
    }

    /// Semi-stable, and no `x ∉ {⊥, ⊤}` attains `μ_A(⊤)`.
    pub fn is_stable(&self) -> bool {
        let (b, t) = (self.bottom(), self.top());
        let target = self.mu_a_unchecked(b, t);
        self.is_semistable()
            && self.lattice.above(b).filter(|&x| x != t).all(|x| !self.domain.equal(self.mu_a_unchecked(b, x), target))
    }

    pub(crate) fn label(&self, x: ElementId) -> String {
        self.lattice.label(x).to_string()
    }
}
