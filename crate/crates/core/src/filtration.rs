//! Harder-Narasimhan and Jordan-Hölder filtrations.

use std::fmt;

use crate::game::{Game, GameError, Verdict};
use crate::lattice::ElementId;
use crate::value::ValueLattice;

/// A chain `⊥ = a₀ < a₁ < … < aₙ = ⊤` together with one slope per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration<V> {
    pub chain: Vec<ElementId>,
    pub slopes: Vec<V>,
}

impl<V> Filtration<V> {
    /// Number of steps.
    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    /// Step `i` (1-based) as the pair `(a_{i-1}, a_i)`.
    pub fn step(&self, i: usize) -> (ElementId, ElementId) {
        (self.chain[i - 1], self.chain[i])
    }
}

/// Why a proposed chain is not the HN filtration. Steps are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationDefect {
    /// The restriction to step `step` is destabilized by `witness`.
    StepNotSemistable { step: usize, witness: ElementId },
    /// The slope of `step` is ≤ the slope of `step + 1`.
    SlopesNotDecreasing { step: usize },
}

impl fmt::Display for FiltrationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationDefect::StepNotSemistable { step, witness } => {
                write!(f, "step {step} is not semi-stable (destabilized by {witness})")
            }
            FiltrationDefect::SlopesNotDecreasing { step } => {
                write!(f, "slope of step {step} does not exceed slope of step {}", step + 1)
            }
        }
    }
}

impl<D: ValueLattice> Game<D> {
    /// The HN filtration: `a_i` is the greatest element of `St(μ_{[a_{i-1}, ⊤]})`.
    ///
    /// Needs a convex pay-off. In a partially ordered value domain the
    /// destabilizing set may lack a greatest element, which is reported
    /// rather than resolved.
    pub fn hn_filtration(&self) -> Result<Filtration<D::Value>, GameError> {
        if let Verdict::Fails((x, y)) = self.convexity() {
            return Err(GameError::NotConvex(self.label(x), self.label(y)));
        }
        let l = self.lattice();
        let mut chain = vec![self.bottom()];
        let mut slopes = Vec::new();
        let mut base = self.bottom();
        while base != self.top() {
            let st = self.st_set_above(base);
            let greatest = st.iter().copied().find(|&g| st.iter().all(|&s| l.leq(s, g)));
            let Some(next) = greatest else {
                let maximal = st
                    .iter()
                    .filter(|&&m| st.iter().all(|&s| s == m || !l.lt(m, s)))
                    .map(|&m| self.label(m))
                    .collect();
                return Err(GameError::NoGreatestDestabilizer { base: self.label(base), maximal });
            };
            slopes.push(self.mu_a_unchecked(base, next).clone());
            chain.push(next);
            base = next;
        }
        Ok(Filtration { chain, slopes })
    }

    /// Slopes `μ_A(a_{i-1}, a_i)` of an arbitrary chain from `⊥` to `⊤`.
    pub fn chain_slopes(&self, chain: &[ElementId]) -> Result<Vec<D::Value>, GameError> {
        self.check_chain(chain)?;
        Ok(chain.windows(2).map(|w| self.mu_a_unchecked(w[0], w[1]).clone()).collect())
    }

    fn check_chain(&self, chain: &[ElementId]) -> Result<(), GameError> {
        let l = self.lattice();
        let n = l.len();
        if let Some(bad) = chain.iter().find(|x| x.0 >= n) {
            return Err(GameError::NotAChain(format!("unknown element {bad}")));
        }
        if chain.first() != Some(&self.bottom()) || chain.last() != Some(&self.top()) {
            return Err(GameError::NotAChain("must start at bottom and end at top".into()));
        }
        for w in chain.windows(2) {
            if !l.lt(w[0], w[1]) {
                return Err(GameError::NotAChain(format!("`{}` is not below `{}`", l.label(w[0]), l.label(w[1]))));
            }
        }
        Ok(())
    }

    /// Checks the HN characterization: every step restriction is semi-stable
    /// and consecutive slopes satisfy `s_i ≰ s_{i+1}` (strict decrease in a
    /// total order). Reports the first failing step.
    pub fn verify_filtration(&self, chain: &[ElementId]) -> Result<Verdict<FiltrationDefect>, GameError> {
        let slopes = self.chain_slopes(chain)?;
        for (i, w) in chain.windows(2).enumerate() {
            if let Verdict::Fails(witness) = self.semistability_between(w[0], w[1])? {
                return Ok(Verdict::Fails(FiltrationDefect::StepNotSemistable { step: i + 1, witness }));
            }
        }
        for (i, s) in slopes.windows(2).enumerate() {
            if self.domain().leq(&s[0], &s[1]) {
                return Ok(Verdict::Fails(FiltrationDefect::SlopesNotDecreasing { step: i + 1 }));
            }
        }
        Ok(Verdict::Holds)
    }

    /// Whether `(lo, hi)` is a Jordan-Hölder step: `μ(lo, hi) = μ(⊥, ⊤)` and
    /// every `z` strictly between has `μ(lo, z) < μ(lo, hi)`.
    pub fn is_jordan_holder_step(&self, lo: ElementId, hi: ElementId) -> bool {
        let l = self.lattice();
        let d = self.domain();
        let target = self.mu(self.bottom(), self.top());
        l.lt(lo, hi)
            && d.equal(self.mu(lo, hi), target)
            && l.above(lo).filter(|&z| l.lt(z, hi)).all(|z| d.lt(self.mu(lo, z), self.mu(lo, hi)))
    }

    fn jordan_holder_preconditions(&self) -> Result<(), GameError> {
        if let Verdict::Fails(z) = self.semistability_between(self.bottom(), self.top())? {
            return Err(GameError::NotSemistable(self.label(z)));
        }
        if let Verdict::Fails((x, y, z)) = self.slope_likeness()? {
            return Err(GameError::NotSlopeLike(self.label(x), self.label(y), self.label(z)));
        }
        if self.domain().is_greatest(self.mu(self.bottom(), self.top())) {
            return Err(GameError::InfiniteTopSlope);
        }
        Ok(())
    }

    /// Jordan-Hölder filtrations of a semi-stable slope-like game with finite
    /// `μ(⊥, ⊤)`, returned ascending with the step pay-offs as slopes.
    ///
    /// With `all = false` one filtration is built top-down, each time taking
    /// a maximal element of `{x ∈ (⊥, y) : μ(⊥, x) = μ(⊥, ⊤)}` (lowest index
    /// among maximal ones) or `⊥` when that set is empty. With `all = true`
    /// every chain of Jordan-Hölder steps is listed; the count can be
    /// exponential in the lattice size.
    pub fn jordan_holder(&self, all: bool) -> Result<Vec<Filtration<D::Value>>, GameError> {
        self.jordan_holder_preconditions()?;
        let (bot, top) = (self.bottom(), self.top());
        let chains = if all {
            let mut out = Vec::new();
            let mut path = vec![top];
            self.jh_dfs(&mut path, &mut out);
            out
        } else {
            let l = self.lattice();
            let target = self.mu(bot, top);
            let mut path = vec![top];
            let mut y = top;
            while y != bot {
                let set: Vec<ElementId> =
                    l.above(bot).filter(|&x| l.lt(x, y) && self.domain().equal(self.mu(bot, x), target)).collect();
                let next = set.iter().copied().find(|&x| set.iter().all(|&s| !l.lt(x, s))).unwrap_or(bot);
                debug_assert!(self.is_jordan_holder_step(next, y));
                path.push(next);
                y = next;
            }
            vec![path]
        };
        let out: Vec<Filtration<D::Value>> = chains
            .into_iter()
            .map(|mut c| {
                c.reverse();
                let slopes = c.windows(2).map(|w| self.mu(w[0], w[1]).clone()).collect();
                Filtration { chain: c, slopes }
            })
            .collect();
        if all && self.is_affine() {
            assert!(out.windows(2).all(|w| w[0].len() == w[1].len()), "affine pay-off with unequal lengths");
        }
        Ok(out)
    }

    fn jh_dfs(&self, path: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
        let y = *path.last().expect("path starts at top");
        if y == self.bottom() {
            out.push(path.clone());
            return;
        }
        let below: Vec<ElementId> = self.lattice().below(y).collect();
        for x in below {
            if self.is_jordan_holder_step(x, y) {
                path.push(x);
                self.jh_dfs(path, out);
                path.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::{chain, cube2, square_slopes, three_chain};
    use crate::value::{Ordered, Value, ValueDomain};

    fn ids(v: &[usize]) -> Vec<ElementId> {
        v.iter().map(|&i| ElementId(i)).collect()
    }

    #[test]
    fn semistable_game_is_one_step() {
        let g = three_chain(0, 2, 1);
        let f = g.hn_filtration().unwrap();
        assert_eq!(f.chain, ids(&[0, 2]));
        assert_eq!(f.slopes, vec![1]);
        assert!(g.verify_filtration(&f.chain).unwrap().holds());
    }

    #[test]
    fn square_filtration() {
        let g = square_slopes();
        let f = g.hn_filtration().unwrap();
        assert_eq!(f.chain, ids(&[0, 1, 3]));
        assert_eq!(f.slopes, vec![Value::int(3), Value::int(1)]);
        assert!(g.verify_filtration(&f.chain).unwrap().holds());
        assert_eq!(
            g.verify_filtration(&ids(&[0, 2, 3])).unwrap(),
            Verdict::Fails(FiltrationDefect::SlopesNotDecreasing { step: 1 })
        );
        assert_eq!(
            g.verify_filtration(&ids(&[0, 3])).unwrap(),
            Verdict::Fails(FiltrationDefect::StepNotSemistable { step: 1, witness: ElementId(1) })
        );
    }

    #[test]
    fn chain_errors() {
        let g = square_slopes();
        for bad in [ids(&[0, 1, 2, 3]), ids(&[1, 3]), ids(&[0, 1]), ids(&[0, 9, 3]), vec![]] {
            assert!(matches!(g.verify_filtration(&bad), Err(GameError::NotAChain(_))), "{bad:?}");
        }
    }

    #[test]
    fn non_convex_rejected() {
        let g = Game::new(cube2(), Ordered::<i64>::new(), |x, y| match (x.0, y.0) {
            (0, 1) => 5,
            (2, 3) => 0,
            _ => 1,
        })
        .unwrap();
        assert_eq!(g.hn_filtration(), Err(GameError::NotConvex("{p}".into(), "{q}".into())));
    }

    fn uniform_square() -> Game<ValueDomain> {
        let rank = [0i64, 1, 1, 2];
        Game::new(cube2(), ValueDomain::rational(), |x, y| Value::ratio(rank[y.0] - rank[x.0], rank[y.0] - rank[x.0]))
            .unwrap()
    }

    #[test]
    fn jordan_holder_uniform_square() {
        let g = uniform_square();
        let all = g.jordan_holder(true).unwrap();
        assert_eq!(all.len(), 2);
        let mut chains: Vec<_> = all.iter().map(|f| f.chain.clone()).collect();
        chains.sort();
        assert_eq!(chains, vec![ids(&[0, 1, 3]), ids(&[0, 2, 3])]);
        assert!(all.iter().all(|f| f.len() == 2 && f.slopes.iter().all(|s| *s == Value::int(1))));
        let one = g.jordan_holder(false).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].chain, ids(&[0, 1, 3]));
    }

    #[test]
    fn jordan_holder_constant_chain() {
        let g = three_chain(4, 4, 4);
        let all = g.jordan_holder(true).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].chain, ids(&[0, 1, 2]));
        assert_eq!(g.jordan_holder(false).unwrap(), all);
    }

    #[test]
    fn jordan_holder_stable() {
        // a < c < b is slope-like, and x does not attain μ(⊥,⊤).
        let g = three_chain(1, 3, 2);
        assert!(g.is_stable());
        let all = g.jordan_holder(true).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].chain, ids(&[0, 2]));
    }

    #[test]
    fn jordan_holder_preconditions() {
        assert!(matches!(three_chain(2, 1, 0).jordan_holder(false), Err(GameError::NotSemistable(_))));
        assert!(matches!(three_chain(0, 2, 3).jordan_holder(false), Err(GameError::NotSlopeLike(..))));
        let inf = Game::new(chain(&["b", "t"]), ValueDomain::rational(), |_, _| Value::PosInfinity).unwrap();
        assert_eq!(inf.jordan_holder(false), Err(GameError::InfiniteTopSlope));
    }
}
