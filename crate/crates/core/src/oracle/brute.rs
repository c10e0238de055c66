use std::collections::HashMap;

use crate::filtration::Filtration;
use crate::game::{Game, GameError};
use crate::instances::module::{FiniteAbelianModule, Subgroup};
use crate::lattice::ElementId;
use crate::value::{PrimeSet, ValueLattice};

/// `inf_{x ≤ a < y} sup_{a < b ≤ y} μ(a, b)`, evaluated literally from the
/// pay-off table without any shared tables.
pub fn brute_mu_a<D: ValueLattice>(g: &Game<D>, x: ElementId, y: ElementId) -> Result<D::Value, GameError> {
    let l = g.lattice();
    if !l.lt(x, y) {
        return Err(GameError::NotStrictlyOrdered(l.label(x).into(), l.label(y).into()));
    }
    let d = g.domain();
    let mut best: Option<D::Value> = None;
    for a in l.elements().filter(|&a| l.leq(x, a) && l.lt(a, y)) {
        let mut sup: Option<D::Value> = None;
        for b in l.elements().filter(|&b| l.lt(a, b) && l.leq(b, y)) {
            let v = g.payoff(a, b).expect("strict pair").clone();
            sup = Some(match sup {
                None => v,
                Some(s) => d.join(&s, &v),
            });
        }
        let sup = sup.expect("b = y");
        best = Some(match best {
            None => sup,
            Some(m) => d.meet(&m, &sup),
        });
    }
    Ok(best.expect("a = x"))
}

/// Every chain `⊥ = b₀ < … < b_m = ⊤` whose step restrictions are
/// semi-stable and whose slopes strictly decrease, with slopes computed by
/// [`brute_mu_a`]. Needs a totally ordered value domain.
pub fn enumerate_hn_candidates<D: ValueLattice>(g: &Game<D>) -> Result<Vec<Filtration<D::Value>>, GameError> {
    if !g.domain().is_total() {
        return Err(GameError::PartialDomainUnsupported);
    }
    let mut search = Search { g, memo: HashMap::new(), out: Vec::new() };
    let mut chain = vec![g.bottom()];
    let mut slopes = Vec::new();
    search.extend(&mut chain, &mut slopes);
    Ok(search.out)
}

struct Search<'a, D: ValueLattice> {
    g: &'a Game<D>,
    memo: HashMap<(ElementId, ElementId), D::Value>,
    out: Vec<Filtration<D::Value>>,
}

impl<D: ValueLattice> Search<'_, D> {
    fn mu_a(&mut self, x: ElementId, y: ElementId) -> D::Value {
        if let Some(v) = self.memo.get(&(x, y)) {
            return v.clone();
        }
        let v = brute_mu_a(self.g, x, y).expect("strict pair");
        self.memo.insert((x, y), v.clone());
        v
    }

    fn step_semistable(&mut self, lo: ElementId, hi: ElementId) -> bool {
        let l = self.g.lattice();
        let target = self.mu_a(lo, hi);
        let zs: Vec<ElementId> = l.above(lo).filter(|&z| l.leq(z, hi)).collect();
        zs.into_iter().all(|z| {
            let v = self.mu_a(lo, z);
            !self.g.domain().gt(&v, &target)
        })
    }

    fn extend(&mut self, chain: &mut Vec<ElementId>, slopes: &mut Vec<D::Value>) {
        let lo = *chain.last().expect("starts at bottom");
        if lo == self.g.top() {
            self.out.push(Filtration { chain: chain.clone(), slopes: slopes.clone() });
            return;
        }
        let nexts: Vec<ElementId> = self.g.lattice().above(lo).collect();
        for hi in nexts {
            let s = self.mu_a(lo, hi);
            if slopes.last().is_some_and(|prev| !self.g.domain().gt(prev, &s)) {
                continue;
            }
            if !self.step_semistable(lo, hi) {
                continue;
            }
            chain.push(hi);
            slopes.push(s);
            self.extend(chain, slopes);
            chain.pop();
            slopes.pop();
        }
    }
}

/// Associated primes of `N / N′`: the primes `p` such that some coset
/// `s + N′` has annihilator `pℤ`, found by computing the order of every coset.
pub fn ass_brute(m: &FiniteAbelianModule, lower: &Subgroup, upper: &Subgroup) -> PrimeSet {
    let mut primes = Vec::new();
    for &s in upper.members() {
        let mut k = 1u64;
        let mut multiple = s;
        while !lower.contains(multiple) {
            k += 1;
            multiple = m.add(multiple, s);
        }
        if k > 1 && (2..k).all(|d| k % d != 0) && !primes.contains(&k) {
            primes.push(k);
        }
    }
    PrimeSet::new(primes).expect("orders checked prime")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::{chain, square_slopes, three_chain};
    use crate::instances::ass_payoff;
    use crate::value::{Ordered, Value};

    #[test]
    fn brute_three_chain() {
        for (a, b, c) in [(1, 0, 2), (0, 1, 2), (3, 3, -1)] {
            let g = three_chain(a, b, c);
            assert_eq!(brute_mu_a(&g, ElementId(0), ElementId(2)).unwrap(), a.max(c).min(b));
        }
        let two = Game::new(chain(&["0", "1"]), Ordered::<i64>::new(), |_, _| 4).unwrap();
        assert_eq!(brute_mu_a(&two, ElementId(0), ElementId(1)).unwrap(), 4);
        assert!(brute_mu_a(&two, ElementId(1), ElementId(0)).is_err());
    }

    #[test]
    fn square_candidates() {
        let g = square_slopes();
        let c = enumerate_hn_candidates(&g).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].chain, vec![ElementId(0), ElementId(1), ElementId(3)]);
        assert_eq!(c[0].slopes, vec![Value::int(3), Value::int(1)]);
        let semistable = three_chain(0, 2, 1);
        let c = enumerate_hn_candidates(&semistable).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].chain, vec![ElementId(0), ElementId(2)]);
    }

    #[test]
    fn ass_fixtures() {
        let m = FiniteAbelianModule::new(&[12]).unwrap();
        let inst = ass_payoff(&m).unwrap();
        let l = inst.game.lattice();
        let sub = |label: &str| &inst.subgroups[l.id(label).unwrap().0];
        assert_eq!(ass_brute(&m, sub("0"), sub("M")).primes(), &[2, 3]);
        assert_eq!(ass_brute(&m, sub("⟨4⟩"), sub("M")).primes(), &[2]);
        let p = FiniteAbelianModule::new(&[7]).unwrap();
        let pi = ass_payoff(&p).unwrap();
        assert_eq!(ass_brute(&p, &pi.subgroups[0], &pi.subgroups[1]).primes(), &[7]);
    }
}
