//! Finite abelian groups `⊕ ℤ/dᵢ` and their coprimary filtrations.
//!
//! The lattice of subgroups, paired with `μ(N′, N) = Ass(N/N′)`, is a convex
//! game over prime sets. For a finite group the associated primes of a
//! quotient are exactly the primes dividing its order.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::filtration::Filtration;
use crate::game::{Game, GameError};
use crate::lattice::{ElementId, FiniteLattice};
use crate::value::{PrimeSet, Value, ValueDomain};
use crate::DynGame;

pub const DEFAULT_ORDER_CAP: u64 = 512;
/// Lattices beyond this size make the cubic threshold tables impractical.
pub const SUBGROUP_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("the zero module has a one-element subgroup lattice")]
    ZeroModule,
    #[error("factor 0 gives a free summand, whose subgroup lattice is infinite")]
    FreeRankUnsupported,
    #[error("invariant factor {0} must be at least 2")]
    InvalidFactor(u64),
    #[error("invariant factors {factors:?} do not form a divisibility chain; canonical form is {suggestion:?}")]
    InvariantFactorChain { factors: Vec<u64>, suggestion: Vec<u64> },
    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: u64 },
    #[error("more than {0} subgroups")]
    TooManySubgroups(usize),
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors (ascending, each dividing the next) of `⊕ ℤ/fᵢ`.
pub fn canonical_factors(factors: &[u64]) -> Vec<u64> {
    let mut powers: HashMap<u64, Vec<u64>> = HashMap::new();
    for &f in factors {
        for (p, e) in factorize(f) {
            powers.entry(p).or_default().push(p.pow(e));
        }
    }
    let k = powers.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; k];
    for mut list in powers.into_values() {
        list.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in list.into_iter().enumerate() {
            out[k - 1 - i] *= q;
        }
    }
    out
}

/// The group `ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `d₁ | d₂ | … | d_k`.
///
/// Elements are numbered in mixed radix with the last coordinate varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianModule {
    factors: Vec<u64>,
    order: u64,
}

impl FiniteAbelianModule {
    pub fn new(factors: &[u64]) -> Result<Self, ModuleError> {
        Self::with_cap(factors, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(factors: &[u64], cap: u64) -> Result<Self, ModuleError> {
        if factors.is_empty() {
            return Err(ModuleError::ZeroModule);
        }
        if factors.contains(&0) {
            return Err(ModuleError::FreeRankUnsupported);
        }
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(ModuleError::InvalidFactor(f));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(ModuleError::InvariantFactorChain {
                factors: factors.to_vec(),
                suggestion: canonical_factors(factors),
            });
        }
        let order = factors
            .iter()
            .try_fold(1u64, |acc, &f| acc.checked_mul(f).filter(|&o| o <= cap))
            .ok_or(ModuleError::OrderCapExceeded { cap })?;
        Ok(FiniteAbelianModule { factors: factors.to_vec(), order })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    fn size(&self) -> usize {
        self.order as usize
    }

    pub fn coords(&self, mut g: usize) -> Vec<u64> {
        let mut c = vec![0; self.factors.len()];
        for (slot, &f) in c.iter_mut().zip(&self.factors).rev() {
            *slot = g as u64 % f;
            g /= f as usize;
        }
        c
    }

    fn index(&self, c: &[u64]) -> usize {
        c.iter().zip(&self.factors).fold(0, |acc, (&x, &f)| acc * f as usize + x as usize)
    }

    pub fn add(&self, mut a: usize, mut b: usize) -> usize {
        let (mut out, mut place) = (0, 1);
        for &f in self.factors.iter().rev() {
            let f = f as usize;
            out += (a % f + b % f) % f * place;
            place *= f;
            a /= f;
            b /= f;
        }
        out
    }

    /// `k · g`.
    pub fn scale(&self, k: u64, g: usize) -> usize {
        let c: Vec<u64> = self.coords(g).iter().zip(&self.factors).map(|(&x, &f)| (x * (k % f)) % f).collect();
        self.index(&c)
    }

    pub fn element_label(&self, g: usize) -> String {
        let c = self.coords(g);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            let parts: Vec<String> = c.iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }

    /// All subgroups ordered by size, then by member list. The first is
    /// `0` and the last is the whole group.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>, ModuleError> {
        let n = self.size();
        let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
        let mut found: HashMap<Vec<u64>, Subgroup> = HashMap::new();
        for g in 0..n {
            let s = self.span(&Subgroup::zero(n), g);
            if !found.contains_key(&s.bits) {
                found.insert(s.bits.clone(), s.clone());
                cyclic.push((g, s));
            }
        }
        let mut queue: Vec<Subgroup> = cyclic.iter().map(|(_, s)| s.clone()).collect();
        while let Some(s) = queue.pop() {
            for &(g, _) in &cyclic {
                if s.contains(g) {
                    continue;
                }
                let t = self.span(&s, g);
                if !found.contains_key(&t.bits) {
                    if found.len() >= SUBGROUP_CAP {
                        return Err(ModuleError::TooManySubgroups(SUBGROUP_CAP));
                    }
                    found.insert(t.bits.clone(), t.clone());
                    queue.push(t);
                }
            }
        }
        let mut all: Vec<Subgroup> = found.into_values().collect();
        all.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        Ok(all)
    }

    /// The subgroup `s + ⟨g⟩`, as the union of the cosets `s + k·g`.
    fn span(&self, s: &Subgroup, g: usize) -> Subgroup {
        let mut out = s.clone();
        let mut shift = g;
        while !s.contains(shift) {
            for &a in &s.members {
                out.insert(self.add(a, shift));
            }
            shift = self.add(shift, g);
        }
        out.finish();
        out
    }

    fn subgroup_label(&self, s: &Subgroup) -> String {
        if s.order() == 1 {
            return "0".into();
        }
        if s.order() == self.order {
            return "M".into();
        }
        let mut gens = Vec::new();
        let mut span = Subgroup::zero(self.size());
        for &g in &s.members {
            if !span.contains(g) {
                gens.push(self.element_label(g));
                span = self.span(&span, g);
            }
        }
        format!("⟨{}⟩", gens.join(", "))
    }

    /// The subgroup lattice under inclusion; element `k` is `subgroups[k]`.
    pub fn subgroup_lattice(&self) -> Result<(FiniteLattice, Vec<Subgroup>), ModuleError> {
        let subs = self.subgroups()?;
        let labels = subs.iter().map(|s| self.subgroup_label(s)).collect();
        let lattice = FiniteLattice::from_leq(labels, |i, j| subs[i].is_subset(&subs[j]))
            .expect("subgroups of a finite group form a lattice");
        Ok((lattice, subs))
    }
}

impl fmt::Display for FiniteAbelianModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| format!("ℤ/{d}")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A subgroup stored as a membership bitset plus its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    bits: Vec<u64>,
    members: Vec<usize>,
}

impl Subgroup {
    fn zero(n: usize) -> Self {
        let mut s = Subgroup { bits: vec![0; n.div_ceil(64)], members: Vec::new() };
        s.insert(0);
        s
    }

    fn insert(&mut self, g: usize) {
        if !self.contains(g) {
            self.bits[g / 64] |= 1 << (g % 64);
            self.members.push(g);
        }
    }

    fn finish(&mut self) {
        self.members.sort_unstable();
    }

    pub fn contains(&self, g: usize) -> bool {
        self.bits[g / 64] >> (g % 64) & 1 == 1
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// The subgroup-lattice game of a module, with the subgroups behind each element.
#[derive(Clone, Debug)]
pub struct ModuleInstance {
    pub module: FiniteAbelianModule,
    pub subgroups: Vec<Subgroup>,
    pub game: DynGame,
}

/// The game `μ(N′, N) = Ass(N/N′)`, the primes dividing `|N| / |N′|`.
pub fn ass_payoff(module: &FiniteAbelianModule) -> Result<ModuleInstance, ModuleError> {
    let (lattice, subgroups) = module.subgroup_lattice()?;
    let game = Game::new(lattice, ValueDomain::prime_set(), |x, y| {
        Value::PrimeSet(PrimeSet::of_divisors(subgroups[y.0].order() / subgroups[x.0].order()))
    })
    .expect("prime sets belong to the prime-set domain");
    Ok(ModuleInstance { module: module.clone(), subgroups, game })
}

#[derive(Clone, Debug)]
pub struct CoprimaryFiltration {
    pub filtration: Filtration<Value>,
    /// The prime of each step, strictly decreasing.
    pub primes: Vec<u64>,
    /// `|M_i / M_{i-1}|` for each step.
    pub quotient_orders: Vec<u64>,
}

/// The chain `0 = M₀ ⊂ … ⊂ M_n = M` with `M_i / M_{i-1}` a `p_i`-group and
/// `p₁ > … > p_n`, obtained as the HN filtration of [`ass_payoff`].
pub fn coprimary_filtration(instance: &ModuleInstance) -> Result<CoprimaryFiltration, GameError> {
    let filtration = instance.game.hn_filtration()?;
    let primes = filtration
        .slopes
        .iter()
        .map(|s| match s {
            Value::PrimeSet(p) if p.primes().len() == 1 => p.primes()[0],
            other => unreachable!("HN slopes of the associated-prime game are single primes, got {other:?}"),
        })
        .collect();
    let order = |x: ElementId| instance.subgroups[x.0].order();
    let quotient_orders = filtration.chain.windows(2).map(|w| order(w[1]) / order(w[0])).collect();
    Ok(CoprimaryFiltration { filtration, primes, quotient_orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Comparison;

    fn labels(inst: &ModuleInstance, chain: &[ElementId]) -> Vec<String> {
        chain.iter().map(|&x| inst.game.lattice().label(x).to_string()).collect()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteAbelianModule::new(&[]), Err(ModuleError::ZeroModule));
        assert_eq!(FiniteAbelianModule::new(&[0]), Err(ModuleError::FreeRankUnsupported));
        assert_eq!(FiniteAbelianModule::new(&[2, 1]), Err(ModuleError::InvalidFactor(1)));
        assert_eq!(
            FiniteAbelianModule::new(&[4, 3]),
            Err(ModuleError::InvariantFactorChain { factors: vec![4, 3], suggestion: vec![12] })
        );
        assert_eq!(FiniteAbelianModule::new(&[1024]), Err(ModuleError::OrderCapExceeded { cap: 512 }));
        assert_eq!(FiniteAbelianModule::new(&[16, 64]), Err(ModuleError::OrderCapExceeded { cap: 512 }));
        assert!(FiniteAbelianModule::with_cap(&[1024], 2048).is_ok());
        assert_eq!(FiniteAbelianModule::new(&[2; 7]).unwrap().subgroups(), Err(ModuleError::TooManySubgroups(SUBGROUP_CAP)));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(canonical_factors(&[4, 3]), vec![12]);
        assert_eq!(canonical_factors(&[6, 4]), vec![2, 12]);
        assert_eq!(canonical_factors(&[2, 2, 3]), vec![2, 6]);
    }

    #[test]
    fn arithmetic() {
        let m = FiniteAbelianModule::new(&[2, 4]).unwrap();
        assert_eq!(m.order(), 8);
        assert_eq!(m.coords(5), vec![1, 1]);
        assert_eq!(m.element_label(5), "(1,1)");
        assert_eq!(m.add(5, 5), m.index(&[0, 2]));
        assert_eq!(m.scale(3, 5), m.index(&[1, 3]));
    }

    #[test]
    fn subgroup_counts() {
        // Divisor counts of n, and the five subgroups of the Klein group.
        for (factors, count) in [(vec![12], 6), (vec![7], 2), (vec![2, 2], 5), (vec![30], 8), (vec![8], 4), (vec![2, 4], 8)] {
            let m = FiniteAbelianModule::new(&factors).unwrap();
            let (l, subs) = m.subgroup_lattice().unwrap();
            assert_eq!(subs.len(), count, "{factors:?}");
            assert_eq!(l.label(l.bottom()), "0");
            assert_eq!(l.label(l.top()), "M");
        }
    }

    #[test]
    fn z12_payoff() {
        let inst = ass_payoff(&FiniteAbelianModule::new(&[12]).unwrap()).unwrap();
        let g = &inst.game;
        let l = g.lattice();
        let (b, t, four) = (l.bottom(), l.top(), l.id("⟨4⟩").unwrap());
        assert_eq!(g.payoff(b, t), Some(&Value::primes(&[2, 3])));
        assert_eq!(g.payoff(four, t), Some(&Value::primes(&[2])));
        assert_eq!(g.mu_a(b, t).unwrap(), Value::primes(&[2]));
        assert!(g.is_convex());
        for (x, y) in l.strict_pairs() {
            assert_eq!(g.mu_max(x, y).unwrap(), *g.payoff(x, y).unwrap());
        }
    }

    #[test]
    fn coprimary_fixtures() {
        let run = |n: u64| {
            let inst = ass_payoff(&FiniteAbelianModule::new(&[n]).unwrap()).unwrap();
            let c = coprimary_filtration(&inst).unwrap();
            (labels(&inst, &c.filtration.chain), c.primes, c.quotient_orders)
        };
        assert_eq!(run(12), (vec!["0".into(), "⟨4⟩".into(), "M".into()], vec![3, 2], vec![3, 4]));
        assert_eq!(run(30), (vec!["0".into(), "⟨6⟩".into(), "⟨2⟩".into(), "M".into()], vec![5, 3, 2], vec![5, 3, 2]));
        assert_eq!(run(8), (vec!["0".into(), "M".into()], vec![2], vec![8]));
    }

    #[test]
    fn wrong_chain_rejected() {
        let inst = ass_payoff(&FiniteAbelianModule::new(&[12]).unwrap()).unwrap();
        let l = inst.game.lattice();
        let chain = [l.bottom(), l.id("⟨2⟩").unwrap(), l.top()];
        let verdict = inst.game.verify_filtration(&chain).unwrap();
        assert!(!verdict.holds());
        let four = l.id("⟨4⟩").unwrap();
        let d = inst.game.domain();
        use crate::value::ValueLattice;
        assert_eq!(d.compare(&inst.game.mu_a(l.bottom(), four).unwrap(), &Value::primes(&[2])), Comparison::Greater);
    }

    #[test]
    fn klein_group() {
        let inst = ass_payoff(&FiniteAbelianModule::new(&[2, 2]).unwrap()).unwrap();
        let mut names = inst.game.lattice().labels().to_vec();
        names.sort();
        assert_eq!(names, vec!["0", "M", "⟨(0,1)⟩", "⟨(1,0)⟩", "⟨(1,1)⟩"]);
        let c = coprimary_filtration(&inst).unwrap();
        assert_eq!(c.primes, vec![2]);
    }
}
