//! Finite bounded lattices stored as dense order matrices with precomputed
//! meet and join tables.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of an element inside a [`FiniteLattice`]. Indices are dense `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How the relation handed to [`FiniteLattice::build`] should be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    /// Hasse diagram; the order is its reflexive-transitive closure.
    Covers,
    /// The complete order relation (reflexive pairs may be omitted).
    FullOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("trivial lattice: a bounded lattice needs bottom != top")]
    TrivialLattice,
    #[error("`{0}` is not strictly below `{1}`")]
    NotStrictlyOrdered(String, String),
}

/// Square boolean matrix with `u64` rows, used for the order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in self.ones(i) {
                t.set(j, i);
            }
        }
        t
    }

    fn ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        self.row(i).iter().enumerate().flat_map(move |(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b).filter(move |&j| j < n)
        })
    }

    /// `self ∪ self·self`; returns whether anything changed.
    fn square_in_place(&mut self) -> bool {
        let mut next = self.clone();
        for i in 0..self.n {
            for k in self.ones(i).collect::<Vec<_>>() {
                let (dst, src) = (i * self.words, k * self.words);
                for w in 0..self.words {
                    next.bits[dst + w] |= self.bits[src + w];
                }
            }
        }
        let changed = next.bits != self.bits;
        *self = next;
        changed
    }
}

/// A finite bounded lattice with `bottom != top`.
///
/// Immutable after construction; meets and joins are looked up in dense tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    index: HashMap<String, ElementId>,
    leq: BitMatrix,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: ElementId,
    top: ElementId,
}

impl FiniteLattice {
    /// Builds a lattice from labels and a relation given by label pairs.
    pub fn build<S: AsRef<str>>(
        elements: &[S],
        relation: &[(S, S)],
        kind: RelationKind,
    ) -> Result<Self, LatticeError> {
        let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let index = index_labels(&labels)?;
        let mut pairs = Vec::with_capacity(relation.len());
        for (a, b) in relation {
            let lookup = |s: &str| index.get(s).copied().ok_or_else(|| LatticeError::UnknownLabel(s.to_string()));
            pairs.push((lookup(a.as_ref())?.0, lookup(b.as_ref())?.0));
        }
        Self::from_index_pairs(labels, &pairs, kind)
    }

    /// Builds a lattice from labels and a relation given by index pairs.
    pub fn from_index_pairs(
        labels: Vec<String>,
        pairs: &[(usize, usize)],
        kind: RelationKind,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut leq = BitMatrix::new(n);
        for i in 0..n {
            leq.set(i, i);
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(LatticeError::UnknownLabel(format!("index {}", a.max(b))));
            }
            leq.set(a, b);
        }
        match kind {
            RelationKind::Covers => while leq.square_in_place() {},
            RelationKind::FullOrder => {
                let mut closed = leq.clone();
                closed.square_in_place();
                if closed != leq {
                    let (i, k) = first_difference(&leq, &closed);
                    return Err(LatticeError::NotAPartialOrder(format!(
                        "relation is not transitive: `{}` <= `{}` is implied but missing",
                        labels[i], labels[k]
                    )));
                }
            }
        }
        Self::from_order(labels, leq)
    }

    /// Builds a lattice from a full order predicate `leq(i, j)`.
    pub fn from_leq(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && leq(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        Self::from_index_pairs(labels, &pairs, RelationKind::FullOrder)
    }

    fn from_order(labels: Vec<String>, leq: BitMatrix) -> Result<Self, LatticeError> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        if n < 2 {
            return Err(LatticeError::TrivialLattice);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq.get(i, j) && leq.get(j, i) {
                    return Err(LatticeError::NotAPartialOrder(format!(
                        "cycle through `{}` and `{}`",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|z| leq.get(b, z)));
        let top = (0..n).find(|&t| (0..n).all(|z| leq.get(z, t)));
        let bottom = bottom.ok_or_else(|| LatticeError::NotALattice("no least element".into()))?;
        let top = top.ok_or_else(|| LatticeError::NotALattice("no greatest element".into()))?;

        let geq = leq.transpose();
        let down_size: Vec<usize> = (0..n).map(|i| geq.ones(i).count()).collect();
        let up_size: Vec<usize> = (0..n).map(|i| leq.ones(i).count()).collect();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        let mut common = vec![0u64; leq.words];
        for x in 0..n {
            for y in x..n {
                for (kind, rel, size, table) in [
                    ("meet", &geq, &down_size, &mut meet),
                    ("join", &leq, &up_size, &mut join),
                ] {
                    for (w, c) in common.iter_mut().enumerate() {
                        *c = rel.row(x)[w] & rel.row(y)[w];
                    }
                    // The bound, if it exists, has the largest down-set (resp. up-set)
                    // among the common bounds and dominates every one of them.
                    let candidate = ones_of(&common, n).max_by_key(|&z| (size[z], std::cmp::Reverse(z)));
                    let ok = candidate.filter(|&z| {
                        common.iter().zip(rel.row(z)).all(|(c, r)| c & !r == 0)
                    });
                    let Some(z) = ok else {
                        return Err(LatticeError::NotALattice(format!(
                            "`{}` and `{}` have no {kind}",
                            labels[x], labels[y]
                        )));
                    };
                    table[x * n + y] = z as u32;
                    table[y * n + x] = z as u32;
                }
            }
        }
        Ok(FiniteLattice {
            labels,
            index,
            leq,
            meet,
            join,
            bottom: ElementId(bottom),
            top: ElementId(top),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: a valid lattice has at least two elements.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.len()).map(ElementId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x.0]
    }

    pub fn id(&self, label: &str) -> Option<ElementId> {
        self.index.get(label).copied()
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.leq.get(x.0, y.0)
    }

    #[inline]
    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: ElementId, y: ElementId) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    #[inline]
    pub fn meet(&self, x: ElementId, y: ElementId) -> ElementId {
        ElementId(self.meet[x.0 * self.len() + y.0] as usize)
    }

    #[inline]
    pub fn join(&self, x: ElementId, y: ElementId) -> ElementId {
        ElementId(self.join[x.0 * self.len() + y.0] as usize)
    }

    /// Elements strictly above `x`, in index order.
    pub fn above(&self, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.elements().filter(move |&z| self.lt(x, z))
    }

    /// Elements strictly below `y`, in index order.
    pub fn below(&self, y: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.elements().filter(move |&z| self.lt(z, y))
    }

    /// The set P_<(L) of strictly ordered pairs, in lexicographic index order.
    pub fn strict_pairs(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in self.above(x) {
                out.push((x, y));
            }
        }
        out
    }

    /// Covering pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(x, y)| !self.elements().any(|z| self.lt(x, z) && self.lt(z, y)))
            .collect()
    }

    pub fn interval(&self, lo: ElementId, hi: ElementId) -> Result<Interval<'_>, LatticeError> {
        if !self.lt(lo, hi) {
            return Err(LatticeError::NotStrictlyOrdered(self.label(lo).into(), self.label(hi).into()));
        }
        let members = self.elements().filter(|&z| self.leq(lo, z) && self.leq(z, hi)).collect();
        Ok(Interval { lattice: self, lo, hi, members })
    }

    /// The same elements under the reversed order; bottom and top swap, meet and join swap.
    pub fn dual(&self) -> FiniteLattice {
        FiniteLattice {
            labels: self.labels.clone(),
            index: self.index.clone(),
            leq: self.leq.transpose(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Join-irreducible elements: those with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<ElementId> {
        let covers = self.covers();
        self.elements()
            .filter(|&x| covers.iter().filter(|&&(_, y)| y == x).count() == 1)
            .collect()
    }
}

/// The interval `[lo, hi]` of a lattice, with `lo < hi`.
#[derive(Clone, Debug)]
pub struct Interval<'a> {
    pub lattice: &'a FiniteLattice,
    pub lo: ElementId,
    pub hi: ElementId,
    /// Members in increasing index order.
    pub members: Vec<ElementId>,
}

impl Interval<'_> {
    pub fn contains(&self, z: ElementId) -> bool {
        self.lattice.leq(self.lo, z) && self.lattice.leq(z, self.hi)
    }

    /// The interval as a standalone lattice. Element `k` of the result is
    /// `self.members[k]`; labels are preserved.
    pub fn to_lattice(&self) -> FiniteLattice {
        let labels = self.members.iter().map(|&z| self.lattice.label(z).to_string()).collect();
        let m = &self.members;
        FiniteLattice::from_leq(labels, |i, j| self.lattice.leq(m[i], m[j]))
            .expect("an interval of a lattice is a bounded lattice")
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, ElementId>, LatticeError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), ElementId(i)).is_some() {
            return Err(LatticeError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

fn ones_of(words: &[u64], n: usize) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(move |(w, &word)| {
        (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b).filter(move |&j| j < n)
    })
}

fn first_difference(a: &BitMatrix, b: &BitMatrix) -> (usize, usize) {
    for i in 0..a.n {
        for j in 0..a.n {
            if a.get(i, j) != b.get(i, j) {
                return (i, j);
            }
        }
    }
    unreachable!("matrices differ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FiniteLattice {
        FiniteLattice::build(&["bot", "x", "top"], &[("bot", "x"), ("x", "top")], RelationKind::Covers).unwrap()
    }

    pub(crate) fn cube2() -> FiniteLattice {
        FiniteLattice::build(
            &["{}", "{p}", "{q}", "{p,q}"],
            &[("{}", "{p}"), ("{}", "{q}"), ("{p}", "{p,q}"), ("{q}", "{p,q}")],
            RelationKind::Covers,
        )
        .unwrap()
    }

    #[test]
    fn three_chain() {
        let l = chain3();
        let (b, x, t) = (ElementId(0), ElementId(1), ElementId(2));
        assert_eq!(l.bottom(), b);
        assert_eq!(l.top(), t);
        assert_eq!(l.meet(b, t), b);
        assert_eq!(l.join(b, x), x);
        assert_eq!(l.strict_pairs(), vec![(b, x), (b, t), (x, t)]);
        assert_eq!(l.covers(), vec![(b, x), (x, t)]);
    }

    #[test]
    fn two_chain_is_minimal() {
        let l = FiniteLattice::build(&["bot", "top"], &[("bot", "top")], RelationKind::Covers).unwrap();
        assert_eq!(l.strict_pairs().len(), 1);
    }

    #[test]
    fn boolean_square_meet_is_intersection() {
        let l = cube2();
        // Subset oracle: element i is the bitmask {0:0b00,1:0b01,2:0b10,3:0b11}.
        let mask = [0b00u8, 0b01, 0b10, 0b11];
        for x in l.elements() {
            for y in l.elements() {
                assert_eq!(mask[l.meet(x, y).0], mask[x.0] & mask[y.0]);
                assert_eq!(mask[l.join(x, y).0], mask[x.0] | mask[y.0]);
                assert_eq!(l.leq(x, y), mask[x.0] & !mask[y.0] == 0);
            }
        }
        assert_eq!(l.strict_pairs().len(), 5);
    }

    #[test]
    fn intervals() {
        let l = chain3();
        assert_eq!(l.interval(ElementId(0), ElementId(2)).unwrap().members.len(), 3);
        assert_eq!(l.interval(ElementId(1), ElementId(2)).unwrap().members, vec![ElementId(1), ElementId(2)]);
        let c = cube2();
        let iv = c.interval(ElementId(0), ElementId(1)).unwrap();
        assert_eq!(iv.members, vec![ElementId(0), ElementId(1)]);
        assert!(matches!(c.interval(ElementId(1), ElementId(2)), Err(LatticeError::NotStrictlyOrdered(..))));
        assert!(matches!(c.interval(ElementId(1), ElementId(1)), Err(LatticeError::NotStrictlyOrdered(..))));
    }

    #[test]
    fn errors() {
        let unbounded = FiniteLattice::build::<&str>(&["a", "b"], &[], RelationKind::Covers);
        assert!(matches!(unbounded, Err(LatticeError::NotALattice(_))));
        let single = FiniteLattice::build::<&str>(&["a"], &[], RelationKind::Covers);
        assert_eq!(single, Err(LatticeError::TrivialLattice));
        let dup = FiniteLattice::build(&["a", "a"], &[("a", "a")], RelationKind::Covers);
        assert!(matches!(dup, Err(LatticeError::DuplicateLabel(_))));
        let cyc = FiniteLattice::build(&["a", "b"], &[("a", "b"), ("b", "a")], RelationKind::Covers);
        assert!(matches!(cyc, Err(LatticeError::NotAPartialOrder(_))));
        let intransitive = FiniteLattice::build(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "c")],
            RelationKind::FullOrder,
        );
        assert!(matches!(intransitive, Err(LatticeError::NotAPartialOrder(_))));
        let unknown = FiniteLattice::build(&["a", "b"], &[("a", "z")], RelationKind::Covers);
        assert!(matches!(unknown, Err(LatticeError::UnknownLabel(_))));
        // Bounded but two maximal lower bounds for the middle pair.
        let bowtie = FiniteLattice::build(
            &["0", "a", "b", "c", "d", "1"],
            &[
                ("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"),
                ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1"),
            ],
            RelationKind::Covers,
        );
        assert!(matches!(bowtie, Err(LatticeError::NotALattice(_))));
    }

    #[test]
    fn dual_swaps_bounds() {
        let c = cube2();
        let d = c.dual();
        assert_eq!(d.bottom(), c.top());
        assert_eq!(d.top(), c.bottom());
        assert_eq!(d.meet(ElementId(1), ElementId(2)), ElementId(3));
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn interval_sublattice_agrees_with_ambient() {
        let c = cube2();
        let iv = c.interval(ElementId(1), ElementId(3)).unwrap();
        let sub = iv.to_lattice();
        assert_eq!(sub.len(), 2);
        assert_eq!(sub.label(sub.bottom()), "{p}");
        assert!(sub.strict_pairs().len() <= c.strict_pairs().len());
    }

    #[test]
    fn join_irreducibles_of_square() {
        assert_eq!(cube2().join_irreducibles(), vec![ElementId(1), ElementId(2)]);
    }
}
