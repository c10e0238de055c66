//! Inequalities every game (or every convex game) must satisfy, checked
//! exhaustively over pairs and triples.

use std::fmt;

use crate::game::Game;
use crate::lattice::ElementId;
use crate::value::ValueLattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub witness: String,
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {}", self.law, self.witness)
    }
}

struct Checker<'a, D: ValueLattice> {
    g: &'a Game<D>,
    count: usize,
}

impl<D: ValueLattice> Checker<'_, D> {
    fn check(&mut self, law: &'static str, ok: bool, at: &[ElementId]) -> Result<(), LawViolation> {
        self.count += 1;
        if ok {
            return Ok(());
        }
        let labels: Vec<&str> = at.iter().map(|&x| self.g.lattice().label(x)).collect();
        Err(LawViolation { law, witness: format!("({})", labels.join(", ")) })
    }
}

/// Checks monotonicity of `μ_A` on every game, and on convex games the
/// exact-sequence bounds, the join bound, the majoration lemma, `μ_max`
/// idempotence, the truncation properties of St and, for totally ordered
/// values, that St is a chain and that semi-stability gives `μ_B* ≤ μ_A*`.
/// Returns the number of individual checks.
pub fn check_laws<D: ValueLattice>(g: &Game<D>) -> Result<usize, LawViolation> {
    let mut c = Checker { g, count: 0 };
    let l = g.lattice();
    let d = g.domain();
    let total = d.is_total();
    let mu_a = |x, y| g.mu_a(x, y).expect("strict pair");

    let triples: Vec<(ElementId, ElementId, ElementId)> = l
        .strict_pairs()
        .into_iter()
        .flat_map(|(x, z)| l.above(x).filter(move |&y| l.lt(y, z)).map(move |y| (x, y, z)).collect::<Vec<_>>())
        .collect();
    for &(x, y, z) in &triples {
        c.check("monotonicity", d.compare(&mu_a(y, z), &mu_a(x, z)).is_ge(), &[x, y, z])?;
    }
    if !g.is_convex() {
        return Ok(c.count);
    }

    for &(x, y, z) in &triples {
        let (xy, yz, xz) = (mu_a(x, y), mu_a(y, z), mu_a(x, z));
        c.check("exact sequence (a)", d.compare(&xz, &d.meet(&xy, &yz)).is_ge(), &[x, y, z])?;
        if total {
            let ok = d.equal(&yz, &xz) || (d.leq(&xy, &xz) && d.lt(&xz, &yz));
            c.check("exact sequence (c)", ok, &[x, y, z])?;
        }
    }
    for u in l.elements() {
        let ups: Vec<ElementId> = l.above(u).collect();
        for &x in &ups {
            for &y in &ups {
                let bound = d.meet(&mu_a(u, x), &mu_a(u, y));
                c.check("join bound", d.compare(&mu_a(u, l.join(x, y)), &bound).is_ge(), &[u, x, y])?;
            }
        }
    }
    for x in l.elements() {
        for w in l.elements().filter(|&w| !l.leq(x, w)) {
            for u in l.elements().filter(|&u| l.leq(u, l.meet(x, w))) {
                c.check("majoration", d.leq(&mu_a(u, x), &mu_a(w, l.join(x, w))), &[u, x, w])?;
            }
        }
    }
    let m = g.max_game();
    for (x, y) in l.strict_pairs() {
        c.check("mu_max idempotence", d.equal(&m.mu_a(x, y).expect("strict"), &mu_a(x, y)), &[x, y])?;
    }
    c.check("mu_max game convex", m.is_convex(), &[])?;

    let (bot, top) = (g.bottom(), g.top());
    let st = g.st_set();
    for &x in st.iter().filter(|&&x| x != top) {
        let r = g.restrict(bot, x).expect("bottom < x");
        c.check("truncation (1)", r.is_semistable(), &[x])?;
        for y in l.above(x) {
            c.check("truncation (2)", !d.leq(&mu_a(bot, x), &mu_a(x, y)), &[x, y])?;
        }
    }
    if total {
        for &x in &st {
            for y in l.above(x) {
                c.check("St restriction", d.equal(&mu_a(bot, y), &mu_a(x, y)), &[x, y])?;
            }
            for &y in &st {
                c.check("St chain", l.comparable(x, y), &[x, y])?;
            }
        }
        if g.is_semistable() {
            c.check("semistable thresholds", d.leq(&g.mu_b_star(), &g.mu_a_star()), &[])?;
        }
    }
    Ok(c.count)
}
