//! Threshold summary of a game: both first-mover thresholds, the extreme
//! pay-offs at the top, the destabilizing set and the predicate flags.

use serde_json::{json, Value as Json};

use crate::game::Game;
use crate::lattice::ElementId;
use crate::value::{Comparison, ValueLattice};

/// Names of the five statements that coincide for slope-like pay-offs.
pub const STATEMENTS: [&str; 5] = [
    "mu_max(top) = mu(bot,top)",
    "mu_min(top) = mu(bot,top)",
    "mu_min(top) = mu_max(top)",
    "nash equilibrium (mu_A* = mu_B*)",
    "semistable",
];

#[derive(Clone, Debug, PartialEq)]
pub struct GameReport<V> {
    pub mu_a_star: V,
    pub mu_b_star: V,
    pub mu_top: V,
    pub mu_max_top: V,
    pub mu_min_top: V,
    pub st_set: Vec<ElementId>,
    pub convex: bool,
    /// `None` when the value domain is not totally ordered.
    pub slope_like: Option<bool>,
    pub affine: bool,
    pub semistable: bool,
    pub stable: bool,
    pub nash: bool,
    /// `μ_B*` compared with `μ_A*`.
    pub threshold_order: Comparison,
    pub statements: [bool; 5],
}

impl<V> GameReport<V> {
    pub fn statements_agree(&self) -> bool {
        self.statements.iter().all(|&s| s == self.statements[0])
    }
}

impl<D: ValueLattice> Game<D> {
    /// Computes the full report. For slope-like pay-offs the five statements
    /// are asserted to agree.
    pub fn report(&self) -> GameReport<D::Value> {
        let d = self.domain();
        let (b, t) = (self.bottom(), self.top());
        let mu_a_star = self.mu_a_star();
        let mu_b_star = self.mu_b_star();
        let mu_top = self.mu(b, t).clone();
        let mu_max_top = self.mu_max_unchecked(b, t).clone();
        let mu_min_top = self.mu_min(b, t).expect("bottom < top");
        let semistable = self.is_semistable();
        let nash = d.equal(&mu_a_star, &mu_b_star);
        let statements = [
            d.equal(&mu_max_top, &mu_top),
            d.equal(&mu_min_top, &mu_top),
            d.equal(&mu_min_top, &mu_max_top),
            nash,
            semistable,
        ];
        let slope_like = self.is_slope_like().ok();
        let report = GameReport {
            threshold_order: d.compare(&mu_b_star, &mu_a_star),
            mu_a_star,
            mu_b_star,
            mu_top,
            mu_max_top,
            mu_min_top,
            st_set: self.st_set(),
            convex: self.is_convex(),
            slope_like,
            affine: self.is_affine(),
            semistable,
            stable: self.is_stable(),
            nash,
            statements,
        };
        if slope_like == Some(true) {
            assert!(report.statements_agree(), "slope-like game with disagreeing statements: {statements:?}");
        }
        report
    }

    fn st_labels(&self, st: &[ElementId]) -> String {
        let mut labels: Vec<&str> = st.iter().map(|&x| self.lattice().label(x)).collect();
        labels.sort_unstable();
        format!("{{{}}}", labels.join(", "))
    }

    /// Human-readable report, one fact per line.
    pub fn report_text(&self, r: &GameReport<D::Value>) -> String {
        let d = self.domain();
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<14} {v}\n"));
        line("mu_A*", d.render(&r.mu_a_star));
        line("mu_B*", d.render(&r.mu_b_star));
        line("mu(bot,top)", d.render(&r.mu_top));
        line("mu_min(top)", d.render(&r.mu_min_top));
        line("mu_max(top)", d.render(&r.mu_max_top));
        line("St", self.st_labels(&r.st_set));
        line("convex", r.convex.to_string());
        line(
            "slope_like",
            match r.slope_like {
                Some(b) => b.to_string(),
                None => "n/a (partial value order)".into(),
            },
        );
        line("affine", r.affine.to_string());
        line("semistable", r.semistable.to_string());
        line("stable", r.stable.to_string());
        line("nash", format!("{} (mu_B* {} mu_A*)", r.nash, order_word(r.threshold_order)));
        for (i, (name, v)) in STATEMENTS.iter().zip(r.statements).enumerate() {
            line(&format!("({})", (b'a' + i as u8) as char), format!("{v}  {name}"));
        }
        let agreement = match r.slope_like {
            Some(true) => "all five agree",
            _ if r.statements_agree() => "all five agree (not implied: pay-off is not slope-like)",
            _ => "statements differ (pay-off is not slope-like)",
        };
        line("equivalence", agreement.into());
        out
    }

    /// Machine-readable report; values are rendered with the domain's grammar.
    pub fn report_json(&self, r: &GameReport<D::Value>) -> Json {
        let d = self.domain();
        let mut st: Vec<&str> = r.st_set.iter().map(|&x| self.lattice().label(x)).collect();
        st.sort_unstable();
        json!({
            "mu_A_star": d.render(&r.mu_a_star),
            "mu_B_star": d.render(&r.mu_b_star),
            "mu_top": d.render(&r.mu_top),
            "mu_min_top": d.render(&r.mu_min_top),
            "mu_max_top": d.render(&r.mu_max_top),
            "st_set": st,
            "flags": {
                "convex": r.convex,
                "slope_like": r.slope_like,
                "affine": r.affine,
                "semistable": r.semistable,
                "stable": r.stable,
                "nash": r.nash,
            },
            "mu_B_star_vs_mu_A_star": r.threshold_order.as_str(),
            "statements": r.statements,
        })
    }
}

fn order_word(c: Comparison) -> &'static str {
    match c {
        Comparison::Less => "<",
        Comparison::Equal => "=",
        Comparison::Greater => ">",
        Comparison::Incomparable => "incomparable to",
    }
}
