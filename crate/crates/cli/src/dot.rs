//! Hasse diagrams in DOT format.
//!
//! Cover edges carry their pay-off. When the HN filtration exists its
//! elements get a doubled border, and step `i` becomes a cluster holding the
//! elements below `a_i` but not below `a_{i-1}`, labelled with the slope.

use std::fmt::Write;

use hngame::value::ValueLattice;
use hngame::{DynGame, ElementId};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn render(g: &DynGame) -> String {
    let l = g.lattice();
    let d = g.domain();
    let label = |x: ElementId| l.label(x);
    let mut nodes: Vec<ElementId> = l.elements().collect();
    nodes.sort_by(|&a, &b| label(a).cmp(label(b)));

    let mut out = String::from("digraph hn {\n  rankdir=BT;\n  node [shape=box];\n");
    let hn = g.hn_filtration();
    match &hn {
        Ok(f) => {
            for i in 1..f.chain.len() {
                let (lo, hi) = f.step(i);
                let members: Vec<ElementId> =
                    nodes.iter().copied().filter(|&z| l.leq(z, hi) && !l.leq(z, lo)).collect();
                writeln!(out, "  subgraph cluster_{i} {{").unwrap();
                writeln!(out, "    label={};", quote(&format!("step {i}: slope {}", d.render(&f.slopes[i - 1])))).unwrap();
                for z in members {
                    writeln!(out, "    {};", quote(label(z))).unwrap();
                }
                out.push_str("  }\n");
            }
        }
        Err(e) => writeln!(out, "  // no HN filtration: {}", e.to_string().replace('\n', " ")).unwrap(),
    }
    for &z in &nodes {
        let on_chain = hn.as_ref().is_ok_and(|f| f.chain.contains(&z));
        let attrs = if on_chain { " [peripheries=2]" } else { "" };
        writeln!(out, "  {}{};", quote(label(z)), attrs).unwrap();
    }
    let mut edges = l.covers();
    edges.sort_by(|&(a, b), &(c, e)| (label(a), label(b)).cmp(&(label(c), label(e))));
    for (a, b) in edges {
        let w = d.render(g.payoff(a, b).expect("cover is a strict pair"));
        writeln!(out, "  {} -> {} [label={}];", quote(label(a)), quote(label(b)), quote(&w)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hngame::GameFile;

    fn three_node() -> DynGame {
        let s = r#"{
            "elements": ["bot", "x", "top"],
            "order": {"kind": "covers", "pairs": [["bot", "x"], ["x", "top"]]},
            "value_domain": {"mode": "rational"},
            "payoff": {"kind": "table", "entries": [["bot", "x", 1], ["x", "top", 0], ["bot", "top", 2]]}
        }"#;
        GameFile::from_json_str(s).unwrap().load().unwrap().game
    }

    #[test]
    fn three_node_diagram() {
        let dot = render(&three_node());
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert!(dot.contains("\"bot\" -> \"x\" [label=\"1\"];"));
        assert!(dot.contains("\"x\" -> \"top\" [label=\"0\"];"));
        assert!(dot.contains("\"x\" [peripheries=2];"));
        assert!(dot.contains("label=\"step 1: slope 1\""));
        assert!(dot.contains("label=\"step 2: slope 0\""));
        assert_eq!(render(&three_node()), dot);
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a\"b\\c"), "\"a\\\"b\\\\c\"");
    }
}
