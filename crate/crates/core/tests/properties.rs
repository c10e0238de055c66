//! Property tests over seeded random games.

use hngame::oracle::laws::check_laws;
use hngame::oracle::{brute_mu_a, enumerate_hn_candidates, random_game, DomainKind, PayoffKind, RandomInstanceConfig};
use hngame::value::ValueLattice;
use hngame::{DynGame, GameFile, Verdict};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = PayoffKind> {
    prop_oneof![
        Just(PayoffKind::ModularDegreeRank),
        Just(PayoffKind::RandomTableConvex),
        Just(PayoffKind::RandomTableAny),
    ]
}

fn domain() -> impl Strategy<Value = DomainKind> {
    prop_oneof![3 => Just(DomainKind::Rational), 1 => Just(DomainKind::LexTuple(2)), 1 => Just(DomainKind::LexTuple(3))]
}

fn game() -> impl Strategy<Value = DynGame> {
    (any::<u64>(), 1usize..=4, kind(), domain()).prop_filter_map("rejection budget", |(seed, size, kind, domain)| {
        random_game(&RandomInstanceConfig::new(seed, size, kind).with_domain(domain)).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_operations_are_bounds(g in game()) {
        let l = g.lattice();
        for x in l.elements() {
            for y in l.elements() {
                let (m, j) = (l.meet(x, y), l.join(x, y));
                prop_assert!(l.leq(m, x) && l.leq(m, y) && l.leq(x, j) && l.leq(y, j));
                for z in l.elements() {
                    if l.leq(z, x) && l.leq(z, y) { prop_assert!(l.leq(z, m)); }
                    if l.leq(x, z) && l.leq(y, z) { prop_assert!(l.leq(j, z)); }
                }
            }
        }
    }

    #[test]
    fn intervals_inherit_structure(g in game()) {
        let l = g.lattice();
        let all = l.strict_pairs();
        for (x, y) in all.iter().copied() {
            let iv = l.interval(x, y).unwrap();
            let sub = iv.to_lattice();
            prop_assert_eq!(sub.bottom(), hngame::ElementId(0));
            for (a, b) in sub.strict_pairs() {
                let (a, b) = (iv.members[a.0], iv.members[b.0]);
                prop_assert!(all.contains(&(a, b)));
            }
            for (i, &a) in iv.members.iter().enumerate() {
                for (k, &b) in iv.members.iter().enumerate() {
                    prop_assert_eq!(iv.members[sub.meet(hngame::ElementId(i), hngame::ElementId(k)).0], l.meet(a, b));
                    prop_assert_eq!(iv.members[sub.join(hngame::ElementId(i), hngame::ElementId(k)).0], l.join(a, b));
                }
            }
        }
    }

    #[test]
    fn engine_matches_brute_force(g in game()) {
        for (x, y) in g.lattice().strict_pairs() {
            prop_assert_eq!(g.mu_a(x, y).unwrap(), brute_mu_a(&g, x, y).unwrap());
        }
    }

    #[test]
    fn laws_hold(g in game()) {
        if let Err(v) = check_laws(&g) {
            prop_assert!(false, "{}", v);
        }
    }

    #[test]
    fn hn_filtration_is_the_unique_candidate(g in game()) {
        prop_assume!(g.is_convex());
        let hn = g.hn_filtration().unwrap();
        prop_assert_eq!(g.verify_filtration(&hn.chain).unwrap(), Verdict::Holds);
        prop_assert_eq!(enumerate_hn_candidates(&g).unwrap(), vec![hn]);
    }

    #[test]
    fn restriction_to_a_filtration_step_is_semistable(g in game()) {
        prop_assume!(g.is_convex());
        let hn = g.hn_filtration().unwrap();
        for i in 1..hn.chain.len() {
            let (lo, hi) = hn.step(i);
            prop_assert!(g.restrict(lo, hi).unwrap().is_semistable());
        }
    }

    #[test]
    fn duality_swaps_thresholds(g in game()) {
        let d = g.domain();
        let dual = g.dual();
        prop_assert!(d.equal(&dual.mu_b_star(), &g.mu_a_star()));
        prop_assert!(d.equal(&dual.mu_a_star(), &g.mu_b_star()));
        prop_assert_eq!(GameFile::from_game(&dual.dual()).to_json_string(), GameFile::from_game(&g).to_json_string());
    }

    #[test]
    fn nash_and_semistability(g in game()) {
        let r = g.report();
        if r.semistable {
            prop_assert!(g.domain().leq(&r.mu_b_star, &r.mu_a_star));
        }
        if r.slope_like == Some(true) {
            prop_assert!(r.statements_agree());
            prop_assert_eq!(r.nash, r.semistable);
            prop_assert_eq!(&r.mu_a_star, &r.mu_min_top);
            prop_assert_eq!(&r.mu_b_star, &r.mu_max_top);
        }
    }

    #[test]
    fn serialization_round_trip(g in game()) {
        let text = GameFile::from_game(&g).to_json_string();
        let back = GameFile::from_json_str(&text).unwrap().load().unwrap().game;
        prop_assert_eq!(GameFile::from_game(&back).to_json_string(), text);
        prop_assert_eq!(back.report_text(&back.report()), g.report_text(&g.report()));
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), size in 1usize..=5, kind in kind()) {
        let cfg = RandomInstanceConfig::new(seed, size, kind);
        match (random_game(&cfg), random_game(&cfg)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(GameFile::from_game(&a).to_json_string(), GameFile::from_game(&b).to_json_string()),
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "outcomes differ"),
        }
    }
}
