use powerbracket::catalog;
use powerbracket::diagram::{LinkDiagram, Smoothing};
use powerbracket::homset::{counting_invariant, enumerate_colorings};
use powerbracket::linktable;
use powerbracket::powerbracket::{Axiom, Membership, VerifyOptions};
use powerbracket::search::{search, SearchConfig};
use powerbracket::statesum::invariant;
use proptest::prelude::*;

fn links() -> Vec<&'static str> {
    linktable::list()
}

#[test]
fn bundled_brackets_verify_under_the_intersection_reading() {
    for name in ["z5-b2", "z5-b3", "z6-b4"] {
        let r = catalog::bracket(name).unwrap().verify(&VerifyOptions::default());
        assert!(r.is_empty(), "{name}: {:?}", r.violations.first());
    }
    let r = catalog::bracket("z4-b2").unwrap().verify(&VerifyOptions::default());
    assert_eq!(r.violations.len(), 10);
    assert!(r.violations.iter().all(|v| matches!(v.axiom, Axiom::IiI | Axiom::IiIi)));
    assert!(r.violations.iter().all(|v| v.elements == [2, 1]));
}

/// With a union in either one-component type II equation, the three- and
/// four-element brackets are rejected.
#[test]
fn union_readings_reject_bundled_brackets() {
    for (name, def) in [("z5-b3", 9), ("z6-b4", 14)] {
        let b = catalog::bracket(name).unwrap();
        let count = |membership| {
            b.verify(&VerifyOptions {
                membership,
                ..Default::default()
            })
            .violations
            .len()
        };
        assert_eq!(count(Membership::Definition), def, "{name}");
        assert_eq!(count(Membership::Derivation), def, "{name}");
        assert_eq!(count(Membership::Strict), 2 * def, "{name}");
    }
}

#[test]
fn colourings_are_valid_sorted_and_counted() {
    for bq in catalog::biquandle_names() {
        let x = catalog::biquandle(bq).unwrap();
        for name in links() {
            let d = linktable::load(name).unwrap().diagram;
            let cols = enumerate_colorings(&d, &x);
            assert!(cols.windows(2).all(|w| w[0] < w[1]));
            assert!(cols.iter().all(|c| c.is_valid(&d, &x)));
            assert_eq!(cols.len() as u64, counting_invariant(&d, &x));
        }
    }
}

#[test]
fn randomized_search_is_reproducible() {
    let x = catalog::biquandle("b2").unwrap();
    let cfg = SearchConfig {
        skip_trivial: true,
        ..SearchConfig::randomized(x, 4, 2024, 20_000)
    };
    let (a, sa) = search(&cfg).unwrap();
    let (b, sb) = search(&cfg).unwrap();
    assert!(!a.is_empty());
    assert_eq!((a.clone(), sa), (b, sb));
    assert!(a.iter().all(|p| p.is_valid()));
    let other = search(&SearchConfig {
        seed: Some(2025),
        ..cfg.clone()
    })
    .unwrap()
    .0;
    assert_ne!(a, other);
    let par = SearchConfig { jobs: 3, ..cfg };
    assert_eq!(search(&par).unwrap().0, search(&par).unwrap().0);
}

#[test]
fn the_initial_candidate_is_emitted_when_valid() {
    let valid = catalog::bracket("z5-b2").unwrap();
    let cfg = SearchConfig {
        initial: Some(valid.clone()),
        max_results: Some(1),
        ..SearchConfig::randomized(valid.biquandle().clone(), 5, 1, 10)
    };
    assert_eq!(search(&cfg).unwrap().0, vec![valid]);
    // The bundled Z/4 bracket fails verification and is not emitted.
    let invalid = catalog::bracket("z4-b2").unwrap();
    let cfg = SearchConfig {
        initial: Some(invalid.clone()),
        ..SearchConfig::randomized(invalid.biquandle().clone(), 4, 1, 1)
    };
    assert!(!search(&cfg).unwrap().0.contains(&invalid));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// δ(∅) appears in no quantified equation and in no state sum.
    #[test]
    fn empty_set_delta_is_inert(bracket in prop::sample::select(vec!["z4-b2", "z5-b2", "z5-b3", "z6-b4"]), v in 0u32..4, link in prop::sample::select(links())) {
        let b = catalog::bracket(bracket).unwrap();
        let mut delta = b.delta_values().to_vec();
        delta[0] = v % b.ring().modulus();
        let b2 = b.with_delta(delta).unwrap();
        prop_assert_eq!(b.verify(&VerifyOptions::default()), b2.verify(&VerifyOptions::default()));
        let d = linktable::load(link).unwrap().diagram;
        prop_assert_eq!(invariant(&d, b.biquandle(), &b).unwrap(), invariant(&d, b2.biquandle(), &b2).unwrap());
    }

    /// Changing one smoothing merges two state circles or splits one.
    #[test]
    fn flipping_one_smoothing_changes_the_circle_count_by_one(link in prop::sample::select(links()), state in any::<u32>(), flip in 0usize..7) {
        let d = linktable::load(link).unwrap().diagram;
        let n = d.crossing_count();
        let choice: Vec<Smoothing> = (0..n).map(|i| if state >> i & 1 == 1 { Smoothing::Trace } else { Smoothing::Oriented }).collect();
        let mut flipped = choice.clone();
        flipped[flip % n] = flipped[flip % n].flip();
        let a = d.state_components(&choice).unwrap().len() as i64;
        let b = d.state_components(&flipped).unwrap().len() as i64;
        prop_assert_eq!((a - b).abs(), 1);
    }

    #[test]
    fn mirror_negates_writhe_and_is_an_involution(link in prop::sample::select(links())) {
        let d = linktable::load(link).unwrap().diagram;
        let m = d.mirror();
        prop_assert_eq!(m.writhe(), -d.writhe());
        prop_assert!(m.is_planar());
        prop_assert_eq!(m.link_components(), d.link_components());
        prop_assert_eq!(m.mirror(), d);
    }

    #[test]
    fn native_text_round_trips(link in prop::sample::select(links())) {
        let d = linktable::load(link).unwrap().diagram;
        prop_assert_eq!(LinkDiagram::parse(&d.to_native()).unwrap(), d);
    }

    /// Every single-entry change of a coefficient table of the Z/5
    /// two-element bracket is checked against its own verifier; those that
    /// still verify must still give move-invariant values on the Hopf pairs.
    #[test]
    fn perturbed_brackets_that_verify_stay_invariant(table in 0usize..4, x in 0usize..2, y in 0usize..2, v in 0u32..5) {
        let base = catalog::bracket("z5-b2").unwrap();
        let mut t = base.tables();
        let slot = [&mut t.a, &mut t.b, &mut t.abar, &mut t.bbar].into_iter().nth(table).unwrap();
        prop_assume!(slot[x][y] != v);
        slot[x][y] = v;
        let b = base.with_tables(t).unwrap();
        if b.is_valid() {
            for (_, before, after) in linktable::MOVE_PAIRS {
                let (p, q) = (linktable::load_move(before).unwrap(), linktable::load_move(after).unwrap());
                prop_assert_eq!(invariant(&p, b.biquandle(), &b).unwrap(), invariant(&q, b.biquandle(), &b).unwrap());
            }
        }
    }
}
