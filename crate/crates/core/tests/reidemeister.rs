use powerbracket::catalog;
use powerbracket::diagram::{LinkDiagram, Sign};
use powerbracket::linktable::{self, MOVE_PAIRS};
use powerbracket::powerbracket::PowerBracket;
use powerbracket::statesum::{invariant, InvariantResult};
use proptest::prelude::*;

const VALID: [&str; 3] = ["z5-b2", "z5-b3", "z6-b4"];

fn inv(d: &LinkDiagram, b: &PowerBracket) -> InvariantResult {
    invariant(d, b.biquandle(), b).unwrap()
}

#[test]
fn move_pairs_preserve_the_invariant_for_valid_brackets() {
    for name in VALID {
        let b = catalog::bracket(name).unwrap();
        for &(mv, before, after) in MOVE_PAIRS {
            let (x, y) = (
                linktable::load_move(before).unwrap(),
                linktable::load_move(after).unwrap(),
            );
            assert_eq!(inv(&x, &b), inv(&y, &b), "{name}: {mv} {before} -> {after}");
        }
    }
}

/// The bundled Z/4 bracket fails the type II axioms; the reverse type II
/// pairs tell its two diagrams of the Hopf link apart, while the other
/// moves still agree.
#[test]
fn z4_bracket_detects_only_the_type_two_moves() {
    let b = catalog::bracket("z4-b2").unwrap();
    for &(mv, before, after) in MOVE_PAIRS {
        let (x, y) = (
            linktable::load_move(before).unwrap(),
            linktable::load_move(after).unwrap(),
        );
        let same = inv(&x, &b) == inv(&y, &b);
        assert_eq!(same, mv != "RII", "{mv} {before} -> {after}");
    }
    let hopf = inv(&linktable::load_move("hopf").unwrap(), &b);
    assert_eq!(hopf.to_polynomial(), "4u");
    let moved = inv(&linktable::load_move("hopf-r2-inner").unwrap(), &b);
    assert_eq!(moved.to_polynomial(), "3u + u^3");
}

/// Changing any one of these entries of the Z/4 bracket gives a bracket the
/// verifier accepts, and then the type II pairs agree too.
#[test]
fn repaired_z4_brackets_are_move_invariant() {
    let base = catalog::bracket("z4-b2").unwrap();
    let repairs: [(usize, usize, usize, u32); 4] = [(0, 2, 1, 3), (1, 2, 1, 0), (2, 2, 1, 2), (3, 2, 1, 1)];
    for (table, x, y, v) in repairs {
        let mut t = base.tables();
        let slot = match table {
            0 => &mut t.a,
            1 => &mut t.b,
            2 => &mut t.abar,
            _ => &mut t.bbar,
        };
        slot[x - 1][y - 1] = v;
        let b = base.with_tables(t).unwrap();
        assert!(b.is_valid(), "table {table} entry ({x},{y}) = {v}");
        for &(mv, before, after) in MOVE_PAIRS {
            let (p, q) = (
                linktable::load_move(before).unwrap(),
                linktable::load_move(after).unwrap(),
            );
            assert_eq!(inv(&p, &b), inv(&q, &b), "{mv} {before} -> {after}");
        }
    }
}

#[test]
fn kinks_on_every_semiarc_of_the_hopf_link() {
    let hopf = linktable::load_move("hopf").unwrap();
    for name in VALID {
        let b = catalog::bracket(name).unwrap();
        let want = inv(&hopf, &b);
        for &s in hopf.semiarcs() {
            for sign in [Sign::Positive, Sign::Negative] {
                for on_outputs in [false, true] {
                    let k = hopf.with_kink(s, sign, on_outputs).unwrap();
                    assert!(k.is_planar());
                    assert_eq!(inv(&k, &b), want, "{name} kink {sign} on {s}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_kink_preserves_the_invariant(
        link in prop::sample::select(vec!["L2a1", "L4a1", "L5a1", "L6a4", "L6n1"]),
        bracket in prop::sample::select(VALID.to_vec()),
        pick in any::<prop::sample::Index>(),
        positive in any::<bool>(),
        on_outputs in any::<bool>(),
    ) {
        let d = linktable::load(link).unwrap().diagram;
        let b = catalog::bracket(bracket).unwrap();
        let s = *pick.get(d.semiarcs());
        let sign = if positive { Sign::Positive } else { Sign::Negative };
        let k = d.with_kink(s, sign, on_outputs).unwrap();
        prop_assert_eq!(k.crossing_count(), d.crossing_count() + 1);
        prop_assert_eq!(k.writhe(), d.writhe() + sign.as_i64());
        prop_assert_eq!(inv(&k, &b), inv(&d, &b));
    }

    #[test]
    fn disjoint_union_multiplies_out(
        left in prop::sample::select(vec!["L2a1", "L4a1"]),
        bracket in prop::sample::select(VALID.to_vec()),
    ) {
        // Each colouring of a split diagram is a pair of colourings, and its
        // state sum is the product of the two state sums.
        let b = catalog::bracket(bracket).unwrap();
        let d = linktable::load(left).unwrap().diagram;
        let u = linktable::load_move("hopf").unwrap();
        let (rd, ru) = (inv(&d, &b), inv(&u, &b));
        let m = b.ring().modulus() as u64;
        let mut want = std::collections::BTreeMap::new();
        for (&x, &i) in &rd.multiset {
            for (&y, &j) in &ru.multiset {
                *want.entry((x as u64 * y as u64 % m) as u32).or_insert(0) += i * j;
            }
        }
        prop_assert_eq!(inv(&d.disjoint_union(&u), &b).multiset, want);
    }
}
