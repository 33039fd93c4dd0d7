//! Brute-force oracles shared by the oracle tests and the acceptance run.
//! They share no code with the library beyond reading diagrams.

use std::collections::{BTreeSet, HashMap, HashSet};

use powerbracket::diagram::{LinkDiagram, Sign};

pub fn inv(a: i64, m: i64) -> Option<i64> {
    (1..m).find(|&b| a * b % m == 1 % m)
}

// Number of δ factors in each term of the five type III equations, terms in
// the order AAA, AAB, ..., BBB. Left side then right side.
const III_DELTA_COUNTS: [([u32; 8], [u32; 8]); 5] = [
    ([3, 2, 2, 1, 2, 1, 3, 2], [3, 2, 2, 3, 2, 1, 1, 2]),
    ([2, 1, 3, 2, 3, 2, 4, 3], [2, 1, 1, 2, 3, 2, 2, 1]),
    ([2, 3, 1, 2, 1, 2, 2, 1], [2, 3, 3, 4, 1, 2, 2, 3]),
    ([1, 2, 2, 3, 2, 1, 3, 2], [1, 2, 2, 3, 2, 1, 3, 2]),
    ([1, 2, 2, 1, 2, 3, 3, 2], [1, 2, 2, 3, 2, 3, 1, 2]),
];

/// The axioms specialised to one element, where every quantified set is
/// `{1}` and `d = δ({1})`.
pub fn scalar_ok(m: i64, a: i64, b: i64, ab: i64, bb: i64, w: i64, d: i64) -> bool {
    let md = |v: i64| v.rem_euclid(m);
    let pw = |k: u32| md(d.pow(k));
    let Some(wi) = inv(w, m) else { return false };
    let kink = md(w * d) == md(a * pw(2) + b * d) && md(wi * d) == md(ab * pw(2) + bb * d);
    let mixed = ab * b + a * bb;
    let reverse = md(d) == md(a * ab * pw(3) + mixed * pw(2) + b * bb * d)
        && md(pw(2)) == md(a * ab * pw(2) + mixed * d + b * bb * pw(2));
    let triple = III_DELTA_COUNTS.iter().all(|(lhs, rhs)| {
        let side = |counts: &[u32; 8]| {
            (0..8).fold(0, |acc, k| {
                let c = |bit: usize| if k >> bit & 1 == 1 { b } else { a };
                md(acc + c(2) * c(1) % m * c(0) % m * pw(counts[k]))
            })
        };
        side(lhs) == side(rhs)
    });
    kink && reverse && triple
}

pub fn scalar_solutions(m: i64) -> BTreeSet<[i64; 6]> {
    let mut out = BTreeSet::new();
    for a in 0..m {
        for b in 0..m {
            for ab in 0..m {
                for bb in 0..m {
                    for w in 0..m {
                        for d in 0..m {
                            if scalar_ok(m, a, b, ab, bb, w, d) {
                                out.insert([a, b, ab, bb, w, d]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Kauffman state sum by walking the closed curves of each state.
///
/// Ports are `(crossing, role)` with role 0..4 = under-in, under-out,
/// over-in, over-out. The oriented smoothing joins each incoming port to
/// the outgoing port of the other strand; the trace smoothing joins the two
/// incoming ports and the two outgoing ports.
pub fn kauffman_oracle(d: &LinkDiagram, m: i64, a: i64, b: i64, w: i64) -> i64 {
    let (ai, bi, wi) = (inv(a, m).unwrap(), inv(b, m).unwrap(), inv(w, m).unwrap());
    let delta = (-a * bi - ai * b).rem_euclid(m);
    let cs = d.crossings();
    // Where each semiarc starts and ends.
    let mut tail = HashMap::new();
    let mut head = HashMap::new();
    for (i, c) in cs.iter().enumerate() {
        let (ui, uo, oi, oo) = match c.sign {
            Sign::Positive => (c.x, c.xy, c.yx, c.y),
            Sign::Negative => (c.xy, c.x, c.y, c.yx),
        };
        head.insert(ui, (i, 0));
        tail.insert(uo, (i, 1));
        head.insert(oi, (i, 2));
        tail.insert(oo, (i, 3));
    }
    // The port at the other end of the semiarc leaving or entering `p`.
    let mut across = HashMap::new();
    for (s, &h) in &head {
        let t = tail[s];
        across.insert(h, t);
        across.insert(t, h);
    }
    let mut total = 0;
    for state in 0..1u32 << cs.len() {
        let partner = |(i, r): (usize, usize)| -> (usize, usize) {
            let trace = state >> i & 1 == 1;
            let r2 = match (trace, r) {
                (false, 0) => 3,
                (false, 3) => 0,
                (false, 2) => 1,
                (false, 1) => 2,
                (true, 0) => 2,
                (true, 2) => 0,
                (true, 1) => 3,
                (true, _) => 1,
                _ => unreachable!(),
            };
            (i, r2)
        };
        let mut seen = HashSet::new();
        let mut loops = 0u32;
        for i in 0..cs.len() {
            for r in 0..4 {
                if seen.contains(&(i, r)) {
                    continue;
                }
                loops += 1;
                let mut p = (i, r);
                while seen.insert(p) {
                    let q = partner(p);
                    seen.insert(q);
                    p = across[&q];
                }
            }
        }
        let mut term = 1;
        for (i, c) in cs.iter().enumerate() {
            let trace = state >> i & 1 == 1;
            let coef = match (c.sign, trace) {
                (Sign::Positive, false) => a,
                (Sign::Positive, true) => b,
                (Sign::Negative, false) => ai,
                (Sign::Negative, true) => bi,
            };
            term = term * coef % m;
        }
        for _ in 0..loops {
            term = term * delta % m;
        }
        total = (total + term) % m;
    }
    let mut wf = 1;
    let exp = d.negative_count() as i64 - d.positive_count() as i64;
    for _ in 0..exp.abs() {
        wf = wf * if exp > 0 { w } else { wi } % m;
    }
    (total * wf).rem_euclid(m)
}
