//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every check runs regardless of earlier failures. The exit status is 0
//! unless `ACCEPTANCE_STRICT` is set, in which case any failure exits 1;
//! cargo runs this target before the other integration suites and would
//! otherwise skip them.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use powerbracket::biquandle::Biquandle;
use powerbracket::catalog;
use powerbracket::homset::{counting_invariant, enumerate_colorings};
use powerbracket::linktable::{self, MOVE_PAIRS};
use powerbracket::modring::RingZm;
use powerbracket::powerbracket::{PowerBracket, VerifyOptions};
use powerbracket::search::{search, search_with, SearchConfig};
use powerbracket::statesum::{evaluate, invariant};

mod common;

// Pinned limits.
const VERIFY_LIMIT: Duration = Duration::from_secs(10);
const TABULATE_LIMIT: Duration = Duration::from_secs(300);
const SEARCH_BUDGET: u64 = 1_000_000;
const SEARCH_SEED: u64 = 7;

const BRACKETS: [&str; 4] = ["z4-b2", "z5-b2", "z5-b3", "z6-b4"];

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, pass: bool, what: &str, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{id} {}: {what} ({detail})", if pass { "PASS" } else { "FAIL" });
    }
}

fn inv_poly(link: &str, b: &PowerBracket) -> String {
    let d = linktable::load(link).unwrap().diagram;
    invariant(&d, b.biquandle(), b).unwrap().to_polynomial()
}

fn ac1(r: &mut Report) {
    let mut details = Vec::new();
    let mut pass = true;
    for name in BRACKETS {
        let b = catalog::bracket(name).unwrap();
        let t = Instant::now();
        let report = b.verify(&VerifyOptions::default());
        let took = t.elapsed();
        pass &= report.is_empty() && took < VERIFY_LIMIT;
        details.push(format!("{name}: {} violations in {took:.2?}", report.violations.len()));
    }
    // A single-entry change to the Z/4 bracket, confirmed by the verifier
    // to break an axiom.
    let base = catalog::bracket("z4-b2").unwrap();
    let mut t = base.tables();
    t.a[0][0] = (t.a[0][0] + 1) % 4;
    let perturbed = base.with_tables(t).unwrap();
    let n = perturbed.verify(&VerifyOptions::default()).violations.len();
    pass &= n > 0;
    details.push(format!("A[1][1]+1 on z4-b2: {n} violations"));
    r.line(
        "AC1",
        pass,
        "example brackets verify clean, perturbation is caught",
        details.join("; "),
    );
}

fn ac2(r: &mut Report) {
    let b = catalog::bracket("z6-b4").unwrap();
    let d = linktable::load("L4a1").unwrap().diagram;
    let count = counting_invariant(&d, b.biquandle());
    let res = invariant(&d, b.biquandle(), &b).unwrap();
    let want: std::collections::BTreeMap<u32, u64> = [(0, 8), (3, 4), (4, 4)].into_iter().collect();
    let poly = res.to_polynomial();
    let pass = count == 16 && res.multiset == want && poly == "8 + 4u^3 + 4u^4";
    r.line(
        "AC2",
        pass,
        "worked example on L4a1",
        format!("{count} colourings, {:?}, `{poly}`", res.multiset),
    );
}

/// Reference rows per bracket: polynomial and the links sharing it.
type Rows = &'static [(&'static str, &'static [&'static str])];

const TABLES: [(&str, Rows); 3] = [
    (
        "z5-b2",
        &[
            ("2u + 2u^2", &["L6a2", "L6a3"]),
            ("2u + 2u^3", &["L2a1", "L7a5", "L7a6"]),
            ("2u + 2u^4", &["L4a1", "L6a1", "L7a2", "L7n1"]),
            ("4u", &["L5a1", "L7a1", "L7a3", "L7a4", "L7n2"]),
            ("2u + 6u^4", &["L7a7"]),
            ("6u + 2u^4", &["L6a4", "L6a5", "L6n1"]),
        ],
    ),
    (
        "z5-b3",
        &[
            ("1 + 2u + 2u^2", &["L2a1", "L7a5", "L7a6"]),
            ("1 + 2u + 2u^3", &["L6a2", "L6a3"]),
            ("5 + 4u", &["L5a1", "L7a1", "L7a3", "L7a4", "L7n2"]),
            ("5 + 2u + 2u^4", &["L4a1", "L6a1", "L7a2", "L7n1"]),
            ("7 + 6u + 2u^4", &["L6a5", "L6n1", "L7a7"]),
            ("19 + 6u + 2u^4", &["L6a4"]),
        ],
    ),
    (
        "z6-b4",
        &[
            ("2u^2 + 4u^3 + 2u^4", &["L2a1", "L6a2", "L7a5", "L7a6"]),
            (
                "8 + 4u^3 + 4u^4",
                &["L4a1", "L5a1", "L6a1", "L7a1", "L7a2", "L7a3", "L7a4", "L7n1", "L7n2"],
            ),
            ("8u^3 + 8u^4", &["L6a5", "L6n1", "L7a7"]),
            ("48 + 8u^3 + 8u^4", &["L6a4"]),
        ],
    ),
];

fn ac3(r: &mut Report) {
    let t = Instant::now();
    let mut cells = 0;
    let mut mismatches = Vec::new();
    let mut unlisted = Vec::new();
    for (name, rows) in TABLES {
        let b = catalog::bracket(name).unwrap();
        for link in linktable::list() {
            let got = inv_poly(link, &b);
            match rows.iter().find(|(_, ls)| ls.contains(&link)) {
                Some((want, _)) => {
                    cells += 1;
                    if got != *want {
                        mismatches.push(format!("{name} {link}: got `{got}`, table `{want}`"));
                    }
                }
                None => unlisted.push(format!("{name} {link} = `{got}`")),
            }
        }
    }
    let took = t.elapsed();
    let pass = mismatches.is_empty() && took < TABULATE_LIMIT;
    let mut detail = format!("{}/{cells} cells match in {took:.2?}", cells - mismatches.len());
    if !mismatches.is_empty() {
        detail.push_str(&format!("; mismatches: {}", mismatches.join("; ")));
    }
    if !unlisted.is_empty() {
        detail.push_str(&format!("; no table row: {}", unlisted.join("; ")));
    }
    r.line("AC3", pass, "table reproduction", detail);
}

fn ac4(r: &mut Report) {
    let mut bad = Vec::new();
    let mut checked = 0;
    for name in BRACKETS {
        let b = catalog::bracket(name).unwrap();
        for link in linktable::list() {
            let d = linktable::load(link).unwrap().diagram;
            let total = invariant(&d, b.biquandle(), &b).unwrap().total();
            let count = counting_invariant(&d, b.biquandle());
            checked += 1;
            if total != count {
                bad.push(format!("{name} {link}: {total} != {count}"));
            }
        }
    }
    let b3 = catalog::biquandle("b3").unwrap();
    let l7a7 = counting_invariant(&linktable::load("L7a7").unwrap().diagram, &b3);
    let pass = bad.is_empty() && l7a7 == 15;
    r.line(
        "AC4",
        pass,
        "multiplicity equals counting invariant",
        format!("{checked} pairs, {} mismatches, L7a7 under b3 = {l7a7}", bad.len()),
    );
}

fn ac5(r: &mut Report) {
    let mut bad = Vec::new();
    let mut checked = 0;
    for name in BRACKETS {
        let b = catalog::bracket(name).unwrap();
        for &(mv, before, after) in MOVE_PAIRS {
            let (x, y) = (
                linktable::load_move(before).unwrap(),
                linktable::load_move(after).unwrap(),
            );
            let (p, q) = (
                invariant(&x, b.biquandle(), &b).unwrap(),
                invariant(&y, b.biquandle(), &b).unwrap(),
            );
            checked += 1;
            if p != q {
                bad.push(format!("{name} {mv} {before}->{after}: `{p}` vs `{q}`"));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{checked} pairs equal")
    } else {
        format!("{}/{checked} pairs differ: {}", bad.len(), bad.join("; "))
    };
    r.line("AC5", bad.is_empty(), "Reidemeister pairs", detail);
}

fn ac6(r: &mut Report) {
    let one = Biquandle::constant_action(&[1]).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    for m in [3i64, 5] {
        let (found, _) = search(&SearchConfig::exhaustive(one.clone(), m as u64)).unwrap();
        let got: BTreeSet<[i64; 6]> = found
            .iter()
            .map(|p| [p.a(1, 1), p.b(1, 1), p.abar(1, 1), p.bbar(1, 1), p.w(), p.delta(1)].map(|e| e.value() as i64))
            .collect();
        let want = common::scalar_solutions(m);
        pass &= got == want && got.len() == found.len();
        details.push(format!("Z/{m}: search {} vs oracle {}", got.len(), want.len()));
    }
    let mut kauffman = 0;
    let mut kauffman_bad = 0;
    for (m, a, b, w) in [(5i64, 2i64, 3i64, 2i64), (7, 3, 5, 1), (11, 2, 6, 3), (13, 4, 10, 12)] {
        let ring = RingZm::new(m as u64).unwrap();
        let bracket =
            PowerBracket::from_standard(one.clone(), &[vec![ring.elem(a)]], &[vec![ring.elem(b)]], ring.elem(w))
                .unwrap();
        for link in linktable::list() {
            let d = linktable::load(link).unwrap().diagram;
            let c = &enumerate_colorings(&d, &one)[0];
            kauffman += 1;
            if evaluate(&d, c, &bracket).unwrap().value() as i64 != common::kauffman_oracle(&d, m, a, b, w) {
                kauffman_bad += 1;
            }
        }
    }
    pass &= kauffman_bad == 0;
    details.push(format!("Kauffman: {}/{kauffman} agree", kauffman - kauffman_bad));
    r.line("AC6", pass, "oracle equivalence", details.join("; "));
}

fn ac7(r: &mut Report) {
    let x = catalog::biquandle("b2").unwrap();
    let cfg = SearchConfig::randomized(x, 4, SEARCH_SEED, SEARCH_BUDGET);
    let run = || {
        let mut h = DefaultHasher::new();
        let mut count = 0usize;
        let mut nontrivial = 0usize;
        let mut unverified = 0usize;
        let t = Instant::now();
        let stats = search_with(&cfg, |b| {
            b.serialize().hash(&mut h);
            count += 1;
            nontrivial += usize::from(b.delta_values()[1..].iter().any(|&d| d != 0));
            unverified += usize::from(!b.verify(&VerifyOptions::default()).is_empty());
            ControlFlow::Continue(())
        })
        .unwrap();
        (h.finish(), count, nontrivial, unverified, stats.candidates, t.elapsed())
    };
    let first = run();
    let second = run();
    let (digest, count, nontrivial, unverified, candidates, took) = first;
    let pass = count >= 1 && unverified == 0 && (first.0, first.1) == (second.0, second.1);
    r.line(
        "AC7",
        pass,
        "randomized search over b2, Z/4",
        format!(
            "seed {SEARCH_SEED}, {candidates} candidates, {count} emitted ({nontrivial} with nonzero delta), \
             {unverified} fail re-verification, digest {digest:016x} vs {:016x}, {took:.1?} per run",
            second.0
        ),
    );
}

fn main() {
    let mut r = Report { failed: 0 };
    ac1(&mut r);
    ac2(&mut r);
    ac3(&mut r);
    ac4(&mut r);
    ac5(&mut r);
    ac6(&mut r);
    ac7(&mut r);
    println!("acceptance: {} of 7 criteria passed", 7 - r.failed);
    if r.failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
