//! Power brackets and the axiom verifier.
//!
//! A power bracket over a biquandle `X` and the ring `Z/m` is a unit `w`,
//! coefficient tables `A, B, Ā, B̄ : X × X → Z/m` and a map `δ` from subsets
//! of `X` to `Z/m`. Subsets are bitmasks with bit `i − 1` standing for
//! element `i`.
//!
//! [`PowerBracket::verify`] checks axiom (i) for kinks, (ii.i) and (ii.ii)
//! for the two reverse type II moves, and (iii.i)–(iii.v) for the five
//! closures of the all-positive type III move. Every set quantifier is
//! checked over the full power set.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biquandle::{Biquandle, BiquandleError};
use crate::modring::{RingElem, RingError, RingZm};
use crate::text::{write_table, ParseError, Tokens};

/// A subset of the biquandle, bit `i − 1` for element `i`.
pub type ColorSet = u32;

/// Renders a mask as `{1,3}`.
pub fn format_set(mask: ColorSet) -> String {
    let elems: Vec<String> = (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("w: {0}")]
    Ring(#[from] RingError),
    #[error(transparent)]
    Biquandle(#[from] BiquandleError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("delta formula gives {first} at (1,1) but {other} at ({x},{y})")]
    InconsistentDelta { first: u32, other: u32, x: usize, y: usize },
}

/// The four coefficient tables as residues, row `x`, column `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTables {
    pub a: Vec<Vec<u32>>,
    pub b: Vec<Vec<u32>>,
    pub abar: Vec<Vec<u32>>,
    pub bbar: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerBracket {
    biquandle: Biquandle,
    ring: RingZm,
    // Flattened row-major, 0-based.
    a: Vec<u32>,
    b: Vec<u32>,
    abar: Vec<u32>,
    bbar: Vec<u32>,
    w: u32,
    w_inv: u32,
    delta: Vec<u32>,
}

/// Which coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Table {
    A,
    B,
    Abar,
    Bbar,
}

impl PowerBracket {
    pub fn new(
        biquandle: Biquandle,
        ring: RingZm,
        tables: CoefficientTables,
        w: u32,
        delta: Vec<u32>,
    ) -> Result<Self, BracketError> {
        let n = biquandle.order();
        let m = ring.modulus();
        let flat = |t: &[Vec<u32>], name: &str| -> Result<Vec<u32>, BracketError> {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(BracketError::Shape(format!("table {name} must be {n}x{n}")));
            }
            let out: Vec<u32> = t.iter().flatten().copied().collect();
            if let Some(v) = out.iter().find(|&&v| v >= m) {
                return Err(BracketError::Range(format!(
                    "table {name} has entry {v} outside 0..{m}"
                )));
            }
            Ok(out)
        };
        let a = flat(&tables.a, "A")?;
        let b = flat(&tables.b, "B")?;
        let abar = flat(&tables.abar, "Abar")?;
        let bbar = flat(&tables.bbar, "Bbar")?;
        if delta.len() != 1 << n {
            return Err(BracketError::Shape(format!(
                "delta has {} entries, expected 2^{n} = {}",
                delta.len(),
                1 << n
            )));
        }
        if let Some(v) = delta.iter().find(|&&v| v >= m) {
            return Err(BracketError::Range(format!("delta entry {v} outside 0..{m}")));
        }
        if w >= m {
            return Err(BracketError::Range(format!("w = {w} outside 0..{m}")));
        }
        let w_inv = ring.inv_raw(w)?;
        Ok(Self {
            biquandle,
            ring,
            a,
            b,
            abar,
            bbar,
            w,
            w_inv,
            delta,
        })
    }

    /// Lifts a standard biquandle bracket: `Ā = A⁻¹`, `B̄ = B⁻¹` and `δ` is the
    /// constant `−A B⁻¹ − A⁻¹ B`, which must agree at every pair.
    pub fn from_standard(
        biquandle: Biquandle,
        a: &[Vec<RingElem>],
        b: &[Vec<RingElem>],
        w: RingElem,
    ) -> Result<Self, BracketError> {
        let ring = w.ring();
        let n = biquandle.order();
        let shape_ok = |t: &[Vec<RingElem>]| t.len() == n && t.iter().all(|r| r.len() == n);
        if !shape_ok(a) || !shape_ok(b) {
            return Err(BracketError::Shape(format!("A and B must be {n}x{n}")));
        }
        let mut tables = CoefficientTables {
            a: vec![vec![0; n]; n],
            b: vec![vec![0; n]; n],
            abar: vec![vec![0; n]; n],
            bbar: vec![vec![0; n]; n],
        };
        let mut first = None;
        for x in 0..n {
            for y in 0..n {
                let (ax, bx) = (a[x][y], b[x][y]);
                if ax.modulus() != ring.modulus() || bx.modulus() != ring.modulus() {
                    return Err(RingError::ModulusMismatch(ring.modulus(), ax.modulus().max(bx.modulus())).into());
                }
                let (ai, bi) = (ax.inv()?, bx.inv()?);
                let d = (-ax.checked_mul(bi)?.checked_add(ai.checked_mul(bx)?)?).value();
                match first {
                    None => first = Some(d),
                    Some(f) if f != d => {
                        return Err(BracketError::InconsistentDelta {
                            first: f,
                            other: d,
                            x: x + 1,
                            y: y + 1,
                        })
                    }
                    _ => {}
                }
                tables.a[x][y] = ax.value();
                tables.b[x][y] = bx.value();
                tables.abar[x][y] = ai.value();
                tables.bbar[x][y] = bi.value();
            }
        }
        let d = first.expect("n >= 1");
        Self::new(biquandle, ring, tables, w.value(), vec![d; 1 << n])
    }

    pub fn biquandle(&self) -> &Biquandle {
        &self.biquandle
    }

    pub fn ring(&self) -> RingZm {
        self.ring
    }

    pub fn w(&self) -> RingElem {
        self.ring.elem(self.w as i64)
    }

    /// `δ(C)`.
    pub fn delta(&self, set: ColorSet) -> RingElem {
        self.ring.elem(self.delta[set as usize] as i64)
    }

    pub fn delta_values(&self) -> &[u32] {
        &self.delta
    }

    /// Coefficients at 1-based `(x, y)`.
    pub fn a(&self, x: usize, y: usize) -> RingElem {
        self.entry(Table::A, x, y)
    }

    pub fn b(&self, x: usize, y: usize) -> RingElem {
        self.entry(Table::B, x, y)
    }

    pub fn abar(&self, x: usize, y: usize) -> RingElem {
        self.entry(Table::Abar, x, y)
    }

    pub fn bbar(&self, x: usize, y: usize) -> RingElem {
        self.entry(Table::Bbar, x, y)
    }

    fn entry(&self, t: Table, x: usize, y: usize) -> RingElem {
        self.ring.elem(self.raw(t, x - 1, y - 1) as i64)
    }

    #[inline]
    pub(crate) fn raw(&self, t: Table, x: usize, y: usize) -> u32 {
        let i = x * self.biquandle.order() + y;
        match t {
            Table::A => self.a[i],
            Table::B => self.b[i],
            Table::Abar => self.abar[i],
            Table::Bbar => self.bbar[i],
        }
    }

    #[inline]
    pub(crate) fn d(&self, set: ColorSet) -> u64 {
        self.delta[set as usize] as u64
    }

    /// All-zero tables with `w = 1`, as a starting point for search.
    pub(crate) fn blank(biquandle: Biquandle, ring: RingZm) -> Self {
        let n = biquandle.order();
        Self {
            biquandle,
            ring,
            a: vec![0; n * n],
            b: vec![0; n * n],
            abar: vec![0; n * n],
            bbar: vec![0; n * n],
            w: 1,
            w_inv: 1,
            delta: vec![0; 1 << n],
        }
    }

    /// Compact encoding of everything but the biquandle and ring.
    pub(crate) fn search_key(&self) -> Vec<u8> {
        let wide = self.ring.modulus() > 256;
        let vals = [&self.a, &self.b, &self.abar, &self.bbar, &self.delta]
            .into_iter()
            .flatten()
            .chain(std::iter::once(&self.w));
        let mut out = Vec::new();
        for &v in vals {
            if wide {
                out.extend_from_slice(&v.to_le_bytes());
            } else {
                out.push(v as u8);
            }
        }
        out
    }

    /// Sets `(A, B, Ā, B̄)` at 0-based `(x, y)`.
    pub(crate) fn set_entry(&mut self, x: usize, y: usize, v: [u32; 4]) {
        let i = x * self.biquandle.order() + y;
        self.a[i] = v[0];
        self.b[i] = v[1];
        self.abar[i] = v[2];
        self.bbar[i] = v[3];
    }

    /// `w` must be a unit.
    pub(crate) fn set_params(&mut self, w: u32, delta: &[u32]) {
        self.w = w;
        self.w_inv = self.ring.inv_raw(w).expect("w is a unit");
        self.delta.copy_from_slice(delta);
    }

    /// Axiom (i) at `x` when `x == y`, and both type II axioms at `(x, y)`.
    /// These read only the coefficients at `(x, y)`.
    pub(crate) fn local_ok(&self, x: usize, y: usize, membership: Membership) -> bool {
        let mut report = ViolationReport::default();
        let mut sink = Sink::new(&mut report, &VerifyOptions::first_violation());
        let scope = self.full_scope();
        if x == y && self.check_i(x, scope, &mut sink).is_break() {
            return false;
        }
        self.check_ii(x, y, scope, membership, &mut sink).is_continue()
    }

    /// The type III axioms with elements and sets inside `scope`.
    pub(crate) fn iii_ok(&self, scope: ColorSet) -> bool {
        let mut report = ViolationReport::default();
        let mut sink = Sink::new(&mut report, &VerifyOptions::first_violation());
        self.check_iii(scope, &mut sink).is_continue()
    }

    pub fn tables(&self) -> CoefficientTables {
        let n = self.biquandle.order();
        let rows = |v: &[u32]| v.chunks(n).map(|r| r.to_vec()).collect();
        CoefficientTables {
            a: rows(&self.a),
            b: rows(&self.b),
            abar: rows(&self.abar),
            bbar: rows(&self.bbar),
        }
    }

    pub fn with_delta(&self, delta: Vec<u32>) -> Result<Self, BracketError> {
        Self::new(self.biquandle.clone(), self.ring, self.tables(), self.w, delta)
    }

    pub fn with_tables(&self, tables: CoefficientTables) -> Result<Self, BracketError> {
        Self::new(self.biquandle.clone(), self.ring, tables, self.w, self.delta.clone())
    }

    /// Bracket file text. Whitespace-insensitive: keywords and integers in
    /// this order.
    pub fn parse(text: &str) -> Result<Self, BracketError> {
        let mut toks = Tokens::new(text);
        let biquandle = Biquandle::read(&mut toks)?;
        let n = biquandle.order();
        toks.expect("ring")?;
        let line = toks.line();
        let m = toks.int("modulus")?;
        let ring = RingZm::new(u64::try_from(m).unwrap_or(0)).map_err(|e| ParseError::new(line, e.to_string()))?;
        let mut table = |name: &str| -> Result<Vec<Vec<u32>>, BracketError> {
            toks.expect(name)?;
            let line = toks.line();
            let t = toks.table(n, "coefficient")?;
            to_residues(t, m, line, name)
        };
        let tables = CoefficientTables {
            a: table("A")?,
            b: table("B")?,
            abar: table("Abar")?,
            bbar: table("Bbar")?,
        };
        toks.expect("w")?;
        let line = toks.line();
        let w = toks.int("w")?;
        let w = u32::try_from(w)
            .ok()
            .filter(|&v| (v as i64) < m)
            .ok_or_else(|| BracketError::Range(format!("line {line}: w = {w} outside 0..{m}")))?;
        toks.expect("delta")?;
        let line = toks.line();
        let mut delta = Vec::new();
        while let Some(t) = toks.peek() {
            if t.parse::<i64>().is_err() {
                break;
            }
            delta.push(toks.int("delta value")?);
        }
        if delta.len() != 1 << n {
            return Err(BracketError::Shape(format!(
                "line {line}: delta has {} entries, expected 2^{n} = {}",
                delta.len(),
                1 << n
            )));
        }
        let delta = to_residues(vec![delta], m, line, "delta")?.remove(0);
        toks.finish()?;
        Self::new(biquandle, ring, tables, w, delta)
    }

    pub fn serialize(&self) -> String {
        let mut out = self.biquandle.serialize();
        out.push_str(&format!("ring {}\n", self.ring.modulus()));
        let t = self.tables();
        for (name, rows) in [("A", t.a), ("B", t.b), ("Abar", t.abar), ("Bbar", t.bbar)] {
            out.push_str(name);
            out.push('\n');
            write_table(&mut out, rows);
        }
        out.push_str(&format!("w {}\n", self.w));
        let d: Vec<String> = self.delta.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("delta {}\n", d.join(" ")));
        out
    }
}

fn to_residues(t: Vec<Vec<i64>>, m: i64, line: usize, name: &str) -> Result<Vec<Vec<u32>>, BracketError> {
    t.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| {
                    if (0..m).contains(&v) {
                        Ok(v as u32)
                    } else {
                        Err(BracketError::Range(format!(
                            "near line {line}: {name} entry {v} outside 0..{m}"
                        )))
                    }
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Verification

/// Axiom tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii.i")]
    IiI,
    #[serde(rename = "ii.ii")]
    IiIi,
    #[serde(rename = "iii.i")]
    IiiI,
    #[serde(rename = "iii.ii")]
    IiiIi,
    #[serde(rename = "iii.iii")]
    IiiIii,
    #[serde(rename = "iii.iv")]
    IiiIv,
    #[serde(rename = "iii.v")]
    IiiV,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::I => "i",
            Axiom::IiI => "ii.i",
            Axiom::IiIi => "ii.ii",
            Axiom::IiiI => "iii.i",
            Axiom::IiiIi => "iii.ii",
            Axiom::IiiIii => "iii.iii",
            Axiom::IiiIv => "iii.iv",
            Axiom::IiiV => "iii.v",
        })
    }
}

/// One failed equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// Which equation of the axiom, counting from 1 in the order written.
    pub equation: u8,
    /// Witness elements `x` (and `y`, `z`), 1-based.
    pub elements: Vec<usize>,
    /// Witness sets `C` (or `C1, C2[, C3]`) as masks.
    pub sets: Vec<ColorSet>,
    pub lhs: u32,
    pub rhs: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z"];
        let elems: Vec<String> = self
            .elements
            .iter()
            .zip(names)
            .map(|(v, n)| format!("{n}={v}"))
            .collect();
        let sets: Vec<String> = if self.sets.len() == 1 {
            vec![format!("C={}", format_set(self.sets[0]))]
        } else {
            self.sets
                .iter()
                .enumerate()
                .map(|(i, s)| format!("C{}={}", i + 1, format_set(*s)))
                .collect()
        };
        write!(
            f,
            "({}) eq {} at {} {}: lhs {} != rhs {}",
            self.axiom,
            self.equation,
            elems.join(" "),
            sets.join(" "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
    /// True when checking stopped early because of the cap or
    /// first-violation mode.
    pub truncated: bool,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Membership rule for the first equation of each type II axiom.
///
/// The two type II axioms each have a "one closed component" equation whose
/// quantifier can be read with `C1 ∩ C2` or `C1 ∪ C2`. Tracing the two
/// possible closures of a reverse type II tangle shows that every arc of
/// the one-component closure carries both boundary colours, so the
/// intersection is the geometric condition for both axioms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    /// `∩` for (ii.i) and (ii.ii).
    #[default]
    Intersection,
    /// `∩` for (ii.i), `∪` for (ii.ii), as the axioms are usually stated.
    Definition,
    /// `∪` for (ii.i), `∩` for (ii.ii), as the derivation of the axioms
    /// from the moves states them.
    Derivation,
    /// `∪` for both: every set any of the readings quantifies over.
    Strict,
}

impl Membership {
    fn ii_i_union(self) -> bool {
        matches!(self, Membership::Derivation | Membership::Strict)
    }

    fn ii_ii_union(self) -> bool {
        matches!(self, Membership::Definition | Membership::Strict)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub membership: Membership,
    /// Stop after this many violations.
    pub cap: Option<usize>,
    /// Stop at the first violation.
    pub first_violation: bool,
}

impl VerifyOptions {
    pub fn first_violation() -> Self {
        Self {
            first_violation: true,
            ..Self::default()
        }
    }
}

/// Collects violations and decides when to stop.
pub(crate) struct Sink<'a> {
    report: &'a mut ViolationReport,
    limit: Option<usize>,
}

impl<'a> Sink<'a> {
    pub fn new(report: &'a mut ViolationReport, opts: &VerifyOptions) -> Self {
        let limit = if opts.first_violation { Some(1) } else { opts.cap };
        Self { report, limit }
    }

    fn push(&mut self, v: Violation) -> ControlFlow<()> {
        if self.limit == Some(0) {
            self.report.truncated = true;
            return ControlFlow::Break(());
        }
        self.report.violations.push(v);
        if self.limit.is_some_and(|l| self.report.violations.len() >= l) {
            self.report.truncated = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }
}

/// Supersets of `required` inside `scope`, ascending.
fn supersets(required: ColorSet, scope: ColorSet) -> impl Iterator<Item = ColorSet> {
    let free = scope & !required;
    let ok = required & !scope == 0;
    let mut t: Option<ColorSet> = if ok { Some(0) } else { None };
    std::iter::from_fn(move || {
        let cur = t?;
        t = if cur == free {
            None
        } else {
            Some(((cur | !free).wrapping_add(1)) & free)
        };
        Some(cur | required)
    })
}

fn elements(scope: ColorSet) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| scope >> i & 1 == 1)
}

#[inline]
fn bit(e: usize) -> ColorSet {
    1 << e
}

impl PowerBracket {
    pub fn full_scope(&self) -> ColorSet {
        ((1u64 << self.biquandle.order()) - 1) as ColorSet
    }

    /// Runs every axiom check in the order (i), (ii), (iii).
    pub fn verify(&self, opts: &VerifyOptions) -> ViolationReport {
        let mut report = ViolationReport::default();
        let mut sink = Sink::new(&mut report, opts);
        let scope = self.full_scope();
        let _ = self.check_all(scope, opts.membership, &mut sink);
        report
    }

    pub fn is_valid(&self) -> bool {
        self.verify(&VerifyOptions::first_violation()).is_empty()
    }

    pub(crate) fn check_all(&self, scope: ColorSet, membership: Membership, sink: &mut Sink<'_>) -> ControlFlow<()> {
        for x in elements(scope) {
            self.check_i(x, scope, sink)?;
        }
        for x in elements(scope) {
            for y in elements(scope) {
                self.check_ii(x, y, scope, membership, sink)?;
            }
        }
        self.check_iii(scope, sink)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.ring.modulus() as u64
    }

    /// Axiom (i) at `x` over sets inside `scope`.
    pub(crate) fn check_i(&self, x: usize, scope: ColorSet, sink: &mut Sink<'_>) -> ControlFlow<()> {
        let m = self.ring.modulus() as u64;
        let bq = &self.biquandle;
        let k = bq.u(x, x);
        let (a, b) = (self.raw(Table::A, x, x) as u64, self.raw(Table::B, x, x) as u64);
        let (ab, bb) = (self.raw(Table::Abar, x, x) as u64, self.raw(Table::Bbar, x, x) as u64);
        let (w, wi) = (self.w as u64, self.w_inv as u64);
        // First pair: x ∈ C, the kink adds x ▷̲ x. Second pair: x ▷̲ x ∈ C,
        // the kink adds x.
        for (eq, member, extra) in [(1u8, x, k), (3u8, k, x)] {
            for c in supersets(bit(member), scope) {
                let dc = self.d(c);
                let split = self.mul(dc, self.d(bit(extra)));
                let merged = self.d(c | bit(extra));
                for (e, (factor, coef_a, coef_b)) in [(w, a, b), (wi, ab, bb)].into_iter().enumerate() {
                    let lhs = factor * dc % m;
                    let rhs = (coef_a * split + coef_b * merged) % m;
                    if lhs != rhs {
                        sink.push(Violation {
                            axiom: Axiom::I,
                            equation: eq + e as u8,
                            elements: vec![x + 1],
                            sets: vec![c],
                            lhs: lhs as u32,
                            rhs: rhs as u32,
                        })?;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    /// Axioms (ii.i) and (ii.ii) at the pair `(x, y)`.
    pub(crate) fn check_ii(
        &self,
        x: usize,
        y: usize,
        scope: ColorSet,
        membership: Membership,
        sink: &mut Sink<'_>,
    ) -> ControlFlow<()> {
        let m = self.ring.modulus() as u64;
        let bq = &self.biquandle;
        let (a, b) = (self.raw(Table::A, x, y) as u64, self.raw(Table::B, x, y) as u64);
        let (ab, bb) = (self.raw(Table::Abar, x, y) as u64, self.raw(Table::Bbar, x, y) as u64);
        let (aab, bab, abb, bbb) = (a * ab % m, b * ab % m, a * bb % m, b * bb % m);
        let (xu, yo) = (bq.u(x, y), bq.o(y, x));
        let inner = bit(xu) | bit(yo);
        let outer = bit(x) | bit(y);

        let mut emit = |axiom, equation, c1: ColorSet, c2: ColorSet, lhs: u64, rhs: u64| {
            if lhs % m != rhs % m {
                sink.push(Violation {
                    axiom,
                    equation,
                    elements: vec![x + 1, y + 1],
                    sets: vec![c1, c2],
                    lhs: (lhs % m) as u32,
                    rhs: (rhs % m) as u32,
                })
            } else {
                ControlFlow::Continue(())
            }
        };

        // (ii.i), one-component closure.
        let union_i = membership.ii_i_union();
        for c1 in subsets(scope) {
            let c2_iter: Box<dyn Iterator<Item = ColorSet>> = if union_i {
                Box::new(subsets(scope).filter(move |c2| (c1 | c2) & outer == outer))
            } else if c1 & outer == outer {
                Box::new(supersets(outer, scope))
            } else {
                Box::new(std::iter::empty())
            };
            for c2 in c2_iter {
                let u = c1 | c2;
                let (d1, d2) = (self.d(c1), self.d(c2));
                let rhs = aab * (self.mul(d1, d2) * self.d(inner) % m)
                    + bab * (self.d(c1 | inner) * d2 % m)
                    + abb * (d1 * self.d(c2 | inner) % m)
                    + bbb * self.d(u | inner);
                emit(Axiom::IiI, 1, c1, c2, self.d(u), rhs)?;
            }
        }
        // (ii.i), two-component closure.
        for c1 in supersets(bit(x), scope) {
            for c2 in supersets(bit(y), scope) {
                let u = c1 | c2;
                let lhs = self.mul(self.d(c1), self.d(c2));
                let rhs = aab * self.mul(self.d(u), self.d(inner))
                    + (bab + abb) * self.d(u | inner)
                    + bbb * self.mul(self.d(c1 | bit(yo)), self.d(c2 | bit(xu)));
                emit(Axiom::IiI, 2, c1, c2, lhs, rhs)?;
            }
        }
        // (ii.ii), one-component closure.
        let union_ii = membership.ii_ii_union();
        for c1 in subsets(scope) {
            let c2_iter: Box<dyn Iterator<Item = ColorSet>> = if union_ii {
                Box::new(subsets(scope).filter(move |c2| (c1 | c2) & inner == inner))
            } else if c1 & inner == inner {
                Box::new(supersets(inner, scope))
            } else {
                Box::new(std::iter::empty())
            };
            for c2 in c2_iter {
                let u = c1 | c2;
                let (d1, d2) = (self.d(c1), self.d(c2));
                let rhs = aab * (self.mul(d1, d2) * self.d(outer) % m)
                    + abb * (self.d(c1 | outer) * d2 % m)
                    + bab * (d1 * self.d(c2 | outer) % m)
                    + bbb * self.d(u | outer);
                emit(Axiom::IiIi, 1, c1, c2, self.d(u), rhs)?;
            }
        }
        // (ii.ii), two-component closure.
        for c1 in supersets(bit(yo), scope) {
            for c2 in supersets(bit(xu), scope) {
                let u = c1 | c2;
                let lhs = self.mul(self.d(c1), self.d(c2));
                let rhs = aab * self.mul(self.d(u), self.d(outer))
                    + (abb + bab) * self.d(u | outer)
                    + bbb * self.mul(self.d(c1 | bit(x)), self.d(c2 | bit(y)));
                emit(Axiom::IiIi, 2, c1, c2, lhs, rhs)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Axioms (iii.i)–(iii.v) for every triple in `scope`.
    pub(crate) fn check_iii(&self, scope: ColorSet, sink: &mut Sink<'_>) -> ControlFlow<()> {
        for x in elements(scope) {
            for y in elements(scope) {
                for z in elements(scope) {
                    self.check_iii_at(x, y, z, scope, sink)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    pub(crate) fn check_iii_at(
        &self,
        x: usize,
        y: usize,
        z: usize,
        scope: ColorSet,
        sink: &mut Sink<'_>,
    ) -> ControlFlow<()> {
        let m = self.ring.modulus() as u64;
        let bq = &self.biquandle;
        let (u, o) = (|p, q| bq.u(p, q), |p, q| bq.o(p, q));
        // Colours produced on each side of the move.
        let (xy, zy) = (u(x, y), o(z, y));
        let (zx, xz) = (o(z, x), u(x, z));
        let (yx, yz) = (o(y, x), u(y, z));
        let r = o(yz, xz);
        let named = Named {
            x,
            z,
            t1: yx,
            t2: yz,
            t3: o(zx, yx),
            t4: u(xz, yz),
        };
        let lhs_extra = [bit(y), bit(xy), bit(zy)];
        let rhs_extra = [bit(zx), bit(xz), bit(r)];
        // Coefficient products indexed by the AAA..BBB term order
        // (bit 2 = first factor is B, bit 1 = second, bit 0 = third).
        let tab = |t: bool| if t { Table::B } else { Table::A };
        let mut lcoef = [0u64; 8];
        let mut rcoef = [0u64; 8];
        for k in 0..8 {
            let (f, g, h) = (tab(k & 4 != 0), tab(k & 2 != 0), tab(k & 1 != 0));
            lcoef[k] = self.raw(f, x, y) as u64 * self.raw(g, y, z) as u64 % m * self.raw(h, xy, zy) as u64 % m;
            rcoef[k] = self.raw(f, x, z) as u64 * self.raw(g, yx, zx) as u64 % m * self.raw(h, xz, yz) as u64 % m;
        }
        for eq in &TYPE_III {
            let req = eq
                .membership
                .map(|pair| pair.iter().fold(0, |acc, role| acc | bit(named.get(*role))));
            for c1 in supersets(req[0], scope) {
                for c2 in supersets(req[1], scope) {
                    for c3 in supersets(req[2], scope) {
                        let cs = [c1, c2, c3];
                        let side = |terms: &[Term; 8], extra: &[ColorSet; 3], coef: &[u64; 8]| -> u64 {
                            let mut acc = 0u64;
                            for (k, term) in terms.iter().enumerate() {
                                let mut prod = coef[k];
                                for f in term.iter().flatten() {
                                    prod = prod * self.d(f.resolve(&cs, extra)) % m;
                                }
                                acc += prod;
                            }
                            acc % m
                        };
                        let lhs = side(&eq.lhs, &lhs_extra, &lcoef);
                        let rhs = side(&eq.rhs, &rhs_extra, &rcoef);
                        if lhs != rhs {
                            sink.push(Violation {
                                axiom: eq.axiom,
                                equation: 1,
                                elements: vec![x + 1, y + 1, z + 1],
                                sets: cs.to_vec(),
                                lhs: lhs as u32,
                                rhs: rhs as u32,
                            })?;
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }
}

fn subsets(scope: ColorSet) -> impl Iterator<Item = ColorSet> {
    supersets(0, scope)
}

// ---------------------------------------------------------------------------
// Type III equations as data.
//
// Each side is eight terms in the order AAA, AAB, ABA, ABB, BAA, BAB, BBA,
// BBB. A term is a product of up to four δ factors; each factor is a union
// of some of C1, C2, C3 and some of three extra colours. On the left the
// extras are y, x ▷̲ y, z ▷̄ y; on the right they are z ▷̄ x, x ▷̲ z and
// (y ▷̲ z) ▷̄ (x ▷̲ z).

#[derive(Debug, Clone, Copy)]
enum Role {
    X,
    Z,
    T1,
    T2,
    T3,
    T4,
}

/// The elements the membership conditions mention:
/// `t1 = y ▷̄ x`, `t2 = y ▷̲ z`, `t3 = (z ▷̄ x) ▷̄ (y ▷̄ x)`,
/// `t4 = (x ▷̲ z) ▷̲ (y ▷̲ z)`.
struct Named {
    x: usize,
    z: usize,
    t1: usize,
    t2: usize,
    t3: usize,
    t4: usize,
}

impl Named {
    fn get(&self, r: Role) -> usize {
        match r {
            Role::X => self.x,
            Role::Z => self.z,
            Role::T1 => self.t1,
            Role::T2 => self.t2,
            Role::T3 => self.t3,
            Role::T4 => self.t4,
        }
    }
}

/// A δ factor: bits 0..3 of `sets` pick C1, C2, C3; bits 0..3 of `extra`
/// pick the side's extra colours.
#[derive(Debug, Clone, Copy)]
struct Factor {
    sets: u8,
    extra: u8,
}

impl Factor {
    #[inline]
    fn resolve(self, cs: &[ColorSet; 3], extra: &[ColorSet; 3]) -> ColorSet {
        let mut s = 0;
        for i in 0..3 {
            if self.sets >> i & 1 == 1 {
                s |= cs[i];
            }
            if self.extra >> i & 1 == 1 {
                s |= extra[i];
            }
        }
        s
    }
}

type Term = [Option<Factor>; 4];

struct TypeIII {
    axiom: Axiom,
    membership: [[Role; 2]; 3],
    lhs: [Term; 8],
    rhs: [Term; 8],
}

const fn f(sets: u8, extra: u8) -> Option<Factor> {
    Some(Factor { sets, extra })
}

const fn t1(a: Option<Factor>) -> Term {
    [a, None, None, None]
}
const fn t2(a: Option<Factor>, b: Option<Factor>) -> Term {
    [a, b, None, None]
}
const fn t3(a: Option<Factor>, b: Option<Factor>, c: Option<Factor>) -> Term {
    [a, b, c, None]
}
const fn t4(a: Option<Factor>, b: Option<Factor>, c: Option<Factor>, d: Option<Factor>) -> Term {
    [a, b, c, d]
}

// Set selectors.
const C1: u8 = 1;
const C2: u8 = 2;
const C3: u8 = 4;
const C12: u8 = C1 | C2;
const C13: u8 = C1 | C3;
const C23: u8 = C2 | C3;
const C123: u8 = 7;
// Extra selectors. Left: Y = y, XY = x ▷̲ y, ZY = z ▷̄ y.
// Right: ZX = z ▷̄ x, XZ = x ▷̲ z, R = (y ▷̲ z) ▷̄ (x ▷̲ z).
const Y: u8 = 1;
const XY: u8 = 2;
const ZY: u8 = 4;
const ZX: u8 = 1;
const XZ: u8 = 2;
const R: u8 = 4;
const ALL: u8 = 7;
const NONE: u8 = 0;

use Role::{T1 as RT1, T2 as RT2, T3 as RT3, T4 as RT4, X as RX, Z as RZ};

const TYPE_III: [TypeIII; 5] = [
    TypeIII {
        axiom: Axiom::IiiI,
        membership: [[RX, RZ], [RT1, RT2], [RT3, RT4]],
        lhs: [
            t3(f(C1, Y), f(C2, XY | ZY), f(C3, NONE)),
            t2(f(C1, Y), f(C23, XY | ZY)),
            t2(f(C12, ALL), f(C3, NONE)),
            t1(f(C123, ALL)),
            t2(f(C12, ALL), f(C3, NONE)),
            t1(f(C123, ALL)),
            t3(f(C12, NONE), f(C3, NONE), f(0, ALL)),
            t2(f(C12, NONE), f(C3, ALL)),
        ],
        rhs: [
            t3(f(C1, NONE), f(C2, ZX | XZ), f(C3, R)),
            t2(f(C1, NONE), f(C23, ALL)),
            t2(f(C1, NONE), f(C23, ALL)),
            t3(f(C1, NONE), f(C23, NONE), f(0, ALL)),
            t2(f(C12, ZX | XZ), f(C3, R)),
            t1(f(C123, ALL)),
            t1(f(C123, ALL)),
            t2(f(C1, ALL), f(C23, NONE)),
        ],
    },
    TypeIII {
        axiom: Axiom::IiiIi,
        membership: [[RX, RT1], [RT3, RT4], [RZ, RT2]],
        lhs: [
            t2(f(C13, ALL), f(C2, NONE)),
            t1(f(C123, ALL)),
            t3(f(C1, ALL), f(C2, NONE), f(C3, NONE)),
            t2(f(C12, ALL), f(C3, NONE)),
            t3(f(C1, NONE), f(C2, NONE), f(C3, ALL)),
            t2(f(C1, NONE), f(C23, ALL)),
            t4(f(C1, NONE), f(C2, NONE), f(C3, NONE), f(0, ALL)),
            t3(f(C1, NONE), f(C2, ALL), f(C3, NONE)),
        ],
        rhs: [
            t2(f(C13, ZX | XZ), f(C2, R)),
            t1(f(C123, ALL)),
            t1(f(C123, ALL)),
            t2(f(C123, NONE), f(0, ALL)),
            t3(f(C1, ZX), f(C2, R), f(C3, XZ)),
            t2(f(C1, ZX), f(C23, XZ | R)),
            t2(f(C12, ZX | R), f(C3, XZ)),
            t1(f(C123, ALL)),
        ],
    },
    TypeIII {
        axiom: Axiom::IiiIii,
        membership: [[RX, RZ], [RT1, RT3], [RT2, RT4]],
        lhs: [
            t2(f(C1, Y), f(C23, XY | ZY)),
            t3(f(C1, Y), f(C2, XY), f(C3, ZY)),
            t1(f(C123, ALL)),
            t2(f(C13, Y | ZY), f(C2, XY)),
            t1(f(C123, ALL)),
            t2(f(C12, Y | XY), f(C3, ZY)),
            t2(f(C123, NONE), f(0, ALL)),
            t1(f(C123, ALL)),
        ],
        rhs: [
            t2(f(C1, NONE), f(C23, ALL)),
            t3(f(C1, NONE), f(C2, ALL), f(C3, NONE)),
            t3(f(C1, NONE), f(C2, NONE), f(C3, ALL)),
            t4(f(C1, NONE), f(C2, NONE), f(C3, NONE), f(0, ALL)),
            t1(f(C123, ALL)),
            t2(f(C12, ALL), f(C3, NONE)),
            t2(f(C13, ALL), f(C2, NONE)),
            t3(f(C1, ALL), f(C2, NONE), f(C3, NONE)),
        ],
    },
    TypeIII {
        axiom: Axiom::IiiIv,
        membership: [[RX, RT4], [RT1, RT3], [RZ, RT2]],
        lhs: [
            t1(f(C123, ALL)),
            t2(f(C13, Y | ZY), f(C2, XY)),
            t2(f(C12, ALL), f(C3, NONE)),
            t3(f(C1, Y | ZY), f(C2, XY), f(C3, NONE)),
            t2(f(C12, NONE), f(C3, ALL)),
            t1(f(C123, ALL)),
            t3(f(C12, NONE), f(C3, NONE), f(0, ALL)),
            t2(f(C12, ALL), f(C3, NONE)),
        ],
        rhs: [
            t1(f(C123, ALL)),
            t2(f(C13, NONE), f(C2, ALL)),
            t2(f(C13, ALL), f(C2, NONE)),
            t3(f(C13, NONE), f(C2, NONE), f(0, ALL)),
            t2(f(C12, ZX | R), f(C3, XZ)),
            t1(f(C123, ALL)),
            t3(f(C1, ZX | R), f(C2, NONE), f(C3, XZ)),
            t2(f(C13, ALL), f(C2, NONE)),
        ],
    },
    TypeIII {
        axiom: Axiom::IiiV,
        membership: [[RX, RT1], [RZ, RT3], [RT2, RT4]],
        lhs: [
            t1(f(C123, ALL)),
            t2(f(C12, Y | XY), f(C3, ZY)),
            t2(f(C1, ALL), f(C23, NONE)),
            t1(f(C123, ALL)),
            t2(f(C1, NONE), f(C23, ALL)),
            t3(f(C1, NONE), f(C2, Y | XY), f(C3, ZY)),
            t3(f(C1, NONE), f(C23, NONE), f(0, ALL)),
            t2(f(C1, NONE), f(C23, ALL)),
        ],
        rhs: [
            t1(f(C123, ALL)),
            t2(f(C12, ALL), f(C3, NONE)),
            t2(f(C12, NONE), f(C3, ALL)),
            t3(f(C12, NONE), f(C3, NONE), f(0, ALL)),
            t2(f(C1, ZX), f(C23, XZ | R)),
            t3(f(C1, ZX), f(C2, XZ | R), f(C3, NONE)),
            t1(f(C123, ALL)),
            t2(f(C12, ALL), f(C3, NONE)),
        ],
    },
];
