//! Finite biquandles stored as operation tables.
//!
//! Elements are `1..=n` at the public surface. Internally the tables are
//! flattened and 0-based; the `pub(crate)` accessors [`Biquandle::u`] and
//! [`Biquandle::o`] expose that form to the colouring and verification loops.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modring::{RingElem, RingError};
use crate::text::{write_table, ParseError, Tokens};

/// Which biquandle axiom a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BiquandleAxiom {
    /// `x ▷̲ x = x ▷̄ x`; witness `(x)`.
    Idempotence,
    /// `x ↦ x ▷̲ y` is not a bijection; witness `(y)`.
    UnderColumn,
    /// `x ↦ x ▷̄ y` is not a bijection; witness `(y)`.
    OverColumn,
    /// The switch map `S` is not a bijection; witness `(x, y)` is a pair
    /// whose image is hit twice.
    Switch,
    /// First exchange law (all under); witness `(x, y, z)`.
    ExchangeUnder,
    /// Second exchange law (mixed); witness `(x, y, z)`.
    ExchangeMixed,
    /// Third exchange law (all over); witness `(x, y, z)`.
    ExchangeOver,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: BiquandleAxiom,
    /// 1-based witness elements.
    pub witness: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(|v| v.to_string()).collect();
        write!(f, "{:?} at ({})", self.axiom, w.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiquandleError {
    #[error("malformed tables: {0}")]
    Malformed(String),
    #[error("biquandle axioms fail ({} violations, first: {})", .0.len(), .0[0])]
    Axioms(Vec<AxiomViolation>),
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A validated finite biquandle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Biquandle {
    n: usize,
    under: Vec<usize>,
    over: Vec<usize>,
}

impl Biquandle {
    /// Validates 1-based tables (`under[x-1][y-1] = x ▷̲ y`).
    pub fn validate(under: &[Vec<usize>], over: &[Vec<usize>]) -> Result<Self, BiquandleError> {
        let bq = Self::from_tables_unchecked(under, over)?;
        let violations = bq.violations();
        if violations.is_empty() {
            Ok(bq)
        } else {
            Err(BiquandleError::Axioms(violations))
        }
    }

    /// Checks shape and range only.
    fn from_tables_unchecked(under: &[Vec<usize>], over: &[Vec<usize>]) -> Result<Self, BiquandleError> {
        let n = under.len();
        if n == 0 {
            return Err(BiquandleError::Malformed("empty table".into()));
        }
        if over.len() != n {
            return Err(BiquandleError::Malformed(format!(
                "under table has {n} rows but over table has {}",
                over.len()
            )));
        }
        let flat = |t: &[Vec<usize>], name: &str| -> Result<Vec<usize>, BiquandleError> {
            let mut out = Vec::with_capacity(n * n);
            for (i, row) in t.iter().enumerate() {
                if row.len() != n {
                    return Err(BiquandleError::Malformed(format!(
                        "{name} row {} has {} entries, expected {n}",
                        i + 1,
                        row.len()
                    )));
                }
                for &v in row {
                    if !(1..=n).contains(&v) {
                        return Err(BiquandleError::Malformed(format!(
                            "{name} row {} has entry {v} outside 1..={n}",
                            i + 1
                        )));
                    }
                    out.push(v - 1);
                }
            }
            Ok(out)
        };
        Ok(Self {
            n,
            under: flat(under, "under")?,
            over: flat(over, "over")?,
        })
    }

    /// Every axiom violation, in a fixed order: axiom 1, then axiom 2, then
    /// the three exchange laws, each with witnesses ascending.
    fn violations(&self) -> Vec<AxiomViolation> {
        let n = self.n;
        let mut out = Vec::new();
        let mut push = |axiom, witness: &[usize]| {
            out.push(AxiomViolation {
                axiom,
                witness: witness.iter().map(|v| v + 1).collect(),
            })
        };
        for x in 0..n {
            if self.u(x, x) != self.o(x, x) {
                push(BiquandleAxiom::Idempotence, &[x]);
            }
        }
        for y in 0..n {
            if !is_bijection((0..n).map(|x| self.u(x, y)), n) {
                push(BiquandleAxiom::UnderColumn, &[y]);
            }
            if !is_bijection((0..n).map(|x| self.o(x, y)), n) {
                push(BiquandleAxiom::OverColumn, &[y]);
            }
        }
        let mut seen = vec![usize::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                let (a, b) = self.switch0(x, y);
                let slot = &mut seen[a * n + b];
                if *slot != usize::MAX {
                    push(BiquandleAxiom::Switch, &[x, y]);
                } else {
                    *slot = x * n + y;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (u, o) = (|a, b| self.u(a, b), |a, b| self.o(a, b));
                    if u(u(x, y), u(z, y)) != u(u(x, z), o(y, z)) {
                        push(BiquandleAxiom::ExchangeUnder, &[x, y, z]);
                    }
                    if o(u(x, y), u(z, y)) != u(o(x, z), o(y, z)) {
                        push(BiquandleAxiom::ExchangeMixed, &[x, y, z]);
                    }
                    if o(o(x, y), o(z, y)) != o(o(x, z), u(y, z)) {
                        push(BiquandleAxiom::ExchangeOver, &[x, y, z]);
                    }
                }
            }
        }
        out
    }

    /// The constant action biquandle `x ▷̲ y = x ▷̄ y = σ(x)`.
    pub fn constant_action(sigma: &[usize]) -> Result<Self, BiquandleError> {
        let n = sigma.len();
        if n == 0 || !is_bijection(sigma.iter().map(|&v| v.wrapping_sub(1)), n) {
            return Err(BiquandleError::NotAPermutation(n));
        }
        let t: Vec<Vec<usize>> = sigma.iter().map(|&s| vec![s; n]).collect();
        Self::validate(&t, &t)
    }

    /// The Alexander biquandle on `Z/m`: `x ▷̲ y = tx + (s−t)y`, `x ▷̄ y = sx`.
    /// Element `i` encodes the residue `i − 1`.
    pub fn alexander(s: RingElem, t: RingElem) -> Result<Self, BiquandleError> {
        let s = s.inv().map(|_| s)?;
        let t = t.inv().map(|_| t)?;
        let ring = s.ring();
        if t.modulus() != ring.modulus() {
            return Err(RingError::ModulusMismatch(s.modulus(), t.modulus()).into());
        }
        let m = ring.modulus() as usize;
        let (sv, tv) = (s.value(), t.value());
        let s_minus_t = ring.sub_raw(sv, tv);
        let mut under = vec![vec![0; m]; m];
        let mut over = vec![vec![0; m]; m];
        for x in 0..m {
            for y in 0..m {
                let ux = ring.add_raw(ring.mul_raw(tv, x as u32), ring.mul_raw(s_minus_t, y as u32));
                under[x][y] = ux as usize + 1;
                over[x][y] = ring.mul_raw(sv, x as u32) as usize + 1;
            }
        }
        Self::validate(&under, &over)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `x ▷̲ y`, 1-based.
    pub fn under(&self, x: usize, y: usize) -> usize {
        self.u(x - 1, y - 1) + 1
    }

    /// `x ▷̄ y`, 1-based.
    pub fn over(&self, x: usize, y: usize) -> usize {
        self.o(x - 1, y - 1) + 1
    }

    #[inline]
    pub(crate) fn u(&self, x: usize, y: usize) -> usize {
        self.under[x * self.n + y]
    }

    #[inline]
    pub(crate) fn o(&self, x: usize, y: usize) -> usize {
        self.over[x * self.n + y]
    }

    fn switch0(&self, x: usize, y: usize) -> (usize, usize) {
        (self.o(y, x), self.u(x, y))
    }

    /// `S(x, y) = (y ▷̄ x, x ▷̲ y)`, 1-based.
    pub fn switch(&self, x: usize, y: usize) -> (usize, usize) {
        let (a, b) = self.switch0(x - 1, y - 1);
        (a + 1, b + 1)
    }

    /// Inverse of the switch map as an `n × n` table indexed by the image
    /// pair (1-based in and out).
    pub fn switch_inverse(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.n;
        let mut inv = vec![vec![(0, 0); n]; n];
        for x in 0..n {
            for y in 0..n {
                let (a, b) = self.switch0(x, y);
                inv[a][b] = (x + 1, y + 1);
            }
        }
        inv
    }

    /// 1-based tables, row `x`, column `y`.
    pub fn under_table(&self) -> Vec<Vec<usize>> {
        self.under
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v + 1).collect())
            .collect()
    }

    pub fn over_table(&self) -> Vec<Vec<usize>> {
        self.over
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v + 1).collect())
            .collect()
    }

    /// Finest partition of the elements closed under `x ~ x ▷̲ y` and
    /// `x ~ x ▷̄ y`. Blocks are sorted, and ordered by their least element.
    pub fn orbit_decomposition(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut uf = crate::unionfind::UnionFind::new(n);
        for x in 0..n {
            for y in 0..n {
                uf.union(x, self.u(x, y));
                uf.union(x, self.o(x, y));
            }
        }
        uf.classes()
            .into_iter()
            .map(|b| b.into_iter().map(|v| v + 1).collect())
            .collect()
    }

    /// Orbit blocks as bitmasks over 0-based elements.
    pub(crate) fn orbit_masks(&self) -> Vec<u32> {
        self.orbit_decomposition()
            .iter()
            .map(|b| b.iter().fold(0u32, |m, &x| m | 1 << (x - 1)))
            .collect()
    }

    /// The induced biquandle on `block`, relabelled to `1..=block.len()` in
    /// ascending order, or `None` if the block is not closed under both
    /// operations.
    pub fn restrict(&self, block: &[usize]) -> Option<Biquandle> {
        let mut elems = block.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let pos = |v: usize| elems.iter().position(|&e| e == v);
        let mut under = Vec::new();
        let mut over = Vec::new();
        for &x in &elems {
            let mut ur = Vec::new();
            let mut or = Vec::new();
            for &y in &elems {
                ur.push(pos(self.under(x, y))? + 1);
                or.push(pos(self.over(x, y))? + 1);
            }
            under.push(ur);
            over.push(or);
        }
        Biquandle::validate(&under, &over).ok()
    }

    pub fn parse(text: &str) -> Result<Self, BiquandleError> {
        let mut toks = Tokens::new(text);
        let bq = Self::read(&mut toks)?;
        toks.finish()?;
        Ok(bq)
    }

    pub(crate) fn read(toks: &mut Tokens<'_>) -> Result<Self, BiquandleError> {
        toks.expect("biquandle")?;
        let line = toks.line();
        let n = toks.uint("element count")?;
        if n == 0 || n > 16 {
            return Err(ParseError::new(line, format!("element count {n} outside 1..=16")).into());
        }
        let conv = |t: Vec<Vec<i64>>| -> Vec<Vec<usize>> {
            t.into_iter()
                .map(|r| r.into_iter().map(|v| usize::try_from(v).unwrap_or(0)).collect())
                .collect()
        };
        let under = conv(toks.table(n, "table entry")?);
        let over = conv(toks.table(n, "table entry")?);
        Self::validate(&under, &over)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("biquandle {}\n", self.n);
        write_table(&mut out, self.under_table());
        write_table(&mut out, self.over_table());
        out
    }
}

fn is_bijection(values: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut hit = vec![false; n];
    let mut count = 0;
    for v in values {
        if v >= n || hit[v] {
            return false;
        }
        hit[v] = true;
        count += 1;
    }
    count == n
}
