//! The power bracket state sum of a coloured diagram and the multiset
//! invariant it induces.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biquandle::Biquandle;
use crate::diagram::{join_smoothing, LinkDiagram, Sign, Smoothing};
use crate::homset::{enumerate_colorings, Coloring};
use crate::modring::RingElem;
use crate::powerbracket::{PowerBracket, Table};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateSumError {
    #[error("the coloring does not satisfy the crossing relations of this diagram")]
    InvalidColoring,
    #[error("the bracket is defined over a different biquandle")]
    BiquandleMismatch,
    #[error("state has {got} smoothings, diagram has {expected} crossings")]
    ChoiceLength { got: usize, expected: usize },
    #[error("{0} crossings is too many to enumerate states")]
    TooManyCrossings(usize),
}

/// Largest crossing count [`evaluate`] accepts.
pub const MAX_CROSSINGS: usize = 30;

/// Per-coloring data shared by every state.
struct Prepared<'a> {
    d: &'a LinkDiagram,
    b: &'a PowerBracket,
    /// Colour mask of each semiarc.
    arc_bits: Vec<u32>,
    /// `[oriented, trace]` coefficient of each crossing.
    coef: Vec<[u64; 2]>,
    /// `w^(n − p)` times the δ of every free loop.
    prefactor: u64,
}

impl<'a> Prepared<'a> {
    fn new(d: &'a LinkDiagram, c: &Coloring, b: &'a PowerBracket) -> Result<Self, StateSumError> {
        if !c.is_valid(d, b.biquandle()) {
            return Err(StateSumError::InvalidColoring);
        }
        if d.crossing_count() > MAX_CROSSINGS {
            return Err(StateSumError::TooManyCrossings(d.crossing_count()));
        }
        let ring = b.ring();
        let m = ring.modulus() as u64;
        let arc_bits: Vec<u32> = c.arcs.iter().map(|&v| 1 << (v - 1)).collect();
        let coef = d
            .crossings()
            .iter()
            .zip(d.dense_ports())
            .map(|(cr, p)| {
                let (x, y) = (c.arcs[p[0]] - 1, c.arcs[p[1]] - 1);
                let (o, t) = match cr.sign {
                    Sign::Positive => (Table::A, Table::B),
                    Sign::Negative => (Table::Abar, Table::Bbar),
                };
                [b.raw(o, x, y) as u64, b.raw(t, x, y) as u64]
            })
            .collect();
        let exponent = d.negative_count() as i64 - d.positive_count() as i64;
        let mut prefactor = ring.pow_raw(b.w().value(), exponent).expect("w is a unit") as u64;
        for &l in &c.loops {
            prefactor = prefactor * b.d(1 << (l - 1)) % m;
        }
        Ok(Self {
            d,
            b,
            arc_bits,
            coef,
            prefactor,
        })
    }

    /// Contribution of the state whose bit `i` is set when crossing `i`
    /// takes the trace smoothing.
    fn state(&self, state: u64, uf: &mut UnionFind, masks: &mut [u32]) -> u64 {
        let m = self.b.ring().modulus() as u64;
        let mut acc = self.prefactor;
        uf.reset(self.arc_bits.len());
        for (i, p) in self.d.dense_ports().iter().enumerate() {
            let trace = state >> i & 1 == 1;
            acc = acc * self.coef[i][trace as usize] % m;
            let s = if trace { Smoothing::Trace } else { Smoothing::Oriented };
            join_smoothing(uf, p, s);
        }
        if acc == 0 {
            return 0;
        }
        masks.fill(0);
        for (s, bits) in self.arc_bits.iter().enumerate() {
            masks[uf.find(s)] |= bits;
        }
        for &mask in masks.iter().filter(|&&mask| mask != 0) {
            acc = acc * self.b.d(mask) % m;
        }
        acc
    }

    fn total(&self) -> u64 {
        let m = self.b.ring().modulus() as u64;
        let k = self.arc_bits.len();
        let mut uf = UnionFind::new(k);
        let mut masks = vec![0u32; k];
        let mut sum = 0u64;
        for state in 0..1u64 << self.coef.len() {
            sum = (sum + self.state(state, &mut uf, &mut masks)) % m;
        }
        sum
    }
}

/// The state sum `β` of `d` coloured by `c`.
pub fn evaluate(d: &LinkDiagram, c: &Coloring, b: &PowerBracket) -> Result<RingElem, StateSumError> {
    let p = Prepared::new(d, c, b)?;
    Ok(b.ring().elem(p.total() as i64))
}

/// One Kauffman state's term, including the writhe correction.
pub fn state_contribution(
    d: &LinkDiagram,
    c: &Coloring,
    b: &PowerBracket,
    choice: &[Smoothing],
) -> Result<RingElem, StateSumError> {
    if choice.len() != d.crossing_count() {
        return Err(StateSumError::ChoiceLength {
            got: choice.len(),
            expected: d.crossing_count(),
        });
    }
    let p = Prepared::new(d, c, b)?;
    let state = choice
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == Smoothing::Trace)
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    let k = d.semiarcs().len();
    let v = p.state(state, &mut UnionFind::new(k), &mut vec![0; k]);
    Ok(b.ring().elem(v as i64))
}

/// The multiset of state-sum values over all colourings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    /// Residue to multiplicity.
    pub multiset: BTreeMap<u32, u64>,
    pub modulus: u32,
}

impl InvariantResult {
    pub fn total(&self) -> u64 {
        self.multiset.values().sum()
    }

    /// `Σ u^β` with like terms collected, e.g. `8 + 4u^3 + 4u^4`.
    pub fn to_polynomial(&self) -> String {
        to_polynomial(self)
    }
}

impl fmt::Display for InvariantResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polynomial())
    }
}

pub fn invariant(d: &LinkDiagram, x: &Biquandle, b: &PowerBracket) -> Result<InvariantResult, StateSumError> {
    if x != b.biquandle() {
        return Err(StateSumError::BiquandleMismatch);
    }
    let values: Vec<u32> = enumerate_colorings(d, x)
        .par_iter()
        .map(|c| evaluate(d, c, b).map(|v| v.value()))
        .collect::<Result<_, _>>()?;
    let mut multiset = BTreeMap::new();
    for v in values {
        *multiset.entry(v).or_insert(0) += 1;
    }
    Ok(InvariantResult {
        multiset,
        modulus: b.ring().modulus(),
    })
}

pub fn to_polynomial(r: &InvariantResult) -> String {
    let terms: Vec<String> = r
        .multiset
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(&e, &k)| match (e, k) {
            (0, k) => k.to_string(),
            (1, 1) => "u".to_string(),
            (1, k) => format!("{k}u"),
            (e, 1) => format!("u^{e}"),
            (e, k) => format!("{k}u^{e}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}
