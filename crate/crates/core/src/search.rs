//! Search for power brackets over a fixed biquandle and modulus.
//!
//! Axiom (i) at `x` reads only the coefficients at `(x, x)`, and the type II
//! axioms at `(x, y)` read only those at `(x, y)`. Once `w` and `δ` are
//! fixed, each pair therefore has its own short list of admissible
//! coefficient quadruples and only the type III axioms couple the pairs.
//! Both modes build on that split:
//!
//! * exhaustive mode walks every `(w, δ)` with `δ(∅) = 0` and every
//!   combination of the per-pair lists;
//! * randomized mode samples `(w, δ)`, solves the per-pair lists, and either
//!   walks their product when it is small or draws random combinations.
//!   Type III is checked on each orbit block before the whole biquandle.
//!
//! Every emitted bracket has passed the full verifier.

use std::collections::HashSet;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::biquandle::Biquandle;
use crate::modring::{RingError, RingZm};
use crate::powerbracket::{Membership, PowerBracket, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Randomized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub biquandle: Biquandle,
    pub modulus: u64,
    pub mode: Mode,
    /// Required in randomized mode.
    pub seed: Option<u64>,
    /// Candidate budget. Required in randomized mode; ignored by exhaustive
    /// mode, which always finishes.
    pub max_candidates: Option<u64>,
    /// Stop after this many distinct brackets.
    pub max_results: Option<usize>,
    pub membership: Membership,
    /// Skip `δ = 0` on every nonempty set. Such a `δ` satisfies every axiom
    /// whatever the coefficients are, so it floods the output.
    pub skip_trivial: bool,
    /// Check type III on each orbit block before the whole biquandle.
    pub block_filter: bool,
    /// Tested first and emitted if valid.
    pub initial: Option<PowerBracket>,
    pub jobs: usize,
}

impl SearchConfig {
    pub fn exhaustive(biquandle: Biquandle, modulus: u64) -> Self {
        Self {
            biquandle,
            modulus,
            mode: Mode::Exhaustive,
            seed: None,
            max_candidates: None,
            max_results: None,
            membership: Membership::default(),
            skip_trivial: false,
            block_filter: true,
            initial: None,
            jobs: 1,
        }
    }

    pub fn randomized(biquandle: Biquandle, modulus: u64, seed: u64, max_candidates: u64) -> Self {
        Self {
            mode: Mode::Randomized,
            seed: Some(seed),
            max_candidates: Some(max_candidates),
            ..Self::exhaustive(biquandle, modulus)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Coefficient assignments tested against type III (plus `(w, δ)`
    /// samples rejected earlier in randomized mode).
    pub candidates: u64,
    pub emitted: usize,
}

/// Walking the product of per-pair lists beats sampling below this size.
const ENUMERATE_LIMIT: u128 = 4096;
/// Random draws per `(w, δ)` sample when the product is larger.
const DRAWS_PER_SAMPLE: u64 = 256;
/// Refuse exhaustive runs with more `(w, δ)` choices than this.
const EXHAUSTIVE_LIMIT: u128 = 1 << 32;

/// Verifies, dedupes and forwards emissions.
struct Emitter<F> {
    seen: HashSet<Vec<u8>>,
    opts: VerifyOptions,
    max_results: Option<usize>,
    emit: F,
    stopped: bool,
}

impl<F: FnMut(&PowerBracket) -> ControlFlow<()>> Emitter<F> {
    fn offer(&mut self, b: &PowerBracket) -> ControlFlow<()> {
        let flow = self.offer_inner(b);
        self.stopped |= flow.is_break();
        flow
    }

    fn offer_inner(&mut self, b: &PowerBracket) -> ControlFlow<()> {
        // Never trust the pruning: verify in full before emitting.
        let key = b.search_key();
        if self.seen.contains(&key) || !b.verify(&self.opts).is_empty() {
            return ControlFlow::Continue(());
        }
        self.seen.insert(key);
        (self.emit)(b)?;
        if self.max_results.is_some_and(|k| self.seen.len() >= k) {
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }
}

/// Runs the search, passing each new bracket to `emit` until it breaks.
pub fn search_with(
    cfg: &SearchConfig,
    emit: impl FnMut(&PowerBracket) -> ControlFlow<()>,
) -> Result<SearchStats, SearchError> {
    let ring = RingZm::new(cfg.modulus)?;
    validate(cfg, ring)?;
    let mut out = Emitter {
        seen: HashSet::new(),
        opts: VerifyOptions {
            membership: cfg.membership,
            first_violation: true,
            ..VerifyOptions::default()
        },
        max_results: cfg.max_results,
        emit,
        stopped: false,
    };
    let mut candidates = 0u64;
    let _ = run(cfg, ring, &mut out, &mut candidates);
    Ok(SearchStats {
        candidates,
        emitted: out.seen.len(),
    })
}

fn run<F: FnMut(&PowerBracket) -> ControlFlow<()>>(
    cfg: &SearchConfig,
    ring: RingZm,
    out: &mut Emitter<F>,
    candidates: &mut u64,
) -> ControlFlow<()> {
    if let Some(init) = &cfg.initial {
        *candidates += 1;
        out.offer(init)?;
    }
    let space = Space::new(cfg, ring);
    match cfg.mode {
        Mode::Exhaustive => {
            let total = space.param_count();
            if cfg.jobs > 1 {
                let found: Vec<(u64, Vec<PowerBracket>)> =
                    pool(cfg.jobs).install(|| (0..total).into_par_iter().map(|i| space.exhaustive_at(i)).collect());
                for (tested, brackets) in found {
                    *candidates += tested;
                    for b in &brackets {
                        out.offer(b)?;
                    }
                }
            } else {
                for i in 0..total {
                    *candidates += space.exhaustive_each(i, &mut |b| out.offer(b));
                    if out.stopped {
                        return ControlFlow::Break(());
                    }
                }
            }
        }
        Mode::Randomized => {
            let seed = cfg.seed.expect("validated");
            let budget = cfg.max_candidates.expect("validated");
            if cfg.jobs > 1 {
                let jobs = cfg.jobs as u64;
                let results: Vec<(u64, Vec<PowerBracket>)> = pool(cfg.jobs).install(|| {
                    (0..jobs)
                        .into_par_iter()
                        .map(|worker| {
                            let share = budget / jobs + u64::from(worker < budget % jobs);
                            let mut found = Vec::new();
                            let tested = space.randomized(seed, worker, share, &mut |b| {
                                found.push(b.clone());
                                ControlFlow::Continue(())
                            });
                            (tested, found)
                        })
                        .collect()
                });
                let mut all: Vec<(String, PowerBracket)> = Vec::new();
                for (tested, found) in results {
                    *candidates += tested;
                    all.extend(found.into_iter().map(|b| (b.serialize(), b)));
                }
                // Schedule-independent order.
                all.sort_by(|a, b| a.0.cmp(&b.0));
                for (_, b) in &all {
                    out.offer(b)?;
                }
            } else {
                *candidates += space.randomized(seed, 0, budget, &mut |b| out.offer(b));
            }
        }
    }
    ControlFlow::Continue(())
}

/// Collects every emitted bracket.
pub fn search(cfg: &SearchConfig) -> Result<(Vec<PowerBracket>, SearchStats), SearchError> {
    let mut found = Vec::new();
    let stats = search_with(cfg, |b| {
        found.push(b.clone());
        ControlFlow::Continue(())
    })?;
    Ok((found, stats))
}

fn validate(cfg: &SearchConfig, ring: RingZm) -> Result<(), SearchError> {
    let bad = |s: &str| Err(SearchError::InvalidConfig(s.to_string()));
    if cfg.jobs == 0 {
        return bad("jobs must be at least 1");
    }
    if cfg.biquandle.order() > 8 {
        return bad("biquandles with more than 8 elements are out of reach");
    }
    if let Some(init) = &cfg.initial {
        if init.biquandle() != &cfg.biquandle || init.ring() != ring {
            return bad("initial bracket has a different biquandle or modulus");
        }
    }
    match cfg.mode {
        Mode::Randomized if cfg.seed.is_none() => bad("randomized mode needs a seed"),
        Mode::Randomized if cfg.max_candidates.is_none() => bad("randomized mode needs a candidate budget"),
        Mode::Exhaustive if Space::new(cfg, ring).param_count_big() > EXHAUSTIVE_LIMIT => {
            bad("too many (w, delta) choices for exhaustive mode; use randomized mode")
        }
        _ => Ok(()),
    }
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

struct Space {
    template: PowerBracket,
    n: usize,
    m: u32,
    units: Vec<u32>,
    membership: Membership,
    skip_trivial: bool,
    blocks: Vec<u32>,
}

impl Space {
    fn new(cfg: &SearchConfig, ring: RingZm) -> Self {
        let blocks = if cfg.block_filter {
            let b = cfg.biquandle.orbit_masks();
            // A single block is the whole biquandle: nothing to pre-filter.
            if b.len() > 1 {
                b
            } else {
                Vec::new()
            }
        } else {
            Vec::new()
        };
        Self {
            template: PowerBracket::blank(cfg.biquandle.clone(), ring),
            n: cfg.biquandle.order(),
            m: ring.modulus(),
            units: ring.units().iter().map(|u| u.value()).collect(),
            membership: cfg.membership,
            skip_trivial: cfg.skip_trivial,
            blocks,
        }
    }

    fn param_count_big(&self) -> u128 {
        let sets = (1u32 << self.n) - 1;
        (self.units.len() as u128).saturating_mul((self.m as u128).saturating_pow(sets))
    }

    fn param_count(&self) -> u64 {
        self.param_count_big() as u64
    }

    /// Decodes the `i`-th `(w, δ)` choice, `δ(∅) = 0`.
    fn params_at(&self, mut i: u64) -> (u32, Vec<u32>) {
        let w = self.units[(i % self.units.len() as u64) as usize];
        i /= self.units.len() as u64;
        let mut delta = vec![0u32; 1 << self.n];
        for d in delta.iter_mut().skip(1) {
            *d = (i % self.m as u64) as u32;
            i /= self.m as u64;
        }
        (w, delta)
    }

    fn is_trivial(delta: &[u32]) -> bool {
        delta[1..].iter().all(|&d| d == 0)
    }

    /// Admissible coefficient quadruples for every ordered pair, in
    /// row-major pair order. `None` if some pair has none.
    fn pair_lists(&self, work: &mut PowerBracket) -> Option<Vec<Vec<[u32; 4]>>> {
        let m = self.m;
        let mut lists = Vec::with_capacity(self.n * self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                let mut ok = Vec::new();
                for code in 0..m.pow(4) {
                    let v = [code % m, code / m % m, code / (m * m) % m, code / (m * m * m)];
                    work.set_entry(x, y, v);
                    if work.local_ok(x, y, self.membership) {
                        ok.push(v);
                    }
                }
                if ok.is_empty() {
                    return None;
                }
                lists.push(ok);
            }
        }
        Some(lists)
    }

    fn apply(&self, work: &mut PowerBracket, lists: &[Vec<[u32; 4]>], pick: &[usize]) {
        for (p, (list, &k)) in lists.iter().zip(pick).enumerate() {
            work.set_entry(p / self.n, p % self.n, list[k]);
        }
    }

    /// Per-block type III check. The emitter runs the full verifier
    /// afterwards, so the whole-biquandle check is left to it.
    fn passes_iii(&self, work: &PowerBracket) -> bool {
        self.blocks.iter().all(|&b| work.iii_ok(b))
    }

    /// Every bracket with the `i`-th `(w, δ)`; returns the count tested.
    fn exhaustive_each(&self, i: u64, visit: &mut dyn FnMut(&PowerBracket) -> ControlFlow<()>) -> u64 {
        let (w, delta) = self.params_at(i);
        if self.skip_trivial && Self::is_trivial(&delta) {
            return 0;
        }
        let mut work = self.template.clone();
        work.set_params(w, &delta);
        let Some(lists) = self.pair_lists(&mut work) else {
            return 0;
        };
        let mut pick = vec![0usize; lists.len()];
        let mut tested = 0;
        loop {
            self.apply(&mut work, &lists, &pick);
            tested += 1;
            if self.passes_iii(&work) && visit(&work).is_break() {
                return tested;
            }
            // Mixed-radix increment, last pair fastest.
            let mut k = pick.len();
            loop {
                if k == 0 {
                    return tested;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < lists[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }

    fn exhaustive_at(&self, i: u64) -> (u64, Vec<PowerBracket>) {
        let mut found = Vec::new();
        let tested = self.exhaustive_each(i, &mut |b| {
            found.push(b.clone());
            ControlFlow::Continue(())
        });
        (tested, found)
    }

    /// Runs one randomized worker on ChaCha stream `stream`.
    fn randomized(
        &self,
        seed: u64,
        stream: u64,
        budget: u64,
        visit: &mut dyn FnMut(&PowerBracket) -> ControlFlow<()>,
    ) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut work = self.template.clone();
        let mut delta = vec![0u32; 1 << self.n];
        let mut tested = 0u64;
        while tested < budget {
            let w = self.units[rng.random_range(0..self.units.len())];
            for d in delta.iter_mut().skip(1) {
                *d = rng.random_range(0..self.m);
            }
            if self.skip_trivial && Self::is_trivial(&delta) {
                tested += 1;
                continue;
            }
            work.set_params(w, &delta);
            let Some(lists) = self.pair_lists(&mut work) else {
                tested += 1;
                continue;
            };
            let product = lists.iter().fold(1u128, |p, l| p.saturating_mul(l.len() as u128));
            let mut pick = vec![0usize; lists.len()];
            if product <= ENUMERATE_LIMIT {
                for mut code in 0..product {
                    if tested >= budget {
                        break;
                    }
                    for (k, list) in lists.iter().enumerate().rev() {
                        pick[k] = (code % list.len() as u128) as usize;
                        code /= list.len() as u128;
                    }
                    tested += 1;
                    self.apply(&mut work, &lists, &pick);
                    if self.passes_iii(&work) && visit(&work).is_break() {
                        return tested;
                    }
                }
            } else {
                for _ in 0..DRAWS_PER_SAMPLE {
                    if tested >= budget {
                        break;
                    }
                    for (k, list) in lists.iter().enumerate() {
                        pick[k] = rng.random_range(0..list.len());
                    }
                    tested += 1;
                    self.apply(&mut work, &lists, &pick);
                    if self.passes_iii(&work) && visit(&work).is_break() {
                        return tested;
                    }
                }
            }
        }
        tested
    }
}

/// Size of the search space for an `n`-element biquandle over `Z/m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceEstimate {
    /// `4 n^(2m+1) (2^n − 1)^m`, the closed form quoted in the literature.
    #[serde(serialize_with = "decimal")]
    pub quoted_formula: BigUint,
    /// `m^(4n²) · |units(Z/m)| · m^(2^n)`: every table entry, `w` and `δ`.
    #[serde(serialize_with = "decimal")]
    pub naive: BigUint,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn search_space_estimate(n: u32, m: u64) -> Result<SpaceEstimate, SearchError> {
    if n == 0 || m == 0 {
        return Err(SearchError::InvalidConfig("n and m must be at least 1".into()));
    }
    if n > 20 || m > 10_000 {
        return Err(SearchError::InvalidConfig(
            "estimates need n <= 20 and m <= 10000".into(),
        ));
    }
    let big = BigUint::from;
    let quoted = big(4u32) * big(n).pow(2 * m as u32 + 1) * (big(2u32).pow(n) - big(1u32)).pow(m as u32);
    let units = (1..=m).filter(|&a| gcd(a % m, m) == 1).count() as u64;
    let naive = BigUint::from(m).pow(4 * n * n) * BigUint::from(units) * BigUint::from(m).pow(1u32 << n);
    Ok(SpaceEstimate {
        quoted_formula: quoted,
        naive,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
