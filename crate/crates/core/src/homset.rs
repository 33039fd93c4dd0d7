//! Biquandle colourings of a diagram, i.e. the homset `Hom(B(L), X)`.

use serde::{Deserialize, Serialize};

use crate::biquandle::Biquandle;
use crate::diagram::LinkDiagram;

/// An assignment of 1-based biquandle elements to semiarcs and free loops.
///
/// `arcs[i]` colours the semiarc `diagram.semiarcs()[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coloring {
    pub arcs: Vec<usize>,
    pub loops: Vec<usize>,
}

impl Coloring {
    pub fn color_of(&self, d: &LinkDiagram, semiarc: u32) -> Option<usize> {
        d.semiarc_index(semiarc).map(|i| self.arcs[i])
    }

    /// `(semiarc id, colour)` pairs in id order.
    pub fn pairs(&self, d: &LinkDiagram) -> Vec<(u32, usize)> {
        d.semiarcs().iter().copied().zip(self.arcs.iter().copied()).collect()
    }

    /// Full recheck of every crossing relation.
    pub fn is_valid(&self, d: &LinkDiagram, x: &Biquandle) -> bool {
        let n = x.order();
        self.arcs.len() == d.semiarcs().len()
            && self.loops.len() == d.free_loops()
            && self.arcs.iter().chain(&self.loops).all(|&c| (1..=n).contains(&c))
            && d.dense_ports().iter().all(|p| {
                let c = |i: usize| self.arcs[p[i]];
                x.under(c(0), c(1)) == c(2) && x.over(c(1), c(0)) == c(3)
            })
    }
}

/// Calls `visit` with each colouring of the semiarcs (0-based colours).
/// Order follows the backtracking, not the canonical order.
pub(crate) fn for_each_arc_coloring(d: &LinkDiagram, x: &Biquandle, mut visit: impl FnMut(&[usize])) {
    const UNSET: usize = usize::MAX;
    let ports = d.dense_ports();
    let k = d.semiarcs().len();
    // Crossings touching each semiarc, for propagation.
    let mut touching = vec![Vec::new(); k];
    for (ci, p) in ports.iter().enumerate() {
        for &s in p {
            if !touching[s].contains(&ci) {
                touching[s].push(ci);
            }
        }
    }
    let mut color = vec![UNSET; k];
    let mut trail: Vec<usize> = Vec::with_capacity(k);

    // Assigns `s := v` and forces every consequence. Returns false on a
    // contradiction; assignments made so far stay on the trail either way.
    let assign = |color: &mut Vec<usize>, trail: &mut Vec<usize>, s: usize, v: usize| -> bool {
        color[s] = v;
        trail.push(s);
        let mut head = trail.len() - 1;
        while head < trail.len() {
            let s = trail[head];
            head += 1;
            for &ci in &touching[s] {
                let p = ports[ci];
                let (cx, cy) = (color[p[0]], color[p[1]]);
                if cx == UNSET || cy == UNSET {
                    continue;
                }
                for (port, want) in [(p[2], x.u(cx, cy)), (p[3], x.o(cy, cx))] {
                    match color[port] {
                        UNSET => {
                            color[port] = want;
                            trail.push(port);
                        }
                        have if have != want => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    };

    /// Sets one semiarc and propagates; false on a conflict.
    type Assign<'a> = dyn Fn(&mut Vec<usize>, &mut Vec<usize>, usize, usize) -> bool + 'a;

    fn search(
        next: usize,
        color: &mut Vec<usize>,
        trail: &mut Vec<usize>,
        n: usize,
        assign: &Assign,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let Some(s) = (next..color.len()).find(|&s| color[s] == usize::MAX) else {
            visit(color);
            return;
        };
        for v in 0..n {
            let mark = trail.len();
            if assign(color, trail, s, v) {
                search(s + 1, color, trail, n, assign, visit);
            }
            for &t in &trail[mark..] {
                color[t] = usize::MAX;
            }
            trail.truncate(mark);
        }
    }

    search(0, &mut color, &mut trail, x.order(), &assign, &mut visit);
}

/// All colourings, in lexicographic order of `(arcs, loops)`.
pub fn enumerate_colorings(d: &LinkDiagram, x: &Biquandle) -> Vec<Coloring> {
    let mut arcs: Vec<Vec<usize>> = Vec::new();
    for_each_arc_coloring(d, x, |c| arcs.push(c.iter().map(|v| v + 1).collect()));
    arcs.sort_unstable();
    let loops = loop_colorings(d.free_loops(), x.order());
    let mut out = Vec::with_capacity(arcs.len() * loops.len());
    for a in &arcs {
        for l in &loops {
            out.push(Coloring {
                arcs: a.clone(),
                loops: l.clone(),
            });
        }
    }
    out
}

/// Every tuple in `{1..n}^count`, lexicographically.
fn loop_colorings(count: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..count {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// The counting invariant `|Hom(B(L), X)|`.
pub fn counting_invariant(d: &LinkDiagram, x: &Biquandle) -> u64 {
    let mut arcs = 0u64;
    for_each_arc_coloring(d, x, |_| arcs += 1);
    arcs * (x.order() as u64).pow(d.free_loops() as u32)
}
