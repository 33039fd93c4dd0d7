//! Oriented link diagrams as signed crossings with role-tagged ports.
//!
//! Each crossing names four semiarcs by role. The understrand runs through
//! `x` and `xy`, the overstrand through `y` and `yx`, and a colouring must
//! satisfy `c(xy) = c(x) ▷̲ c(y)` and `c(yx) = c(y) ▷̄ c(x)`.
//!
//! Geometrically, at a positive crossing `x` is the incoming and `xy` the
//! outgoing understrand, while `yx` is the incoming and `y` the outgoing
//! overstrand. At a negative crossing every direction is reversed: `xy` and
//! `y` come in, `x` and `yx` go out. Read counterclockwise, the ports are
//! `x, y, xy, yx` at a positive crossing and `x, yx, xy, y` at a negative one.
//!
//! The two smoothings pair ports as follows:
//! * [`Smoothing::Oriented`] joins `{x, y}` and `{xy, yx}` and follows the
//!   orientation; its coefficients are `A` and `Ā`.
//! * [`Smoothing::Trace`] joins `{x, yx}` and `{y, xy}`; its coefficients are
//!   `B` and `B̄`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{ParseError, Tokens};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

/// A crossing with its four ports given as semiarc ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub sign: Sign,
    pub x: u32,
    pub y: u32,
    pub xy: u32,
    pub yx: u32,
}

impl Crossing {
    pub fn new(sign: Sign, x: u32, y: u32, xy: u32, yx: u32) -> Self {
        Self { sign, x, y, xy, yx }
    }

    /// Ports in the order `x, y, xy, yx`.
    pub fn ports(&self) -> [u32; 4] {
        [self.x, self.y, self.xy, self.yx]
    }

    /// The `(incoming, outgoing)` ports of the understrand.
    pub fn under_strand(&self) -> (u32, u32) {
        match self.sign {
            Sign::Positive => (self.x, self.xy),
            Sign::Negative => (self.xy, self.x),
        }
    }

    /// The `(incoming, outgoing)` ports of the overstrand.
    pub fn over_strand(&self) -> (u32, u32) {
        match self.sign {
            Sign::Positive => (self.yx, self.y),
            Sign::Negative => (self.y, self.yx),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Smoothing {
    Oriented,
    Trace,
}

impl Smoothing {
    pub fn flip(self) -> Smoothing {
        match self {
            Smoothing::Oriented => Smoothing::Trace,
            Smoothing::Trace => Smoothing::Oriented,
        }
    }
}

/// One closed curve of a Kauffman state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateComponent {
    /// Semiarc ids on this curve, ascending; empty for a free loop.
    pub semiarcs: Vec<u32>,
    /// Index of the free loop this component is, if any.
    pub free_loop: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("semiarc {semiarc} has {count} endpoints, expected 2")]
    EndpointCount { semiarc: u32, count: usize },
    #[error("semiarc {semiarc} must leave one crossing and enter another")]
    Orientation { semiarc: u32 },
    #[error("semiarc ids must be positive")]
    ZeroSemiarc,
    #[error("smoothing choice has length {got}, diagram has {expected} crossings")]
    ChoiceLength { got: usize, expected: usize },
    #[error("no semiarc {0} in this diagram")]
    UnknownSemiarc(u32),
}

/// A validated oriented link diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    name: String,
    crossings: Vec<Crossing>,
    free_loops: usize,
    semiarcs: Vec<u32>,
    /// Ports as dense semiarc indices, order `x, y, xy, yx`.
    dense: Vec<[usize; 4]>,
}

impl LinkDiagram {
    pub fn new(name: impl Into<String>, crossings: Vec<Crossing>, free_loops: usize) -> Result<Self, DiagramError> {
        let mut count: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for c in &crossings {
            for p in c.ports() {
                if p == 0 {
                    return Err(DiagramError::ZeroSemiarc);
                }
            }
            let (ui, uo) = c.under_strand();
            let (oi, oo) = c.over_strand();
            for p in [ui, oi] {
                count.entry(p).or_default().0 += 1;
            }
            for p in [uo, oo] {
                count.entry(p).or_default().1 += 1;
            }
        }
        for (&semiarc, &(ins, outs)) in &count {
            if ins + outs != 2 {
                return Err(DiagramError::EndpointCount {
                    semiarc,
                    count: ins + outs,
                });
            }
            if ins != 1 {
                return Err(DiagramError::Orientation { semiarc });
            }
        }
        let semiarcs: Vec<u32> = count.keys().copied().collect();
        let index = |id: u32| semiarcs.binary_search(&id).expect("semiarc collected above");
        let dense = crossings.iter().map(|c| c.ports().map(index)).collect();
        Ok(Self {
            name: name.into(),
            crossings,
            free_loops,
            semiarcs,
            dense,
        })
    }

    /// Parses the native format: an optional `link <name>` header, then one
    /// `crossing <+|-> x y xy yx` line per crossing and one `loop` line per
    /// crossingless component.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut toks = Tokens::new(text);
        let mut name = String::new();
        let mut crossings = Vec::new();
        let mut free_loops = 0;
        while let Some(t) = toks.peek() {
            let line = toks.line();
            match t {
                "link" => {
                    toks.expect("link")?;
                    name = toks.next_token("link name")?.1.to_string();
                }
                "loop" => {
                    toks.expect("loop")?;
                    free_loops += 1;
                }
                "crossing" => {
                    toks.expect("crossing")?;
                    let sign = match toks.next_token("sign")?.1 {
                        "+" => Sign::Positive,
                        "-" => Sign::Negative,
                        other => return Err(ParseError::new(line, format!("bad sign token `{other}`")).into()),
                    };
                    let mut port = || -> Result<u32, DiagramError> {
                        let l = toks.line();
                        let v = toks.int("semiarc id")?;
                        u32::try_from(v).ok().filter(|&v| v > 0).ok_or_else(|| {
                            ParseError::new(l, format!("semiarc id {v} must be a positive integer")).into()
                        })
                    };
                    let (x, y, xy, yx) = (port()?, port()?, port()?, port()?);
                    crossings.push(Crossing::new(sign, x, y, xy, yx));
                }
                other => return Err(ParseError::new(line, format!("unexpected token `{other}`")).into()),
            }
        }
        Self::new(name, crossings, free_loops)
    }

    pub fn to_native(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out.push_str(&format!("link {}\n", self.name));
        }
        for c in &self.crossings {
            out.push_str(&format!("crossing {} {} {} {} {}\n", c.sign, c.x, c.y, c.xy, c.yx));
        }
        for _ in 0..self.free_loops {
            out.push_str("loop\n");
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Semiarc ids, ascending.
    pub fn semiarcs(&self) -> &[u32] {
        &self.semiarcs
    }

    pub(crate) fn dense_ports(&self) -> &[[usize; 4]] {
        &self.dense
    }

    pub fn semiarc_index(&self, id: u32) -> Option<usize> {
        self.semiarcs.binary_search(&id).ok()
    }

    pub fn positive_count(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign == Sign::Positive).count()
    }

    pub fn negative_count(&self) -> usize {
        self.crossings.len() - self.positive_count()
    }

    pub fn writhe(&self) -> i64 {
        self.positive_count() as i64 - self.negative_count() as i64
    }

    /// Number of link components: strands are traced through `x`-`xy` and
    /// `y`-`yx` at every crossing, and each free loop counts once.
    pub fn link_components(&self) -> usize {
        let mut uf = UnionFind::new(self.semiarcs.len());
        for p in &self.dense {
            uf.union(p[0], p[2]);
            uf.union(p[1], p[3]);
        }
        uf.classes().len() + self.free_loops
    }

    /// Curves of the Kauffman state selected by `choice`. Components through
    /// semiarcs come first, ordered by least semiarc id; free loops follow.
    pub fn state_components(&self, choice: &[Smoothing]) -> Result<Vec<StateComponent>, DiagramError> {
        if choice.len() != self.crossings.len() {
            return Err(DiagramError::ChoiceLength {
                got: choice.len(),
                expected: self.crossings.len(),
            });
        }
        let mut uf = UnionFind::new(self.semiarcs.len());
        for (p, s) in self.dense.iter().zip(choice) {
            join_smoothing(&mut uf, p, *s);
        }
        let mut out: Vec<StateComponent> = uf
            .classes()
            .into_iter()
            .map(|cls| StateComponent {
                semiarcs: cls.into_iter().map(|i| self.semiarcs[i]).collect(),
                free_loop: None,
            })
            .collect();
        out.extend((0..self.free_loops).map(|i| StateComponent {
            semiarcs: Vec::new(),
            free_loop: Some(i),
        }));
        Ok(out)
    }

    /// The mirror image: every crossing changes sign and the two strands
    /// trade roles, so `(x, y, xy, yx)` becomes `(y, x, yx, xy)`.
    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing::new(c.sign.flip(), c.y, c.x, c.yx, c.xy))
            .collect();
        LinkDiagram::new(self.name.clone(), crossings, self.free_loops).expect("mirror preserves validity")
    }

    /// Places `other` beside `self`, renumbering its semiarcs above ours.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let offset = self.semiarcs.last().copied().unwrap_or(0);
        let mut crossings = self.crossings.clone();
        crossings.extend(
            other
                .crossings
                .iter()
                .map(|c| Crossing::new(c.sign, c.x + offset, c.y + offset, c.xy + offset, c.yx + offset)),
        );
        let name = match (self.name.is_empty(), other.name.is_empty()) {
            (false, false) => format!("{}+{}", self.name, other.name),
            _ => format!("{}{}", self.name, other.name),
        };
        LinkDiagram::new(name, crossings, self.free_loops + other.free_loops).expect("union of valid diagrams")
    }

    /// Adds a type I kink on `semiarc` just before the crossing it enters.
    /// With `loop_on_outputs` the small loop joins `xy` to `yx`; otherwise it
    /// joins `x` to `y`.
    pub fn with_kink(&self, semiarc: u32, sign: Sign, loop_on_outputs: bool) -> Result<LinkDiagram, DiagramError> {
        self.semiarc_index(semiarc)
            .ok_or(DiagramError::UnknownSemiarc(semiarc))?;
        let next = self.semiarcs.last().copied().unwrap_or(0);
        let (tail, lp) = (next + 1, next + 2);
        let mut crossings = self.crossings.clone();
        let entry = crossings
            .iter_mut()
            .find_map(|c| {
                let (ui, _) = c.under_strand();
                let (oi, _) = c.over_strand();
                if ui == semiarc {
                    Some(if c.sign == Sign::Positive { &mut c.x } else { &mut c.xy })
                } else if oi == semiarc {
                    Some(if c.sign == Sign::Positive { &mut c.yx } else { &mut c.y })
                } else {
                    None
                }
            })
            .expect("every semiarc enters some crossing");
        *entry = tail;
        let (s, t) = (semiarc, tail);
        let kink = match (sign, loop_on_outputs) {
            (Sign::Positive, true) => Crossing::new(sign, s, t, lp, lp),
            (Sign::Negative, true) => Crossing::new(sign, t, s, lp, lp),
            (Sign::Positive, false) => Crossing::new(sign, lp, lp, t, s),
            (Sign::Negative, false) => Crossing::new(sign, lp, lp, s, t),
        };
        crossings.push(kink);
        LinkDiagram::new(self.name.clone(), crossings, self.free_loops)
    }

    /// Checks that the ports, read counterclockwise as documented above,
    /// embed every connected piece of the diagram in the sphere.
    pub fn is_planar(&self) -> bool {
        let rot: Vec<[usize; 4]> = self
            .dense
            .iter()
            .zip(&self.crossings)
            .map(|(p, c)| match c.sign {
                Sign::Positive => [p[0], p[1], p[2], p[3]],
                Sign::Negative => [p[0], p[3], p[2], p[1]],
            })
            .collect();
        let mut ends = vec![Vec::with_capacity(2); self.semiarcs.len()];
        for (k, r) in rot.iter().enumerate() {
            for (i, &e) in r.iter().enumerate() {
                ends[e].push((k, i));
            }
        }
        let nc = rot.len();
        let mut pieces = UnionFind::new(nc);
        for e in &ends {
            pieces.union(e[0].0, e[1].0);
        }
        let mut faces = vec![0usize; nc];
        let mut seen = vec![[false; 4]; nc];
        for k in 0..nc {
            for i in 0..4 {
                if seen[k][i] {
                    continue;
                }
                let root = pieces.find(k);
                faces[root] += 1;
                let (mut c, mut j) = (k, i);
                while !seen[c][j] {
                    seen[c][j] = true;
                    let e = &ends[rot[c][j]];
                    let (c2, j2) = if e[0] == (c, j) { e[1] } else { e[0] };
                    c = c2;
                    j = (j2 + 1) % 4;
                }
            }
        }
        let mut size = vec![0usize; nc];
        for k in 0..nc {
            let r = pieces.find(k);
            size[r] += 1;
        }
        (0..nc).all(|r| size[r] == 0 || faces[r] == size[r] + 2)
    }
}

pub(crate) fn join_smoothing(uf: &mut UnionFind, p: &[usize; 4], s: Smoothing) {
    match s {
        Smoothing::Oriented => {
            uf.union(p[0], p[1]);
            uf.union(p[2], p[3]);
        }
        Smoothing::Trace => {
            uf.union(p[0], p[3]);
            uf.union(p[1], p[2]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "link hopf\ncrossing + 1 4 2 3\ncrossing + 4 1 3 2\n";

    fn hopf() -> LinkDiagram {
        LinkDiagram::parse(HOPF).unwrap()
    }

    #[test]
    fn hopf_link_parses() {
        let d = hopf();
        assert_eq!(d.name(), "hopf");
        assert_eq!(d.semiarcs(), &[1, 2, 3, 4]);
        assert_eq!(d.writhe(), 2);
        assert_eq!(d.link_components(), 2);
        assert!(d.is_planar());
        assert_eq!(LinkDiagram::parse(&d.to_native()).unwrap(), d);
    }

    #[test]
    fn hopf_states() {
        let d = hopf();
        let both = |s| d.state_components(&[s, s]).unwrap();
        assert_eq!(both(Smoothing::Oriented).len(), 2);
        assert_eq!(both(Smoothing::Trace).len(), 2);
        assert_eq!(
            d.state_components(&[Smoothing::Oriented, Smoothing::Trace])
                .unwrap()
                .len(),
            1
        );
        assert!(matches!(
            d.state_components(&[Smoothing::Trace]),
            Err(DiagramError::ChoiceLength { got: 1, expected: 2 })
        ));
    }

    #[test]
    fn endpoint_errors() {
        let err = LinkDiagram::parse("crossing + 1 2 3 4\ncrossing + 2 1 4 5\n").unwrap_err();
        assert_eq!(err, DiagramError::EndpointCount { semiarc: 3, count: 1 });
        assert!(matches!(
            LinkDiagram::parse("crossing * 1 1 2 2"),
            Err(DiagramError::Parse(_))
        ));
        assert!(matches!(
            LinkDiagram::parse("crossing + 0 0 2 2"),
            Err(DiagramError::Parse(_))
        ));
        assert_eq!(
            LinkDiagram::parse("crossing + 1 2 2 1").unwrap_err(),
            DiagramError::Orientation { semiarc: 1 }
        );
    }

    #[test]
    fn loops_and_empty_link() {
        let d = LinkDiagram::parse("loop").unwrap();
        assert_eq!((d.crossing_count(), d.free_loops()), (0, 1));
        assert_eq!(d.writhe(), 0);
        assert_eq!(d.link_components(), 1);
        let empty = LinkDiagram::parse("# nothing\n").unwrap();
        assert_eq!(empty.link_components(), 0);
        let comps = d.state_components(&[]).unwrap();
        assert_eq!(
            comps,
            vec![StateComponent {
                semiarcs: vec![],
                free_loop: Some(0)
            }]
        );
    }

    #[test]
    fn mirror_negates_writhe() {
        let d = hopf();
        let m = d.mirror();
        assert_eq!(m.writhe(), -2);
        assert_eq!(m.mirror(), d);
        assert!(m.is_planar());
    }

    #[test]
    fn kinks_are_planar_and_add_one_crossing() {
        let d = hopf();
        for sign in [Sign::Positive, Sign::Negative] {
            for side in [true, false] {
                let k = d.with_kink(2, sign, side).unwrap();
                assert_eq!(k.crossing_count(), 3);
                assert_eq!(k.writhe(), 2 + sign.as_i64());
                assert_eq!(k.link_components(), 2);
                assert!(k.is_planar(), "{sign} {side}");
            }
        }
        assert_eq!(
            d.with_kink(9, Sign::Positive, true).unwrap_err(),
            DiagramError::UnknownSemiarc(9)
        );
    }

    #[test]
    fn disjoint_union_renumbers() {
        let u = hopf().disjoint_union(&hopf());
        assert_eq!(u.semiarcs(), &[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(u.link_components(), 4);
        assert!(u.is_planar());
    }

    #[test]
    fn a_nonplanar_port_order_is_detected() {
        let d = LinkDiagram::parse("crossing + 1 4 2 3\ncrossing + 4 1 7 6\ncrossing - 3 2 8 5\ncrossing + 7 6 8 5\n")
            .unwrap();
        assert!(!d.is_planar());
    }
}
