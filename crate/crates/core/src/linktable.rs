//! The two-component and three-component prime links with at most seven
//! crossings, bundled as native diagram files, plus small diagrams related
//! by single Reidemeister moves.
//!
//! Setting `POWERBRACKET_LINK_DIR` makes [`load`] read `<dir>/<name>.link`
//! instead of the bundled copy.

use std::path::PathBuf;

use thiserror::Error;

use crate::diagram::{DiagramError, LinkDiagram};

pub const LINK_DIR_ENV: &str = "POWERBRACKET_LINK_DIR";

#[derive(Debug, Error)]
pub enum LinkTableError {
    #[error("unknown link `{0}`")]
    UnknownLink(String),
    #[error("{name}: {source}")]
    Diagram { name: String, source: DiagramError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{name}: expected {expected} components, diagram has {found}")]
    ComponentCount {
        name: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkEntry {
    pub name: String,
    pub diagram: LinkDiagram,
    pub components: usize,
}

macro_rules! bundled {
    ($($name:literal => $comps:literal),* $(,)?) => {
        const LINKS: &[(&str, usize, &str)] = &[
            $(($name, $comps, include_str!(concat!("../links/", $name, ".link")))),*
        ];
    };
}

bundled! {
    "L2a1" => 2, "L4a1" => 2, "L5a1" => 2,
    "L6a1" => 2, "L6a2" => 2, "L6a3" => 2, "L6a4" => 3, "L6a5" => 3, "L6n1" => 3,
    "L7a1" => 2, "L7a2" => 2, "L7a3" => 2, "L7a4" => 2, "L7a5" => 2, "L7a6" => 2, "L7a7" => 3,
    "L7n1" => 2, "L7n2" => 2,
}

/// Pairs of diagrams of the same link that differ by one move.
const MOVES: &[(&str, &str)] = &[
    ("unknot", include_str!("../links/moves/unknot.link")),
    ("unknot-r1-pos-a", include_str!("../links/moves/unknot-r1-pos-a.link")),
    ("unknot-r1-pos-b", include_str!("../links/moves/unknot-r1-pos-b.link")),
    ("unknot-r1-neg-a", include_str!("../links/moves/unknot-r1-neg-a.link")),
    ("unknot-r1-neg-b", include_str!("../links/moves/unknot-r1-neg-b.link")),
    ("hopf", include_str!("../links/moves/hopf.link")),
    ("hopf-r2-inner", include_str!("../links/moves/hopf-r2-inner.link")),
    ("hopf-r2-outer", include_str!("../links/moves/hopf-r2-outer.link")),
    ("r3-left", include_str!("../links/moves/r3-left.link")),
    ("r3-right", include_str!("../links/moves/r3-right.link")),
];

/// Each move as `(move, before, after)`.
pub const MOVE_PAIRS: &[(&str, &str, &str)] = &[
    ("RI+", "unknot", "unknot-r1-pos-a"),
    ("RI+", "unknot", "unknot-r1-pos-b"),
    ("RI-", "unknot", "unknot-r1-neg-a"),
    ("RI-", "unknot", "unknot-r1-neg-b"),
    ("RII", "hopf", "hopf-r2-inner"),
    ("RII", "hopf", "hopf-r2-outer"),
    ("RIII", "r3-left", "r3-right"),
];

/// Names of the bundled links, sorted.
pub fn list() -> Vec<&'static str> {
    let mut v: Vec<&str> = LINKS.iter().map(|e| e.0).collect();
    v.sort_unstable();
    v
}

pub fn load(name: &str) -> Result<LinkEntry, LinkTableError> {
    let &(name, components, bundled) = LINKS
        .iter()
        .find(|e| e.0 == name)
        .ok_or_else(|| LinkTableError::UnknownLink(name.to_string()))?;
    let text = match std::env::var_os(LINK_DIR_ENV) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(format!("{name}.link"));
            std::fs::read_to_string(&path).map_err(|source| LinkTableError::Io { path, source })?
        }
        None => bundled.to_string(),
    };
    let diagram = parse(name, &text)?;
    let found = diagram.link_components();
    if found != components {
        return Err(LinkTableError::ComponentCount {
            name: name.to_string(),
            expected: components,
            found,
        });
    }
    Ok(LinkEntry {
        name: name.to_string(),
        diagram,
        components,
    })
}

pub fn move_names() -> Vec<&'static str> {
    MOVES.iter().map(|e| e.0).collect()
}

pub fn load_move(name: &str) -> Result<LinkDiagram, LinkTableError> {
    let text = MOVES
        .iter()
        .find(|e| e.0 == name)
        .map(|e| e.1)
        .ok_or_else(|| LinkTableError::UnknownLink(name.to_string()))?;
    parse(name, text)
}

fn parse(name: &str, text: &str) -> Result<LinkDiagram, LinkTableError> {
    let d = LinkDiagram::parse(text).map_err(|source| LinkTableError::Diagram {
        name: name.to_string(),
        source,
    })?;
    Ok(if d.name().is_empty() { d.with_name(name) } else { d })
}
