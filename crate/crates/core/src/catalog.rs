//! Brackets and biquandles shipped with the crate.
//!
//! Names resolve without a file extension, e.g. `z6-b4` or `b3`.

use crate::biquandle::Biquandle;
use crate::powerbracket::PowerBracket;

const BRACKETS: &[(&str, &str)] = &[
    ("z4-b2", include_str!("../data/z4-b2.bkt")),
    ("z5-b2", include_str!("../data/z5-b2.bkt")),
    ("z5-b3", include_str!("../data/z5-b3.bkt")),
    ("z6-b4", include_str!("../data/z6-b4.bkt")),
];

const BIQUANDLES: &[(&str, &str)] = &[
    ("b2", include_str!("../data/b2.biq")),
    ("b3", include_str!("../data/b3.biq")),
    ("b4", include_str!("../data/b4.biq")),
];

pub fn bracket_names() -> Vec<&'static str> {
    BRACKETS.iter().map(|e| e.0).collect()
}

pub fn biquandle_names() -> Vec<&'static str> {
    BIQUANDLES.iter().map(|e| e.0).collect()
}

pub fn bracket_text(name: &str) -> Option<&'static str> {
    BRACKETS.iter().find(|e| e.0 == name).map(|e| e.1)
}

pub fn biquandle_text(name: &str) -> Option<&'static str> {
    BIQUANDLES.iter().find(|e| e.0 == name).map(|e| e.1)
}

/// A bundled bracket. The shipped files are known to parse.
pub fn bracket(name: &str) -> Option<PowerBracket> {
    bracket_text(name).map(|t| PowerBracket::parse(t).expect("bundled bracket parses"))
}

pub fn biquandle(name: &str) -> Option<Biquandle> {
    biquandle_text(name).map(|t| Biquandle::parse(t).expect("bundled biquandle parses"))
}
