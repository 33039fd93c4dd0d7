//! Biquandle power brackets over `Z/m`.
//!
//! The pipeline is: parse a [`diagram::LinkDiagram`], enumerate its
//! [`homset`] colourings by a [`biquandle::Biquandle`], and evaluate a
//! [`powerbracket::PowerBracket`] on each coloured diagram with the
//! [`statesum`] expansion. [`search`] looks for new brackets and
//! [`linktable`] bundles the multi-component links used for tabulation.

pub mod biquandle;
pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod homset;
pub mod linktable;
pub mod modring;
pub mod powerbracket;
pub mod search;
pub mod statesum;
mod text;
mod unionfind;

pub use text::ParseError;
