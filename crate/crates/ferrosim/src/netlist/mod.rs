//! Data model, parser, and serializer for a small SPICE-like netlist
//! dialect.
//!
//! The grammar is a strict flat subset of the classic dialect: no
//! subcircuits, no expressions. `*` starts a comment line, `+` continues
//! the previous line, the first line of a file is its title, and element
//! type is determined by the first letter of the element name
//! (V/R/C/M/F). Identifiers are case-insensitive and canonicalized to
//! lowercase; node `0` is ground.

mod parse;
mod serialize;
mod types;
mod validate;

pub use parse::{parse_netlist, parse_value, ParseError};
pub use serialize::{fmt_sci, serialize_netlist};
pub use types::{
    eval_stimulus, AnalysisDirective, Element, ElementKind, FtjCard, Netlist, Stimulus,
};
pub use validate::{validate_netlist, Diagnostic};
