//! Command-line front end for `gradval`: expression parsing, evaluation and
//! JSON reports.

pub mod commands;
pub mod eval;
pub mod parse;
