//! Text format, reports and command implementations behind the
//! `finitopos` binary.

pub mod commands;
pub mod dsl;
pub mod report;
