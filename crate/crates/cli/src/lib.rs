//! Command-line front end for the elimination sweep and the design
//! constructions.

pub mod commands;
pub mod construct;
pub mod eliminate;
pub mod setup;
