//! Library surface of the `ipfactor` CLI: JSON document handling and the
//! subcommand implementations, reused by the integration and acceptance
//! suites.

use clap::ValueEnum;

pub mod commands;
pub mod io;

/// Target decomposition form of `ipfactor decompose`.
#[derive(ValueEnum, Clone, Copy)]
pub enum FormArg {
    Opsum,
    Hermitian,
    Positive,
    #[value(name = "minus-one")]
    MinusOne,
    Auto,
}
