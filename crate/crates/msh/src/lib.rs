//! Library backing the `msh` command-line front end: the persistent
//! elimination cache, run-manifest assembly with JSON/CSV encoding, and the
//! subcommand implementations themselves. The binary stays a thin argument
//! parser over these pieces so integration tests can drive them directly.

pub mod cache;
pub mod commands;
pub mod output;
