//! Library surface of the verification tool: wire formats, the named-object
//! workspace, the command interpreter, and the verification suites.  The
//! binary in `main.rs` is a thin argument-parsing shell over these modules;
//! integration tests drive them directly.

pub mod commands;
pub mod formats;
pub mod suites;
pub mod workspace;
