//! Command implementations behind the `jacobi-freeze` binary.

pub mod commands;
pub mod report;
pub mod verify;
