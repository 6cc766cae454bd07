//! Command implementations behind the `expansat` binary.

pub mod backend;
pub mod commands;
pub mod domain_file;
pub mod manifest;
pub mod reproduce;
