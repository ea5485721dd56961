//! Exact construction and classification of finite-dimensional associative
//! superalgebras over Q, real/imaginary quadratic extensions of Q, and odd
//! prime fields, together with decision procedures for superinvolutions of
//! the first and second kind. Every positive or negative answer carries a
//! machine-checkable certificate.

pub mod algebra;
pub mod certificate;
pub mod cli;
pub mod constructors;
pub mod error;
pub mod fields;
pub mod firstkind;
pub mod linalg;
pub mod maps;
pub mod realize;
pub mod secondkind;

pub use error::{Error, Result};

/// CLI entry point; returns the process exit code.
pub fn cli_main() -> i32 {
    cli::main()
}
