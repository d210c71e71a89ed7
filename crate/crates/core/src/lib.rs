//! Exact arithmetic for elliptic curves over F_q(t) and their Frobenius twists.
//!
//! The crate computes minimal discriminants, supersingular defects n_v,
//! local kernel orders, Selmer main terms and μ-invariant bookkeeping, and
//! checks the identities relating them on small examples.

pub mod gf_core;
pub mod weierstrass;
pub mod tate_local;
pub mod formal_group;
pub mod selmer_global;
pub mod lambda_lab;
pub mod expr;
pub mod cli_report;
