//! Exact total domination polynomials of finite simple graphs.
//!
//! `D_t(G, x) = Σ d_t(G, i) x^i` counts the total dominating sets of `G` by
//! size. This crate provides a brute-force oracle for `D_t` and its
//! conditioned variants, vertex and edge reduction formulas, the path and
//! cycle recurrences with their closed forms, a reduction-based tree
//! algorithm, and the extremal scans built on top of them.

pub mod closed_form;
pub mod corpus;
pub mod error;
pub mod extremal;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod poly;
pub mod reduction;
pub mod report;
pub mod verify;

pub use error::{Result, TdpError};
pub use graph::{parse_edge_list, Graph, VertexClassification};
pub use oracle::{brute_force_tdp, brute_force_tdp_conditioned, gamma_t, Atom, Condition, Oracle};
pub use poly::{poly_arith, ArithOp, IntPoly};
