//! Stepping-up colorings on binary trees, ordered hypergraph families, and
//! the partial Steiner systems that force ordered copies of them.

pub mod cli;
pub mod coloring;
pub mod combin;
pub mod error;
pub mod family;
pub mod search;
pub mod steiner;
pub mod tree;

pub use error::{Error, Result};
