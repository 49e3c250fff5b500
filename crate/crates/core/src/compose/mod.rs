//! Interconnection schemes: Kronecker composites, antiregular chains, and
//! appended paths, with closed-form controllability predictions.

mod chain;
mod cj;
mod composite;

use thiserror::Error;

use crate::control::ControlError;
use crate::graph::{Graph, GraphError};
use crate::spectral::SpectralError;

pub use chain::{
    chain_antiregular, chain_laplacian_formula, valid_chain_input, ChainSpec, Link,
};
pub use cj::{cj_index, path_split_controllable, CjClass};
pub use composite::{
    composite, composite_laplacian_formula, composite_modal, predict_composite, CompositePrediction,
    CompositeSpec, EigenPair,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComposeError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("cell is not controllable from vertex {s}; the prediction does not apply")]
    HypothesisNotMet { s: usize },
    #[error("input touches vertex {index}, outside block 1")]
    OutOfSupport { index: usize },
    #[error("terminal link with an input on vertex {index} of block 1 is not covered")]
    TerminalEntry { index: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Attaches an `m`-vertex path to `v`. Path vertices get indices
/// `|g|+1 ..= |g|+m` with the far end last.
pub fn append_path(g: &Graph, v: usize, m: usize) -> Result<Graph, ComposeError> {
    g.check_vertex(v)?;
    let n = g.order();
    let mut out = Graph::from_edges(n + m, g.edges())?;
    let mut prev = v;
    for t in n + 1..=n + m {
        out.add_edge(prev, t)?;
        prev = t;
    }
    Ok(out)
}
