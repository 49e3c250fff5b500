use serde::{Deserialize, Serialize};

use crate::control::ControlMatrix;
use crate::graph::{antiregular, Graph};
use crate::matrix::{Matrix, SymMatrix};

use super::{append_path, ComposeError};

/// Which vertex of block `i` links to the degree-repeating vertex of block
/// `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Link {
    /// Vertex 1 (degree `k2 - 1`).
    #[serde(rename = "D")]
    Dominating,
    /// Vertex `k2` (degree 1).
    #[serde(rename = "T")]
    Terminal,
}

impl Link {
    pub fn parse(c: char) -> Option<Link> {
        match c.to_ascii_uppercase() {
            'D' => Some(Link::Dominating),
            'T' => Some(Link::Terminal),
            _ => None,
        }
    }
}

/// `c` copies of `AR(k2)` in a row, block `i` on indices
/// `(i-1) k2 + 1 ..= i k2`, junction `i` joining block `i` to vertex `κ̄`
/// of block `i + 1` where `κ̄ = ceil(k2 / 2)`. An optional path of `tail`
/// vertices hangs off `tail_attach` in block 1 and is numbered last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawChain")]
pub struct ChainSpec {
    pub c: usize,
    pub k2: usize,
    pub links: Vec<Link>,
    pub tail: usize,
    pub tail_attach: usize,
}

#[derive(Deserialize)]
struct RawChain {
    c: usize,
    k2: usize,
    #[serde(default)]
    links: Vec<Link>,
    #[serde(default)]
    tail: usize,
    tail_attach: Option<usize>,
}

impl TryFrom<RawChain> for ChainSpec {
    type Error = ComposeError;

    fn try_from(r: RawChain) -> Result<Self, Self::Error> {
        let mut spec = ChainSpec::new(r.c, r.k2, r.links)?;
        spec.tail = r.tail;
        if let Some(a) = r.tail_attach {
            spec.tail_attach = a;
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl ChainSpec {
    /// Chain without a tail; `tail_attach` defaults to `κ̄`.
    pub fn new(c: usize, k2: usize, links: Vec<Link>) -> Result<Self, ComposeError> {
        let spec = ChainSpec {
            c,
            k2,
            links,
            tail: 0,
            tail_attach: k2.div_ceil(2),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tail(mut self, tail: usize, attach: usize) -> Result<Self, ComposeError> {
        self.tail = tail;
        self.tail_attach = attach;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ComposeError> {
        if self.c == 0 {
            return Err(ComposeError::InvalidSpec("c must be at least 1".into()));
        }
        if self.k2 < 2 {
            return Err(ComposeError::InvalidSpec(format!(
                "k2 must be at least 2, got {}",
                self.k2
            )));
        }
        if self.links.len() != self.c - 1 {
            return Err(ComposeError::InvalidSpec(format!(
                "expected {} links, got {}",
                self.c - 1,
                self.links.len()
            )));
        }
        if self.tail_attach == 0 || self.tail_attach > self.k2 {
            return Err(ComposeError::InvalidSpec(format!(
                "tail_attach {} outside 1..={}",
                self.tail_attach, self.k2
            )));
        }
        Ok(())
    }

    /// `ceil(k2 / 2)`, the first of the two degree-repeating vertices.
    pub fn kappa(&self) -> usize {
        self.k2.div_ceil(2)
    }

    /// Vertices in the antiregular blocks, excluding the tail.
    pub fn block_order(&self) -> usize {
        self.c * self.k2
    }

    pub fn order(&self) -> usize {
        self.block_order() + self.tail
    }

    /// Endpoints of junction `i` (1-based).
    pub fn junction(&self, i: usize) -> (usize, usize) {
        let from = match self.links[i - 1] {
            Link::Dominating => (i - 1) * self.k2 + 1,
            Link::Terminal => i * self.k2,
        };
        (from, i * self.k2 + self.kappa())
    }
}

pub fn chain_antiregular(spec: &ChainSpec) -> Result<Graph, ComposeError> {
    spec.validate()?;
    let cell = antiregular(spec.k2)?;
    let mut g = Graph::empty(spec.block_order())?;
    for block in 0..spec.c {
        let off = block * spec.k2;
        for (u, v) in cell.edges() {
            g.add_edge(u + off, v + off)?;
        }
    }
    for i in 1..spec.c {
        let (u, v) = spec.junction(i);
        g.add_edge(u, v)?;
    }
    append_path(&g, spec.tail_attach, spec.tail)
}

/// `I_c ⊗ L_A + Σ z_i z_iᵀ` with `z_i = e_from - e_to` per junction, on the
/// blocks only.
pub fn chain_laplacian_formula(spec: &ChainSpec) -> Result<SymMatrix, ComposeError> {
    spec.validate()?;
    let la = antiregular(spec.k2)?.laplacian().into_matrix();
    let n = spec.block_order();
    let mut m = Matrix::identity_int(spec.c).kron(&la);
    for i in 1..spec.c {
        let (u, v) = spec.junction(i);
        let (u, v) = (u - 1, v - 1);
        m[(u, u)] += 1;
        m[(v, v)] += 1;
        m[(u, v)] -= 1;
        m[(v, u)] -= 1;
    }
    debug_assert_eq!(m.rows(), n);
    Ok(SymMatrix::new(m).expect("symmetric by construction"))
}

/// Predicted controllability of a chain from a single input on block 1:
/// exactly one of the entries `κ̄`, `κ̄+1` of the block-1 part is set.
///
/// Inputs touching other blocks are outside the prediction
/// (`OutOfSupport`). When the first junction leaves from the terminal vertex
/// the prediction also requires entry `k2` of block 1 to be clear, and
/// `TerminalEntry` is returned otherwise. Entries past the end of block 1
/// read as zero, which matters only at `k2 = 2`.
pub fn valid_chain_input(spec: &ChainSpec, b: &ControlMatrix) -> Result<bool, ComposeError> {
    spec.validate()?;
    if b.p() != 1 {
        return Err(ComposeError::InvalidSpec(format!(
            "expected a single input column, got {}",
            b.p()
        )));
    }
    if b.n() != spec.block_order() && b.n() != spec.order() {
        b.check_order(spec.order())?;
    }
    let col = b.column(0);
    if let Some(i) = (spec.k2..col.len()).find(|&i| col[i] != 0) {
        return Err(ComposeError::OutOfSupport { index: i + 1 });
    }
    if spec.links.first() == Some(&Link::Terminal) && col[spec.k2 - 1] != 0 {
        return Err(ComposeError::TerminalEntry { index: spec.k2 });
    }
    let kappa = spec.kappa();
    let entry = |i: usize| if i <= spec.k2 { col[i - 1] } else { 0 };
    Ok(entry(kappa) + entry(kappa + 1) == 1)
}
