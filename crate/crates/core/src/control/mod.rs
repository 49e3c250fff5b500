//! Laplacian controllability of `ẋ = -Lx + Bu`.
//!
//! Three independent deciders:
//! * [`pbh_verdict`]: eigenspace test in floating point, with a witness
//!   eigenvector when the pair is uncontrollable;
//! * [`kalman_rank_exact`]: rank of `[B, LB, ..., L^{n-1}B]` over the
//!   rationals via fraction-free elimination on big integers;
//! * [`gramian_check`]: positivity of a quadrature Gramian computed in
//!   fixed-point big-integer arithmetic.

mod exact;
mod gramian;
mod kalman;
mod pbh;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{check_permutation, Graph};
use crate::matrix::SymMatrix;
use crate::spectral::SpectralError;

pub use gramian::{gramian_check, gramian_verdict, GramianOptions, GramianReport, MIN_STEPS};
pub use kalman::{kalman_rank_exact, kalman_verdict};
pub use pbh::{pbh_verdict, DEFAULT_PBH_TOL};

/// Largest order decided exactly by [`decide`]; above it PBH is used.
pub const EXACT_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("control matrix has {got} rows but the Laplacian has order {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("control matrix entries must be 0 or 1")]
    NotBinary,
    #[error("control matrix must have at least one nonzero entry")]
    AllZero,
    #[error("control matrix needs at least one row and one column")]
    Empty,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Binary input matrix `B ∈ {0,1}^{n×p}`, stored by column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ControlMatrix {
    n: usize,
    columns: Vec<Vec<u8>>,
}

impl ControlMatrix {
    pub fn from_columns(columns: Vec<Vec<u8>>) -> Result<Self, ControlError> {
        let n = columns.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(ControlError::Empty);
        }
        for c in &columns {
            if c.len() != n {
                return Err(ControlError::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
            if c.iter().any(|&x| x > 1) {
                return Err(ControlError::NotBinary);
            }
        }
        if columns.iter().flatten().all(|&x| x == 0) {
            return Err(ControlError::AllZero);
        }
        Ok(ControlMatrix { n, columns })
    }

    /// Single input `b` given as a 0/1 vector.
    pub fn single(b: Vec<u8>) -> Result<Self, ControlError> {
        ControlMatrix::from_columns(vec![b])
    }

    /// Single input wired to each listed vertex (1-based).
    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self, ControlError> {
        ControlMatrix::from_vertex_sets(n, &[vertices.to_vec()])
    }

    /// One input per set; input `j` drives every vertex in `sets[j]`.
    pub fn from_vertex_sets(n: usize, sets: &[Vec<usize>]) -> Result<Self, ControlError> {
        if n == 0 || sets.is_empty() {
            return Err(ControlError::Empty);
        }
        let mut columns = Vec::with_capacity(sets.len());
        for set in sets {
            let mut col = vec![0u8; n];
            for &v in set {
                if v == 0 || v > n {
                    return Err(ControlError::VertexOutOfRange { vertex: v, n });
                }
                col[v - 1] = 1;
            }
            columns.push(col);
        }
        ControlMatrix::from_columns(columns)
    }

    /// `e_v` (1-based).
    pub fn unit(n: usize, v: usize) -> Result<Self, ControlError> {
        ControlMatrix::from_vertices(n, &[v])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[u8] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<u8>] {
        &self.columns
    }

    pub fn column_f64(&self, j: usize) -> Vec<f64> {
        self.columns[j].iter().map(|&x| f64::from(x)).collect()
    }

    /// Moves row `v` to row `perm[v - 1]`, matching [`Graph::relabel`].
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self, ControlError> {
        check_permutation(perm, self.n).map_err(|e| ControlError::InvalidArgument(e.to_string()))?;
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut out = vec![0u8; self.n];
                for (i, &x) in c.iter().enumerate() {
                    out[perm[i] - 1] = x;
                }
                out
            })
            .collect();
        Ok(ControlMatrix {
            n: self.n,
            columns,
        })
    }

    /// Pads every column with zeros up to `n` rows.
    pub fn zero_pad(&self, n: usize) -> Result<Self, ControlError> {
        if n < self.n {
            return Err(ControlError::DimensionMismatch {
                expected: self.n,
                got: n,
            });
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut out = c.clone();
                out.resize(n, 0);
                out
            })
            .collect();
        Ok(ControlMatrix { n, columns })
    }

    pub(crate) fn check_order(&self, order: usize) -> Result<(), ControlError> {
        if self.n != order {
            return Err(ControlError::DimensionMismatch {
                expected: order,
                got: self.n,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "PBH")]
    Pbh,
    #[serde(rename = "ExactKalman")]
    ExactKalman,
    #[serde(rename = "Gramian")]
    Gramian,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Pbh => "PBH",
            Method::ExactKalman => "ExactKalman",
            Method::Gramian => "Gramian",
        })
    }
}

/// A controllability decision.
///
/// `witness` is only set by PBH for uncontrollable pairs: a unit eigenvector
/// orthogonal to every column of `B`. `rank` is only set by the exact Kalman
/// test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub controllable: bool,
    pub method: Method,
    pub witness: Option<Vec<f64>>,
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub advisory: Option<String>,
}

impl Verdict {
    pub(crate) fn new(controllable: bool, method: Method) -> Self {
        Verdict {
            controllable,
            method,
            witness: None,
            rank: None,
            advisory: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serialization cannot fail")
    }
}

/// Default decision: exact Kalman up to [`EXACT_LIMIT`] vertices, PBH above.
/// The PBH route attaches an advisory when some eigenvalue gap is within ten
/// grouping tolerances.
pub fn decide(l: &SymMatrix, b: &ControlMatrix) -> Result<Verdict, ControlError> {
    if l.order() <= EXACT_LIMIT {
        kalman_verdict(l, b)
    } else {
        pbh_verdict(l, b, DEFAULT_PBH_TOL)
    }
}

/// Vertices `v` for which `(L, e_v)` is controllable, by the exact test.
pub fn controllable_vertices(g: &Graph) -> Vec<usize> {
    let l = g.laplacian();
    let n = g.order();
    (1..=n)
        .filter(|&v| {
            let b = ControlMatrix::unit(n, v).expect("vertex in range");
            kalman_rank_exact(&l, &b).expect("dimensions agree") == n
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{antiregular, complete, path};

    #[test]
    fn control_matrix_validation() {
        assert_eq!(
            ControlMatrix::single(vec![0, 0]),
            Err(ControlError::AllZero)
        );
        assert_eq!(ControlMatrix::single(vec![0, 2]), Err(ControlError::NotBinary));
        assert_eq!(ControlMatrix::from_columns(vec![]), Err(ControlError::Empty));
        assert!(matches!(
            ControlMatrix::unit(3, 4),
            Err(ControlError::VertexOutOfRange { vertex: 4, n: 3 })
        ));
        let b = ControlMatrix::from_vertices(4, &[1, 3]).unwrap();
        assert_eq!(b.column(0), &[1, 0, 1, 0]);
        assert_eq!(b.p(), 1);
        let b = b.permute_rows(&[4, 3, 2, 1]).unwrap();
        assert_eq!(b.column(0), &[0, 1, 0, 1]);
        assert_eq!(b.zero_pad(6).unwrap().column(0), &[0, 1, 0, 1, 0, 0]);
    }

    #[test]
    fn controllable_vertex_sets() {
        assert_eq!(controllable_vertices(&path(3).unwrap()), vec![1, 3]);
        assert!(controllable_vertices(&complete(3).unwrap()).is_empty());
        assert_eq!(controllable_vertices(&antiregular(5).unwrap()), vec![3, 4]);
    }

    #[test]
    fn verdict_json_shape() {
        let l = path(2).unwrap().laplacian();
        let v = kalman_verdict(&l, &ControlMatrix::unit(2, 1).unwrap()).unwrap();
        assert_eq!(
            v.to_json(),
            r#"{"controllable":true,"method":"ExactKalman","witness":null,"rank":2}"#
        );
    }

    #[test]
    fn decide_uses_exact_for_small_graphs() {
        let l = path(4).unwrap().laplacian();
        let v = decide(&l, &ControlMatrix::unit(4, 1).unwrap()).unwrap();
        assert_eq!(v.method, Method::ExactKalman);
        assert!(v.controllable);
    }

    #[test]
    fn decide_uses_pbh_for_large_graphs() {
        let g = path(EXACT_LIMIT + 2).unwrap();
        let v = decide(&g.laplacian(), &ControlMatrix::unit(g.order(), 1).unwrap()).unwrap();
        assert_eq!(v.method, Method::Pbh);
        assert!(v.controllable);
    }
}
