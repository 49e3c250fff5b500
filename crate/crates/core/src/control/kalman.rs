use num_bigint::BigInt;

use crate::matrix::SymMatrix;

use super::exact::Echelon;
use super::{ControlError, ControlMatrix, Method, Verdict};

/// Rank of `[B, LB, ..., L^{n-1}B]` over the rationals.
///
/// Krylov blocks are generated one at a time in big-integer arithmetic and
/// fed into an incremental Bareiss echelon form. Once a whole block adds no
/// rank, every later block lies in the same span, so generation stops there.
pub fn kalman_rank_exact(l: &SymMatrix, b: &ControlMatrix) -> Result<usize, ControlError> {
    let n = l.order();
    b.check_order(n)?;
    let lm = l.as_matrix();
    let mut block: Vec<Vec<BigInt>> = b
        .columns()
        .iter()
        .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut echelon = Echelon::default();

    for _ in 0..n {
        let mut grew = false;
        for v in &block {
            grew |= echelon.insert(v.clone());
        }
        if !grew || echelon.rank() == n {
            break;
        }
        block = block
            .iter()
            .map(|v| {
                (0..n)
                    .map(|i| {
                        lm.row(i)
                            .iter()
                            .zip(v)
                            .filter(|(a, _)| **a != 0)
                            .map(|(a, x)| x * *a)
                            .sum()
                    })
                    .collect()
            })
            .collect();
    }
    Ok(echelon.rank())
}

/// Exact Kalman decision; `rank` is always set.
pub fn kalman_verdict(l: &SymMatrix, b: &ControlMatrix) -> Result<Verdict, ControlError> {
    let rank = kalman_rank_exact(l, b)?;
    let mut verdict = Verdict::new(rank == l.order(), Method::ExactKalman);
    verdict.rank = Some(rank);
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{antiregular, complete, path};

    fn rank(g: &crate::graph::Graph, v: usize) -> usize {
        kalman_rank_exact(&g.laplacian(), &ControlMatrix::unit(g.order(), v).unwrap()).unwrap()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&path(2).unwrap(), 1), 2);
        assert_eq!(rank(&path(3).unwrap(), 2), 2);
        assert_eq!(rank(&complete(3).unwrap(), 1), 2);
        assert_eq!(rank(&path(1).unwrap(), 1), 1);
    }

    #[test]
    fn single_input_rank_counts_distinct_visible_modes() {
        // K_k from one vertex sees only the eigenvalues 0 and k
        for k in 2..=6 {
            assert_eq!(rank(&complete(k).unwrap(), 1), 2);
        }
        // AR(5) from the dominating vertex: eigenvalue 5 and 0 only
        assert_eq!(rank(&antiregular(5).unwrap(), 1), 2);
    }

    #[test]
    fn long_path_end_is_controllable() {
        let g = path(40).unwrap();
        assert_eq!(rank(&g, 1), 40);
        assert_eq!(rank(&g, 40), 40);
    }

    #[test]
    fn multi_input() {
        let g = complete(3).unwrap();
        let b = ControlMatrix::from_vertex_sets(3, &[vec![1], vec![2]]).unwrap();
        assert_eq!(kalman_rank_exact(&g.laplacian(), &b).unwrap(), 3);
        let b = ControlMatrix::from_vertex_sets(3, &[vec![1, 2]]).unwrap();
        assert_eq!(kalman_rank_exact(&g.laplacian(), &b).unwrap(), 2);
    }

    #[test]
    fn verdict_carries_rank() {
        let g = path(3).unwrap();
        let v = kalman_verdict(&g.laplacian(), &ControlMatrix::unit(3, 2).unwrap()).unwrap();
        assert!(!v.controllable);
        assert_eq!(v.rank, Some(2));
        assert_eq!(v.method, Method::ExactKalman);
    }
}
