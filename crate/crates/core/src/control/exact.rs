//! Fraction-free elimination over big integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Row echelon form grown one row at a time by Bareiss elimination.
///
/// An incoming row is reduced against each stored pivot row `r_k` (pivot
/// column `c_k`, pivot `p_k`) as `v <- (p_k v - v[c_k] r_k) / p_{k-1}`, with
/// `p_0 = 1`. Every intermediate entry is a minor of the rows seen so far, so
/// each division is exact.
#[derive(Debug, Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns whether the rank grew.
    pub(crate) fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        let mut prev = BigInt::one();
        for (c, r) in &self.rows {
            let p = &r[*c];
            let f = v[*c].clone();
            for (x, y) in v.iter_mut().zip(r) {
                let num = p * &*x - &f * y;
                *x = num / &prev;
            }
            prev = p.clone();
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(c) => {
                self.rows.push((c, v));
                true
            }
            None => false,
        }
    }
}

/// Positive definiteness of a symmetric integer matrix: every leading
/// principal minor is positive. The minors are the successive Bareiss pivots,
/// taken without row exchanges.
pub(crate) fn is_positive_definite(mut m: Vec<Vec<BigInt>>) -> bool {
    let n = m.len();
    let mut prev = BigInt::one();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        let pivot = m[k][k].clone();
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &pivot * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = pivot;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn echelon_rank() {
        let mut e = Echelon::default();
        for r in big(&[&[2, 4, 6], &[1, 2, 3], &[0, 1, 1], &[2, 5, 7], &[0, 0, 5]]) {
            e.insert(r);
        }
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn echelon_pivot_out_of_order() {
        let mut e = Echelon::default();
        assert!(e.insert(big(&[&[0, 3, 1]]).remove(0)));
        assert!(e.insert(big(&[&[2, 0, 0]]).remove(0)));
        assert!(!e.insert(big(&[&[4, 6, 2]]).remove(0)));
        assert!(e.insert(big(&[&[0, 0, 7]]).remove(0)));
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn definiteness() {
        assert!(is_positive_definite(big(&[&[2, -1], &[-1, 2]])));
        assert!(!is_positive_definite(big(&[&[1, 1], &[1, 1]])));
        assert!(!is_positive_definite(big(&[&[1, 2], &[2, 1]])));
        assert!(!is_positive_definite(big(&[&[0, 0], &[0, 1]])));
        assert!(is_positive_definite(big(&[
            &[4, 1, 0],
            &[1, 3, 1],
            &[0, 1, 2]
        ])));
    }
}
