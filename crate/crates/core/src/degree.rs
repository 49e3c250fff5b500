//! Degree sequences, their conjugates and traces, and the Ferrers-diagram
//! graphicality test.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error("degree sequence must be nonincreasing (position {0})")]
    NotNonincreasing(usize),
}

/// A nonincreasing sequence of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DegreeSequence(Vec<usize>);

impl TryFrom<Vec<usize>> for DegreeSequence {
    type Error = DegreeError;

    fn try_from(d: Vec<usize>) -> Result<Self, Self::Error> {
        DegreeSequence::new(d)
    }
}

impl From<DegreeSequence> for Vec<usize> {
    fn from(d: DegreeSequence) -> Self {
        d.0
    }
}

impl DegreeSequence {
    pub fn new(d: Vec<usize>) -> Result<Self, DegreeError> {
        if let Some(i) = d.windows(2).position(|w| w[0] < w[1]) {
            return Err(DegreeError::NotNonincreasing(i + 1));
        }
        Ok(DegreeSequence(d))
    }

    /// Sorts `d` into nonincreasing order.
    pub fn from_unsorted(mut d: Vec<usize>) -> Self {
        d.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(d)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// `d*_i = |{j : d_j >= i}|` for `i = 1..=len`.
    pub fn conjugate(&self) -> DegreeSequence {
        let k = self.0.len();
        DegreeSequence((1..=k).map(|i| self.0.iter().filter(|&&d| d >= i).count()).collect())
    }

    /// `|{j : d_j >= j}|` with 1-based `j`.
    pub fn trace(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|&(j, &d)| d > j)
            .count()
    }

    /// Prefix differences `sum_{i<=j} d*_i - sum_{i<=j} (d_i + 1)` for
    /// `j = 1..=trace`.
    fn ferrers_slack(&self) -> Vec<i64> {
        let conj = self.conjugate();
        let mut lhs = 0i64;
        let mut rhs = 0i64;
        (0..self.trace())
            .map(|j| {
                lhs += self.0[j] as i64 + 1;
                rhs += conj.0[j] as i64;
                rhs - lhs
            })
            .collect()
    }

    /// Realizable by a simple graph: the conjugate inequalities hold for every
    /// `j` up to the trace and the degree sum is even.
    pub fn is_graphical(&self) -> bool {
        self.sum() % 2 == 0 && self.ferrers_slack().iter().all(|&s| s >= 0)
    }

    /// Equality in every conjugate inequality, i.e. the sequence of a
    /// threshold graph.
    pub fn is_threshold(&self) -> bool {
        self.sum() % 2 == 0 && self.ferrers_slack().iter().all(|&s| s == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(v: &[usize]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(ds(&[4, 3, 2, 2, 1]).conjugate(), ds(&[5, 4, 2, 1, 0]));
        assert_eq!(ds(&[1, 1]).conjugate(), ds(&[2, 0]));
        assert_eq!(
            ds(&[4, 3, 2, 2, 1]).conjugate().conjugate(),
            ds(&[4, 3, 2, 2, 1])
        );
    }

    #[test]
    fn traces() {
        assert_eq!(ds(&[4, 3, 2, 2, 1]).trace(), 2);
        assert_eq!(ds(&[2, 2, 2]).trace(), 2);
        assert_eq!(ds(&[1, 1]).trace(), 1);
        assert_eq!(ds(&[0]).trace(), 0);
    }

    #[test]
    fn graphical_examples() {
        assert!(ds(&[2, 2, 2]).is_graphical());
        assert!(!ds(&[3, 3, 1, 1]).is_graphical());
        assert!(ds(&[4, 3, 2, 2, 1]).is_graphical());
        assert!(ds(&[0]).is_graphical());
        // parity alone
        assert!(!ds(&[1]).is_graphical());
        assert!(!ds(&[2, 1, 1, 1]).is_graphical());
        // degree exceeds k - 1
        assert!(!ds(&[3, 1, 1]).is_graphical());
    }

    #[test]
    fn threshold_equality() {
        assert!(ds(&[4, 3, 2, 2, 1]).is_threshold());
        assert!(ds(&[2, 2, 2]).is_threshold());
        // P4 is graphical but not threshold
        assert!(ds(&[2, 2, 1, 1]).is_graphical());
        assert!(!ds(&[2, 2, 1, 1]).is_threshold());
    }

    #[test]
    fn rejects_increasing() {
        assert_eq!(
            DegreeSequence::new(vec![1, 2]),
            Err(DegreeError::NotNonincreasing(1))
        );
        assert!(serde_json::from_str::<DegreeSequence>("[1,3]").is_err());
    }
}
