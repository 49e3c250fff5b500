use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `C_j = {j, j + (2j+1), j + 2(2j+1), ...}` for `j >= 1`.
///
/// `m ∈ C_j` iff `2j+1` divides `2m+1`, so a number can belong to several
/// classes (4 is in `C_1` and `C_4`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CjClass {
    pub j: usize,
}

impl CjClass {
    pub fn contains(&self, m: usize) -> bool {
        self.j >= 1 && m >= self.j && (m - self.j) % (2 * self.j + 1) == 0
    }
}

/// Smallest `j` with `m ∈ C_j`; `None` for `m = 0`.
pub fn cj_index(m: usize) -> Option<usize> {
    (1..=m).find(|&j| CjClass { j }.contains(m))
}

/// Whether a path split into side lengths `k11` and `k12` around the input
/// vertex is controllable: true iff no `C_j` holds both. Equivalently
/// `gcd(2 k11 + 1, 2 k12 + 1) = 1`.
pub fn path_split_controllable(k11: usize, k12: usize) -> bool {
    (2 * k11 + 1).gcd(&(2 * k12 + 1)) == 1
}
