//! Closed-form Laplacian spectra and eigenvectors for antiregular graphs and
//! paths, plus the spectrum-vs-conjugate majorization check.

use std::f64::consts::PI;

use crate::degree::DegreeSequence;
use crate::graph::antiregular;
use crate::matrix::Matrix;

use super::SpectralError;

/// `{0, 1, ..., k} \ {ceil(k/2)}`, ascending.
pub fn antiregular_spectrum(k: usize) -> Result<Vec<i64>, SpectralError> {
    if k < 2 {
        return Err(SpectralError::OrderTooSmall { min: 2, k });
    }
    let skip = k.div_ceil(2);
    Ok((0..=k).filter(|&x| x != skip).map(|x| x as i64).collect())
}

/// Integer eigenvector matrix of the antiregular Laplacian.
///
/// Starting from `T1 = L`:
/// 1. `T2` replaces each strict upper entry `t` by `-1 - t`;
/// 2. `T3` replaces each diagonal entry by minus the sum of the other entries
///    in its column of `T2`;
/// 3. the single all-zero column of `T3` is dropped and a column of ones is
///    appended.
///
/// Column `j` (0-based) is an eigenvector for the `(j+1)`-th largest
/// eigenvalue, which equals the `(j+1)`-th entry of the conjugate degree
/// sequence. The appended column uses `+1`; `-1` would serve equally.
pub fn antiregular_modal(k: usize) -> Result<Matrix<i64>, SpectralError> {
    let g = antiregular(k).map_err(|_| SpectralError::OrderTooSmall { min: 2, k })?;
    let t1 = g.laplacian().into_matrix();

    let mut t2 = t1.clone();
    for i in 0..k {
        for j in (i + 1)..k {
            t2[(i, j)] = -1 - t1[(i, j)];
        }
    }

    let mut t3 = t2.clone();
    for j in 0..k {
        t3[(j, j)] = -(0..k).filter(|&i| i != j).map(|i| t2[(i, j)]).sum::<i64>();
    }

    let zero_cols: Vec<usize> = (0..k)
        .filter(|&j| (0..k).all(|i| t3[(i, j)] == 0))
        .collect();
    let [zero] = zero_cols[..] else {
        return Err(SpectralError::Construction(format!(
            "expected exactly one zero column in T3 for k={k}, found {zero_cols:?}"
        )));
    };

    let mut columns: Vec<Vec<i64>> = (0..k).filter(|&j| j != zero).map(|j| t3.column(j)).collect();
    columns.push(vec![1; k]);
    Ok(Matrix::from_columns(&columns).expect("columns have equal length"))
}

/// `2 - 2 cos((i-1)π/k)` for `i = 1..=k`, ascending.
pub fn path_spectrum(k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| 2.0 - 2.0 * (i as f64 * PI / k as f64).cos())
        .collect()
}

/// Cosine eigenvectors of the path Laplacian: column `i` (1-based) has entries
/// `cos((i-1)(2j-1)π/(2k))`, paired with `path_spectrum(k)[i-1]`.
pub fn path_modal(k: usize) -> Result<Matrix<f64>, SpectralError> {
    if k == 0 {
        return Err(SpectralError::OrderTooSmall { min: 1, k });
    }
    let kf = k as f64;
    Ok(Matrix::from_fn(k, k, |row, col| {
        let (i, j) = (col as f64, (row + 1) as f64);
        let angle = i * (2.0 * j - 1.0) * PI / (2.0 * kf);
        snap_zero(angle.cos())
    }))
}

/// `cos` of an odd multiple of π/2 comes back as ~1e-16; report it as zero.
fn snap_zero(x: f64) -> f64 {
    if x.abs() < 1e-14 {
        0.0
    } else {
        x
    }
}

/// Whether the ascending Laplacian spectrum is majorized by the conjugate
/// degree sequence: `sum_{i<=t} ℓ_{k-i+1} <= sum_{i<=t} d*_i` for every `t`,
/// within `1e-8 · k`.
pub fn check_majorization(values: &[f64], conjugate: &DegreeSequence) -> Result<bool, SpectralError> {
    if values.len() != conjugate.len() {
        return Err(SpectralError::LengthMismatch {
            values: values.len(),
            sequence: conjugate.len(),
        });
    }
    let tol = 1e-8 * values.len() as f64;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (l, &d) in values.iter().rev().zip(conjugate.as_slice()) {
        lhs += l;
        rhs += d as f64;
        if lhs > rhs + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path;

    #[test]
    fn antiregular_spectra() {
        assert_eq!(antiregular_spectrum(5).unwrap(), vec![0, 1, 2, 4, 5]);
        assert_eq!(antiregular_spectrum(4).unwrap(), vec![0, 1, 3, 4]);
        assert_eq!(antiregular_spectrum(2).unwrap(), vec![0, 2]);
        assert!(antiregular_spectrum(1).is_err());
    }

    #[test]
    fn modal_k2() {
        let t = antiregular_modal(2).unwrap();
        assert_eq!(t.column(0), vec![1, -1]);
        assert_eq!(t.column(1), vec![1, 1]);
    }

    #[test]
    fn modal_k5_exact() {
        let k = 5;
        let t = antiregular_modal(k).unwrap();
        let l = antiregular(k).unwrap().laplacian().into_matrix();
        let lt = l.matmul_int(&t);
        let dstar = antiregular(k).unwrap().degree_sequence().conjugate();
        assert_eq!(dstar.as_slice(), &[5, 4, 2, 1, 0]);
        for j in 0..k {
            let lambda = dstar.as_slice()[j] as i64;
            for i in 0..k {
                assert_eq!(lt[(i, j)], lambda * t[(i, j)], "column {j}");
            }
        }
        // the eigenvalue-5 column pairs with d*_1
        assert_eq!(t.column(0), vec![4, -1, -1, -1, -1]);
        let gram = t.transpose().matmul_int(&t);
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    assert_eq!(gram[(i, j)], 0);
                }
            }
        }
    }

    #[test]
    fn path_modal_examples() {
        let m = path_modal(3).unwrap();
        let c = m.column(1);
        assert!((c[0] - (PI / 6.0).cos()).abs() < 1e-15);
        assert_eq!(c[1], 0.0);
        assert!((c[2] - (5.0 * PI / 6.0).cos()).abs() < 1e-15);
        assert_eq!(path_modal(1).unwrap().to_rows(), vec![vec![1.0]]);
        let c = path_modal(2).unwrap().column(1);
        assert!((c[0] + c[1]).abs() < 1e-15 && c[0] > 0.0);
        assert!(path_modal(0).is_err());
    }

    #[test]
    fn path_modal_columns_are_eigenvectors() {
        for k in 1..=12 {
            let l = path(k).unwrap().laplacian().to_f64();
            let m = path_modal(k).unwrap();
            let vals = path_spectrum(k);
            for i in 0..k {
                let v = m.column(i);
                let r = super::super::eig::residual(&l, vals[i], &v);
                assert!(r < 1e-12, "k={k} i={i} r={r}");
            }
        }
    }

    #[test]
    fn majorization_examples() {
        let ds = |v: &[usize]| DegreeSequence::new(v.to_vec()).unwrap();
        assert!(check_majorization(&[0.0, 1.0, 2.0, 4.0, 5.0], &ds(&[5, 4, 2, 1, 0])).unwrap());
        assert!(check_majorization(&[0.0, 1.0, 3.0], &ds(&[3, 1, 0])).unwrap());
        assert!(check_majorization(&[0.0, 3.0, 3.0], &ds(&[3, 3, 0])).unwrap());
        assert!(!check_majorization(&[0.0, 1.0, 4.0], &ds(&[3, 1, 0])).unwrap());
        assert!(check_majorization(&[0.0, 1.0], &ds(&[3, 1, 0])).is_err());
    }
}
