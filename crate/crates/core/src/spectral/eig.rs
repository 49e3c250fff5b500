//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::matrix::{dot, norm2, norm_inf, Matrix};

use super::SpectralError;

/// Off-diagonal Frobenius mass, relative to `‖M‖_F`, at which sweeps stop.
pub const CONVERGENCE: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Default residual tolerance for [`eig_sym`], relative to `‖M‖∞`.
pub const DEFAULT_RTOL: f64 = 1e-9;
/// Relative asymmetry tolerated for floating-point input.
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order with orthonormal eigenvectors as the
/// columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigDecomp {
    pub values: Vec<f64>,
    pub vectors: Matrix<f64>,
}

impl EigDecomp {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    /// Smallest gap between consecutive eigenvalues (infinite for order 1).
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

impl Serialize for EigDecomp {
    /// `{"values": [...], "modal": [[column 1], [column 2], ...]}`
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("EigDecomp", 2)?;
        st.serialize_field("values", &self.values)?;
        st.serialize_field("modal", &self.vectors.columns())?;
        st.end()
    }
}

/// One eigenvalue cluster and an orthonormal basis of its eigenspace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenspace {
    pub value: f64,
    pub basis: Vec<Vec<f64>>,
}

impl Eigenspace {
    pub fn multiplicity(&self) -> usize {
        self.basis.len()
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// Deterministic: fixed row-cyclic sweep order, eigenvalues sorted ascending
/// (stable), and each eigenvector scaled so its largest-magnitude entry is
/// positive, the lowest index winning ties. After convergence every column is
/// checked against `‖M v - λ v‖∞ <= rtol ‖M‖∞`.
pub fn eig_sym(m: &Matrix<f64>, rtol: f64) -> Result<EigDecomp, SpectralError> {
    if !m.is_square() {
        return Err(SpectralError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !(rtol > 0.0) {
        return Err(SpectralError::BadTolerance(rtol));
    }
    let asym = m.relative_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(SpectralError::NotSymmetric(asym));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let target = CONVERGENCE * m.norm_frobenius();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal(&a) > target {
        return Err(SpectralError::NoConvergence {
            sweeps: MAX_SWEEPS,
            off: off_diagonal(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let columns: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut col = v.column(i);
            normalize_sign(&mut col);
            col
        })
        .collect();
    let vectors = Matrix::from_columns(&columns).unwrap_or_else(|_| Matrix::zeros(n, n));

    let scale = m.norm_inf();
    for (j, col) in columns.iter().enumerate() {
        let r = residual(m, values[j], col);
        if r > rtol * scale {
            return Err(SpectralError::Residual {
                column: j,
                residual: r,
            });
        }
    }
    Ok(EigDecomp { values, vectors })
}

/// `‖M v - λ v‖∞`.
pub fn residual(m: &Matrix<f64>, value: f64, v: &[f64]) -> f64 {
    let mv = m.mul_vec(v);
    mv.iter()
        .zip(v)
        .fold(0.0, |acc, (a, b)| acc.max((a - value * b).abs()))
}

fn off_diagonal(a: &Matrix<f64>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut Matrix<f64>, v: &mut Matrix<f64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Flip `v` so its largest-magnitude entry is positive; entries within a
/// relative 1e-9 of the maximum count as ties and the lowest index wins.
pub(crate) fn normalize_sign(v: &mut [f64]) {
    let big = norm_inf(v);
    if big == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.abs() >= big * (1.0 - 1e-9))
        .unwrap_or(0);
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Default grouping tolerance `1e-7 · max(1, max |λ|)`.
pub fn default_gtol(values: &[f64]) -> f64 {
    1e-7 * values.iter().fold(1.0_f64, |m, x| m.max(x.abs()))
}

/// Groups eigenvalues whose consecutive gaps are at most `gtol` and returns
/// one re-orthonormalized basis per group.
pub fn eigenspaces(dec: &EigDecomp, gtol: f64) -> Vec<Eigenspace> {
    let mut out = Vec::new();
    let mut start = 0;
    let n = dec.order();
    while start < n {
        let mut end = start + 1;
        while end < n && dec.values[end] - dec.values[end - 1] <= gtol {
            end += 1;
        }
        let value = dec.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        let basis = orthonormalize((start..end).map(|j| dec.vector(j)).collect());
        out.push(Eigenspace { value, basis });
        start = end;
    }
    out
}

/// Modified Gram-Schmidt; vectors that collapse are dropped.
pub(crate) fn orthonormalize(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for b in &basis {
            let proj = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
        }
        let nv = norm2(&v);
        if nv > 1e-10 {
            v.iter_mut().for_each(|x| *x /= nv);
            normalize_sign(&mut v);
            basis.push(v);
        }
    }
    basis
}
