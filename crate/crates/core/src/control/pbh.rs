use crate::matrix::{dot, norm2, Matrix, SymMatrix};
use crate::spectral::{default_gtol, eig_sym, eigenspaces, normalize_sign, DEFAULT_RTOL};

use super::{ControlError, ControlMatrix, Method, Verdict};

/// Projection size below which an eigenvector counts as orthogonal to `B`.
pub const DEFAULT_PBH_TOL: f64 = 1e-8;

/// Popov-Belevitch-Hautus test.
///
/// The pair is uncontrollable iff some eigenspace contains a unit vector
/// orthogonal to every column of `B`. For an eigenspace with orthonormal
/// basis `Q` that means `QᵀB` has a left null vector `y` (up to `tol`), and
/// the witness is `Qy`. An eigenspace of dimension larger than the number of
/// inputs always has one, so for a single input any repeated eigenvalue is
/// immediately uncontrollable.
pub fn pbh_verdict(l: &SymMatrix, b: &ControlMatrix, tol: f64) -> Result<Verdict, ControlError> {
    b.check_order(l.order())?;
    if !(tol > 0.0) {
        return Err(ControlError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let dec = eig_sym(&l.to_f64(), DEFAULT_RTOL)?;
    let gtol = default_gtol(&dec.values);
    let spaces = eigenspaces(&dec, gtol);
    let columns: Vec<Vec<f64>> = (0..b.p()).map(|j| b.column_f64(j)).collect();

    for space in &spaces {
        if let Some(w) = orthogonal_direction(&space.basis, &columns, tol)? {
            let mut verdict = Verdict::new(false, Method::Pbh);
            verdict.witness = Some(w);
            return Ok(verdict);
        }
    }

    let mut verdict = Verdict::new(true, Method::Pbh);
    if dec.min_gap() <= 10.0 * gtol {
        verdict.advisory = Some(format!(
            "eigenvalue gap {:e} is within 10x of the grouping tolerance {:e}",
            dec.min_gap(),
            gtol
        ));
    }
    Ok(verdict)
}

/// A unit vector in `span(basis)` orthogonal to every column, if one exists
/// within `tol`.
fn orthogonal_direction(
    basis: &[Vec<f64>],
    columns: &[Vec<f64>],
    tol: f64,
) -> Result<Option<Vec<f64>>, ControlError> {
    let m = basis.len();
    let n = basis[0].len();
    // P = QᵀB, m x p
    let proj: Vec<Vec<f64>> = basis
        .iter()
        .map(|q| columns.iter().map(|c| dot(q, c)).collect())
        .collect();

    if m == 1 {
        let largest = proj[0].iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        return Ok((largest <= tol).then(|| basis[0].clone()));
    }

    // smallest eigenvector of P Pᵀ gives the left null direction
    let gram = Matrix::from_fn(m, m, |i, j| dot(&proj[i], &proj[j]));
    let dec = eig_sym(&gram, DEFAULT_RTOL)?;
    let y = dec.vector(0);
    let residual: Vec<f64> = (0..columns.len())
        .map(|c| (0..m).map(|i| y[i] * proj[i][c]).sum())
        .collect();
    let forced = m > columns.len();
    if !forced && norm2(&residual) > tol {
        return Ok(None);
    }
    let mut w = vec![0.0; n];
    for (yi, q) in y.iter().zip(basis) {
        w.iter_mut().zip(q).for_each(|(a, b)| *a += yi * b);
    }
    let nw = norm2(&w);
    w.iter_mut().for_each(|x| *x /= nw);
    normalize_sign(&mut w);
    Ok(Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path};
    use crate::matrix::norm_inf;
    use crate::spectral::residual;

    fn witness_ok(l: &SymMatrix, b: &ControlMatrix, w: &[f64], tol: f64) {
        let rq = dot(w, &l.to_f64().mul_vec(w));
        assert!(residual(&l.to_f64(), rq, w) <= tol);
        for j in 0..b.p() {
            assert!(dot(w, &b.column_f64(j)).abs() <= tol);
        }
        assert!((norm2(w) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn p3_midpoint_is_uncontrollable() {
        let l = path(3).unwrap().laplacian();
        let b = ControlMatrix::unit(3, 2).unwrap();
        let v = pbh_verdict(&l, &b, DEFAULT_PBH_TOL).unwrap();
        assert!(!v.controllable);
        let w = v.witness.unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((w[0] - h).abs() < 1e-10 && w[1].abs() < 1e-10 && (w[2] + h).abs() < 1e-10);
        witness_ok(&l, &b, &w, DEFAULT_PBH_TOL);
    }

    #[test]
    fn p2_end_is_controllable() {
        let l = path(2).unwrap().laplacian();
        let v = pbh_verdict(&l, &ControlMatrix::unit(2, 1).unwrap(), DEFAULT_PBH_TOL).unwrap();
        assert!(v.controllable);
        assert!(v.witness.is_none());
    }

    #[test]
    fn repeated_eigenvalue_forces_uncontrollable() {
        for k in 3..=5 {
            let l = complete(k).unwrap().laplacian();
            let b = ControlMatrix::unit(k, 1).unwrap();
            let v = pbh_verdict(&l, &b, DEFAULT_PBH_TOL).unwrap();
            assert!(!v.controllable);
            let w = v.witness.unwrap();
            witness_ok(&l, &b, &w, DEFAULT_PBH_TOL);
            assert!(norm_inf(&w) > 0.0);
        }
    }

    #[test]
    fn multi_input_can_cover_a_repeated_eigenvalue() {
        // K3 with inputs on vertices 1 and 2: eigenspace for 3 is 2-dimensional
        // and both inputs together see all of it.
        let l = complete(3).unwrap().laplacian();
        let b = ControlMatrix::from_vertex_sets(3, &[vec![1], vec![2]]).unwrap();
        assert!(pbh_verdict(&l, &b, DEFAULT_PBH_TOL).unwrap().controllable);
    }

    #[test]
    fn dimension_mismatch() {
        let l = path(3).unwrap().laplacian();
        let b = ControlMatrix::unit(2, 1).unwrap();
        assert!(matches!(
            pbh_verdict(&l, &b, DEFAULT_PBH_TOL),
            Err(ControlError::DimensionMismatch { .. })
        ));
    }
}
