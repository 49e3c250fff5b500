use serde::{Deserialize, Serialize};

use crate::control::{decide, kalman_rank_exact, ControlMatrix, Verdict};
use crate::graph::Graph;
use crate::matrix::{Matrix, SymMatrix};
use crate::spectral::{eig_sym, DEFAULT_RTOL};

use super::ComposeError;

/// `k1` copies of `cell`, one per vertex of `structure`, with copy `i`
/// occupying indices `(i-1) k2 + 1 ..= i k2` and the copies joined through
/// their vertex `s` along the structure's edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawComposite")]
pub struct CompositeSpec {
    pub structure: Graph,
    pub cell: Graph,
    pub s: usize,
}

#[derive(Deserialize)]
struct RawComposite {
    structure: Graph,
    cell: Graph,
    s: usize,
}

impl TryFrom<RawComposite> for CompositeSpec {
    type Error = ComposeError;

    fn try_from(r: RawComposite) -> Result<Self, Self::Error> {
        CompositeSpec::new(r.structure, r.cell, r.s)
    }
}

impl CompositeSpec {
    pub fn new(structure: Graph, cell: Graph, s: usize) -> Result<Self, ComposeError> {
        let spec = CompositeSpec { structure, cell, s };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ComposeError> {
        if !self.structure.is_connected() {
            return Err(ComposeError::InvalidSpec("structure graph is not connected".into()));
        }
        if !self.cell.is_connected() {
            return Err(ComposeError::InvalidSpec("cell graph is not connected".into()));
        }
        if self.s == 0 || self.s > self.cell.order() {
            return Err(ComposeError::InvalidSpec(format!(
                "s = {} outside 1..={}",
                self.s,
                self.cell.order()
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.structure.order() * self.cell.order()
    }

    /// Composite index of vertex `s` in copy `w`: `(w-1) k2 + s`.
    pub fn composite_vertex(&self, w: usize) -> usize {
        (w - 1) * self.cell.order() + self.s
    }
}

pub fn composite(spec: &CompositeSpec) -> Result<Graph, ComposeError> {
    spec.validate()?;
    let k2 = spec.cell.order();
    let mut g = Graph::empty(spec.order())?;
    for copy in 0..spec.structure.order() {
        let off = copy * k2;
        for (u, v) in spec.cell.edges() {
            g.add_edge(u + off, v + off)?;
        }
    }
    for (i, j) in spec.structure.edges() {
        g.add_edge(spec.composite_vertex(i), spec.composite_vertex(j))?;
    }
    Ok(g)
}

/// `I ⊗ L2 + L1 ⊗ e_s e_sᵀ`.
pub fn composite_laplacian_formula(spec: &CompositeSpec) -> Result<SymMatrix, ComposeError> {
    spec.validate()?;
    let k1 = spec.structure.order();
    let k2 = spec.cell.order();
    let l1 = spec.structure.laplacian().into_matrix();
    let l2 = spec.cell.laplacian().into_matrix();
    let mut ess = Matrix::<i64>::zeros(k2, k2);
    ess[(spec.s - 1, spec.s - 1)] = 1;
    let m = Matrix::identity_int(k1).kron(&l2).add_int(&l1.kron(&ess));
    Ok(SymMatrix::new(m).expect("sum of symmetric Kronecker products"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Eigenpairs of the composite Laplacian assembled from smaller problems:
/// for each structure eigenpair `(λ, v)`, the eigenvectors `u` of
/// `L2 + λ e_s e_sᵀ` give composite eigenvectors `v ⊗ u` with the same
/// eigenvalues. Sorted by value.
pub fn composite_modal(spec: &CompositeSpec) -> Result<Vec<EigenPair>, ComposeError> {
    spec.validate()?;
    let k2 = spec.cell.order();
    let outer = eig_sym(&spec.structure.laplacian().to_f64(), DEFAULT_RTOL)?;
    let l2 = spec.cell.laplacian().to_f64();
    let mut pairs = Vec::with_capacity(spec.order());
    for (i, &lambda) in outer.values.iter().enumerate() {
        let mut m = l2.clone();
        m[(spec.s - 1, spec.s - 1)] += lambda;
        let inner = eig_sym(&m, DEFAULT_RTOL)?;
        let v = outer.vector(i);
        for (j, &mu) in inner.values.iter().enumerate() {
            let u = inner.vector(j);
            let mut w = Vec::with_capacity(v.len() * k2);
            for a in &v {
                w.extend(u.iter().map(|b| a * b));
            }
            pairs.push(EigenPair { value: mu, vector: w });
        }
    }
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositePrediction {
    /// Composite input vertex `(w-1) k2 + s`.
    pub input_index: usize,
    /// The structure's own verdict at `w`, transported to the composite.
    pub verdict: Verdict,
}

/// Predicts controllability of the composite from `(w-1) k2 + s` by
/// deciding the structure at `w`. Refuses unless the cell is controllable
/// from `s`, which is checked exactly.
pub fn predict_composite(spec: &CompositeSpec, w: usize) -> Result<CompositePrediction, ComposeError> {
    spec.validate()?;
    spec.structure.check_vertex(w)?;
    let k2 = spec.cell.order();
    let cell_b = ControlMatrix::unit(k2, spec.s)?;
    if kalman_rank_exact(&spec.cell.laplacian(), &cell_b)? != k2 {
        return Err(ComposeError::HypothesisNotMet { s: spec.s });
    }
    let k1 = spec.structure.order();
    let verdict = decide(&spec.structure.laplacian(), &ControlMatrix::unit(k1, w)?)?;
    Ok(CompositePrediction {
        input_index: spec.composite_vertex(w),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::kalman_verdict;
    use crate::graph::{antiregular, path};
    use crate::matrix::dot;
    use crate::spectral::residual;

    fn spec(a: Graph, b: Graph, s: usize) -> CompositeSpec {
        CompositeSpec::new(a, b, s).unwrap()
    }

    #[test]
    fn p2_of_p2() {
        let sp = spec(path(2).unwrap(), path(2).unwrap(), 1);
        let g = composite(&sp).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (3, 4)]);
        let want = vec![
            vec![2, -1, -1, 0],
            vec![-1, 1, 0, 0],
            vec![-1, 0, 2, -1],
            vec![0, 0, -1, 1],
        ];
        assert_eq!(g.laplacian().as_matrix().to_rows(), want);
        assert_eq!(composite_laplacian_formula(&sp).unwrap(), g.laplacian());
    }

    #[test]
    fn trivial_structure_is_the_cell() {
        let cell = antiregular(5).unwrap();
        for s in 1..=5 {
            assert_eq!(composite(&spec(path(1).unwrap(), cell.clone(), s)).unwrap(), cell);
        }
    }

    #[test]
    fn showcase_size() {
        let sp = spec(antiregular(7).unwrap(), antiregular(5).unwrap(), 3);
        let g = composite(&sp).unwrap();
        assert_eq!(g.order(), 35);
        assert_eq!(g.size(), 7 * 6 + 12);
        assert_eq!(composite_laplacian_formula(&sp).unwrap(), g.laplacian());
    }

    #[test]
    fn modal_pairs_are_orthogonal_eigenpairs() {
        let sp = spec(path(2).unwrap(), antiregular(5).unwrap(), 3);
        let l = composite(&sp).unwrap().laplacian().to_f64();
        let pairs = composite_modal(&sp).unwrap();
        assert_eq!(pairs.len(), 10);
        for (i, p) in pairs.iter().enumerate() {
            assert!(residual(&l, p.value, &p.vector) < 1e-8);
            for q in &pairs[i + 1..] {
                assert!(dot(&p.vector, &q.vector).abs() < 1e-8);
            }
        }
        let direct = eig_sym(&l, DEFAULT_RTOL).unwrap();
        for (p, d) in pairs.iter().zip(&direct.values) {
            assert!((p.value - d).abs() < 1e-8);
        }
    }

    #[test]
    fn predictions() {
        let sp = spec(path(2).unwrap(), path(2).unwrap(), 1);
        let p = predict_composite(&sp, 1).unwrap();
        assert!(p.verdict.controllable);
        assert_eq!(p.input_index, 1);

        let sp = spec(path(3).unwrap(), path(2).unwrap(), 1);
        let p = predict_composite(&sp, 2).unwrap();
        assert!(!p.verdict.controllable);
        assert_eq!(p.input_index, 3);
        let g = composite(&sp).unwrap();
        let oracle = kalman_verdict(&g.laplacian(), &ControlMatrix::unit(6, 3).unwrap()).unwrap();
        assert!(!oracle.controllable);

        let sp = spec(path(2).unwrap(), path(3).unwrap(), 2);
        assert_eq!(
            predict_composite(&sp, 1),
            Err(ComposeError::HypothesisNotMet { s: 2 })
        );
    }

    #[test]
    fn validation() {
        assert!(CompositeSpec::new(path(2).unwrap(), path(2).unwrap(), 3).is_err());
        assert!(CompositeSpec::new(Graph::empty(2).unwrap(), path(2).unwrap(), 1).is_err());
        let json = format!(
            r#"{{"structure":{},"cell":{},"s":1}}"#,
            path(2).unwrap().to_json(),
            path(3).unwrap().to_json()
        );
        let sp: CompositeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(sp.order(), 6);
        let bad = json.replace("\"s\":1", "\"s\":0");
        assert!(serde_json::from_str::<CompositeSpec>(&bad).is_err());
    }
}
