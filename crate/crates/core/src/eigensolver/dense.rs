//! Dense reference solver for small grids.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;

use super::assembly::DiscreteEigenproblem;
use super::EigenPair;
use crate::error::{Error, Result};

/// Largest grid the dense path accepts.
pub const MAX_DENSE_GRID: usize = 48;

fn to_dense(a: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, &v) in a.triplet_iter() {
        d[(i, j)] = v;
    }
    d
}

/// All-pairs solve via `M = LLᵀ` and the symmetric eigenproblem of
/// `L⁻¹ K L⁻ᵀ`; returns the `m` smallest pairs.
pub fn solve_dense(problem: &DiscreteEigenproblem, m: usize) -> Result<Vec<EigenPair>> {
    if problem.dofs.grid_n() > MAX_DENSE_GRID {
        return Err(Error::invalid(format!(
            "dense solver is limited to grid_n ≤ {MAX_DENSE_GRID}"
        )));
    }
    let dim = problem.dimension();
    if m == 0 || m > dim {
        return Err(Error::invalid(format!("requested {m} modes of {dim}")));
    }
    let k = to_dense(&problem.stiffness);
    let chol = to_dense(&problem.mass)
        .cholesky()
        .ok_or_else(|| Error::Assembly("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv_k = l
        .solve_lower_triangular(&k)
        .ok_or_else(|| Error::Assembly("singular mass factor".into()))?;
    let mut c = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or_else(|| Error::Assembly("singular mass factor".into()))?;
    // symmetrize away rounding
    c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    order
        .into_iter()
        .take(m)
        .map(|idx| {
            let y: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
            let v = lt
                .solve_upper_triangular(&y)
                .ok_or_else(|| Error::Assembly("singular mass factor".into()))?;
            Ok(EigenPair::new(problem, eig.eigenvalues[idx], v.as_slice().to_vec()))
        })
        .collect()
}
