use super::{residuals_of, EigenError, SolvePath, SparseOperator, Spectrum};
use num_complex::Complex64;

/// Full Hermitian diagonalization, returning the `k` lowest pairs.
pub(super) fn dense_lowest(
    op: &SparseOperator,
    k: usize,
    _tol: f64,
) -> Result<Spectrum, EigenError> {
    let m = op.to_dense();
    let eig = m.symmetric_eigen();

    let mut order: Vec<usize> = (0..op.dim()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
    });

    let pairs: Vec<(f64, Vec<Complex64>)> = order[..k]
        .iter()
        .map(|&i| {
            let v: Vec<Complex64> = eig.eigenvectors.column(i).iter().copied().collect();
            (eig.eigenvalues[i], v)
        })
        .collect();
    let residuals = residuals_of(op, &pairs);

    let (eigenvalues, vectors): (Vec<f64>, Vec<Vec<Complex64>>) = pairs.into_iter().unzip();
    Ok(Spectrum {
        eigenvalues,
        vectors: Some(vectors),
        residuals,
        path: SolvePath::Dense,
        start_seed: None,
    })
}
