//! Block Krylov iteration with full reorthogonalization and Ritz restarts.
//!
//! The projected matrix `T = V^+ A V` is maintained explicitly, so the
//! orthogonalization is plain (repeated) Gram-Schmidt against the whole
//! basis. Full reorthogonalization is deliberate: gadget spectra have
//! near-degenerate clusters separated by huge gaps, where selective schemes
//! produce ghost eigenvalues. The block structure resolves degenerate
//! multiplets that single-vector Lanczos misses.

use super::{vec_norm, EigenError, SolvePath, SparseOperator, Spectrum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GS_PASSES: usize = 2;
const BREAKDOWN: f64 = 1e-12;
const MAX_CYCLES: usize = 400;

pub(super) fn krylov_lowest(
    op: &SparseOperator,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<Spectrum, EigenError> {
    let dim = op.dim();
    let block = (k + 2).clamp(4, 8).min(dim);
    let m_max = (k + 2 * block + 104).min(dim);
    let keep = (k + 2 * block).min(m_max.saturating_sub(block)).max(k);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m_max);
    let mut t = DMatrix::<Complex64>::zeros(0, 0);

    for _ in 0..block {
        push_direction(op, &mut basis, &mut t, None, &mut rng);
    }
    // Sources are consumed round-robin so each seed grows its own chain.
    let mut next_src = 0usize;

    let mut best_residual = f64::INFINITY;
    for _cycle in 0..MAX_CYCLES {
        while basis.len() < m_max {
            push_direction(op, &mut basis, &mut t, Some(next_src), &mut rng);
            next_src += 1;
        }

        // Ritz pairs of the projected matrix, lowest first.
        let eig = t.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("finite eigenvalues")
        });

        let kept: Vec<(f64, Vec<Complex64>)> = order[..keep.min(basis.len())]
            .iter()
            .map(|&i| {
                let y = eig.eigenvectors.column(i);
                let mut v = vec![Complex64::ZERO; dim];
                for (j, basis_vec) in basis.iter().enumerate() {
                    let c = y[j];
                    if c.norm_sqr() > 0.0 {
                        for (vi, bi) in v.iter_mut().zip(basis_vec.iter()) {
                            *vi += c * bi;
                        }
                    }
                }
                (eig.eigenvalues[i], v)
            })
            .collect();

        // Explicit residuals for the k requested pairs.
        let res = super::residuals_of(op, &kept[..k]);
        let worst = res.iter().cloned().fold(0.0f64, f64::max);
        best_residual = best_residual.min(worst);
        if std::env::var_os("HAMLAB_KRYLOV_TRACE").is_some() {
            eprintln!(
                "krylov cycle {_cycle}: worst residual {worst:.3e}, lowest {:?}",
                kept[..k.min(6)].iter().map(|(e, _)| *e).collect::<Vec<_>>()
            );
        }
        if worst <= tol {
            let (eigenvalues, vectors): (Vec<f64>, Vec<Vec<Complex64>>) =
                kept.into_iter().take(k).unzip();
            return Ok(Spectrum {
                eigenvalues,
                residuals: res,
                vectors: Some(vectors),
                path: SolvePath::Krylov,
                start_seed: Some(seed),
            });
        }

        // Thick restart from the kept Ritz vectors: they are orthonormal and
        // the projected matrix restarts as exactly diag(theta).
        basis = kept.iter().map(|(_, v)| v.clone()).collect();
        t = DMatrix::zeros(basis.len(), basis.len());
        for (i, (theta, _)) in kept.iter().enumerate() {
            t[(i, i)] = Complex64::new(*theta, 0.0);
        }
        next_src = 0;
    }

    Err(EigenError::NoConvergence {
        tol,
        iterations: MAX_CYCLES,
        best_residual,
    })
}

/// Append one direction: `A * basis[src]` (or a seeded random vector),
/// Gram-Schmidt orthogonalized against the whole basis, then extend the
/// projected matrix by one row/column.
fn push_direction(
    op: &SparseOperator,
    basis: &mut Vec<Vec<Complex64>>,
    t: &mut DMatrix<Complex64>,
    src: Option<usize>,
    rng: &mut ChaCha8Rng,
) {
    let dim = op.dim();
    let mut w = vec![Complex64::ZERO; dim];
    match src {
        Some(i) => op.matvec(&basis[i], &mut w),
        None => fill_random(&mut w, rng),
    }

    loop {
        for _ in 0..GS_PASSES {
            for b in basis.iter() {
                let proj: Complex64 = b.iter().zip(w.iter()).map(|(bi, wi)| bi.conj() * wi).sum();
                if proj.norm_sqr() > 0.0 {
                    for (wi, bi) in w.iter_mut().zip(b.iter()) {
                        *wi -= proj * bi;
                    }
                }
            }
        }
        let n = vec_norm(&w);
        if n > BREAKDOWN {
            w.iter_mut().for_each(|v| *v /= n);
            break;
        }
        // Krylov space exhausted in this direction; continue from a fresh
        // random vector so degenerate multiplets are still found.
        fill_random(&mut w, rng);
    }

    // One column of V^+ A V for the new vector.
    let mut aw = vec![Complex64::ZERO; dim];
    op.matvec(&w, &mut aw);
    let m = basis.len();
    let mut bigger = DMatrix::<Complex64>::zeros(m + 1, m + 1);
    bigger.view_mut((0, 0), (m, m)).copy_from(t);
    for (i, b) in basis.iter().enumerate() {
        let tim: Complex64 = b.iter().zip(aw.iter()).map(|(bi, ai)| bi.conj() * ai).sum();
        bigger[(i, m)] = tim;
        bigger[(m, i)] = tim.conj();
    }
    let tmm: Complex64 = w.iter().zip(aw.iter()).map(|(wi, ai)| wi.conj() * ai).sum();
    bigger[(m, m)] = Complex64::new(tmm.re, 0.0);
    *t = bigger;
    basis.push(w);
}

fn fill_random(w: &mut [Complex64], rng: &mut ChaCha8Rng) {
    w.iter_mut()
        .for_each(|v| *v = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
}
