//! Davidson iteration: subspace expansion by diagonally preconditioned
//! residuals, with full reorthogonalization and thick restarts.
//!
//! On operators whose dominant physics sits on the diagonal (strong local
//! fields rotated onto the computational axis), the correction
//! `t = (diag(A) - theta)^-1 r` points almost exactly at the missing
//! eigenvector component, which is what makes wide-spectrum problems
//! tractable where plain Krylov expansion stalls.

use super::{vec_norm, EigenError, SolvePath, SparseOperator, Spectrum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_CYCLES: usize = 2000;
const BREAKDOWN: f64 = 1e-12;

pub(super) fn davidson_lowest(
    op: &SparseOperator,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<Spectrum, EigenError> {
    let dim = op.dim();
    let block = (k + 2).min(dim);
    let m_max = (6 * block + 24).min(dim);
    let keep = (2 * block).min(m_max.saturating_sub(block)).max(k);
    let diag: Vec<f64> = (0..dim)
        .map(|i| op.get(i, i).map(|v| v.re).unwrap_or(0.0))
        .collect();
    let diag_scale = diag.iter().fold(0.0f64, |a, &d| a.max(d.abs())).max(1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m_max);
    let mut t = DMatrix::<Complex64>::zeros(0, 0);
    for _ in 0..block {
        let mut w = vec![Complex64::ZERO; dim];
        w.iter_mut().for_each(|v| {
            *v = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        push_vector(op, &mut basis, &mut t, w, &mut rng);
    }

    let mut best_residual = f64::INFINITY;
    for _cycle in 0..MAX_CYCLES {
        // Rayleigh-Ritz on the current subspace.
        let eig = t.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let targets = k.min(basis.len());
        let ritz: Vec<(f64, Vec<Complex64>)> = order[..targets.max(1)]
            .iter()
            .map(|&i| {
                let y = eig.eigenvectors.column(i);
                let mut v = vec![Complex64::ZERO; dim];
                for (j, b) in basis.iter().enumerate() {
                    let c = y[j];
                    if c.norm_sqr() > 0.0 {
                        for (vi, bi) in v.iter_mut().zip(b.iter()) {
                            *vi += c * bi;
                        }
                    }
                }
                (eig.eigenvalues[i], v)
            })
            .collect();

        // Explicit residual vectors.
        let mut worst = 0.0f64;
        let mut residual_vecs: Vec<(f64, Vec<Complex64>, f64)> = Vec::with_capacity(ritz.len());
        let mut hv = vec![Complex64::ZERO; dim];
        for (theta, v) in &ritz {
            op.matvec(v, &mut hv);
            let r: Vec<Complex64> = hv
                .iter()
                .zip(v.iter())
                .map(|(h, x)| h - Complex64::new(*theta, 0.0) * x)
                .collect();
            let rn = vec_norm(&r);
            worst = worst.max(rn);
            residual_vecs.push((*theta, r, rn));
        }
        best_residual = best_residual.min(worst);
        if std::env::var_os("HAMLAB_KRYLOV_TRACE").is_some() {
            eprintln!(
                "davidson cycle {_cycle}: basis {}, worst residual {worst:.3e}",
                basis.len()
            );
        }
        if worst <= tol && ritz.len() >= k {
            let res: Vec<f64> = residual_vecs.iter().map(|(_, _, rn)| *rn).collect();
            let (eigenvalues, vectors): (Vec<f64>, Vec<Vec<Complex64>>) = ritz.into_iter().unzip();
            return Ok(Spectrum {
                eigenvalues,
                residuals: res,
                vectors: Some(vectors),
                path: SolvePath::Krylov,
                start_seed: Some(seed),
            });
        }

        // Thick restart before expanding past the cap.
        if basis.len() + residual_vecs.len() > m_max {
            let kept: Vec<(f64, Vec<Complex64>)> = order[..keep.min(basis.len())]
                .iter()
                .map(|&i| {
                    let y = eig.eigenvectors.column(i);
                    let mut v = vec![Complex64::ZERO; dim];
                    for (j, b) in basis.iter().enumerate() {
                        let c = y[j];
                        if c.norm_sqr() > 0.0 {
                            for (vi, bi) in v.iter_mut().zip(b.iter()) {
                                *vi += c * bi;
                            }
                        }
                    }
                    (eig.eigenvalues[i], v)
                })
                .collect();
            basis = kept.iter().map(|(_, v)| v.clone()).collect();
            t = DMatrix::zeros(basis.len(), basis.len());
            for (i, (theta, _)) in kept.iter().enumerate() {
                t[(i, i)] = Complex64::new(*theta, 0.0);
            }
        }

        // Expand with preconditioned residuals of the unconverged targets.
        for (theta, r, rn) in residual_vecs {
            if rn <= tol {
                continue;
            }
            let guard = 1e-2 * diag_scale.max(theta.abs());
            let w: Vec<Complex64> = r
                .iter()
                .zip(diag.iter())
                .map(|(ri, &d)| {
                    let denom = d - theta;
                    let denom = if denom.abs() < guard {
                        guard.copysign(if denom == 0.0 { 1.0 } else { denom })
                    } else {
                        denom
                    };
                    ri / Complex64::new(denom, 0.0)
                })
                .collect();
            push_vector(op, &mut basis, &mut t, w, &mut rng);
        }
    }

    Err(EigenError::NoConvergence {
        tol,
        iterations: MAX_CYCLES,
        best_residual,
    })
}

/// Orthonormalize `w` against the basis (two-pass Gram-Schmidt) and extend
/// the projected matrix with one matvec.
fn push_vector(
    op: &SparseOperator,
    basis: &mut Vec<Vec<Complex64>>,
    t: &mut DMatrix<Complex64>,
    mut w: Vec<Complex64>,
    rng: &mut ChaCha8Rng,
) {
    let dim = op.dim();
    loop {
        let before = vec_norm(&w);
        let mut after = before;
        for pass in 0..2 {
            if pass > 0 && after > 0.5 * before {
                break;
            }
            for b in basis.iter() {
                let proj: Complex64 = b.iter().zip(w.iter()).map(|(bi, wi)| bi.conj() * wi).sum();
                if proj.norm_sqr() > 0.0 {
                    for (wi, bi) in w.iter_mut().zip(b.iter()) {
                        *wi -= proj * bi;
                    }
                }
            }
            after = vec_norm(&w);
        }
        if after > BREAKDOWN * before.max(1.0) {
            w.iter_mut().for_each(|v| *v /= after);
            break;
        }
        w.iter_mut().for_each(|v| {
            *v = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
    }

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
