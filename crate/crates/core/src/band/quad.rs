//! Gauss-Legendre quadrature: fixed rules plus an adaptive tensor-product
//! panel scheme for smooth 2D integrands.

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p_n(x) and p_n'(x) by upward recurrence.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order integral of `f` on `[a, b]`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (half, mid) = ((b - a) / 2.0, (a + b) / 2.0);
    rule.0
        .iter()
        .zip(rule.1.iter())
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite fixed-order integration over explicit smooth pieces.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: &F, breakpoints: &[f64], order: usize) -> f64 {
    let rule = gauss_legendre(order);
    breakpoints
        .windows(2)
        .map(|w| integrate_1d(f, w[0], w[1], &rule))
        .sum()
}

#[derive(Debug, thiserror::Error)]
#[error("adaptive quadrature did not reach tolerance {tol:.3e}; residual estimate {estimate:.3e}")]
pub struct QuadratureError {
    pub tol: f64,
    pub estimate: f64,
}

/// Adaptive tensor Gauss-Legendre on a rectangle: each panel is accepted
/// when the difference between its 8- and 16-point tensor rules falls below
/// its area-proportional share of `tol / 2`, otherwise it is split in four.
pub fn adaptive_2d<F>(
    f: &F,
    ax: f64,
    bx: f64,
    ay: f64,
    by: f64,
    tol: f64,
) -> Result<f64, QuadratureError>
where
    F: Fn(f64, f64) -> f64,
{
    let low = gauss_legendre(8);
    let high = gauss_legendre(16);
    let total_area = (bx - ax) * (by - ay);
    let mut stack = vec![(ax, bx, ay, by, 0usize)];
    let mut sum = 0.0;
    let mut residual: f64 = 0.0;
    while let Some((x0, x1, y0, y1, depth)) = stack.pop() {
        let coarse = tensor(f, x0, x1, y0, y1, &low);
        let fine = tensor(f, x0, x1, y0, y1, &high);
        let estimate = (fine - coarse).abs();
        let share = tol / 2.0 * ((x1 - x0) * (y1 - y0) / total_area);
        if estimate <= share || depth >= 24 {
            if depth >= 24 {
                residual = residual.max(estimate);
            }
            sum += fine;
            continue;
        }
        let (xm, ym) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        stack.push((x0, xm, y0, ym, depth + 1));
        stack.push((xm, x1, y0, ym, depth + 1));
        stack.push((x0, xm, ym, y1, depth + 1));
        stack.push((xm, x1, ym, y1, depth + 1));
    }
    if residual > tol {
        return Err(QuadratureError {
            tol,
            estimate: residual,
        });
    }
    Ok(sum)
}

fn tensor<F: Fn(f64, f64) -> f64>(
    f: &F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    rule: &(Vec<f64>, Vec<f64>),
) -> f64 {
    let (hx, mx) = ((x1 - x0) / 2.0, (x0 + x1) / 2.0);
    let (hy, my) = ((y1 - y0) / 2.0, (y0 + y1) / 2.0);
    let mut acc = 0.0;
    for (&xi, &wx) in rule.0.iter().zip(rule.1.iter()) {
        let x = mx + hx * xi;
        for (&yi, &wy) in rule.0.iter().zip(rule.1.iter()) {
            acc += wx * wy * f(x, my + hy * yi);
        }
    }
    acc * hx * hy
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        // 8-point rule is exact through degree 15.
        let rule = gauss_legendre(8);
        let val = integrate_1d(&|x: f64| x.powi(14), -1.0, 1.0, &rule);
        assert!((val - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_2d_gaussian() {
        // iint exp(-x^2-y^2) over [0,2]^2 = (sqrt(pi)/2 erf(2))^2.
        let val = adaptive_2d(
            &|x: f64, y: f64| (-x * x - y * y).exp(),
            0.0,
            2.0,
            0.0,
            2.0,
            1e-12,
        )
        .unwrap();
        let erf2 = 0.995322265018953; // erf(2)
        let expect = (std::f64::consts::PI.sqrt() / 2.0 * erf2).powi(2);
        assert!((val - expect).abs() < 1e-9, "{val} vs {expect}");
    }
}
