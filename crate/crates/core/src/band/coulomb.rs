//! The on-site Coulomb constant
//!
//! ```text
//! c_U = iint d^3r d^3s e^{-(|r|_1 + |s|_1)} / |r - s|_2
//! ```
//!
//! evaluated by two independent quadrature routes through the Green's
//! function `G(q) = prod_i (1 + |q_i|) e^{-|q_i|}` of the difference
//! variable:
//!
//! * reduced 2D: the radial integral of `G(q)/|q|` in spherical
//!   coordinates is done analytically (`int rho^n e^{-rho S} = n!/S^{n+1}`),
//!   leaving `8 iint n(phi, theta) / d(phi, theta)` over one octant with
//!   `d = S^5 >= 1` and `S = (cos t + sin t) sin p + cos p`;
//! * radial 3D: the same spherical integrand with the `rho` integral done
//!   numerically, sharing nothing with the closed-form reduction.
//!
//! Both are adaptive in the angles; they must agree within the requested
//! tolerance.

use super::quad::{adaptive_2d, gauss_legendre, integrate_1d};
use super::BandError;
use serde::Serialize;

/// `G(q) = prod_i (1 + |q_i|) e^{-|q_i|}`; `G(0) = 1`.
pub fn greens_function(q: [f64; 3]) -> f64 {
    q.iter()
        .map(|&qi| (1.0 + qi.abs()) * (-qi.abs()).exp())
        .product()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoulombValue {
    pub value: f64,
    pub reduced_2d: f64,
    pub radial_3d: f64,
    pub tolerance: f64,
}

/// Direction cosines on the positive octant.
fn octant_direction(phi: f64, theta: f64) -> [f64; 3] {
    [phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()]
}

/// Reduced 2D integrand: radial moments of `rho G(rho u)` in closed form.
fn reduced_integrand(phi: f64, theta: f64) -> f64 {
    let [a, b, c] = octant_direction(phi, theta);
    let s = a + b + c;
    let e2 = a * b + a * c + b * c;
    let e3 = a * b * c;
    // int_0^inf rho e^{-rho S} (1 + a rho)(1 + b rho)(1 + c rho) drho
    //   = 1/S^2 + 2 e1/S^3 + 6 e2/S^4 + 24 e3/S^5, with e1 = S.
    phi.sin() * (3.0 / (s * s) + 6.0 * e2 / s.powi(4) + 24.0 * e3 / s.powi(5))
}

/// Numeric radial integral of `rho G(rho u)` via `u = rho S`.
fn radial_integrand(phi: f64, theta: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let dir = octant_direction(phi, theta);
    let s: f64 = dir.iter().sum();
    let f = |u: f64| {
        let rho = u / s;
        u * (-u).exp() * dir.iter().map(|&d| 1.0 + rho * d).product::<f64>()
    };
    let panels = [0.0, 2.0, 6.0, 14.0, 30.0, 80.0];
    let mut acc = 0.0;
    for w in panels.windows(2) {
        acc += integrate_1d(&f, w[0], w[1], rule);
    }
    phi.sin() * acc / (s * s)
}

/// Both routes to `c_U`, agreeing within `tolerance` (>= 1e-6).
pub fn coulomb_cu(tolerance: f64) -> Result<CoulombValue, BandError> {
    if tolerance < 1e-6 {
        return Err(BandError::BadTolerance(tolerance));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let reduced = 8.0
        * adaptive_2d(
            &reduced_integrand,
            0.0,
            half_pi,
            0.0,
            half_pi,
            tolerance / 20.0,
        )?;
    let rule = gauss_legendre(24);
    let radial = 8.0
        * adaptive_2d(
            &|p, t| radial_integrand(p, t, &rule),
            0.0,
            half_pi,
            0.0,
            half_pi,
            tolerance / 20.0,
        )?;
    if (reduced - radial).abs() > tolerance {
        return Err(BandError::RoutesDisagree {
            reduced,
            radial,
            tol: tolerance,
        });
    }
    Ok(CoulombValue {
        value: reduced,
        reduced_2d: reduced,
        radial_3d: radial,
        tolerance,
    })
}
