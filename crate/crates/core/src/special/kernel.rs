//! The one-coordinate Fourier–Laplace kernel `g1` of the walks, by
//! hypergeometric functions and by direct quadrature over the sphere marginal.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{overshoot_constant, projection_constant, ModelParams, WalkKind};
use crate::quadrature::graded_around;
use crate::special::hyp2f1::{gauss_2f1_arg, Arg, CutSide};

/// Parameters `(a, b)` of the denominator `2F1(-a/2, (1-a)/2; d/2; z)`.
pub fn denominator_params(alpha: f64) -> (f64, f64) {
    (-alpha / 2.0, (1.0 - alpha) / 2.0)
}

/// Parameters `(a, b)` of the numerator `2F1((1-a)/2, 1 - a/2; d/2; z)`.
pub fn numerator_params(alpha: f64) -> (f64, f64) {
    ((1.0 - alpha) / 2.0, 1.0 - alpha / 2.0)
}

/// Kind-specific kernel whose imaginary part gives `Phi_1`:
/// standard `F_num / F_den`, undershoot `1 / F_den`,
/// overshoot `c e^{i pi alpha/2} / F_den`.
pub fn g1_hyper_arg(params: &ModelParams, arg: Arg) -> Result<Complex64> {
    let c3 = params.half_dim();
    let (da, db) = denominator_params(params.alpha);
    let fden = gauss_2f1_arg(da, db, c3, arg)?;
    if fden.norm() < 1e-300 {
        return Err(Error::ZeroDenominator(fden.norm()));
    }
    Ok(match params.kind {
        WalkKind::Standard => {
            let (na, nb) = numerator_params(params.alpha);
            gauss_2f1_arg(na, nb, c3, arg)? / fden
        }
        WalkKind::Undershoot => fden.inv(),
        WalkKind::Overshoot => {
            let c = overshoot_constant(params.n, params.alpha, params.parity);
            Complex64::from_polar(c, PI * params.alpha / 2.0) / fden
        }
    })
}

/// [`g1_hyper_arg`] at a complex `z`; a real `z > 1` is read on `side`.
pub fn g1_hyper(params: &ModelParams, z: Complex64, side: CutSide) -> Result<Complex64> {
    let z = if z.im == 0.0 { Complex64::new(z.re, side.signed_zero()) } else { z };
    g1_hyper_arg(params, Arg::new(z))
}

/// Principal power honouring signed zeros.
fn cpow(w: Complex64, s: f64) -> Complex64 {
    Complex64::from_polar(w.norm().powf(s), s * w.im.atan2(w.re))
}

/// Normalised sphere-marginal average of `(1 - xi u)^beta`.
///
/// With `u = sin(theta)` the weight `(1 - u^2)^{(d-3)/2} du` becomes
/// `cos^{d-2}(theta) d theta`, which is smooth in every dimension. The
/// integration panels are graded toward where `1 - xi u` comes closest to zero.
pub fn marginal_average(params: &ModelParams, xi: Complex64, beta: f64) -> Result<Complex64> {
    let p = (params.dim - 2) as i32;
    let f = |theta: f64| {
        let u = theta.sin();
        let base = Complex64::new(1.0 - xi.re * u, -xi.im * u);
        cpow(base, beta) * theta.cos().powi(p)
    };
    // The integrand is singular where u = 1/xi; grade toward the real
    // projection of that point, as finely as its distance from the axis asks.
    let (center, floor) = if xi.norm() > 1e-300 {
        let u_star = xi.inv();
        let c = u_star.re.clamp(-1.0, 1.0);
        let gap = (u_star - Complex64::new(c, 0.0)).norm();
        let slope = (1.0 - c * c).sqrt().max(gap.sqrt());
        (c.asin(), (1e-3 * gap / slope.max(1e-300)).max(1e-15))
    } else {
        (0.0, 1.0)
    };
    let total = graded_around(&f, -FRAC_PI_2, FRAC_PI_2, center, floor, 0.25);
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::Quadrature { estimate: total.norm(), error: f64::NAN });
    }
    Ok(total * projection_constant(params.n, params.parity))
}

/// The Fourier–Laplace kernel `g1(xi)` by quadrature.
///
/// Standard: ratio of the averages of `(1 - xi u)^{alpha-1}` and `(1 - xi u)^alpha`;
/// undershoot: reciprocal of the latter; overshoot:
/// `1 - c xi^alpha e^{-i pi alpha/2} / avg (1 - xi u)^alpha` on the principal branch.
pub fn g1_quadrature(params: &ModelParams, xi: Complex64) -> Result<Complex64> {
    let alpha = params.alpha;
    let den = marginal_average(params, xi, alpha)?;
    if den.norm() < 1e-300 {
        return Err(Error::ZeroDenominator(den.norm()));
    }
    Ok(match params.kind {
        WalkKind::Standard => marginal_average(params, xi, alpha - 1.0)? / den,
        WalkKind::Undershoot => den.inv(),
        WalkKind::Overshoot => {
            let c = overshoot_constant(params.n, alpha, params.parity);
            let rot = Complex64::from_polar(1.0, -PI * alpha / 2.0);
            Complex64::new(1.0, 0.0) - cpow(xi, alpha) * rot * c / den
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;

    #[test]
    fn zero_argument() {
        for kind in [WalkKind::Standard, WalkKind::Undershoot] {
            for d in [2, 3, 6] {
                let p = make_params(kind, 0.4, d).unwrap();
                let q = g1_quadrature(&p, Complex64::new(0.0, 0.0)).unwrap();
                assert!((q - 1.0).norm() < 1e-10, "{kind} d={d}: {q}");
                let h = g1_hyper(&p, Complex64::new(0.0, 0.0), CutSide::Below).unwrap();
                assert!((h - 1.0).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn three_dimensional_antiderivative() {
        // d = 3: average of (1 - xi u)^beta over u uniform on (-1, 1) equals
        // ((1 + xi)^{beta+1} - (1 - xi)^{beta+1}) / (2 xi (beta + 1))
        let alpha = 0.6;
        let p = make_params(WalkKind::Standard, alpha, 3).unwrap();
        let xi: f64 = 0.5;
        let avg = |beta: f64| ((1.0 + xi).powf(beta + 1.0) - (1.0 - xi).powf(beta + 1.0)) / (2.0 * xi * (beta + 1.0));
        let expect = avg(alpha - 1.0) / avg(alpha);
        let got = g1_quadrature(&p, Complex64::new(xi, 0.0)).unwrap();
        assert!((got.re - expect).abs() < 1e-10 && got.im.abs() < 1e-12, "{got} vs {expect}");
    }

    #[test]
    fn undershoot_real_below_one() {
        let p = make_params(WalkKind::Undershoot, 0.3, 5).unwrap();
        let v = g1_hyper(&p, Complex64::new(0.6, 0.0), CutSide::Below).unwrap();
        assert!(v.im.abs() < 1e-14);
    }
}
