//! Right-sided Riemann–Liouville operators on functions with compact support `(x, b)`.

use std::f64::consts::PI;

use crate::calculus::jet::Jet;
use crate::error::{Error, Result};
use crate::quadrature::{doubling, mapped_nodes, DistanceTo};
use crate::special::gamma::gamma;

/// Points closer than this to the support bound are refused by the half derivative.
pub const ENDPOINT_MARGIN: f64 = 1e-6;

const DOUBLING_TOL: f64 = 1e-10;

/// `I_-^beta f (x) = 1/Gamma(beta) int_x^b f(t) (t - x)^{beta - 1} dt`.
///
/// The substitution `t = x + (b - x) v^{1/beta}` removes the kernel
/// singularity, leaving `(b - x)^beta / Gamma(beta + 1) int_0^1 f dv`.
pub fn rl_right_integral<F>(f: F, beta: f64, x: f64, support: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if beta <= 0.0 {
        return Err(Error::Domain(format!("integral order must be positive, got {beta}")));
    }
    if x >= support {
        return Ok(0.0);
    }
    let len = support - x;
    let inv = 1.0 / beta;
    let integral = doubling(
        |rule| Ok(mapped_nodes(rule, 0.0, 1.0).map(|nd| nd.weight * f(x + len * nd.x.powf(inv))).sum::<f64>()),
        DOUBLING_TOL,
    )?;
    Ok(len.powf(beta) / gamma(beta + 1.0) * integral)
}

/// Integrand of a half-order derivative, evaluated in jet arithmetic.
pub struct HalfIntegralSpec<'a> {
    pub integrand: &'a (dyn Fn(&Jet) -> Result<Jet> + Sync),
    /// The operator order is `n + 1/2`.
    pub n: usize,
    pub support: f64,
}

impl DistanceTo for Jet {
    fn distance(&self, other: &Self) -> f64 {
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
    fn magnitude(&self) -> f64 {
        self.coeffs().iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// `D_-^{n+1/2} f (y) = (-d/dy)^{n+1} I_-^{1/2} f (y)`.
///
/// With `x = y + s^2 (b - y)` the half integral becomes
/// `2 sqrt((b - y)/pi) int_0^1 f(y + s^2 (b - y)) ds`, whose dependence on
/// `y` is smooth; it is expanded as a jet in `y` and differentiated exactly.
pub fn rl_right_derivative_half(spec: &HalfIntegralSpec<'_>, y: f64) -> Result<f64> {
    let b = spec.support;
    let dist = b - y;
    if dist < ENDPOINT_MARGIN {
        return Err(Error::EndpointUnstable { distance: dist, margin: ENDPOINT_MARGIN });
    }
    let order = spec.n + 1;
    let yj = Jet::variable(y, order);
    let len = &Jet::constant(b, order) - &yj;
    let pre = len.sqrt()?.scale(2.0 / PI.sqrt());
    let inner = doubling(
        |rule| {
            let mut acc = Jet::constant(0.0, order);
            for nd in mapped_nodes(rule, 0.0, 1.0) {
                let t = &yj + &len.scale(nd.x * nd.x);
                acc = &acc + &(spec.integrand)(&t)?.scale(nd.weight);
            }
            Ok(acc)
        },
        DOUBLING_TOL,
    )?;
    let h = &pre * &inner;
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * h.derivative(order))
}

/// `I_-^{1/2}` by the same fixed-domain map, for use as an oracle partner.
pub fn rl_right_integral_half(f: &(dyn Fn(f64) -> f64 + Sync), y: f64, support: f64) -> Result<f64> {
    let len = support - y;
    if len <= 0.0 {
        return Ok(0.0);
    }
    let inner = doubling(
        |rule| Ok(mapped_nodes(rule, 0.0, 1.0).map(|nd| nd.weight * f(y + nd.x * nd.x * len)).sum::<f64>()),
        DOUBLING_TOL,
    )?;
    Ok(2.0 * (len / PI).sqrt() * inner)
}
