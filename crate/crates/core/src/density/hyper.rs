//! `Phi_1` through the hypergeometric kernel, expanded as a jet.
//!
//! Everything is expressed in `s = x^2`. A jet is taken in the scaled variable
//! `sigma` with `s = s0 + lambda * sigma`, where `lambda` is at most the distance
//! from `s0` to the nearest singular point (`0` or `1`); this keeps the
//! coefficients of order one even a hair away from the support edge.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::calculus::jet::Jet;
use crate::error::{Error, Result};
use crate::params::{overshoot_constant, ModelParams, WalkKind};
use crate::special::hyp2f1::{taylor_coefficients_scaled, Arg, CutSide};
use crate::special::kernel::{denominator_params, numerator_params};

/// Constants of one parameter set, computed once.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub params: ModelParams,
    pub c_over: f64,
    c3: f64,
    den: (f64, f64),
    num: (f64, f64),
}

impl Ctx {
    pub fn new(params: &ModelParams) -> Self {
        Ctx {
            params: *params,
            c_over: overshoot_constant(params.n, params.alpha, params.parity),
            c3: params.half_dim(),
            den: denominator_params(params.alpha),
            num: numerator_params(params.alpha),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn kind(&self) -> WalkKind {
        self.params.kind
    }
}

/// Natural jet scale at `s0`: the distance to the nearer of `0` and `1`.
pub fn natural_scale(s0: f64, sc0: f64) -> f64 {
    s0.min(sc0.abs())
}

/// Jet of `2F1(a, b; c; 1/s)` in `sigma`, on the lower side of the cut.
fn hyp_of_inverse(a: f64, b: f64, c: f64, s0: f64, sc0: f64, lambda: f64, order: usize) -> Result<Jet<Complex64>> {
    let arg = Arg::inverse(s0, sc0, CutSide::Below);
    let rho = lambda / s0;
    let mu = lambda / (s0 * s0);
    let g = taylor_coefficients_scaled(a, b, c, arg, order, mu)?;
    // (z - z0)/mu = sum_{k>=1} (-1)^k rho^{k-1} sigma^k
    let mut dz = vec![Complex64::new(0.0, 0.0); order + 1];
    let mut p = -1.0;
    for slot in dz.iter_mut().skip(1) {
        *slot = Complex64::new(p, 0.0);
        p *= -rho;
    }
    Ok(Jet::from_coeffs(dz).compose(&g))
}

/// Jet in `sigma` (`s = s0 + lambda sigma`) of `phi(s) = Phi_1(sqrt(s))`.
///
/// `sc0 = 1 - s0` must be supplied to full precision.
pub fn phi1_jet(ctx: &Ctx, s0: f64, sc0: f64, lambda: f64, order: usize) -> Result<Jet> {
    if !(s0 > 0.0) {
        return Err(Error::Domain(format!("Phi_1 needs x != 0, got s = {s0}")));
    }
    if sc0 == 0.0 {
        return Err(Error::EndpointUnstable { distance: 0.0, margin: 0.0 });
    }
    let kind = ctx.kind();
    if sc0 < 0.0 && kind.bounded_support() {
        return Ok(Jet::constant(0.0, order));
    }
    let s = Jet::from_coeffs({
        let mut c = vec![0.0; order + 1];
        c[0] = s0;
        if order > 0 {
            c[1] = lambda;
        }
        c
    });
    let alpha = ctx.alpha();
    let fden = hyp_of_inverse(ctx.den.0, ctx.den.1, ctx.c3, s0, sc0, lambda, order)?;
    if fden.value().norm() < 1e-300 {
        return Err(Error::ZeroDenominator(fden.value().norm()));
    }
    let kernel = match kind {
        WalkKind::Standard => {
            let fnum = hyp_of_inverse(ctx.num.0, ctx.num.1, ctx.c3, s0, sc0, lambda, order)?;
            fnum.checked_div(&fden)?
        }
        WalkKind::Undershoot => fden.recip()?,
        WalkKind::Overshoot => fden.recip()?.mul_scalar(Complex64::from_polar(1.0, PI * alpha / 2.0)),
    };
    let im = kernel.im();
    Ok(match kind {
        WalkKind::Standard | WalkKind::Undershoot => &s.powf(-0.5)? * &im.scale(-1.0 / PI),
        WalkKind::Overshoot => &s.powf(-(1.0 + alpha) / 2.0)? * &im.scale(ctx.c_over / PI),
    })
}

/// `Phi_1(x)` for `x > 0` with `xc = 1 - x`.
pub fn phi1_value(ctx: &Ctx, x: f64, xc: f64) -> Result<f64> {
    let s0 = x * x;
    let sc0 = xc * (1.0 + x);
    Ok(phi1_jet(ctx, s0, sc0, natural_scale(s0, sc0), 0)?.value())
}
