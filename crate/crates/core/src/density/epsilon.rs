//! Route-independent oracle: `Phi_1(x) = -(1/pi) lim Im[(x + i eps)^{-1} g1(-1/(x + i eps))]`
//! with `g1` from direct quadrature and Richardson extrapolation in `eps`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::special::kernel::g1_quadrature;

/// Default regularisation schedule.
pub const DEFAULT_SCHEDULE: [f64; 5] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7];

/// The smoothed density at a single `eps`.
pub fn smoothed(params: &ModelParams, x: f64, eps: f64) -> Result<f64> {
    let w = Complex64::new(x, eps);
    let g = g1_quadrature(params, -w.inv())?;
    Ok(-(g / w).im / PI)
}

/// Richardson-extrapolated `eps -> 0` limit over a descending schedule.
///
/// The smoothed density is a Poisson average of `Phi_1`, hence analytic in
/// `eps` with a linear leading term; each pair of neighbours is combined to
/// cancel it. The estimates must contract, otherwise the limit is not trusted.
pub fn godreche_luck_invert(params: &ModelParams, x: f64, schedule: &[f64]) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("the inversion needs x != 0".into()));
    }
    if schedule.len() < 2 || schedule.windows(2).any(|w| !(w[1] < w[0] && w[1] > 0.0)) {
        return Err(Error::Domain("eps schedule must be positive and strictly descending".into()));
    }
    let x = x.abs();
    if params.kind.bounded_support() && x >= 1.0 {
        return Ok(0.0);
    }
    let values = schedule.iter().map(|&e| smoothed(params, x, e)).collect::<Result<Vec<_>>>()?;
    let rich: Vec<f64> = values
        .windows(2)
        .zip(schedule.windows(2))
        .map(|(v, e)| {
            let q = e[0] / e[1];
            (q * v[1] - v[0]) / (q - 1.0)
        })
        .collect();
    let best = *rich.last().expect("schedule has at least two points");
    if rich.len() >= 3 {
        let k = rich.len();
        let last = (rich[k - 1] - rich[k - 2]).abs();
        let prev = (rich[k - 2] - rich[k - 3]).abs();
        let floor = 1e-7 * (1.0 + best.abs());
        if last > floor && last > prev {
            return Err(Error::Extrapolation(format!(
                "at x = {x}: successive estimates moved by {prev:e} then {last:e}"
            )));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::hyper::{phi1_value, Ctx};
    use crate::params::{make_params, WalkKind};

    #[test]
    fn matches_hypergeometric_route() {
        for kind in WalkKind::ALL {
            for d in [2, 3] {
                let p = make_params(kind, 0.6, d).unwrap();
                let ctx = Ctx::new(&p);
                for &x in &[0.1, 0.5, 0.9] {
                    let o = godreche_luck_invert(&p, x, &DEFAULT_SCHEDULE).unwrap();
                    let h = phi1_value(&ctx, x, 1.0 - x).unwrap();
                    assert!((o - h).abs() < 1e-5 * (1.0 + h), "{kind} d={d} x={x}: {o} vs {h}");
                }
            }
        }
    }

    #[test]
    fn no_cut_reached_beyond_support() {
        let p = make_params(WalkKind::Standard, 0.6, 3).unwrap();
        let v = smoothed(&p, 1.5, 1e-3).unwrap();
        assert!(v.abs() < 1e-3, "{v}");
    }
}
