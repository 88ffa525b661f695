//! The density engine: `Phi_1` by three independent routes, the radius
//! density `Phi_R`, its distribution function and the full density `H(x, t)`.

pub mod closed;
pub mod elementary;
pub mod epsilon;
pub mod hyper;
pub mod radial;
pub mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

pub use radial::{cartesian_density, phi_r, project_point_mass, project_radius_to_axis, radial_cdf, Radial};
pub use table::{DensityTable, GridSpec, Mode};

/// How a density value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Route {
    /// Finite binomial sums of elementary powers; odd dimensions only.
    #[serde(rename = "elementary")]
    Elementary,
    /// Imaginary part of the hypergeometric kernel on the lower side of the cut.
    #[serde(rename = "hyper")]
    Hypergeometric,
    /// Quadrature of `g1` near the real axis and `eps -> 0` extrapolation.
    #[serde(rename = "epsilon")]
    EpsilonLimit,
    /// The three-dimensional closed radius forms.
    #[serde(rename = "closed-d3")]
    ClosedFormD3,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Elementary, Route::Hypergeometric, Route::EpsilonLimit, Route::ClosedFormD3];

    pub fn name(self) -> &'static str {
        match self {
            Route::Elementary => "elementary",
            Route::Hypergeometric => "hyper",
            Route::EpsilonLimit => "epsilon",
            Route::ClosedFormD3 => "closed-d3",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "elementary" | "elem" => Ok(Route::Elementary),
            "hyper" | "hypergeometric" => Ok(Route::Hypergeometric),
            "epsilon" | "eps" | "epsilon-limit" => Ok(Route::EpsilonLimit),
            "closed" | "closed-d3" => Ok(Route::ClosedFormD3),
            other => Err(Error::Domain(format!("unknown route `{other}`"))),
        }
    }
}

/// `Phi_1(x)`, the density of one coordinate at time one, by the chosen route.
///
/// The function is even, so only `|x|` is used.
pub fn phi1(params: &ModelParams, x: f64, route: Route) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("phi1 needs a finite x != 0, got {x}")));
    }
    let x = x.abs();
    let ctx = hyper::Ctx::new(params);
    match route {
        Route::Hypergeometric => hyper::phi1_value(&ctx, x, 1.0 - x),
        Route::Elementary => {
            let el = elementary::Elementary::new(&ctx)?;
            elementary::phi1_elementary(&ctx, &el, x, 1.0 - x)
        }
        Route::EpsilonLimit => epsilon::godreche_luck_invert(params, x, &epsilon::DEFAULT_SCHEDULE),
        Route::ClosedFormD3 => Err(Error::RouteParity { route: route.name(), parity: params.parity.name() }),
    }
}

/// `Phi_R(r)` by the chosen route. The epsilon route has no radius form.
pub fn phi_r_route(params: &ModelParams, r: f64, route: Route) -> Result<f64> {
    match route {
        Route::Hypergeometric => radial::phi_r(params, r),
        Route::Elementary => radial::phi_r_elementary(params, r),
        Route::ClosedFormD3 if params.dim == 3 => closed::phi_r_d3_corrected(params.kind, params.alpha, r),
        _ => Err(Error::RouteParity { route: route.name(), parity: params.parity.name() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{make_params, WalkKind};

    #[test]
    fn phi1_is_even_and_vanishes_outside_support() {
        let p = make_params(WalkKind::Standard, 0.6, 3).unwrap();
        for route in [Route::Elementary, Route::Hypergeometric] {
            assert_eq!(phi1(&p, 1.5, route).unwrap(), 0.0);
            assert_eq!(phi1(&p, -0.4, route).unwrap(), phi1(&p, 0.4, route).unwrap());
        }
    }

    #[test]
    fn three_routes_agree_at_one_point() {
        let p = make_params(WalkKind::Standard, 0.6, 3).unwrap();
        let h = phi1(&p, 0.4, Route::Hypergeometric).unwrap();
        let e = phi1(&p, 0.4, Route::Elementary).unwrap();
        let o = phi1(&p, 0.4, Route::EpsilonLimit).unwrap();
        assert!((h - e).abs() < 1e-12 * (1.0 + h));
        assert!((h - o).abs() < 1e-6 * (1.0 + h), "{h} {o}");
    }

    #[test]
    fn route_restrictions() {
        let even = make_params(WalkKind::Standard, 0.6, 4).unwrap();
        assert!(matches!(phi1(&even, 0.3, Route::Elementary), Err(Error::RouteParity { .. })));
        assert!(phi1(&even, 0.3, Route::ClosedFormD3).is_err());
        assert!(phi_r_route(&even, 0.3, Route::ClosedFormD3).is_err());
        assert!(phi1(&even, 0.0, Route::Hypergeometric).is_err());
        let three = make_params(WalkKind::Undershoot, 0.6, 3).unwrap();
        let a = phi_r_route(&three, 0.3, Route::ClosedFormD3).unwrap();
        let b = phi_r_route(&three, 0.3, Route::Hypergeometric).unwrap();
        let c = phi_r_route(&three, 0.3, Route::Elementary).unwrap();
        assert!((a - b).abs() < 1e-10 * a && (b - c).abs() < 1e-10 * a, "{a} {b} {c}");
    }
}
