//! Density values on a grid, with the clamping and output formats used by the CLI.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::elementary::{phi1_elementary, Elementary};
use crate::density::hyper::{phi1_value, Ctx};
use crate::density::radial::{phi_r_elementary, Radial};
use crate::density::{closed, epsilon, Route};
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Distance kept from the singular abscissae `0` and `1`.
pub const CLAMP_MARGIN: f64 = 1e-6;
/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 512;
/// Negative values down to this size are rounding and are clipped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// Which density a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `Phi_R(r)`, the density of the distance from the origin.
    Radius,
    /// `Phi_1(x)`, the density of one coordinate.
    FirstCoord,
}

impl Mode {
    fn headers(self) -> (&'static str, &'static str) {
        match self {
            Mode::Radius => ("r", "phi_r"),
            Mode::FirstCoord => ("x", "phi1"),
        }
    }
}

/// `start:end:points`, evenly spaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Domain(format!("grid must look like start:end:points, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(start.is_finite() && end.is_finite()) || points == 0 || (points > 1 && !(end > start)) {
            return Err(bad());
        }
        Ok(GridSpec { start, end, points })
    }
}

impl GridSpec {
    pub fn abscissae(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let h = (self.end - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|i| if i + 1 == self.points { self.end } else { self.start + h * i as f64 }).collect()
    }
}

/// `points` Chebyshev nodes of the first kind on `(a, b)`, ascending.
pub fn chebyshev_grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| {
            let t = (PI * (k as f64 + 0.5) / points as f64).cos();
            0.5 * (a + b) - 0.5 * (b - a) * t
        })
        .collect()
}

/// Moves abscissae into the support, away from `0` and `1` by `margin`,
/// then drops the duplicates this creates.
pub fn clamp_grid(params: &ModelParams, grid: &[f64], margin: f64) -> Vec<f64> {
    let mut out: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let x = x.abs().max(margin);
            if params.kind.bounded_support() {
                x.min(1.0 - margin)
            } else if (x - 1.0).abs() < margin {
                if x < 1.0 { 1.0 - margin } else { 1.0 + margin }
            } else {
                x
            }
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// A grid of density values together with how they were obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    pub params: ModelParams,
    pub mode: Mode,
    pub route: Route,
    pub clamp_margin: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityTable {
    /// Evaluates the density on `grid` after clamping it. The points are
    /// independent and are computed in parallel.
    pub fn build(params: &ModelParams, mode: Mode, route: Route, grid: &[f64]) -> Result<Self> {
        let grid = clamp_grid(params, grid, CLAMP_MARGIN);
        let eval = Evaluator::new(params, mode, route)?;
        let values = grid
            .par_iter()
            .map(|&x| {
                let v = eval.value(x).map_err(|e| Error::At { at: x, source: Box::new(e) })?;
                if v < -NEGATIVE_TOLERANCE * (1.0 + v.abs()) || !v.is_finite() {
                    return Err(Error::At { at: x, source: Box::new(Error::Negative(v)) });
                }
                Ok(v.max(0.0))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityTable { params: *params, mode, route, clamp_margin: CLAMP_MARGIN, grid, values })
    }

    /// Default table: [`DEFAULT_POINTS`] Chebyshev points on `(0, end)`.
    pub fn chebyshev(params: &ModelParams, mode: Mode, route: Route, end: f64) -> Result<Self> {
        Self::build(params, mode, route, &chebyshev_grid(0.0, end, DEFAULT_POINTS))
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// CSV with a header row; shortest round-trip number formatting.
    pub fn to_csv(&self) -> String {
        let (a, b) = self.mode.headers();
        let mut s = format!("{a},{b},route,kind,alpha,dim\n");
        for (x, v) in self.grid.iter().zip(&self.values) {
            let _ = writeln!(s, "{x:?},{v:?},{},{},{:?},{}", self.route, self.params.kind, self.params.alpha, self.params.dim);
        }
        s
    }
}

enum Evaluator {
    Hyper(Ctx),
    Elementary(Ctx, Elementary),
    Epsilon(ModelParams),
    RadiusHyper(Radial),
    RadiusElementary(ModelParams),
    RadiusClosed(ModelParams),
}

impl Evaluator {
    fn new(params: &ModelParams, mode: Mode, route: Route) -> Result<Self> {
        let ctx = Ctx::new(params);
        let refuse = || Error::RouteParity { route: route.name(), parity: params.parity.name() };
        Ok(match (mode, route) {
            (Mode::FirstCoord, Route::Hypergeometric) => Evaluator::Hyper(ctx),
            (Mode::FirstCoord, Route::Elementary) => {
                let el = Elementary::new(&ctx)?;
                Evaluator::Elementary(ctx, el)
            }
            (Mode::FirstCoord, Route::EpsilonLimit) => Evaluator::Epsilon(*params),
            (Mode::Radius, Route::Hypergeometric) => Evaluator::RadiusHyper(Radial::new(params)),
            (Mode::Radius, Route::Elementary) => {
                Elementary::new(&ctx)?;
                Evaluator::RadiusElementary(*params)
            }
            (Mode::Radius, Route::ClosedFormD3) if params.dim == 3 => Evaluator::RadiusClosed(*params),
            _ => return Err(refuse()),
        })
    }

    fn value(&self, x: f64) -> Result<f64> {
        match self {
            Evaluator::Hyper(ctx) => phi1_value(ctx, x, 1.0 - x),
            Evaluator::Elementary(ctx, el) => phi1_elementary(ctx, el, x, 1.0 - x),
            Evaluator::Epsilon(p) => epsilon::godreche_luck_invert(p, x, &epsilon::DEFAULT_SCHEDULE),
            Evaluator::RadiusHyper(rad) => rad.phi_r(x),
            Evaluator::RadiusElementary(p) => phi_r_elementary(p, x),
            Evaluator::RadiusClosed(p) => closed::phi_r_d3_corrected(p.kind, p.alpha, x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{make_params, WalkKind};

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "0.01:0.99:99".parse().unwrap();
        let xs = g.abscissae();
        assert_eq!(xs.len(), 99);
        assert_eq!(xs[98], 0.99);
        assert!((xs[1] - 0.02).abs() < 1e-15);
        assert!("1:0:5".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("0:1:x".parse::<GridSpec>().is_err());
    }

    #[test]
    fn clamping_keeps_grid_inside_support() {
        let p = make_params(WalkKind::Standard, 0.5, 3).unwrap();
        let g = clamp_grid(&p, &[0.0, 0.0, 0.5, 1.0, 2.0], 1e-6);
        assert_eq!(g, vec![1e-6, 0.5, 1.0 - 1e-6]);
        let o = clamp_grid(&p.with_kind(WalkKind::Overshoot), &[1.0 - 1e-9, 1.0 + 1e-9, 3.0], 1e-6);
        assert_eq!(o, vec![1.0 - 1e-6, 1.0 + 1e-6, 3.0]);
    }

    #[test]
    fn chebyshev_nodes_are_interior_and_ascending() {
        let g = chebyshev_grid(0.0, 1.0, 512);
        assert!(g[0] > 0.0 && g[511] < 1.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn table_is_non_negative_and_csv_round_trips() {
        let p = make_params(WalkKind::Undershoot, 0.3, 3).unwrap();
        let t = DensityTable::build(&p, Mode::Radius, Route::Hypergeometric, &GridSpec { start: 0.0, end: 1.0, points: 21 }.abscissae()).unwrap();
        assert!(t.values.iter().all(|&v| v >= 0.0));
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("r,phi_r,route,kind,alpha,dim"));
        for (line, v) in lines.zip(&t.values) {
            let back: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
