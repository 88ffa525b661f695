//! Radius densities `Phi_R`, their distribution function, the projection back
//! onto one coordinate, and the full `d`-dimensional density.
//!
//! Odd dimensions differentiate `Phi_1(sqrt(s))` `n + 1` times in `s`; even
//! dimensions apply `(-d/dy)^{n+1}` to the right-sided half integral of the
//! same function. Both are carried out exactly in jet arithmetic.

use std::f64::consts::PI;

use crate::calculus::jet::Jet;
use crate::density::elementary::{phi1_elementary_jet, Elementary};
use crate::density::hyper::{natural_scale, phi1_jet, phi1_value, Ctx};
use crate::error::{Error, Result};
use crate::params::{projection_constant, ModelParams, Parity, WalkKind};
use crate::quadrature::{gauss_legendre, geometric_panels, mapped_nodes};
use crate::special::gamma::{gamma, rgamma};

const RATIO: f64 = 0.2;
const FLOOR: f64 = 1e-10;
const POINTS: usize = 12;
const MAX_PANEL: f64 = 0.1;
/// Distribution tables split every panel into this many knots, each
/// integrated with a shorter rule.
const TABLE_SPLIT: usize = 4;
const TABLE_POINTS: usize = 6;
/// Largest radius the tail substitution is allowed to reach.
const FAR: f64 = 1e100;
/// Smallest distance to a singular point the power substitutions may reach.
const NEAR: f64 = 1e-60;

/// Panels of `[a, b]`; when `a == 0` they shrink geometrically toward zero.
/// No panel is wider than [`MAX_PANEL`].
fn panels(a: f64, b: f64, floor: f64) -> Vec<(f64, f64)> {
    let coarse = if a == 0.0 { geometric_panels(b, RATIO, floor.min(b)) } else { vec![(a, b)] };
    let mut out = Vec::with_capacity(coarse.len() + 16);
    for (lo, hi) in coarse {
        let k = ((hi - lo) / MAX_PANEL).ceil().max(1.0) as usize;
        for i in 0..k {
            let l = lo + (hi - lo) * i as f64 / k as f64;
            let h = if i + 1 == k { hi } else { lo + (hi - lo) * (i + 1) as f64 / k as f64 };
            out.push((l, h));
        }
    }
    out
}

/// Sum of `f(v) dv` over one panel; the panel touching zero is estimated by its midpoint.
fn panel_sum<F: FnMut(f64) -> Result<f64>>(f: &mut F, lo: f64, hi: f64) -> Result<f64> {
    if lo == 0.0 {
        return Ok(f(0.5 * hi)? * hi);
    }
    let rule = gauss_legendre(POINTS);
    let mut s = 0.0;
    for nd in mapped_nodes(&rule, lo, hi) {
        s += nd.weight * f(nd.x)?;
    }
    Ok(s)
}

/// Jet version of [`panel_sum`].
fn panel_sum_jet<F: FnMut(f64) -> Result<Jet>>(f: &mut F, lo: f64, hi: f64, order: usize) -> Result<Jet> {
    if lo == 0.0 {
        return Ok(f(0.5 * hi)?.scale(hi));
    }
    gl_jet(f, lo, hi, order)
}

/// Gauss-Legendre sum of a jet-valued integrand over `[lo, hi]`.
fn gl_jet<F: FnMut(f64) -> Result<Jet>>(f: &mut F, lo: f64, hi: f64, order: usize) -> Result<Jet> {
    let rule = gauss_legendre(POINTS);
    let mut s = Jet::constant(0.0, order);
    for nd in mapped_nodes(&rule, lo, hi) {
        s = &s + &f(nd.x)?.scale(nd.weight);
    }
    Ok(s)
}

fn graded_jet<F: FnMut(f64) -> Result<Jet>>(mut f: F, floor: f64, order: usize) -> Result<Jet> {
    let mut s = Jet::constant(0.0, order);
    for (lo, hi) in panels(0.0, 1.0, floor) {
        s = &s + &panel_sum_jet(&mut f, lo, hi, order)?;
    }
    Ok(s)
}

/// `Phi_R` in odd dimensions from a jet of `Phi_1(sqrt(s))` in `sigma`, `s = s0 + lambda sigma`.
fn odd_radius(n: usize, s0: f64, lambda: f64, jet: &Jet) -> f64 {
    let order = n + 1;
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    2.0 * PI.sqrt() * rgamma(n as f64 + 1.5) * sign * gamma(order as f64 + 1.0) * jet.coeffs()[order]
        * (s0 / lambda).powi(order as i32)
}

/// `Phi_R` in odd dimensions with `Phi_1` taken from the elementary sums.
pub fn phi_r_elementary(params: &ModelParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be positive and finite, got {r}")));
    }
    let ctx = Ctx::new(params);
    let el = Elementary::new(&ctx)?;
    let rc = 1.0 - r;
    if rc <= 0.0 && params.kind.bounded_support() {
        return Ok(0.0);
    }
    if rc == 0.0 {
        return Err(Error::EndpointUnstable { distance: 0.0, margin: 0.0 });
    }
    let (s0, sc0) = (r * r, rc * (1.0 + r));
    let lambda = natural_scale(s0, sc0);
    let jet = phi1_elementary_jet(&ctx, &el, s0, sc0, lambda, params.n + 1)?;
    Ok(odd_radius(params.n, s0, lambda, &jet))
}

/// Radius density engine for one parameter set.
#[derive(Debug, Clone)]
pub struct Radial {
    ctx: Ctx,
}

impl Radial {
    pub fn new(params: &ModelParams) -> Self {
        Radial { ctx: Ctx::new(params) }
    }

    pub fn params(&self) -> &ModelParams {
        &self.ctx.params
    }

    /// `Phi_R(r)`.
    pub fn phi_r(&self, r: f64) -> Result<f64> {
        self.phi_r_split(r, 1.0 - r)
    }

    /// `Phi_R(r)` with `rc = 1 - r` supplied to full precision.
    pub fn phi_r_split(&self, r: f64, rc: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be positive and finite, got {r}")));
        }
        let p = &self.ctx.params;
        if rc <= 0.0 && p.kind.bounded_support() {
            return Ok(0.0);
        }
        if rc == 0.0 {
            return Err(Error::EndpointUnstable { distance: 0.0, margin: 0.0 });
        }
        let n = p.n;
        let order = n + 1;
        let s0 = r * r;
        let sc0 = rc * (1.0 + r);
        let lambda = natural_scale(s0, sc0);
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        let fact = gamma(order as f64 + 1.0);
        let v = match p.parity {
            Parity::Odd => odd_radius(n, s0, lambda, &phi1_jet(&self.ctx, s0, sc0, lambda, order)?),
            Parity::Even => {
                let h = self.half_integral_jet(s0, sc0, lambda, order)?;
                2.0 * PI.sqrt() * rgamma(n as f64 + 1.0) / s0.sqrt() * sign * fact * h.coeffs()[order]
                    * (s0 / lambda).powi(order as i32)
            }
        };
        Ok(v)
    }

    /// `phi` jet at `t0` re-expressed in the variable `eta` with `dt/d eta = slope`.
    fn phi_jet_at(&self, t0: f64, tc0: f64, slope: f64, order: usize) -> Result<Jet> {
        let lt = natural_scale(t0, tc0);
        Ok(phi1_jet(&self.ctx, t0, tc0, lt, order)?.rescale_variable(slope / lt))
    }

    /// Jet in `eta` (`y = y0 + lambda eta`) of
    /// `h(y) = pi^{-1/2} int_y^inf phi(t) (t - y)^{-1/2} dt`, `phi(t) = Phi_1(sqrt(t))`.
    pub fn half_integral_jet(&self, y0: f64, yc0: f64, lambda: f64, order: usize) -> Result<Jet> {
        let alpha = self.ctx.alpha();
        let p = 1.0 / alpha;
        if self.ctx.kind() == WalkKind::Overshoot {
            return self.overshoot_half_integral_jet(y0, yc0, lambda, order);
        }
        // 2/sqrt(pi) sqrt(1 - y) int_0^1 phi(y + sigma^2 (1 - y)) d sigma,
        // with the edge sigma -> 1 opened up by 1 - sigma = v^{1/alpha} / 2
        let at = |sigma: f64, q: f64| self.phi_jet_at(y0 + sigma * sigma * yc0, q * yc0, q * lambda, order);
        // phi varies on the scale sigma ~ sqrt(y0) when y0 is small
        let mut inner = Jet::constant(0.0, order);
        let mut body = |sigma: f64| at(sigma, 1.0 - sigma * sigma);
        for (a, b) in panels(0.0, 0.5, (0.01 * (y0 / yc0).sqrt()).min(0.5)) {
            // smooth at sigma = 0, so no midpoint estimate here
            inner = &inner + &gl_jet(&mut body, a, b, order)?;
        }
        let edge = graded_jet(
            |v| {
                let w = 0.5 * v.powf(p);
                let sigma = 1.0 - w;
                Ok(at(sigma, w * (1.0 + sigma))?.scale(0.5 * p * v.powf(p - 1.0)))
            },
            (2.0 * NEAR).powf(alpha).max(FLOOR),
            order,
        )?;
        inner = &inner + &edge;
        let len = Jet::from_coeffs(line(yc0, -lambda, order));
        Ok((&len.sqrt()? * &inner).scale(2.0 / PI.sqrt()))
    }

    /// The half integral for unbounded support, `2/sqrt(pi) int_0^inf phi(y + u^2) du`.
    ///
    /// `phi` is only weakly singular at `t = 1`, so the integral runs straight
    /// through that point, with panels graded toward it from both sides.
    fn overshoot_half_integral_jet(&self, y0: f64, yc0: f64, lambda: f64, order: usize) -> Result<Jet> {
        let p = 1.0 / self.ctx.alpha();
        let node = |u: f64, tc0: f64| self.phi_jet_at(y0 + u * u, tc0, lambda, order);
        let mut total;
        let start = if yc0 > 0.0 {
            let us = yc0.sqrt();
            let below = graded_jet(
                |v| {
                    let d = us * v * v;
                    Ok(node(us - d, d * (2.0 * us - d))?.scale(2.0 * us * v))
                },
                FLOOR,
                order,
            )?;
            let above = graded_jet(
                |v| {
                    let d = us * v * v;
                    Ok(node(us + d, -d * (2.0 * us + d))?.scale(2.0 * us * v))
                },
                FLOOR,
                order,
            )?;
            total = &below + &above;
            if 2.0 * us < 1.0 {
                let len = 1.0 - 2.0 * us;
                let gap = graded_jet(
                    |v| {
                        let u = 2.0 * us + len * v;
                        Ok(node(u, yc0 - u * u)?.scale(len))
                    },
                    FLOOR,
                    order,
                )?;
                total = &total + &gap;
                1.0
            } else {
                2.0 * us
            }
        } else {
            // t = 1 sits just behind u = 0 when y0 is close to 1
            let root = y0.sqrt();
            total = graded_jet(
                |v| {
                    let u = root * v;
                    Ok(node(u, yc0 - u * u)?.scale(root))
                },
                FLOOR,
                order,
            )?;
            root
        };
        // tail through u^2 = start^2 w^{-2/alpha}
        let t0 = start * start;
        let far = graded_jet(
            |w| {
                let tau = t0 * w.powf(-2.0 * p);
                let jac = t0 * p * w.powf(-2.0 * p - 1.0) / tau.sqrt();
                Ok(node(tau.sqrt(), yc0 - tau)?.scale(jac))
            },
            tail_floor(t0, 1.0 / p),
            order,
        )?;
        Ok((&total + &far).scale(2.0 / PI.sqrt()))
    }
}

/// Smallest `w` for which `start * w^{-2/alpha}` stays below `FAR^2`.
fn tail_floor(start: f64, alpha: f64) -> f64 {
    (start / (FAR * FAR)).powf(alpha / 2.0).max(FLOOR)
}

fn line(c0: f64, c1: f64, order: usize) -> Vec<f64> {
    let mut c = vec![0.0; order + 1];
    c[0] = c0;
    if order > 0 {
        c[1] = c1;
    }
    c
}

/// `Phi_R(r)` for one parameter set; zero beyond the support of bounded walks.
pub fn phi_r(params: &ModelParams, r: f64) -> Result<f64> {
    Radial::new(params).phi_r(r)
}

/// How a segment variable `v in (0, 1]` maps to the radius.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Map {
    /// `r = anchor + dir * len * v^p`.
    Power { anchor: f64, dir: f64, len: f64, p: f64 },
    /// `r = start * v^{-1/alpha}`.
    Tail { start: f64, alpha: f64 },
}

/// A radius together with `1 - r` and its offset from the segment anchor.
#[derive(Debug, Clone, Copy)]
struct Point {
    r: f64,
    rc: f64,
    offset: f64,
}

impl Map {
    fn point(&self, v: f64) -> (Point, f64) {
        match *self {
            Map::Power { anchor, dir, len, p } => {
                let offset = len * v.powf(p);
                let r = anchor + dir * offset;
                let rc = if anchor == 1.0 { -dir * offset } else { 1.0 - r };
                (Point { r, rc, offset }, len * p * v.powf(p - 1.0))
            }
            Map::Tail { start, alpha } => {
                let r = start * v.powf(-1.0 / alpha);
                (Point { r, rc: 1.0 - r, offset: r - start }, r / (alpha * v))
            }
        }
    }

    fn inverse(&self, r: f64) -> f64 {
        match *self {
            Map::Power { anchor, dir, len, p } => ((dir * (r - anchor) / len).max(0.0)).powf(1.0 / p).min(1.0),
            Map::Tail { start, alpha } => (start / r).powf(alpha).min(1.0),
        }
    }

    fn increasing(&self) -> bool {
        matches!(*self, Map::Power { dir, .. } if dir > 0.0)
    }

    fn range(&self) -> (f64, f64) {
        match *self {
            Map::Power { anchor, dir, len, .. } => {
                let end = anchor + dir * len;
                (anchor.min(end), anchor.max(end))
            }
            Map::Tail { start, .. } => (start, f64::INFINITY),
        }
    }

    fn floor(&self) -> f64 {
        match *self {
            Map::Power { len, p, .. } => (NEAR / len).powf(1.0 / p).max(FLOOR),
            Map::Tail { start, alpha } => (start / FAR).powf(alpha).max(FLOOR),
        }
    }
}

/// Segments covering `(from, support end)`, ordered by radius. Endpoint
/// singularities at `from`, at `r = 1` and at infinity are each mapped out.
fn segments(kind: WalkKind, alpha: f64, from: f64) -> Vec<Map> {
    let p = 1.0 / alpha;
    let mut out = vec![];
    if from < 1.0 {
        let mid = 0.5 * (from + 1.0);
        let p0 = if from == 0.0 { p } else { 2.0 };
        out.push(Map::Power { anchor: from, dir: 1.0, len: mid - from, p: p0 });
        out.push(Map::Power { anchor: 1.0, dir: -1.0, len: 1.0 - mid, p });
        if kind == WalkKind::Overshoot {
            out.push(Map::Power { anchor: 1.0, dir: 1.0, len: 1.0, p });
            out.push(Map::Tail { start: 2.0, alpha });
        }
    } else if kind == WalkKind::Overshoot {
        out.push(Map::Power { anchor: from, dir: 1.0, len: from, p: 2.0 });
        out.push(Map::Tail { start: 2.0 * from, alpha });
    }
    out
}

fn integrate_segment<F: FnMut(Point) -> Result<f64>>(map: &Map, lo: f64, hi: f64, f: &mut F) -> Result<f64> {
    let mut g = |v: f64| -> Result<f64> {
        let (pt, jac) = map.point(v);
        Ok(f(pt)? * jac)
    };
    let mut total = 0.0;
    let floor = if lo == 0.0 { map.floor() * hi } else { 0.0 };
    for (a, b) in panels(lo, hi, floor) {
        total += panel_sum(&mut g, a, b)?;
    }
    Ok(total)
}

impl Radial {
    /// Integral of `Phi_R` over the whole support.
    pub fn total_mass(&self) -> Result<f64> {
        let p = self.params();
        let mut f = |pt: Point| self.phi_r_split(pt.r, pt.rc);
        segments(p.kind, p.alpha, 0.0).iter().map(|m| integrate_segment(m, 0.0, 1.0, &mut f)).sum()
    }

    /// `P(R <= r) = int_0^r Phi_R`, integrated directly.
    pub fn cdf(&self, r: f64) -> Result<f64> {
        if r.is_nan() {
            return Err(Error::Domain("radius is NaN".into()));
        }
        if r <= 0.0 {
            return Ok(0.0);
        }
        let p = self.params();
        let mut f = |pt: Point| self.phi_r_split(pt.r, pt.rc);
        let mut total = 0.0;
        for map in segments(p.kind, p.alpha, 0.0) {
            let (lo, hi) = map.range();
            if r >= hi {
                total += integrate_segment(&map, 0.0, 1.0, &mut f)?;
                continue;
            }
            if r > lo {
                let v = map.inverse(r);
                total += if map.increasing() {
                    integrate_segment(&map, 0.0, v, &mut f)?
                } else {
                    integrate_segment(&map, v, 1.0, &mut f)?
                };
            }
            break;
        }
        Ok(total)
    }

    /// `Phi_1(x) = c int_x^inf (1 - x^2/r^2)^{(d-3)/2} Phi_R(r) dr / r`.
    pub fn project_to_axis(&self, x: f64) -> Result<f64> {
        let p = *self.params();
        let x = x.abs();
        if x == 0.0 {
            return Err(Error::Domain("projection needs x != 0".into()));
        }
        if x >= 1.0 && p.kind.bounded_support() {
            return Ok(0.0);
        }
        let c = projection_constant(p.n, p.parity);
        let e = p.kernel_exponent();
        let segs = segments(p.kind, p.alpha, x);
        let mut total = 0.0;
        for (i, map) in segs.iter().enumerate() {
            let mut f = |pt: Point| -> Result<f64> {
                let gap = if i == 0 { pt.offset } else { pt.r - x };
                let w = (gap * (pt.r + x) / (pt.r * pt.r)).powf(e);
                Ok(w * self.phi_r_split(pt.r, pt.rc)? / pt.r)
            };
            total += integrate_segment(map, 0.0, 1.0, &mut f)?;
        }
        Ok(c * total)
    }

    /// Tabulated distribution function for fast repeated evaluation.
    pub fn cdf_table(&self) -> Result<CdfTable> {
        let p = self.params();
        tabulate(p.kind, p.alpha, |pt| self.phi_r_split(pt.r, pt.rc))
    }

    /// Tabulated distribution function of one coordinate.
    pub fn coordinate_cdf_table(&self) -> Result<CoordinateCdf> {
        let p = self.params();
        let half = tabulate(p.kind, p.alpha, |pt| phi1_value(&self.ctx, pt.r, pt.rc))?;
        Ok(CoordinateCdf { half })
    }
}

/// Integrates `f` over the support with knots fine enough for interpolation.
fn tabulate<F: FnMut(Point) -> Result<f64>>(kind: WalkKind, alpha: f64, mut f: F) -> Result<CdfTable> {
    let mut segs = vec![];
    let mut offset = 0.0;
    let table_rule = gauss_legendre(TABLE_POINTS);
    for map in segments(kind, alpha, 0.0) {
        let mut g = |v: f64| -> Result<f64> {
            let (pt, jac) = map.point(v);
            Ok(f(pt)? * jac)
        };
        let mut v = vec![0.0];
        let mut cum = vec![0.0];
        let mut slope = vec![f64::NAN];
        for (a, b) in panels(0.0, 1.0, map.floor()) {
            // finer knots than the plain integral needs, for the interpolant
            let pieces: Vec<(f64, f64)> = if a == 0.0 {
                vec![(a, b)]
            } else {
                (0..TABLE_SPLIT)
                    .map(|i| (a + (b - a) * i as f64 / TABLE_SPLIT as f64, a + (b - a) * (i + 1) as f64 / TABLE_SPLIT as f64))
                    .collect()
            };
            for (lo, hi) in pieces {
                let s = if lo == 0.0 {
                    panel_sum(&mut g, lo, hi)?
                } else {
                    mapped_nodes(&table_rule, lo, hi).map(|nd| Ok(nd.weight * g(nd.x)?)).sum::<Result<f64>>()?
                };
                v.push(hi);
                cum.push(cum.last().unwrap() + s);
                slope.push(g(hi)?);
            }
        }
        let mass = *cum.last().unwrap();
        let (lo, hi) = map.range();
        segs.push(SegTable { map, lo, hi, offset, mass, v, cum, slope });
        offset += mass;
    }
    Ok(CdfTable { segs, total: offset })
}

#[derive(Debug, Clone)]
struct SegTable {
    map: Map,
    lo: f64,
    hi: f64,
    offset: f64,
    mass: f64,
    v: Vec<f64>,
    cum: Vec<f64>,
    slope: Vec<f64>,
}

impl SegTable {
    /// Cumulative integral from `v = 0`, cubic Hermite between knots.
    fn partial(&self, v: f64) -> f64 {
        let k = self.v.partition_point(|&x| x <= v).clamp(1, self.v.len() - 1);
        let (v0, v1) = (self.v[k - 1], self.v[k]);
        let (c0, c1) = (self.cum[k - 1], self.cum[k]);
        let h = v1 - v0;
        let t = ((v - v0) / h).clamp(0.0, 1.0);
        let (d0, d1) = (self.slope[k - 1], self.slope[k]);
        if !(d0.is_finite() && d1.is_finite()) {
            return c0 + t * (c1 - c0);
        }
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * c0 + (t3 - 2.0 * t2 + t) * h * d0 + (-2.0 * t3 + 3.0 * t2) * c1 + (t3 - t2) * h * d1
    }
}

/// Radius distribution function on a fixed set of knots.
#[derive(Debug, Clone)]
pub struct CdfTable {
    segs: Vec<SegTable>,
    total: f64,
}

impl CdfTable {
    /// Mass of the whole support as integrated by the table.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Radius at which the table reaches probability `p`, by bisection.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, self.total);
        let seg = self.segs.iter().find(|s| p <= s.offset + s.mass).unwrap_or_else(|| self.segs.last().unwrap());
        let inc = seg.map.increasing();
        let target = if inc { p - seg.offset } else { seg.mass - (p - seg.offset) };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if seg.partial(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        seg.map.point(0.5 * (lo + hi)).0.r
    }

    pub fn eval(&self, r: f64) -> f64 {
        if !(r > 0.0) {
            return 0.0;
        }
        for s in &self.segs {
            if r < s.hi && r >= s.lo {
                let g = s.partial(s.map.inverse(r));
                return s.offset + if s.map.increasing() { g } else { s.mass - g };
            }
        }
        self.total
    }
}

/// Distribution function of one coordinate, built from its even density.
#[derive(Debug, Clone)]
pub struct CoordinateCdf {
    half: CdfTable,
}

impl CoordinateCdf {
    pub fn eval(&self, x: f64) -> f64 {
        let h = self.half.eval(x.abs());
        if x < 0.0 { 0.5 - h } else { 0.5 + h }
    }

    /// `2 int_0^inf Phi_1`, one up to the tabulation error.
    pub fn total(&self) -> f64 {
        2.0 * self.half.total()
    }
}

/// `P(R <= r)`.
pub fn radial_cdf(params: &ModelParams, r: f64) -> Result<f64> {
    Radial::new(params).cdf(r)
}

/// `Phi_1(x)` rebuilt from `Phi_R` by projecting the radius onto one axis.
pub fn project_radius_to_axis(params: &ModelParams, x: f64) -> Result<f64> {
    Radial::new(params).project_to_axis(x)
}

/// One-coordinate density of a radius concentrated at `r0`.
pub fn project_point_mass(params: &ModelParams, r0: f64, x: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::Domain(format!("point mass needs a positive radius, got {r0}")));
    }
    let x = x.abs();
    if x >= r0 {
        return Ok(0.0);
    }
    let u = x / r0;
    Ok(projection_constant(params.n, params.parity) * ((1.0 - u) * (1.0 + u)).powf(params.kernel_exponent()) / r0)
}

/// Density of the walk at `point` and time `t`.
pub fn cartesian_density(params: &ModelParams, point: &[f64], t: f64) -> Result<f64> {
    if point.len() != params.dim {
        return Err(Error::Domain(format!("point has {} coordinates, dimension is {}", point.len(), params.dim)));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    let norm = point.iter().map(|x| x * x).sum::<f64>().sqrt();
    let margin = crate::calculus::fractional::ENDPOINT_MARGIN;
    if norm < margin * t {
        return Err(Error::EndpointUnstable { distance: norm / t, margin });
    }
    let phi = phi_r(params, norm / t)?;
    let d = params.dim as f64;
    let sphere = 2.0 * PI.powf(d / 2.0) / gamma(d / 2.0);
    Ok(phi / (sphere * t * norm.powi(params.dim as i32 - 1)))
}
