//! Gauss–Legendre rules and the composite / adaptive integrators built on them.
//!
//! Rules are computed once per size and shared read-only. Nodes are found by
//! Newton iteration in the angle `theta` (`x = cos theta`), which gives the
//! complements `1 - x` and `1 + x` to full relative precision.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    /// `1 + x` for each node.
    pub from_left: Vec<f64>,
    /// `1 - x` for each node.
    pub from_right: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    fn compute(n: usize) -> Rule {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut from_left = vec![0.0; n];
        let mut from_right = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // i-th root counted from x = 1
            let mut theta = PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut dp = 0.0;
            for _ in 0..100 {
                let x = theta.cos();
                let (p, d) = legendre(n, x);
                dp = d;
                // dP/dtheta = -sin(theta) P'(x)
                let step = p / (-theta.sin() * d);
                theta -= step;
                if step.abs() < 1e-16 * theta.abs().max(1.0) {
                    let x = theta.cos();
                    dp = legendre(n, x).1;
                    break;
                }
            }
            let s = theta.sin();
            let w = 2.0 / (s * s * dp * dp);
            let half = theta / 2.0;
            let right = 2.0 * half.sin().powi(2);
            let left = 2.0 * half.cos().powi(2);
            // node near +1 at index n-1-i, mirrored node at i
            let hi = n - 1 - i;
            nodes[hi] = theta.cos();
            from_right[hi] = right;
            from_left[hi] = left;
            weights[hi] = w;
            nodes[i] = -theta.cos();
            from_right[i] = left;
            from_left[i] = right;
            weights[i] = w;
        }
        if n % 2 == 1 {
            let m = n / 2;
            nodes[m] = 0.0;
            from_left[m] = 1.0;
            from_right[m] = 1.0;
        }
        Rule { nodes, from_left, from_right, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

static RULES: OnceLock<RwLock<HashMap<usize, Arc<Rule>>>> = OnceLock::new();

/// Shared `n`-point rule, computed on first use.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    let cache = RULES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().expect("rule cache poisoned").get(&n) {
        return Arc::clone(r);
    }
    let rule = Arc::new(Rule::compute(n));
    let mut w = cache.write().expect("rule cache poisoned");
    Arc::clone(w.entry(n).or_insert(rule))
}

/// A point inside `[lo, hi]` with its distances to both ends.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub from_lo: f64,
    pub from_hi: f64,
    pub weight: f64,
}

/// Nodes of `rule` mapped onto `[lo, hi]`, weights included.
pub fn mapped_nodes(rule: &Rule, lo: f64, hi: f64) -> impl Iterator<Item = Node> + '_ {
    let h = 0.5 * (hi - lo);
    (0..rule.len()).map(move |i| {
        let from_lo = h * rule.from_left[i];
        let from_hi = h * rule.from_right[i];
        let x = if rule.nodes[i] <= 0.0 { lo + from_lo } else { hi - from_hi };
        Node { x, from_lo, from_hi, weight: h * rule.weights[i] }
    })
}

/// Fixed-order Gauss–Legendre on `[lo, hi]`.
pub fn gl<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    mapped_nodes(&rule, lo, hi).map(|nd| nd.weight * f(nd.x)).sum()
}

/// Panels `[t_{k+1}, t_k]` with `t_0 = len`, `t_{k+1} = ratio * t_k`, down to
/// `floor`, followed by `[0, floor]`. Returned in increasing order of `t`.
pub fn geometric_panels(len: f64, ratio: f64, floor: f64) -> Vec<(f64, f64)> {
    let mut out = vec![];
    let mut hi = len;
    while hi > floor {
        let lo = (hi * ratio).max(floor);
        out.push((lo, hi));
        hi = lo;
    }
    out.push((0.0, hi.min(floor)));
    out.reverse();
    out
}

/// Integral over `t in (0, len]` of `f(t)`, with panels graded geometrically
/// toward `t = 0` so that algebraic endpoint behaviour is resolved. `f`
/// receives the distance `t` from the graded end, never a rounded difference.
pub fn graded<F: FnMut(f64) -> Result<f64>>(mut f: F, len: f64, points: usize) -> Result<f64> {
    let rule = gauss_legendre(points);
    let mut total = 0.0;
    for (lo, hi) in geometric_panels(len, 0.25, len * 1e-15) {
        for nd in mapped_nodes(&rule, lo, hi) {
            total += nd.weight * f(lo + nd.from_lo)?;
        }
    }
    Ok(total)
}

/// Integral over `[0, len]` graded toward both ends; `f` gets `(t, len - t)`.
pub fn graded_both<F: FnMut(f64, f64) -> Result<f64>>(mut f: F, len: f64, points: usize) -> Result<f64> {
    let half = 0.5 * len;
    let left = graded(|t| f(t, len - t), half, points)?;
    let right = graded(|t| f(len - t, t), half, points)?;
    Ok(left + right)
}

/// Adaptive bisection with a 16-point rule; the error estimate is the
/// difference between the whole-interval value and the sum of its halves.
pub fn adaptive_complex<F>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let rule = gauss_legendre(16);
    let eval = |a: f64, b: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for nd in mapped_nodes(&rule, a, b) {
            acc += f(nd.x) * nd.weight;
        }
        acc
    };
    let mut stack = vec![(lo, hi, eval(lo, hi), 0u32)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_total = 0.0;
    let width = hi - lo;
    while let Some((a, b, whole, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let l = eval(a, m);
        let r = eval(m, b);
        let err = (l + r - whole).norm();
        let local_tol = (tol * (b - a) / width).max(1e-300);
        if err <= local_tol || depth >= 60 || m <= a || m >= b {
            total += l + r;
            err_total += err;
            continue;
        }
        stack.push((a, m, l, depth + 1));
        stack.push((m, b, r, depth + 1));
    }
    if !(total.re.is_finite() && total.im.is_finite()) || err_total > 100.0 * tol.max(1e-14 * total.norm()) {
        return Err(Error::Quadrature { estimate: total.norm(), error: err_total });
    }
    Ok(total)
}

/// Integral of a complex integrand over `[lo, hi]` whose nearest complex
/// singularity sits close to the real point `center`. Panels shrink
/// geometrically toward `center` from both sides until they are narrower than
/// `floor`; no panel is wider than `max_width`.
pub fn graded_around<F>(f: &F, lo: f64, hi: f64, center: f64, floor: f64, max_width: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let rule = gauss_legendre(16);
    let center = center.clamp(lo, hi);
    let floor = floor.max(1e-300);
    let mut total = Complex64::new(0.0, 0.0);
    let mut panel = |a: f64, b: f64| {
        let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
        let h = (b - a) / pieces as f64;
        for k in 0..pieces {
            let (pa, pb) = (a + k as f64 * h, if k + 1 == pieces { b } else { a + (k + 1) as f64 * h });
            for nd in mapped_nodes(&rule, pa, pb) {
                total += f(nd.x) * nd.weight;
            }
        }
    };
    for (side, len) in [(-1.0, center - lo), (1.0, hi - center)] {
        if len <= 0.0 {
            continue;
        }
        for (a, b) in geometric_panels(len, 0.35, floor.min(len)) {
            if b > a {
                let (x0, x1) = (center + side * a, center + side * b);
                panel(x0.min(x1), x0.max(x1));
            }
        }
    }
    total
}

/// Real-valued wrapper of [`adaptive_complex`].
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    adaptive_complex(&|x| Complex64::new(f(x), 0.0), lo, hi, tol).map(|c| c.re)
}

/// Gauss–Legendre with the point count doubled from 64 up to 4096 until two
/// successive results differ by less than `tol`.
pub fn doubling<T, F>(mut f: F, tol: f64) -> Result<T>
where
    F: FnMut(&Rule) -> Result<T>,
    T: Clone + DistanceTo,
{
    let mut n = 64;
    let mut prev = f(&gauss_legendre(n))?;
    while n < 4096 {
        n *= 2;
        let next = f(&gauss_legendre(n))?;
        let diff = next.distance(&prev);
        if diff < tol {
            return Ok(next);
        }
        prev = next;
    }
    let scale = prev.magnitude();
    Err(Error::Quadrature { estimate: scale, error: f64::NAN })
}

/// Distance between successive quadrature results.
pub trait DistanceTo {
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl DistanceTo for f64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}
