//! Goodness-of-fit and summary statistics linking ensembles to the analytic densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::Ensemble;

/// Fewest exceedances accepted by [`tail_exponent_estimate`].
pub const MIN_EXCEEDANCES: usize = 1000;
/// Default share of the sample used by the Hill estimator.
pub const HILL_FRACTION: f64 = 0.01;

/// Largest gap between the empirical distribution of `sorted` and `cdf`,
/// checked on both sides of every order statistic.
pub fn ks_distance<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |acc, (i, &x)| {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    })
}

/// Histogram normalised to a density, plus the share of samples past the last edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub overflow_mass: f64,
}

impl Histogram {
    /// Total probability: bin masses plus the overflow.
    pub fn total_mass(&self) -> f64 {
        self.density.iter().zip(self.edges.windows(2)).map(|(d, e)| d * (e[1] - e[0])).sum::<f64>() + self.overflow_mass
    }
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("histogram edges must be ascending with at least one bin".into()));
    }
    Ok(())
}

fn fill(samples: &[f64], edges: &[f64], overflow: bool) -> Result<Histogram> {
    check_edges(edges)?;
    let (lo, hi) = (edges[0], *edges.last().unwrap());
    let mut counts = vec![0usize; edges.len() - 1];
    let mut over = 0usize;
    for &x in samples {
        if x > hi && overflow {
            over += 1;
            continue;
        }
        if !(x >= lo && x <= hi) {
            return Err(Error::Bin { value: x, lo, hi });
        }
        // bins are half open except the last
        let k = edges.partition_point(|&e| e <= x).clamp(1, counts.len());
        counts[k - 1] += 1;
    }
    let n = samples.len().max(1) as f64;
    let density = counts.iter().zip(edges.windows(2)).map(|(&c, e)| c as f64 / n / (e[1] - e[0])).collect();
    Ok(Histogram { edges: edges.to_vec(), density, overflow_mass: over as f64 / n })
}

/// Histogram density; a sample outside the edges is an error.
pub fn histogram_density(samples: &[f64], edges: &[f64]) -> Result<Histogram> {
    fill(samples, edges, false)
}

/// Histogram density with an overflow bin above the last edge.
pub fn histogram_with_overflow(samples: &[f64], edges: &[f64]) -> Result<Histogram> {
    fill(samples, edges, true)
}

/// Hill estimate of the tail index from the samples above `threshold`.
pub fn hill(samples: &[f64], threshold: f64) -> Result<f64> {
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("Hill threshold must be positive, got {threshold}")));
    }
    let logs: Vec<f64> = samples.iter().filter(|&&x| x > threshold).map(|x| (x / threshold).ln()).collect();
    if logs.len() < MIN_EXCEEDANCES {
        return Err(Error::InsufficientTail { found: logs.len(), required: MIN_EXCEEDANCES });
    }
    Ok(logs.len() as f64 / logs.iter().sum::<f64>())
}

/// Tail index of the survival function, `P(R > r) ~ r^{-index}`.
///
/// The threshold is the order statistic leaving `fraction` of the sample
/// above it, raised to `floor` if lower; with `floor = 1` a walk whose support
/// ends at the ballistic front has no exceedances at all.
pub fn tail_exponent_estimate(sorted: &[f64], fraction: f64, floor: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::InsufficientTail { found: 0, required: MIN_EXCEEDANCES });
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Domain(format!("tail fraction must lie in (0, 1), got {fraction}")));
    }
    let k = ((sorted.len() as f64 * fraction).round() as usize).clamp(1, sorted.len());
    let threshold = sorted[sorted.len() - k].max(floor);
    hill(sorted, threshold)
}

/// Least-squares slope of `ln f` against `ln r` on `points` log-spaced radii in `[a, b]`.
pub fn log_log_slope<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, points: usize) -> Result<f64> {
    if !(a > 0.0 && b > a) || points < 2 {
        return Err(Error::Domain("log-log fit needs 0 < a < b and two points".into()));
    }
    let (la, lb) = (a.ln(), b.ln());
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for i in 0..points {
        let lx = la + (lb - la) * i as f64 / (points - 1) as f64;
        let v = f(lx.exp())?;
        if !(v > 0.0) {
            return Err(Error::Domain(format!("log-log fit met a non-positive value {v} at r = {}", lx.exp())));
        }
        xs.push(lx);
        ys.push(v.ln());
    }
    let mx = xs.iter().sum::<f64>() / points as f64;
    let my = ys.iter().sum::<f64>() / points as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Ensemble with its fit statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnsembleSummary {
    pub count: usize,
    pub scale: f64,
    pub seed: u64,
    pub ks_radius: f64,
    pub ks_first_coord: f64,
    pub histogram: Histogram,
    pub quantiles: Vec<(f64, f64)>,
    pub max_radius: f64,
    pub fraction_beyond_front: f64,
}

/// Empirical quantile of sorted data, nearest rank.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let k = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

/// Summary of an ensemble against analytic distribution functions of the
/// radius and of the first coordinate.
pub fn summarize<F, G>(ens: &Ensemble, radius_cdf: F, coord_cdf: G, bins: usize) -> Result<EnsembleSummary>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let radii = &ens.radii;
    if radii.is_empty() {
        return Err(Error::Domain("empty ensemble".into()));
    }
    let bins = bins.max(1);
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 / bins as f64).collect();
    let beyond = radii.len() - radii.partition_point(|&r| r <= 1.0);
    Ok(EnsembleSummary {
        count: radii.len(),
        scale: ens.scale,
        seed: ens.seed,
        ks_radius: ks_distance(radii, radius_cdf),
        ks_first_coord: ks_distance(&ens.first_coords, coord_cdf),
        histogram: histogram_with_overflow(radii, &edges)?,
        quantiles: [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99].iter().map(|&p| (p, quantile(radii, p))).collect(),
        max_radius: *radii.last().unwrap(),
        fraction_beyond_front: beyond as f64 / radii.len() as f64,
    })
}
