//! Monte Carlo simulation of finite-time Lévy walks and of rescaled ensembles.
//!
//! Every sample owns a ChaCha stream selected by its index, so an ensemble is
//! the same whatever the number of worker threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::WalkKind;

/// Cap on renewals kept by the trajectory recorder.
pub const MAX_RECORDED: usize = 10_000;

/// An independent random stream: `(seed, stream_id)` fixes every draw.
#[derive(Debug, Clone)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng }
    }

    /// Uniform on `(0, 1]`.
    pub fn open_uniform(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    /// Two independent standard normals by Box–Muller.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let r = (-2.0 * self.open_uniform().ln()).sqrt();
        let (s, c) = (2.0 * PI * self.rng.random::<f64>()).sin_cos();
        (r * c, r * s)
    }
}

/// Pareto waiting time from a uniform `u in (0, 1]`: `P(T > t) = t^{-alpha}`, `t >= 1`.
pub fn pareto_from_uniform(u: f64, alpha: f64) -> f64 {
    u.powf(-1.0 / alpha)
}

pub fn sample_waiting_time(alpha: f64, rng: &mut RngStream) -> f64 {
    pareto_from_uniform(rng.open_uniform(), alpha)
}

/// Uniform direction on the unit sphere in `d` dimensions, written into `out`.
pub fn fill_direction(out: &mut [f64], rng: &mut RngStream) {
    loop {
        let mut i = 0;
        while i < out.len() {
            let (a, b) = rng.normal_pair();
            out[i] = a;
            if i + 1 < out.len() {
                out[i + 1] = b;
            }
            i += 2;
        }
        let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
    }
}

pub fn sample_direction(d: usize, rng: &mut RngStream) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::Domain(format!("directions need d >= 2, got {d}")));
    }
    let mut v = vec![0.0; d];
    fill_direction(&mut v, rng);
    Ok(v)
}

/// Position of one walk at a fixed time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkSample {
    pub kind: WalkKind,
    pub position: Vec<f64>,
    pub radius: f64,
    pub first_coord: f64,
    /// Divisor applied to the position; one for raw walks.
    pub scale: f64,
    /// Time horizon before rescaling.
    pub time: f64,
}

impl WalkSample {
    fn new(kind: WalkKind, position: Vec<f64>, scale: f64, time: f64) -> Self {
        let radius = position.iter().map(|x| x * x).sum::<f64>().sqrt();
        WalkSample { kind, first_coord: position[0], position, radius, scale, time }
    }

    /// The same sample with the position divided by `n`.
    pub fn rescaled(&self, n: f64) -> Self {
        let position = self.position.iter().map(|x| x / n).collect();
        WalkSample { scale: self.scale * n, ..WalkSample::new(self.kind, position, 1.0, self.time) }
    }
}

/// All three walks driven by one sequence of draws.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkTriple {
    pub standard: WalkSample,
    pub undershoot: WalkSample,
    pub overshoot: WalkSample,
}

impl WalkTriple {
    pub fn get(&self, kind: WalkKind) -> &WalkSample {
        match kind {
            WalkKind::Standard => &self.standard,
            WalkKind::Undershoot => &self.undershoot,
            WalkKind::Overshoot => &self.overshoot,
        }
    }
}

fn check(d: usize, alpha: f64, horizon: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {d}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    Ok(())
}

/// Runs renewals until time `horizon` is passed; `visit` sees every jump that was started.
fn run<F: FnMut(f64, &[f64])>(d: usize, alpha: f64, horizon: f64, rng: &mut RngStream, mut visit: F) -> WalkTriple {
    let mut sum = vec![0.0; d];
    let mut dir = vec![0.0; d];
    let mut t = 0.0;
    loop {
        let w = sample_waiting_time(alpha, rng);
        fill_direction(&mut dir, rng);
        visit(w, &dir);
        if t + w > horizon {
            let done = horizon - t;
            let standard = sum.iter().zip(&dir).map(|(s, v)| s + done * v).collect();
            let overshoot = sum.iter().zip(&dir).map(|(s, v)| s + w * v).collect();
            let mut standard = WalkSample::new(WalkKind::Standard, standard, 1.0, horizon);
            // |L(t)| <= t holds exactly; rounding in the norm may exceed it by an ulp
            standard.radius = standard.radius.min(horizon);
            return WalkTriple {
                standard,
                undershoot: WalkSample::new(WalkKind::Undershoot, sum, 1.0, horizon),
                overshoot: WalkSample::new(WalkKind::Overshoot, overshoot, 1.0, horizon),
            };
        }
        sum.iter_mut().zip(&dir).for_each(|(s, v)| *s += w * v);
        t += w;
    }
}

/// The three walks at time `horizon` from one draw sequence.
pub fn walk_triple(d: usize, alpha: f64, horizon: f64, rng: &mut RngStream) -> Result<WalkTriple> {
    check(d, alpha, horizon)?;
    Ok(run(d, alpha, horizon, rng, |_, _| {}))
}

/// Position of one walk of the given kind at time `horizon`.
pub fn walk_position(kind: WalkKind, d: usize, alpha: f64, horizon: f64, rng: &mut RngStream) -> Result<WalkSample> {
    Ok(walk_triple(d, alpha, horizon, rng)?.get(kind).clone())
}

/// Renewal epochs and jump vectors of one walk, for plotting. At most
/// [`MAX_RECORDED`] jumps are kept.
pub fn record_trajectory(d: usize, alpha: f64, horizon: f64, rng: &mut RngStream) -> Result<(Vec<(f64, Vec<f64>)>, WalkTriple)> {
    check(d, alpha, horizon)?;
    let mut jumps = vec![];
    let triple = run(d, alpha, horizon, rng, |w, v| {
        if jumps.len() < MAX_RECORDED {
            jumps.push((w, v.to_vec()));
        }
    });
    Ok((jumps, triple))
}

/// Rescaled radii and first coordinates of one walk kind, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub kind: WalkKind,
    pub dim: usize,
    pub alpha: f64,
    pub scale: f64,
    pub seed: u64,
    pub radii: Vec<f64>,
    pub first_coords: Vec<f64>,
}

impl Ensemble {
    pub fn count(&self) -> usize {
        self.radii.len()
    }
}

/// Parameters of an ensemble run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub alpha: f64,
    pub scale: f64,
    pub count: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    fn check(&self) -> Result<()> {
        check(self.dim, self.alpha, self.scale)?;
        if self.scale < 10.0 {
            return Err(Error::Domain(format!("scale must be at least 10, got {}", self.scale)));
        }
        if self.count == 0 {
            return Err(Error::Domain("sample count must be positive".into()));
        }
        Ok(())
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Ensembles of all three kinds from the same draws: sample `i` uses stream `i`.
pub fn scaled_ensembles(spec: &EnsembleSpec) -> Result<[Ensemble; 3]> {
    spec.check()?;
    let n = spec.scale;
    let rows: Vec<[(f64, f64); 3]> = (0..spec.count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(spec.seed, i);
            let t = run(spec.dim, spec.alpha, n, &mut rng, |_, _| {});
            WalkKind::ALL.map(|k| {
                let s = t.get(k);
                (s.radius / n, s.first_coord / n)
            })
        })
        .collect();
    Ok([0, 1, 2].map(|j| Ensemble {
        kind: WalkKind::ALL[j],
        dim: spec.dim,
        alpha: spec.alpha,
        scale: n,
        seed: spec.seed,
        radii: sorted(rows.iter().map(|r| r[j].0).collect()),
        first_coords: sorted(rows.iter().map(|r| r[j].1).collect()),
    }))
}

/// Ensemble of one kind; identical to the matching entry of [`scaled_ensembles`].
pub fn scaled_ensemble(kind: WalkKind, spec: &EnsembleSpec) -> Result<Ensemble> {
    let [a, b, c] = scaled_ensembles(spec)?;
    Ok(match kind {
        WalkKind::Standard => a,
        WalkKind::Undershoot => b,
        WalkKind::Overshoot => c,
    })
}

/// Runs `f` on a pool with `threads` workers (zero means the rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}
