//! Walk parameters, dimension parity and the combinatorial / Gamma constants
//! that appear in the density formulas.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::gamma::{binomial, gamma};

/// Largest supported dimension.
pub const MAX_DIM: usize = 25;

/// Which Lévy walk is being described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    /// Linearly interpolated walk, support radius <= 1.
    Standard,
    /// Wait-first walk: only completed jumps, support radius <= 1.
    Undershoot,
    /// Jump-first walk: completed jumps plus the running one, unbounded support.
    Overshoot,
}

impl WalkKind {
    pub const ALL: [WalkKind; 3] = [WalkKind::Standard, WalkKind::Undershoot, WalkKind::Overshoot];

    pub fn bounded_support(self) -> bool {
        !matches!(self, WalkKind::Overshoot)
    }

    pub fn name(self) -> &'static str {
        match self {
            WalkKind::Standard => "standard",
            WalkKind::Undershoot => "undershoot",
            WalkKind::Overshoot => "overshoot",
        }
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "std" => Ok(WalkKind::Standard),
            "undershoot" | "under" | "ulw" => Ok(WalkKind::Undershoot),
            "overshoot" | "over" | "olw" => Ok(WalkKind::Overshoot),
            other => Err(Error::Domain(format!("unknown walk kind `{other}`"))),
        }
    }
}

/// Parity of the dimension: odd `d = 2n + 3`, even `d = 2n + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

/// Validated model parameters. Velocity is fixed to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub kind: WalkKind,
    pub alpha: f64,
    pub dim: usize,
    pub n: usize,
    pub parity: Parity,
}

impl ModelParams {
    pub fn new(kind: WalkKind, alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if dim < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {dim}")));
        }
        if dim > MAX_DIM {
            return Err(Error::Domain(format!("dimension is capped at {MAX_DIM}, got {dim}")));
        }
        let (parity, n) = if dim % 2 == 1 {
            (Parity::Odd, (dim - 3) / 2)
        } else {
            (Parity::Even, (dim - 2) / 2)
        };
        Ok(ModelParams { kind, alpha, dim, n, parity })
    }

    pub fn velocity(&self) -> f64 {
        1.0
    }

    /// `d / 2`, the third hypergeometric parameter of the kernel.
    pub fn half_dim(&self) -> f64 {
        self.dim as f64 / 2.0
    }

    /// Exponent of the marginal kernel `(1 - u^2)^{(d-3)/2}`.
    pub fn kernel_exponent(&self) -> f64 {
        (self.dim as f64 - 3.0) / 2.0
    }

    pub fn with_kind(&self, kind: WalkKind) -> Self {
        ModelParams { kind, ..*self }
    }
}

/// Free-function form of [`ModelParams::new`].
pub fn make_params(kind: WalkKind, alpha: f64, dim: usize) -> Result<ModelParams> {
    ModelParams::new(kind, alpha, dim)
}

/// One `(m1, m2, j1, j2)` index tuple of the double binomial sums with its
/// integer weight `C(n,m1) C(m1,j1) C(n,m2) C(m2,j2) 2^{m1+m2-j1-j2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialTerm {
    pub m1: usize,
    pub m2: usize,
    pub j1: usize,
    pub j2: usize,
    pub weight: f64,
}

/// One `(m, j)` tuple of the single binomial sum, weight `C(n,m) C(m,j) 2^{m-j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleTerm {
    pub m: usize,
    pub j: usize,
    pub weight: f64,
}

/// Enumerate the `(m1, m2, j1, j2)` tuples in a fixed order.
pub fn binomial_terms(n: usize) -> Vec<BinomialTerm> {
    let mut out = Vec::with_capacity(((n + 1) * (n + 2) / 2).pow(2));
    for m1 in 0..=n {
        for m2 in 0..=n {
            for j1 in 0..=m1 {
                for j2 in 0..=m2 {
                    let weight = binomial(n, m1)
                        * binomial(m1, j1)
                        * binomial(n, m2)
                        * binomial(m2, j2)
                        * 2f64.powi((m1 + m2 - j1 - j2) as i32);
                    out.push(BinomialTerm { m1, m2, j1, j2, weight });
                }
            }
        }
    }
    out
}

pub fn single_terms(n: usize) -> Vec<SingleTerm> {
    let mut out = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for m in 0..=n {
        for j in 0..=m {
            let weight = binomial(n, m) * binomial(m, j) * 2f64.powi((m - j) as i32);
            out.push(SingleTerm { m, j, weight });
        }
    }
    out
}

/// Sum of positive terms, smallest first.
pub(crate) fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.into_iter().sum()
}

/// `B1` and `B2` normalising sums.
///
/// For the standard walk `B1` is the plain quadruple binomial sum; for the
/// under- and overshooting walks it is the single sum over `m = 0..=n`,
/// `j = 0..=m` weighted by `1 / (m + j + alpha + 1)`. `B2` is shared.
pub fn coeff_b1_b2(n: usize, alpha: f64, kind: WalkKind) -> (f64, f64) {
    let quad = binomial_terms(n);
    let b1 = match kind {
        WalkKind::Standard => sorted_sum(quad.iter().map(|t| t.weight).collect()),
        WalkKind::Undershoot | WalkKind::Overshoot => sorted_sum(
            single_terms(n)
                .iter()
                .map(|t| t.weight / ((t.m + t.j) as f64 + alpha + 1.0))
                .collect(),
        ),
    };
    let b2 = sorted_sum(
        quad.iter()
            .map(|t| {
                t.weight
                    / (((t.m1 + t.j1) as f64 + alpha + 1.0) * ((t.m2 + t.j2) as f64 + alpha + 1.0))
            })
            .collect(),
    );
    (b1, b2)
}

/// Prefactor `c` of the overshooting walk's Fourier–Laplace kernel.
pub fn overshoot_constant(n: usize, alpha: f64, parity: Parity) -> f64 {
    let n = n as f64;
    let (top, bottom) = match parity {
        Parity::Odd => (gamma(1.5 + n), gamma(1.5 + alpha / 2.0 + n)),
        Parity::Even => (gamma(1.0 + n), gamma(1.0 + alpha / 2.0 + n)),
    };
    (alpha * PI / 2.0).cos() * gamma(2.0 - alpha) * gamma((1.0 + alpha) / 2.0) * top
        / ((1.0 - alpha) * PI.sqrt() * gamma(1.0 - alpha) * bottom)
}

/// Normalisation of the one-coordinate marginal `(1 - u^2)^{(d-3)/2}` on [-1, 1].
pub fn projection_constant(n: usize, parity: Parity) -> f64 {
    let n = n as f64;
    match parity {
        Parity::Odd => gamma(n + 1.5) / (PI.sqrt() * gamma(n + 1.0)),
        Parity::Even => gamma(n + 1.0) / (PI.sqrt() * gamma(n + 0.5)),
    }
}

/// All constants for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub b1: f64,
    pub b2: f64,
    pub c_over: f64,
    pub c_proj: f64,
    pub binomial_terms: Vec<BinomialTerm>,
}

impl CoefficientSet {
    pub fn new(params: &ModelParams) -> Self {
        let (b1, b2) = coeff_b1_b2(params.n, params.alpha, params.kind);
        CoefficientSet {
            b1,
            b2,
            c_over: overshoot_constant(params.n, params.alpha, params.parity),
            c_proj: projection_constant(params.n, params.parity),
            binomial_terms: binomial_terms(params.n),
        }
    }
}
