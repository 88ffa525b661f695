use thiserror::Error;

/// Errors raised by the density engine, the numerical kernels and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series or continuation failed to converge: {0}")]
    Convergence(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("denominator vanished ({0:e})")]
    ZeroDenominator(f64),

    #[error("quadrature did not reach tolerance: estimate {estimate:e}, error {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("branch error: {0}")]
    Branch(String),

    #[error("evaluation too close to a support endpoint ({distance:e} < {margin:e})")]
    EndpointUnstable { distance: f64, margin: f64 },

    #[error("route {route} is not available for {parity} dimension")]
    RouteParity { route: &'static str, parity: &'static str },

    #[error("epsilon extrapolation did not contract: {0}")]
    Extrapolation(String),

    #[error("sample {value} falls outside the histogram range [{lo}, {hi}]")]
    Bin { value: f64, lo: f64, hi: f64 },

    #[error("density came out negative ({0:e})")]
    Negative(f64),

    #[error("at abscissa {at}: {source}")]
    At { at: f64, source: Box<Error> },

    #[error("too few tail exceedances: {found} < {required}")]
    InsufficientTail { found: usize, required: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by invalid user input rather than numerical failure.
    pub fn is_domain(&self) -> bool {
        match self {
            Error::At { source, .. } => source.is_domain(),
            e => matches!(e, Error::Domain(_) | Error::RouteParity { .. } | Error::Pole(_)),
        }
    }
}
