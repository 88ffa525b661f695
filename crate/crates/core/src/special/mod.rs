pub mod gamma;
pub mod hyp2f1;
pub mod kernel;

pub use hyp2f1::{gauss_2f1, gauss_2f1_side, Arg, CutSide};
pub use kernel::{g1_hyper, g1_quadrature};
