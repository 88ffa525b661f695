pub mod fractional;
pub mod jet;

pub use fractional::{rl_right_derivative_half, rl_right_integral, HalfIntegralSpec};
pub use jet::{jet_eval, nth_derivative, Jet, Scalar};
