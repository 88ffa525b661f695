//! Closed-form radius densities in three dimensions, kept as test oracles.
//!
//! [`phi_r_d3_closed`] is the literal form. Two of its branches do not
//! integrate to one; [`phi_r_d3_corrected`] carries the repaired terms.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::WalkKind;

fn check(alpha: f64, r: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

fn standard(a: f64, r: f64, m: f64) -> f64 {
    let (p, q) = (1.0 + r, m * (1.0 + r));
    let c = (PI * a).cos();
    let num = p.powf(2.0 + 2.0 * a) * (1.0 + a - r) - m.powf(2.0 + 2.0 * a) * (1.0 + a + r) - 2.0 * r * q.powf(1.0 + a) * c;
    let den = p.powf(2.0 + 2.0 * a) + m.powf(2.0 + 2.0 * a) + 2.0 * q.powf(1.0 + a) * c;
    8.0 / PI * (a + 1.0) / a * (PI * a).sin() * r * q.powf(a - 1.0) * num / (den * den)
}

/// `cos_term` is the factor multiplying `2 (1 - a + 2r) cos(pi a)`.
fn undershoot(a: f64, r: f64, m: f64, cos_term: f64) -> f64 {
    let (p, q) = (1.0 + r, m * (1.0 + r));
    let c = (PI * a).cos();
    let num = m.powf(2.0 + 2.0 * a) * (1.0 - a - 2.0 * r)
        + p.powf(1.0 + 2.0 * a) * (1.0 - a + 3.0 * (1.0 + a) * r - 2.0 * r * r)
        + 2.0 * (1.0 - a + 2.0 * r) * cos_term * c;
    let den = m.powf(2.0 + 2.0 * a) + p.powf(2.0 + 2.0 * a) + 2.0 * q.powf(1.0 + a) * c;
    4.0 * (a + 1.0) / PI * (PI * a).sin() * m.powf(a) * r.powf(a - 1.0) * num / (den * den)
}

/// Inside the unit ball; `last_sign` multiplies the final `(r+1)^{3a+2}` term.
fn overshoot_inner(a: f64, r: f64, m: f64, last_sign: f64) -> f64 {
    let (p, q) = (1.0 + r, m * (1.0 + r));
    let c = (PI * a).cos();
    let num = p.powf(2.0 * a + 1.0) * ((a + 2.0) * r * r - 3.0 * (a + 1.0) * r - 1.0) * m.powf(a)
        - 2.0 * q.powf(a) * (((a + 2.0) * r + 1.0) * m.powf(a + 2.0) + p.powf(a + 2.0) * ((a + 2.0) * r - 1.0)) * c
        - p.powf(a) * (r * (a * (r + 3.0) + 2.0 * r + 3.0) - 1.0) * m.powf(2.0 * a + 1.0)
        - (1.0 - (a + 2.0) * r) * m.powf(3.0 * a + 2.0)
        - last_sign * p.powf(3.0 * a + 2.0) * ((a + 2.0) * r + 1.0);
    let den = 2.0 * q.powf(a + 1.0) * c + m.powf(2.0 * a + 2.0) + p.powf(2.0 * a + 2.0);
    2.0 * (PI * a).sin() / (PI * r) * num / (den * den)
}

fn overshoot_outer(a: f64, r: f64, m: f64) -> f64 {
    let p = 1.0 + r;
    let num = p.powf(a) * (1.0 + (2.0 + a) * r) - m.powf(a) * (-1.0 + (2.0 + a) * r);
    let den = m.powf(1.0 + a) - p.powf(1.0 + a);
    2.0 * (a * PI).sin() / PI * num / (r * den * den)
}

/// Literal three-dimensional radius densities.
pub fn phi_r_d3_closed(kind: WalkKind, alpha: f64, r: f64) -> Result<f64> {
    phi_r_d3_closed_split(kind, alpha, r, 1.0 - r)
}

/// [`phi_r_d3_closed`] with `rc = 1 - r` supplied to full precision.
pub fn phi_r_d3_closed_split(kind: WalkKind, alpha: f64, r: f64, rc: f64) -> Result<f64> {
    check(alpha, r)?;
    Ok(match kind {
        WalkKind::Standard if rc > 0.0 => standard(alpha, r, rc),
        WalkKind::Undershoot if rc > 0.0 => undershoot(alpha, r, rc, (rc * (1.0 + r)).powf(2.0 + alpha)),
        WalkKind::Overshoot if rc > 0.0 => overshoot_inner(alpha, r, rc, 1.0),
        WalkKind::Overshoot if rc < 0.0 => overshoot_outer(alpha, r, -rc),
        _ => 0.0,
    })
}

/// The same densities with the two misprinted terms repaired: the undershoot
/// cosine term carries `(1-r)^2 (1-r^2)^a` and the last overshoot term inside
/// the ball enters with a plus sign.
pub fn phi_r_d3_corrected(kind: WalkKind, alpha: f64, r: f64) -> Result<f64> {
    phi_r_d3_corrected_split(kind, alpha, r, 1.0 - r)
}

/// [`phi_r_d3_corrected`] with `rc = 1 - r` supplied to full precision.
pub fn phi_r_d3_corrected_split(kind: WalkKind, alpha: f64, r: f64, rc: f64) -> Result<f64> {
    check(alpha, r)?;
    Ok(match kind {
        WalkKind::Undershoot if rc > 0.0 => {
            undershoot(alpha, r, rc, rc * rc * (rc * (1.0 + r)).powf(alpha))
        }
        WalkKind::Overshoot if rc > 0.0 => overshoot_inner(alpha, r, rc, -1.0),
        _ => phi_r_d3_closed_split(kind, alpha, r, rc)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gl;

    /// Integral over (0, 1) with the endpoints mapped out by power substitutions.
    fn unit_mass(f: impl Fn(f64, f64) -> f64, alpha: f64) -> f64 {
        let inv = 1.0 / alpha;
        let left = |v: f64| {
            let r = 0.5 * v.powf(inv);
            0.5 * inv * v.powf(inv - 1.0) * f(r, 1.0 - r)
        };
        let right = |v: f64| {
            let rc = 0.5 * v.powf(inv);
            0.5 * inv * v.powf(inv - 1.0) * f(1.0 - rc, rc)
        };
        let mut total = 0.0;
        for k in 0..40 {
            let (a, b) = (k as f64 / 40.0, (k + 1) as f64 / 40.0);
            total += gl(left, a, b, 40) + gl(right, a, b, 40);
        }
        total
    }

    #[test]
    fn standard_is_positive_and_normalised() {
        let f = |r: f64, rc: f64| phi_r_d3_closed_split(WalkKind::Standard, 0.3, r, rc).unwrap();
        assert!((1..100).all(|i| f(i as f64 / 100.0, 1.0 - i as f64 / 100.0) > 0.0));
        let m = unit_mass(f, 0.3);
        assert!((m - 1.0).abs() < 1e-8, "{m}");
    }

    #[test]
    fn corrected_undershoot_is_normalised_printed_is_not() {
        for &a in &[0.3, 0.6] {
            let fixed = unit_mass(|r, rc| phi_r_d3_corrected_split(WalkKind::Undershoot, a, r, rc).unwrap(), a);
            let printed = unit_mass(|r, rc| phi_r_d3_closed_split(WalkKind::Undershoot, a, r, rc).unwrap(), a);
            assert!((fixed - 1.0).abs() < 1e-8, "{fixed}");
            assert!((printed - 1.0).abs() > 1e-3, "{printed}");
        }
    }

    #[test]
    fn outer_overshoot_decays_with_index_one_plus_alpha() {
        let a = 0.6;
        let f = |r: f64| phi_r_d3_closed(WalkKind::Overshoot, a, r).unwrap();
        let slope = (f(1e5).ln() - f(1e4).ln()) / 10f64.ln();
        assert!((slope + 1.0 + a).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn outside_support_and_domain() {
        assert_eq!(phi_r_d3_closed(WalkKind::Standard, 0.5, 1.2).unwrap(), 0.0);
        assert_eq!(phi_r_d3_corrected(WalkKind::Undershoot, 0.5, 1.2).unwrap(), 0.0);
        assert!(phi_r_d3_closed(WalkKind::Standard, 1.0, 0.5).is_err());
        assert!(phi_r_d3_closed(WalkKind::Standard, 0.5, -0.1).is_err());
    }
}
