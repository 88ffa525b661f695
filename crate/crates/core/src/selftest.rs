//! Built-in oracle checks run by `levywalk selftest`.
//!
//! Every check compares a production code path with an independent closed
//! form. The Gamma table is a parameter so a perturbed constant can be
//! injected and the failing checks identified by name.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::calculus::fractional::{rl_right_derivative_half, rl_right_integral, rl_right_integral_half, HalfIntegralSpec};
use crate::calculus::jet::Jet;
use crate::density::closed::phi_r_d3_corrected;
use crate::density::radial::{phi_r, phi_r_elementary};
use crate::error::Result;
use crate::params::{make_params, WalkKind};
use crate::special::gamma::{Lanczos, LANCZOS};
use crate::special::hyp2f1::gauss_2f1;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// Faults that can be injected into the self-test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Second Lanczos coefficient scaled by `1 + 1e-6`.
    GammaConstant,
}

impl std::str::FromStr for Fault {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma-constant" => Ok(Fault::GammaConstant),
            other => Err(crate::Error::Domain(format!("unknown fault `{other}`"))),
        }
    }
}

fn lanczos_for(fault: Option<Fault>) -> Lanczos {
    let mut table = LANCZOS;
    if fault == Some(Fault::GammaConstant) {
        table.coeffs[1] *= 1.0 + 1e-6;
    }
    table
}

fn rel(a: f64, b: f64) -> f64 {
    if !(a.is_finite() && b.is_finite()) {
        return f64::INFINITY;
    }
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn worst<I: IntoIterator<Item = Result<f64>>>(errs: I) -> f64 {
    errs.into_iter().map(|e| e.unwrap_or(f64::INFINITY)).fold(0.0, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
}

fn gamma_checks(g: &Lanczos, out: &mut Vec<Check>) {
    let sqrt_pi = PI.sqrt();
    let cases: [(&str, f64, f64); 5] = [
        ("gamma(1/2)", 0.5, sqrt_pi),
        ("gamma(5)", 5.0, 24.0),
        ("gamma(1/3)", 1.0 / 3.0, 2.678_938_534_707_747_6),
        ("gamma(7/2)", 3.5, 15.0 * sqrt_pi / 8.0),
        ("gamma(-3/2)", -1.5, 4.0 * sqrt_pi / 3.0),
    ];
    for (name, x, exact) in cases {
        out.push(Check { group: "gamma", name: name.into(), error: rel(g.gamma(x), exact), tolerance: 1e-13 });
    }
}

fn closed_form_checks(out: &mut Vec<Check>) {
    let rs: Vec<f64> = (1..=9).map(|i| 0.1 * i as f64 - 0.05).collect();
    for kind in WalkKind::ALL {
        for alpha in [0.3, 0.6, 0.9] {
            let Ok(p) = make_params(kind, alpha, 3) else { continue };
            let mut grid = rs.clone();
            if kind == WalkKind::Overshoot {
                grid.extend([1.5, 4.0, 30.0]);
            }
            let hyper = worst(grid.iter().map(|&r| Ok(rel(phi_r(&p, r)?, phi_r_d3_corrected(kind, alpha, r)?))));
            out.push(Check { group: "closed-d3", name: format!("{kind} a={alpha} hyper"), error: hyper, tolerance: 1e-8 });
            let elem = worst(grid.iter().map(|&r| Ok(rel(phi_r_elementary(&p, r)?, phi_r_d3_corrected(kind, alpha, r)?))));
            out.push(Check { group: "closed-d3", name: format!("{kind} a={alpha} elementary"), error: elem, tolerance: 1e-8 });
        }
    }
}

fn fractional_checks(g: &Lanczos, out: &mut Vec<Check>) {
    // I^beta (1 - t)^k = Gamma(k+1)/Gamma(k+1+beta) (1 - x)^{k+beta}
    for (beta, k) in [(0.5, 1.0), (0.3, 2.0), (0.75, 0.5)] {
        let err = worst([0.1, 0.4, 0.8].iter().map(|&x: &f64| {
            let v = rl_right_integral(|t| (1.0 - t).powf(k), beta, x, 1.0)?;
            Ok(rel(v, g.gamma(k + 1.0) / g.gamma(k + 1.0 + beta) * (1.0 - x).powf(k + beta)))
        }));
        out.push(Check { group: "fractional", name: format!("I^{beta} (1-t)^{k}"), error: err, tolerance: 1e-8 });
    }
    // D^{n+1/2} (1 - t)^k = Gamma(k+1)/Gamma(k+1/2-n) (1 - y)^{k-1/2-n}
    for (n, k) in [(0usize, 2i32), (1, 3), (2, 4)] {
        let f = move |t: &Jet| -> Result<Jet> { Ok((&Jet::constant(1.0, t.order()) - t).powi(k)) };
        let spec = HalfIntegralSpec { integrand: &f, n, support: 1.0 };
        let kf = k as f64;
        let err = worst([0.2, 0.5, 0.7].iter().map(|&y: &f64| {
            let v = rl_right_derivative_half(&spec, y)?;
            Ok(rel(v, g.gamma(kf + 1.0) / g.gamma(kf + 0.5 - n as f64) * (1.0 - y).powf(kf - 0.5 - n as f64)))
        }));
        out.push(Check { group: "fractional", name: format!("D^{n}.5 (1-t)^{k}"), error: err, tolerance: 1e-8 });
    }
    // D^{1/2} I^{1/2} f = f, with the half integral of f taken in jet form
    let smooth = |t: &Jet| -> Result<Jet> { Ok(t.scale(2.0).exp().sin()) };
    let half = |t: &Jet| -> Result<Jet> {
        let order = t.order();
        let mut acc = Jet::constant(0.0, order);
        let rule = crate::quadrature::gauss_legendre(48);
        for (a, b) in [(0.0, 0.5), (0.5, 1.0)] {
            for nd in crate::quadrature::mapped_nodes(&rule, a, b) {
                let len = &Jet::constant(1.0, order) - t;
                let x = t + &len.scale(nd.x * nd.x);
                acc = &acc + &smooth(&x)?.scale(nd.weight);
            }
        }
        let len = &Jet::constant(1.0, order) - t;
        Ok(&len.sqrt()?.scale(2.0 / PI.sqrt()) * &acc)
    };
    let spec = HalfIntegralSpec { integrand: &half, n: 0, support: 1.0 };
    let err = worst([0.1, 0.3, 0.6].iter().map(|&y: &f64| {
        let v = rl_right_derivative_half(&spec, y)?;
        Ok((v - (2.0 * y).exp().sin()).abs())
    }));
    out.push(Check { group: "fractional", name: "D^1/2 I^1/2 sin(e^2t)".into(), error: err, tolerance: 1e-6 });
    let f = |t: f64| (3.0 * t).cos();
    let err = worst([0.2, 0.5].iter().map(|&y: &f64| Ok(rel(rl_right_integral_half(&f, y, 1.0)?, rl_right_integral(f, 0.5, y, 1.0)?))));
    out.push(Check { group: "fractional", name: "I^1/2 two maps".into(), error: err, tolerance: 1e-8 });
}

fn hyp2f1_checks(out: &mut Vec<Check>) {
    let zs = [Complex64::new(0.4, 0.3), Complex64::new(1.5, 0.2), Complex64::new(-2.0, 1.0), Complex64::new(5.0, -3.0)];
    let (a, b, c) = (-0.3, 0.35, 2.5);
    let cmp = |f: &dyn Fn(Complex64) -> Result<(Complex64, Complex64)>| {
        worst(zs.iter().map(|&z| {
            let (u, v) = f(z)?;
            Ok((u - v).norm() / v.norm())
        }))
    };
    let conj = cmp(&|z| Ok((gauss_2f1(a, b, c, z.conj())?, gauss_2f1(a, b, c, z)?.conj())));
    out.push(Check { group: "2f1", name: "conjugate reflection".into(), error: conj, tolerance: 1e-12 });
    let euler = cmp(&|z| {
        let w = (Complex64::new(1.0, 0.0) - z).powf(c - a - b) * gauss_2f1(c - a, c - b, c, z)?;
        Ok((w, gauss_2f1(a, b, c, z)?))
    });
    out.push(Check { group: "2f1", name: "Euler transformation".into(), error: euler, tolerance: 1e-10 });
    let pfaff = cmp(&|z| {
        let one = Complex64::new(1.0, 0.0);
        let w = (one - z).powf(-a) * gauss_2f1(a, c - b, c, z / (z - one))?;
        Ok((w, gauss_2f1(a, b, c, z)?))
    });
    out.push(Check { group: "2f1", name: "Pfaff transformation".into(), error: pfaff, tolerance: 1e-10 });
}

/// Runs every check, with `fault` injected when given.
pub fn run(fault: Option<Fault>) -> Vec<Check> {
    let g = lanczos_for(fault);
    let mut out = Vec::new();
    gamma_checks(&g, &mut out);
    closed_form_checks(&mut out);
    fractional_checks(&g, &mut out);
    hyp2f1_checks(&mut out);
    out
}

/// Pass/fail matrix, one line per check, failures listed at the end.
pub fn report(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        let _ = writeln!(
            s,
            "{:<4} {:<11} {:<32} err {:.2e} tol {:.0e}",
            if c.passed() { "PASS" } else { "FAIL" },
            c.group,
            c.name,
            c.error,
            c.tolerance
        );
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        let _ = writeln!(s, "all {} checks passed", checks.len());
    } else {
        let _ = writeln!(s, "{} of {} checks failed: {}", failed.len(), checks.len(), failed.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes() {
        let checks = run(None);
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn gamma_fault_is_named() {
        let checks = run(Some(Fault::GammaConstant));
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.group).collect();
        assert!(failed.contains(&"gamma"));
        assert!(failed.iter().all(|g| *g == "gamma" || *g == "fractional"), "{failed:?}");
        assert!(report(&checks).contains("gamma(1/2)"));
    }
}
