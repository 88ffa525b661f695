//! Odd-dimensional `Phi_1` as finite binomial sums of elementary powers of
//! `1/x + 1`, `1/x - 1` and `1/x^2 - 1`.

use std::f64::consts::PI;

use crate::calculus::jet::Jet;
use crate::density::hyper::Ctx;
use crate::error::{Error, Result};
use crate::params::{binomial_terms, single_terms, BinomialTerm, Parity, SingleTerm, WalkKind};
use crate::special::gamma::gamma;

/// Precomputed sums for one odd-dimensional parameter set.
#[derive(Debug, Clone)]
pub struct Elementary {
    quad: Vec<BinomialTerm>,
    single: Vec<SingleTerm>,
    n: usize,
}

impl Elementary {
    pub fn new(ctx: &Ctx) -> Result<Self> {
        if ctx.params.parity != Parity::Odd {
            return Err(Error::RouteParity { route: "elementary", parity: "even" });
        }
        let n = ctx.params.n;
        Ok(Elementary { quad: binomial_terms(n), single: single_terms(n), n })
    }
}

/// Accumulates positive and negative contributions separately.
struct Signed {
    pos: Jet,
    neg: Jet,
}

impl Signed {
    fn new(order: usize) -> Self {
        Signed { pos: Jet::constant(0.0, order), neg: Jet::constant(0.0, order) }
    }
    fn add(&mut self, coef: f64, term: &Jet) {
        if coef >= 0.0 {
            self.pos = &self.pos + &term.scale(coef);
        } else {
            self.neg = &self.neg + &term.scale(-coef);
        }
    }
    fn total(&self) -> Jet {
        &self.pos - &self.neg
    }
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `base^{k + shift}` for `k = 0..count`.
fn power_table(base: &Jet, shift: f64, count: usize) -> Result<Vec<Jet>> {
    let ln = base.ln()?;
    Ok((0..count).map(|k| ln.scale(k as f64 + shift).exp()).collect())
}

fn integer_powers(base: &Jet, count: usize) -> Vec<Jet> {
    let mut out = Vec::with_capacity(count);
    let mut p = Jet::constant(1.0, base.order());
    for _ in 0..count {
        out.push(p.clone());
        p = &p * base;
    }
    out
}

/// Jet in `sigma` (`s = s0 + lambda sigma`) of `Phi_1(sqrt(s))` by the elementary sums.
pub fn phi1_elementary_jet(
    ctx: &Ctx,
    el: &Elementary,
    s0: f64,
    sc0: f64,
    lambda: f64,
    order: usize,
) -> Result<Jet> {
    if !(s0 > 0.0) {
        return Err(Error::Domain(format!("Phi_1 needs x != 0, got s = {s0}")));
    }
    let kind = ctx.kind();
    if sc0 <= 0.0 && kind.bounded_support() {
        return Ok(Jet::constant(0.0, order));
    }
    let alpha = ctx.alpha();
    let n = el.n;
    let mut sc = vec![0.0; order + 1];
    sc[0] = s0;
    if order > 0 {
        sc[1] = lambda;
    }
    let s = Jet::from_coeffs(sc);
    let x = s0.sqrt();
    let xc = sc0 / (1.0 + x);
    let u = s.powf(-0.5)?;
    let up = u.add_scalar(1.0);
    let mut um = u.add_scalar(-1.0);
    let mut v = s.recip()?.add_scalar(-1.0);
    let mut c = um.clone().into_coeffs();
    c[0] = xc / x;
    um = Jet::from_coeffs(c);
    let mut c = v.clone().into_coeffs();
    c[0] = sc0 / s0;
    v = Jet::from_coeffs(c);

    let vp = integer_powers(&v, 2 * n + 1);
    let (sa, ca) = (PI * alpha).sin_cos();
    let (sh, ch) = (PI * alpha / 2.0).sin_cos();
    let top = 4 * n + 3;

    if sc0 < 0.0 {
        // overshoot beyond the ballistic front
        let omu = um.scale(-1.0);
        let a_up = power_table(&up, alpha, 2 * n + 2)?;
        let a_om = power_table(&omu, alpha, 2 * n + 2)?;
        let mut sum = Signed::new(order);
        for t in &el.single {
            let e = t.m + t.j + 1;
            let w = t.weight / ((t.m + t.j) as f64 + alpha + 1.0) * sign(t.j);
            let bracket = &a_up[e] - &a_om[e];
            sum.add(w, &(&bracket * &vp[n - t.m]));
        }
        let pre = ctx.c_over * gamma(n as f64 + 1.0) / (gamma(n as f64 + 1.5) * PI.sqrt()) * sh;
        let upow = u.powf(2.0 * n as f64 + 2.0 + alpha)?;
        return upow.scale(pre).checked_div(&sum.total());
    }

    let a = power_table(&up, alpha, top)?;
    let b = power_table(&um, alpha, top)?;
    let c2 = power_table(&up, 2.0 * alpha, top)?;
    let d2 = power_table(&um, 2.0 * alpha, top)?;

    let mut den = Signed::new(order);
    for t in &el.quad {
        let (k1, k2) = (t.m1 + t.j1, t.m2 + t.j2);
        let k = k1 + k2;
        let w = t.weight / ((k1 as f64 + alpha + 1.0) * (k2 as f64 + alpha + 1.0));
        let vpow = &vp[2 * n - t.m1 - t.m2];
        den.add(w * sign(t.j1 + t.j2), &(&c2[k + 2] * vpow));
        den.add(w * sign(t.m1 + t.m2), &(&d2[k + 2] * vpow));
        den.add(2.0 * ca * w * sign(t.j1 + t.m2), &(&(&a[k1 + 1] * &b[k2 + 1]) * vpow));
    }
    let den = den.total();

    match kind {
        WalkKind::Standard => {
            let mut num = Signed::new(order);
            for t in &el.quad {
                let (k1, k2) = (t.m1 + t.j1, t.m2 + t.j2);
                let (e1, e2) = (k1 as f64 + alpha, k2 as f64 + alpha);
                let base = &(&a[k1] * &b[k2]) * &vp[2 * n - t.m1 - t.m2];
                let w = t.weight * sign(t.j1 + t.m2);
                num.add(w / (e1 * (e2 + 1.0)), &(&base * &um));
                num.add(w / (e2 * (e1 + 1.0)), &(&base * &up));
            }
            let ratio = num.total().checked_div(&den)?;
            Ok((&u * &ratio).scale(sa / PI))
        }
        WalkKind::Undershoot => {
            let mut num = Signed::new(order);
            for t in &el.single {
                let w = t.weight / ((t.m + t.j) as f64 + alpha + 1.0) * sign(t.m);
                num.add(w, &(&b[t.m + t.j + 1] * &vp[n - t.m]));
            }
            let pre = sa / PI.sqrt() * gamma(n as f64 + 1.0) / gamma(n as f64 + 1.5);
            let upow = u.powf(2.0 * n as f64 + 2.0)?;
            Ok((&upow * &num.total().checked_div(&den)?).scale(pre))
        }
        WalkKind::Overshoot => {
            let mut num = Signed::new(order);
            for t in &el.single {
                let e = t.m + t.j + 1;
                let w = t.weight / ((t.m + t.j) as f64 + alpha + 1.0);
                let vpow = &vp[n - t.m];
                num.add(w * sign(t.m) * (-ch * sa + sh * ca), &(&b[e] * vpow));
                num.add(w * sign(t.j) * sh, &(&a[e] * vpow));
            }
            let pre = ctx.c_over * gamma(n as f64 + 1.0) / (gamma(n as f64 + 1.5) * PI.sqrt());
            let upow = u.powf(2.0 * n as f64 + 2.0 + alpha)?;
            Ok((&upow * &num.total().checked_div(&den)?).scale(pre))
        }
    }
}

/// `Phi_1(x)` by the elementary sums, `x > 0`, `xc = 1 - x`.
pub fn phi1_elementary(ctx: &Ctx, el: &Elementary, x: f64, xc: f64) -> Result<f64> {
    let s0 = x * x;
    let sc0 = xc * (1.0 + x);
    Ok(phi1_elementary_jet(ctx, el, s0, sc0, s0.min(sc0.abs()), 0)?.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::hyper::{phi1_jet, phi1_value};
    use crate::params::make_params;

    #[test]
    fn agrees_with_hypergeometric_route() {
        for kind in WalkKind::ALL {
            for d in [3, 5, 7] {
                for &alpha in &[0.3, 0.6, 0.9] {
                    let p = make_params(kind, alpha, d).unwrap();
                    let ctx = Ctx::new(&p);
                    let el = Elementary::new(&ctx).unwrap();
                    let mut xs = vec![0.02, 0.2, 0.5, 0.9, 0.99];
                    if kind == WalkKind::Overshoot {
                        xs.extend([1.01, 1.5, 7.0, 40.0]);
                    }
                    for x in xs {
                        let e = phi1_elementary(&ctx, &el, x, 1.0 - x).unwrap();
                        let h = phi1_value(&ctx, x, 1.0 - x).unwrap();
                        assert!((e - h).abs() <= 1e-9 * (1.0 + h.abs()), "{kind} d={d} a={alpha} x={x}: {e} vs {h}");
                    }
                }
            }
        }
    }

    #[test]
    fn jets_agree_too() {
        let p = make_params(WalkKind::Standard, 0.6, 5).unwrap();
        let ctx = Ctx::new(&p);
        let el = Elementary::new(&ctx).unwrap();
        let (s0, lam) = (0.49, 0.3);
        let e = phi1_elementary_jet(&ctx, &el, s0, 1.0 - s0, lam, 3).unwrap();
        let h = phi1_jet(&ctx, s0, 1.0 - s0, lam, 3).unwrap();
        for k in 0..=3 {
            let (a, b) = (e.coeffs()[k], h.coeffs()[k]);
            assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn even_dimension_is_refused() {
        let p = make_params(WalkKind::Standard, 0.6, 4).unwrap();
        assert!(matches!(Elementary::new(&Ctx::new(&p)), Err(Error::RouteParity { .. })));
    }
}
