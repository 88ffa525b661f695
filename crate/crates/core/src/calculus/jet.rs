//! Truncated Taylor series ("jets") for exact high-order derivatives.
//!
//! A jet of order `K` stores `c[k] = f^(k)(x0) / k!` for `k = 0..=K`. Every
//! operation is causal: coefficient `k` of a result depends only on
//! coefficients `0..=k` of the operands, so truncating an order-`K` result to
//! order `K-1` gives exactly the order-`K-1` computation.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field a jet can be built over.
pub trait Scalar:
    Copy
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_f64(x: f64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn scale(self, s: f64) -> Self;
    fn magnitude(self) -> f64;
    /// `self^p` on the principal branch; `None` when the base is outside the branch domain.
    fn try_powf(self, p: f64) -> Option<Self>;
    fn try_ln(self) -> Option<Self>;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn try_powf(self, p: f64) -> Option<Self> {
        (self > 0.0).then(|| self.powf(p))
    }
    fn try_ln(self) -> Option<Self> {
        (self > 0.0).then(|| self.ln())
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn try_powf(self, p: f64) -> Option<Self> {
        (self != Complex64::new(0.0, 0.0)).then(|| (self.ln() * p).exp())
    }
    fn try_ln(self) -> Option<Self> {
        (self != Complex64::new(0.0, 0.0)).then(|| self.ln())
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T: Scalar = f64> {
    c: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    pub fn constant(value: T, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = value;
        Jet { c }
    }

    /// The independent variable `x` expanded at `x0`.
    pub fn variable(x0: T, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order > 0 {
            j.c[1] = T::one();
        }
        j
    }

    pub fn from_coeffs(c: Vec<T>) -> Self {
        assert!(!c.is_empty(), "a jet needs at least one coefficient");
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.c
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// `k`-th derivative, `c[k] * k!`.
    pub fn derivative(&self, k: usize) -> T {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k].scale(fact)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Jet { c: self.c[..=order].to_vec() }
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(T) -> U) -> Jet<U> {
        Jet { c: self.c.iter().map(|&x| f(x)).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|x| x.scale(s))
    }

    pub fn add_scalar(&self, s: T) -> Self {
        let mut out = self.clone();
        out.c[0] = out.c[0] + s;
        out
    }

    pub fn mul_scalar(&self, s: T) -> Self {
        self.map_coeffs(|x| x * s)
    }

    /// Substitute `t -> lambda * t`, i.e. multiply coefficient `k` by `lambda^k`.
    pub fn rescale_variable(&self, lambda: f64) -> Self {
        let mut p = 1.0;
        let c = self
            .c
            .iter()
            .map(|&x| {
                let y = x.scale(p);
                p *= lambda;
                y
            })
            .collect();
        Jet { c }
    }

    fn check(&self, other: &Self) {
        debug_assert_eq!(self.c.len(), other.c.len(), "jet orders differ");
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(T::one(), self.order()).checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs);
        let d0 = rhs.c[0];
        if d0.magnitude() == 0.0 {
            return Err(Error::Branch("division by a jet with zero constant term".into()));
        }
        let k_max = self.order();
        let mut q = vec![T::zero(); k_max + 1];
        for k in 0..=k_max {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc = acc - rhs.c[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Ok(Jet { c: q })
    }

    /// `self^p` for real `p` via the recurrence `k u0 y_k = sum_j (p j - (k - j)) u_j y_{k-j}`.
    pub fn powf(&self, p: f64) -> Result<Self> {
        let u0 = self.c[0];
        let y0 = u0
            .try_powf(p)
            .ok_or_else(|| Error::Branch(format!("power {p} of non-admissible base {u0:?}")))?;
        let k_max = self.order();
        let mut y = vec![T::zero(); k_max + 1];
        y[0] = y0;
        for k in 1..=k_max {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + (self.c[j] * y[k - j]).scale(p * j as f64 - (k - j) as f64);
            }
            y[k] = acc / u0.scale(k as f64);
        }
        Ok(Jet { c: y })
    }

    pub fn powi(&self, e: i32) -> Self {
        if e < 0 {
            // integer powers of a zero constant term are legitimate only for e >= 0
            return self.recip().expect("negative power of zero jet").powi(-e);
        }
        let mut out = Self::constant(T::one(), self.order());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.powf(0.5)
    }

    pub fn exp(&self) -> Self {
        let k_max = self.order();
        let mut y = vec![T::zero(); k_max + 1];
        y[0] = self.c[0].exp();
        for k in 1..=k_max {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + (self.c[j] * y[k - j]).scale(j as f64);
            }
            y[k] = acc.scale(1.0 / k as f64);
        }
        Jet { c: y }
    }

    pub fn ln(&self) -> Result<Self> {
        let u0 = self.c[0];
        let y0 = u0
            .try_ln()
            .ok_or_else(|| Error::Branch(format!("logarithm of non-admissible base {u0:?}")))?;
        let k_max = self.order();
        let mut y = vec![T::zero(); k_max + 1];
        y[0] = y0;
        for k in 1..=k_max {
            let mut acc = self.c[k].scale(k as f64);
            for j in 1..k {
                acc = acc - (y[j] * self.c[k - j]).scale(j as f64);
            }
            y[k] = acc / u0.scale(k as f64);
        }
        Ok(Jet { c: y })
    }

    /// Returns `(sin u, cos u)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let k_max = self.order();
        let mut s = vec![T::zero(); k_max + 1];
        let mut c = vec![T::zero(); k_max + 1];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..=k_max {
            let mut as_ = T::zero();
            let mut ac = T::zero();
            for j in 1..=k {
                let w = self.c[j].scale(j as f64);
                as_ = as_ + w * c[k - j];
                ac = ac - w * s[k - j];
            }
            s[k] = as_.scale(1.0 / k as f64);
            c[k] = ac.scale(1.0 / k as f64);
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// Evaluate the power series `sum_k f[k] * self'^k` where `self'` is `self`
    /// with its constant term removed. `f[k]` are Taylor coefficients of the
    /// outer function at `self.value()`.
    pub fn compose(&self, f: &[T]) -> Self {
        let order = self.order();
        let mut delta = self.clone();
        delta.c[0] = T::zero();
        let mut acc = Self::constant(T::zero(), order);
        let top = f.len().min(order + 1);
        for k in (0..top).rev() {
            acc = &acc * &delta;
            acc.c[0] = acc.c[0] + f[k];
        }
        acc
    }
}

impl Jet<Complex64> {
    pub fn re(&self) -> Jet<f64> {
        self.map_coeffs(|z| z.re)
    }

    pub fn im(&self) -> Jet<f64> {
        self.map_coeffs(|z| z.im)
    }
}

impl Jet<f64> {
    pub fn to_complex(&self) -> Jet<Complex64> {
        self.map_coeffs(|x| Complex64::new(x, 0.0))
    }
}

impl<T: Scalar> Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: &Jet<T>) -> Jet<T> {
        self.check(rhs);
        Jet { c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| a + b).collect() }
    }
}

impl<T: Scalar> Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: &Jet<T>) -> Jet<T> {
        self.check(rhs);
        Jet { c: self.c.iter().zip(&rhs.c).map(|(&a, &b)| a - b).collect() }
    }
}

impl<T: Scalar> Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: &Jet<T>) -> Jet<T> {
        self.check(rhs);
        let k_max = self.order();
        let mut c = vec![T::zero(); k_max + 1];
        for k in 0..=k_max {
            let mut acc = T::zero();
            for j in 0..=k {
                acc = acc + self.c[j] * rhs.c[k - j];
            }
            c[k] = acc;
        }
        Jet { c }
    }
}

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.map_coeffs(|x| -x)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: &Jet<T>) -> Jet<T> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        -&self
    }
}

/// Expand `f` at `x0` to order `order`.
pub fn jet_eval<F>(f: F, x0: f64, order: usize) -> Result<Jet<f64>>
where
    F: Fn(&Jet<f64>) -> Result<Jet<f64>>,
{
    f(&Jet::variable(x0, order))
}

/// `f^(n)(x)` by jet expansion.
pub fn nth_derivative<F>(f: F, x: f64, n: usize) -> Result<f64>
where
    F: Fn(&Jet<f64>) -> Result<Jet<f64>>,
{
    Ok(jet_eval(f, x, n)?.derivative(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn polynomial() {
        let j = jet_eval(|x| Ok(x * x), 3.0, 2).unwrap();
        assert_eq!(j.coeffs(), &[9.0, 6.0, 1.0]);
        let d = nth_derivative(|x| Ok(&(x * x) * x), 1.7, 3).unwrap();
        assert_eq!(d, 6.0);
    }

    #[test]
    fn zeroth_derivative_is_the_value() {
        let f = |x: &Jet| x.add_scalar(1.0).powf(2.2);
        let v = nth_derivative(f, 0.3, 0).unwrap();
        assert_eq!(v, 1.3f64.powf(2.2));
    }

    #[test]
    fn power_rule() {
        let d = nth_derivative(|x| x.add_scalar(1.0).powf(2.2), 0.3, 2).unwrap();
        let expect = 2.2 * 1.2 * 1.3f64.powf(0.2);
        assert!(close(d, expect, 1e-14), "{d} vs {expect}");
    }

    #[test]
    fn power_of_one_minus_x_matches_finite_differences() {
        // Richardson-extrapolated central differences as the oracle
        let a = 0.6;
        let f = |x: f64| (1.0 - x).powf(a);
        let x0 = 0.5;
        let j = jet_eval(|x| (-x).add_scalar(1.0).powf(a), x0, 3).unwrap();
        let fd = |h: f64, k: usize| -> f64 {
            match k {
                1 => (f(x0 + h) - f(x0 - h)) / (2.0 * h),
                2 => (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h),
                3 => (f(x0 + 2.0 * h) - 2.0 * f(x0 + h) + 2.0 * f(x0 - h) - f(x0 - 2.0 * h))
                    / (2.0 * h * h * h),
                _ => unreachable!(),
            }
        };
        // the third difference at h = 1e-3 carries ~1e-7 of roundoff, so start
        // coarser and take two Richardson levels
        for k in 1..=3 {
            let h = if k < 3 { 1e-3 } else { 1e-2 };
            let r1 = (4.0 * fd(h / 2.0, k) - fd(h, k)) / 3.0;
            let r2 = (4.0 * fd(h / 4.0, k) - fd(h / 2.0, k)) / 3.0;
            let rich = (16.0 * r2 - r1) / 15.0;
            assert!(close(j.derivative(k), rich, 1e-7), "k={k}: {} vs {rich}", j.derivative(k));
        }
    }

    #[test]
    fn quotient_of_cubics_matches_hand_derivatives() {
        // f = (x^3 + 2x) / (x^3 + 1) at x = 1:
        // f = 3/2, f' = ((3x^2+2)(x^3+1) - (x^3+2x) 3x^2)/(x^3+1)^2 = (10 - 9)/4 = 1/4
        // f'' computed by hand from the quotient rule: with N = x^3+2x, D = x^3+1,
        // f'' = (N''D - ND'')/D^2 - 2 D'(N'D - ND')/D^3 = (6*2 - 3*6)/4 - 2*3*(1)/8 = -1.5 - 0.75
        let f = |x: &Jet| {
            let x3 = &(x * x) * x;
            let num = &x3 + &x.scale(2.0);
            let den = x3.add_scalar(1.0);
            num.checked_div(&den)
        };
        let j = jet_eval(f, 1.0, 4).unwrap();
        assert!(close(j.derivative(0), 1.5, 1e-15));
        assert!(close(j.derivative(1), 0.25, 1e-14));
        assert!(close(j.derivative(2), -2.25, 1e-14));
        // f(x) = 1 + (2x - 1)/(x^3 + 1); series check of higher orders against
        // the Taylor expansion of 1/(1 + x^3) composed by hand at x0 = 0
        let g = jet_eval(f, 0.0, 4).unwrap();
        // (x^3+2x)(1 - x^3 + ...) = 2x + x^3 - 2x^4 + ...
        assert_eq!(g.coeffs(), &[0.0, 2.0, 0.0, 1.0, -2.0]);
    }

    #[test]
    fn elementary_functions() {
        let x0 = 0.7;
        let j = Jet::variable(x0, 5);
        let e = j.exp();
        let l = j.ln().unwrap();
        let (s, c) = j.sin_cos();
        let mut fact = 1.0;
        for k in 0..=5 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!(close(e.coeffs()[k], x0.exp() / fact, 1e-14));
            let dk_sin = [x0.sin(), x0.cos(), -x0.sin(), -x0.cos()][k % 4];
            let dk_cos = [x0.cos(), -x0.sin(), -x0.cos(), x0.sin()][k % 4];
            assert!((s.coeffs()[k] - dk_sin / fact).abs() < 1e-15);
            assert!((c.coeffs()[k] - dk_cos / fact).abs() < 1e-15);
        }
        // d^k ln x = (-1)^{k-1} (k-1)! / x^k, so c_k = (-1)^{k-1} / (k x^k)
        for k in 1..=5 {
            let expect = (-1f64).powi(k as i32 - 1) / (k as f64 * x0.powi(k as i32));
            assert!(close(l.coeffs()[k], expect, 1e-13));
        }
    }

    #[test]
    fn branch_errors() {
        let j = Jet::variable(-0.5, 3);
        assert!(matches!(j.powf(0.3), Err(Error::Branch(_))));
        assert!(matches!(j.ln(), Err(Error::Branch(_))));
        // complex jets accept negative bases on the principal branch
        let z = j.to_complex();
        assert!(z.powf(0.3).is_ok());
    }

    #[test]
    fn truncation_is_bitwise_consistent() {
        let f = |x: &Jet| -> Result<Jet> {
            let a = x.add_scalar(0.4).powf(-1.3)?;
            let b = (&(x * x) + &x.sin()).exp();
            (&a * &b).checked_div(&x.add_scalar(2.0).ln()?)
        };
        let hi = jet_eval(f, 0.9, 7).unwrap();
        let lo = jet_eval(f, 0.9, 6).unwrap();
        assert_eq!(hi.truncate(6), lo);
    }

    #[test]
    fn composition_with_known_series() {
        // exp(u) with u = x^2 at x0 = 0 gives 1 + x^2 + x^4/2
        let f: Vec<f64> = (0..5).map(|k| 1.0 / (1..=k).map(|i| i as f64).product::<f64>()).collect();
        let x = Jet::variable(0.0, 4);
        let u = &x * &x;
        let c = u.compose(&f);
        assert_eq!(c.coeffs(), &[1.0, 0.0, 1.0, 0.0, 0.5]);
    }

    #[test]
    fn rescaled_variable() {
        let j = Jet::from_coeffs(vec![1.0, 1.0, 1.0]);
        assert_eq!(j.rescale_variable(2.0).coeffs(), &[1.0, 2.0, 4.0]);
    }
}
