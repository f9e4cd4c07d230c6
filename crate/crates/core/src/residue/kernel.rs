//! `F_N` and `A_N`, evaluated as `e^{Σ exponents}·Π mantissas` so that the
//! large exponentials near the contour vertices never overflow separately.

use std::f64::consts::PI;

use super::{AKernel, VerifierParams};
use crate::error::{Error, Result};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);
const POLE_GUARD: f64 = 1e-12;

/// `1/(1 − e^X)` as `(exponent, mantissa)`.
fn inv_one_minus_exp(x: Complex) -> (Complex, Complex) {
    if x.re > 0.0 {
        let t = (-x).exp();
        (-x, -1.0 / (1.0 - t))
    } else {
        (Complex::new(0.0, 0.0), 1.0 / (1.0 - x.exp()))
    }
}

/// `e^X/(1 − e^X)` as `(exponent, mantissa)`.
fn exp_over_one_minus_exp(x: Complex) -> (Complex, Complex) {
    if x.re > 0.0 {
        (Complex::new(0.0, 0.0), -1.0 / (1.0 - (-x).exp()))
    } else {
        (x, 1.0 / (1.0 - x.exp()))
    }
}

pub(crate) fn coth(y: Complex) -> Complex {
    if y.re >= 0.0 {
        let t = (-2.0 * y).exp();
        (1.0 + t) / (1.0 - t)
    } else {
        let t = (2.0 * y).exp();
        (t + 1.0) / (t - 1.0)
    }
}

fn cot(y: Complex) -> Complex {
    I * coth(I * y)
}

/// Distance from `x` to the nearest pole `0`, `in/N` or `n/(Nv)`.
pub fn pole_distance(x: Complex, p: &VerifierParams) -> f64 {
    let n_big = p.big_n();
    let step_im = 1.0 / n_big;
    let step_re = 1.0 / (n_big * p.v());
    let on_im = Complex::new(0.0, (x.im / step_im).round() * step_im);
    let on_re = Complex::new((x.re / step_re).round() * step_re, 0.0);
    (x - on_im).norm().min((x - on_re).norm())
}

fn check_off_poles(x: Complex, p: &VerifierParams) -> Result<()> {
    let d = pole_distance(x, p);
    if d <= POLE_GUARD || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} is within {d:e} of a pole")));
    }
    Ok(())
}

fn a_term(x: Complex, mu: i64, p: &VerifierParams, extra_exponent: Complex) -> Complex {
    let n_big = p.big_n();
    let kf = p.k() as f64;
    let w = p.residue_class(mu) as f64;
    let (e1, m1) = inv_one_minus_exp(2.0 * PI * n_big * x);
    let g_arg = 2.0 * PI * I * n_big * p.v() * x;
    let (e2, m2) = match p.kernel() {
        AKernel::Corrected => inv_one_minus_exp(g_arg),
        AKernel::AsPrinted => inv_one_minus_exp(-g_arg),
    };
    let exponent = 2.0 * PI * n_big * w * x / kf
        + 2.0 * PI * I * n_big * mu as f64 * p.v() * x / kf
        + e1
        + e2
        + extra_exponent;
    exponent.exp() * m1 * m2 / x
}

/// `A_N(x)` for `1 ≤ μ ≤ k − 1`.
pub fn eval_a_n(x: Complex, mu: i64, p: &VerifierParams) -> Result<Complex> {
    if !(1..p.k()).contains(&mu) {
        return Err(Error::Domain(format!("mu = {mu} outside 1..{}", p.k())));
    }
    check_off_poles(x, p)?;
    Ok(a_term(x, mu, p, Complex::new(0.0, 0.0)))
}

/// `F_N(x)`: the coth·cot term, the two `A_N` families and the two
/// exponential terms.
pub fn eval_f_n(x: Complex, p: &VerifierParams) -> Result<Complex> {
    check_off_poles(x, p)?;
    let n_big = p.big_n();
    let v = p.v();
    let zx = 2.0 * PI * n_big * p.z() * x;

    let mut total = coth(PI * n_big * x) * cot(PI * n_big * v * x) / (4.0 * I * x);
    for mu in 1..p.k() {
        total += a_term(x, mu, p, Complex::new(0.0, 0.0));
        total += 2.0 * a_term(x, mu, p, zx);
    }

    let e_arg = 2.0 * PI * n_big * x;
    let g_arg = 2.0 * PI * I * n_big * v * x;
    let (e1, m1) = inv_one_minus_exp(e_arg);
    let (e3, m3) = exp_over_one_minus_exp(g_arg);
    total += (zx + e1 + e3).exp() * m1 * m3 / x;
    let (e4, m4) = exp_over_one_minus_exp(e_arg);
    let (e2, m2) = inv_one_minus_exp(g_arg);
    total += (-zx + e4 + e2).exp() * m4 * m2 / x;
    Ok(total)
}
