//! Direct evaluation of θ₁, the triple product, η and log θ₁.
//!
//! Throughout, `θ₁(z, τ) = −i Σ_{n∈ℤ} (−1)ⁿ e^{πiτ(n+½)²} e^{(2n+1)πiz}`, i.e. the
//! nome is `e^{πiτ}`. This is the normalisation under which `θ₁(z, τ+1) =
//! e^{πi/4} θ₁(z, τ)` and the modular transformation law hold with
//! `ε₁ = −iε³`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lambert::{log_row, RowPolicy};
use crate::modular::{principal_log, TauPoint, TheoremParams};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// Truncation policy shared by every series and product in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationControl {
    tolerance: f64,
    max_terms: usize,
}

impl TruncationControl {
    pub const MIN_TOLERANCE: f64 = 1e-16;
    pub const MAX_TERMS: usize = 1_000_000;

    pub fn new(tolerance: f64, max_terms: usize) -> Result<Self> {
        if !(tolerance >= Self::MIN_TOLERANCE) || !tolerance.is_finite() {
            return Err(Error::Domain(format!(
                "tolerance {tolerance:e} must be finite and at least {:e}",
                Self::MIN_TOLERANCE
            )));
        }
        if max_terms == 0 || max_terms > Self::MAX_TERMS {
            return Err(Error::Domain(format!(
                "max_terms {max_terms} must be in 1..={}",
                Self::MAX_TERMS
            )));
        }
        Ok(Self {
            tolerance,
            max_terms,
        })
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    fn exhausted(&self, im_tau: f64) -> Error {
        Error::Truncation {
            max_terms: self.max_terms,
            tolerance: self.tolerance,
            im_tau,
        }
    }
}

impl Default for TruncationControl {
    fn default() -> Self {
        Self {
            tolerance: 1e-16,
            max_terms: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    pub z: Complex,
    pub tau: TauPoint,
}

impl ThetaPoint {
    pub fn new(z: Complex, tau: TauPoint) -> Self {
        Self { z, tau }
    }

    pub fn from_parts(z: Complex, tau: Complex) -> Result<Self> {
        Ok(Self::new(z, TauPoint::new(tau)?))
    }
}

/// A truncated evaluation with its term count and certified tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: Complex,
    /// Number of series indices `n` (or product factors) used.
    pub terms: usize,
    pub error_bound: f64,
}

/// `e^{πik/4}`, exact on the axes.
fn eighth_root(k: i64) -> Complex {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match k.rem_euclid(8) {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(s, s),
        2 => Complex::new(0.0, 1.0),
        3 => Complex::new(-s, s),
        4 => Complex::new(-1.0, 0.0),
        5 => Complex::new(-s, -s),
        6 => Complex::new(0.0, -1.0),
        _ => Complex::new(s, -s),
    }
}

/// Splits off the nearest integers of `Re τ` and `Re z`.
///
/// Returns `(z_r, τ_r, factor)` with `θ₁(z, τ) = factor·θ₁(z_r, τ_r)`: the
/// τ-shift contributes `e^{πis/4}` and the z-shift `(−1)^j`.
fn normalise(z: Complex, tau: Complex) -> (Complex, Complex, Complex) {
    let s = tau.re.round();
    let j = z.re.round();
    let tau_r = Complex::new(tau.re - s, tau.im);
    let z_r = Complex::new(z.re - j, z.im);
    let mut factor = eighth_root((s.rem_euclid(8.0)) as i64);
    if j.rem_euclid(2.0) != 0.0 {
        factor = -factor;
    }
    (z_r, tau_r, factor)
}

/// The defining series, summed in `(n, −n−1)` pairs.
pub fn theta1_series(p: ThetaPoint, ctl: TruncationControl) -> Result<Complex> {
    theta1_series_eval(p, ctl).map(|e| e.value)
}

pub fn theta1_series_eval(p: ThetaPoint, ctl: TruncationControl) -> Result<SeriesEval> {
    let im_tau = p.tau.im();
    let (z, tau, factor) = normalise(p.z, p.tau.value());
    let y = z.im.abs();
    let peak = y / im_tau;
    // Modulus of either member of pair n.
    let bound = |n: usize| {
        let t = n as f64 + 0.5;
        (-PI * im_tau * t * t + 2.0 * PI * t * y).exp()
    };
    let mut sum = Complex::new(0.0, 0.0);
    let mut n = 0usize;
    loop {
        let t = n as f64 + 0.5;
        let m = bound(n);
        if t > peak && 2.0 * m < ctl.tolerance {
            let ratio = bound(n + 1) / m;
            let error_bound = if ratio < 1.0 {
                2.0 * m / (1.0 - ratio)
            } else {
                2.0 * m
            };
            return Ok(SeriesEval {
                value: -I * factor * sum,
                terms: 2 * n,
                error_bound,
            });
        }
        if 2 * (n + 1) > ctl.max_terms {
            return Err(ctl.exhausted(im_tau));
        }
        let base = I * PI * tau * (t * t);
        let arg = I * PI * z * (2.0 * t);
        let pair = (base + arg).exp() - (base - arg).exp();
        if n % 2 == 0 {
            sum += pair;
        } else {
            sum -= pair;
        }
        n += 1;
    }
}

/// Product form `−i·w·e^{πiτ/4}·∏ (1 − Q²ⁿ)(1 − w²Q²ⁿ)(1 − w⁻²Q²ⁿ⁻²)` with
/// `w = e^{πiz}`, `Q = e^{πiτ}`.
pub fn theta1_product(p: ThetaPoint, ctl: TruncationControl) -> Result<Complex> {
    theta1_product_eval(p, ctl).map(|e| e.value)
}

pub fn theta1_product_eval(p: ThetaPoint, ctl: TruncationControl) -> Result<SeriesEval> {
    let im_tau = p.tau.im();
    let (z, tau, factor) = normalise(p.z, p.tau.value());
    let w = (I * PI * z).exp();
    let w2 = w * w;
    let w2_inv = (-2.0 * I * PI * z).exp();
    let r = (-2.0 * PI * im_tau).exp();
    let (rw, rwi) = (w2.norm(), w2_inv.norm());
    let one = Complex::new(1.0, 0.0);
    let mut prod = one;
    let mut n = 1usize;
    loop {
        // Σ over all omitted factor deviations, from index n on.
        let rn = r.powi(n as i32 - 1);
        let tail = rn * (r * (1.0 + rw) + rwi) / (1.0 - r);
        if tail < 0.5 && tail * prod.norm() * 2.0 < ctl.tolerance {
            let value = -I * factor * w * (I * PI * tau / 4.0).exp() * prod;
            let error_bound = value.norm() * (tail.exp_m1() * 2.0) + f64::EPSILON * value.norm();
            return Ok(SeriesEval {
                value,
                terms: n - 1,
                error_bound,
            });
        }
        if n > ctl.max_terms {
            return Err(ctl.exhausted(im_tau));
        }
        let q2n = (2.0 * PI * I * tau * n as f64).exp();
        let q2n_2 = (2.0 * PI * I * tau * (n - 1) as f64).exp();
        prod *= (one - q2n) * (one - w2 * q2n) * (one - w2_inv * q2n_2);
        if prod == Complex::new(0.0, 0.0) {
            return Ok(SeriesEval {
                value: prod,
                terms: n,
                error_bound: 0.0,
            });
        }
        n += 1;
    }
}

/// Both sides of the triple product identity `(Σ w²ⁿ qⁿ², ∏ (1 − q²ᵐ)(1 + w²q²ᵐ⁻¹)(1 + w⁻²q²ᵐ⁻¹))`, with `q`
/// taken as given.
pub fn jacobi_triple_product_check(
    w: Complex,
    q: Complex,
    ctl: TruncationControl,
) -> Result<(Complex, Complex)> {
    let rq = q.norm();
    if !(rq < 1.0) {
        return Err(Error::Domain(format!("|q| = {rq} must be < 1")));
    }
    if w.norm() == 0.0 || !w.is_finite() {
        return Err(Error::Domain("w must be finite and nonzero".into()));
    }
    let one = Complex::new(1.0, 0.0);
    if rq == 0.0 {
        return Ok((one, one));
    }
    let w2 = w * w;
    let w2_inv = w2.inv();
    let lw = w2.norm().ln().abs();
    let lq = rq.ln();

    let mut lhs = one;
    let mut n: i32 = 1;
    loop {
        // max(|w|^{2n}, |w|^{-2n})·|q|^{n²}
        let mag = (n as f64 * lw + (n as f64).powi(2) * lq).exp();
        if (n as f64) * (-2.0 * lq) > lw && mag < ctl.tolerance {
            break;
        }
        if 2 * n as usize > ctl.max_terms {
            return Err(ctl.exhausted(f64::NAN));
        }
        let qn = q.powi(n * n);
        lhs += (w2.powi(n) + w2_inv.powi(n)) * qn;
        n += 1;
    }

    let mut rhs = one;
    let mut m: i32 = 1;
    loop {
        let mag = rq.powi(2 * m - 1) * (1.0 + w2.norm().max(w2_inv.norm()));
        if mag < 0.5 && 2.0 * mag / (1.0 - rq * rq) * rhs.norm() < ctl.tolerance {
            break;
        }
        if m as usize > ctl.max_terms {
            return Err(ctl.exhausted(f64::NAN));
        }
        let q_odd = q.powi(2 * m - 1);
        rhs *= (one - q_odd * q) * (one + w2 * q_odd) * (one + w2_inv * q_odd);
        m += 1;
    }
    Ok((lhs, rhs))
}

/// `η(τ) = e^{πiτ/12} ∏ (1 − e^{2πinτ})`.
pub fn eta(tau: TauPoint, ctl: TruncationControl) -> Result<Complex> {
    eta_eval(tau, ctl).map(|e| e.value)
}

pub fn eta_eval(tau: TauPoint, ctl: TruncationControl) -> Result<SeriesEval> {
    let im = tau.im();
    let s = tau.re().round();
    let tau_r = Complex::new(tau.re() - s, im);
    // e^{πis/12} with s reduced mod 24.
    let lead =
        Complex::from_polar(1.0, PI * s.rem_euclid(24.0) / 12.0) * (I * PI * tau_r / 12.0).exp();
    let r = (-2.0 * PI * im).exp();
    let one = Complex::new(1.0, 0.0);
    let mut prod = one;
    let mut n = 1usize;
    loop {
        let tail = r.powi(n as i32) / (1.0 - r);
        if n > 1 && tail < 0.5 && 2.0 * tail * prod.norm() < ctl.tolerance {
            let value = lead * prod;
            return Ok(SeriesEval {
                value,
                terms: n - 1,
                error_bound: 2.0 * tail * value.norm(),
            });
        }
        if n > ctl.max_terms {
            return Err(ctl.exhausted(im));
        }
        prod *= one - (2.0 * PI * I * tau_r * n as f64).exp();
        n += 1;
    }
}

/// Distance from `z` to the nearest lattice point `m + nτ`.
pub fn zero_lattice_distance(z: Complex, tau: TauPoint) -> f64 {
    let t = tau.value();
    let n0 = (z.im / t.im).round() as i64;
    let mut best = f64::INFINITY;
    for n in n0 - 2..=n0 + 2 {
        let shifted = z - t * n as f64;
        let m0 = shifted.re.round() as i64;
        for m in m0 - 1..=m0 + 1 {
            best = best.min((shifted - m as f64).norm());
        }
    }
    best
}

pub const ZERO_LATTICE_GUARD: f64 = 1e-8;

/// `log θ₁` as a sum over the product factors, each logarithm on the
/// principal branch.
pub fn log_theta1(p: ThetaPoint, ctl: TruncationControl) -> Result<Complex> {
    let dist = zero_lattice_distance(p.z, p.tau);
    if dist < ZERO_LATTICE_GUARD {
        return Err(Error::Domain(format!(
            "z is {dist:e} from a zero of theta_1; log is undefined"
        )));
    }
    let (z, tau) = (p.z, p.tau.value());
    let e2z = (2.0 * PI * I * z).exp();
    let e2z_inv = (-2.0 * PI * I * z).exp();
    let r = (-2.0 * PI * tau.im).exp();
    let one = Complex::new(1.0, 0.0);
    let log1m = |x: Complex| principal_log(one - x);
    let mut sum = Complex::new(0.0, 0.0);
    let mut n = 1usize;
    loop {
        // Largest argument among the omitted logs, from index n on.
        let lead = r.powi(n as i32 - 1) * (r * (1.0 + e2z.norm()) + e2z_inv.norm());
        if lead < 0.5 && 2.0 * lead / (1.0 - r) < ctl.tolerance {
            break;
        }
        if n > ctl.max_terms {
            return Err(ctl.exhausted(tau.im));
        }
        let q2n = (2.0 * PI * I * tau * n as f64).exp();
        let q2n_2 = (2.0 * PI * I * tau * (n - 1) as f64).exp();
        sum += log1m(q2n)? + log1m(e2z * q2n)? + log1m(e2z_inv * q2n_2)?;
        n += 1;
    }
    Ok(sum - I * PI / 2.0 + I * PI * z + I * PI * tau / 4.0)
}

/// log θ₁(z, (iv + h)/k) as three double sums in `(μ, n)` plus the
/// closed terms. Each `μ`-row is summed in `n` to `ctl.tolerance`; rows whose
/// `n`-series diverges are evaluated in their product form instead.
pub fn log_theta1_triple_sum(
    params: &TheoremParams,
    z: Complex,
    ctl: TruncationControl,
) -> Result<Complex> {
    let (h, k, v) = (params.h() as f64, params.k(), params.v());
    if !(v.re > 0.0) {
        return Err(Error::Domain(format!("Re v = {} must be positive", v.re)));
    }
    let kf = k as f64;
    let policy = RowPolicy::Tolerance {
        tolerance: ctl.tolerance,
        max_terms: ctl.max_terms,
    };
    let b = (-2.0 * PI * v).exp();
    let e2z = (2.0 * PI * I * z).exp();
    let e2z_inv = (-2.0 * PI * I * z).exp();
    let row_base = |mu: f64| (2.0 * PI * I * h * mu / kf - 2.0 * PI * v * mu / kf).exp();
    let mut sum = Complex::new(0.0, 0.0);
    for mu in 1..=k {
        let mu = mu as f64;
        let a1 = row_base(mu);
        sum -= log_row(a1, b, policy)?.0;
        sum -= log_row(e2z * a1, b, policy)?.0;
        sum -= log_row(e2z_inv * row_base(mu - 1.0), b, policy)?.0;
    }
    Ok(sum - I * PI / 2.0 + I * PI * z + I * PI * (I * v + h) / (4.0 * kf))
}

/// Distance from `x` to the nearest multiple of `2πi`.
pub fn distance_mod_2pi_i(x: Complex) -> f64 {
    let turns = (x.im / (2.0 * PI)).round();
    Complex::new(x.re, x.im - 2.0 * PI * turns).norm()
}
