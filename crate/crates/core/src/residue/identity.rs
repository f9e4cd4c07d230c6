//! The log-sum identity that `πi·Σ residues` assembles into, and its
//! exponentiated form.

use std::f64::consts::PI;

use super::closed::{residue_zero_closed, residues_right_closed, residues_upper_closed};
use super::VerifierParams;
use crate::dedekind::dedekind_sum_fast;
use crate::error::Result;
use crate::lambert::{log_row, partial_row, RowPolicy};
use crate::modular::{ModularMatrix, TauPoint};
use crate::reducer::TINY;
use crate::theta::{theta1_series, ThetaPoint, TruncationControl};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// One row `Σₙ aⁿ/(n(1 − bⁿ))` per `(a, b)`, with the sign it enters with.
fn rows(p: &VerifierParams) -> Vec<(f64, Complex, Complex)> {
    let (kf, v, z) = (p.k() as f64, p.v(), p.z());
    let big_h = p.big_h() as f64;
    let h = p.h() as f64;
    let b_right = Complex::new((-2.0 * PI / v).exp(), 0.0);
    let b_upper = Complex::new((-2.0 * PI * v).exp(), 0.0);
    let mut out = Vec::with_capacity(6 * p.k() as usize);
    for j in 1..=p.k() {
        let w = j as f64;
        let right = |w: f64| (2.0 * PI * I * big_h * w / kf - 2.0 * PI * w / (kf * v)).exp();
        out.push((1.0, right(w), b_right));
        out.push((1.0, (2.0 * PI * z / v).exp() * right(w), b_right));
        out.push((1.0, (-2.0 * PI * z / v).exp() * right(w - 1.0), b_right));

        let mu = w;
        let upper = |mu: f64| (2.0 * PI * I * h * mu / kf - 2.0 * PI * v * mu / kf).exp();
        out.push((-1.0, upper(mu), b_upper));
        out.push((-1.0, (2.0 * PI * I * z).exp() * upper(mu), b_upper));
        out.push((-1.0, (-2.0 * PI * I * z).exp() * upper(mu - 1.0), b_upper));
    }
    out
}

/// The terms of the identity outside the row sums.
fn closed_terms(p: &VerifierParams) -> Result<Complex> {
    let (kf, v, z) = (p.k() as f64, p.v(), p.z());
    let s = dedekind_sum_fast(p.h(), p.k())?.to_f64();
    Ok(
        -I * PI / 2.0 + 3.0 * PI * I * s - PI / (4.0 * kf) * (v - 1.0 / v)
            + PI * z * z * kf / v
            + PI * I * z
            - PI * z / v,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: Complex,
    /// `−(1/2)·log v`.
    pub rhs: Complex,
    pub residual: f64,
    /// `|e^{lhs − rhs} − 1|`, blind to multiples of `2πi`.
    pub exp_residual: f64,
}

/// Both sides of the log-sum identity with every convergent row truncated at
/// `sum_cap` terms. Rows whose `n`-series diverges are summed in product form.
pub fn check_log_sum_identity(p: &VerifierParams, sum_cap: usize) -> Result<IdentityCheck> {
    let mut lhs = closed_terms(p)?;
    for (sign, a, b) in rows(p) {
        lhs += sign * log_row(a, b, RowPolicy::Capped(sum_cap))?.0;
    }
    let rhs = Complex::new(-0.5 * p.v().ln(), 0.0);
    Ok(IdentityCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        exp_residual: ((lhs - rhs).exp() - 1.0).norm(),
    })
}

/// `πi·Σ` closed-form residues inside the contour against the identity's
/// left side with every row cut at `n = m`. These agree exactly at each `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteAssembly {
    pub residue_side: Complex,
    pub sum_side: Complex,
    pub residual: f64,
}

pub fn finite_m_assembly(p: &VerifierParams) -> Result<FiniteAssembly> {
    let mut residues = residue_zero_closed(p)?.corrected;
    let m = p.m() as i64;
    for n in (-m..=m).filter(|&n| n != 0) {
        residues += residues_upper_closed(p, n)? + residues_right_closed(p, n)?;
    }
    let residue_side = PI * I * residues;
    let mut sum_side = closed_terms(p)?;
    for (sign, a, b) in rows(p) {
        sum_side += sign * partial_row(a, b, p.m() as usize);
    }
    Ok(FiniteAssembly {
        residue_side,
        sum_side,
        residual: (residue_side - sum_side).norm(),
    })
}

/// `A = (H, b; k, −h)` and `τ = (iv + h)/k`, the point where the identity
/// is the transformation law.
pub fn theorem_matrix(p: &VerifierParams) -> Result<(ModularMatrix, TauPoint)> {
    let (big_h, h, k) = (p.big_h(), p.h(), p.k());
    let b = (-(big_h as i128) * h as i128 - 1) / k as i128;
    let b = i64::try_from(b).map_err(|_| crate::error::Error::Overflow("theorem matrix"))?;
    let m = ModularMatrix::new(big_h, b, k, -h)?;
    let tau = TauPoint::new(Complex::new(h as f64, p.v()) / k as f64)?;
    Ok((m, tau))
}

/// Relative residual of
/// `θ₁(z/(iv), (H + i/v)/k) = e^{−πi/2 + πi(H−h)/(4k) + 3πis(h,k) + πkz²/v}·√v·θ₁(z, (iv + h)/k)`.
pub fn check_log_transformation(p: &VerifierParams, ctl: TruncationControl) -> Result<f64> {
    let (kf, v, z) = (p.k() as f64, p.v(), p.z());
    let (_, tau) = theorem_matrix(p)?;
    let tau_image = TauPoint::new(Complex::new(p.big_h() as f64, 1.0 / v) / kf)?;
    let s = dedekind_sum_fast(p.h(), p.k())?.to_f64();
    let log_factor = -I * PI / 2.0
        + PI * I * (p.big_h() - p.h()) as f64 / (4.0 * kf)
        + 3.0 * PI * I * s
        + 0.5 * v.ln()
        + PI * kf * z * z / v;
    let lhs = theta1_series(ThetaPoint::new(z / Complex::new(0.0, v), tau_image), ctl)?;
    let rhs = log_factor.exp() * theta1_series(ThetaPoint::new(z, tau), ctl)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(TINY))
}
