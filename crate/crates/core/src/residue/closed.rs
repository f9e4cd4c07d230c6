//! Closed-form residues of `F_N`.

use std::f64::consts::PI;

use super::kernel::coth;
use super::quadrature::{default_radius, numeric_residue, ORACLE_POINTS};
use super::{PoleFamily, ResidueReport, VerifierParams};
use crate::dedekind::dedekind_sum_fast;
use crate::error::{Error, Result};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// `e^{L}/(1 − e^{−b})` for real `b ≠ 0` of either sign, without overflow.
fn over_one_minus(log_num: Complex, b: f64) -> Complex {
    if b >= 0.0 {
        log_num.exp() / (1.0 - (-b).exp())
    } else {
        -(log_num + b).exp() / (1.0 - b.exp())
    }
}

fn check_index(n: i64, p: &VerifierParams) -> Result<()> {
    if n == 0 || n.unsigned_abs() > p.m() as u64 {
        return Err(Error::Domain(format!(
            "pole index n = {n} must satisfy 1 ≤ |n| ≤ {}",
            p.m()
        )));
    }
    Ok(())
}

/// Residue of `F_N` at `x = in/N`, for signed `n`.
pub fn residues_upper_closed(p: &VerifierParams, n: i64) -> Result<Complex> {
    check_index(n, p)?;
    let (kf, v, z) = (p.k() as f64, p.v(), p.z());
    let nf = n as f64;
    let rho = I / (2.0 * PI * nf);
    let b = 2.0 * PI * nf * v;

    let mut total = I / (4.0 * PI * nf) * coth(Complex::new(PI * nf * v, 0.0));
    for mu in 1..p.k() {
        let w = p.residue_class(mu) as f64;
        let log_a = 2.0 * PI * I * nf * w / kf - 2.0 * PI * nf * v * mu as f64 / kf;
        total += rho * over_one_minus(log_a, b);
        total += 2.0 * rho * over_one_minus(log_a + 2.0 * PI * I * nf * z, b);
    }
    total += rho * over_one_minus(2.0 * PI * I * nf * z - b, b);
    total += rho * over_one_minus(-2.0 * PI * I * nf * z, b);
    Ok(total)
}

/// Residue of `F_N` at `x = −n/(Nv)`, for signed `n`.
///
/// The root of unity `e^{−2πinμ/k}` is written as `e^{2πinHw/k}`, which the
/// congruence `Hh ≡ −1 (mod k)` makes equal.
pub fn residues_right_closed(p: &VerifierParams, n: i64) -> Result<Complex> {
    check_index(n, p)?;
    let (kf, v, z) = (p.k() as f64, p.v(), p.z());
    let nf = n as f64;
    let sigma = 1.0 / (2.0 * PI * I * nf);
    let b = 2.0 * PI * nf / v;

    let mut total = 1.0 / (4.0 * PI * I * nf) * coth(Complex::new(PI * nf / v, 0.0));
    for mu in 1..p.k() {
        let w = p.residue_class(mu);
        let hw = (p.big_h() as i128 * w as i128).rem_euclid(p.k() as i128) as f64;
        let log_a = 2.0 * PI * I * nf * hw / kf - 2.0 * PI * nf * w as f64 / (kf * v);
        total += sigma * over_one_minus(log_a, b);
        total += 2.0 * sigma * over_one_minus(log_a - 2.0 * PI * nf * z / v, b);
    }
    total += sigma * over_one_minus(-2.0 * PI * nf * z / v, b);
    total += sigma * over_one_minus(2.0 * PI * nf * z / v - b, b);
    Ok(total)
}

/// The order-3 residue at `x = 0` in every available form.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroResidueReport {
    /// `z²k/(vi) − z/(vi) + z + (i/4k)(v − 1/v) + 3s(h,k)`, as typeset.
    pub printed: Complex,
    /// The typeset constituents added up: coth·cot, the two `A_N` families
    /// and the two exponential terms.
    pub from_parts: Complex,
    /// The typeset value with the `−1/2` of the exponential terms restored.
    pub corrected: Complex,
    pub oracle: Complex,
    /// `printed − oracle`; zero only if the typeset value is right.
    pub printed_discrepancy: Complex,
    pub from_parts_discrepancy: Complex,
    pub corrected_discrepancy: Complex,
}

pub fn residue_zero_closed(p: &VerifierParams) -> Result<ZeroResidueReport> {
    let (k, v, z) = (p.k(), p.v(), p.z());
    let kf = k as f64;
    let vi = Complex::new(0.0, v);
    let s = dedekind_sum_fast(p.h(), k)?.to_f64();

    let printed = z * z * kf / vi - z / vi + z + I / (4.0 * kf) * (v - 1.0 / v) + 3.0 * s;

    let coth_cot = I / 12.0 * (v - 1.0 / v);
    let a_family =
        (-1.0 / 12.0 + 1.0 / (12.0 * kf)) * vi + s + (-1.0 / 12.0 + 1.0 / (12.0 * kf)) / vi;
    let b_family = 2.0 * a_family + z * z / vi * (kf - 1.0);
    let exponential = z * z / vi - z / vi + z - 0.5;
    let from_parts = coth_cot + a_family + b_family + exponential;

    let corrected = printed - 0.5;
    let oracle = numeric_residue(
        Complex::new(0.0, 0.0),
        p,
        default_radius(Complex::new(0.0, 0.0), p),
        ORACLE_POINTS,
    )?;
    Ok(ZeroResidueReport {
        printed,
        from_parts,
        corrected,
        oracle,
        printed_discrepancy: printed - oracle,
        from_parts_discrepancy: from_parts - oracle,
        corrected_discrepancy: corrected - oracle,
    })
}

/// Closed form against oracle at every simple pole inside the contour.
pub fn simple_pole_reports(p: &VerifierParams) -> Result<Vec<ResidueReport>> {
    p.interior_simple_poles()
        .into_iter()
        .map(|(family, n, pole)| {
            let closed = match family {
                PoleFamily::Upper => residues_upper_closed(p, n)?,
                PoleFamily::Right => residues_right_closed(p, n)?,
            };
            let oracle = numeric_residue(pole, p, default_radius(pole, p), ORACLE_POINTS)?;
            Ok(ResidueReport::new(pole, 1, closed, oracle))
        })
        .collect()
}
