//! Rows `Σ_{n≥1} aⁿ / (n(1 − bⁿ))` of the logarithmic triple sums.
//!
//! When `|a| < 1` the row is summed directly in `n`. Expanding
//! `1/(1 − bⁿ)` and summing in `n` first gives the equivalent product form
//! `−Σ_{q≥0} Log(1 − a·b^q)`, which converges whenever `|a·b| < 1` and is used
//! for rows whose `n`-series diverges. The two forms agree modulo `2πi`.

use crate::error::{Error, Result};
use crate::modular::principal_log;
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowForm {
    /// Summed in `n`; holds the number of terms.
    Direct(usize),
    /// Summed as a product of logarithms; holds the number of factors.
    Resummed(usize),
}

impl RowForm {
    pub fn terms(&self) -> usize {
        match *self {
            RowForm::Direct(n) | RowForm::Resummed(n) => n,
        }
    }
}

/// How many `n`-terms to take and when to switch forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowPolicy {
    /// Sum exactly `cap` terms when `|a| < 1`; resum otherwise.
    Capped(usize),
    /// Pick whichever form reaches `tolerance` with fewer terms, up to `max_terms`.
    Tolerance { tolerance: f64, max_terms: usize },
}

const RESUM_TOLERANCE: f64 = 1e-18;

pub fn log_row(a: Complex, b: Complex, policy: RowPolicy) -> Result<(Complex, RowForm)> {
    let (ra, rb) = (a.norm(), b.norm());
    if rb >= 1.0 {
        return Err(Error::Domain(format!(
            "|b| = {rb} >= 1 in a logarithmic row"
        )));
    }
    match policy {
        RowPolicy::Capped(cap) => {
            if ra < 1.0 {
                Ok((direct(a, b, cap, 0.0), RowForm::Direct(cap)))
            } else {
                resummed(a, b, RESUM_TOLERANCE, usize::MAX)
            }
        }
        RowPolicy::Tolerance {
            tolerance,
            max_terms,
        } => {
            let direct_cost = if ra < 1.0 {
                (tolerance.ln() / ra.ln()).ceil().max(1.0)
            } else {
                f64::INFINITY
            };
            let resum_cost = if ra * rb < 1.0 {
                let first = if ra > 0.0 { (tolerance / ra).ln() } else { 0.0 };
                (first / rb.ln()).ceil().max(1.0)
            } else {
                f64::INFINITY
            };
            if direct_cost.is_infinite() && resum_cost.is_infinite() {
                return Err(Error::Domain(format!(
                    "row diverges: |a| = {ra}, |a·b| = {}",
                    ra * rb
                )));
            }
            if direct_cost.min(resum_cost) > max_terms as f64 {
                return Err(Error::Truncation {
                    max_terms,
                    tolerance,
                    im_tau: f64::NAN,
                });
            }
            if direct_cost <= resum_cost {
                let n = direct_cost as usize;
                Ok((direct(a, b, n, tolerance), RowForm::Direct(n)))
            } else {
                resummed(a, b, tolerance, max_terms)
            }
        }
    }
}

/// The first `n` terms of the row, whatever `|a|`.
pub fn partial_row(a: Complex, b: Complex, n: usize) -> Complex {
    direct(a, b, n, 0.0)
}

fn direct(a: Complex, b: Complex, cap: usize, tolerance: f64) -> Complex {
    let mut sum = Complex::new(0.0, 0.0);
    let mut an = Complex::new(1.0, 0.0);
    let mut bn = Complex::new(1.0, 0.0);
    for n in 1..=cap {
        an *= a;
        bn *= b;
        let term = an / ((1.0 - bn) * n as f64);
        sum += term;
        if term.norm() < tolerance {
            break;
        }
    }
    sum
}

fn resummed(
    a: Complex,
    b: Complex,
    tolerance: f64,
    max_terms: usize,
) -> Result<(Complex, RowForm)> {
    if (a * b).norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "row diverges: |a| = {}, |a·b| = {}",
            a.norm(),
            (a * b).norm()
        )));
    }
    let tail_factor = 1.0 / (1.0 - b.norm());
    let mut sum = Complex::new(0.0, 0.0);
    let mut x = a;
    let mut count = 0;
    loop {
        let one_minus = Complex::new(1.0, 0.0) - x;
        sum -= principal_log(one_minus)
            .map_err(|_| Error::Domain("row hits a zero of 1 − a·b^q".into()))?;
        count += 1;
        x *= b;
        // |Σ_{q' > q} Log(1 − x_q')| ≤ 2·Σ|x_q'| once |x| ≤ 1/2.
        if x.norm() <= 0.5 && 2.0 * x.norm() * tail_factor < tolerance {
            break;
        }
        if count >= max_terms {
            return Err(Error::Truncation {
                max_terms,
                tolerance,
                im_tau: f64::NAN,
            });
        }
    }
    Ok((sum, RowForm::Resummed(count)))
}
