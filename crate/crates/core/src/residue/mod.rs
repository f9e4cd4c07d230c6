//! Numerical replay of the residue-calculus proof of the θ₁ transformation
//! law: the kernel `F_N`, its residues in closed form and by quadrature, the
//! contour integral over the rhombus with vertices `1/v, i, −1/v, −i`, and the
//! log-sum identity the residues assemble into.

mod closed;
mod identity;
mod kernel;
mod quadrature;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::Complex;

pub use closed::{
    residue_zero_closed, residues_right_closed, residues_upper_closed, simple_pole_reports,
    ZeroResidueReport,
};
pub use identity::{
    check_log_sum_identity, check_log_transformation, finite_m_assembly, theorem_matrix,
    FiniteAssembly, IdentityCheck,
};
pub use kernel::{eval_a_n, eval_f_n, pole_distance};
pub use quadrature::{
    circle_residue, contour_integral, default_radius, edge_limit_probe, numeric_residue,
    residue_closure, ClosureReport, ContourSpec,
};

pub const MAX_M: u32 = 64;

/// Which denominator the `A_N` building block uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AKernel {
    /// `1/(1 − e^{2πiNvx})`; the residues at `in/N` and `−n/(Nv)` then
    /// take the displayed closed forms and the contour integral converges.
    #[default]
    Corrected,
    /// `1/(1 − e^{−2πiNvx})`, as typeset.
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifierParams {
    h: i64,
    k: i64,
    big_h: i64,
    v: f64,
    z: Complex,
    m: u32,
    kernel: AKernel,
}

impl VerifierParams {
    pub fn new(h: i64, k: i64, big_h: i64, v: f64, z: Complex, m: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain(format!("k = {k} must be positive")));
        }
        if h.gcd(&k) != 1 {
            return Err(Error::Domain(format!("gcd({h}, {k}) != 1")));
        }
        if (big_h as i128 * h as i128 + 1).rem_euclid(k as i128) != 0 {
            return Err(Error::Domain(format!(
                "H·h ≢ −1 (mod k) for H = {big_h}, h = {h}, k = {k}"
            )));
        }
        if !(v.is_finite() && v > z.im.abs() && z.im != 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!(
                "need v > |Im z| > 0, got v = {v}, z = {z}"
            )));
        }
        if m == 0 || m > MAX_M {
            return Err(Error::Domain(format!("m = {m} must be in 1..={MAX_M}")));
        }
        Ok(Self {
            h,
            k,
            big_h,
            v,
            z,
            m,
            kernel: AKernel::Corrected,
        })
    }

    pub fn with_m(&self, m: u32) -> Result<Self> {
        Self::new(self.h, self.k, self.big_h, self.v, self.z, m).map(|p| p.with_kernel(self.kernel))
    }

    pub fn with_kernel(mut self, kernel: AKernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn big_h(&self) -> i64 {
        self.big_h
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn z(&self) -> Complex {
        self.z
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn kernel(&self) -> AKernel {
        self.kernel
    }

    /// `N = m + 1/2`.
    pub fn big_n(&self) -> f64 {
        self.m as f64 + 0.5
    }

    /// The residue class `w ≡ hμ (mod k)` in `[1, k−1]`.
    pub fn residue_class(&self, mu: i64) -> i64 {
        (self.h * mu).rem_euclid(self.k)
    }

    /// The poles of `F_N` inside the contour other than `0`: `in/N` and
    /// `−n/(Nv)` for `1 ≤ |n| ≤ m`.
    pub fn interior_simple_poles(&self) -> Vec<(PoleFamily, i64, Complex)> {
        let n_big = self.big_n();
        let m = self.m as i64;
        let mut out = Vec::with_capacity(4 * self.m as usize);
        for n in (-m..=m).filter(|&n| n != 0) {
            out.push((PoleFamily::Upper, n, Complex::new(0.0, n as f64 / n_big)));
        }
        for n in (-m..=m).filter(|&n| n != 0) {
            out.push((
                PoleFamily::Right,
                n,
                Complex::new(-(n as f64) / (n_big * self.v), 0.0),
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleFamily {
    /// `x = in/N`.
    Upper,
    /// `x = −n/(Nv)`.
    Right,
}

/// A closed-form residue set against its quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueReport {
    pub closed_form: Complex,
    pub oracle: Complex,
    /// `|closed_form − oracle|`.
    pub discrepancy: f64,
    pub pole: Complex,
    pub order: u32,
}

impl ResidueReport {
    pub fn new(pole: Complex, order: u32, closed_form: Complex, oracle: Complex) -> Self {
        Self {
            closed_form,
            oracle,
            discrepancy: (closed_form - oracle).norm(),
            pole,
            order,
        }
    }
}
