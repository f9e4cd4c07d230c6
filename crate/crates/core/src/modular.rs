//! Integer arithmetic in SL₂(ℤ), the Möbius action on the upper half plane,
//! principal-branch powers, and the change of variables that turns a matrix
//! with `c > 0` into the `(H, h, k, v)` parameters of the residue proof.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::Complex;

/// An integer matrix `(a, b; c, d)` with determinant exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModularMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl ModularMatrix {
    pub const IDENTITY: Self = Self {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    /// The inversion `τ ↦ −1/τ`.
    pub const S: Self = Self {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    /// The translation `τ ↦ τ + 1`.
    pub const T: Self = Self {
        a: 1,
        b: 1,
        c: 0,
        d: 1,
    };

    /// Validates `ad − bc = 1`. The determinant is formed in 128-bit
    /// arithmetic, so no input can wrap.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::Determinant { a, b, c, d, det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Matrix product `self · rhs` with overflow detection.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let dot = |x: i64, y: i64, u: i64, w: i64| -> Result<i64> {
            let p = x.checked_mul(y).ok_or(Error::Overflow("matrix product"))?;
            let q = u.checked_mul(w).ok_or(Error::Overflow("matrix product"))?;
            p.checked_add(q).ok_or(Error::Overflow("matrix product"))
        };
        Ok(Self {
            a: dot(self.a, rhs.a, self.b, rhs.c)?,
            b: dot(self.a, rhs.b, self.b, rhs.d)?,
            c: dot(self.c, rhs.a, self.d, rhs.c)?,
            d: dot(self.c, rhs.b, self.d, rhs.d)?,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let neg = |x: i64| x.checked_neg().ok_or(Error::Overflow("matrix inverse"));
        Ok(Self {
            a: self.d,
            b: neg(self.b)?,
            c: neg(self.c)?,
            d: self.a,
        })
    }

    /// `−A`, which acts on the upper half plane exactly like `A`.
    pub fn negated(&self) -> Result<Self> {
        let neg = |x: i64| x.checked_neg().ok_or(Error::Overflow("matrix negation"));
        Ok(Self {
            a: neg(self.a)?,
            b: neg(self.b)?,
            c: neg(self.c)?,
            d: neg(self.d)?,
        })
    }

    /// `T^n`.
    pub fn translation(n: i64) -> Self {
        Self {
            a: 1,
            b: n,
            c: 0,
            d: 1,
        }
    }

    /// `cτ + d`.
    pub fn automorphy_denominator(&self, tau: Complex) -> Complex {
        tau * self.c as f64 + self.d as f64
    }

    pub fn apply(&self, tau: TauPoint) -> TauPoint {
        moebius_apply(self, tau)
    }
}

impl fmt::Display for ModularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// A point of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauPoint(Complex);

impl TauPoint {
    pub fn new(value: Complex) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Domain(format!("tau = {value} is not finite")));
        }
        if value.im <= 0.0 {
            return Err(Error::Domain(format!(
                "tau = {value} is not in the upper half plane"
            )));
        }
        Ok(Self(value))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex::new(re, im))
    }

    pub fn value(&self) -> Complex {
        self.0
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

/// `(aτ + b)/(cτ + d)`.
///
/// The imaginary part is formed as `Im τ / |cτ + d|²`, which keeps the
/// result strictly inside the upper half plane even when the entries are large.
pub fn moebius_apply(m: &ModularMatrix, tau: TauPoint) -> TauPoint {
    let t = tau.value();
    let num = t * m.a as f64 + m.b as f64;
    let den = m.automorphy_denominator(t);
    let norm = den.norm_sqr();
    let re = (num * den.conj()).re / norm;
    let im = t.im / norm;
    TauPoint(Complex::new(re, im))
}

/// `Arg z` in `(−π, π]`. A negative real input with a signed-zero imaginary
/// part maps to `+π`.
pub fn principal_arg(z: Complex) -> f64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    im.atan2(z.re)
}

/// `Log z = ln|z| + i·Arg z` with `Arg` in `(−π, π]`.
pub fn principal_log(z: Complex) -> Result<Complex> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    Ok(Complex::new(z.norm().ln(), principal_arg(z)))
}

/// `base^exponent = exp(exponent · Log base)` on the principal branch.
pub fn principal_power(base: Complex, exponent: Complex) -> Result<Complex> {
    let log =
        principal_log(base).map_err(|_| Error::Domain("principal power of zero base".into()))?;
    Ok((exponent * log).exp())
}

/// Principal square root, the only half-integer power the transformation
/// laws need.
pub fn principal_sqrt(base: Complex) -> Result<Complex> {
    principal_power(base, Complex::new(0.5, 0.0))
}

pub const REDUCTION_STEP_CAP: usize = 1000;

/// Gauss reduction. Returns `(A, Aτ)` with `|Re Aτ| ≤ 1/2` and `|Aτ| ≥ 1`.
///
/// Points on the boundary arcs are left wherever the iteration puts them.
/// The returned point is recomputed from the returned matrix, so the pair is
/// consistent to working precision.
pub fn reduce_to_fundamental_domain(tau: TauPoint) -> Result<(ModularMatrix, TauPoint)> {
    let mut acc = ModularMatrix::IDENTITY;
    let mut t = tau.value();
    for _ in 0..REDUCTION_STEP_CAP {
        let shift = t.re.round();
        if shift != 0.0 {
            if shift.abs() > i64::MAX as f64 / 2.0 {
                return Err(Error::Overflow("fundamental-domain translation"));
            }
            let n = shift as i64;
            t.re -= shift;
            acc = ModularMatrix::translation(-n).checked_mul(&acc)?;
        }
        if t.norm_sqr() < 1.0 {
            t = -t.inv();
            acc = ModularMatrix::S.checked_mul(&acc)?;
        } else {
            return Ok((acc, moebius_apply(&acc, tau)));
        }
    }
    Err(Error::NonConvergence(REDUCTION_STEP_CAP))
}

/// The substitution `a = H`, `c = k`, `h = −d`, `v = −i(cτ + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremParams {
    big_h: i64,
    h: i64,
    k: i64,
    v: Complex,
}

impl TheoremParams {
    pub fn new(big_h: i64, h: i64, k: i64, v: Complex) -> Result<Self> {
        if k <= 0 {
            return Err(Error::Domain(format!("k = {k} must be positive")));
        }
        if h.gcd(&k) != 1 {
            return Err(Error::Domain(format!("gcd({h}, {k}) != 1")));
        }
        let prod = (big_h as i128 * h as i128 + 1).rem_euclid(k as i128);
        if prod != 0 {
            return Err(Error::Domain(format!(
                "H·h ≢ −1 (mod k) for H = {big_h}, h = {h}, k = {k}"
            )));
        }
        Ok(Self { big_h, h, k, v })
    }

    pub fn big_h(&self) -> i64 {
        self.big_h
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn v(&self) -> Complex {
        self.v
    }

    /// `τ = (iv + h)/k`.
    pub fn tau(&self) -> Complex {
        (Complex::i() * self.v + self.h as f64) / self.k as f64
    }

    /// `Aτ = (H + i/v)/k`.
    pub fn transformed_tau(&self) -> Complex {
        (Complex::i() / self.v + self.big_h as f64) / self.k as f64
    }
}

pub fn theorem_params_from_matrix(m: &ModularMatrix, tau: TauPoint) -> Result<TheoremParams> {
    if m.c <= 0 {
        return Err(Error::Precondition(format!(
            "matrix {m} has c <= 0; negate it first"
        )));
    }
    let h = m.d.checked_neg().ok_or(Error::Overflow("h = -d"))?;
    let v = -Complex::i() * m.automorphy_denominator(tau.value());
    let params = TheoremParams::new(m.a, h, m.c, v)
        .expect("det = 1 forces gcd(h, k) = 1 and H·h ≡ −1 (mod k)");
    Ok(params)
}

/// The unique `H ∈ [0, k)` with `H·h ≡ −1 (mod k)`.
pub fn solve_h(h: i64, k: i64) -> Result<i64> {
    if k <= 0 {
        return Err(Error::Domain(format!("k = {k} must be positive")));
    }
    let hr = h.rem_euclid(k);
    let egcd = hr.extended_gcd(&k);
    if egcd.gcd != 1 {
        return Err(Error::Domain(format!("gcd({h}, {k}) != 1")));
    }
    // egcd.x·hr ≡ 1, so −egcd.x is the solution.
    Ok((-(egcd.x as i128)).rem_euclid(k as i128) as i64)
}
