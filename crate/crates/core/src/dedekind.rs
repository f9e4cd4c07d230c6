//! Exact Dedekind sums and the multiplier systems of η and θ₁.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modular::ModularMatrix;
use crate::Complex;

/// Arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Representative of `self mod 2` in `(−1, 1]`.
    pub fn reduce_mod_two(&self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let shifted = (&self.0 - BigRational::one()) / &two;
        Self(&self.0 - two * shifted.ceil())
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl std::ops::Add for ExactRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::ops::Sub for ExactRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl std::ops::Neg for ExactRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl std::ops::Mul for ExactRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

fn check_coprime(h: i64, k: i64) -> Result<i64> {
    if k <= 0 {
        return Err(Error::Domain(format!("k = {k} must be positive")));
    }
    let hr = h.rem_euclid(k);
    if hr.gcd(&k) != 1 {
        return Err(Error::Domain(format!("gcd({h}, {k}) != 1")));
    }
    Ok(hr)
}

/// `s(h, k) = Σ_{r=1}^{k−1} (r/k)(hr/k − ⌊hr/k⌋ − 1/2)`, summed term by term.
///
/// All terms share the denominator `2k²`, so the sum is accumulated as an
/// integer numerator `Σ r·(2(hr − k⌊hr/k⌋) − k)` and reduced once.
pub fn dedekind_sum_naive(h: i64, k: i64) -> Result<ExactRational> {
    let hr = check_coprime(h, k)?;
    let (h, k) = (hr as i128, k as i128);
    let mut numer = BigInt::zero();
    for r in 1..k {
        let hr = h * r;
        let frac_numer = hr.rem_euclid(k);
        numer += BigInt::from(r * (2 * frac_numer - k));
    }
    Ok(ExactRational::new(numer, BigInt::from(2 * k * k)))
}

/// Same value as [`dedekind_sum_naive`] in `O(log k)` steps, by running the
/// Euclidean algorithm on `(h, k)` and applying reciprocity
/// `s(h,k) + s(k,h) = (h² + k² + 1)/(12hk) − 1/4` at each step.
pub fn dedekind_sum_fast(h: i64, k: i64) -> Result<ExactRational> {
    let hr = check_coprime(h, k)?;
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let mut acc = BigRational::zero();
    let mut negate = false;
    let (mut h, mut k) = (BigInt::from(hr), BigInt::from(k));
    while !h.is_zero() {
        let term = BigRational::new(&h * &h + &k * &k + 1, BigInt::from(12) * &h * &k) - &quarter;
        if negate {
            acc -= term;
        } else {
            acc += term;
        }
        negate = !negate;
        let next = k.mod_floor(&h);
        k = h;
        h = next;
    }
    debug_assert!(k.abs().is_one());
    Ok(ExactRational(acc))
}

/// A unit-modulus multiplier `e^{πi·phase}` with its exact rational phase.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierValue {
    pub value: Complex,
    /// Multiple of π in `(−1, 1]`.
    pub phase: ExactRational,
}

impl MultiplierValue {
    pub fn from_phase(phase: ExactRational) -> Self {
        let phase = phase.reduce_mod_two();
        let value = unit_from_phase(&phase);
        Self { value, phase }
    }
}

fn unit_from_phase(phase: &ExactRational) -> Complex {
    // Quarter turns are returned exactly.
    let four = phase.clone() * ExactRational::from_integer(4);
    if four.denom().is_one() {
        return match four.numer().mod_floor(&BigInt::from(8)).to_i64() {
            Some(0) => Complex::new(1.0, 0.0),
            Some(2) => Complex::new(0.0, 1.0),
            Some(4) => Complex::new(-1.0, 0.0),
            Some(6) => Complex::new(0.0, -1.0),
            _ => Complex::from_polar(1.0, std::f64::consts::PI * phase.to_f64()),
        };
    }
    Complex::from_polar(1.0, std::f64::consts::PI * phase.to_f64())
}

fn require_positive_c(m: &ModularMatrix) -> Result<()> {
    if m.c() <= 0 {
        return Err(Error::Precondition(format!(
            "multiplier needs c > 0, got {m}"
        )));
    }
    Ok(())
}

/// `ε(A) = exp(πi((a + d)/(12c) + s(−d, c)))`.
pub fn eta_multiplier(m: &ModularMatrix) -> Result<MultiplierValue> {
    require_positive_c(m)?;
    let neg_d = m.d().checked_neg().ok_or(Error::Overflow("-d"))?;
    let base = ExactRational::new(
        BigInt::from(m.a()) + BigInt::from(m.d()),
        BigInt::from(12) * BigInt::from(m.c()),
    );
    let phase = base + dedekind_sum_fast(neg_d, m.c())?;
    Ok(MultiplierValue::from_phase(phase))
}

/// `ε₁(A) = −i·ε(A)³`, phase `3·phase(ε) − 1/2`.
pub fn theta_multiplier(m: &ModularMatrix) -> Result<MultiplierValue> {
    let eta = eta_multiplier(m)?;
    let phase = eta.phase * ExactRational::from_integer(3) - ExactRational::new(1, 2);
    Ok(MultiplierValue::from_phase(phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn naive_examples() {
        assert_eq!(dedekind_sum_naive(5, 1).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum_naive(1, 3).unwrap(), q(1, 18));
        assert_eq!(dedekind_sum_naive(1, 2).unwrap(), q(0, 1));
        assert_eq!(dedekind_sum_naive(-1, 1).unwrap(), q(0, 1));
        assert!(matches!(dedekind_sum_naive(2, 4), Err(Error::Domain(_))));
        assert!(matches!(dedekind_sum_naive(1, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn fast_examples() {
        assert_eq!(dedekind_sum_fast(1, 3).unwrap(), q(1, 18));
        assert_eq!(
            dedekind_sum_fast(5, 7).unwrap(),
            dedekind_sum_naive(5, 7).unwrap()
        );
        assert_eq!(dedekind_sum_fast(9, 1).unwrap(), q(0, 1));
        assert_eq!(
            dedekind_sum_fast(-3, 7).unwrap(),
            dedekind_sum_naive(-3, 7).unwrap()
        );
    }

    #[test]
    fn large_modulus_uses_reciprocity() {
        let k = 1_000_000_007;
        let s = dedekind_sum_fast(123_456_789, k).unwrap();
        let t = dedekind_sum_fast(k - 123_456_789, k).unwrap();
        assert_eq!(s, -t);
    }

    #[test]
    fn display_renders_fractions() {
        assert_eq!(q(1, 18).to_string(), "1/18");
        assert_eq!(q(-4, 2).to_string(), "-2");
        assert_eq!(q(0, 5).to_string(), "0");
    }

    #[test]
    fn phase_reduction() {
        assert_eq!(q(1, 1).reduce_mod_two(), q(1, 1));
        assert_eq!(q(-1, 1).reduce_mod_two(), q(1, 1));
        assert_eq!(q(3, 2).reduce_mod_two(), q(-1, 2));
        assert_eq!(q(7, 3).reduce_mod_two(), q(1, 3));
        assert_eq!(q(-5, 4).reduce_mod_two(), q(3, 4));
    }

    #[test]
    fn multiplier_examples() {
        let eps = eta_multiplier(&ModularMatrix::S).unwrap();
        assert_eq!(eps.phase, q(0, 1));
        assert_eq!(eps.value, Complex::new(1.0, 0.0));

        let m = ModularMatrix::new(1, 0, 1, 1).unwrap();
        let eps = eta_multiplier(&m).unwrap();
        assert_eq!(eps.phase, q(1, 6));
        let expected = Complex::from_polar(1.0, std::f64::consts::PI / 6.0);
        assert!((eps.value - expected).norm() < 1e-15);

        let eps1 = theta_multiplier(&ModularMatrix::S).unwrap();
        assert_eq!(eps1.phase, q(-1, 2));
        assert_eq!(eps1.value, Complex::new(0.0, -1.0));

        let eps1 = theta_multiplier(&m).unwrap();
        assert_eq!(eps1.phase, q(0, 1));
        assert_eq!(eps1.value, Complex::new(1.0, 0.0));

        assert!(matches!(
            eta_multiplier(&ModularMatrix::T),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            theta_multiplier(&ModularMatrix::S.negated().unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    proptest! {
        #[test]
        fn oddness(k in 2i64..400, h in -1000i64..1000) {
            prop_assume!(h.gcd(&k) == 1);
            prop_assert_eq!(dedekind_sum_fast(k - h, k).unwrap(), -dedekind_sum_fast(h, k).unwrap());
            prop_assert_eq!(dedekind_sum_naive(k - h, k).unwrap(), -dedekind_sum_naive(h, k).unwrap());
        }

        #[test]
        fn multipliers_have_unit_modulus(c in 1i64..60, d in -60i64..60) {
            prop_assume!(d.gcd(&c) == 1);
            let a = d.rem_euclid(c).extended_gcd(&c).x.rem_euclid(c);
            let m = ModularMatrix::new(a, (a * d - 1) / c, c, d).unwrap();
            prop_assert!((eta_multiplier(&m).unwrap().value.norm() - 1.0).abs() < 1e-15);
            prop_assert!((theta_multiplier(&m).unwrap().value.norm() - 1.0).abs() < 1e-15);
            // ε(A) is a 24th root of unity.
            let phase = eta_multiplier(&m).unwrap().phase;
            let scaled = phase * ExactRational::from_integer(12);
            prop_assert!(scaled.denom().is_one());
        }
    }
}
