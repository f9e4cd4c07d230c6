//! The θ₁ transformation law as an evaluation strategy.
//!
//! `θ₁(z/(cτ+d), Aτ) = ε₁(A)·(−i(cτ+d))^{1/2}·e^{πicz²/(cτ+d)}·θ₁(z, τ)` for
//! `c > 0`. [`theta1_fast`] runs it forwards from an arbitrary `τ` to the
//! fundamental domain, where a handful of series terms suffice.

use std::f64::consts::PI;

use crate::dedekind::{eta_multiplier, theta_multiplier};
use crate::error::{Error, Result};
use crate::modular::{
    moebius_apply, principal_log, principal_sqrt, reduce_to_fundamental_domain, ModularMatrix,
    TauPoint,
};
use crate::theta::{eta, theta1_series, theta1_series_eval, ThetaPoint, TruncationControl};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// Floor for relative residuals, so that `0/0` reads as zero.
pub const TINY: f64 = 1e-300;

fn require_positive_c(m: &ModularMatrix) -> Result<()> {
    if m.c() <= 0 {
        return Err(Error::Precondition(format!(
            "transformation needs c > 0, got {m}"
        )));
    }
    Ok(())
}

/// `log` of `ε₁(A)·(−i(cτ+d))^{1/2}·e^{πicz²/(cτ+d)}`.
pub fn log_transform_factor(m: &ModularMatrix, z: Complex, tau: TauPoint) -> Result<Complex> {
    require_positive_c(m)?;
    let eps1 = theta_multiplier(m)?;
    let den = m.automorphy_denominator(tau.value());
    let half_log = 0.5 * principal_log(-I * den)?;
    let gauss = I * PI * m.c() as f64 * z * z / den;
    Ok(I * PI * eps1.phase.to_f64() + half_log + gauss)
}

pub fn transform_factor(m: &ModularMatrix, z: Complex, tau: TauPoint) -> Result<Complex> {
    Ok(log_transform_factor(m, z, tau)?.exp())
}

/// Right side of the transformation law with `θ₁(z, τ)` summed directly.
pub fn transform_rhs(
    m: &ModularMatrix,
    z: Complex,
    tau: TauPoint,
    ctl: TruncationControl,
) -> Result<Complex> {
    require_positive_c(m)?;
    let eps1 = theta_multiplier(m)?;
    let den = m.automorphy_denominator(tau.value());
    let root = principal_sqrt(-I * den)?;
    let gauss = (I * PI * m.c() as f64 * z * z / den).exp();
    let theta = theta1_series(ThetaPoint::new(z, tau), ctl)?;
    Ok(eps1.value * root * gauss * theta)
}

/// `|θ₁(z/(cτ+d), Aτ) − rhs| / max(|θ₁(z/(cτ+d), Aτ)|, TINY)`, both sides by
/// direct summation.
pub fn verify_transformation(
    m: &ModularMatrix,
    z: Complex,
    tau: TauPoint,
    ctl: TruncationControl,
) -> Result<f64> {
    let rhs = transform_rhs(m, z, tau, ctl)?;
    let lhs = theta1_series(transformed_point(m, z, tau), ctl)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(TINY))
}

/// `(z/(cτ+d), Aτ)`.
pub fn transformed_point(m: &ModularMatrix, z: Complex, tau: TauPoint) -> ThetaPoint {
    ThetaPoint::new(
        z / m.automorphy_denominator(tau.value()),
        moebius_apply(m, tau),
    )
}

/// `θ₁(z/(cτ+d), Aτ) / ((−i(cτ+d))^{1/2}·e^{πicz²/(cτ+d)}·θ₁(z, τ))`, an
/// empirical value of `ε₁(A)`.
pub fn measure_theta_multiplier(
    m: &ModularMatrix,
    z: Complex,
    tau: TauPoint,
    ctl: TruncationControl,
) -> Result<Complex> {
    require_positive_c(m)?;
    let den = m.automorphy_denominator(tau.value());
    let lhs = theta1_series(transformed_point(m, z, tau), ctl)?;
    let theta = theta1_series(ThetaPoint::new(z, tau), ctl)?;
    let scale = principal_sqrt(-I * den)? * (I * PI * m.c() as f64 * z * z / den).exp();
    Ok(lhs / (scale * theta))
}

/// `η(Aτ) / ((−i(cτ+d))^{1/2}·η(τ))`, an empirical value of `ε(A)`.
pub fn measure_eta_multiplier(
    m: &ModularMatrix,
    tau: TauPoint,
    ctl: TruncationControl,
) -> Result<Complex> {
    require_positive_c(m)?;
    let den = m.automorphy_denominator(tau.value());
    let lhs = eta(moebius_apply(m, tau), ctl)?;
    Ok(lhs / (principal_sqrt(-I * den)? * eta(tau, ctl)?))
}

/// Relative residual of `η(Aτ) = ε(A)·(−i(cτ+d))^{1/2}·η(τ)`.
pub fn verify_eta_transformation(
    m: &ModularMatrix,
    tau: TauPoint,
    ctl: TruncationControl,
) -> Result<f64> {
    require_positive_c(m)?;
    let den = m.automorphy_denominator(tau.value());
    let lhs = eta(moebius_apply(m, tau), ctl)?;
    let rhs = eta_multiplier(m)?.value * principal_sqrt(-I * den)? * eta(tau, ctl)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(TINY))
}

/// Quasi-periodic reduction `z = z_r + m + nτ` with `θ₁(z, τ) =
/// prefactor·θ₁(z_r, τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZReduction {
    pub z_reduced: Complex,
    pub m: i64,
    pub n: i64,
    pub prefactor: Complex,
    pub log_prefactor: Complex,
}

pub fn reduce_z(z: Complex, tau: TauPoint) -> ZReduction {
    let t = tau.value();
    let n = (z.im / t.im).round();
    let shifted = z - t * n;
    let m = shifted.re.round();
    let z_reduced = shifted - m;
    let (m, n) = (m as i64, n as i64);
    let sign = if (m + n).rem_euclid(2) == 0 { 0.0 } else { PI };
    let nf = n as f64;
    let log_prefactor = I * sign - I * PI * nf * nf * t - 2.0 * PI * I * nf * z_reduced;
    ZReduction {
        z_reduced,
        m,
        n,
        prefactor: log_prefactor.exp(),
        log_prefactor,
    }
}

/// Everything needed to map `θ₁(z, τ)` to the reduced evaluation:
/// `θ₁(z_reduced, tau_reduced) = prefactor·θ₁(z, τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionTrace {
    /// Maps `τ` to `tau_reduced`, normalised to `c ≥ 0`.
    pub matrix: ModularMatrix,
    pub tau_reduced: TauPoint,
    pub z_reduced: Complex,
    pub lattice_shift: (i64, i64),
    /// May over- or underflow; `log_prefactor` is always finite.
    pub prefactor: Complex,
    pub log_prefactor: Complex,
    /// `Im log_prefactor`, the phase in radians (not reduced).
    pub prefactor_log_phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastEval {
    pub value: Complex,
    pub trace: ReductionTrace,
    /// Series terms spent on the reduced point.
    pub terms: usize,
    pub error_bound: f64,
}

pub fn reduction_trace(z: Complex, tau: TauPoint) -> Result<ReductionTrace> {
    let (mut matrix, tau_reduced) = reduce_to_fundamental_domain(tau)?;
    if matrix.c() < 0 || (matrix.c() == 0 && matrix.d() < 0) {
        matrix = matrix.negated()?;
    }
    let (z_moved, log_p) = if matrix.c() == 0 {
        // A = T^b: θ₁(z, τ + b) = e^{πib/4}θ₁(z, τ).
        (z, I * PI * (matrix.b().rem_euclid(8) as f64) / 4.0)
    } else {
        let den = matrix.automorphy_denominator(tau.value());
        (z / den, log_transform_factor(&matrix, z, tau)?)
    };
    let zr = reduce_z(z_moved, tau_reduced);
    let log_prefactor = log_p - zr.log_prefactor;
    Ok(ReductionTrace {
        matrix,
        tau_reduced,
        z_reduced: zr.z_reduced,
        lattice_shift: (zr.m, zr.n),
        prefactor: log_prefactor.exp(),
        log_prefactor,
        prefactor_log_phase: log_prefactor.im,
    })
}

/// θ₁ via reduction to the fundamental domain.
pub fn theta1_fast(z: Complex, tau: TauPoint, ctl: TruncationControl) -> Result<Complex> {
    theta1_fast_eval(z, tau, ctl).map(|e| e.value)
}

pub fn theta1_fast_eval(z: Complex, tau: TauPoint, ctl: TruncationControl) -> Result<FastEval> {
    let trace = reduction_trace(z, tau)?;
    let reduced = theta1_series_eval(ThetaPoint::new(trace.z_reduced, trace.tau_reduced), ctl)?;
    let scale = (-trace.log_prefactor).exp();
    Ok(FastEval {
        value: reduced.value * scale,
        trace,
        terms: reduced.terms,
        error_bound: reduced.error_bound * scale.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::zero_lattice_distance;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn tau(re: f64, im: f64) -> TauPoint {
        TauPoint::new(c(re, im)).unwrap()
    }

    fn ctl() -> TruncationControl {
        TruncationControl::default()
    }

    fn series(z: Complex, t: TauPoint) -> Complex {
        theta1_series(ThetaPoint::new(z, t), ctl()).unwrap()
    }

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(TINY)
    }

    #[test]
    fn rhs_examples() {
        let s = ModularMatrix::S;
        let t = tau(0.0, 1.3);
        assert_eq!(
            transform_rhs(&s, c(0.0, 0.0), t, ctl()).unwrap(),
            c(0.0, 0.0)
        );
        assert_eq!(series(c(0.0, 0.0), moebius_apply(&s, t)), c(0.0, 0.0));

        assert!(verify_transformation(&s, c(0.2, 0.1), tau(0.0, 1.0), ctl()).unwrap() < 1e-10);

        let m = ModularMatrix::new(2, 1, 1, 1).unwrap();
        let (z, t) = (c(0.1, 0.0), tau(0.3, 0.8));
        let lhs = theta1_series(transformed_point(&m, z, t), ctl()).unwrap();
        let rhs = transform_rhs(&m, z, t, ctl()).unwrap();
        assert!((lhs / rhs - 1.0).norm() < 1e-9);
    }

    #[test]
    fn verify_examples() {
        let m = ModularMatrix::new(1, 0, 1, 1).unwrap();
        assert!(verify_transformation(&m, c(0.2, 0.0), tau(0.0, 1.0), ctl()).unwrap() < 1e-10);
        let r =
            verify_transformation(&ModularMatrix::S, c(0.25, 0.1), tau(0.2, 1.1), ctl()).unwrap();
        assert!(r < 1e-10);
        assert!(matches!(
            verify_transformation(&ModularMatrix::T, c(0.2, 0.0), tau(0.0, 1.0), ctl()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reduce_z_examples() {
        let t = tau(0.0, 1.0);
        let r = reduce_z(c(0.3, 0.0), t);
        assert_eq!((r.m, r.n), (0, 0));
        assert!((r.z_reduced - c(0.3, 0.0)).norm() < 1e-15);
        assert!((r.prefactor - 1.0).norm() < 1e-15);

        let r = reduce_z(c(1.3, 0.0), t);
        assert_eq!((r.m, r.n), (1, 0));
        assert!((r.z_reduced - c(0.3, 0.0)).norm() < 1e-15);
        assert!((r.prefactor + 1.0).norm() < 1e-15);

        let z = c(0.3, 1.0);
        let r = reduce_z(z, t);
        assert_eq!((r.m, r.n), (0, 1));
        assert!((r.z_reduced - c(0.3, 0.0)).norm() < 1e-15);
        assert!(rel(r.prefactor * series(r.z_reduced, t), series(z, t)) < 1e-12);
    }

    #[test]
    fn fast_examples() {
        let t = tau(0.0, 2.0);
        let fast = theta1_fast(c(0.2, 0.0), t, ctl()).unwrap();
        assert!(rel(fast, series(c(0.2, 0.0), t)) < 1e-12);
        for t in [tau(0.3, 0.01), tau(-7.2, 0.2), tau(0.0, 3.0)] {
            assert_eq!(theta1_fast(c(0.0, 0.0), t, ctl()).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn fast_succeeds_where_direct_gives_up() {
        let tight = TruncationControl::new(1e-15, 2000).unwrap();
        let (z, t) = (c(0.2, 0.03), tau(0.37, 1e-5));
        assert!(matches!(
            theta1_series(ThetaPoint::new(z, t), tight),
            Err(Error::Truncation { .. })
        ));
        let fast = theta1_fast_eval(z, t, tight).unwrap();
        assert!(fast.value.is_finite());
        assert!(fast.terms <= 4);
    }

    #[test]
    fn trace_replays() {
        for (z, t) in [
            (c(0.2, 0.1), tau(0.3, 0.04)),
            (c(-0.7, 0.2), tau(3.4, 0.3)),
            (c(0.4, 0.0), tau(2.0, 0.9)),
        ] {
            let trace = reduction_trace(z, t).unwrap();
            let reduced = series(trace.z_reduced, trace.tau_reduced);
            let original = series(z, t);
            assert!(rel(reduced / trace.prefactor, original) < 1e-10);
            assert!(trace.matrix.c() >= 0);
            assert!(trace.tau_reduced.value().norm() >= 1.0 - 1e-12);
            assert!(trace.z_reduced.im.abs() <= trace.tau_reduced.im() / 2.0 + 1e-12);
        }
    }

    #[test]
    fn eta_law_examples() {
        let m = ModularMatrix::new(2, 1, 1, 1).unwrap();
        assert!(verify_eta_transformation(&m, tau(0.3, 0.8), ctl()).unwrap() < 1e-10);
        assert!(
            verify_eta_transformation(&ModularMatrix::S, tau(0.0, 1.0), ctl()).unwrap() < 1e-14
        );
    }

    fn matrix() -> impl Strategy<Value = ModularMatrix> {
        (1i64..12, -12i64..12, -3i64..3).prop_filter_map("coprime", |(c, d, j)| {
            if d.gcd(&c) != 1 {
                return None;
            }
            let inv = d.rem_euclid(c).extended_gcd(&c).x.rem_euclid(c);
            let a = inv + j * c;
            ModularMatrix::new(a, (a * d - 1) / c, c, d).ok()
        })
    }

    fn point() -> impl Strategy<Value = (Complex, TauPoint)> {
        (-0.8f64..0.8, -0.5f64..0.5, -1.0f64..1.0, 0.5f64..2.0).prop_filter_map(
            "off lattice",
            |(a, b, x, y)| {
                let (z, t) = (c(a, b), tau(x, y));
                (zero_lattice_distance(z, t) > 0.05).then_some((z, t))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn round_trip(m in matrix(), (z, t) in point()) {
            // −A⁻¹ has c > 0 and sends (z', Aτ) back to (−z, τ).
            let back = m.inverse().unwrap().negated().unwrap();
            let p = transformed_point(&m, z, t);
            let f = transform_factor(&m, z, t).unwrap() * transform_factor(&back, p.z, p.tau).unwrap();
            prop_assert!((f + 1.0).norm() < 1e-9);
        }

        #[test]
        fn fast_matches_series(m in matrix(), (z, t) in point()) {
            // Pull a well-conditioned point back to a harder τ.
            let p = transformed_point(&m, z, t);
            prop_assume!(p.tau.im() > 0.02);
            let direct = theta1_series(p, ctl()).unwrap();
            let fast = theta1_fast(p.z, p.tau, ctl()).unwrap();
            prop_assert!(rel(fast, direct) < 1e-9, "{} vs {}", fast, direct);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(25))]

        #[test]
        fn measured_multiplier_is_constant(m in matrix(), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let expected = theta_multiplier(&m).unwrap().value;
            let mut phases = Vec::new();
            while phases.len() < 20 {
                let z = c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.5..0.5));
                let t = tau(rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0));
                if zero_lattice_distance(z, t) < 0.05 {
                    continue;
                }
                let measured = measure_theta_multiplier(&m, z, t, ctl()).unwrap();
                prop_assert!((measured - expected).norm() < 1e-10);
                phases.push((measured / expected).arg());
            }
            let mean = phases.iter().sum::<f64>() / phases.len() as f64;
            let var = phases.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / phases.len() as f64;
            prop_assert!(var.sqrt() < 1e-9);
        }

        #[test]
        fn eta_law(m in matrix(), x in -1.0f64..1.0, y in 0.3f64..3.0) {
            let t = tau(x, y);
            prop_assert!(verify_eta_transformation(&m, t, ctl()).unwrap() < 1e-10);
            let measured = measure_eta_multiplier(&m, t, ctl()).unwrap();
            prop_assert!((measured - eta_multiplier(&m).unwrap().value).norm() < 1e-10);
        }
    }
}
