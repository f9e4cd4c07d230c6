use jacobi_theta::reducer::{theta1_fast_eval, verify_eta_transformation, verify_transformation};
use jacobi_theta::residue::{
    check_log_sum_identity, residue_closure, residue_zero_closed, simple_pole_reports, ContourSpec,
    VerifierParams,
};
use jacobi_theta::sweep::sample_cases;
use jacobi_theta::theta::eta_eval;
use jacobi_theta::{
    dedekind_sum_fast, eta_multiplier, reduce_to_fundamental_domain, solve_h, theta_multiplier,
    Complex, Error, ModularMatrix, TauPoint, TruncationControl,
};
use serde_json::{json, Map, Value};

use crate::report::Report;

/// Why a command stopped short of a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

pub type Outcome = std::result::Result<Report, Failure>;

/// Terms per row in the identity check.
const IDENTITY_CAP: usize = 400;
const CLOSURE_TOL: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-8;
const TRANSFORM_TOL: f64 = 1e-9;

fn row(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| ((*k).to_owned(), v.clone()))
        .collect()
}

fn complex_str(z: Complex) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn tau_point(tau: Complex) -> std::result::Result<TauPoint, Failure> {
    TauPoint::new(tau).map_err(Failure::Domain)
}

pub fn eval(z: Complex, tau: Complex, ctl: TruncationControl, seed: u64) -> Outcome {
    let t = tau_point(tau)?;
    let fast = theta1_fast_eval(z, t, ctl)?;
    let tr = fast.trace;
    let moved = tr.matrix != ModularMatrix::IDENTITY || tr.lattice_shift != (0, 0);
    let mut r = Report::new("eval", seed);
    r.param("z", complex_str(z))
        .param("tau", complex_str(tau))
        .param("tol", ctl.tolerance());
    r.results.push(row(&[
        ("value_re", json!(fast.value.re)),
        ("value_im", json!(fast.value.im)),
        ("method", json!(if moved { "reduced" } else { "direct" })),
        ("terms", json!(fast.terms)),
        ("err_bound", json!(fast.error_bound)),
    ]));
    if moved {
        r.notes.push(format!(
            "reduced by {} to tau' = {}, z' = {}, lattice shift (m, n) = ({}, {}), log prefactor = {}",
            tr.matrix,
            complex_str(tr.tau_reduced.value()),
            complex_str(tr.z_reduced),
            tr.lattice_shift.0,
            tr.lattice_shift.1,
            complex_str(tr.log_prefactor)
        ));
    }
    Ok(r)
}

pub fn eta(tau: Complex, ctl: TruncationControl, seed: u64) -> Outcome {
    let t = tau_point(tau)?;
    let e = eta_eval(t, ctl)?;
    let mut r = Report::new("eta", seed);
    r.param("tau", complex_str(tau))
        .param("tol", ctl.tolerance());
    r.results.push(row(&[
        ("value_re", json!(e.value.re)),
        ("value_im", json!(e.value.im)),
        ("terms", json!(e.terms)),
        ("err_bound", json!(e.error_bound)),
    ]));
    Ok(r)
}

pub fn reduce(tau: Complex, seed: u64) -> Outcome {
    let t = tau_point(tau)?;
    let (m, reduced) = reduce_to_fundamental_domain(t)?;
    let mut r = Report::new("reduce", seed);
    r.param("tau", complex_str(tau));
    r.results.push(row(&[
        ("a", json!(m.a())),
        ("b", json!(m.b())),
        ("c", json!(m.c())),
        ("d", json!(m.d())),
        ("tau_re", json!(reduced.re())),
        ("tau_im", json!(reduced.im())),
    ]));
    r.notes
        .push(format!("{m} maps tau into the fundamental domain"));
    Ok(r)
}

pub fn multiplier(m: [i64; 4], seed: u64) -> Outcome {
    let a = ModularMatrix::new(m[0], m[1], m[2], m[3])?;
    let eps = eta_multiplier(&a)?;
    let eps1 = theta_multiplier(&a)?;
    let mut r = Report::new("multiplier", seed);
    r.param("matrix", format!("{},{},{},{}", m[0], m[1], m[2], m[3]));
    for (name, v) in [("eps", eps), ("eps1", eps1)] {
        r.results.push(row(&[
            ("name", json!(name)),
            ("value_re", json!(v.value.re)),
            ("value_im", json!(v.value.im)),
            ("phase_over_pi", json!(v.phase.to_string())),
        ]));
    }
    Ok(r)
}

pub fn dedekind(h: i64, k: i64, seed: u64) -> Outcome {
    let s = dedekind_sum_fast(h, k)?;
    let mut r = Report::new("dedekind", seed);
    r.param("h", h).param("k", k);
    r.results.push(row(&[
        ("s", json!(s.to_string())),
        ("s_f64", json!(s.to_f64())),
    ]));
    Ok(r)
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// The θ₁ transformation law on `count` seeded random cases.
pub fn verify_transform(
    count: usize,
    tol: Option<f64>,
    ctl: TruncationControl,
    seed: u64,
) -> Outcome {
    let tol = tol.unwrap_or(TRANSFORM_TOL);
    let mut r = Report::new("verify-transform", seed);
    r.param("count", count).param("tol", tol);
    let mut residuals = Vec::with_capacity(count);
    for case in sample_cases(seed, count) {
        let m = case.matrix;
        let residual = verify_transformation(&m, case.z, case.tau, ctl)?;
        if !(residual < tol) {
            r.notes.push(format!(
                "exceeds tolerance: A = {m}, z = {}, tau = {}, residual {residual:e}",
                complex_str(case.z),
                complex_str(case.tau.value())
            ));
        }
        residuals.push(residual);
        r.results.push(row(&[
            ("a", json!(m.a())),
            ("b", json!(m.b())),
            ("c", json!(m.c())),
            ("d", json!(m.d())),
            ("z_re", json!(case.z.re)),
            ("z_im", json!(case.z.im)),
            ("tau_re", json!(case.tau.re())),
            ("tau_im", json!(case.tau.im())),
            ("residual", json!(residual)),
        ]));
    }
    finish_sweep(&mut r, residuals, tol);
    Ok(r)
}

/// Both the θ₁ and the η transformation laws on the same seeded cases.
pub fn sweep(count: usize, tol: Option<f64>, ctl: TruncationControl, seed: u64) -> Outcome {
    let tol = tol.unwrap_or(TRANSFORM_TOL);
    let mut r = Report::new("sweep", seed);
    r.param("count", count).param("tol", tol);
    let mut residuals = Vec::with_capacity(2 * count);
    for case in sample_cases(seed, count) {
        let m = case.matrix;
        let theta = verify_transformation(&m, case.z, case.tau, ctl)?;
        let eta = verify_eta_transformation(&m, case.tau, ctl)?;
        residuals.push(theta.max(eta));
        r.results.push(row(&[
            ("a", json!(m.a())),
            ("b", json!(m.b())),
            ("c", json!(m.c())),
            ("d", json!(m.d())),
            ("z_re", json!(case.z.re)),
            ("z_im", json!(case.z.im)),
            ("tau_re", json!(case.tau.re())),
            ("tau_im", json!(case.tau.im())),
            ("theta_residual", json!(theta)),
            ("eta_residual", json!(eta)),
        ]));
    }
    finish_sweep(&mut r, residuals, tol);
    Ok(r)
}

fn finish_sweep(r: &mut Report, residuals: Vec<f64>, tol: f64) {
    let max = residuals.iter().copied().fold(0.0, f64::max);
    r.pass = residuals.iter().all(|&x| x < tol);
    r.stat("median_residual", median(residuals));
    r.max_residual = Some(max);
}

pub struct ResidueArgs {
    pub m: u32,
    pub k: i64,
    pub h: i64,
    pub v: f64,
    pub z: Complex,
}

/// Every closed-form residue against its oracle, then the closure, the
/// log-sum identity and the contour-limit gap.
pub fn verify_residues(args: &ResidueArgs, tol: Option<f64>, seed: u64) -> Outcome {
    let big_h = solve_h(args.h, args.k).map_err(|e| Failure::Usage(e.to_string()))?;
    let p = VerifierParams::new(args.h, args.k, big_h, args.v, args.z, args.m)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let (closure_tol, identity_tol) = tol.map_or((CLOSURE_TOL, IDENTITY_TOL), |t| (t, t));

    let mut r = Report::new("verify-residues", seed);
    r.param("m", args.m)
        .param("k", args.k)
        .param("h", args.h)
        .param("H", big_h)
        .param("v", args.v)
        .param("z", complex_str(args.z));

    let mut pole_row = |pole: Complex, order: u32, closed: Complex, oracle: Complex| {
        r.results.push(row(&[
            ("pole_re", json!(pole.re)),
            ("pole_im", json!(pole.im)),
            ("order", json!(order)),
            ("closed_re", json!(closed.re)),
            ("closed_im", json!(closed.im)),
            ("oracle_re", json!(oracle.re)),
            ("oracle_im", json!(oracle.im)),
            ("discrepancy", json!((closed - oracle).norm())),
        ]));
    };
    let zero = residue_zero_closed(&p)?;
    pole_row(Complex::new(0.0, 0.0), 3, zero.corrected, zero.oracle);
    for rep in simple_pole_reports(&p)? {
        pole_row(rep.pole, rep.order, rep.closed_form, rep.oracle);
    }

    let spec = ContourSpec::for_params(&p);
    let closure = residue_closure(&p, &spec)?;
    let identity = check_log_sum_identity(&p, IDENTITY_CAP)?;
    let gap = (closure.integral + args.v.ln()).norm();

    r.notes.push(format!(
        "residue at 0 as typeset = {} (differs from the oracle by {})",
        complex_str(zero.printed),
        complex_str(zero.printed_discrepancy)
    ));
    r.stat("closure_residual", closure.residual)
        .stat(
            "closure_relative",
            closure.residual / closure.integral.norm().max(1.0),
        )
        .stat("identity_residual", identity.residual)
        .stat("identity_exp_residual", identity.exp_residual)
        .stat("contour_gap", gap);
    r.pass = closure.residual < closure_tol && identity.residual < identity_tol;
    r.max_residual = Some(closure.residual.max(identity.residual));
    Ok(r)
}
