//! Circle quadrature for residues and adaptive Gauss–Legendre on the contour.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use super::kernel::eval_f_n;
use super::VerifierParams;
use crate::error::{Error, Result};
use crate::Complex;

pub(crate) const ORACLE_POINTS: usize = 256;
const MIN_POINTS: usize = 64;
const PATH_GUARD: f64 = 1e-6;

/// `(1/2πi)∮ f` over the circle `|x − center| = radius` by the trapezoidal
/// rule, which is spectrally accurate for functions analytic on an annulus.
pub fn circle_residue<F>(f: F, center: Complex, radius: f64, points: usize) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
{
    if points < MIN_POINTS {
        return Err(Error::Domain(format!(
            "need at least {MIN_POINTS} points, got {points}"
        )));
    }
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("radius {radius} must be positive")));
    }
    let mut sum = Complex::new(0.0, 0.0);
    for j in 0..points {
        let offset = Complex::from_polar(radius, 2.0 * PI * j as f64 / points as f64);
        sum += f(center + offset)? * offset;
    }
    Ok(sum / points as f64)
}

/// Distance from `pole` to the nearest other pole of `F_N`.
fn nearest_other_pole(pole: Complex, p: &VerifierParams) -> f64 {
    let n_big = p.big_n();
    let steps = [
        (Complex::new(0.0, 1.0 / n_big)),
        Complex::new(1.0 / (n_big * p.v()), 0.0),
    ];
    let mut best = f64::INFINITY;
    for step in steps {
        let j0 = (pole.re * step.re + pole.im * step.im) / step.norm_sqr();
        let j0 = j0.round() as i64;
        for j in j0 - 2..=j0 + 2 {
            let d = (step * j as f64 - pole).norm();
            if d > 1e-12 {
                best = best.min(d);
            }
        }
    }
    best
}

/// A radius that keeps every other pole at least twice as far away.
pub fn default_radius(pole: Complex, p: &VerifierParams) -> f64 {
    0.4 * nearest_other_pole(pole, p)
}

/// Residue of `F_N` at `pole`.
pub fn numeric_residue(
    pole: Complex,
    p: &VerifierParams,
    radius: f64,
    points: usize,
) -> Result<Complex> {
    let gap = nearest_other_pole(pole, p);
    if 2.0 * radius > gap {
        return Err(Error::Geometry(format!(
            "radius {radius} too large: another pole lies {gap:e} from {pole}"
        )));
    }
    circle_residue(|x| eval_f_n(x, p), pole, radius, points)
}

/// The rhombus `1/v → i → −1/v → −i → 1/v` and the quadrature settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub vertices: [Complex; 4],
    /// Gauss–Legendre order on every panel.
    pub points_per_edge: usize,
    /// Maximum bisection depth per panel.
    pub refinement_depth: usize,
    /// Target absolute error per edge, relative to the edge's magnitude.
    pub tolerance: f64,
}

impl ContourSpec {
    pub fn new(
        v: f64,
        points_per_edge: usize,
        refinement_depth: usize,
        tolerance: f64,
    ) -> Result<Self> {
        if !(v > 0.0) || points_per_edge < 2 || !(tolerance > 0.0) {
            return Err(Error::Domain(
                "contour needs v > 0, at least 2 nodes and a positive tolerance".into(),
            ));
        }
        Ok(Self {
            vertices: [
                Complex::new(1.0 / v, 0.0),
                Complex::new(0.0, 1.0),
                Complex::new(-1.0 / v, 0.0),
                Complex::new(0.0, -1.0),
            ],
            points_per_edge,
            refinement_depth,
            tolerance,
        })
    }

    pub fn for_params(p: &VerifierParams) -> Self {
        Self::new(p.v(), 20, 40, 1e-12).expect("v > 0 by construction")
    }

    pub fn edge(&self, index: usize) -> (Complex, Complex) {
        (self.vertices[index % 4], self.vertices[(index + 1) % 4])
    }
}

fn distance_to_segment(x: Complex, a: Complex, b: Complex) -> f64 {
    let d = b - a;
    let t = ((x - a) * d.conj()).re / d.norm_sqr();
    (x - (a + d * t.clamp(0.0, 1.0))).norm()
}

fn check_path(p: &VerifierParams, spec: &ContourSpec) -> Result<()> {
    let n_big = p.big_n();
    let reach = p.m() as i64 + 2;
    let mut poles = vec![Complex::new(0.0, 0.0)];
    for n in (-reach..=reach).filter(|&n| n != 0) {
        poles.push(Complex::new(0.0, n as f64 / n_big));
        poles.push(Complex::new(n as f64 / (n_big * p.v()), 0.0));
    }
    for e in 0..4 {
        let (a, b) = spec.edge(e);
        for &pole in &poles {
            let d = distance_to_segment(pole, a, b);
            if d < PATH_GUARD {
                return Err(Error::Geometry(format!(
                    "pole {pole} lies {d:e} from edge {e}"
                )));
            }
        }
    }
    Ok(())
}

struct Panel<'a, F> {
    rule: &'a GaussLegendre,
    f: &'a F,
    a: Complex,
    d: Complex,
}

impl<F: Fn(Complex) -> Result<Complex>> Panel<'_, F> {
    /// `∫ f(a + t·d)·d dt` over `[t0, t1]`.
    fn gl(&self, t0: f64, t1: f64) -> Result<Complex> {
        let (mid, half) = (0.5 * (t0 + t1), 0.5 * (t1 - t0));
        let mut sum = Complex::new(0.0, 0.0);
        for &(node, weight) in self.rule.as_node_weight_pairs() {
            sum += (self.f)(self.a + self.d * (mid + half * node))? * weight;
        }
        Ok(sum * self.d * half)
    }

    fn adaptive(
        &self,
        t0: f64,
        t1: f64,
        whole: Complex,
        tol: f64,
        depth: usize,
    ) -> Result<Complex> {
        let mid = 0.5 * (t0 + t1);
        let (left, right) = (self.gl(t0, mid)?, self.gl(mid, t1)?);
        let refined = left + right;
        if (refined - whole).norm() <= tol {
            return Ok(refined);
        }
        if depth == 0 {
            return Err(Error::Quadrature(format!(
                "panel [{t0}, {t1}] still off by {:e} at maximum depth",
                (refined - whole).norm()
            )));
        }
        Ok(self.adaptive(t0, mid, left, tol / 2.0, depth - 1)?
            + self.adaptive(mid, t1, right, tol / 2.0, depth - 1)?)
    }
}

/// `∫ f` along the straight segment `a → b`, with panels graded dyadically
/// toward both ends down to `end_scale`.
fn segment_integral<F>(
    f: &F,
    a: Complex,
    b: Complex,
    end_scale: f64,
    spec: &ContourSpec,
    rule: &GaussLegendre,
) -> Result<Complex>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let panel = Panel {
        rule,
        f,
        a,
        d: b - a,
    };
    let mut breaks = vec![0.0, 0.5, 1.0];
    let mut t = 0.25;
    while t > end_scale {
        breaks.push(t);
        breaks.push(1.0 - t);
        t /= 2.0;
    }
    breaks.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));

    let coarse: Vec<Complex> = breaks
        .windows(2)
        .map(|w| panel.gl(w[0], w[1]))
        .collect::<Result<_>>()?;
    let scale = coarse.iter().map(|c| c.norm()).sum::<f64>().max(1.0);
    let mut total = Complex::new(0.0, 0.0);
    for (w, whole) in breaks.windows(2).zip(coarse) {
        let tol = spec.tolerance * scale * (w[1] - w[0]);
        total += panel.adaptive(w[0], w[1], whole, tol, spec.refinement_depth)?;
    }
    Ok(total)
}

/// `∮_C F_N dx`, counterclockwise.
pub fn contour_integral(p: &VerifierParams, spec: &ContourSpec) -> Result<Complex> {
    check_path(p, spec)?;
    let order = NonZeroUsize::new(spec.points_per_edge).expect("checked in ContourSpec::new");
    let rule = GaussLegendre::new(order);
    let f = |x: Complex| eval_f_n(x, p);
    // Poles crowd the vertices at spacing ~1/(2N).
    let end_scale = 1.0 / (8.0 * p.big_n());
    (0..4).try_fold(Complex::new(0.0, 0.0), |acc, e| {
        let (a, b) = spec.edge(e);
        Ok(acc + segment_integral(&f, a, b, end_scale, spec, &rule)?)
    })
}

/// `x·F_N(x)` at parameter `t` along edge `edge_index`.
pub fn edge_limit_probe(p: &VerifierParams, edge_index: usize, t: f64) -> Result<Complex> {
    if edge_index > 3 || !(0.1 < t && t < 0.9) {
        return Err(Error::Domain(format!(
            "probe needs edge in 0..=3 and 0.1 < t < 0.9, got {edge_index}, {t}"
        )));
    }
    let spec = ContourSpec::for_params(p);
    let (a, b) = spec.edge(edge_index);
    let x = a + (b - a) * t;
    Ok(x * eval_f_n(x, p)?)
}

/// `∮ F_N` against `2πi·Σ` oracle residues inside the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureReport {
    pub integral: Complex,
    pub residue_sum: Complex,
    /// `|integral − 2πi·residue_sum|`.
    pub residual: f64,
}

pub fn residue_closure(p: &VerifierParams, spec: &ContourSpec) -> Result<ClosureReport> {
    let integral = contour_integral(p, spec)?;
    let zero = Complex::new(0.0, 0.0);
    let mut residue_sum = numeric_residue(zero, p, default_radius(zero, p), ORACLE_POINTS)?;
    for (_, _, pole) in p.interior_simple_poles() {
        residue_sum += numeric_residue(pole, p, default_radius(pole, p), ORACLE_POINTS)?;
    }
    Ok(ClosureReport {
        integral,
        residue_sum,
        residual: (integral - 2.0 * PI * Complex::i() * residue_sum).norm(),
    })
}
