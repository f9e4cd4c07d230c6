//! The contour integral of F_N tends to −log v as m grows, inside the strip
//! −v < Im z < 0 where F_N stays bounded on the contour.

use jacobi_theta::residue::{
    contour_integral, edge_limit_probe, residue_closure, ContourSpec, VerifierParams,
};
use jacobi_theta::Complex;

fn params(z: Complex, m: u32) -> VerifierParams {
    VerifierParams::new(0, 1, 0, 2.0, z, m).unwrap()
}

#[test]
fn gap_shrinks_below_the_real_axis() {
    let z = Complex::new(0.2, -0.1);
    let gaps: Vec<f64> = [10, 20, 40]
        .into_iter()
        .map(|m| {
            let p = params(z, m);
            (contour_integral(&p, &ContourSpec::for_params(&p)).unwrap() + 2.0f64.ln()).norm()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[2] < 1e-6, "{gaps:?}");
}

#[test]
fn edge_values_tend_to_quarter() {
    let p = params(Complex::new(0.2, -0.1), 40);
    for (edge, limit) in [-0.25, 0.25, -0.25, 0.25].into_iter().enumerate() {
        let probe = edge_limit_probe(&p, edge, 0.5).unwrap();
        assert!((probe - limit).norm() < 0.05, "edge {edge}: {probe}");
    }
}

#[test]
fn closure_holds_on_both_sides() {
    for z in [Complex::new(0.2, -0.1), Complex::new(0.2, 0.1)] {
        for m in [5, 20] {
            let p = params(z, m);
            let r = residue_closure(&p, &ContourSpec::for_params(&p)).unwrap();
            assert!(
                r.residual < 1e-9 * r.integral.norm().max(1.0),
                "z={z} m={m}: {}",
                r.residual
            );
        }
    }
}

#[test]
fn gap_grows_above_the_real_axis() {
    let z = Complex::new(0.2, 0.1);
    let gap = |m| {
        let p = params(z, m);
        (contour_integral(&p, &ContourSpec::for_params(&p)).unwrap() + 2.0f64.ln()).norm()
    };
    assert!(gap(20) > gap(10));
}
