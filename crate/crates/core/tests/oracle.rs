//! Recursion values against brute-force Brillouin-zone quadrature.

use trigreen::quadrature::green_integral_batch;
use trigreen::{
    build_table, green_integral, Complex64, GuessSpec, IntegralForm, LatticeIndex, QuadratureRule,
    QuadratureSpec, Wavenumber,
};

fn near_points() -> Vec<LatticeIndex> {
    [(0, 0), (1, 0), (2, 0), (1, 1), (3, 0), (2, 1)]
        .into_iter()
        .map(LatticeIndex::from)
        .collect()
}

#[test]
fn integrand_symmetries() {
    let k2 = Complex64::new(2.25, 0.0);
    for rule in [
        QuadratureRule::Trapezoid,
        QuadratureRule::Simpson,
        QuadratureRule::GaussLegendre,
    ] {
        let spec = QuadratureSpec::new(rule, 401, 1e-2).unwrap();
        let a = green_integral(LatticeIndex::new(1, 0), k2, &spec).value;
        let b = green_integral(LatticeIndex::new(0, 1), k2, &spec).value;
        assert!((a - b).norm() < 1e-10, "{rule}");
    }
    // The shear symmetry maps the uniform periodic grid onto itself.
    let spec = QuadratureSpec::new(QuadratureRule::Trapezoid, 401, 1e-2).unwrap();
    let a = green_integral(LatticeIndex::new(1, 1), k2, &spec).value;
    let b = green_integral(LatticeIndex::new(2, -1), k2, &spec).value;
    assert!((a - b).norm() < 1e-8, "{a} {b}");
}

#[test]
fn engine_matches_trapezoid_quadrature() {
    let spec = QuadratureSpec::new(QuadratureRule::Trapezoid, 2001, 1e-2).unwrap();
    for k in [1.0, 1.5, 2.5] {
        let w = Wavenumber::new(k, 1e-2).unwrap();
        let table = build_table(&w, 283, 3, &GuessSpec::Shift).unwrap();
        let xs = near_points();
        let oracle =
            green_integral_batch(&xs, Complex64::new(k * k, 0.0), &spec, IntegralForm::Sigma);
        for (x, o) in xs.iter().zip(oracle) {
            let e = table.green(*x).unwrap();
            let rel = (o.value - e).norm() / e.norm();
            assert!(rel < 1e-3, "k={k} x={x}: rel {rel:e}");
        }
    }
}

#[test]
fn rules_agree_within_their_estimates() {
    let xs = near_points();
    let k2 = Complex64::new(2.25, 0.0);
    let results: Vec<_> = [
        QuadratureRule::Trapezoid,
        QuadratureRule::Simpson,
        QuadratureRule::GaussLegendre,
    ]
    .into_iter()
    .map(|r| {
        green_integral_batch(
            &xs,
            k2,
            &QuadratureSpec::new(r, 4001, 1e-2).unwrap(),
            IntegralForm::Sigma,
        )
    })
    .collect();
    for i in 0..3 {
        for j in i + 1..3 {
            for (a, b) in results[i].iter().zip(&results[j]) {
                let d = (a.value - b.value).norm();
                assert!(
                    d <= a.error_estimate + b.error_estimate,
                    "{d:e} vs {:e}+{:e}",
                    a.error_estimate,
                    b.error_estimate
                );
            }
        }
    }
}

#[test]
fn rotated_form_agrees() {
    let xs = near_points();
    let k2 = Complex64::new(2.25, 0.0);
    let spec = QuadratureSpec::new(QuadratureRule::GaussLegendre, 1200, 1e-2).unwrap();
    let a = green_integral_batch(&xs, k2, &spec, IntegralForm::Sigma);
    let b = green_integral_batch(&xs, k2, &spec, IntegralForm::Rotated);
    for (p, q) in a.iter().zip(&b) {
        assert!(
            (p.value - q.value).norm() < 2.0 * (p.error_estimate + q.error_estimate),
            "{p:?} {q:?}"
        );
    }
}

#[test]
fn coarse_mesh_error_grows_with_distance() {
    let spec = QuadratureSpec::new(QuadratureRule::Trapezoid, 801, 1e-2).unwrap();
    let xs: Vec<LatticeIndex> = [0, 6, 20]
        .into_iter()
        .map(|n| LatticeIndex::new(n, 0))
        .collect();
    let r = green_integral_batch(&xs, Complex64::new(2.25, 0.0), &spec, IntegralForm::Sigma);
    let rel: Vec<f64> = r
        .iter()
        .map(|o| o.error_estimate / o.value.norm())
        .collect();
    assert!(rel[0] < rel[1] && rel[1] < rel[2], "{rel:?}");
    // A mesh this coarse is useless beyond the first few shells.
    let coarse = QuadratureSpec::new(QuadratureRule::Trapezoid, 101, 1e-2).unwrap();
    let o = green_integral(LatticeIndex::new(6, 0), Complex64::new(2.25, 0.0), &coarse);
    assert!(o.error_estimate > 0.1 * o.value.norm());
}
