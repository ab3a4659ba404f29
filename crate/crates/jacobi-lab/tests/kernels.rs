use std::f64::consts::PI;

use jacobi_lab::bases::{BasisFamily, JacobiParams};
use jacobi_lab::error::Error;
use jacobi_lab::kernels::*;
use jacobi_lab::quadrature::{gauss_mu_rule, mu_total};
use jacobi_lab::specfun::Tolerance;
use proptest::prelude::*;

fn p(a: f64, b: f64) -> JacobiParams {
    JacobiParams::new(a, b).unwrap()
}

fn spec_r(family: BasisFamily, q: JacobiParams, r: f64) -> KernelSpec {
    KernelSpec::new(family, vec![q], KernelVariable::R(r)).unwrap()
}

fn spec_t(family: BasisFamily, q: JacobiParams, t: f64) -> KernelSpec {
    KernelSpec::new(family, vec![q], KernelVariable::T(t)).unwrap()
}

fn classical_poisson(r: f64, x: f64) -> f64 {
    (1.0 - r * r) / (1.0 - 2.0 * r * x.cos() + r * r)
}

fn r_grid() -> Vec<f64> {
    (3..=12).map(|j| 1.0 - 2f64.powi(-j)).collect()
}

/// Uniform grid on [0,π] plus points geometrically close to both ends.
fn theta_grid(with_ends: bool) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=64).map(|i| i as f64 * PI / 64.0).collect();
    for i in 7..=16 {
        let x = PI * 2f64.powi(-i);
        g.push(x);
        g.push(PI - x);
    }
    if !with_ends {
        g.retain(|t| *t > 0.0 && *t < PI);
    }
    g
}

const PARAMS: [(f64, f64); 4] = [(0.0, 0.0), (0.5, 0.0), (1.5, -0.3), (-0.7, -0.9)];

#[test]
fn small_r_leaves_only_the_constant_term() {
    for &(a, b) in &PARAMS {
        let q = p(a, b);
        let v = r_kernel(&spec_r(BasisFamily::TrigPolynomial, q, 1e-13), &[0.4], &[2.2]).unwrap();
        assert!((v - 1.0 / mu_total(q)).abs() < 1e-11 / mu_total(q), "{q}: {v}");
    }
}

#[test]
fn chebyshev_closed_form() {
    let q = p(-0.5, -0.5);
    for r in [0.1, 0.5, 0.9, 0.99] {
        let spec = spec_r(BasisFamily::TrigPolynomial, q, r);
        for i in 0..=12 {
            for j in 0..=12 {
                let (th, ph) = (i as f64 * PI / 12.0, j as f64 * PI / 12.0);
                let got = r_kernel(&spec, &[th], &[ph]).unwrap();
                let want = (classical_poisson(r, th - ph) + classical_poisson(r, th + ph)) / (2.0 * PI);
                assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "r={r} ({th},{ph}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn r_kernel_and_poisson_kernel_agree() {
    for &(a, b) in &PARAMS[..3] {
        let q = p(a, b);
        for r in [0.2, 0.6, 0.9] {
            let t = -f64::ln(r);
            for &(th, ph) in &[(0.3, 0.5), (1.0, 2.5), (3.0, 0.1), (1.7, 1.7)] {
                let lhs = r_kernel(&spec_r(BasisFamily::TrigPolynomial, q, r), &[th], &[ph]).unwrap();
                let rhs = r.powf(-q.eta()) * poisson_kernel(&spec_t(BasisFamily::TrigPolynomial, q, t), &[th], &[ph]).unwrap();
                assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0), "{q} r={r}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn poisson_kernels_are_positive() {
    for &(a, b) in &[(0.0, 0.0), (1.5, -0.3)] {
        let q = p(a, b);
        for t in [0.01, 0.05, 0.2, 1.0, 3.0] {
            for i in 0..=16 {
                for j in 0..=16 {
                    let (th, ph) = (i as f64 * PI / 16.0, j as f64 * PI / 16.0);
                    let v = poisson_1d(q, t, th, ph).unwrap();
                    assert!(v > 0.0, "{q} t={t} ({th},{ph}): {v}");
                }
            }
        }
    }
}

#[test]
fn function_kernel_is_the_weighted_polynomial_kernel() {
    for &(a, b) in &PARAMS[..3] {
        let q = p(a, b);
        for t in [0.05, 0.5, 2.0] {
            for &(th, ph) in &[(0.2, 0.9), (1.5, 2.9), (2.0, 2.0), (0.01, 3.1)] {
                let hh = poisson_kernel(&spec_t(BasisFamily::TrigFunction, q, t), &[th], &[ph]).unwrap();
                let h = poisson_1d(q, t, th, ph).unwrap();
                let want = q.half_density(th) * q.half_density(ph) * h;
                assert!((hh - want).abs() < 1e-10 * want.abs().max(1e-3), "{q} t={t}: {hh} vs {want}");
            }
        }
    }
}

#[test]
fn semigroup_law() {
    let tol = Tolerance::default().with_rel(1e-11);
    for &(a, b) in &[(0.0, 0.0), (1.5, -0.3)] {
        let q = p(a, b);
        let rule = gauss_mu_rule(200, q).unwrap();
        for &(t, s) in &[(0.5, 0.5), (0.3, 1.0), (1.0, 2.0)] {
            for &(th, ph) in &[(0.4, 1.1), (2.0, 2.8), (1.3, 1.3)] {
                let direct = poisson_1d(q, t + s, th, ph).unwrap();
                let brute = rule.integrate(|psi| poisson_1d(q, t, th, psi).unwrap() * poisson_1d(q, s, psi, ph).unwrap());
                assert!((brute - direct).abs() < 1e-8 * direct, "{q} t={t} s={s}: {brute} vs {direct}");
                let defect = semigroup_defect(q, t, s, th, ph, tol).unwrap();
                assert!(defect.abs() < 1e-8 * direct, "{q} defect {defect}");
            }
        }
    }
}

#[test]
fn kernel_mass_decays_exponentially() {
    let tol = Tolerance::default().with_rel(1e-11);
    for &(a, b) in &PARAMS[..3] {
        let q = p(a, b);
        for t in [0.1, 0.5, 1.0] {
            for th in [0.3, 1.6, 2.9] {
                let m = kernel_mass(q, t, th, tol).unwrap();
                let want = (-t * q.eta()).exp();
                assert!((m - want).abs() < 1e-8, "{q} t={t} θ={th}: {m} vs {want}");
            }
        }
    }
}

#[test]
fn product_kernel_in_two_dimensions() {
    let (q1, q2) = (p(0.5, 0.0), p(-0.3, 1.0));
    let spec = KernelSpec::new(BasisFamily::TrigPolynomial, vec![q1, q2], KernelVariable::T(0.4)).unwrap();
    let v = poisson_kernel(&spec, &[0.5, 2.0], &[1.0, 2.5]).unwrap();
    let want = poisson_1d(q1, 0.4, 0.5, 1.0).unwrap() * poisson_1d(q2, 0.4, 2.0, 2.5).unwrap();
    assert!((v - want).abs() < 1e-12 * want.abs());
    assert!(matches!(poisson_kernel(&spec, &[0.5], &[1.0]), Err(Error::Contract(_))));
}

#[test]
fn symmetric_family_kernels() {
    // the even part of the symmetrized kernel is half the polynomial kernel at |θ|, |φ|
    let q = p(0.5, -0.2);
    let r = 0.7;
    let s = spec_r(BasisFamily::SymTrigPolynomial, q, r);
    let plus = r_kernel(&s, &[0.8], &[1.9]).unwrap();
    let minus = r_kernel(&s, &[-0.8], &[1.9]).unwrap();
    let even = 0.5 * (plus + minus);
    let want = 0.5 * r_kernel(&spec_r(BasisFamily::TrigPolynomial, q, r * r), &[0.8], &[1.9]).unwrap();
    assert!((even - want).abs() < 1e-12 * want.abs(), "{even} vs {want}");
    assert!((plus - minus).abs() > 1e-6);
}

#[test]
fn ratio_sweep_is_bounded() {
    let ts: Vec<f64> = (0..10).map(|i| 2f64.powf(-7.0 * i as f64 / 9.0)).collect();
    let grid: Vec<f64> = (0..16).map(|i| (i as f64 + 0.5) * PI / 16.0).collect();
    for &(a, b) in &[(0.0, 0.0), (-0.7, -0.9)] {
        let sweep = kernel_ratio_sweep(p(a, b), 0, &ts, &grid, &grid).unwrap();
        assert_eq!(sweep.points, 10 * 16 * 16);
        assert!(sweep.c <= 50.0, "({a},{b}) C = {}", sweep.c);
    }
}

#[test]
fn ratio_near_the_diagonal_and_first_derivative() {
    let q = p(0.0, 0.0);
    for d in [1e-2, 1e-4, 1e-8] {
        let v = kernel_estimate_ratio(q, 0, 0.1, 1.0, 1.0 + d).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }
    let v = kernel_estimate_ratio(q, 1, 0.2, 1.0, 1.5).unwrap();
    assert!(v.is_finite() && v > 0.0);
    assert!(kernel_estimate_ratio(q, 0, 1.5, 1.0, 1.0).is_err());
    assert!(kernel_estimate_ratio(q, 0, 0.5, 0.0, 1.0).is_err());
}

fn assert_slope(fit: &jacobi_lab::fit::GrowthFit, want: f64, tol: f64, label: &str) {
    assert!((fit.slope - want).abs() <= tol, "{label}: slope {} (want {want} ± {tol})", fit.slope);
}

#[test]
fn polynomial_l2_profiles() {
    for &(a, b) in &[(0.5, 0.0), (-0.7, -0.9), (0.0, 0.0)] {
        let q = p(a, b);
        let fit = kernel_l2_profile(BasisFamily::TrigPolynomial, q, &r_grid(), &theta_grid(true), false).unwrap();
        assert_slope(&fit, 1.0 + q.max_exponent(), 0.1, &format!("P {q}"));
    }
    let q = p(0.5, 0.0);
    let fit = kernel_l2_profile(BasisFamily::TrigPolynomial, q, &r_grid(), &theta_grid(true), true).unwrap();
    assert_slope(&fit, 2.0 + q.max_exponent(), 0.1, "P' (0.5,0)");
}

#[test]
fn function_l2_profiles() {
    for &(a, b) in &[(0.0, 0.0), (1.5, -0.3)] {
        let fit = kernel_l2_profile(BasisFamily::TrigFunction, p(a, b), &r_grid(), &theta_grid(false), false).unwrap();
        assert_slope(&fit, 0.5, 0.1, &format!("phi ({a},{b})"));
    }
    let interior: Vec<f64> = (1..16).map(|i| i as f64 * PI / 16.0).collect();
    let fit = kernel_l2_profile(BasisFamily::TrigFunction, p(0.0, 0.0), &r_grid(), &interior, true).unwrap();
    assert_slope(&fit, 1.5, 0.1, "phi' interior");
}

#[test]
fn q_family_l2_profiles() {
    for &(a, b) in &[(0.0, 0.0), (0.5, 0.0), (1.5, -0.3)] {
        let q = p(a, b);
        let fit = kernel_l2_profile(BasisFamily::QPolynomial, q, &r_grid(), &theta_grid(true), false).unwrap();
        assert_slope(&fit, 1.0 + q.max_exponent(), 0.1, &format!("Q {q}"));
    }
}

#[test]
fn profile_points_are_written_as_csv() {
    let fit = kernel_l2_profile(BasisFamily::TrigPolynomial, p(0.0, 0.0), &r_grid()[..4], &[0.0, 1.0], false).unwrap();
    let csv = fit.to_csv();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("x,y\n"));
    let json = serde_json::to_string(&fit).unwrap();
    let back: jacobi_lab::fit::GrowthFit = serde_json::from_str(&json).unwrap();
    assert_eq!(back, fit);
}

#[test]
fn norm_difference_exponents() {
    for &(a, b, th) in &[(1.0, 1.0, 1.0), (1.0, 1.0, 0.01), (-0.25, 0.0, 1.0), (-0.25, 0.0, 0.01)] {
        let fit = norm_difference_profile(p(a, b), th, th + 1e-3, &r_grid()).unwrap();
        assert!(fit.slope <= 1.6, "({a},{b}) θ={th}: {}", fit.slope);
        assert!(fit.slope > 0.0);
    }
    assert_eq!(norm_difference(p(1.0, 1.0), 0.9, 0.7, 0.7).unwrap(), 0.0);
    assert!(norm_difference_profile(p(1.0, 1.0), 0.7, 0.7, &r_grid()).is_err());
}

#[test]
fn derivative_profiles_need_a_supported_family() {
    let r = kernel_l2_norm_sq(BasisFamily::QPolynomial, p(0.0, 0.0), 0.5, 1.0, true);
    assert!(matches!(r, Err(Error::InvalidParams(_))));
    assert!(kernel_l2_norm_sq(BasisFamily::TrigPolynomial, p(0.0, 0.0), 1.0, 1.0, false).is_err());
}

#[test]
fn truncation_budget_is_reported() {
    let spec = spec_r(BasisFamily::TrigPolynomial, p(2.0, 2.0), 0.9999).with_truncation(Tolerance::default().with_rel(1e-14).with_max_terms(100));
    assert!(matches!(r_kernel(&spec, &[0.0], &[0.0]), Err(Error::Truncation { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn r_kernel_is_symmetric(a in -0.9f64..2.0, b in -0.9f64..2.0, r in 0.05f64..0.95, th in 0.0f64..PI, ph in 0.0f64..PI) {
        let spec = spec_r(BasisFamily::TrigPolynomial, p(a, b), r);
        let x = r_kernel(&spec, &[th], &[ph]).unwrap();
        let y = r_kernel(&spec, &[ph], &[th]).unwrap();
        prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn poisson_kernel_positive(t in 0.05f64..2.0, th in 0.0f64..PI, ph in 0.0f64..PI) {
        for q in [p(0.0, 0.0), p(1.5, -0.3)] {
            prop_assert!(poisson_1d(q, t, th, ph).unwrap() > 0.0);
        }
    }
}
