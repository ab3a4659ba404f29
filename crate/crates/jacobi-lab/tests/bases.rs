use std::f64::consts::{FRAC_1_SQRT_2, PI};

use jacobi_lab::bases::*;
use proptest::prelude::*;

fn p(a: f64, b: f64) -> JacobiParams {
    JacobiParams::new(a, b).unwrap()
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) * PI / n as f64).collect()
}

/// P_2^{α,β}(x) obtained by expanding Rodrigues' formula twice.
fn p2_closed(a: f64, b: f64, x: f64) -> f64 {
    let y = x - 1.0;
    (a + 1.0) * (a + 2.0) / 2.0 + (a + 2.0) * (a + b + 3.0) * y / 2.0 + (a + b + 3.0) * (a + b + 4.0) * y * y / 8.0
}

#[test]
fn normalizing_constant_examples() {
    assert!((normalizing_const(0, p(0.0, 0.0)) - 1.0).abs() < 1e-14);
    assert!((normalizing_const(0, p(-0.5, -0.5)) - PI.powf(-0.5)).abs() < 1e-14);
    // c_k² = 2k+1 for Legendre (α = β = 0)
    for k in [1usize, 5, 40] {
        assert!((normalizing_const(k, p(0.0, 0.0)) - ((2 * k + 1) as f64).sqrt()).abs() < 1e-11);
    }
    let q = p(0.5, -0.3);
    let (mut lo, mut hi) = (f64::MAX, 0.0f64);
    for k in 0..=10_000 {
        let r = normalizing_const(k, q) / ((k + 1) as f64).sqrt();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    assert!(lo > 0.25 && hi < 4.0, "range [{lo}, {hi}]");
    // no overflow far out
    assert!(normalizing_const(1_000_000, q).is_finite());
}

#[test]
fn jacobi_poly_low_degrees() {
    for &(a, b) in &[(0.0, 0.0), (0.5, -0.3), (-0.7, -0.9), (2.0, 1.5)] {
        let q = p(a, b);
        for i in 0..=20 {
            let x = -1.0 + 0.1 * i as f64;
            assert_eq!(jacobi_poly(0, q, x).unwrap(), 1.0);
            let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
            assert!((jacobi_poly(1, q, x).unwrap() - p1).abs() < 1e-14);
            assert!((jacobi_poly(2, q, x).unwrap() - p2_closed(a, b, x)).abs() < 1e-12);
        }
    }
}

#[test]
fn chebyshev_case_is_cosine() {
    let q = p(-0.5, -0.5);
    // cosine recurrence as an independent oracle: cos((k+1)t) = 2cos t cos kt − cos((k−1)t)
    for &t in &[0.3, 1.1, 2.9] {
        let (mut c0, mut c1) = (1.0f64, f64::cos(t));
        let ratio1 = jacobi_poly(1, q, t.cos()).unwrap() / c1;
        for k in 2..30 {
            let c2 = 2.0 * t.cos() * c1 - c0;
            c0 = c1;
            c1 = c2;
            let r = jacobi_poly(k, q, t.cos()).unwrap() / c1;
            // the ratio depends on k only
            let r_other = jacobi_poly(k, q, 0.77f64.cos()).unwrap() / (k as f64 * 0.77).cos();
            assert!((r - r_other).abs() < 1e-10 * r.abs(), "k={k}");
        }
        assert!(ratio1 > 0.0);
    }
    let mut vals = vec![0.0; 513];
    for t in grid(512) {
        trig_poly_all(q, t, &mut vals).unwrap();
        for k in 1..=512 {
            let want = (2.0 / PI).sqrt() * (k as f64 * t).cos();
            assert!((vals[k] - want).abs() < 1e-10, "k={k} t={t}");
        }
        assert!((trig_poly(0, p(0.0, 0.0), t).unwrap() - 1.0).abs() < 1e-14);
    }
}

fn sup_ratio(q: JacobiParams, kmax: usize, exponent: f64, deriv: bool) -> (f64, f64) {
    let mut vals = vec![0.0; kmax + 1];
    let mut sup = vec![0.0f64; kmax + 1];
    for t in grid(512) {
        if deriv {
            trig_poly_deriv_all(q, t, &mut vals).unwrap();
        } else {
            trig_poly_all(q, t, &mut vals).unwrap();
        }
        for k in 0..=kmax {
            sup[k] = sup[k].max(vals[k].abs());
        }
    }
    let r: Vec<f64> = (0..=kmax).map(|k| sup[k] / ((k + 1) as f64).powf(exponent)).collect();
    (r.iter().cloned().fold(f64::MAX, f64::min), r.iter().cloned().fold(0.0, f64::max))
}

#[test]
fn polynomial_envelopes() {
    for &(a, b) in &[(0.5, 0.0), (1.5, -0.3), (-0.7, -0.9)] {
        let q = p(a, b);
        let m = q.max_exponent();
        let (_, hi) = sup_ratio(q, 2048, m + 0.5, false);
        assert!(hi < 10.0, "{q}: {hi}");
        let (_, hi) = sup_ratio(q, 2048, m + 1.5, true);
        assert!(hi < 10.0, "{q}: deriv {hi}");
    }
}

#[test]
fn function_and_q_envelopes() {
    let mut vals = vec![0.0; 2049];
    for &(a, b) in &[(0.0, 0.0), (1.5, -0.3), (-0.5, 0.5)] {
        let q = p(a, b);
        let mut sup_f = 0.0f64;
        let mut sup_q = vec![0.0f64; 2049];
        for t in grid(512) {
            family_all(BasisFamily::TrigFunction, q, t, &mut vals).unwrap();
            sup_f = vals.iter().fold(sup_f, |m, v| m.max(v.abs()));
            family_all(BasisFamily::QPolynomial, q, t, &mut vals).unwrap();
            for k in 0..=2048 {
                sup_q[k] = sup_q[k].max(vals[k].abs());
            }
        }
        assert!(sup_f < 3.0, "{q}: {sup_f}");
        let e = 0.5 + q.max_exponent();
        let hi = (0..=2048).map(|k| sup_q[k] / ((k + 1) as f64).powf(e)).fold(0.0, f64::max);
        assert!(hi < 10.0, "{q}: Q {hi}");
    }
}

#[test]
fn derivative_matches_finite_difference() {
    let h = 1e-5;
    for &(a, b) in &[(0.0, 0.0), (1.5, -0.3), (-0.7, -0.9)] {
        let q = p(a, b);
        assert_eq!(trig_poly_deriv(0, q, 1.0).unwrap(), 0.0);
        for k in [1usize, 4, 17] {
            for &t in &[0.4, 1.3, 2.6] {
                let fd = (trig_poly(k, q, t + h).unwrap() - trig_poly(k, q, t - h).unwrap()) / (2.0 * h);
                let an = trig_poly_deriv(k, q, t).unwrap();
                let scale = ((k + 1) as f64).powi(3);
                assert!((fd - an).abs() < 1e-6 * scale, "k={k} t={t}: {fd} vs {an}");
            }
        }
    }
}

#[test]
fn function_family_examples() {
    let ch = p(-0.5, -0.5);
    let half = p(0.5, 0.5);
    for t in grid(40) {
        for k in 0..10 {
            assert!((trig_fun(k, ch, t).unwrap() - trig_poly(k, ch, t).unwrap()).abs() < 1e-14);
        }
        assert!((trig_fun(0, half, t).unwrap() - (2.0 / PI).sqrt() * t.sin()).abs() < 1e-14);
        assert!((sym_trig_fun(0, ch, t).unwrap() - FRAC_1_SQRT_2 / PI.sqrt()).abs() < 1e-14);
    }
    assert!((normalizing_const(0, half) - (8.0 / PI).sqrt()).abs() < 1e-14);
}

#[test]
fn q_family_at_half_pi() {
    let q = p(1.5, -0.3);
    for k in 0..20 {
        let want = 0.5 * trig_poly(k, q.shifted(), PI / 2.0).unwrap();
        assert!((q_poly(k, q, PI / 2.0).unwrap() - want).abs() < 1e-14);
    }
}

#[test]
fn symmetrized_odd_is_signed_q() {
    let q = p(0.3, -0.2);
    for &t in &[-2.5f64, -0.7, 0.4, 3.0] {
        for m in 0..8 {
            let want = t.signum() * FRAC_1_SQRT_2 * q_poly(m, q, t.abs()).unwrap();
            assert!((sym_trig_poly(2 * m + 1, q, t).unwrap() - want).abs() < 1e-14);
        }
    }
    assert_eq!(sym_trig_fun(3, q.shifted(), 0.0).unwrap(), 0.0);
}

#[test]
fn eigenvalue_examples() {
    for k in 0..10 {
        assert_eq!(eigenvalue(k, p(-0.5, -0.5)), (k * k) as f64);
    }
    assert_eq!(eigenvalue(0, p(0.0, 0.0)), 0.25);
    assert_eq!(eigenvalue(3, p(1.0, 2.0)), 25.0);
}

#[test]
fn operators_have_eigenfunctions() {
    for &(a, b) in &[(0.0, 0.0), (1.5, -0.3), (0.5, 0.5)] {
        let q = p(a, b);
        for k in [0usize, 1, 3, 8] {
            for &t in &[0.6, 1.5, 2.4] {
                let lam = eigenvalue(k, q);
                let j = operator_apply_fd(JacobiOperator::Function, k, q, t, 1e-4).unwrap();
                let want = lam * trig_fun(k, q, t).unwrap();
                assert!((j - want).abs() <= 1e-4 * want.abs().max(lam), "J k={k} t={t}: {j} vs {want}");
                let j = operator_apply_fd(JacobiOperator::Polynomial, k, q, t, 1e-4).unwrap();
                let want = lam * trig_poly(k, q, t).unwrap();
                assert!((j - want).abs() <= 1e-4 * want.abs().max(lam), "P k={k} t={t}: {j} vs {want}");
            }
        }
    }
    let v = operator_apply_fd(JacobiOperator::Polynomial, 0, p(0.0, 0.0), 1.0, 1e-4).unwrap();
    assert!((v - 0.25).abs() < 1e-12);
}

#[test]
fn tensor_examples() {
    let spec = BasisSpec::new(BasisFamily::TrigPolynomial, vec![p(0.0, 0.0); 2]).unwrap();
    assert!((tensor_eval(&spec, &MultiIndex(vec![0, 0]), &[0.3, 2.0]).unwrap() - 1.0).abs() < 1e-14);
    assert!(tensor_eval(&spec, &MultiIndex(vec![0, 0, 1]), &[0.3, 2.0]).is_err());
    let ch = BasisSpec::new(BasisFamily::TrigFunction, vec![p(-0.5, -0.5); 2]).unwrap();
    for &(n1, n2) in &[(1usize, 1usize), (2, 5), (7, 3)] {
        for &(t1, t2) in &[(0.2, 0.9), (2.2, 1.4)] {
            let want = 2.0 / PI * (n1 as f64 * t1).cos() * (n2 as f64 * t2).cos();
            let got = tensor_eval(&ch, &MultiIndex(vec![n1, n2]), &[t1, t2]).unwrap();
            assert!((got - want).abs() < 1e-13);
        }
    }
}

#[test]
fn absolute_symmetry_and_signed_observation() {
    for &(a, b) in &[(0.5, -0.3), (1.5, 0.2), (-0.7, -0.9)] {
        let q = p(a, b);
        for t in grid(64) {
            for k in 0..30 {
                let l = trig_poly(k, q, t).unwrap();
                let r = trig_poly(k, q.swapped(), PI - t).unwrap();
                assert!((l.abs() - r.abs()).abs() < 1e-10 * (1.0 + l.abs()));
                // the classical identity carries (−1)^k
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((l - sign * r).abs() < 1e-10 * (1.0 + l.abs()));
            }
        }
    }
}

proptest! {
    #[test]
    fn sym_parity(k in 0usize..40, t in 0.01f64..3.1, a in -0.5f64..2.0, b in -0.5f64..2.0) {
        let q = p(a, b);
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        let x = sym_trig_poly(k, q, t).unwrap();
        prop_assert!((x - s * sym_trig_poly(k, q, -t).unwrap()).abs() <= 1e-12 * (1.0 + x.abs()));
        let y = sym_trig_fun(k, q, t).unwrap();
        prop_assert!((y - s * sym_trig_fun(k, q, -t).unwrap()).abs() <= 1e-12 * (1.0 + y.abs()));
    }

    #[test]
    fn tensor_is_product(n1 in 0usize..20, n2 in 0usize..20, n3 in 0usize..20,
                         t1 in 0.0f64..3.1, t2 in 0.0f64..3.1, t3 in 0.0f64..3.1) {
        let ps = vec![p(0.5, 0.0), p(-0.3, 1.2), p(0.0, 0.0)];
        let spec = BasisSpec::new(BasisFamily::QPolynomial, ps.clone()).unwrap();
        let got = tensor_eval(&spec, &MultiIndex(vec![n1, n2, n3]), &[t1, t2, t3]).unwrap();
        let want = q_poly(n1, ps[0], t1).unwrap() * q_poly(n2, ps[1], t2).unwrap() * q_poly(n3, ps[2], t3).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn batch_agrees_with_single(t in 0.0f64..3.1, a in -0.9f64..3.0, b in -0.9f64..3.0) {
        let q = p(a, b);
        let mut out = vec![0.0; 64];
        for fam in BasisFamily::ALL {
            if fam.validate(&q).is_err() { continue; }
            family_all(fam, q, t, &mut out).unwrap();
            for (k, v) in out.iter().enumerate() {
                let s = eval_family(fam, k, q, t).unwrap();
                prop_assert!((v - s).abs() <= 1e-10 * (1.0 + s.abs()), "{:?} k={}", fam, k);
            }
        }
    }

    #[test]
    fn recurrence_holds(k in 2usize..200, x in -1.0f64..1.0, a in -0.9f64..3.0, b in -0.9f64..3.0) {
        let q = p(a, b);
        let n = k as f64;
        let s = 2.0 * n + a + b;
        let lhs = 2.0 * n * (n + a + b) * (s - 2.0) * jacobi_poly(k, q, x).unwrap();
        let rhs = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * jacobi_poly(k - 1, q, x).unwrap()
            - 2.0 * (n + a - 1.0) * (n + b - 1.0) * s * jacobi_poly(k - 2, q, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (lhs.abs() + rhs.abs() + 1.0));
    }
}
