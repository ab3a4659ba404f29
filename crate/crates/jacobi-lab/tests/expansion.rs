use std::f64::consts::{PI, SQRT_2};

use jacobi_lab::atoms::{constant_atom, make_atom_pol_a, PiecewiseConstantAtom};
use jacobi_lab::bases::*;
use jacobi_lab::expansion::*;
use jacobi_lab::quadrature::{mu_total, MeasureTag};
use jacobi_lab::specfun::Tolerance;
use proptest::prelude::*;

fn p(a: f64, b: f64) -> JacobiParams {
    JacobiParams::new(a, b).unwrap()
}

fn sampled(d: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> FunctionDescriptor {
    SampledFunction::new(d, f, Smoothness::Smooth).into()
}

#[test]
fn constant_atom_hits_only_the_zeroth_entry() {
    let q = p(0.5, -0.3);
    let spec = BasisSpec::one_dim(BasisFamily::TrigPolynomial, q).unwrap();
    let atom = constant_atom(vec![MeasureTag::mu(q)]).unwrap();
    let t = coefficients(&atom.into(), &spec, 12, Tolerance::default()).unwrap();
    let total = mu_total(q);
    let want = 1.0 / (total * normalizing_const(0, q));
    assert!((want - total.powf(-0.5)).abs() < 1e-13);
    for (n, v) in &t.entries {
        let w = if n.length() == 0 { want } else { 0.0 };
        assert!((v - w).abs() < 1e-10, "{n}: {v}");
    }
}

#[test]
fn basis_element_gives_unit_vector() {
    for &(a, b) in &[(0.5, -0.3), (-0.7, -0.9), (2.0, 0.0)] {
        let q = p(a, b);
        let spec = BasisSpec::one_dim(BasisFamily::TrigPolynomial, q).unwrap();
        let f = sampled(1, move |t| trig_poly(3, q, t[0]).unwrap());
        let t = coefficients(&f, &spec, 10, Tolerance::default()).unwrap();
        for (n, v) in &t.entries {
            let w = if n.0[0] == 3 { 1.0 } else { 0.0 };
            assert!((v - w).abs() < 1e-8, "{q} {n}: {v}");
        }
    }
    let q = p(0.3, 1.1);
    for fam in BasisFamily::ALL {
        let spec = BasisSpec::one_dim(fam, q).unwrap();
        let f = sampled(1, move |t| eval_family(fam, 4, q, t[0]).unwrap());
        let t = coefficients(&f, &spec, 8, Tolerance::default()).unwrap();
        for (n, v) in &t.entries {
            let w = if n.0[0] == 4 { 1.0 } else { 0.0 };
            assert!((v - w).abs() < 1e-8, "{} {n}: {v}", fam.name());
        }
    }
}

#[test]
fn product_function_gives_outer_product() {
    let (q1, q2) = (p(0.5, 0.0), p(-0.3, 1.2));
    let g = |t: f64| (2.0 * t).cos() + t;
    let h = |t: f64| (t * t).sin();
    let spec1 = BasisSpec::one_dim(BasisFamily::TrigPolynomial, q1).unwrap();
    let spec2 = BasisSpec::one_dim(BasisFamily::TrigPolynomial, q2).unwrap();
    let spec = BasisSpec::new(BasisFamily::TrigPolynomial, vec![q1, q2]).unwrap();
    let tol = Tolerance::default();
    let k = 8;
    let t1 = coefficients(&sampled(1, move |t| g(t[0])), &spec1, k, tol).unwrap();
    let t2 = coefficients(&sampled(1, move |t| h(t[0])), &spec2, k, tol).unwrap();
    let t = coefficients(&sampled(2, move |t| g(t[0]) * h(t[1])), &spec, k, tol).unwrap();
    assert_eq!(t.entries.len(), MultiIndex::up_to(2, k).len());
    for (n, v) in &t.entries {
        let want = t1.get(&MultiIndex::new(vec![n.0[0]])).unwrap() * t2.get(&MultiIndex::new(vec![n.0[1]])).unwrap();
        assert!((v - want).abs() < 1e-9, "{n}: {v} vs {want}");
    }
}

#[test]
fn step_path_matches_sampled_path() {
    let q = p(1.5, -0.3);
    let atom = make_atom_pol_a(16, 0.25, 0.5, q, Tolerance::default()).unwrap();
    let bps = atom.axes[0].breakpoints.clone();
    let a2 = atom.clone();
    let s: FunctionDescriptor = SampledFunction::new(1, move |t| a2.eval(t), Smoothness::Breakpoints(vec![bps])).into();
    for fam in [BasisFamily::TrigPolynomial, BasisFamily::TrigFunction, BasisFamily::QPolynomial] {
        let spec = BasisSpec::one_dim(fam, q).unwrap();
        let exact = coefficients(&atom.clone().into(), &spec, 20, Tolerance::default()).unwrap();
        let num = coefficients(&s, &spec, 20, Tolerance::default()).unwrap();
        let scale = exact.values().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in exact.values().zip(num.values()) {
            assert!((x - y).abs() < 1e-8 * scale, "{}: {x} vs {y}", fam.name());
        }
    }
}

#[test]
fn parseval_on_basis_combinations() {
    let q = p(0.5, -0.3);
    let spec = BasisSpec::one_dim(BasisFamily::TrigPolynomial, q).unwrap();
    let tol = Tolerance::default();
    let f5 = sampled(1, move |t| trig_poly(5, q, t[0]).unwrap());
    assert!(parseval_defect(&f5, &spec, 5, tol).unwrap().abs() < 1e-8);
    assert!(parseval_defect(&f5, &spec, 9, tol).unwrap().abs() < 1e-8);
    let combo = sampled(1, move |t| {
        2.0 * trig_poly(0, q, t[0]).unwrap() - 0.5 * trig_poly(2, q, t[0]).unwrap() + 3.0 * trig_poly(7, q, t[0]).unwrap()
    });
    let norm = norm_squared(&combo, &spec, tol).unwrap();
    assert!((norm - (4.0 + 0.25 + 9.0)).abs() < 1e-8);
    assert!(parseval_defect(&combo, &spec, 7, tol).unwrap().abs() < 1e-8);
    assert!((parseval_defect(&combo, &spec, 6, tol).unwrap() - 9.0).abs() < 1e-8);
}

#[test]
fn parseval_defect_decreases_for_an_atom() {
    let q = p(0.5, 0.0);
    let spec = BasisSpec::one_dim(BasisFamily::TrigPolynomial, q).unwrap();
    let atom: FunctionDescriptor = make_atom_pol_a(8, 0.25, 0.5, q, Tolerance::default()).unwrap().into();
    let tol = Tolerance::default();
    let mut prev = f64::INFINITY;
    for k in [0, 4, 16, 64, 128] {
        let d = parseval_defect(&atom, &spec, k, tol).unwrap();
        assert!(d >= -1e-8, "K={k}: {d}");
        assert!(d <= prev + 1e-10);
        prev = d;
    }
}

#[test]
fn parity_components_sum_and_symmetry() {
    let f = |t: &[f64]| (t[0] + 0.3).exp() * (1.0 + t[1] * t[1] * t[1]) + t[0] * t[1];
    let fd = sampled(2, f);
    let comps: Vec<FunctionDescriptor> = [[0u8, 0], [0, 1], [1, 0], [1, 1]]
        .iter()
        .map(|s| parity_components(&fd, s).unwrap())
        .collect();
    for i in 0..9 {
        for j in 0..9 {
            let x = [-3.0 + 0.7 * i as f64, -2.9 + 0.71 * j as f64];
            let sum: f64 = comps.iter().map(|c| c.eval(&x)).sum();
            assert!((sum - f(&x)).abs() < 1e-12);
            let c01 = &comps[1];
            assert!((c01.eval(&[-x[0], x[1]]) - c01.eval(&x)).abs() < 1e-12);
            assert!((c01.eval(&[x[0], -x[1]]) + c01.eval(&x)).abs() < 1e-12);
        }
    }
    let even = sampled(1, |t| t[0].cos() + t[0] * t[0]);
    let odd = parity_components(&even, &[1]).unwrap();
    for i in 0..20 {
        assert_eq!(odd.eval(&[-3.0 + 0.3 * i as f64]), 0.0);
    }
}

#[test]
fn parity_of_step_functions() {
    let atom = PiecewiseConstantAtom::from_pieces(
        vec![-2.0, -0.5, 0.3, 1.0],
        vec![1.0, -2.0, 4.0],
        MeasureTag::lebesgue(-PI, PI),
    )
    .unwrap();
    let fd: FunctionDescriptor = atom.into();
    let e = parity_components(&fd, &[0]).unwrap();
    let o = parity_components(&fd, &[1]).unwrap();
    for i in 0..60 {
        let x = -3.1 + 0.1037 * i as f64;
        assert!((e.eval(&[x]) + o.eval(&[x]) - fd.eval(&[x])).abs() < 1e-14, "x={x}");
        assert!((e.eval(&[x]) - e.eval(&[-x])).abs() < 1e-14);
    }
}

#[test]
fn symmetric_coefficients_fold_to_half_line() {
    let tol = Tolerance::default();
    let f = sampled(1, |t| (t[0] + 0.4).exp() * (1.0 + (3.0 * t[0]).sin()));
    for &(a, b) in &[(0.5, -0.3), (1.2, 0.7), (-0.4, 0.0)] {
        let q = p(a, b);
        let sym = BasisSpec::one_dim(BasisFamily::SymTrigFunction, q).unwrap();
        let direct = coefficients(&f, &sym, 11, tol).unwrap();
        for parity in 0..2usize {
            let half = restrict_positive(&parity_components(&f, &[parity as u8]).unwrap()).unwrap();
            let hp = if parity == 0 { q } else { q.shifted() };
            let spec = BasisSpec::one_dim(BasisFamily::TrigFunction, hp).unwrap();
            let folded = coefficients(&half, &spec, 5, tol).unwrap();
            for m in 0..=5 {
                let n = 2 * m + parity;
                if n > 11 {
                    continue;
                }
                let lhs = direct.get(&MultiIndex::new(vec![n])).unwrap();
                let rhs = SQRT_2 * folded.get(&MultiIndex::new(vec![m])).unwrap();
                assert!((lhs.abs() - rhs.abs()).abs() < 1e-8, "{q} n={n}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn coefficient_tables_round_trip() {
    let q = p(0.5, -0.3);
    let spec = BasisSpec::new(BasisFamily::TrigPolynomial, vec![q, q]).unwrap();
    let t = CoefficientTable::from_fn(spec.clone(), 6, |n| (n.0[0] as f64 + 0.1).sin() / (1.0 + n.0[1] as f64).powi(7) * 1e-3);
    let csv = t.to_csv();
    assert!(csv.lines().next().unwrap().starts_with("n1,n2,"));
    let back = CoefficientTable::from_csv(spec, &csv).unwrap();
    for (x, y) in t.values().zip(back.values()) {
        assert!((x - y).abs() <= 1e-15 * x.abs());
    }
    let json = t.to_json().unwrap();
    let back = CoefficientTable::from_json(&json).unwrap();
    for (x, y) in t.values().zip(back.values()) {
        assert!((x - y).abs() <= 1e-15 * x.abs());
    }
    let order: Vec<&MultiIndex> = t.entries.iter().map(|e| &e.0).collect();
    assert_eq!(order[0].0, vec![0, 0]);
    assert_eq!(order[1].0, vec![0, 1]);
    assert_eq!(order[2].0, vec![1, 0]);
}

#[test]
fn exponent_examples() {
    for d in 1..=3usize {
        let ps = vec![p(0.5, -0.3); d];
        let e = admissible_exponent(&HardyParameters::polynomial_setting(&ps).unwrap());
        assert!((e - (1.5 * d as f64 + 0.5 * d as f64)).abs() < 1e-12);
        let e = admissible_exponent(&HardyParameters::function_setting(&ps).unwrap());
        assert!((e - d as f64).abs() < 1e-12);
        let (n, g) = function_setting_exact(d as i64);
        assert_eq!(admissible_exponent_exact(n, g, d as i64).unwrap(), Rational::from_integer(d as i64));
    }
    let hp = HardyParameters::new(1.0, 1.5, vec![1.0], 1).unwrap();
    assert_eq!(admissible_exponent(&hp), 1.0);
    let s = vec![Rational::new(1, 2), Rational::new(-1, 2), Rational::new(7, 3)];
    let (n, g) = polynomial_setting_exact(&s);
    let e = admissible_exponent_exact(n, g, 3).unwrap();
    assert_eq!(e, Rational::new(9, 2) + Rational::new(7, 3));
    assert!(HardyParameters::new(1.0, 1.0, vec![], 1).is_err());
    let fs = HardyParameters::function_setting(&[p(-0.5, 0.5)]).unwrap();
    assert_eq!(fs.delta, vec![1.0]);
}

#[test]
fn hardy_sum_examples() {
    let spec = BasisSpec::one_dim(BasisFamily::TrigPolynomial, p(0.0, 0.0)).unwrap();
    let unit0 = CoefficientTable::from_fn(spec.clone(), 7, |n| (n.length() == 0) as u8 as f64);
    assert_eq!(hardy_sum(&unit0, 0.3), 1.0);
    let unit3 = CoefficientTable::from_fn(spec, 7, |n| (n.length() == 3) as u8 as f64);
    assert_eq!(hardy_sum(&unit3, 2.0), 1.0 / 16.0);
}

#[test]
fn gram_matrices_are_identity() {
    let tol = Tolerance::default();
    for fam in BasisFamily::ALL {
        for &(a, b) in &[(0.5, -0.3), (-0.3, 1.7)] {
            let q = p(a, b);
            let g = gram_matrix(fam, q, 12, tol).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let w = if i == j { 1.0 } else { 0.0 };
                    assert!((v - w).abs() < 1e-8, "{} {q} ({i},{j}) = {v}", fam.name());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, al in -0.9f64..2.0, be in -0.9f64..2.0) {
        let q = p(al, be);
        let spec = BasisSpec::one_dim(BasisFamily::TrigPolynomial, q).unwrap();
        let f = |t: f64| (1.3 * t).cos();
        let g = |t: f64| t * t - 1.0;
        let tol = Tolerance::default();
        let tf = coefficients(&sampled(1, move |t| f(t[0])), &spec, 10, tol).unwrap();
        let tg = coefficients(&sampled(1, move |t| g(t[0])), &spec, 10, tol).unwrap();
        let th = coefficients(&sampled(1, move |t| a * f(t[0]) + b * g(t[0])), &spec, 10, tol).unwrap();
        for ((x, y), z) in tf.values().zip(tg.values()).zip(th.values()) {
            prop_assert!((a * x + b * y - z).abs() < 1e-10 * (1.0 + z.abs()));
        }
    }

    #[test]
    fn hardy_sum_monotone(vals in proptest::collection::vec(-5.0f64..5.0, 28), e1 in 0.1f64..5.0, de in 0.0f64..3.0) {
        let spec = BasisSpec::new(BasisFamily::TrigPolynomial, vec![p(0.0, 0.0); 2]).unwrap();
        let mut it = vals.iter();
        let t = CoefficientTable::from_fn(spec.clone(), 6, |_| *it.next().unwrap());
        prop_assert!(hardy_sum(&t, e1 + de) <= hardy_sum(&t, e1));
        let mut it = vals.iter();
        let small = CoefficientTable::from_fn(spec, 4, |_| *it.next().unwrap());
        prop_assert!(hardy_sum(&small, e1) <= hardy_sum(&t, e1));
    }

    #[test]
    fn polynomial_exponent_formula(ab in proptest::collection::vec((-0.99f64..3.0, -0.99f64..3.0), 1..=3)) {
        let ps: Vec<JacobiParams> = ab.iter().map(|&(a, b)| p(a, b)).collect();
        let s: f64 = ps.iter().map(|q| q.alpha().max(q.beta()).max(-0.5)).sum();
        let e = admissible_exponent(&HardyParameters::polynomial_setting(&ps).unwrap());
        prop_assert!((e - (1.5 * ps.len() as f64 + s)).abs() < 1e-12);
    }
}
