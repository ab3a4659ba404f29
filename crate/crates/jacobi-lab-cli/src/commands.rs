use std::f64::consts::PI;

use jacobi_lab::analysis::{l1_sup_divergence, sharpness_growth, L1Setting, SharpnessConfig, SharpnessSetting};
use jacobi_lab::asymptotics::{calibrate_constants, remainder_report, Formula};
use jacobi_lab::atoms::{make_atom_fun, make_atom_pol_a, make_atom_pol_b, validate_atom, AtomReport, PiecewiseConstantAtom};
use jacobi_lab::bases::{family_all, BasisFamily, BasisSpec, JacobiParams, MultiIndex};
use jacobi_lab::expansion::{
    admissible_exponent, admissible_exponent_exact, coefficients, function_setting_exact, gram_matrix,
    polynomial_setting_exact, FunctionDescriptor, HardyParameters, Rational,
};
use jacobi_lab::fit::GrowthFit;
use jacobi_lab::kernels::{kernel_l2_profile, kernel_ratio_sweep, poisson_kernel, r_kernel, KernelSpec, KernelVariable};
use jacobi_lab::specfun::Tolerance;
use serde::Serialize;

use crate::config::{parse_name, required, CommandName, ExperimentConfig};
use crate::error::CliError;

/// Rendered report plus the outcome of any acceptance check.
pub struct Output {
    pub json: String,
    pub csv: String,
    pub failure: Option<String>,
}

impl Output {
    fn new<T: Serialize>(report: &T, csv: String) -> Result<Self, CliError> {
        let json = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(Output { json: json + "\n", csv, failure: None })
    }

    fn check(mut self, ok: bool, what: impl FnOnce() -> String) -> Self {
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
        self
    }
}

pub fn run(cmd: CommandName, cfg: &ExperimentConfig) -> Result<Output, CliError> {
    match cmd {
        CommandName::Eval => eval(cfg),
        CommandName::Gram => gram(cfg),
        CommandName::Kernel => kernel(cfg),
        CommandName::Atom => atom(cfg),
        CommandName::Sharpness => sharpness(cfg),
        CommandName::L1 => l1(cfg),
        CommandName::Asympt => asympt(cfg),
        CommandName::Exponent => exponent(cfg),
    }
}

fn params(cfg: &ExperimentConfig) -> Result<Vec<JacobiParams>, CliError> {
    let a = required("alpha", &cfg.alpha)?;
    let b = required("beta", &cfg.beta)?;
    if a.len() != b.len() || a.is_empty() {
        return Err(CliError::Config(format!("alpha has {} entries but beta has {}", a.len(), b.len())));
    }
    if let Some(d) = cfg.d {
        if d != a.len() {
            return Err(CliError::Config(format!("d = {d} but {} parameter pairs were given", a.len())));
        }
    }
    Ok(a.iter().zip(&b).map(|(&x, &y)| JacobiParams::new(x, y)).collect::<Result<_, _>>()?)
}

fn one_param(cfg: &ExperimentConfig) -> Result<JacobiParams, CliError> {
    let ps = params(cfg)?;
    if ps.len() != 1 {
        return Err(CliError::Config("this command is one-dimensional".into()));
    }
    Ok(ps[0])
}

fn family(cfg: &ExperimentConfig) -> Result<BasisFamily, CliError> {
    parse_name("family", &required("family", &cfg.family)?)
}

fn tolerance(cfg: &ExperimentConfig) -> Result<Tolerance, CliError> {
    Ok(Tolerance::new(cfg.rel_tol.unwrap_or(1e-12), 0.0, 1 << 16)?)
}

fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|j| 1usize << j).collect()
}

fn slope_checks(out: Output, cfg: &ExperimentConfig, fit: &GrowthFit) -> Output {
    let s = fit.slope;
    let out = match cfg.min_slope {
        Some(m) => out.check(s >= m, || format!("slope {s} is below {m}")),
        None => out,
    };
    let out = match cfg.max_slope {
        Some(m) => out.check(s <= m, || format!("slope {s} is above {m}")),
        None => out,
    };
    match cfg.min_r_squared {
        Some(m) => out.check(fit.r_squared >= m, || format!("r squared {} is below {m}", fit.r_squared)),
        None => out,
    }
}

#[derive(Serialize)]
struct EvalReport {
    family: BasisFamily,
    alpha: f64,
    beta: f64,
    theta: Vec<f64>,
    /// values[i][k] at theta[i].
    values: Vec<Vec<f64>>,
}

fn eval(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let fam = family(cfg)?;
    let p = one_param(cfg)?;
    let k_max = cfg.k_max.unwrap_or(8);
    let (lo, hi) = fam.domain();
    let theta = cfg.theta_grid.clone().unwrap_or_else(|| (0..33).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 33.0).collect());
    let mut values = Vec::with_capacity(theta.len());
    for &th in &theta {
        let mut row = vec![0.0; k_max + 1];
        family_all(fam, p, th, &mut row)?;
        values.push(row);
    }
    let mut csv = String::from("theta,k,value\n");
    for (th, row) in theta.iter().zip(&values) {
        for (k, v) in row.iter().enumerate() {
            csv.push_str(&format!("{th:.16e},{k},{v:.16e}\n"));
        }
    }
    Output::new(&EvalReport { family: fam, alpha: p.alpha(), beta: p.beta(), theta, values }, csv)
}

#[derive(Serialize)]
struct GramReport {
    family: BasisFamily,
    alpha: f64,
    beta: f64,
    size: usize,
    max_off_diagonal: f64,
    max_diagonal_defect: f64,
    threshold: f64,
    passed: bool,
}

fn gram(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let fam = family(cfg)?;
    let p = one_param(cfg)?;
    let size = cfg.k_max.unwrap_or(24);
    let threshold = cfg.threshold.unwrap_or(1e-8);
    let g = gram_matrix(fam, p, size, tolerance(cfg)?)?;
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    let mut csv = String::from("i,j,value\n");
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i == j {
                diag = diag.max((v - 1.0).abs());
            } else {
                off = off.max(v.abs());
            }
            csv.push_str(&format!("{i},{j},{v:.16e}\n"));
        }
    }
    let passed = off < threshold && diag < threshold;
    let r = GramReport {
        family: fam,
        alpha: p.alpha(),
        beta: p.beta(),
        size,
        max_off_diagonal: off,
        max_diagonal_defect: diag,
        threshold,
        passed,
    };
    Ok(Output::new(&r, csv)?.check(passed, || format!("Gram defect {} exceeds {threshold}", off.max(diag))))
}

#[derive(Serialize)]
struct SliceReport {
    family: BasisFamily,
    params: Vec<JacobiParams>,
    variable: KernelVariable,
    phi: Vec<f64>,
    theta: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct ProfileReport {
    family: BasisFamily,
    alpha: f64,
    beta: f64,
    derivative: bool,
    theta_grid: Vec<f64>,
    fit: GrowthFit,
}

fn default_profile_thetas() -> Vec<f64> {
    let mut v: Vec<f64> = (1..64).map(|i| i as f64 * PI / 64.0).collect();
    for i in 7..=16 {
        let h = PI * 2f64.powi(-i);
        v.push(h);
        v.push(PI - h);
    }
    v.sort_by(f64::total_cmp);
    v
}

fn kernel(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    match cfg.setting.as_deref().unwrap_or("slice") {
        "slice" => {
            let fam = family(cfg)?;
            let ps = params(cfg)?;
            let d = ps.len();
            let variable = match (cfg.r, cfg.t) {
                (Some(r), None) => KernelVariable::R(r),
                (None, Some(t)) => KernelVariable::T(t),
                _ => return Err(CliError::Config("kernel slice needs exactly one of 'r' and 't'".into())),
            };
            let spec = KernelSpec::new(fam, ps.clone(), variable)?;
            let phi = cfg.phi.clone().unwrap_or_else(|| vec![PI / 3.0; d]);
            if phi.len() != d {
                return Err(CliError::Config(format!("phi needs {d} entries")));
            }
            let (lo, hi) = fam.domain();
            let theta =
                cfg.theta_grid.clone().unwrap_or_else(|| (0..32).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 32.0).collect());
            // θ moves along the first axis; the remaining axes sit at φ
            let mut values = Vec::with_capacity(theta.len());
            for &th in &theta {
                let mut x = phi.clone();
                x[0] = th;
                values.push(match variable {
                    KernelVariable::R(_) => r_kernel(&spec, &x, &phi)?,
                    KernelVariable::T(_) => poisson_kernel(&spec, &x, &phi)?,
                });
            }
            let mut csv = String::from("theta,value\n");
            for (th, v) in theta.iter().zip(&values) {
                csv.push_str(&format!("{th:.16e},{v:.16e}\n"));
            }
            Output::new(&SliceReport { family: fam, params: ps, variable, phi, theta, values }, csv)
        }
        "ratio" => {
            let p = one_param(cfg)?;
            let j = cfg.j.unwrap_or(0);
            let ts = cfg.t_grid.clone().unwrap_or_else(|| (0..10).map(|i| 2f64.powf(-7.0 * i as f64 / 9.0)).collect());
            let grid = cfg.theta_grid.clone().unwrap_or_else(|| (0..16).map(|i| (i as f64 + 0.5) * PI / 16.0).collect());
            let sweep = kernel_ratio_sweep(p, j, &ts, &grid, &grid)?;
            let bound = cfg.threshold.unwrap_or(50.0);
            let csv = format!("min,max,c,points\n{:.16e},{:.16e},{:.16e},{}\n", sweep.min, sweep.max, sweep.c, sweep.points);
            let c = sweep.c;
            Ok(Output::new(&sweep, csv)?.check(c <= bound, || format!("ratio constant {c} exceeds {bound}")))
        }
        "profile" => {
            let fam = family(cfg)?;
            let p = one_param(cfg)?;
            let derivative = cfg.derivative.unwrap_or(false);
            let r_grid = cfg.r_grid.clone().unwrap_or_else(|| (3..=12).map(|j| 1.0 - 2f64.powi(-j)).collect());
            let theta_grid = cfg.theta_grid.clone().unwrap_or_else(default_profile_thetas);
            let fit = kernel_l2_profile(fam, p, &r_grid, &theta_grid, derivative)?;
            let csv = fit.to_csv();
            let out = Output::new(&ProfileReport { family: fam, alpha: p.alpha(), beta: p.beta(), derivative, theta_grid, fit: fit.clone() }, csv)?;
            Ok(slope_checks(out, cfg, &fit))
        }
        other => Err(CliError::Config(format!("unknown kernel setting '{other}' (slice, ratio, profile)"))),
    }
}

#[derive(Serialize)]
struct AtomOutput {
    atom: PiecewiseConstantAtom,
    report: AtomReport,
    cutoff: usize,
    coefficients: Vec<f64>,
}

fn atom(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let p = one_param(cfg)?;
    let tol = tolerance(cfg)?;
    let k = cfg.k_max.unwrap_or(64);
    let delta = cfg.delta.unwrap_or(0.25);
    let c = cfg.c.unwrap_or(0.5);
    let kind = cfg.setting.as_deref().unwrap_or("pol-a");
    let (atom, fam, q) = match kind {
        "pol-a" => (make_atom_pol_a(k, delta, c, p, tol)?, BasisFamily::TrigPolynomial, cfg.q),
        "pol-b" => {
            let eps = cfg.epsilon.unwrap_or(0.5);
            (make_atom_pol_b(k, c, eps, p, tol)?, BasisFamily::TrigPolynomial, Some(cfg.q.unwrap_or(1.1)))
        }
        "fun" => (make_atom_fun(k, delta, c)?, BasisFamily::TrigFunction, cfg.q),
        other => return Err(CliError::Config(format!("unknown atom kind '{other}' (pol-a, pol-b, fun)"))),
    };
    let report = validate_atom(&atom, q, tol)?;
    let cutoff = cfg.cutoff.unwrap_or(2 * k);
    let spec = BasisSpec::one_dim(fam, p)?;
    let table = coefficients(&FunctionDescriptor::PiecewiseConstant(atom.clone()), &spec, cutoff, tol)?;
    let coeffs: Vec<f64> = (0..=cutoff).map(|n| table.get(&MultiIndex::new(vec![n])).unwrap_or(0.0)).collect();
    let mut csv = String::from("n,coefficient\n");
    for (n, v) in coeffs.iter().enumerate() {
        csv.push_str(&format!("{n},{v:.16e}\n"));
    }
    let ok = report.is_1q_atom.unwrap_or(report.is_h1_atom);
    let out = Output::new(&AtomOutput { atom, report, cutoff, coefficients: coeffs }, csv)?;
    Ok(out.check(ok, || format!("{kind} construction is not an atom")))
}

fn sharpness(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let setting: SharpnessSetting = parse_name("sharpness setting", &required("setting", &cfg.setting)?)?;
    let p = one_param(cfg)?;
    let mut sc = SharpnessConfig::new(setting, p, cfg.epsilon.unwrap_or(0.5), cfg.k_grid.clone().unwrap_or_else(|| powers_of_two(5, 11)));
    if let Some(d) = cfg.delta {
        sc.delta = d;
    }
    sc.c = cfg.c;
    sc.critical = cfg.critical.unwrap_or(false);
    let r = sharpness_growth(&sc)?;
    let out = Output::new(&r, r.to_csv())?;
    Ok(slope_checks(out, cfg, &r.fit))
}

fn l1(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let setting: L1Setting = parse_name("L1 setting", &required("setting", &cfg.setting)?)?;
    let ps = params(cfg)?;
    let grid = cfg.k_grid.clone().unwrap_or_else(|| powers_of_two(6, 13));
    let r = l1_sup_divergence(setting, &ps, &grid, cfg.c)?;
    let out = Output::new(&r, r.to_csv())?;
    let out = slope_checks(out, cfg, &r.fit);
    let want = cfg.require_non_cauchy.unwrap_or(false);
    Ok(out.check(!want || r.non_cauchy, || format!("increments {:?} fall below {}", r.increments, r.threshold)))
}

fn asympt(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let formula: Formula = parse_name("formula", cfg.formula.as_deref().unwrap_or("hilb"))?;
    let p = one_param(cfg)?;
    let grid = cfg.k_grid.clone().unwrap_or_else(|| powers_of_two(6, 12));
    let k_max = grid.iter().copied().max().unwrap_or(256).max(256);
    let mut constants = calibrate_constants(p, k_max)?.constants;
    if let Some(c) = cfg.c {
        constants.c = c;
    }
    let r = remainder_report(formula, p, &grid, constants)?;
    let mut csv = String::from("k,remainder\n");
    for (k, v) in r.k_grid.iter().zip(&r.remainder_values) {
        csv.push_str(&format!("{k},{v:.16e}\n"));
    }
    let passed = r.passed;
    let order = r.fitted_order;
    Ok(Output::new(&r, csv)?.check(passed, || format!("fitted order {order:?} misses the prediction")))
}

#[derive(Serialize)]
struct ExponentReport {
    setting: String,
    d: usize,
    n: String,
    gamma: String,
    /// E in lowest terms.
    exponent: String,
    exponent_value: f64,
    /// The same exponent through floating-point arithmetic.
    floating: f64,
}

fn rational(x: f64) -> Result<Rational, CliError> {
    Rational::approximate_float(x).ok_or_else(|| CliError::Config(format!("{x} has no rational approximation")))
}

fn exponent(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let setting = cfg.setting.clone().unwrap_or_else(|| "polynomial".into());
    let (d, (n, gamma), floating) = match setting.as_str() {
        "polynomial" => {
            let ps = params(cfg)?;
            let maxes = ps.iter().map(|p| rational(p.max_exponent())).collect::<Result<Vec<_>, _>>()?;
            (ps.len(), polynomial_setting_exact(&maxes), admissible_exponent(&HardyParameters::polynomial_setting(&ps)?))
        }
        "function" => {
            let d = match (&cfg.alpha, cfg.d) {
                (Some(_), _) => params(cfg)?.len(),
                (None, Some(d)) if d > 0 => d,
                _ => return Err(CliError::Config("function setting needs 'd' or parameters".into())),
            };
            let floating = match &cfg.alpha {
                Some(_) => admissible_exponent(&HardyParameters::function_setting(&params(cfg)?)?),
                None => d as f64,
            };
            (d, function_setting_exact(d as i64), floating)
        }
        other => return Err(CliError::Config(format!("unknown exponent setting '{other}' (polynomial, function)"))),
    };
    let e = admissible_exponent_exact(n, gamma, d as i64)?;
    let value = *e.numer() as f64 / *e.denom() as f64;
    let r = ExponentReport {
        setting,
        d,
        n: n.to_string(),
        gamma: gamma.to_string(),
        exponent: e.to_string(),
        exponent_value: value,
        floating,
    };
    let csv = format!("setting,d,n,gamma,exponent,exponent_value\n{},{d},{},{},{},{value:.16e}\n", r.setting, r.n, r.gamma, r.exponent);
    if (value - floating).abs() > 1e-12 * value.abs().max(1.0) {
        return Err(CliError::Lab(jacobi_lab::Error::Numeric(format!("exact {value} and floating {floating} disagree"))));
    }
    Output::new(&r, csv)
}
