//! Hilb- and Darboux-type main terms for 𝒫_k and φ_k, remainder-order fits
//! and calibration of the constants c, A, B.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{normalizing_const, trig_fun, trig_poly, trig_poly_deriv, JacobiParams};
use crate::error::{Error, Result};
use crate::fit::{GrowthFit, MIN_FIT_POINTS};
use crate::specfun::{bessel_j, log_gamma, Tolerance};

/// Upper bound for the small-θ regime constant: θ < C_MAX / k.
pub const C_MAX: f64 = 0.5;
/// Remainders below this are treated as exact and left out of order fits.
pub const EXACT_FLOOR: f64 = 1e-12;
/// Default tolerance on fitted orders.
pub const ORDER_TOLERANCE: f64 = 0.2;

const DARBOUX_LO: f64 = FRAC_PI_6;
const DARBOUX_HI: f64 = 5.0 * FRAC_PI_6;
const BAND_SLACK: f64 = 1e-12;
const BAND_POINTS: usize = 97;
const RATIO_WINDOW: (f64, f64) = (0.5, 2.0);
const CALIBRATION_SAMPLES: usize = 16;

fn bessel(nu: f64, z: f64) -> Result<f64> {
    bessel_j(nu, z, Tolerance::series())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("asymptotic formulas need k >= 1"));
    }
    Ok(())
}

fn check_small(k: usize, theta: f64) -> Result<()> {
    check_k(k)?;
    if !(theta > 0.0 && theta < C_MAX / k as f64) {
        return Err(Error::domain(format!("theta = {theta} is outside (0, {C_MAX}/k) for k = {k}")));
    }
    Ok(())
}

fn check_band(k: usize, theta: f64) -> Result<()> {
    check_k(k)?;
    if !(DARBOUX_LO - BAND_SLACK..=DARBOUX_HI + BAND_SLACK).contains(&theta) {
        return Err(Error::domain(format!("theta = {theta} is outside [pi/6, 5pi/6]")));
    }
    Ok(())
}

/// (sin θ/2)^{−α−1/2} (cos θ/2)^{−β−1/2}.
fn inv_half_density(p: JacobiParams, theta: f64) -> f64 {
    1.0 / p.half_density(theta)
}

/// ((k+η)θ)^{1/2} J_α((k+η)θ), the Hilb main term for φ_k.
pub fn hilb_main(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    check_small(k, theta)?;
    let z = (k as f64 + p.eta()) * theta;
    Ok(z.sqrt() * bessel(p.alpha(), z)?)
}

/// Hilb main term for 𝒫_k: [`hilb_main`] divided by the half density.
pub fn hilb_main_poly(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    Ok(hilb_main(k, p, theta)? * inv_half_density(p, theta))
}

fn darboux_phase(k: usize, p: JacobiParams, theta: f64) -> f64 {
    (k as f64 + p.eta()) * theta - (2.0 * p.alpha() + 1.0) * FRAC_PI_4
}

/// √(2/π) (sin θ/2)^{−α−1/2} (cos θ/2)^{−β−1/2} cos((k+η)θ − (2α+1)π/4).
pub fn darboux_main(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    Ok(darboux_fun_main(k, p, theta)? * inv_half_density(p, theta))
}

/// √(2/π) cos((k+η)θ − (2α+1)π/4), the Darboux main term for φ_k.
pub fn darboux_fun_main(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    check_band(k, theta)?;
    Ok((2.0 / PI).sqrt() * darboux_phase(k, p, theta).cos())
}

/// √(k(k+2η)) (sin θ/2)^{−α−1/2}(cos θ/2)^{−β−1/2} ((k+η)θ)^{1/2} J_{α+1}((k+η)θ),
/// the main term for −d𝒫_k/dθ.
pub fn deriv_main(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    check_small(k, theta)?;
    let kf = k as f64;
    let z = (kf + p.eta()) * theta;
    let lead = (kf * (kf + 2.0 * p.eta())).max(0.0).sqrt();
    Ok(lead * inv_half_density(p, theta) * z.sqrt() * bessel(p.alpha() + 1.0, z)?)
}

/// k·|c_k k^{−1/2} − √2|, bounded in k.
pub fn stirling_defect(k: usize, p: JacobiParams) -> Result<f64> {
    check_k(k)?;
    let kf = k as f64;
    Ok(kf * (normalizing_const(k, p) / kf.sqrt() - 2f64.sqrt()).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// φ_k against [`hilb_main`] at θ = c/(2k); remainder divided by θ^{α+1/2}.
    Hilb,
    /// −d𝒫_k/dθ against [`deriv_main`] at θ = c/(2k); remainder divided by θ k^{α+1/2}.
    Derivative,
    /// sup over the band of |𝒫_k − darboux_main|.
    Darboux,
    /// sup over the band of |φ_k − darboux_fun_main|.
    DarbouxFunction,
}

impl Formula {
    /// Order in k the (normalized) remainder is expected to have.
    pub fn predicted_order(self, p: JacobiParams) -> f64 {
        match self {
            Formula::Hilb => p.alpha() - 1.5,
            Formula::Derivative => 0.0,
            Formula::Darboux | Formula::DarbouxFunction => -1.0,
        }
    }

    /// Whether the predicted order is only an upper bound.
    pub fn is_bound(self) -> bool {
        matches!(self, Formula::Derivative)
    }

    fn validate(self, p: JacobiParams) -> Result<()> {
        if matches!(self, Formula::Hilb | Formula::DarbouxFunction) && (p.alpha() < -0.5 || p.beta() < -0.5) {
            return Err(Error::InvalidParams(format!("{self:?} uses the function family, which needs alpha, beta >= -1/2")));
        }
        Ok(())
    }
}

/// The constants of the small-θ two-sided bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Regime constant: θ < c/k.
    pub c: f64,
    /// Two-sided constant for the Hilb main term.
    pub a: f64,
    /// Two-sided constant for the derivative main term.
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub formula: Formula,
    pub params: JacobiParams,
    pub k_grid: Vec<usize>,
    pub remainder_values: Vec<f64>,
    /// Least-squares order of the remainders above [`EXACT_FLOOR`]; absent
    /// when fewer than four survive.
    pub fitted_order: Option<f64>,
    pub predicted_order: f64,
    pub tolerance: f64,
    pub constants: Constants,
    pub passed: bool,
}

fn remainder(formula: Formula, k: usize, p: JacobiParams, c: f64) -> Result<f64> {
    match formula {
        Formula::Hilb => {
            let th = c / (2.0 * k as f64);
            let r = (trig_fun(k, p, th)? - hilb_main(k, p, th)?).abs();
            Ok(r / th.powf(p.alpha() + 0.5))
        }
        Formula::Derivative => {
            let th = c / (2.0 * k as f64);
            let r = (-trig_poly_deriv(k, p, th)? - deriv_main(k, p, th)?).abs();
            Ok(r / (th * (k as f64).powf(p.alpha() + 0.5)))
        }
        Formula::Darboux | Formula::DarbouxFunction => {
            let mut sup: f64 = 0.0;
            for i in 0..BAND_POINTS {
                let th = DARBOUX_LO + (DARBOUX_HI - DARBOUX_LO) * i as f64 / (BAND_POINTS - 1) as f64;
                let r = if formula == Formula::Darboux {
                    trig_poly(k, p, th)? - darboux_main(k, p, th)?
                } else {
                    trig_fun(k, p, th)? - darboux_fun_main(k, p, th)?
                };
                sup = sup.max(r.abs());
            }
            Ok(sup)
        }
    }
}

/// Remainders of `formula` on `k_grid` with the regime constant from
/// `constants`, and the fitted order.
pub fn remainder_report(formula: Formula, p: JacobiParams, k_grid: &[usize], constants: Constants) -> Result<AsymptoticReport> {
    formula.validate(p)?;
    if !(constants.c > 0.0 && constants.c <= C_MAX) {
        return Err(Error::InvalidParams(format!("c must lie in (0, {C_MAX}], got {}", constants.c)));
    }
    let values = k_grid
        .par_iter()
        .map(|&k| {
            check_k(k)?;
            remainder(formula, k, p, constants.c)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = k_grid
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v >= EXACT_FLOOR)
        .map(|(&k, &v)| (k as f64, v))
        .unzip();
    let fitted_order = if xs.len() >= MIN_FIT_POINTS { Some(GrowthFit::power(&xs, &ys)?.slope) } else { None };
    let predicted_order = formula.predicted_order(p);
    let passed = match fitted_order {
        None => values.iter().all(|v| *v < EXACT_FLOOR),
        Some(s) if formula.is_bound() => s <= predicted_order + ORDER_TOLERANCE,
        Some(s) => (s - predicted_order).abs() <= ORDER_TOLERANCE,
    };
    Ok(AsymptoticReport {
        formula,
        params: p,
        k_grid: k_grid.to_vec(),
        remainder_values: values,
        fitted_order,
        predicted_order,
        tolerance: ORDER_TOLERANCE,
        constants,
        passed,
    })
}

/// hilb_main / (kθ)^{α+1/2}.
pub fn hilb_ratio(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    Ok(hilb_main(k, p, theta)? / (k as f64 * theta).powf(p.alpha() + 0.5))
}

/// deriv_main / (θ k^{α+5/2}).
pub fn deriv_ratio(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    Ok(deriv_main(k, p, theta)? / (theta * (k as f64).powf(p.alpha() + 2.5)))
}

/// Γ(ν+1) (2/z)^ν J_ν(z), which tends to 1 as z → 0.
fn bessel_shape(nu: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    Ok((log_gamma(nu + 1.0)? + nu * (2.0 / z).ln()).exp() * bessel(nu, z)?)
}

/// θ-samples in (0, c/k).
fn small_samples(k: usize, c: f64) -> impl Iterator<Item = f64> {
    let h = c / k as f64;
    (1..=CALIBRATION_SAMPLES).map(move |i| h * (i as f64 - 0.5) / CALIBRATION_SAMPLES as f64)
}

/// Extremes (min, max) of the Hilb and derivative ratios for k ≤ k_max and
/// θ ∈ (0, c/k), including the k → ∞ limit curves.
pub fn ratio_extremes(p: JacobiParams, k_max: usize, c: f64) -> Result<((f64, f64), (f64, f64))> {
    let a = p.alpha();
    let per_k = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let mut h = (f64::INFINITY, 0.0f64);
            let mut d = (f64::INFINITY, 0.0f64);
            for th in small_samples(k, c) {
                let x = hilb_ratio(k, p, th)?;
                let y = deriv_ratio(k, p, th)?;
                h = (h.0.min(x), h.1.max(x));
                d = (d.0.min(y), d.1.max(y));
            }
            Ok((h, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut h = (f64::INFINITY, 0.0f64);
    let mut d = (f64::INFINITY, 0.0f64);
    for (x, y) in per_k {
        h = (h.0.min(x.0), h.1.max(x.1));
        d = (d.0.min(y.0), d.1.max(y.1));
    }
    // k → ∞ with u = kθ fixed
    let ga = log_gamma(a + 1.0)?.exp();
    let gb = log_gamma(a + 2.0)?.exp();
    for i in 1..=CALIBRATION_SAMPLES {
        let u = c * (i as f64 - 0.5) / CALIBRATION_SAMPLES as f64;
        let x = 2f64.powf(-a) / ga * bessel_shape(a, u)?;
        let y = 2f64.powf(-0.5) / gb * bessel_shape(a + 1.0, u)?;
        h = (h.0.min(x), h.1.max(x));
        d = (d.0.min(y), d.1.max(y));
    }
    Ok((h, d))
}

/// Whether every ratio, divided by its θ → 0 limit at the same k, stays in
/// [0.5, 2] for k ≤ k_max and θ < c/k.
fn feasible(p: JacobiParams, k_max: usize, c: f64) -> Result<bool> {
    let (a, eta) = (p.alpha(), p.eta());
    (1..=k_max).into_par_iter().try_fold(
        || true,
        |ok, k| {
            if !ok {
                return Ok(false);
            }
            let kf = k as f64;
            let s = (kf + eta) / kf;
            let lim_h = s.powf(a + 0.5) * 2f64.powf(-a) / log_gamma(a + 1.0)?.exp();
            let lim_d = (kf * (kf + 2.0 * eta)).max(0.0).sqrt() / kf * s.powf(a + 1.5) * 2f64.powf(-0.5) / log_gamma(a + 2.0)?.exp();
            for th in small_samples(k, c) {
                let nh = hilb_ratio(k, p, th)? / lim_h;
                let nd = if lim_d > 0.0 { deriv_ratio(k, p, th)? / lim_d } else { 1.0 };
                let inside = |v: f64| v >= RATIO_WINDOW.0 && v <= RATIO_WINDOW.1;
                if !inside(nh) || !inside(nd) {
                    return Ok(false);
                }
            }
            Ok(true)
        },
    )
    .try_reduce(|| true, |x, y| Ok(x && y))
}

/// Largest c ≤ 1/2 (on a geometric ladder) for which the normalized small-θ
/// ratios stay in [0.5, 2] for all k ≤ k_max, with A and B taken as the
/// observed extremes of the raw ratios.
///
/// The returned report is the Hilb remainder fit at the calibrated c on
/// k = 8, 16, …, k_max (Derivative for parameters outside the function
/// family's range).
pub fn calibrate_constants(p: JacobiParams, k_max: usize) -> Result<AsymptoticReport> {
    if k_max < 256 {
        return Err(Error::InvalidParams(format!("calibration needs k_max >= 256, got {k_max}")));
    }
    let mut c = C_MAX;
    let mut found = None;
    for _ in 0..40 {
        if feasible(p, k_max, c)? {
            found = Some(c);
            break;
        }
        c *= 0.8;
    }
    let c = found.ok_or_else(|| Error::Calibration(format!("no regime constant c found for {p}")))?;
    let (h, d) = ratio_extremes(p, k_max, c)?;
    let constants = Constants { c, a: h.0.min(1.0 / h.1), b: d.0.min(1.0 / d.1) };
    let grid: Vec<usize> = (3..).map(|j| 1usize << j).take_while(|k| *k <= k_max).collect();
    let formula = if p.alpha() >= -0.5 && p.beta() >= -0.5 { Formula::Hilb } else { Formula::Derivative };
    remainder_report(formula, p, &grid, constants)
}
