//! Poisson-type kernels as truncated basis series: R_r, ℋ_t, ℍ_t and the
//! symmetrized / Q analogues, with the checks built on them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{fill_family, fill_trig_poly, fill_trig_poly_deriv, BasisFamily, JacobiParams};
use crate::error::{Error, Result};
use crate::fit::GrowthFit;
use crate::quadrature::integrate_mu;
use crate::specfun::Tolerance;

/// Term cap for point evaluations of a kernel.
pub const KERNEL_TERM_CAP: usize = 20_000;
/// Term cap for the Parseval sums behind the L² profiles.
pub const PROFILE_TERM_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelVariable {
    /// Abel-type parameter r ∈ (0,1): weights r^k.
    R(f64),
    /// Poisson time t > 0: weights e^{−t|k+η|}.
    T(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: BasisFamily,
    pub params: Vec<JacobiParams>,
    pub variable: KernelVariable,
    pub truncation: Tolerance,
}

impl KernelSpec {
    pub fn new(family: BasisFamily, params: Vec<JacobiParams>, variable: KernelVariable) -> Result<Self> {
        let s = KernelSpec { family, params, variable, truncation: default_truncation() };
        s.validate()?;
        Ok(s)
    }

    pub fn with_truncation(self, truncation: Tolerance) -> Self {
        KernelSpec { truncation, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.is_empty() {
            return Err(Error::InvalidParams("kernel needs at least one axis".into()));
        }
        for p in &self.params {
            self.family.validate(p)?;
        }
        match self.variable {
            KernelVariable::R(r) if !(r > 0.0 && r < 1.0) => Err(Error::domain(format!("r must lie in (0,1), got {r}"))),
            KernelVariable::T(t) if !(t > 0.0 && t.is_finite()) => Err(Error::domain(format!("t must be positive, got {t}"))),
            _ => Ok(()),
        }
    }

    /// r, with r = e^{−t} for a time variable.
    pub fn r(&self) -> f64 {
        match self.variable {
            KernelVariable::R(r) => r,
            KernelVariable::T(t) => (-t).exp(),
        }
    }

    /// t, with t = −log r for an Abel variable.
    pub fn t(&self) -> f64 {
        match self.variable {
            KernelVariable::R(r) => -r.ln(),
            KernelVariable::T(t) => t,
        }
    }
}

fn default_truncation() -> Tolerance {
    Tolerance::default().with_rel(1e-14).with_max_terms(KERNEL_TERM_CAP)
}

/// Growth exponent e with |b_k(θ) b_k(φ)| ≲ (k+1)^e.
fn envelope_exponent(family: BasisFamily, p: JacobiParams) -> f64 {
    let m = p.max_exponent();
    match family {
        // sin θ · 𝒫_k^{α+1,β+1} obeys the same k^{m+1/2} bound as 𝒫_k
        BasisFamily::TrigPolynomial | BasisFamily::QPolynomial | BasisFamily::SymTrigPolynomial => 2.0 * m + 1.0,
        BasisFamily::TrigFunction | BasisFamily::SymTrigFunction => 0.0,
    }
}

/// The spectral shift |k+η| attached to the k-th element of a family.
pub fn spectral_value(family: BasisFamily, k: usize, p: JacobiParams) -> f64 {
    let eta = p.eta();
    let v = match family {
        BasisFamily::TrigPolynomial | BasisFamily::TrigFunction => k as f64 + eta,
        BasisFamily::QPolynomial => k as f64 + 1.0 + eta,
        BasisFamily::SymTrigPolynomial | BasisFamily::SymTrigFunction => (k / 2) as f64 + eta + (k % 2) as f64,
    };
    v.abs()
}

/// Σ_k w_k g_k, where `fill` writes g_0..g_{n−1} into a slice of length n.
///
/// Stops at the first k where the envelope tail C w_k (k+1)^e / (1−ρ) drops
/// below tol.rel·|S| + tol.abs, ρ being the local envelope ratio and C the
/// running maximum of |g_j| / (j+1)^e.
fn envelope_sum(
    mut fill: impl FnMut(&mut [f64]),
    weight: impl Fn(usize) -> f64,
    e: f64,
    tol: Tolerance,
    what: &str,
) -> Result<f64> {
    let cap = tol.max_terms;
    let mut n = 64usize.min(cap);
    let mut buf = vec![0.0; n];
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut scale = 0.0f64;
    let mut k = 0usize;
    loop {
        fill(&mut buf);
        if k == 0 && buf.iter().all(|g| *g == 0.0) {
            // the basis vanishes identically at this point
            return Ok(0.0);
        }
        while k < n {
            let w = weight(k);
            let y = w * buf[k] - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            let grow = ((k + 1) as f64).powf(e);
            scale = scale.max(buf[k].abs() / grow);
            let env = w * grow;
            let next = weight(k + 1) * ((k + 2) as f64).powf(e);
            k += 1;
            if env == 0.0 {
                return Ok(sum);
            }
            let rho = next / env;
            if k > 1 && rho < 1.0 && scale * next / (1.0 - rho) <= tol.rel * sum.abs() + tol.abs {
                return Ok(sum);
            }
        }
        if n >= cap {
            return Err(Error::Truncation { what: what.to_string(), terms: n });
        }
        n = (2 * n).min(cap);
        buf.resize(n, 0.0);
    }
}

fn check_point(family: BasisFamily, theta: f64) -> Result<()> {
    let (lo, hi) = family.domain();
    if !(theta >= lo && theta <= hi) {
        return Err(Error::domain(format!("point {theta} outside [{lo}, {hi}]")));
    }
    Ok(())
}

fn kernel_1d(
    family: BasisFamily,
    p: JacobiParams,
    weight: impl Fn(usize) -> f64,
    theta: f64,
    phi: f64,
    tol: Tolerance,
) -> Result<f64> {
    check_point(family, theta)?;
    check_point(family, phi)?;
    let mut other = Vec::new();
    envelope_sum(
        |out| {
            other.resize(out.len(), 0.0);
            fill_family(family, p, theta, out);
            fill_family(family, p, phi, &mut other);
            out.iter_mut().zip(&other).for_each(|(a, b)| *a *= b);
        },
        weight,
        envelope_exponent(family, p),
        tol,
        "kernel series",
    )
}

fn check_dims(spec: &KernelSpec, theta: &[f64], phi: &[f64]) -> Result<()> {
    spec.validate()?;
    if theta.len() != spec.params.len() || phi.len() != spec.params.len() {
        return Err(Error::contract("point dimension does not match the kernel"));
    }
    Ok(())
}

/// R_r(θ,φ) = Σ_n r^{|n|} b_n(θ) b_n(φ), a product over axes.
pub fn r_kernel(spec: &KernelSpec, theta: &[f64], phi: &[f64]) -> Result<f64> {
    check_dims(spec, theta, phi)?;
    let r = spec.r();
    let mut v = 1.0;
    for (i, &p) in spec.params.iter().enumerate() {
        v *= kernel_1d(spec.family, p, |k| r.powi(k as i32), theta[i], phi[i], spec.truncation)?;
    }
    Ok(v)
}

/// ℋ_t (or ℍ_t for the function families) = Σ_n e^{−t Σ|n_i+η_i|} b_n(θ) b_n(φ).
pub fn poisson_kernel(spec: &KernelSpec, theta: &[f64], phi: &[f64]) -> Result<f64> {
    check_dims(spec, theta, phi)?;
    let t = spec.t();
    let mut v = 1.0;
    for (i, &p) in spec.params.iter().enumerate() {
        let fam = spec.family;
        v *= kernel_1d(fam, p, |k| (-t * spectral_value(fam, k, p)).exp(), theta[i], phi[i], spec.truncation)?;
    }
    Ok(v)
}

/// One-dimensional polynomial Poisson kernel ℋ_t(θ,φ).
pub fn poisson_1d(p: JacobiParams, t: f64, theta: f64, phi: f64) -> Result<f64> {
    let spec = KernelSpec::new(BasisFamily::TrigPolynomial, vec![p], KernelVariable::T(t))?;
    poisson_kernel(&spec, &[theta], &[phi])
}

/// (t²+θ²+φ²)^{−α−1/2} (t²+(π−θ)²+(π−φ)²)^{−β−1/2} t / (t²+(θ−φ)²)^{1+j/2}.
pub fn kernel_comparand(p: JacobiParams, j: u32, t: f64, theta: f64, phi: f64) -> f64 {
    let t2 = t * t;
    let a = (t2 + theta * theta + phi * phi).powf(-p.alpha() - 0.5);
    let b = (t2 + (PI - theta).powi(2) + (PI - phi).powi(2)).powf(-p.beta() - 0.5);
    a * b * t / (t2 + (theta - phi).powi(2)).powf(1.0 + j as f64 / 2.0)
}

/// |∂_θ^j ℋ_t(θ,φ)| divided by [`kernel_comparand`]; j = 1 by central differences.
pub fn kernel_estimate_ratio(p: JacobiParams, j: u32, t: f64, theta: f64, phi: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!("t must lie in (0,1], got {t}")));
    }
    if !(theta > 0.0 && theta < PI && phi > 0.0 && phi < PI) {
        return Err(Error::domain("theta, phi must lie in (0, pi)"));
    }
    let value = match j {
        0 => poisson_1d(p, t, theta, phi)?,
        1 => {
            let h = 1e-4 * theta.min(PI - theta).min(t);
            (poisson_1d(p, t, theta + h, phi)? - poisson_1d(p, t, theta - h, phi)?) / (2.0 * h)
        }
        _ => return Err(Error::InvalidParams("only j = 0, 1 are supported".into())),
    };
    Ok(value.abs() / kernel_comparand(p, j, t, theta, phi))
}

/// Extremes of [`kernel_estimate_ratio`] over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSweep {
    pub params: JacobiParams,
    pub j: u32,
    pub min: f64,
    pub max: f64,
    /// Smallest C with every ratio in [1/C, C].
    pub c: f64,
    pub points: usize,
}

pub fn kernel_ratio_sweep(p: JacobiParams, j: u32, ts: &[f64], thetas: &[f64], phis: &[f64]) -> Result<RatioSweep> {
    let grid: Vec<(f64, f64, f64)> = ts
        .iter()
        .flat_map(|&t| thetas.iter().flat_map(move |&a| phis.iter().map(move |&b| (t, a, b))))
        .collect();
    let ratios = grid
        .par_iter()
        .map(|&(t, a, b)| kernel_estimate_ratio(p, j, t, a, b))
        .collect::<Result<Vec<f64>>>()?;
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    Ok(RatioSweep { params: p, j, min, max, c: max.max(1.0 / min), points: ratios.len() })
}

/// ∫ ℋ_t(θ,ψ) ℋ_s(ψ,φ) dμ(ψ) − ℋ_{t+s}(θ,φ), polynomial family.
pub fn semigroup_defect(p: JacobiParams, t: f64, s: f64, theta: f64, phi: f64, tol: Tolerance) -> Result<f64> {
    let lhs = integrate_mu(
        |psi| {
            let a = poisson_1d(p, t, theta, psi).unwrap_or(f64::NAN);
            let b = poisson_1d(p, s, psi, phi).unwrap_or(f64::NAN);
            a * b
        },
        p,
        0.0,
        PI,
        tol,
    )?;
    if !lhs.is_finite() {
        return Err(Error::Numeric("kernel evaluation failed inside the semigroup integral".into()));
    }
    Ok(lhs - poisson_1d(p, t + s, theta, phi)?)
}

/// ∫ ℋ_t(θ,φ) dμ(φ), which equals e^{−t|η|}.
pub fn kernel_mass(p: JacobiParams, t: f64, theta: f64, tol: Tolerance) -> Result<f64> {
    let m = integrate_mu(|phi| poisson_1d(p, t, theta, phi).unwrap_or(f64::NAN), p, 0.0, PI, tol)?;
    if !m.is_finite() {
        return Err(Error::Numeric("kernel evaluation failed inside the mass integral".into()));
    }
    Ok(m)
}

fn profile_tol() -> Tolerance {
    Tolerance::default().with_rel(1e-12).with_max_terms(PROFILE_TERM_CAP)
}

/// ‖R_r(θ,·)‖² = Σ r^{2k} b_k(θ)², or the θ-derivative version.
pub fn kernel_l2_norm_sq(family: BasisFamily, p: JacobiParams, r: f64, theta: f64, derivative: bool) -> Result<f64> {
    family.validate(&p)?;
    check_point(family, theta)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("r must lie in (0,1), got {r}")));
    }
    let r2 = r * r;
    let e = envelope_exponent(family, p) + if derivative { 2.0 } else { 0.0 };
    let fill: Box<dyn FnMut(&mut [f64])> = match (derivative, family) {
        (false, _) => Box::new(move |out: &mut [f64]| fill_family(family, p, theta, out)),
        (true, BasisFamily::TrigPolynomial) => Box::new(move |out: &mut [f64]| fill_trig_poly_deriv(p, theta, out)),
        (true, BasisFamily::TrigFunction) => {
            if !(theta > 0.0 && theta < PI) {
                return Err(Error::domain("function-family derivatives need theta in (0, pi)"));
            }
            let h = p.half_density(theta);
            let dh = h * (0.5 * (p.alpha() + 0.5) / (0.5 * theta).tan() - 0.5 * (p.beta() + 0.5) * (0.5 * theta).tan());
            let mut vals = Vec::new();
            Box::new(move |out: &mut [f64]| {
                vals.resize(out.len(), 0.0);
                fill_trig_poly(p, theta, &mut vals);
                fill_trig_poly_deriv(p, theta, out);
                out.iter_mut().zip(&vals).for_each(|(d, v)| *d = dh * v + h * *d);
            })
        }
        (true, f) => return Err(Error::InvalidParams(format!("derivative profiles are not available for {}", f.name()))),
    };
    let mut fill = fill;
    envelope_sum(
        |out| {
            fill(out);
            out.iter_mut().for_each(|v| *v *= *v);
        },
        |k| r2.powi(k as i32),
        e,
        profile_tol(),
        "L2 profile series",
    )
}

/// sup_θ ‖R_r(θ,·)‖ over `theta_grid` for each r, fitted as a power of 1/(1−r).
pub fn kernel_l2_profile(
    family: BasisFamily,
    p: JacobiParams,
    r_grid: &[f64],
    theta_grid: &[f64],
    derivative: bool,
) -> Result<GrowthFit> {
    let values = r_grid
        .par_iter()
        .map(|&r| {
            let mut best: f64 = 0.0;
            for &th in theta_grid {
                best = best.max(kernel_l2_norm_sq(family, p, r, th, derivative)?.sqrt());
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = r_grid.iter().map(|r| 1.0 / (1.0 - r)).collect();
    GrowthFit::power(&xs, &values)
}

/// ‖R_r(θ,·) − R_r(θ′,·)‖_{L²(0,π)} for the function family.
pub fn norm_difference(p: JacobiParams, r: f64, theta: f64, theta_prime: f64) -> Result<f64> {
    BasisFamily::TrigFunction.validate(&p)?;
    check_point(BasisFamily::TrigFunction, theta)?;
    check_point(BasisFamily::TrigFunction, theta_prime)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("r must lie in (0,1), got {r}")));
    }
    if theta == theta_prime {
        return Ok(0.0);
    }
    let r2 = r * r;
    let mut other = Vec::new();
    let s = envelope_sum(
        |out| {
            other.resize(out.len(), 0.0);
            fill_family(BasisFamily::TrigFunction, p, theta, out);
            fill_family(BasisFamily::TrigFunction, p, theta_prime, &mut other);
            out.iter_mut().zip(&other).for_each(|(a, b)| *a = (*a - b).powi(2));
        },
        |k| r2.powi(k as i32),
        0.0,
        profile_tol(),
        "norm difference series",
    )?;
    Ok(s.sqrt())
}

/// [`norm_difference`] over `r_grid`, fitted as a power of 1/(1−r).
pub fn norm_difference_profile(p: JacobiParams, theta: f64, theta_prime: f64, r_grid: &[f64]) -> Result<GrowthFit> {
    let values = r_grid
        .par_iter()
        .map(|&r| norm_difference(p, r, theta, theta_prime))
        .collect::<Result<Vec<f64>>>()?;
    if values.iter().all(|v| *v == 0.0) {
        return Err(Error::Numeric("norm differences vanish identically (theta = theta')".into()));
    }
    let xs: Vec<f64> = r_grid.iter().map(|r| 1.0 / (1.0 - r)).collect();
    GrowthFit::power(&xs, &values)
}
