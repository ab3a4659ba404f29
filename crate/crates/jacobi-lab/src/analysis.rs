//! Growth and divergence harnesses for Hardy-type sums.
//!
//! Everything here reports trends on finite grids: a least-squares fit plus,
//! for divergent series, the increment of the partial sums under doubling.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::fit::{GrowthFit, GrowthModel};

use crate::asymptotics::calibrate_constants;
use crate::atoms::{make_atom_fun, make_atom_pol_a, make_atom_pol_b, validate_atom, PiecewiseConstantAtom};
use crate::bases::{BasisFamily, BasisSpec, JacobiParams, MultiIndex, TrigPolyStream};
use crate::error::{Error, Result};
use crate::expansion::{coefficients, CoefficientTable, FunctionDescriptor};
use crate::quadrature::MeasureTag;
use crate::specfun::Tolerance;

/// Largest K accepted by the sharpness harness.
pub const SHARPNESS_K_MAX: usize = 1 << 12;
/// Smallest doubling increment counted as "not Cauchy".
pub const NON_CAUCHY_THRESHOLD: f64 = 0.05;
/// Cap on the number of terms of a multi-dimensional divergent series.
pub const SERIES_TERM_CAP: usize = 100_000;
/// Cap on |n| for multi-dimensional L¹ sums.
pub const MULTI_INDEX_CAP: usize = 128;
/// Default δ of the two-level atoms.
pub const DEFAULT_DELTA: f64 = 0.25;
/// Relative size of the estimated tail accepted by the Hardy suite.
pub const TAIL_FRACTION: f64 = 0.01;
/// The Hardy suite cutoff never exceeds this multiple of the atom's K.
pub const TAIL_CUTOFF_FACTOR: usize = 128;
/// Fitted slope above which the Hardy suite flags growth.
pub const GROWTH_FLAG_SLOPE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SharpnessSetting {
    /// Two-level endpoint atoms a_K against 𝒫_k.
    PolA,
    /// Endpoint/centre (1,q)-atoms b_K against 𝒫_k.
    PolB,
    /// Lebesgue two-level atoms against φ_k.
    Fun,
    /// The same atoms, viewed on (−π,π), against ψ_n.
    Sym,
}

impl SharpnessSetting {
    pub fn family(self) -> BasisFamily {
        match self {
            SharpnessSetting::PolA | SharpnessSetting::PolB => BasisFamily::TrigPolynomial,
            SharpnessSetting::Fun => BasisFamily::TrigFunction,
            SharpnessSetting::Sym => BasisFamily::SymTrigFunction,
        }
    }

    /// Admissible exponent E for d = 1.
    pub fn exponent(self, p: JacobiParams) -> f64 {
        match self {
            SharpnessSetting::PolA | SharpnessSetting::PolB => 1.5 + p.max_exponent(),
            SharpnessSetting::Fun | SharpnessSetting::Sym => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessConfig {
    pub setting: SharpnessSetting,
    pub params: JacobiParams,
    pub epsilon: f64,
    pub k_grid: Vec<usize>,
    pub delta: f64,
    /// Calibrated from the Hilb-type bounds when absent.
    pub c: Option<f64>,
    /// Sum with exponent E instead of E − ε; the atoms still use ε.
    pub critical: bool,
}

impl SharpnessConfig {
    pub fn new(setting: SharpnessSetting, params: JacobiParams, epsilon: f64, k_grid: Vec<usize>) -> Self {
        SharpnessConfig { setting, params, epsilon, k_grid, delta: DEFAULT_DELTA, c: None, critical: false }
    }

    pub fn critical(mut self) -> Self {
        self.critical = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.setting.family().validate(&self.params)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParams(format!("epsilon must lie in (0,1), got {}", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::InvalidParams(format!("delta must lie in (0,1/2), got {}", self.delta)));
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::InvalidParams(format!("c must lie in (0,1], got {c}")));
            }
        }
        check_geometric(&self.k_grid, 2)?;
        if *self.k_grid.last().unwrap() > SHARPNESS_K_MAX {
            return Err(Error::contract(format!("K must not exceed {SHARPNESS_K_MAX}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub setting: SharpnessSetting,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
    pub critical: bool,
    /// Admissible exponent E.
    pub exponent: f64,
    /// Exponent actually used in the sum.
    pub sum_exponent: f64,
    pub k_grid: Vec<usize>,
    pub sums: Vec<f64>,
    pub fit: GrowthFit,
}

impl SharpnessReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,sum\n");
        for (k, v) in self.k_grid.iter().zip(&self.sums) {
            s.push_str(&format!("{k},{v:.16e}\n"));
        }
        s
    }
}

fn check_geometric(grid: &[usize], min_first: usize) -> Result<()> {
    if grid.len() < crate::fit::MIN_FIT_POINTS {
        return Err(Error::contract(format!("grid needs at least {} points", crate::fit::MIN_FIT_POINTS)));
    }
    if grid[0] < min_first {
        return Err(Error::contract(format!("grid must start at {min_first} or above")));
    }
    let ratio = grid[1] as f64 / grid[0] as f64;
    let geometric = ratio > 1.0
        && grid.windows(2).all(|w| ((w[1] as f64 / w[0] as f64) / ratio - 1.0).abs() < 0.05);
    if !geometric {
        return Err(Error::contract("grid must be increasing and geometric"));
    }
    Ok(())
}

fn calibrated_c(p: JacobiParams, k_max: usize) -> Result<f64> {
    Ok(calibrate_constants(p, k_max.max(256))?.constants.c)
}

/// The atom used by a sharpness setting at level K.
pub fn sharpness_atom(cfg: &SharpnessConfig, k: usize, c: f64, tol: Tolerance) -> Result<PiecewiseConstantAtom> {
    match cfg.setting {
        SharpnessSetting::PolA => make_atom_pol_a(k, cfg.delta, c, cfg.params, tol),
        SharpnessSetting::PolB => make_atom_pol_b(k, c, cfg.epsilon, cfg.params, tol),
        SharpnessSetting::Fun => make_atom_fun(k, cfg.delta, c),
        SharpnessSetting::Sym => {
            let a = make_atom_fun(k, cfg.delta, c)?;
            PiecewiseConstantAtom::new(a.axes, vec![MeasureTag::lebesgue(-PI, PI)], a.metadata)
        }
    }
}

/// Σ_{k=1}^K |⟨atom_K, basis_k⟩| / k^{E−ε} for every K of the grid, fitted
/// as a power of K.
pub fn sharpness_growth(cfg: &SharpnessConfig) -> Result<SharpnessReport> {
    cfg.validate()?;
    let p = cfg.params;
    let c = match cfg.c {
        Some(c) => c,
        None => calibrated_c(p, *cfg.k_grid.last().unwrap())?,
    };
    let e = cfg.setting.exponent(p);
    let s = if cfg.critical { e } else { e - cfg.epsilon };
    let tol = Tolerance::default().with_rel(1e-12);
    let spec = BasisSpec::one_dim(cfg.setting.family(), p)?;
    let sums = cfg
        .k_grid
        .par_iter()
        .map(|&k| {
            let atom = sharpness_atom(cfg, k, c, tol)?;
            let table = coefficients(&FunctionDescriptor::PiecewiseConstant(atom), &spec, k, tol)?;
            let terms: Vec<f64> = (1..=k)
                .map(|n| table.get(&MultiIndex::new(vec![n])).unwrap_or(0.0).abs() / (n as f64).powf(s))
                .collect();
            Ok(pairwise_sum(&terms))
        })
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = cfg.k_grid.iter().map(|&k| k as f64).collect();
    let fit = GrowthFit::power(&xs, &sums)?;
    Ok(SharpnessReport {
        setting: cfg.setting,
        alpha: p.alpha(),
        beta: p.beta(),
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        c,
        critical: cfg.critical,
        exponent: e,
        sum_exponent: s,
        k_grid: cfg.k_grid.clone(),
        sums,
        fit,
    })
}

/// Fixed-shape pairwise reduction: the tree depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for &x in xs {
            let y = x - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum L1Setting {
    /// Σ_{k≤K} |𝒫_k(c/K)| / k^{3/2+max(α,β)}, max(α,β) ≥ −1/2.
    PolLarge,
    /// Σ_{k≤K} |𝒫_k(π/2)| / k, α, β < −1/2.
    PolSmall,
    /// Σ_{|n|≤K} |φ_n(π/2,…,π/2)| / (|n|+1)^d.
    Fun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1Report {
    pub setting: L1Setting,
    /// (α, β) per axis.
    pub params: Vec<(f64, f64)>,
    pub c: Option<f64>,
    pub k_grid: Vec<usize>,
    /// S(K) on the grid.
    pub partial_sums: Vec<f64>,
    /// S(2K) − S(K) on the grid.
    pub increments: Vec<f64>,
    pub threshold: f64,
    /// Every increment is at least the threshold.
    pub non_cauchy: bool,
    /// S(K) ≈ slope·log K + intercept.
    pub fit: GrowthFit,
}

impl L1Report {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,partial_sum,increment\n");
        for i in 0..self.k_grid.len() {
            s.push_str(&format!("{},{:.16e},{:.16e}\n", self.k_grid[i], self.partial_sums[i], self.increments[i]));
        }
        s
    }
}

fn pol_large_sum(p: JacobiParams, c: f64, k: usize) -> f64 {
    let (q, theta) = if p.beta() > p.alpha() { (p.swapped(), PI - c / k as f64) } else { (p, c / k as f64) };
    let s = 1.5 + q.alpha();
    let terms: Vec<f64> = TrigPolyStream::new(p, theta)
        .enumerate()
        .skip(1)
        .take(k)
        .map(|(n, v)| v.abs() / (n as f64).powf(s))
        .collect();
    pairwise_sum(&terms)
}

/// Running sums of |𝒫_k(π/2)|/k read off at every requested K.
fn pol_small_sums(p: JacobiParams, ks: &[usize]) -> Vec<f64> {
    let k_max = *ks.iter().max().unwrap();
    let mut running = Vec::with_capacity(k_max + 1);
    let mut sum = 0.0;
    let mut comp = 0.0;
    running.push(0.0);
    for (n, v) in TrigPolyStream::new(p, FRAC_PI_2).enumerate().skip(1).take(k_max) {
        let y = v.abs() / n as f64 - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        running.push(sum);
    }
    ks.iter().map(|&k| running[k]).collect()
}

/// Σ_{|n|≤K} Π|φ_{n_i}(π/2)| / (|n|+1)^d for every requested K.
fn fun_sums(params: &[JacobiParams], ks: &[usize]) -> Vec<f64> {
    let d = params.len();
    let k_max = *ks.iter().max().unwrap();
    let tables: Vec<Vec<f64>> = params
        .iter()
        .map(|&p| {
            let h = p.half_density(FRAC_PI_2);
            TrigPolyStream::new(p, FRAC_PI_2).take(k_max + 1).map(|v| (h * v).abs()).collect()
        })
        .collect();
    let shells: Vec<f64> = (0..=k_max)
        .into_par_iter()
        .map(|s| {
            let terms: Vec<f64> = MultiIndex::shell(d, s)
                .iter()
                .map(|n| n.0.iter().enumerate().map(|(i, &j)| tables[i][j]).product::<f64>())
                .collect();
            pairwise_sum(&terms) / ((s + 1) as f64).powi(d as i32)
        })
        .collect();
    ks.iter().map(|&k| kahan(shells[..=k].iter().copied())).collect()
}

fn kahan(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Partial sums of the L¹ sup-divergence series on the grid, their doubling
/// increments, and a logarithmic fit.
///
/// `c` is only used by `PolLarge`; when absent it is calibrated.
pub fn l1_sup_divergence(setting: L1Setting, params: &[JacobiParams], k_grid: &[usize], c: Option<f64>) -> Result<L1Report> {
    check_geometric(k_grid, 1)?;
    let d = params.len();
    if d == 0 || d > 3 {
        return Err(Error::contract(format!("dimension must lie in 1..=3, got {d}")));
    }
    let k_top = 2 * *k_grid.last().unwrap();
    let doubled: Vec<usize> = k_grid.iter().map(|k| 2 * k).collect();
    let mut used_c = None;
    let (sums, sums2) = match setting {
        L1Setting::PolLarge | L1Setting::PolSmall if d != 1 => {
            return Err(Error::contract("polynomial L¹ sums are one-dimensional"));
        }
        L1Setting::PolLarge => {
            let p = params[0];
            if p.alpha().max(p.beta()) < -0.5 {
                return Err(Error::InvalidParams(format!("{setting:?} needs max(alpha, beta) >= -1/2")));
            }
            let c = match c {
                Some(c) if c > 0.0 && c <= 1.0 => c,
                Some(c) => return Err(Error::InvalidParams(format!("c must lie in (0,1], got {c}"))),
                None => calibrated_c(p, k_top)?,
            };
            used_c = Some(c);
            let f = |ks: &[usize]| ks.par_iter().map(|&k| pol_large_sum(p, c, k)).collect::<Vec<f64>>();
            (f(k_grid), f(&doubled))
        }
        L1Setting::PolSmall => {
            let p = params[0];
            if p.alpha().max(p.beta()) >= -0.5 {
                return Err(Error::InvalidParams(format!("{setting:?} needs alpha, beta < -1/2")));
            }
            (pol_small_sums(p, k_grid), pol_small_sums(p, &doubled))
        }
        L1Setting::Fun => {
            for p in params {
                BasisFamily::TrigFunction.validate(p)?;
            }
            if d > 1 && k_top > MULTI_INDEX_CAP {
                return Err(Error::contract(format!("multi-dimensional sums are capped at |n| <= {MULTI_INDEX_CAP}")));
            }
            (fun_sums(params, k_grid), fun_sums(params, &doubled))
        }
    };
    let increments: Vec<f64> = sums.iter().zip(&sums2).map(|(a, b)| b - a).collect();
    let non_cauchy = increments.iter().all(|&x| x >= NON_CAUCHY_THRESHOLD);
    let xs: Vec<f64> = k_grid.iter().map(|&k| k as f64).collect();
    let fit = GrowthFit::fit(GrowthModel::Log, &xs, &sums)?;
    Ok(L1Report {
        setting,
        params: params.iter().map(|p| (p.alpha(), p.beta())).collect(),
        c: used_c,
        k_grid: k_grid.to_vec(),
        partial_sums: sums,
        increments,
        threshold: NON_CAUCHY_THRESHOLD,
        non_cauchy,
        fit,
    })
}

/// Number of n ∈ ℕ^d with |n| ≤ N.
fn simplex_count(d: usize, n: usize) -> usize {
    (1..=d).fold(1u128, |acc, i| acc * (n + i) as u128 / i as u128).min(usize::MAX as u128) as usize
}

/// Partial sum over |n| ≤ N of
/// Π_{i≤j} |cos(aᵢnᵢ + bᵢ)| · Π_{s>j} (n_s+1)^{ω_s} / (|n|+1)^{d+Σω}.
///
/// `a` and `b` have length j, `omega` has length d − j. Sines are covered by
/// shifting b by −π/2.
pub fn series_lemma_partial(d: usize, j: usize, a: &[f64], b: &[f64], omega: &[f64], n_max: usize) -> Result<f64> {
    if d == 0 || d > 3 {
        return Err(Error::contract(format!("dimension must lie in 1..=3, got {d}")));
    }
    if j > d || a.len() != j || b.len() != j || omega.len() != d - j {
        return Err(Error::contract("need j cosine factors (a, b) and d − j weights omega"));
    }
    for &ai in a {
        let l = (ai / PI).round();
        if !ai.is_finite() || (ai - l * PI).abs() <= 1e-12 * ai.abs().max(1.0) {
            return Err(Error::contract(format!("a = {ai} is a multiple of pi")));
        }
    }
    if omega.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::contract("omega must be non-negative"));
    }
    if simplex_count(d, n_max) > SERIES_TERM_CAP {
        return Err(Error::contract(format!("more than {SERIES_TERM_CAP} terms requested")));
    }
    let power = d as f64 + omega.iter().sum::<f64>();
    let shells: Vec<f64> = (0..=n_max)
        .into_par_iter()
        .map(|s| {
            let terms: Vec<f64> = MultiIndex::shell(d, s)
                .iter()
                .map(|n| {
                    let cosines: f64 = (0..j).map(|i| (a[i] * n.0[i] as f64 + b[i]).cos().abs()).product();
                    let weights: f64 = (j..d).map(|i| ((n.0[i] + 1) as f64).powf(omega[i - j])).product();
                    cosines * weights
                })
                .collect();
            pairwise_sum(&terms) / ((s + 1) as f64).powf(power)
        })
        .collect();
    Ok(kahan(shells.into_iter()))
}

/// Σ_{k≥1} r^k k^ω summed until the terms fall below machine precision.
pub fn series_estim_sum(omega: f64, r: f64) -> Result<f64> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::contract(format!("omega must be non-negative, got {omega}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::contract(format!("r must lie in (0,1), got {r}")));
    }
    let lr = r.ln();
    let peak = omega / -lr;
    let cap = 1usize << 30;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 1..cap {
        let kf = k as f64;
        let term = (kf * lr + omega * kf.ln()).exp();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if kf > peak && term <= 1e-17 * sum {
            return Ok(sum);
        }
    }
    Err(Error::Truncation { what: "power-geometric series".into(), terms: cap })
}

/// sup over the grid of (1−r)^{ω+1} Σ_{k≥1} r^k k^ω.
pub fn series_estim_ratio(omega: f64, r_grid: &[f64]) -> Result<f64> {
    if r_grid.is_empty() {
        return Err(Error::contract("r grid is empty"));
    }
    let mut sup: f64 = 0.0;
    for &r in r_grid {
        sup = sup.max((1.0 - r).powf(omega + 1.0) * series_estim_sum(omega, r)?);
    }
    Ok(sup)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleEstimCheck {
    pub tau: f64,
    pub k: f64,
    pub terms: usize,
    /// Σ_{m=0}^{terms} (m+K)^{−τ}.
    pub finite_sum: f64,
    /// ∫_{terms+1}^∞ (x+K)^{−τ} dx, a lower bound for the omitted tail.
    pub tail_lower_bound: f64,
    /// K^{1−τ}/(τ−1).
    pub bound: f64,
    pub holds: bool,
}

/// Checks Σ_{m∈ℕ} (m+K)^{−τ} ≥ K^{1−τ}/(τ−1) with the first `terms` + 1
/// terms summed explicitly.
pub fn series_simple_estim(tau: f64, k: f64, terms: usize) -> Result<SimpleEstimCheck> {
    if !(tau > 1.0 && tau.is_finite()) {
        return Err(Error::contract(format!("tau must exceed 1, got {tau}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::contract(format!("K must be positive, got {k}")));
    }
    let finite_sum = kahan((0..=terms).rev().map(|m| (m as f64 + k).powf(-tau)));
    let tail_lower_bound = (terms as f64 + 1.0 + k).powf(1.0 - tau) / (tau - 1.0);
    let bound = k.powf(1.0 - tau) / (tau - 1.0);
    Ok(SimpleEstimCheck {
        tau,
        k,
        terms,
        finite_sum,
        tail_lower_bound,
        bound,
        holds: finite_sum + tail_lower_bound >= bound,
    })
}

/// Hardy sum of one suite member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyMember {
    /// K of the atom's construction, if any.
    pub k: Option<usize>,
    pub delta: Option<f64>,
    pub c: Option<f64>,
    pub epsilon: Option<f64>,
    pub cutoff: usize,
    /// Σ_{|n|≤cutoff} |⟨a, basis_n⟩| / (|n|+1)^E.
    pub computed: f64,
    /// Envelope estimate of the remaining tail.
    pub tail_estimate: f64,
    /// The tail estimate is within the accepted fraction of the sum.
    pub converged: bool,
}

impl HardyMember {
    pub fn total(&self) -> f64 {
        self.computed + self.tail_estimate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardySuiteReport {
    pub family: BasisFamily,
    pub params: Vec<(f64, f64)>,
    pub exponent: f64,
    pub members: Vec<HardyMember>,
    pub max_sum: f64,
    /// Power fit of the sums against the atoms' K, when at least four carry one.
    pub fit: Option<GrowthFit>,
    pub growth_flag: bool,
}

impl HardySuiteReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,cutoff,computed,tail_estimate,converged\n");
        for m in &self.members {
            let k = m.k.map(|k| k.to_string()).unwrap_or_default();
            s.push_str(&format!("{k},{},{:.16e},{:.16e},{}\n", m.cutoff, m.computed, m.tail_estimate, m.converged));
        }
        s
    }
}

/// Shell sums Σ_{|n|=s} |entry(n)|.
fn shell_sums(table: &CoefficientTable) -> Vec<f64> {
    let mut by_shell: Vec<Vec<f64>> = vec![Vec::new(); table.cutoff + 1];
    for (n, v) in &table.entries {
        by_shell[n.length()].push(v.abs());
    }
    by_shell.iter().map(|t| pairwise_sum(t)).collect()
}

/// Envelope estimate of Σ_{s>M} u_s / (s+1)^E from the shell sums u_s, s ≤ M.
///
/// The decay u_s ≈ A s^{−q} is read off the maxima over (M/4, M/2] and
/// (M/2, M], with q capped at 1 (the generic rate for step functions); A is
/// the mean of u_s s^q over the last octave. Shells at round-off level count
/// as zero.
fn envelope_tail(shells: &[f64], e: f64) -> f64 {
    let m = shells.len() - 1;
    let floor = 1e-13 * shells.iter().copied().fold(0.0, f64::max);
    let u = |s: usize| if shells[s] > floor { shells[s] } else { 0.0 };
    let max_of = |lo: usize, hi: usize| (lo..=hi).map(u).fold(0.0, f64::max);
    let last = max_of(m / 2 + 1, m);
    if last == 0.0 {
        return 0.0;
    }
    let prev = max_of(m / 4 + 1, m / 2);
    let q = (prev / last).log2().min(1.0);
    if !(q + e > 1.0) {
        return f64::INFINITY;
    }
    let octave = m / 2 + 1..=m;
    let amp = octave.clone().map(|s| u(s) * (s as f64).powf(q)).sum::<f64>() / octave.count() as f64;
    amp * (m as f64).powf(1.0 - q - e) / (q + e - 1.0)
}

fn hardy_member(spec: &BasisSpec, e: f64, atom: &PiecewiseConstantAtom, tol: Tolerance) -> Result<HardyMember> {
    let k = atom.metadata.k.unwrap_or(1);
    let f = FunctionDescriptor::PiecewiseConstant(atom.clone());
    let mut cutoff = 8.max(2 * k);
    let cap = TAIL_CUTOFF_FACTOR * k.max(8);
    loop {
        let table = coefficients(&f, spec, cutoff, tol)?;
        let shells = shell_sums(&table);
        let computed = kahan(shells.iter().enumerate().map(|(s, u)| u / ((s + 1) as f64).powf(e)));
        let tail_estimate = envelope_tail(&shells, e);
        let converged = tail_estimate <= TAIL_FRACTION * computed;
        if converged || 2 * cutoff > cap {
            return Ok(HardyMember {
                k: atom.metadata.k,
                delta: atom.metadata.delta,
                c: atom.metadata.c,
                epsilon: atom.metadata.epsilon,
                cutoff,
                computed,
                tail_estimate,
                converged,
            });
        }
        cutoff *= 2;
    }
}

/// Hardy sums Σ |⟨a, basis_n⟩| / (|n|+1)^E over a suite of atoms.
///
/// Each cutoff doubles from 2K until the envelope tail estimate is below 1%
/// of the computed sum, up to 128K; reported totals include the tail.
pub fn hardy_bound_suite(spec: &BasisSpec, e: f64, suite: &[PiecewiseConstantAtom]) -> Result<HardySuiteReport> {
    spec.validate()?;
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::contract(format!("exponent must be positive, got {e}")));
    }
    if suite.is_empty() {
        return Err(Error::contract("suite is empty"));
    }
    let tol = Tolerance::default().with_rel(1e-12);
    for (i, a) in suite.iter().enumerate() {
        let r = validate_atom(a, None, Tolerance::default())?;
        if !r.is_h1_atom {
            return Err(Error::contract(format!("suite member {i} is not an atom")));
        }
    }
    let members = suite.par_iter().map(|a| hardy_member(spec, e, a, tol)).collect::<Result<Vec<_>>>()?;
    let max_sum = members.iter().map(HardyMember::total).fold(0.0, f64::max);
    let keyed: Vec<(f64, f64)> = members.iter().filter_map(|m| m.k.map(|k| (k as f64, m.total()))).collect();
    let unbounded = members.iter().any(|m| m.tail_estimate.is_infinite());
    let fit = if keyed.len() >= crate::fit::MIN_FIT_POINTS && !unbounded {
        let (xs, ys): (Vec<f64>, Vec<f64>) = keyed.into_iter().unzip();
        Some(GrowthFit::power(&xs, &ys)?)
    } else {
        None
    };
    let growth_flag = unbounded || fit.as_ref().is_some_and(|f| f.slope > GROWTH_FLAG_SLOPE);
    Ok(HardySuiteReport {
        family: spec.family,
        params: spec.params.iter().map(|p| (p.alpha(), p.beta())).collect(),
        exponent: e,
        members,
        max_sum,
        fit,
        growth_flag,
    })
}
