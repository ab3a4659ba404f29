//! Orthonormal Jacobi trigonometric systems on (0,π) and their symmetrized
//! versions on (−π,π).
//!
//! Values are produced by forward three-term recurrences in the degree. The
//! single-value evaluators go through the classical unnormalized recurrence
//! and the normalizing constant; the batch evaluators (`*_all`) run the
//! orthonormal recurrence directly and return every degree up to a cutoff
//! in one pass.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::log_gamma;

/// Type parameters (α, β) with α, β > −1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for JacobiParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        JacobiParams::new(r.alpha, r.beta)
    }
}

impl From<JacobiParams> for RawParams {
    fn from(p: JacobiParams) -> Self {
        RawParams { alpha: p.alpha, beta: p.beta }
    }
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha.is_finite() && beta > -1.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "type parameters must satisfy alpha, beta > -1 (got alpha={alpha}, beta={beta})"
            )));
        }
        Ok(JacobiParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// η = (α+β+1)/2.
    pub fn eta(&self) -> f64 {
        0.5 * (self.alpha + self.beta + 1.0)
    }

    /// max(α, β, −1/2).
    pub fn max_exponent(&self) -> f64 {
        self.alpha.max(self.beta).max(-0.5)
    }

    /// (α+1, β+1).
    pub fn shifted(&self) -> JacobiParams {
        JacobiParams { alpha: self.alpha + 1.0, beta: self.beta + 1.0 }
    }

    /// (β, α).
    pub fn swapped(&self) -> JacobiParams {
        JacobiParams { alpha: self.beta, beta: self.alpha }
    }

    /// Parameters whose μ-density is the square root of this one's:
    /// ((2α−1)/4, (2β−1)/4). Requires α, β ≥ −1/2 to stay admissible.
    pub fn half_weight(&self) -> Result<JacobiParams> {
        JacobiParams::new((2.0 * self.alpha - 1.0) / 4.0, (2.0 * self.beta - 1.0) / 4.0)
            .map_err(|_| Error::InvalidParams("half weight needs alpha, beta >= -1/2".into()))
    }

    /// Density of μ_{α,β} with respect to dθ on (0,π).
    pub fn mu_density(&self, theta: f64) -> f64 {
        let s = (0.5 * theta).sin();
        let c = (0.5 * theta).cos();
        s.powf(2.0 * self.alpha + 1.0) * c.powf(2.0 * self.beta + 1.0)
    }

    /// (sin θ/2)^{α+1/2} (cos θ/2)^{β+1/2}.
    pub fn half_density(&self, theta: f64) -> f64 {
        let s = (0.5 * theta).sin();
        let c = (0.5 * theta).cos();
        s.powf(self.alpha + 0.5) * c.powf(self.beta + 0.5)
    }
}

impl fmt::Display for JacobiParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha={}, beta={})", self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisFamily {
    /// 𝒫_k, orthonormal in L²((0,π), μ_{α,β}).
    TrigPolynomial,
    /// φ_k, orthonormal in L²((0,π), dθ).
    TrigFunction,
    /// ψ_k built from 𝒫, orthonormal in L²((−π,π), μ̃_{α,β}).
    SymTrigPolynomial,
    /// ψ_k built from φ, orthonormal in L²((−π,π), dθ).
    SymTrigFunction,
    /// Q_k = (sin θ/2) 𝒫_k^{α+1,β+1}, orthonormal in L²((0,π), μ_{α,β}).
    QPolynomial,
}

impl BasisFamily {
    pub const ALL: [BasisFamily; 5] = [
        BasisFamily::TrigPolynomial,
        BasisFamily::TrigFunction,
        BasisFamily::SymTrigPolynomial,
        BasisFamily::SymTrigFunction,
        BasisFamily::QPolynomial,
    ];

    pub fn is_symmetric(self) -> bool {
        matches!(self, BasisFamily::SymTrigPolynomial | BasisFamily::SymTrigFunction)
    }

    /// Function families are orthonormal under Lebesgue measure.
    pub fn is_function(self) -> bool {
        matches!(self, BasisFamily::TrigFunction | BasisFamily::SymTrigFunction)
    }

    pub fn domain(self) -> (f64, f64) {
        if self.is_symmetric() {
            (-PI, PI)
        } else {
            (0.0, PI)
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisFamily::TrigPolynomial => "trig-polynomial",
            BasisFamily::TrigFunction => "trig-function",
            BasisFamily::SymTrigPolynomial => "sym-trig-polynomial",
            BasisFamily::SymTrigFunction => "sym-trig-function",
            BasisFamily::QPolynomial => "q-polynomial",
        }
    }

    /// Checks the family-specific parameter restriction.
    pub fn validate(self, p: &JacobiParams) -> Result<()> {
        if self.is_function() && (p.alpha < -0.5 || p.beta < -0.5) {
            return Err(Error::InvalidParams(format!(
                "{} requires alpha, beta >= -1/2, got {p}",
                self.name()
            )));
        }
        Ok(())
    }
}

impl std::str::FromStr for BasisFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BasisFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown basis family '{s}'")))
    }
}

/// A d-dimensional tensor-product basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub d: usize,
    pub params: Vec<JacobiParams>,
    pub family: BasisFamily,
}

impl BasisSpec {
    pub fn new(family: BasisFamily, params: Vec<JacobiParams>) -> Result<Self> {
        let spec = BasisSpec { d: params.len(), params, family };
        spec.validate()?;
        Ok(spec)
    }

    pub fn one_dim(family: BasisFamily, p: JacobiParams) -> Result<Self> {
        BasisSpec::new(family, vec![p])
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidParams("dimension must be positive".into()));
        }
        if self.params.len() != self.d {
            return Err(Error::contract(format!(
                "spec has d={} but {} parameter pairs",
                self.d,
                self.params.len()
            )));
        }
        for p in &self.params {
            self.family.validate(p)?;
        }
        Ok(())
    }
}

/// Multi-index n = (n₁,…,n_d).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(n: Vec<usize>) -> Self {
        MultiIndex(n)
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    /// |n| = n₁+…+n_d.
    pub fn length(&self) -> usize {
        self.0.iter().sum()
    }

    /// All multi-indices with |n| = s, in lexicographic order.
    pub fn shell(d: usize, s: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; d];
        fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            let d = cur.len();
            if pos + 1 == d {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in 0..=left {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, out);
            }
        }
        if d > 0 {
            rec(0, s, &mut cur, &mut out);
        }
        out
    }

    /// All multi-indices with |n| ≤ k: shells ascending, lexicographic within a shell.
    pub fn up_to(d: usize, k: usize) -> Vec<MultiIndex> {
        (0..=k).flat_map(|s| MultiIndex::shell(d, s)).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// ln c_k^{α,β}.
pub fn ln_normalizing_const(k: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let lg = |x: f64| log_gamma(x).expect("positive gamma argument");
    let ln_sq = if k == 0 {
        lg(a + b + 2.0) - lg(a + 1.0) - lg(b + 1.0)
    } else {
        let kf = k as f64;
        (2.0 * kf + a + b + 1.0).ln() + lg(kf + a + b + 1.0) + lg(kf + 1.0) - lg(kf + a + 1.0) - lg(kf + b + 1.0)
    };
    0.5 * ln_sq
}

/// c_k^{α,β}, the factor making 𝒫_k = c_k P_k(cos θ) orthonormal under μ_{α,β}.
pub fn normalizing_const(k: usize, p: JacobiParams) -> f64 {
    ln_normalizing_const(k, p).exp()
}

/// P_k^{α,β}(x), the classical (unnormalized) Jacobi polynomial.
pub fn jacobi_poly(k: usize, p: JacobiParams, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("jacobi_poly requires |x| <= 1, got {x}")));
    }
    Ok(jacobi_poly_unchecked(k, p, x))
}

fn jacobi_poly_unchecked(k: usize, p: JacobiParams, x: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    if k == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, p1);
    for n in 2..=k {
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let lhs = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / lhs;
        prev = cur;
        cur = next;
    }
    cur
}

/// Diagonal entry a_n of the Jacobi matrix for the weight (1−x)^α(1+x)^β.
pub(crate) fn recurrence_a(n: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if n == 0 {
        return (b - a) / (a + b + 2.0);
    }
    let s = 2.0 * n as f64 + a + b;
    (b - a) * (b + a) / (s * (s + 2.0))
}

/// Off-diagonal entry b_n (n ≥ 1) of the Jacobi matrix.
pub(crate) fn recurrence_b(n: usize, p: JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if n == 1 {
        let s = 2.0 + a + b;
        return (4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0))).sqrt();
    }
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    (4.0 * nf * (nf + a) * (nf + b) * (nf + a + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
}

/// Streaming orthonormal recurrence: yields 𝒫_0(θ), 𝒫_1(θ), … at a fixed θ.
///
/// For θ ≤ π/2 the recurrence runs on u_k = 𝒫_k(θ)/𝒫_k(0) in difference
/// form, Δ_{k+1} = B_k Δ_k − A_k d u_k with d = 1 − cos θ = 2 sin²(θ/2), so
/// rounding errors grow like k instead of k² near θ = 0. For θ > π/2 the
/// stream runs at π − θ with (β, α) and flips the sign of odd terms.
#[derive(Debug, Clone)]
pub struct TrigPolyStream {
    p: JacobiParams,
    d: f64,
    flip: bool,
    k: usize,
    u: f64,
    delta: f64,
    rho: f64,
    at_zero: f64,
}

impl TrigPolyStream {
    pub fn new(p: JacobiParams, theta: f64) -> Self {
        TrigPolyStream::with_c0(p, theta, normalizing_const(0, p))
    }

    /// Same as `new` with c_0 supplied by the caller.
    pub(crate) fn with_c0(p: JacobiParams, theta: f64, c0: f64) -> Self {
        let flip = theta > FRAC_PI_2;
        let (p, t) = if flip { (p.swapped(), PI - theta) } else { (p, theta) };
        let d = 2.0 * (0.5 * t).sin().powi(2);
        TrigPolyStream { p, d, flip, k: 0, u: 1.0, delta: 0.0, rho: 1.0, at_zero: c0 }
    }
}

impl Iterator for TrigPolyStream {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        let k = self.k;
        let sign = if self.flip && k % 2 == 1 { -1.0 } else { 1.0 };
        let out = sign * self.at_zero * self.u;
        // ρ_k = 𝒫_{k+1}(0)/𝒫_k(0) from the recurrence at x = 1
        let one_minus_a = 1.0 - recurrence_a(k, self.p);
        let b_next = recurrence_b(k + 1, self.p);
        let rho = if k == 0 {
            one_minus_a / b_next
        } else {
            (one_minus_a - recurrence_b(k, self.p) / self.rho) / b_next
        };
        let a_coef = 1.0 / (b_next * rho);
        let b_coef = if k == 0 { 0.0 } else { a_coef * one_minus_a - 1.0 };
        self.delta = b_coef * self.delta - a_coef * self.d * self.u;
        self.u += self.delta;
        self.rho = rho;
        self.at_zero *= rho;
        self.k += 1;
        Some(out)
    }
}

fn check_half(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    Ok(())
}

fn check_full(theta: f64) -> Result<()> {
    if !(-PI..=PI).contains(&theta) {
        return Err(Error::domain(format!("theta must lie in [-pi, pi], got {theta}")));
    }
    Ok(())
}

/// 𝒫_k^{α,β}(θ) = c_k P_k(cos θ).
pub fn trig_poly(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    check_half(theta)?;
    Ok(TrigPolyStream::new(p, theta).nth(k).expect("stream is infinite"))
}

/// d𝒫_k/dθ = −½ √(k(k+2η)) 𝒫_{k−1}^{α+1,β+1}(θ) sin θ.
pub fn trig_poly_deriv(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    check_half(theta)?;
    if k == 0 {
        return Ok(0.0);
    }
    let kf = k as f64;
    let f = (kf * (kf + 2.0 * p.eta())).sqrt();
    Ok(-0.5 * f * trig_poly(k - 1, p.shifted(), theta)? * theta.sin())
}

/// φ_k = (sin θ/2)^{α+1/2}(cos θ/2)^{β+1/2} 𝒫_k.
pub fn trig_fun(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    Ok(p.half_density(theta) * trig_poly(k, p, theta)?)
}

/// Q_k = (sin θ / 2) 𝒫_k^{α+1,β+1}.
pub fn q_poly(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    Ok(0.5 * theta.sin() * trig_poly(k, p.shifted(), theta)?)
}

fn sgn(theta: f64) -> f64 {
    if theta > 0.0 {
        1.0
    } else if theta < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Symmetrized polynomial system ψ_k on (−π,π).
pub fn sym_trig_poly(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    check_full(theta)?;
    let t = theta.abs();
    if k.is_multiple_of(2) {
        Ok(FRAC_1_SQRT_2 * trig_poly(k / 2, p, t)?)
    } else {
        Ok(FRAC_1_SQRT_2 * 0.5 * theta.sin() * trig_poly(k / 2, p.shifted(), t)?)
    }
}

/// Symmetrized function system ψ_k on (−π,π); odd k at θ = 0 gives 0.
pub fn sym_trig_fun(k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    check_full(theta)?;
    let t = theta.abs();
    if k.is_multiple_of(2) {
        Ok(FRAC_1_SQRT_2 * trig_fun(k / 2, p, t)?)
    } else {
        Ok(FRAC_1_SQRT_2 * sgn(theta) * trig_fun(k / 2, p.shifted(), t)?)
    }
}

/// One-dimensional evaluation of any family.
pub fn eval_family(family: BasisFamily, k: usize, p: JacobiParams, theta: f64) -> Result<f64> {
    match family {
        BasisFamily::TrigPolynomial => trig_poly(k, p, theta),
        BasisFamily::TrigFunction => trig_fun(k, p, theta),
        BasisFamily::QPolynomial => q_poly(k, p, theta),
        BasisFamily::SymTrigPolynomial => sym_trig_poly(k, p, theta),
        BasisFamily::SymTrigFunction => sym_trig_fun(k, p, theta),
    }
}

/// λ_k = (k+η)².
pub fn eigenvalue(k: usize, p: JacobiParams) -> f64 {
    let v = k as f64 + p.eta();
    v * v
}

pub(crate) fn fill_trig_poly(p: JacobiParams, theta: f64, out: &mut [f64]) {
    let c0 = normalizing_const(0, p);
    for (o, v) in out.iter_mut().zip(TrigPolyStream::with_c0(p, theta, c0)) {
        *o = v;
    }
}

/// out[k] = 𝒫_k(θ) for k = 0..out.len().
pub fn trig_poly_all(p: JacobiParams, theta: f64, out: &mut [f64]) -> Result<()> {
    check_half(theta)?;
    fill_trig_poly(p, theta, out);
    Ok(())
}

/// out[k] = d𝒫_k/dθ for k = 0..out.len().
pub fn trig_poly_deriv_all(p: JacobiParams, theta: f64, out: &mut [f64]) -> Result<()> {
    check_half(theta)?;
    fill_trig_poly_deriv(p, theta, out);
    Ok(())
}

pub(crate) fn fill_trig_poly_deriv(p: JacobiParams, theta: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let two_eta = 2.0 * p.eta();
    let s = theta.sin();
    out[0] = 0.0;
    let stream = TrigPolyStream::new(p.shifted(), theta);
    for (k, v) in (1..out.len()).zip(stream) {
        let kf = k as f64;
        out[k] = -0.5 * (kf * (kf + two_eta)).sqrt() * v * s;
    }
}

/// out[k] = basis_k(θ) for k = 0..out.len(), any family.
pub fn family_all(family: BasisFamily, p: JacobiParams, theta: f64, out: &mut [f64]) -> Result<()> {
    match family {
        BasisFamily::SymTrigPolynomial | BasisFamily::SymTrigFunction => check_full(theta)?,
        _ => check_half(theta)?,
    }
    fill_family(family, p, theta, out);
    Ok(())
}

pub(crate) fn fill_family(family: BasisFamily, p: JacobiParams, theta: f64, out: &mut [f64]) {
    match family {
        BasisFamily::TrigPolynomial => fill_trig_poly(p, theta, out),
        BasisFamily::TrigFunction => {
            fill_trig_poly(p, theta, out);
            let w = p.half_density(theta);
            out.iter_mut().for_each(|v| *v *= w);
        }
        BasisFamily::QPolynomial => {
            fill_trig_poly(p.shifted(), theta, out);
            let w = 0.5 * theta.sin();
            out.iter_mut().for_each(|v| *v *= w);
        }
        BasisFamily::SymTrigPolynomial | BasisFamily::SymTrigFunction => {
            let t = theta.abs();
            let n_even = out.len().div_ceil(2);
            let n_odd = out.len() / 2;
            let mut even = vec![0.0; n_even];
            let mut odd = vec![0.0; n_odd];
            fill_trig_poly(p, t, &mut even);
            fill_trig_poly(p.shifted(), t, &mut odd);
            let (we, wo) = if family == BasisFamily::SymTrigPolynomial {
                (FRAC_1_SQRT_2, FRAC_1_SQRT_2 * 0.5 * theta.sin())
            } else {
                (FRAC_1_SQRT_2 * p.half_density(t), FRAC_1_SQRT_2 * sgn(theta) * p.shifted().half_density(t))
            };
            for (m, v) in even.iter().enumerate() {
                out[2 * m] = we * v;
            }
            for (m, v) in odd.iter().enumerate() {
                out[2 * m + 1] = wo * v;
            }
        }
    }
}

/// Which second-order operator to apply in [`operator_apply_fd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobiOperator {
    /// 𝒥 = −d²/dθ² − ((α−β+2η cos θ)/sin θ) d/dθ + η², acting on 𝒫_k.
    Polynomial,
    /// 𝕁 = −d²/dθ² + (α²−1/4)/(4 sin²(θ/2)) + (β²−1/4)/(4 cos²(θ/2)), acting on φ_k.
    Function,
}

/// Applies 𝒥 or 𝕁 to the matching basis function with a central second difference.
pub fn operator_apply_fd(op: JacobiOperator, k: usize, p: JacobiParams, theta: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain("step h must be positive"));
    }
    if !(theta > h && theta < PI - h) {
        return Err(Error::domain(format!("theta={theta} too close to an endpoint for step {h}")));
    }
    let (a, b, eta) = (p.alpha, p.beta, p.eta());
    match op {
        JacobiOperator::Polynomial => {
            let f = |t: f64| trig_poly(k, p, t);
            let second = (f(theta + h)? - 2.0 * f(theta)? + f(theta - h)?) / (h * h);
            let drift = (a - b + 2.0 * eta * theta.cos()) / theta.sin();
            Ok(-second - drift * trig_poly_deriv(k, p, theta)? + eta * eta * f(theta)?)
        }
        JacobiOperator::Function => {
            let f = |t: f64| trig_fun(k, p, t);
            let second = (f(theta + h)? - 2.0 * f(theta)? + f(theta - h)?) / (h * h);
            let s = (0.5 * theta).sin();
            let c = (0.5 * theta).cos();
            let potential = (a * a - 0.25) / (4.0 * s * s) + (b * b - 0.25) / (4.0 * c * c);
            Ok(-second + potential * f(theta)?)
        }
    }
}

/// Product over axes of the one-dimensional family values.
pub fn tensor_eval(spec: &BasisSpec, n: &MultiIndex, theta: &[f64]) -> Result<f64> {
    if n.d() != spec.d || theta.len() != spec.d {
        return Err(Error::contract(format!(
            "dimension mismatch: spec d={}, index d={}, point d={}",
            spec.d,
            n.d(),
            theta.len()
        )));
    }
    let mut v = 1.0;
    for i in 0..spec.d {
        v *= eval_family(spec.family, n.0[i], spec.params[i], theta[i])?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(0.0, f64::NAN).is_err());
        assert_eq!(p(1.0, 2.0).eta(), 2.0);
        let json = serde_json::to_string(&p(0.5, -0.3)).unwrap();
        assert_eq!(serde_json::from_str::<JacobiParams>(&json).unwrap(), p(0.5, -0.3));
        assert!(serde_json::from_str::<JacobiParams>(r#"{"alpha":-2.0,"beta":0.0}"#).is_err());
    }

    #[test]
    fn function_family_needs_half() {
        assert!(BasisSpec::one_dim(BasisFamily::TrigFunction, p(-0.7, 0.0)).is_err());
        assert!(BasisSpec::one_dim(BasisFamily::TrigPolynomial, p(-0.7, 0.0)).is_ok());
    }

    #[test]
    fn shells_are_lexicographic() {
        let s = MultiIndex::shell(2, 2);
        let want = vec![vec![0, 2], vec![1, 1], vec![2, 0]];
        assert_eq!(s.into_iter().map(|m| m.0).collect::<Vec<_>>(), want);
        assert_eq!(MultiIndex::up_to(3, 4).len(), 35);
    }

    #[test]
    fn stream_matches_classical() {
        let q = p(1.5, -0.3);
        let mut out = vec![0.0; 40];
        trig_poly_all(q, 0.7, &mut out).unwrap();
        for (k, v) in out.iter().enumerate() {
            let direct = trig_poly(k, q, 0.7).unwrap();
            assert!((v - direct).abs() <= 1e-12 * (1.0 + direct.abs()), "k={k}");
        }
    }

    #[test]
    fn out_of_domain() {
        assert!(trig_poly(1, p(0.0, 0.0), -0.1).is_err());
        assert!(jacobi_poly(1, p(0.0, 0.0), 1.5).is_err());
        assert!(sym_trig_poly(1, p(0.0, 0.0), 4.0).is_err());
        assert!(operator_apply_fd(JacobiOperator::Function, 1, p(0.0, 0.0), 1e-5, 1e-4).is_err());
    }
}
