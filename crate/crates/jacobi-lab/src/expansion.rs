//! Expansion coefficients, Hardy sums, Parseval diagnostics, parity
//! decomposition and the admissible-exponent arithmetic.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atoms::{AtomKind, PiecewiseConstant1d, PiecewiseConstantAtom};
use crate::bases::{fill_family, fill_trig_poly, BasisFamily, BasisSpec, JacobiParams, MultiIndex};
use crate::error::{Error, Result};
use crate::quadrature::{composite_mu_rule, lebesgue_params, mirror_rule, MeasureTag, QuadratureRule};
use crate::specfun::Tolerance;

/// Declared regularity of a sampled function.
#[derive(Debug, Clone, PartialEq)]
pub enum Smoothness {
    Smooth,
    /// Jump locations per axis; used as quadrature panel boundaries.
    Breakpoints(Vec<Vec<f64>>),
}

type Callable = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function given by a callable on the basis domain.
#[derive(Clone)]
pub struct SampledFunction {
    pub d: usize,
    pub f: Callable,
    pub smoothness: Smoothness,
}

impl SampledFunction {
    pub fn new(d: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, smoothness: Smoothness) -> Self {
        SampledFunction { d, f: Arc::new(f), smoothness }
    }

    fn breaks(&self, axis: usize) -> Vec<f64> {
        match &self.smoothness {
            Smoothness::Smooth => vec![],
            Smoothness::Breakpoints(b) => b.get(axis).cloned().unwrap_or_default(),
        }
    }
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction").field("d", &self.d).field("smoothness", &self.smoothness).finish()
    }
}

#[derive(Debug, Clone)]
pub enum FunctionDescriptor {
    PiecewiseConstant(PiecewiseConstantAtom),
    Sampled(SampledFunction),
}

impl FunctionDescriptor {
    pub fn d(&self) -> usize {
        match self {
            FunctionDescriptor::PiecewiseConstant(a) => a.d(),
            FunctionDescriptor::Sampled(s) => s.d,
        }
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        match self {
            FunctionDescriptor::PiecewiseConstant(a) => a.eval(theta),
            FunctionDescriptor::Sampled(s) => (s.f)(theta),
        }
    }
}

impl From<PiecewiseConstantAtom> for FunctionDescriptor {
    fn from(a: PiecewiseConstantAtom) -> Self {
        FunctionDescriptor::PiecewiseConstant(a)
    }
}

impl From<SampledFunction> for FunctionDescriptor {
    fn from(s: SampledFunction) -> Self {
        FunctionDescriptor::Sampled(s)
    }
}

/// ⟨f, basis_n⟩ for every |n| ≤ K, shells ascending and lexicographic within a shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub spec: BasisSpec,
    pub cutoff: usize,
    pub entries: Vec<(MultiIndex, f64)>,
}

impl CoefficientTable {
    /// Builds a table from a value function on the index set.
    pub fn from_fn(spec: BasisSpec, cutoff: usize, mut value: impl FnMut(&MultiIndex) -> f64) -> Self {
        let entries = MultiIndex::up_to(spec.d, cutoff).into_iter().map(|n| {
            let v = value(&n);
            (n, v)
        });
        CoefficientTable { entries: entries.collect(), spec, cutoff }
    }

    pub fn get(&self, n: &MultiIndex) -> Option<f64> {
        if n.d() != self.spec.d || n.length() > self.cutoff {
            return None;
        }
        // entries are in a fixed order, so locate the shell then search within it
        self.entries.iter().find(|(m, _)| m == n).map(|e| e.1)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let head: Vec<String> = (1..=self.spec.d).map(|i| format!("n{i}")).collect();
        s.push_str(&head.join(","));
        s.push_str(",coefficient\n");
        for (n, v) in &self.entries {
            for i in &n.0 {
                s.push_str(&i.to_string());
                s.push(',');
            }
            s.push_str(&format!("{v:.16e}\n"));
        }
        s
    }

    /// Parses CSV produced by [`CoefficientTable::to_csv`] for the given spec.
    pub fn from_csv(spec: BasisSpec, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Serialization("empty CSV".into()))?;
        if header.split(',').count() != spec.d + 1 {
            return Err(Error::Serialization("CSV header does not match dimension".into()));
        }
        let mut entries = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != spec.d + 1 {
                return Err(Error::Serialization(format!("bad CSV row '{line}'")));
            }
            let n = cols[..spec.d]
                .iter()
                .map(|c| c.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Serialization(e.to_string()))?;
            let v: f64 = cols[spec.d].trim().parse().map_err(|e: std::num::ParseFloatError| Error::Serialization(e.to_string()))?;
            entries.push((MultiIndex(n), v));
        }
        let cutoff = entries.iter().map(|e| e.0.length()).max().unwrap_or(0);
        Ok(CoefficientTable { spec, cutoff, entries })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Measure under which the family is orthonormal (one axis).
pub fn family_measure(family: BasisFamily, p: JacobiParams) -> MeasureTag {
    match family {
        BasisFamily::TrigPolynomial | BasisFamily::QPolynomial => MeasureTag::mu(p),
        BasisFamily::SymTrigPolynomial => MeasureTag::mu_tilde(p),
        BasisFamily::TrigFunction => MeasureTag::lebesgue(0.0, PI),
        BasisFamily::SymTrigFunction => MeasureTag::lebesgue(-PI, PI),
    }
}

/// One-axis inner products reduced to integrals against a Jacobi measure.
///
/// For class c, ⟨g, basis_n⟩ = ∫ g · r_n dμ_c (mirrored on (−π,0) for the
/// symmetric families), where r_n is filled by [`AxisReduction::fill`].
/// Function families absorb the half density into the measure.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AxisReduction {
    family: BasisFamily,
    p: JacobiParams,
}

impl AxisReduction {
    pub(crate) fn new(family: BasisFamily, p: JacobiParams) -> Result<Self> {
        family.validate(&p)?;
        Ok(AxisReduction { family, p })
    }

    pub(crate) fn classes(&self) -> usize {
        if self.family == BasisFamily::SymTrigFunction {
            2
        } else {
            1
        }
    }

    pub(crate) fn class_of(&self, n: usize) -> usize {
        if self.classes() == 2 {
            n % 2
        } else {
            0
        }
    }

    pub(crate) fn measure(&self, class: usize) -> MeasureTag {
        let params = match self.family {
            BasisFamily::TrigPolynomial | BasisFamily::QPolynomial | BasisFamily::SymTrigPolynomial => self.p,
            BasisFamily::TrigFunction => self.p.half_weight().expect("validated"),
            BasisFamily::SymTrigFunction => {
                if class == 0 {
                    self.p.half_weight().expect("validated")
                } else {
                    self.p.shifted().half_weight().expect("validated")
                }
            }
        };
        if self.family.is_symmetric() {
            MeasureTag::mu_tilde(params)
        } else {
            MeasureTag::mu(params)
        }
    }

    /// Fills out[n] = r_n(θ) for all n < out.len() of the given class.
    pub(crate) fn fill(&self, class: usize, theta: f64, out: &mut [f64]) {
        match self.family {
            BasisFamily::TrigPolynomial | BasisFamily::QPolynomial | BasisFamily::SymTrigPolynomial => {
                fill_family(self.family, self.p, theta, out)
            }
            BasisFamily::TrigFunction => fill_trig_poly(self.p, theta, out),
            BasisFamily::SymTrigFunction => {
                let t = theta.abs();
                let (q, start, w) = if class == 0 {
                    (self.p, 0, FRAC_1_SQRT_2)
                } else {
                    let s = if theta > 0.0 {
                        1.0
                    } else if theta < 0.0 {
                        -1.0
                    } else {
                        0.0
                    };
                    (self.p.shifted(), 1, s * FRAC_1_SQRT_2)
                };
                let m = (out.len() + 1 - start) / 2;
                let mut tmp = vec![0.0; m];
                fill_trig_poly(q, t, &mut tmp);
                for (j, v) in tmp.iter().enumerate() {
                    out[2 * j + start] = w * v;
                }
            }
        }
    }
}

/// One-dimensional coefficients of a step function, n = 0..=k.
pub(crate) fn step_coefficients(
    red: &AxisReduction,
    step: &PiecewiseConstant1d,
    k: usize,
    tol: Tolerance,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; k + 1];
    for class in 0..red.classes() {
        let m = red.measure(class);
        for (lo, hi, v) in step.pieces() {
            if v == 0.0 {
                continue;
            }
            let mut pieces = vec![(lo, hi)];
            if lo < 0.0 && hi > 0.0 {
                pieces = vec![(lo, 0.0), (0.0, hi)];
            }
            for (a, b) in pieces {
                let ints = m.integrate_vec(|t, o| red.fill(class, t, o), k + 1, a, b, tol)?;
                for (n, x) in ints.into_iter().enumerate() {
                    if red.class_of(n) == class {
                        out[n] += v * x;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn check_domain(f: &FunctionDescriptor, spec: &BasisSpec) -> Result<()> {
    if f.d() != spec.d {
        return Err(Error::contract(format!("function has d={} but spec has d={}", f.d(), spec.d)));
    }
    if let FunctionDescriptor::PiecewiseConstant(a) = f {
        let (lo, hi) = spec.family.domain();
        for ax in &a.axes {
            if ax.breakpoints[0] < lo - 1e-15 || *ax.breakpoints.last().unwrap() > hi + 1e-15 {
                return Err(Error::contract("function support leaves the family domain"));
            }
        }
    }
    Ok(())
}

/// ⟨f, basis_n⟩ for all |n| ≤ K.
pub fn coefficients(f: &FunctionDescriptor, spec: &BasisSpec, k: usize, tol: Tolerance) -> Result<CoefficientTable> {
    spec.validate()?;
    check_domain(f, spec)?;
    match f {
        FunctionDescriptor::PiecewiseConstant(atom) => {
            let axes = (0..spec.d)
                .into_par_iter()
                .map(|i| step_coefficients(&AxisReduction::new(spec.family, spec.params[i])?, &atom.axes[i], k, tol))
                .collect::<Result<Vec<_>>>()?;
            Ok(CoefficientTable::from_fn(spec.clone(), k, |n| n.0.iter().enumerate().map(|(i, &j)| axes[i][j]).product()))
        }
        FunctionDescriptor::Sampled(s) => sampled_coefficients(s, spec, k, tol),
    }
}

/// Per-axis rule for a reduction class at a refinement level.
fn axis_rule(measure: MeasureTag, breaks: &[f64], levels: usize) -> Result<QuadratureRule> {
    match measure {
        MeasureTag::Mu { params } => composite_mu_rule(params, breaks, 20, levels),
        MeasureTag::MuTilde { params } => {
            let abs_breaks: Vec<f64> = breaks.iter().map(|b| b.abs()).collect();
            let half = composite_mu_rule(params, &abs_breaks, 20, levels)?;
            Ok(mirror_rule(&half, measure))
        }
        _ => Err(Error::contract("axis rules are built for Jacobi measures only")),
    }
}

/// Sum-factorized tensor quadrature: returns a dense (K+1)^d array of
/// Σ_grid w f Π r_{n_i}, restricted to classes `pattern`.
fn tensor_contract(
    f: &SampledFunction,
    rules: &[&QuadratureRule],
    reds: &[AxisReduction],
    pattern: &[usize],
    k: usize,
) -> Vec<f64> {
    let d = rules.len();
    let sizes: Vec<usize> = rules.iter().map(|r| r.len()).collect();
    let total: usize = sizes.iter().product();
    // function values on the full grid, row-major in axis order
    let grid: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut pt = vec![0.0; d];
            let mut w = 1.0;
            for ax in (0..d).rev() {
                let j = idx % sizes[ax];
                idx /= sizes[ax];
                pt[ax] = rules[ax].nodes[j];
                w *= rules[ax].weights[j];
            }
            w * (f.f)(&pt)
        })
        .collect();
    // basis tables per axis: node j -> r_n for n = 0..=k
    let tables: Vec<Vec<f64>> = (0..d)
        .map(|ax| {
            let mut t = vec![0.0; sizes[ax] * (k + 1)];
            for (j, &x) in rules[ax].nodes.iter().enumerate() {
                reds[ax].fill(pattern[ax], x, &mut t[j * (k + 1)..(j + 1) * (k + 1)]);
            }
            t
        })
        .collect();
    // contract the last remaining grid axis repeatedly
    let mut arr = grid;
    let mut prefix: usize = total;
    let mut suffix = 1usize;
    for ax in (0..d).rev() {
        let g = sizes[ax];
        prefix /= g;
        let mut next = vec![0.0; prefix * (k + 1) * suffix];
        let tab = &tables[ax];
        next.par_chunks_mut((k + 1) * suffix).enumerate().for_each(|(pi, out)| {
            for j in 0..g {
                let src = &arr[(pi * g + j) * suffix..(pi * g + j + 1) * suffix];
                let row = &tab[j * (k + 1)..(j + 1) * (k + 1)];
                for (n, &r) in row.iter().enumerate() {
                    if r == 0.0 {
                        continue;
                    }
                    let dst = &mut out[n * suffix..(n + 1) * suffix];
                    dst.iter_mut().zip(src).for_each(|(o, s)| *o += r * s);
                }
            }
        });
        arr = next;
        suffix *= k + 1;
    }
    arr
}

fn sampled_table_at(s: &SampledFunction, spec: &BasisSpec, k: usize, levels: usize) -> Result<Vec<f64>> {
    let d = spec.d;
    let reds = spec.params.iter().map(|&p| AxisReduction::new(spec.family, p)).collect::<Result<Vec<_>>>()?;
    let rules: Vec<Vec<QuadratureRule>> = (0..d)
        .map(|ax| (0..reds[ax].classes()).map(|c| axis_rule(reds[ax].measure(c), &s.breaks(ax), levels)).collect())
        .collect::<Result<_>>()?;
    let n_patterns: usize = reds.iter().map(|r| r.classes()).product();
    let mut dense = vec![0.0; (k + 1).pow(d as u32)];
    for pat_idx in 0..n_patterns {
        let mut pattern = vec![0; d];
        let mut rem = pat_idx;
        for ax in (0..d).rev() {
            pattern[ax] = rem % reds[ax].classes();
            rem /= reds[ax].classes();
        }
        let rule_refs: Vec<&QuadratureRule> = (0..d).map(|ax| &rules[ax][pattern[ax]]).collect();
        let arr = tensor_contract(s, &rule_refs, &reds, &pattern, k);
        for (flat, v) in arr.into_iter().enumerate() {
            let mut rem = flat;
            let mut in_pattern = true;
            for ax in (0..d).rev() {
                let n = rem % (k + 1);
                rem /= k + 1;
                in_pattern &= reds[ax].class_of(n) == pattern[ax];
            }
            if in_pattern {
                dense[flat] = v;
            }
        }
    }
    Ok(dense)
}

fn dense_index(n: &MultiIndex, k: usize) -> usize {
    n.0.iter().fold(0, |acc, &j| acc * (k + 1) + j)
}

fn sampled_coefficients(s: &SampledFunction, spec: &BasisSpec, k: usize, tol: Tolerance) -> Result<CoefficientTable> {
    let mut levels = 4usize;
    let mut prev = sampled_table_at(s, spec, k, levels)?;
    loop {
        levels *= 2;
        let cur = sampled_table_at(s, spec, k, levels)?;
        let scale = cur.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let diff = cur.iter().zip(&prev).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if diff <= (tol.rel * scale).max(tol.abs) {
            return Ok(CoefficientTable::from_fn(spec.clone(), k, |n| cur[dense_index(n, k)]));
        }
        let nodes_per_axis = 20 * 4 * levels;
        if nodes_per_axis.pow(spec.d as u32) > tol.max_terms.max(1 << 16) * 64 || levels >= 256 {
            return Err(Error::Accuracy { estimate: scale, error_bound: diff });
        }
        prev = cur;
    }
}

/// Σ_{|n|≤K} |entry(n)| / (|n|+1)^E, compensated summation shell by shell.
pub fn hardy_sum(table: &CoefficientTable, e: f64) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (n, v) in &table.entries {
        let term = v.abs() / ((n.length() + 1) as f64).powf(e);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// ∫|f|² over the family's measure.
pub fn norm_squared(f: &FunctionDescriptor, spec: &BasisSpec, tol: Tolerance) -> Result<f64> {
    check_domain(f, spec)?;
    match f {
        FunctionDescriptor::PiecewiseConstant(atom) => {
            let mut total = 1.0;
            for (i, ax) in atom.axes.iter().enumerate() {
                let m = family_measure(spec.family, spec.params[i]);
                let mut s = 0.0;
                for (lo, hi, v) in ax.pieces() {
                    if v != 0.0 {
                        s += v * v * m.measure_of(lo, hi, tol)?;
                    }
                }
                total *= s;
            }
            Ok(total)
        }
        FunctionDescriptor::Sampled(s) => {
            let measures: Vec<MeasureTag> = (0..spec.d)
                .map(|i| {
                    let p = if spec.family.is_function() { lebesgue_params() } else { spec.params[i] };
                    if spec.family.is_symmetric() {
                        MeasureTag::mu_tilde(p)
                    } else {
                        MeasureTag::mu(p)
                    }
                })
                .collect();
            let at = |levels: usize| -> Result<f64> {
                let rules = (0..spec.d).map(|i| axis_rule(measures[i], &s.breaks(i), levels)).collect::<Result<Vec<_>>>()?;
                let sizes: Vec<usize> = rules.iter().map(|r| r.len()).collect();
                let total: usize = sizes.iter().product();
                Ok((0..total)
                    .into_par_iter()
                    .map(|mut idx| {
                        let mut pt = vec![0.0; spec.d];
                        let mut w = 1.0;
                        for ax in (0..spec.d).rev() {
                            let j = idx % sizes[ax];
                            idx /= sizes[ax];
                            pt[ax] = rules[ax].nodes[j];
                            w *= rules[ax].weights[j];
                        }
                        let v = (s.f)(&pt);
                        w * v * v
                    })
                    .sum())
            };
            let mut levels = 4;
            let mut prev = at(levels)?;
            loop {
                levels *= 2;
                let cur = at(levels)?;
                if (cur - prev).abs() <= (tol.rel * cur.abs()).max(tol.abs) {
                    return Ok(cur);
                }
                if levels >= 512 {
                    return Err(Error::Accuracy { estimate: cur, error_bound: (cur - prev).abs() });
                }
                prev = cur;
            }
        }
    }
}

/// ‖f‖² − Σ_{|n|≤K} ⟨f, basis_n⟩².
pub fn parseval_defect(f: &FunctionDescriptor, spec: &BasisSpec, k: usize, tol: Tolerance) -> Result<f64> {
    let table = coefficients(f, spec, k, tol)?;
    let norm = norm_squared(f, spec, tol)?;
    Ok(norm - table.values().map(|v| v * v).sum::<f64>())
}

/// f_σ = 2^{−d} Σ_ε ε^σ f(ε·), even in axis i when σ_i = 0 and odd when σ_i = 1.
pub fn parity_components(f: &FunctionDescriptor, sigma: &[u8]) -> Result<FunctionDescriptor> {
    if sigma.len() != f.d() || sigma.iter().any(|&s| s > 1) {
        return Err(Error::contract("sigma must be a 0/1 vector of length d"));
    }
    match f {
        FunctionDescriptor::PiecewiseConstant(atom) => {
            let mut axes = Vec::with_capacity(atom.d());
            for (ax, &s) in atom.axes.iter().zip(sigma) {
                let refl = ax.reflected();
                let mut bps: Vec<f64> = ax.breakpoints.iter().chain(&refl.breakpoints).copied().collect();
                bps.sort_by(f64::total_cmp);
                bps.dedup();
                let sign = if s == 0 { 1.0 } else { -1.0 };
                let values = bps
                    .windows(2)
                    .map(|w| {
                        let m = 0.5 * (w[0] + w[1]);
                        0.5 * (ax.eval(m) + sign * ax.eval(-m))
                    })
                    .collect();
                axes.push(PiecewiseConstant1d::new(bps, values)?);
            }
            let mut meta = atom.metadata.clone();
            meta.kind = AtomKind::Custom;
            Ok(FunctionDescriptor::PiecewiseConstant(PiecewiseConstantAtom::new(axes, atom.measures.clone(), meta)?))
        }
        FunctionDescriptor::Sampled(s) => {
            let g = s.f.clone();
            let sigma: Vec<u8> = sigma.to_vec();
            let d = s.d;
            let breaks = match &s.smoothness {
                Smoothness::Smooth => Smoothness::Smooth,
                Smoothness::Breakpoints(b) => Smoothness::Breakpoints(
                    b.iter().map(|ax| ax.iter().flat_map(|&x| [x, -x]).collect()).collect(),
                ),
            };
            Ok(FunctionDescriptor::Sampled(SampledFunction::new(
                d,
                move |theta| {
                    let mut acc = 0.0;
                    let mut pt = vec![0.0; d];
                    for mask in 0..(1usize << d) {
                        let mut sign = 1.0;
                        for i in 0..d {
                            let neg = mask >> i & 1 == 1;
                            pt[i] = if neg { -theta[i] } else { theta[i] };
                            if neg && sigma[i] == 1 {
                                sign = -sign;
                            }
                        }
                        acc += sign * g(&pt);
                    }
                    acc / (1usize << d) as f64
                },
                breaks,
            )))
        }
    }
}

/// Restriction of a function on (−π,π)^d to (0,π)^d.
pub fn restrict_positive(f: &FunctionDescriptor) -> Result<FunctionDescriptor> {
    match f {
        FunctionDescriptor::PiecewiseConstant(atom) => {
            let axes = atom.axes.iter().map(|a| a.restricted(0.0, PI)).collect::<Result<Vec<_>>>()?;
            let measures = atom
                .measures
                .iter()
                .map(|m| match *m {
                    MeasureTag::MuTilde { params } => MeasureTag::mu(params),
                    MeasureTag::Lebesgue { .. } => MeasureTag::lebesgue(0.0, PI),
                    other => other,
                })
                .collect();
            let mut meta = atom.metadata.clone();
            meta.kind = AtomKind::Custom;
            Ok(FunctionDescriptor::PiecewiseConstant(PiecewiseConstantAtom::new(axes, measures, meta)?))
        }
        FunctionDescriptor::Sampled(s) => Ok(FunctionDescriptor::Sampled(s.clone())),
    }
}

/// Inputs of the general Hardy-inequality exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyParameters {
    /// Ahlfors parameter N.
    pub n: f64,
    pub gamma: f64,
    pub delta: Vec<f64>,
    pub d: usize,
}

impl HardyParameters {
    pub fn new(n: f64, gamma: f64, delta: Vec<f64>, d: usize) -> Result<Self> {
        if !(n > 0.0 && gamma > 0.0 && d > 0) {
            return Err(Error::InvalidParams("need N > 0, gamma > 0, d > 0".into()));
        }
        if delta.is_empty() || delta.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidParams("Delta must be a non-empty set of positive numbers".into()));
        }
        Ok(HardyParameters { n, gamma, delta, d })
    }

    /// N = 2d + 2S, γ = d + 1 + S, Δ = {1}, S = Σ max(αᵢ, βᵢ, −1/2).
    pub fn polynomial_setting(params: &[JacobiParams]) -> Result<Self> {
        let d = params.len() as f64;
        let s: f64 = params.iter().map(|p| p.max_exponent()).sum();
        HardyParameters::new(2.0 * d + 2.0 * s, d + 1.0 + s, vec![1.0], params.len())
    }

    /// N = d, γ = (d+2)/2, Δ = {1} ∪ {αᵢ+1/2, βᵢ+1/2} \ {0}.
    pub fn function_setting(params: &[JacobiParams]) -> Result<Self> {
        let d = params.len() as f64;
        let mut delta = vec![1.0];
        for p in params {
            for x in [p.alpha() + 0.5, p.beta() + 0.5] {
                if x > 0.0 && !delta.contains(&x) {
                    delta.push(x);
                }
            }
        }
        HardyParameters::new(d, (d + 2.0) / 2.0, delta, params.len())
    }
}

/// E = γN/(N+2) + d/2.
pub fn admissible_exponent(hp: &HardyParameters) -> f64 {
    hp.gamma * hp.n / (hp.n + 2.0) + hp.d as f64 / 2.0
}

pub type Rational = Ratio<i64>;

/// E = γN/(N+2) + d/2 in exact rational arithmetic.
pub fn admissible_exponent_exact(n: Rational, gamma: Rational, d: i64) -> Result<Rational> {
    if n <= Rational::from_integer(0) || gamma <= Rational::from_integer(0) || d <= 0 {
        return Err(Error::InvalidParams("need N > 0, gamma > 0, d > 0".into()));
    }
    Ok(gamma * n / (n + Rational::from_integer(2)) + Rational::new(d, 2))
}

/// (N, γ) of the polynomial setting for rational max(αᵢ, βᵢ, −1/2).
pub fn polynomial_setting_exact(max_exponents: &[Rational]) -> (Rational, Rational) {
    let d = Rational::from_integer(max_exponents.len() as i64);
    let s: Rational = max_exponents.iter().copied().sum();
    let two = Rational::from_integer(2);
    (two * d + two * s, d + Rational::from_integer(1) + s)
}

/// (N, γ) of the function setting.
pub fn function_setting_exact(d: i64) -> (Rational, Rational) {
    (Rational::from_integer(d), Rational::new(d + 2, 2))
}

/// Gram matrix of the first `size` one-dimensional basis functions under the family's measure.
pub fn gram_matrix(family: BasisFamily, p: JacobiParams, size: usize, tol: Tolerance) -> Result<Vec<Vec<f64>>> {
    family.validate(&p)?;
    let m = family_measure(family, p);
    let (lo, hi) = m.domain();
    let mut buf = vec![0.0; size];
    let flat = m.integrate_vec(
        |t, out| {
            fill_family(family, p, t, &mut buf);
            for i in 0..size {
                for j in 0..size {
                    out[i * size + j] = buf[i] * buf[j];
                }
            }
        },
        size * size,
        lo,
        hi,
        tol,
    )?;
    Ok(flat.chunks(size).map(|r| r.to_vec()).collect())
}
