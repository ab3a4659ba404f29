//! Piecewise-constant atoms used to probe sharpness of Hardy exponents.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::bases::JacobiParams;
use crate::error::{Error, Result};
use crate::quadrature::MeasureTag;
use crate::specfun::Tolerance;

/// A step function on one axis: `values[i]` on (breakpoints[i], breakpoints[i+1]].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstant1d {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseConstant1d {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::contract(format!(
                "need n+1 breakpoints for n values (got {} and {})",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::contract("breakpoints must be finite and strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::contract("values must be finite"));
        }
        Ok(PiecewiseConstant1d { breakpoints, values })
    }

    /// Iterator over (lo, hi, value).
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let b = &self.breakpoints;
        if x <= b[0] || x > b[b.len() - 1] {
            // the first piece is closed at an endpoint of the domain
            if x == b[0] && (b[0] == 0.0 || b[0] == -PI) {
                return self.values[0];
            }
            return 0.0;
        }
        let i = b.partition_point(|&t| t < x);
        self.values[i - 1]
    }

    /// Smallest interval containing every piece with a non-zero value.
    pub fn support(&self) -> Option<(f64, f64)> {
        let nz: Vec<(f64, f64)> = self.pieces().filter(|p| p.2 != 0.0).map(|p| (p.0, p.1)).collect();
        Some((nz.first()?.0, nz.last()?.1))
    }

    /// Reflection θ ↦ π − θ.
    pub fn mirrored_at_pi(&self) -> PiecewiseConstant1d {
        PiecewiseConstant1d {
            breakpoints: self.breakpoints.iter().rev().map(|b| PI - b).collect(),
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// Reflection θ ↦ −θ.
    pub fn reflected(&self) -> PiecewiseConstant1d {
        PiecewiseConstant1d {
            breakpoints: self.breakpoints.iter().rev().map(|b| -b).collect(),
            values: self.values.iter().rev().copied().collect(),
        }
    }

    /// Restriction to [lo, hi].
    pub fn restricted(&self, lo: f64, hi: f64) -> Result<PiecewiseConstant1d> {
        let mut bps = vec![lo];
        bps.extend(self.breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
        bps.push(hi);
        let values = bps.windows(2).map(|w| self.eval(0.5 * (w[0] + w[1]))).collect();
        PiecewiseConstant1d::new(bps, values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomKind {
    /// Two-level atom near the endpoint, large parameter.
    PolA,
    /// Endpoint piece balanced by a piece around π/2, small parameter.
    PolB,
    /// Lebesgue-measure two-level atom.
    Fun,
    /// Tensor product of one-dimensional pieces.
    Tensor,
    /// a ≡ μ(X)^{−1}.
    Constant,
    /// Any other step function.
    Custom,
}

/// Construction parameters carried alongside an atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomMetadata {
    pub kind: AtomKind,
    pub k: Option<usize>,
    pub delta: Option<f64>,
    pub c: Option<f64>,
    pub epsilon: Option<f64>,
    pub q: Option<f64>,
    /// C_{δ,K} or C_K, per axis.
    pub normalization: Vec<f64>,
    /// Exponents actually used for the K-powers, per axis.
    pub powers: Vec<f64>,
}

impl AtomMetadata {
    pub fn custom() -> Self {
        AtomMetadata {
            kind: AtomKind::Custom,
            k: None,
            delta: None,
            c: None,
            epsilon: None,
            q: None,
            normalization: vec![],
            powers: vec![],
        }
    }
}

/// A tensor product of one-dimensional step functions with per-axis measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantAtom {
    pub axes: Vec<PiecewiseConstant1d>,
    pub measures: Vec<MeasureTag>,
    pub metadata: AtomMetadata,
}

impl PiecewiseConstantAtom {
    pub fn new(axes: Vec<PiecewiseConstant1d>, measures: Vec<MeasureTag>, metadata: AtomMetadata) -> Result<Self> {
        if axes.is_empty() || axes.len() != measures.len() {
            return Err(Error::contract("need one measure per axis and at least one axis"));
        }
        for (ax, m) in axes.iter().zip(&measures) {
            let (lo, hi) = m.domain();
            if ax.breakpoints[0] < lo || *ax.breakpoints.last().unwrap() > hi {
                return Err(Error::contract(format!("breakpoints leave the measure domain [{lo}, {hi}]")));
            }
        }
        Ok(PiecewiseConstantAtom { axes, measures, metadata })
    }

    /// One-dimensional step function with custom metadata.
    pub fn from_pieces(breakpoints: Vec<f64>, values: Vec<f64>, measure: MeasureTag) -> Result<Self> {
        PiecewiseConstantAtom::new(vec![PiecewiseConstant1d::new(breakpoints, values)?], vec![measure], AtomMetadata::custom())
    }

    pub fn d(&self) -> usize {
        self.axes.len()
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        self.axes.iter().zip(theta).map(|(a, &t)| a.eval(t)).product()
    }

    fn axis_moment(&self, i: usize, q: f64, tol: Tolerance) -> Result<f64> {
        let mut s = 0.0;
        for (lo, hi, v) in self.axes[i].pieces() {
            if v != 0.0 {
                let m = self.measures[i].measure_of(lo, hi, tol)?;
                s += m * v.abs().powf(q);
            }
        }
        Ok(s)
    }

    /// ∫ a dμ.
    pub fn mean(&self, tol: Tolerance) -> Result<f64> {
        let mut m = 1.0;
        for i in 0..self.d() {
            let mut s = 0.0;
            for (lo, hi, v) in self.axes[i].pieces() {
                if v != 0.0 {
                    s += v * self.measures[i].measure_of(lo, hi, tol)?;
                }
            }
            m *= s;
        }
        Ok(m)
    }

    /// ‖a‖_{L^q(μ)}.
    pub fn lq_norm(&self, q: f64, tol: Tolerance) -> Result<f64> {
        let mut n = 1.0;
        for i in 0..self.d() {
            n *= self.axis_moment(i, q, tol)?.powf(1.0 / q);
        }
        Ok(n)
    }

    /// Bounding box of the support (the ℓ^∞ ball used as B).
    pub fn support_box(&self) -> Vec<(f64, f64)> {
        self.axes
            .iter()
            .zip(&self.measures)
            .map(|(a, m)| a.support().unwrap_or(m.domain()))
            .collect()
    }

    /// μ(B) for the bounding box B.
    pub fn ball_measure(&self, tol: Tolerance) -> Result<f64> {
        let mut m = 1.0;
        for (i, (lo, hi)) in self.support_box().into_iter().enumerate() {
            m *= self.measures[i].measure_of(lo, hi, tol)?;
        }
        Ok(m)
    }

    /// θ ↦ π − θ on a one-dimensional atom over (0,π).
    pub fn mirrored_at_pi(&self) -> Result<Self> {
        if self.d() != 1 {
            return Err(Error::contract("mirroring is defined for one-dimensional atoms"));
        }
        let measure = match self.measures[0] {
            MeasureTag::Mu { params } => MeasureTag::mu(params),
            other => other,
        };
        PiecewiseConstantAtom::new(vec![self.axes[0].mirrored_at_pi()], vec![measure], self.metadata.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let a: PiecewiseConstantAtom = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        PiecewiseConstantAtom::new(a.axes, a.measures, a.metadata)
    }
}

fn check_k_delta_c(k: usize, delta: f64, c: f64) -> Result<()> {
    if k < 2 {
        return Err(Error::Construction(format!("K must be at least 2, got {k}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Construction(format!("delta must lie in (0,1), got {delta}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Construction(format!("c must be positive, got {c}")));
    }
    Ok(())
}

/// Builds the a-type step on (0, c/K] for parameter `a` (the endpoint exponent) and `power`.
fn end_two_level(k: usize, delta: f64, c: f64, p: JacobiParams, power: f64, tol: Tolerance) -> Result<(PiecewiseConstant1d, f64)> {
    let kf = k as f64;
    let x1 = c * delta / kf;
    let x2 = c / kf;
    if x2 >= PI {
        return Err(Error::Construction(format!("c/K = {x2} must stay below pi")));
    }
    let mu = MeasureTag::mu(p);
    let m1 = mu.measure_of(0.0, x1, tol)?;
    let m2 = mu.measure_of(x1, x2, tol)?;
    if !(m1 > 0.0 && m2 > 0.0) {
        return Err(Error::Construction("a piece has zero measure".into()));
    }
    let v1 = -(kf / c).powf(power) * (1.0 - delta.powf(power));
    let scale = (kf * delta / c).powf(power);
    let cn = -v1 * m1 / (scale * m2);
    Ok((PiecewiseConstant1d::new(vec![0.0, x1, x2], vec![v1, cn * scale])?, cn))
}

/// The endpoint parameter and whether the construction lives at π (β > α).
fn endpoint(p: JacobiParams) -> (JacobiParams, bool) {
    if p.beta() > p.alpha() {
        (p.swapped(), true)
    } else {
        (p, false)
    }
}

fn finish_1d(
    axis: PiecewiseConstant1d,
    mirror: bool,
    p: JacobiParams,
    metadata: AtomMetadata,
) -> Result<PiecewiseConstantAtom> {
    let axis = if mirror { axis.mirrored_at_pi() } else { axis };
    PiecewiseConstantAtom::new(vec![axis], vec![MeasureTag::mu(p)], metadata)
}

/// a_K: −(K/c)^{2α+2}(1−δ^{2α+2}) on (0, cδ/K], C_{δ,K}(Kδ/c)^{2α+2} on (cδ/K, c/K].
///
/// When β > α the construction is reflected to the endpoint π.
pub fn make_atom_pol_a(k: usize, delta: f64, c: f64, p: JacobiParams, tol: Tolerance) -> Result<PiecewiseConstantAtom> {
    check_k_delta_c(k, delta, c)?;
    let (q, mirror) = endpoint(p);
    let power = 2.0 * q.alpha() + 2.0;
    let (axis, cn) = end_two_level(k, delta, c, q, power, tol)?;
    let meta = AtomMetadata {
        kind: AtomKind::PolA,
        k: Some(k),
        delta: Some(delta),
        c: Some(c),
        epsilon: None,
        q: None,
        normalization: vec![cn],
        powers: vec![power],
    };
    finish_1d(axis, mirror, p, meta)
}

fn pol_b_axis(k: usize, c: f64, p: JacobiParams, s1: f64, s2: f64, tol: Tolerance) -> Result<(PiecewiseConstant1d, f64)> {
    let kf = k as f64;
    let w = c / kf;
    if !(w < FRAC_PI_2 - w) {
        return Err(Error::Construction(format!("c/K = {w} too large: pieces overlap")));
    }
    let mu = MeasureTag::mu(p);
    let m1 = mu.measure_of(0.0, w, tol)?;
    let m2 = mu.measure_of(FRAC_PI_2 - w, FRAC_PI_2 + w, tol)?;
    if !(m1 > 0.0 && m2 > 0.0) {
        return Err(Error::Construction("a piece has zero measure".into()));
    }
    let v2 = kf.powf(s2);
    let ck = v2 * m2 / (kf.powf(s1) * m1);
    let axis = PiecewiseConstant1d::new(vec![0.0, w, FRAC_PI_2 - w, FRAC_PI_2 + w], vec![-ck * kf.powf(s1), 0.0, v2])?;
    Ok((axis, ck))
}

/// b_K: −C_K K^{2α+2−ε/2} on (0, c/K] and K^{1−ε/2} on (π/2−c/K, π/2+c/K].
pub fn make_atom_pol_b(k: usize, c: f64, epsilon: f64, p: JacobiParams, tol: Tolerance) -> Result<PiecewiseConstantAtom> {
    if k < 2 {
        return Err(Error::Construction(format!("K must be at least 2, got {k}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Construction(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if !(c > 0.0) {
        return Err(Error::Construction("c must be positive".into()));
    }
    let (q, mirror) = endpoint(p);
    let s1 = 2.0 * q.alpha() + 2.0 - epsilon / 2.0;
    let s2 = 1.0 - epsilon / 2.0;
    let (axis, ck) = pol_b_axis(k, c, q, s1, s2, tol)?;
    let meta = AtomMetadata {
        kind: AtomKind::PolB,
        k: Some(k),
        delta: None,
        c: Some(c),
        epsilon: Some(epsilon),
        q: None,
        normalization: vec![ck],
        powers: vec![s1, s2],
    };
    finish_1d(axis, mirror, p, meta)
}

/// Lebesgue-measure atom −K/c on (0, cδ/K], (δ/(1−δ))K/c on (cδ/K, c/K].
pub fn make_atom_fun(k: usize, delta: f64, c: f64) -> Result<PiecewiseConstantAtom> {
    check_k_delta_c(k, delta, c)?;
    let kf = k as f64;
    if c / kf >= PI {
        return Err(Error::Construction("c/K must stay below pi".into()));
    }
    let axis = PiecewiseConstant1d::new(vec![0.0, c * delta / kf, c / kf], vec![-kf / c, delta / (1.0 - delta) * kf / c])?;
    let meta = AtomMetadata {
        kind: AtomKind::Fun,
        k: Some(k),
        delta: Some(delta),
        c: Some(c),
        epsilon: None,
        q: None,
        normalization: vec![],
        powers: vec![],
    };
    PiecewiseConstantAtom::new(vec![axis], vec![MeasureTag::lebesgue(0.0, PI)], meta)
}

/// a ≡ μ(X)^{−1} on the product of the given measures.
pub fn constant_atom(measures: Vec<MeasureTag>) -> Result<PiecewiseConstantAtom> {
    let axes = measures
        .iter()
        .map(|m| {
            let (lo, hi) = m.domain();
            PiecewiseConstant1d::new(vec![lo, hi], vec![1.0 / m.total()])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = AtomMetadata::custom();
    meta.kind = AtomKind::Constant;
    PiecewiseConstantAtom::new(axes, measures, meta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisAtom {
    A,
    B,
}

/// Parameters of a d-dimensional product atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorAtomSpec {
    pub k: usize,
    pub choices: Vec<AxisAtom>,
    pub epsilon: f64,
    pub delta: f64,
    /// One c per axis.
    pub c: Vec<f64>,
    pub params: Vec<JacobiParams>,
}

/// Product atom with the exponents lowered by ε/(d+1) on every axis.
pub fn make_atom_tensor(spec: &TensorAtomSpec, tol: Tolerance) -> Result<PiecewiseConstantAtom> {
    let d = spec.choices.len();
    if d == 0 || d > 3 || spec.params.len() != d || spec.c.len() != d {
        return Err(Error::contract("tensor atoms need 1 <= d <= 3 and one choice, c and parameter pair per axis"));
    }
    if !(spec.epsilon > 0.0 && spec.epsilon < 1.0) {
        return Err(Error::Construction("epsilon must lie in (0,1)".into()));
    }
    let e = spec.epsilon / (d as f64 + 1.0);
    let mut axes = Vec::with_capacity(d);
    let mut norms = Vec::with_capacity(d);
    let mut powers = Vec::new();
    for i in 0..d {
        let (q, mirror) = endpoint(spec.params[i]);
        let s = 2.0 * q.alpha() + 2.0 - e;
        let (axis, cn) = match spec.choices[i] {
            AxisAtom::A => {
                check_k_delta_c(spec.k, spec.delta, spec.c[i])?;
                powers.push(s);
                end_two_level(spec.k, spec.delta, spec.c[i], q, s, tol)?
            }
            AxisAtom::B => {
                powers.push(s);
                pol_b_axis(spec.k, spec.c[i], q, s, 1.0 - e, tol)?
            }
        };
        axes.push(if mirror { axis.mirrored_at_pi() } else { axis });
        norms.push(cn);
    }
    let meta = AtomMetadata {
        kind: AtomKind::Tensor,
        k: Some(spec.k),
        delta: Some(spec.delta),
        c: spec.c.first().copied(),
        epsilon: Some(spec.epsilon),
        q: None,
        normalization: norms,
        powers,
    };
    PiecewiseConstantAtom::new(axes, spec.params.iter().map(|&p| MeasureTag::mu(p)).collect(), meta)
}

/// Outcome of checking the atom conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub mean: f64,
    pub l1_norm: f64,
    pub l2_norm: f64,
    pub ball_measure: f64,
    pub is_h1_atom: bool,
    pub q: Option<f64>,
    pub lq_norm: Option<f64>,
    pub is_1q_atom: Option<bool>,
    /// |mean| / ‖a‖₁.
    pub mean_margin: f64,
    /// μ(B)^{−1/2} / ‖a‖₂ (≥ 1 when the L² bound holds).
    pub l2_margin: f64,
    /// μ(B)^{1/q−1} / ‖a‖_q.
    pub lq_margin: Option<f64>,
}

/// Checks mean zero, the support ball, and the L² (and optionally L^q) size bound.
pub fn validate_atom(atom: &PiecewiseConstantAtom, q: Option<f64>, tol: Tolerance) -> Result<AtomReport> {
    if let Some(q) = q {
        if !(q > 1.0 && q <= 2.0) {
            return Err(Error::InvalidParams(format!("q must lie in (1,2], got {q}")));
        }
    }
    let mean = atom.mean(tol)?;
    let l1 = atom.lq_norm(1.0, tol)?;
    let l2 = atom.lq_norm(2.0, tol)?;
    let ball = atom.ball_measure(tol)?;
    let mean_margin = if l1 > 0.0 { mean.abs() / l1 } else { 0.0 };
    let mean_ok = atom.metadata.kind == AtomKind::Constant || mean_margin <= tol.rel;
    let l2_bound = ball.powf(-0.5);
    let is_h1_atom = mean_ok && l2 <= l2_bound * (1.0 + tol.rel);
    let (lq_norm, is_1q_atom, lq_margin) = match q {
        Some(q) => {
            let n = atom.lq_norm(q, tol)?;
            let bound = ball.powf(1.0 / q - 1.0);
            (Some(n), Some(mean_ok && n <= bound * (1.0 + tol.rel)), Some(bound / n))
        }
        None => (None, None, None),
    };
    Ok(AtomReport {
        mean,
        l1_norm: l1,
        l2_norm: l2,
        ball_measure: ball,
        is_h1_atom,
        q,
        lq_norm,
        is_1q_atom,
        mean_margin,
        l2_margin: l2_bound / l2,
        lq_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_eval() {
        let s = PiecewiseConstant1d::new(vec![0.0, 1.0, 2.0], vec![3.0, -1.0]).unwrap();
        assert_eq!(s.eval(0.0), 3.0);
        assert_eq!(s.eval(0.5), 3.0);
        assert_eq!(s.eval(1.0), 3.0);
        assert_eq!(s.eval(1.5), -1.0);
        assert_eq!(s.eval(2.5), 0.0);
        assert!(PiecewiseConstant1d::new(vec![0.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn bad_construction_inputs() {
        let p = JacobiParams::new(0.5, 0.0).unwrap();
        let t = Tolerance::default();
        assert!(make_atom_pol_a(1, 0.25, 0.5, p, t).is_err());
        assert!(make_atom_pol_a(8, 1.5, 0.5, p, t).is_err());
        assert!(make_atom_pol_b(4, 4.0, 0.5, p, t).is_err());
        assert!(make_atom_fun(8, 0.0, 0.5).is_err());
    }
}
