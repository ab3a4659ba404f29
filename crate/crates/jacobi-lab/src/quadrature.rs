//! Quadrature against ρ_{α,β}, μ_{α,β}, μ̃_{α,β} and Lebesgue measure.
//!
//! Gauss–Jacobi rules come from the Jacobi matrix eigenproblem. Integrals
//! over subintervals of (0,π) use a global adaptive Gauss–Legendre scheme;
//! panels touching 0 or π are first mapped through θ = L·v^{1/(2α+2)}
//! (mirrored at π) which absorbs the algebraic weight singularity.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bases::{recurrence_a, recurrence_b, JacobiParams};
use crate::error::{Error, Result};
use crate::specfun::{log_beta, Tolerance};

/// The measure a rule or integral refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MeasureTag {
    /// (1−x)^α(1+x)^β dx on (−1,1).
    Rho { params: JacobiParams },
    /// (sin θ/2)^{2α+1}(cos θ/2)^{2β+1} dθ on (0,π).
    Mu { params: JacobiParams },
    /// |sin θ/2|^{2α+1}(cos θ/2)^{2β+1} dθ on (−π,π).
    MuTilde { params: JacobiParams },
    /// dθ on (lo, hi).
    Lebesgue { lo: f64, hi: f64 },
}

impl MeasureTag {
    pub fn mu(p: JacobiParams) -> Self {
        MeasureTag::Mu { params: p }
    }

    pub fn mu_tilde(p: JacobiParams) -> Self {
        MeasureTag::MuTilde { params: p }
    }

    pub fn lebesgue(lo: f64, hi: f64) -> Self {
        MeasureTag::Lebesgue { lo, hi }
    }

    pub fn domain(&self) -> (f64, f64) {
        match *self {
            MeasureTag::Rho { .. } => (-1.0, 1.0),
            MeasureTag::Mu { .. } => (0.0, PI),
            MeasureTag::MuTilde { .. } => (-PI, PI),
            MeasureTag::Lebesgue { lo, hi } => (lo, hi),
        }
    }

    /// Total mass of the domain.
    pub fn total(&self) -> f64 {
        match *self {
            MeasureTag::Rho { params: p } => rho_total(p),
            MeasureTag::Mu { params: p } => mu_total(p),
            MeasureTag::MuTilde { params: p } => 2.0 * mu_total(p),
            MeasureTag::Lebesgue { lo, hi } => hi - lo,
        }
    }

    /// Density with respect to Lebesgue measure at a point of the domain.
    pub fn density(&self, x: f64) -> f64 {
        match *self {
            MeasureTag::Rho { params: p } => (1.0 - x).powf(p.alpha()) * (1.0 + x).powf(p.beta()),
            MeasureTag::Mu { params: p } | MeasureTag::MuTilde { params: p } => p.mu_density(x.abs()),
            MeasureTag::Lebesgue { .. } => 1.0,
        }
    }

    /// Mass of [a, b].
    pub fn measure_of(&self, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
        match *self {
            MeasureTag::Lebesgue { .. } => Ok(b - a),
            _ => self.integrate(|_| 1.0, a, b, tol),
        }
    }

    /// ∫_a^b f dm.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
        let v = self.integrate_vec(|x, out| out[0] = f(x), 1, a, b, tol)?;
        Ok(v[0])
    }

    /// Vector-valued ∫_a^b f dm; `f(x, out)` fills `out` of length `dim`.
    pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
        &self,
        mut f: F,
        dim: usize,
        a: f64,
        b: f64,
        tol: Tolerance,
    ) -> Result<Vec<f64>> {
        let (lo, hi) = self.domain();
        if !(a >= lo && b <= hi && a <= b) {
            return Err(Error::domain(format!("interval [{a}, {b}] outside measure domain [{lo}, {hi}]")));
        }
        match *self {
            MeasureTag::Mu { params: p } => integrate_mu_vec(f, dim, p, a, b, tol),
            MeasureTag::MuTilde { params: p } => symmetric_split(f, dim, p, a, b, tol),
            MeasureTag::Lebesgue { .. } => {
                if a < -PI || b > PI {
                    return Err(Error::domain("Lebesgue integration supported on subsets of [-pi, pi]"));
                }
                symmetric_split(f, dim, lebesgue_params(), a, b, tol)
            }
            MeasureTag::Rho { params: p } => {
                let scale = 2f64.powf(p.alpha() + p.beta() + 1.0);
                let mut v = integrate_mu_vec(|t, out| f(t.cos(), out), dim, p, b.acos(), a.acos(), tol)?;
                v.iter_mut().for_each(|x| *x *= scale);
                Ok(v)
            }
        }
    }
}

/// μ_{−1/2,−1/2} is Lebesgue measure on (0,π).
pub(crate) fn lebesgue_params() -> JacobiParams {
    JacobiParams::new(-0.5, -0.5).expect("valid")
}

fn symmetric_split<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    p: JacobiParams,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Vec<f64>> {
    let mut total = vec![0.0; dim];
    if b > 0.0 {
        let v = integrate_mu_vec(&mut f, dim, p, a.max(0.0), b, tol)?;
        total.iter_mut().zip(v).for_each(|(t, x)| *t += x);
    }
    if a < 0.0 {
        let v = integrate_mu_vec(|t, out| f(-t, out), dim, p, (-b).max(0.0), -a, tol)?;
        total.iter_mut().zip(v).for_each(|(t, x)| *t += x);
    }
    Ok(total)
}

fn rho_total(p: JacobiParams) -> f64 {
    ((p.alpha() + p.beta() + 1.0) * std::f64::consts::LN_2 + log_beta(p.alpha() + 1.0, p.beta() + 1.0).unwrap()).exp()
}

/// μ_{α,β}(0,π) = B(α+1, β+1).
pub fn mu_total(p: JacobiParams) -> f64 {
    log_beta(p.alpha() + 1.0, p.beta() + 1.0).unwrap().exp()
}

/// Nodes, positive weights and the measure they integrate against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub measure: MeasureTag,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` the entry between rows i and i+1 (the last
/// slot is scratch). On return `d` holds eigenvalues and `z0` the first
/// components of the normalized eigenvectors.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z0: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    z0.iter_mut().for_each(|z| *z = 0.0);
    z0[0] = 1.0;
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numeric("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z0[i + 1];
                z0[i + 1] = s * z0[i] + c * zf;
                z0[i] = c * z0[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// m-point Gauss–Jacobi rule for ρ_{α,β} on (−1,1), exact to degree 2m−1.
pub fn gauss_jacobi_rule(m: usize, p: JacobiParams) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::InvalidParams("rule needs at least one node".into()));
    }
    let mut d: Vec<f64> = (0..m).map(|i| recurrence_a(i, p)).collect();
    let mut e: Vec<f64> = (0..m).map(|i| if i + 1 < m { recurrence_b(i + 1, p) } else { 0.0 }).collect();
    let mut z0 = vec![0.0; m];
    tridiagonal_ql(&mut d, &mut e, &mut z0)?;
    let mu0 = rho_total(p);
    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z0).map(|(x, z)| (x, mu0 * z * z)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|q| q.0).collect(),
        weights: pairs.iter().map(|q| q.1).collect(),
        measure: MeasureTag::Rho { params: p },
        exactness_degree: 2 * m - 1,
    })
}

/// m-point Gauss rule for μ_{α,β} on (0,π): exact for polynomials in cos θ of degree ≤ 2m−1.
pub fn gauss_mu_rule(m: usize, p: JacobiParams) -> Result<QuadratureRule> {
    let rho = gauss_jacobi_rule(m, p)?;
    let scale = 2f64.powf(-(p.alpha() + p.beta() + 1.0));
    let mut pairs: Vec<(f64, f64)> = rho.nodes.iter().zip(&rho.weights).map(|(x, w)| (x.acos(), w * scale)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|q| q.0).collect(),
        weights: pairs.iter().map(|q| q.1).collect(),
        measure: MeasureTag::Mu { params: p },
        exactness_degree: rho.exactness_degree,
    })
}

/// Gauss rule for μ̃_{α,β} on (−π,π): the μ rule and its mirror image.
pub fn gauss_mu_tilde_rule(m: usize, p: JacobiParams) -> Result<QuadratureRule> {
    let half = gauss_mu_rule(m, p)?;
    let mut nodes: Vec<f64> = half.nodes.iter().rev().map(|t| -t).collect();
    let mut weights: Vec<f64> = half.weights.iter().rev().copied().collect();
    nodes.extend_from_slice(&half.nodes);
    weights.extend_from_slice(&half.weights);
    Ok(QuadratureRule { nodes, weights, measure: MeasureTag::MuTilde { params: p }, exactness_degree: half.exactness_degree })
}

/// m-point Gauss–Legendre rule on [−1,1] by Newton iteration on P_m.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = mf * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if m == 1 {
            x = 0.0;
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

const GL_POINTS: usize = 20;

/// Errors below this many ulps of ∫|f| are treated as converged.
const ROUNDOFF_FACTOR: f64 = 256.0;

fn gl_base() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_POINTS))
}

/// A reparametrization of a panel of (0,π) by v ∈ [0,1].
#[derive(Debug, Clone, Copy)]
enum PanelMap {
    Plain { lo: f64, hi: f64 },
    /// θ = L v^s, s = 1/(2α+2).
    Left { len: f64, s: f64 },
    /// θ = π − L v^s, s = 1/(2β+2).
    Right { len: f64, s: f64 },
}

impl PanelMap {
    /// Returns (θ, dμ/dv).
    #[inline]
    fn eval(&self, v: f64, p: JacobiParams) -> (f64, f64) {
        let (a, b) = (p.alpha(), p.beta());
        match *self {
            PanelMap::Plain { lo, hi } => {
                let t = lo + (hi - lo) * v;
                (t, (hi - lo) * p.mu_density(t))
            }
            PanelMap::Left { len, s } => {
                let t = len * v.powf(s);
                let h = 0.5 * t;
                let sinc = if h == 0.0 { 1.0 } else { h.sin() / h };
                let w = (0.5 * len).powf(2.0 * a + 1.0) * len * s * sinc.powf(2.0 * a + 1.0) * h.cos().powf(2.0 * b + 1.0);
                (t, w)
            }
            PanelMap::Right { len, s } => {
                let u = len * v.powf(s);
                let h = 0.5 * u;
                let sinc = if h == 0.0 { 1.0 } else { h.sin() / h };
                let w = (0.5 * len).powf(2.0 * b + 1.0) * len * s * sinc.powf(2.0 * b + 1.0) * h.cos().powf(2.0 * a + 1.0);
                (PI - u, w)
            }
        }
    }
}

fn panels_for(p: JacobiParams, a: f64, b: f64) -> Vec<PanelMap> {
    let left = |len: f64| PanelMap::Left { len, s: 1.0 / (2.0 * p.alpha() + 2.0) };
    let right = |len: f64| PanelMap::Right { len, s: 1.0 / (2.0 * p.beta() + 2.0) };
    match (a == 0.0, b == PI) {
        (true, true) => vec![left(0.5 * PI), right(0.5 * PI)],
        (true, false) => vec![left(b)],
        (false, true) => vec![right(PI - a)],
        (false, false) => vec![PanelMap::Plain { lo: a, hi: b }],
    }
}

struct Unit {
    err: f64,
    id: usize,
    panel: usize,
    v0: f64,
    v1: f64,
    left: Vec<f64>,
    right: Vec<f64>,
    mag: f64,
}

impl PartialEq for Unit {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Unit {}
impl PartialOrd for Unit {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Unit {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then_with(|| o.id.cmp(&self.id))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// ∫_a^b f dμ_{α,β} for 0 ≤ a < b ≤ π.
pub fn integrate_mu<F: FnMut(f64) -> f64>(mut f: F, p: JacobiParams, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    Ok(integrate_mu_vec(|t, out| out[0] = f(t), 1, p, a, b, tol)?[0])
}

/// Vector-valued ∫_a^b f dμ_{α,β}; all components share the refinement.
pub fn integrate_mu_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    p: JacobiParams,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Vec<f64>> {
    if !(0.0 <= a && a <= b && b <= PI) {
        return Err(Error::domain(format!("integrate_mu needs 0 <= a <= b <= pi, got [{a}, {b}]")));
    }
    if a == b || dim == 0 {
        return Ok(vec![0.0; dim]);
    }
    let (gx, gw) = gl_base();
    let panels = panels_for(p, a, b);
    let mut buf = vec![0.0; dim];
    let mut nodes_used = 0usize;

    // Returns the panel sums and Σ|w f| (largest component), the rounding scale.
    let mut eval = |panel: &PanelMap, v0: f64, v1: f64, nodes_used: &mut usize| -> (Vec<f64>, f64) {
        let mut acc = vec![0.0; dim];
        let mut mag = vec![0.0; dim];
        let half = 0.5 * (v1 - v0);
        let mid = 0.5 * (v1 + v0);
        for (x, w) in gx.iter().zip(gw) {
            let (t, jac) = panel.eval(mid + half * x, p);
            let wt = w * half * jac;
            if wt == 0.0 || !wt.is_finite() {
                continue;
            }
            f(t, &mut buf);
            acc.iter_mut().zip(&buf).for_each(|(s, y)| *s += wt * y);
            mag.iter_mut().zip(&buf).for_each(|(s, y)| *s += (wt * y).abs());
        }
        *nodes_used += GL_POINTS;
        (acc, max_abs(&mag))
    };

    let mut heap = BinaryHeap::new();
    let mut total = vec![0.0; dim];
    let mut err_total = 0.0;
    let mut mag_total = 0.0;
    let mut next_id = 0usize;
    for (pi, panel) in panels.iter().enumerate() {
        let (whole, _) = eval(panel, 0.0, 1.0, &mut nodes_used);
        let (left, ml) = eval(panel, 0.0, 0.5, &mut nodes_used);
        let (right, mr) = eval(panel, 0.5, 1.0, &mut nodes_used);
        let err = whole.iter().zip(left.iter().zip(&right)).fold(0.0f64, |m, (w, (l, r))| m.max((w - l - r).abs()));
        total.iter_mut().zip(left.iter().zip(&right)).for_each(|(t, (l, r))| *t += l + r);
        err_total += err;
        mag_total += ml + mr;
        heap.push(Unit { err, id: next_id, panel: pi, v0: 0.0, v1: 1.0, left, right, mag: ml + mr });
        next_id += 1;
    }

    loop {
        let scale = max_abs(&total);
        let floor = ROUNDOFF_FACTOR * f64::EPSILON * mag_total;
        if err_total <= (tol.rel * scale).max(tol.abs).max(floor) {
            break;
        }
        if nodes_used >= tol.max_terms {
            return Err(Error::Accuracy { estimate: if dim == 1 { total[0] } else { scale }, error_bound: err_total });
        }
        let unit = heap.pop().expect("non-empty");
        let mid = 0.5 * (unit.v0 + unit.v1);
        err_total -= unit.err;
        mag_total -= unit.mag;
        total.iter_mut().zip(unit.left.iter().zip(&unit.right)).for_each(|(t, (l, r))| *t -= l + r);
        let panel = panels[unit.panel];
        for (lo, hi, coarse) in [(unit.v0, mid, unit.left), (mid, unit.v1, unit.right)] {
            let c = 0.5 * (lo + hi);
            let (l, ml) = eval(&panel, lo, c, &mut nodes_used);
            let (r, mr) = eval(&panel, c, hi, &mut nodes_used);
            let err = coarse.iter().zip(l.iter().zip(&r)).fold(0.0f64, |m, (w, (a, b))| m.max((w - a - b).abs()));
            total.iter_mut().zip(l.iter().zip(&r)).for_each(|(t, (a, b))| *t += a + b);
            err_total += err;
            mag_total += ml + mr;
            heap.push(Unit { err, id: next_id, panel: unit.panel, v0: lo, v1: hi, left: l, right: r, mag: ml + mr });
            next_id += 1;
        }
        if err_total < 0.0 || mag_total < 0.0 {
            err_total = heap.iter().map(|u| u.err).sum();
            mag_total = heap.iter().map(|u| u.mag).sum();
        }
    }

    // Re-sum in a fixed order so the result does not depend on drift in the running total.
    let mut units: Vec<Unit> = heap.into_vec();
    units.sort_by(|x, y| x.panel.cmp(&y.panel).then(x.v0.total_cmp(&y.v0)));
    let mut out = vec![0.0; dim];
    for u in &units {
        out.iter_mut().zip(u.left.iter().zip(&u.right)).for_each(|(t, (l, r))| *t += l + r);
    }
    Ok(out)
}

/// Composite rule for μ_{α,β} on (0,π) with panel boundaries at `breaks`.
///
/// Every interval between consecutive breaks is split into `levels` equal
/// sub-panels of `n` nodes each. Sub-panels touching 0 or π use a
/// Gauss–Jacobi rule that absorbs the algebraic endpoint weight, so smooth
/// integrands converge spectrally.
pub fn composite_mu_rule(p: JacobiParams, breaks: &[f64], n: usize, levels: usize) -> Result<QuadratureRule> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| *x > 0.0 && *x < PI).collect();
    pts.push(0.0);
    pts.push(PI);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() == 2 {
        pts.insert(1, 0.5 * PI);
    }
    let (a2, b2) = (2.0 * p.alpha() + 1.0, 2.0 * p.beta() + 1.0);
    let (gx, gw) = gauss_legendre(n);
    let left = gauss_jacobi_rule(n, JacobiParams::new(0.0, a2)?)?;
    let right = gauss_jacobi_rule(n, JacobiParams::new(b2, 0.0)?)?;
    let sinc = |h: f64| if h == 0.0 { 1.0 } else { h.sin() / h };
    let levels = levels.max(1);
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for w in pts.windows(2) {
        let step = (w[1] - w[0]) / levels as f64;
        for i in 0..levels {
            let lo = w[0] + step * i as f64;
            let hi = if i + 1 == levels { w[1] } else { lo + step };
            let h = hi - lo;
            if lo == 0.0 {
                // θ = h(1+x)/2, sin(θ/2)^{2α+1} = (h/4)^{2α+1}(1+x)^{2α+1} sinc(θ/2)^{2α+1}
                let scale = (0.25 * h).powf(a2) * 0.5 * h;
                for (x, wq) in left.nodes.iter().zip(&left.weights) {
                    let t = 0.5 * h * (1.0 + x);
                    pairs.push((t, wq * scale * sinc(0.5 * t).powf(a2) * (0.5 * t).cos().powf(b2)));
                }
            } else if hi == PI {
                let scale = (0.25 * h).powf(b2) * 0.5 * h;
                for (x, wq) in right.nodes.iter().zip(&right.weights) {
                    let u = 0.5 * h * (1.0 - x);
                    pairs.push((PI - u, wq * scale * sinc(0.5 * u).powf(b2) * (0.5 * u).cos().powf(a2)));
                }
            } else {
                for (x, wq) in gx.iter().zip(&gw) {
                    let t = lo + 0.5 * h * (1.0 + x);
                    pairs.push((t, wq * 0.5 * h * p.mu_density(t)));
                }
            }
        }
    }
    pairs.retain(|q| q.1 > 0.0 && q.1.is_finite());
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|q| q.0).collect(),
        weights: pairs.iter().map(|q| q.1).collect(),
        measure: MeasureTag::Mu { params: p },
        exactness_degree: 0,
    })
}

/// Mirror a rule on (0,π) onto (−π,π).
pub fn mirror_rule(rule: &QuadratureRule, measure: MeasureTag) -> QuadratureRule {
    let mut nodes: Vec<f64> = rule.nodes.iter().rev().map(|t| -t).collect();
    let mut weights: Vec<f64> = rule.weights.iter().rev().copied().collect();
    nodes.extend_from_slice(&rule.nodes);
    weights.extend_from_slice(&rule.weights);
    QuadratureRule { nodes, weights, measure, exactness_degree: rule.exactness_degree }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small_rules() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(1);
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gl_matches_golub_welsch() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let gj = gauss_jacobi_rule(20, p).unwrap();
        let (x, w) = gauss_legendre(20);
        for i in 0..20 {
            assert!((gj.nodes[i] - x[i]).abs() < 1e-14);
            assert!((gj.weights[i] - w[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let tol = Tolerance::default().with_rel(1e-15).with_max_terms(100);
        let r = integrate_mu(|t| (200.0 * t).sin(), p, 0.0, PI, tol);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn domain_checks() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        assert!(integrate_mu(|_| 1.0, p, -0.1, 1.0, Tolerance::default()).is_err());
        assert!(gauss_jacobi_rule(0, p).is_err());
    }
}
