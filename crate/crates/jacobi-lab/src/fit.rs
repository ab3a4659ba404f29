//! Least-squares growth fits on geometric grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthModel {
    /// log y = s log x + b.
    Power,
    /// y = s log x + b.
    Log,
    /// y = s log log x + b.
    LogLog,
}

/// Ordinary least-squares fit of a growth model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Smallest and largest abscissa used.
    pub window: (f64, f64),
    /// Raw (x, y) data.
    pub points: Vec<(f64, f64)>,
}

pub const MIN_FIT_POINTS: usize = 4;

impl GrowthFit {
    pub fn fit(model: GrowthModel, xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::contract("fit needs as many ordinates as abscissae"));
        }
        if xs.len() < MIN_FIT_POINTS {
            return Err(Error::contract(format!("fit needs at least {MIN_FIT_POINTS} points, got {}", xs.len())));
        }
        let mut u = Vec::with_capacity(xs.len());
        let mut v = Vec::with_capacity(xs.len());
        for (&x, &y) in xs.iter().zip(ys) {
            let ok = x.is_finite() && y.is_finite() && x > 0.0;
            let (tx, ty) = match model {
                GrowthModel::Power if ok && y > 0.0 => (x.ln(), y.ln()),
                GrowthModel::Log if ok => (x.ln(), y),
                GrowthModel::LogLog if ok && x > 1.0 => (x.ln().ln(), y),
                _ => return Err(Error::Numeric(format!("point ({x}, {y}) is outside the {model:?} model's domain"))),
            };
            u.push(tx);
            v.push(ty);
        }
        let n = u.len() as f64;
        let mu = u.iter().sum::<f64>() / n;
        let mv = v.iter().sum::<f64>() / n;
        let sxx: f64 = u.iter().map(|a| (a - mu).powi(2)).sum();
        if sxx == 0.0 {
            return Err(Error::contract("fit abscissae are all equal"));
        }
        let sxy: f64 = u.iter().zip(&v).map(|(a, b)| (a - mu) * (b - mv)).sum();
        let slope = sxy / sxx;
        let intercept = mv - slope * mu;
        let ss_res: f64 = u.iter().zip(&v).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        let ss_tot: f64 = v.iter().map(|b| (b - mv).powi(2)).sum();
        let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(GrowthFit {
            model,
            slope,
            intercept,
            r_squared,
            window: (lo, hi),
            points: xs.iter().copied().zip(ys.iter().copied()).collect(),
        })
    }

    pub fn power(xs: &[f64], ys: &[f64]) -> Result<Self> {
        GrowthFit::fit(GrowthModel::Power, xs, ys)
    }

    pub fn predict(&self, x: f64) -> f64 {
        match self.model {
            GrowthModel::Power => (self.intercept + self.slope * x.ln()).exp(),
            GrowthModel::Log => self.intercept + self.slope * x.ln(),
            GrowthModel::LogLog => self.intercept + self.slope * x.ln().ln(),
        }
    }

    /// `x,y` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for (x, y) in &self.points {
            s.push_str(&format!("{x:.16e},{y:.16e}\n"));
        }
        s
    }
}
