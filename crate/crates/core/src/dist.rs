//! Edge-weight distributions.
//!
//! Every distribution here has a density `f` on `[0, ρ*]` that is continuous at
//! zero with `f(0) > 0` and a finite support end `ρ*`. Weights are produced by
//! pushing a uniform variate through [`Distribution::inverse_cdf`], so two
//! graphs sampled from the same seed under different distributions have the
//! same edge order and therefore the same minimum spanning tree.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A non-negative edge-weight law with bounded support.
#[derive(Clone, Debug, PartialEq)]
pub enum Distribution {
    /// Uniform on `[0, upper]`.
    Uniform { upper: f64 },
    /// Exponential with the given rate, conditioned on `[0, cap]`.
    TruncatedExponential { rate: f64, cap: f64 },
    /// Density linear between consecutive knots `(x, f(x))`, zero past the
    /// last knot. Stored normalized; the first knot is at `x = 0`.
    PiecewiseLinear(PiecewiseLinear),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    fs: Vec<f64>,
    // cdf at each knot
    cs: Vec<f64>,
}

impl PiecewiseLinear {
    /// Builds a density from knots; the heights are rescaled to integrate to one.
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Distribution("piecewise-linear density needs at least two knots".into()));
        }
        if knots[0].0 != 0.0 {
            return Err(Error::Distribution("first knot must sit at x = 0".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) || !w[1].0.is_finite() {
                return Err(Error::Distribution("knot positions must be finite and strictly increasing".into()));
            }
        }
        if knots.iter().any(|&(_, f)| !(f >= 0.0) || !f.is_finite()) {
            return Err(Error::Distribution("density heights must be finite and non-negative".into()));
        }
        if !(knots[0].1 > 0.0) {
            return Err(Error::Distribution("density at zero must be positive".into()));
        }
        let area: f64 = knots.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
        let xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let fs: Vec<f64> = knots.iter().map(|k| k.1 / area).collect();
        let mut cs = vec![0.0; xs.len()];
        for k in 1..xs.len() {
            cs[k] = cs[k - 1] + 0.5 * (fs[k - 1] + fs[k]) * (xs[k] - xs[k - 1]);
        }
        let last = cs.len() - 1;
        cs[last] = 1.0;
        Ok(Self { xs, fs, cs })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.fs.iter().copied())
    }

    fn segment_of_x(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|k| k.total_cmp(&x)) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= *self.xs.last().unwrap() {
            return 1.0;
        }
        let k = self.segment_of_x(x);
        let t = x - self.xs[k];
        let slope = (self.fs[k + 1] - self.fs[k]) / (self.xs[k + 1] - self.xs[k]);
        (self.cs[k] + self.fs[k] * t + 0.5 * slope * t * t).min(1.0)
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        // first segment whose upper cdf reaches u and that carries mass
        let mut k = 0;
        while k + 2 < self.xs.len() && (self.cs[k + 1] < u || self.cs[k + 1] == self.cs[k]) {
            k += 1;
        }
        let slope = (self.fs[k + 1] - self.fs[k]) / (self.xs[k + 1] - self.xs[k]);
        let r = (u - self.cs[k]).max(0.0);
        // root of f_k t + slope t^2 / 2 = r, in the cancellation-free form
        let disc = (self.fs[k] * self.fs[k] + 2.0 * slope * r).max(0.0);
        let denom = self.fs[k] + disc.sqrt();
        let t = if denom > 0.0 { 2.0 * r / denom } else { 0.0 };
        (self.xs[k] + t).min(self.xs[k + 1])
    }

    fn support_end(&self) -> f64 {
        // sup{x : cdf(x) < 1}: end of the last segment carrying mass
        let mut k = self.xs.len() - 1;
        while k > 0 && self.fs[k] == 0.0 && self.fs[k - 1] == 0.0 {
            k -= 1;
        }
        self.xs[k]
    }
}

impl Distribution {
    pub const UNIFORM: Distribution = Distribution::Uniform { upper: 1.0 };

    pub fn uniform(upper: f64) -> Result<Self> {
        let d = Distribution::Uniform { upper };
        d.validate()?;
        Ok(d)
    }

    pub fn truncated_exponential(rate: f64, cap: f64) -> Result<Self> {
        let d = Distribution::TruncatedExponential { rate, cap };
        d.validate()?;
        Ok(d)
    }

    pub fn piecewise_linear(knots: &[(f64, f64)]) -> Result<Self> {
        Ok(Distribution::PiecewiseLinear(PiecewiseLinear::new(knots)?))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Distribution::Uniform { upper } => {
                if !(upper > 0.0 && upper.is_finite()) {
                    return Err(Error::Distribution(format!(
                        "uniform upper bound {upper} must be positive and finite"
                    )));
                }
            }
            Distribution::TruncatedExponential { rate, cap } => {
                if !(rate > 0.0 && rate.is_finite()) || !(cap > 0.0 && cap.is_finite()) {
                    return Err(Error::Distribution(format!(
                        "truncated exponential needs positive finite rate and cap, got rate {rate}, cap {cap}"
                    )));
                }
            }
            Distribution::PiecewiseLinear(_) => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::Uniform { .. } => "uniform",
            Distribution::TruncatedExponential { .. } => "texp",
            Distribution::PiecewiseLinear(_) => "pwl",
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Distribution::Uniform { upper } => (x / upper).clamp(0.0, 1.0),
            Distribution::TruncatedExponential { rate, cap } => {
                if x <= 0.0 {
                    0.0
                } else if x >= *cap {
                    1.0
                } else {
                    (-f64::exp_m1(-rate * x)) / (-f64::exp_m1(-rate * cap))
                }
            }
            Distribution::PiecewiseLinear(p) => p.cdf(x),
        }
    }

    /// Right inverse of [`cdf`](Self::cdf) on `[0, 1]`.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        match self {
            Distribution::Uniform { upper } => u * upper,
            Distribution::TruncatedExponential { rate, cap } => {
                let mass = -f64::exp_m1(-rate * cap);
                (-f64::ln_1p(-u * mass) / rate).min(*cap)
            }
            Distribution::PiecewiseLinear(p) => p.inverse_cdf(u),
        }
    }

    /// `f(0)`, which fixes the limit `ζ(3) / f(0)` of the MST weight.
    pub fn density_at_zero(&self) -> f64 {
        match self {
            Distribution::Uniform { upper } => 1.0 / upper,
            Distribution::TruncatedExponential { rate, cap } => rate / (-f64::exp_m1(-rate * cap)),
            Distribution::PiecewiseLinear(p) => p.fs[0],
        }
    }

    /// `ρ* = sup{x : cdf(x) < 1}`, the local-search threshold.
    pub fn rho_star(&self) -> f64 {
        match self {
            Distribution::Uniform { upper } => *upper,
            Distribution::TruncatedExponential { cap, .. } => *cap,
            Distribution::PiecewiseLinear(p) => p.support_end(),
        }
    }
}

impl Default for Distribution {
    fn default() -> Self {
        Distribution::UNIFORM
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Uniform { upper } if *upper == 1.0 => write!(f, "uniform"),
            Distribution::Uniform { upper } => write!(f, "uniform:{upper}"),
            Distribution::TruncatedExponential { rate, cap } => write!(f, "texp:{rate}:{cap}"),
            Distribution::PiecewiseLinear(p) => {
                write!(f, "pwl:")?;
                // heights are printed normalized, which parses back to the same law
                for (i, (x, y)) in p.knots().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}:{y}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;

    /// Accepts `uniform`, `uniform:B`, `texp:RATE:CAP` and `pwl:X0:F0,X1:F1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?} in distribution {s:?}")))
        };
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        match (head, rest) {
            ("uniform", None) => Ok(Distribution::UNIFORM),
            ("uniform", Some(b)) => Distribution::uniform(num(b)?),
            ("texp", Some(r)) => {
                let (rate, cap) =
                    r.split_once(':').ok_or_else(|| Error::Parse(format!("texp needs RATE:CAP, got {s:?}")))?;
                Distribution::truncated_exponential(num(rate)?, num(cap)?)
            }
            ("pwl", Some(r)) => {
                let knots = r
                    .split(',')
                    .map(|k| {
                        let (x, y) =
                            k.split_once(':').ok_or_else(|| Error::Parse(format!("pwl knot {k:?} must be X:F")))?;
                        Ok((num(x)?, num(y)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Distribution::piecewise_linear(&knots)
            }
            _ => Err(Error::Parse(format!("unknown distribution {s:?}"))),
        }
    }
}
