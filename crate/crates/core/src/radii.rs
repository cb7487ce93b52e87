//! Closed-form connectivity radii.
//!
//! All of them have the form `π r² q = (ln n + c(n)) / n` for some
//! connection probability `q`: `q = 1` for the plain random geometric graph,
//! `q = δ_min` for the weak (sufficient) condition, and `q = γ` for the
//! optimal (necessary and sufficient) condition.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::schedules::{gamma_contiguous, gamma_random};

/// Largest meaningful radius: the diameter of the unit disk.
pub const MAX_RADIUS: f64 = 2.0;

/// The additive term `c(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CnPreset {
    /// `ln ln n`
    LogLog,
    /// a constant `c`
    Const(f64),
    /// the constant `-c`
    NegConst(f64),
    /// `-ln ln n`
    NegLogLog,
    /// `-(ln ln n)²`
    NegLogLogSq,
    /// `-k √(ln n)`
    NegKSqrtLog(f64),
}

impl CnPreset {
    pub fn eval(&self, n: f64) -> Result<f64> {
        let needs_loglog = matches!(
            self,
            CnPreset::LogLog | CnPreset::NegLogLog | CnPreset::NegLogLogSq
        );
        if needs_loglog && !(n >= 3.0) {
            return Err(Error::invalid(format!("ln ln n needs n >= 3, got {n}")));
        }
        if !(n >= 1.0) {
            return Err(Error::invalid(format!("c(n) needs n >= 1, got {n}")));
        }
        Ok(match *self {
            CnPreset::LogLog => n.ln().ln(),
            CnPreset::Const(c) => c,
            CnPreset::NegConst(c) => -c,
            CnPreset::NegLogLog => -n.ln().ln(),
            CnPreset::NegLogLogSq => -n.ln().ln().powi(2),
            CnPreset::NegKSqrtLog(k) => -k * n.ln().sqrt(),
        })
    }
}

impl fmt::Display for CnPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CnPreset::LogLog => write!(f, "loglog"),
            CnPreset::Const(c) => write!(f, "const:{c}"),
            CnPreset::NegConst(c) => write!(f, "neg_const:{c}"),
            CnPreset::NegLogLog => write!(f, "neg_loglog"),
            CnPreset::NegLogLogSq => write!(f, "neg_loglog_sq"),
            CnPreset::NegKSqrtLog(k) => write!(f, "neg_k_sqrt_log:{k}"),
        }
    }
}

impl FromStr for CnPreset {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) forms.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let num = || -> Result<f64> {
            arg.ok_or_else(|| {
                Error::Config(format!(
                    "c(n) preset `{name}` needs a value, e.g. `{name}:1`"
                ))
            })?
            .parse()
            .map_err(|_| Error::Config(format!("bad number in c(n) preset `{s}`")))
        };
        match (name, arg) {
            ("loglog", None) => Ok(CnPreset::LogLog),
            ("neg_loglog", None) => Ok(CnPreset::NegLogLog),
            ("neg_loglog_sq", None) => Ok(CnPreset::NegLogLogSq),
            ("const", _) => Ok(CnPreset::Const(num()?)),
            ("neg_const", _) => Ok(CnPreset::NegConst(num()?)),
            ("neg_k_sqrt_log", _) => Ok(CnPreset::NegKSqrtLog(num()?)),
            _ => Err(Error::Config(format!("unknown c(n) preset `{s}`"))),
        }
    }
}

/// Evaluates `c(n)`.
pub fn eval_cn(preset: CnPreset, n: f64) -> Result<f64> {
    preset.eval(n)
}

fn check_n(n: f64) -> Result<()> {
    if !(n >= 3.0) {
        return Err(Error::invalid(format!(
            "radius formulas need n >= 3, got {n}"
        )));
    }
    Ok(())
}

fn check_probability(name: &str, q: f64) -> Result<()> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::invalid(format!(
            "{name} must lie in (0, 1], got {q}"
        )));
    }
    Ok(())
}

// √((ln n + c(n)) / (π n q)), capped at the disk diameter
fn radius_for(n: f64, q: f64, cn: CnPreset) -> Result<f64> {
    check_n(n)?;
    let numerator = n.ln() + cn.eval(n)?;
    if !(numerator > 0.0) {
        return Err(Error::invalid(format!(
            "ln n + c(n) must be positive, got {numerator} at n={n}"
        )));
    }
    Ok((numerator / (std::f64::consts::PI * n * q))
        .sqrt()
        .min(MAX_RADIUS))
}

/// Minimum radius for connectivity of the always-awake graph.
pub fn rgg_radius(n: f64, cn: CnPreset) -> Result<f64> {
    radius_for(n, 1.0, cn)
}

/// Sufficient radius when every slot is awake with probability at least `delta_min`.
pub fn weak_radius(n: f64, delta_min: f64, cn: CnPreset) -> Result<f64> {
    check_probability("delta_min", delta_min)?;
    radius_for(n, delta_min, cn)
}

/// Necessary and sufficient radius when in-range nodes connect with probability `gamma`.
pub fn optimal_radius(n: f64, gamma: f64, cn: CnPreset) -> Result<f64> {
    check_probability("gamma", gamma)?;
    radius_for(n, gamma, cn)
}

/// `d = round(δ L)`.
pub fn awake_from_delta(delta: f64, slots: usize) -> Result<usize> {
    check_probability("delta", delta)?;
    let d = (delta * slots as f64).round() as usize;
    if d == 0 || d > slots {
        return Err(Error::invalid(format!(
            "δ={delta} with L={slots} gives no valid d"
        )));
    }
    Ok(d)
}

/// Optimal radius of the contiguous scheme, `γ = (2d - 1)/L` with `d = round(δ L)`.
/// Falls back to [`rgg_radius`] once `γ` reaches 1.
pub fn optimal_dcc_radius(n: f64, delta: f64, slots: usize, cn: CnPreset) -> Result<f64> {
    let d = awake_from_delta(delta, slots)?;
    optimal_radius(n, gamma_contiguous(d, slots)?, cn)
}

/// Optimal radius of the random-selection scheme, `γ = 1 - (1 - δ)^d`.
pub fn optimal_dcr_radius(n: f64, delta: f64, awake: usize, cn: CnPreset) -> Result<f64> {
    check_probability("delta", delta)?;
    if awake == 0 {
        return Err(Error::invalid("d must be at least 1"));
    }
    let gamma = 1.0 - (1.0 - delta).powi(awake as i32);
    optimal_radius(n, gamma.min(1.0), cn)
}

/// Which closed form to use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiusFormula {
    Rgg,
    Weak { delta_min: f64 },
    Optimal { gamma: f64 },
    OptimalDcc { delta: f64, slots: usize },
    OptimalDcr { delta: f64, awake: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusSpec {
    pub formula: RadiusFormula,
    pub cn: CnPreset,
}

impl RadiusSpec {
    pub fn new(formula: RadiusFormula, cn: CnPreset) -> Self {
        RadiusSpec { formula, cn }
    }

    pub fn radius(&self, n: f64) -> Result<f64> {
        match self.formula {
            RadiusFormula::Rgg => rgg_radius(n, self.cn),
            RadiusFormula::Weak { delta_min } => weak_radius(n, delta_min, self.cn),
            RadiusFormula::Optimal { gamma } => optimal_radius(n, gamma, self.cn),
            RadiusFormula::OptimalDcc { delta, slots } => {
                optimal_dcc_radius(n, delta, slots, self.cn)
            }
            RadiusFormula::OptimalDcr { delta, awake } => {
                optimal_dcr_radius(n, delta, awake, self.cn)
            }
        }
    }
}

/// Working connection probability of a scheme given `(δ, L)`, as used by the
/// optimal radius.
pub fn scheme_gamma_dcc(delta: f64, slots: usize) -> Result<f64> {
    gamma_contiguous(awake_from_delta(delta, slots)?, slots)
}

pub fn scheme_gamma_dcr(delta: f64, slots: usize) -> Result<f64> {
    gamma_random(awake_from_delta(delta, slots)?, slots)
}
