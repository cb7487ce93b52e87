use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::radii::{self, awake_from_delta, CnPreset};
use crate::schedules::{gamma_contiguous, gamma_random, SchemeSpec};

/// Network sizes used unless the config lists its own.
pub const DEFAULT_N: [usize; 2] = [100_000, 200_000];
/// Sizes used with `full = true`.
pub const FULL_N: [usize; 1] = [1_000_000];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum SchemeChoice {
    #[serde(rename = "rgg")]
    Rgg,
    #[serde(rename = "dc-c")]
    Contiguous,
    #[serde(rename = "dc-r")]
    RandomSelection,
}

impl SchemeChoice {
    pub fn label(&self) -> &'static str {
        match self {
            SchemeChoice::Rgg => "rgg",
            SchemeChoice::Contiguous => "dc-c",
            SchemeChoice::RandomSelection => "dc-r",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rgg" => Ok(SchemeChoice::Rgg),
            "dc-c" => Ok(SchemeChoice::Contiguous),
            "dc-r" => Ok(SchemeChoice::RandomSelection),
            _ => Err(Error::Config(format!(
                "unknown scheme `{s}` (expected rgg, dc-c or dc-r)"
            ))),
        }
    }

    /// The wake scheme, or `None` when nodes never sleep.
    pub fn spec(&self, slots: usize, awake: usize) -> Result<Option<SchemeSpec>> {
        match self {
            SchemeChoice::Rgg => Ok(None),
            SchemeChoice::Contiguous => SchemeSpec::contiguous(slots, awake).map(Some),
            SchemeChoice::RandomSelection => SchemeSpec::random_selection(slots, awake).map(Some),
        }
    }

    /// Working connection probability at `(d, L)`.
    pub fn gamma(&self, slots: usize, awake: usize) -> Result<f64> {
        match self {
            SchemeChoice::Rgg => Ok(1.0),
            SchemeChoice::Contiguous => gamma_contiguous(awake, slots),
            SchemeChoice::RandomSelection => gamma_random(awake, slots),
        }
    }
}

impl fmt::Display for SchemeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusKind {
    Rgg,
    Weak,
    Optimal,
}

impl RadiusKind {
    pub fn label(&self) -> &'static str {
        match self {
            RadiusKind::Rgg => "rgg",
            RadiusKind::Weak => "weak",
            RadiusKind::Optimal => "optimal",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rgg" => Ok(RadiusKind::Rgg),
            "weak" => Ok(RadiusKind::Weak),
            "optimal" => Ok(RadiusKind::Optimal),
            _ => Err(Error::Config(format!(
                "unknown radius kind `{s}` (expected rgg, weak or optimal)"
            ))),
        }
    }

    /// Radius for `n` sensors running `scheme` with `d` of `L` slots awake.
    pub fn radius(
        &self,
        scheme: SchemeChoice,
        n: usize,
        slots: usize,
        awake: usize,
        cn: CnPreset,
    ) -> Result<f64> {
        let n = n as f64;
        match (self, scheme) {
            (RadiusKind::Rgg, _) | (_, SchemeChoice::Rgg) => radii::rgg_radius(n, cn),
            (RadiusKind::Weak, _) => radii::weak_radius(n, awake as f64 / slots as f64, cn),
            (RadiusKind::Optimal, s) => radii::optimal_radius(n, s.gamma(slots, awake)?, cn),
        }
    }
}

impl fmt::Display for RadiusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which of `L` and `d` stays put while `δ` varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum Fix {
    #[serde(rename = "L")]
    Slots,
    #[serde(rename = "d")]
    Awake,
}

/// Flat experiment description, read from TOML.
///
/// ```toml
/// scheme = "dc-c"        # rgg | dc-c | dc-r
/// radius = "optimal"     # rgg | weak | optimal
/// n = [100000, 200000]   # empty: 1e5 and 2e5, or 1e6 with full = true
/// delta = [0.05]
/// fix = "L"              # L: d = round(δL); d: L = round(d/δ)
/// slots = 100
/// awake = 5
/// cn = "loglog"
/// cn_list = ["const:1", "neg_const:1"]
/// repetitions = 5
/// seed = 1
/// ```
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: SchemeChoice,
    pub radius: RadiusKind,
    pub n: Vec<usize>,
    pub delta: Vec<f64>,
    pub fix: Fix,
    pub slots: usize,
    pub awake: usize,
    pub cn: String,
    pub cn_list: Vec<String>,
    pub repetitions: usize,
    pub seed: u64,
    pub full: bool,
    pub output: Option<PathBuf>,
    /// Relax factor of the scenarios that use relaxed greedy routing.
    pub relax: f64,
    pub target_distance: f64,
    pub target_angle: f64,
    /// Routing timeout in cycles.
    pub max_cycles: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scheme: SchemeChoice::Contiguous,
            radius: RadiusKind::Optimal,
            n: Vec::new(),
            delta: vec![0.05],
            fix: Fix::Slots,
            slots: 100,
            awake: 5,
            cn: "loglog".into(),
            cn_list: [
                "const:1",
                "neg_const:1",
                "neg_loglog",
                "neg_loglog_sq",
                "neg_k_sqrt_log:2",
            ]
            .map(String::from)
            .to_vec(),
            repetitions: 5,
            seed: 1,
            full: false,
            output: None,
            relax: 1.2,
            target_distance: 0.1,
            target_angle: 0.0,
            max_cycles: 100,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if self.delta.is_empty() {
            return bad("delta list must not be empty".into());
        }
        if let Some(d) = self.delta.iter().find(|d| !(**d > 0.0 && **d <= 1.0)) {
            return bad(format!("delta must lie in (0, 1], got {d}"));
        }
        if let Some(n) = self.n.iter().find(|n| **n < 3) {
            return bad(format!("n must be at least 3, got {n}"));
        }
        if self.slots == 0 || self.awake == 0 {
            return bad("slots and awake must be positive".into());
        }
        if !(self.relax >= 1.0) {
            return bad(format!("relax must be >= 1, got {}", self.relax));
        }
        if !(self.target_distance > 0.0 && self.target_distance < 1.0) {
            return bad(format!(
                "target_distance must lie in (0, 1), got {}",
                self.target_distance
            ));
        }
        if self.max_cycles == 0 {
            return bad("max_cycles must be positive".into());
        }
        self.cn_preset()?;
        self.cn_presets()?;
        for &delta in &self.delta {
            self.shape(delta)?;
        }
        Ok(())
    }

    pub fn n_values(&self) -> Vec<usize> {
        match (self.n.is_empty(), self.full) {
            (false, _) => self.n.clone(),
            (true, false) => DEFAULT_N.to_vec(),
            (true, true) => FULL_N.to_vec(),
        }
    }

    pub fn cn_preset(&self) -> Result<CnPreset> {
        self.cn
            .parse()
            .map_err(|e: Error| Error::Config(e.to_string()))
    }

    pub fn cn_presets(&self) -> Result<Vec<CnPreset>> {
        self.cn_list
            .iter()
            .map(|s| s.parse().map_err(|e: Error| Error::Config(e.to_string())))
            .collect()
    }

    /// `(L, d)` for duty cycle `delta`.
    pub fn shape(&self, delta: f64) -> Result<(usize, usize)> {
        let shape = match self.fix {
            Fix::Slots => (self.slots, awake_from_delta(delta, self.slots)?),
            Fix::Awake => ((self.awake as f64 / delta).round() as usize, self.awake),
        };
        if shape.1 == 0 || shape.1 > shape.0 {
            return Err(Error::Config(format!(
                "delta {delta} gives an invalid cycle: L={}, d={}",
                shape.0, shape.1
            )));
        }
        Ok(shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_toml() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            scheme = "dc-r"
            radius = "weak"
            n = [1000, 2000]
            delta = [0.05, 0.1]
            fix = "d"
            awake = 5
            cn = "const:1"
            repetitions = 3
            seed = 42
            "#,
        )
        .unwrap();
        assert_eq!(cfg.scheme, SchemeChoice::RandomSelection);
        assert_eq!(cfg.radius, RadiusKind::Weak);
        assert_eq!(cfg.shape(0.1).unwrap(), (50, 5));
        assert_eq!(cfg.cn_preset().unwrap(), CnPreset::Const(1.0));
        assert_eq!(cfg.n_values(), vec![1000, 2000]);
    }

    #[test]
    fn defaults_and_full() {
        let mut cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.n_values(), DEFAULT_N.to_vec());
        assert_eq!(cfg.shape(0.05).unwrap(), (100, 5));
        cfg.full = true;
        assert_eq!(cfg.n_values(), FULL_N.to_vec());
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "repetitions = 0",
            "delta = []",
            "delta = [1.5]",
            "scheme = \"dc-x\"",
            "cn = \"nope\"",
            "bogus = 1",
            "n = [2]",
            "relax = 0.5",
        ] {
            assert!(
                matches!(ExperimentConfig::from_toml(text), Err(Error::Config(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn radius_dispatch() {
        let cn = CnPreset::LogLog;
        let rgg = RadiusKind::Rgg
            .radius(SchemeChoice::Contiguous, 200_000, 100, 5, cn)
            .unwrap();
        let weak = RadiusKind::Weak
            .radius(SchemeChoice::Contiguous, 200_000, 100, 5, cn)
            .unwrap();
        let opt = RadiusKind::Optimal
            .radius(SchemeChoice::Contiguous, 200_000, 100, 5, cn)
            .unwrap();
        assert!((weak / rgg - 20f64.sqrt()).abs() < 1e-12);
        assert!((opt / rgg - (1.0 / 0.09f64).sqrt()).abs() < 1e-12);
        let always = RadiusKind::Weak
            .radius(SchemeChoice::Rgg, 200_000, 100, 5, cn)
            .unwrap();
        assert_eq!(always, rgg);
    }
}
