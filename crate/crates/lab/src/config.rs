//! Sweep configuration: the valuation grid, tie rule, solver schedules and
//! output paths shared by the sweeps and the verification suite.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use epa_core::{q, ValuationProfile, Variant, Q};
use serde::{Deserialize, Serialize};

/// How the bid cap is chosen for each valuation pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PbarRule {
    /// The `pbar` key for every pair; pairs it does not admit are skipped.
    Fixed,
    /// `c_low + c_high`.
    Symmetric,
    /// `c_high + 2`.
    Minimum,
    /// Both `c_high + 2` and `c_low + c_high`, deduplicated.
    Both,
}

impl PbarRule {
    pub fn caps(self, fixed: Option<u32>, v_low: u32, v_high: u32) -> Vec<u32> {
        let (cl, ch) = (v_low / 2, v_high / 2);
        let mut caps = match self {
            PbarRule::Fixed => fixed.into_iter().collect(),
            PbarRule::Symmetric => vec![cl + ch],
            PbarRule::Minimum => vec![ch + 2],
            PbarRule::Both => vec![ch + 2, cl + ch],
        };
        caps.sort_unstable();
        caps.dedup();
        caps
    }
}

/// Parses `"1/2"`, `"3/4"` or `"1"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i128 = n
        .parse()
        .with_context(|| format!("bad numerator in {s:?}"))?;
    let d: i128 = d
        .parse()
        .with_context(|| format!("bad denominator in {s:?}"))?;
    if d == 0 {
        bail!("zero denominator in {s:?}");
    }
    Ok(q(n, d))
}

pub fn parse_variant(s: &str) -> Result<Variant> {
    match s.to_ascii_lowercase().as_str() {
        "wb" | "winner-bid" => Ok(Variant::WinnerBid),
        "lb" | "loser-bid" => Ok(Variant::LoserBid),
        other => bail!("unknown variant {other:?}, expected wb or lb"),
    }
}

/// Flat configuration for sweeps and `verify`.
///
/// Every key is optional in the TOML file; missing keys keep their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub v_high_min: u32,
    pub v_high_max: u32,
    pub pbar_rule: PbarRule,
    /// Cap used by the `fixed` rule.
    pub pbar: Option<u32>,
    pub variants: Vec<String>,
    /// Tie weight of the high agent, as a rational string.
    pub gamma: String,
    /// Largest lambda a quantal-response path may be extended to.
    pub max_lambda: f64,
    pub witness_epsilons: Vec<f64>,
    pub witness_ts: Vec<f64>,
    pub seed: u64,
    /// Randomly sampled monotone profiles per game for the cap check.
    pub cap_samples: usize,
    /// Criterion ids to run; empty runs all of them.
    pub criteria: Vec<String>,
    pub report: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let schedule = epa_core::empirical::default_witness_schedule();
        Self {
            v_high_min: 4,
            v_high_max: 16,
            pbar_rule: PbarRule::Both,
            pbar: None,
            variants: vec!["wb".into(), "lb".into()],
            gamma: "1/2".into(),
            max_lambda: 1e5,
            witness_epsilons: schedule.iter().map(|s| s.0).collect(),
            witness_ts: schedule.iter().map(|s| s.1).collect(),
            seed: 20_240_601,
            cap_samples: 1000,
            criteria: Vec::new(),
            report: None,
        }
    }
}

impl SweepConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(s).context("parsing sweep config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.v_high_min > self.v_high_max {
            bail!(
                "v_high_min {} exceeds v_high_max {}",
                self.v_high_min,
                self.v_high_max
            );
        }
        if self.witness_epsilons.len() != self.witness_ts.len() || self.witness_ts.is_empty() {
            bail!("witness_epsilons and witness_ts must be non-empty and of equal length");
        }
        if self.max_lambda.is_nan() || self.max_lambda <= 500.0 {
            bail!("max_lambda must exceed 500");
        }
        if self.pbar_rule == PbarRule::Fixed && self.pbar.is_none() {
            bail!("pbar_rule = \"fixed\" needs a pbar value");
        }
        self.variants()?;
        let g = self.gamma()?;
        if g < q(1, 2) || g > q(1, 1) {
            bail!("gamma {g} is outside [1/2, 1]");
        }
        Ok(())
    }

    pub fn gamma(&self) -> Result<Q> {
        parse_rational(&self.gamma)
    }

    pub fn variants(&self) -> Result<Vec<Variant>> {
        self.variants.iter().map(|v| parse_variant(v)).collect()
    }

    pub fn witness_schedule(&self) -> Vec<(f64, f64)> {
        self.witness_epsilons
            .iter()
            .copied()
            .zip(self.witness_ts.iter().copied())
            .collect()
    }

    pub fn runs(&self, id: &str) -> bool {
        self.criteria.is_empty() || self.criteria.iter().any(|c| c.eq_ignore_ascii_case(id))
    }

    fn v_highs(&self) -> impl Iterator<Item = u32> {
        let lo = self.v_high_min.max(4).next_multiple_of(2);
        (lo..=self.v_high_max).step_by(2)
    }

    /// Every admissible `(v_low, v_high, p_bar)` with even
    /// `2 < v_low < v_high` under the cap rule.
    pub fn profiles(&self) -> Vec<ValuationProfile> {
        let mut out = Vec::new();
        for vh in self.v_highs() {
            for vl in (4..vh).step_by(2) {
                for pb in self.pbar_rule.caps(self.pbar, vl, vh) {
                    if let Ok(p) = ValuationProfile::new(vl, vh, pb) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    /// The grid with the symmetric cap `c_low + c_high`.
    pub fn symmetric_profiles(&self) -> Vec<ValuationProfile> {
        SweepConfig {
            pbar_rule: PbarRule::Symmetric,
            ..self.clone()
        }
        .profiles()
    }

    /// Equal-value profiles `v_low = v_high` with the minimum cap.
    pub fn equal_profiles(&self) -> Vec<ValuationProfile> {
        self.v_highs()
            .filter_map(|v| ValuationProfile::with_min_cap(v, v).ok())
            .collect()
    }
}
