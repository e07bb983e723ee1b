//! Coefficient-growth diagnostics.
//!
//! A series converges iff `|a_α| ≤ C^|α|` for some `C`, i.e. iff the
//! per-degree growth `ρ_m = max_{|α|=m} |a_α|^{1/m}` stays bounded. At a
//! finite truncation degree this can only be judged heuristically; the
//! [`VerdictRule`] fixes how.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Scalar;

use super::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONVERGENT-LIKE")]
    ConvergentLike,
    #[serde(rename = "DIVERGENT-LIKE")]
    DivergentLike,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ConvergentLike => "CONVERGENT-LIKE",
            Verdict::DivergentLike => "DIVERGENT-LIKE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "CONVERGENT-LIKE" => Ok(Verdict::ConvergentLike),
            "DIVERGENT-LIKE" => Ok(Verdict::DivergentLike),
            "INCONCLUSIVE" => Ok(Verdict::Inconclusive),
            _ => Err(Error::parse(format!("unknown verdict {s:?}"))),
        }
    }
}

/// Thresholds of the growth verdict.
///
/// The slope is the least-squares slope of `ln ρ_m` against `ln m` over the
/// top half `m ∈ [⌈D/2⌉, D]`, using only degrees with `ρ_m > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerdictRule {
    /// Slope above which growth counts as divergent.
    pub divergent_slope: f64,
    /// The last nonzero `ρ_m` of the window must also exceed this.
    pub divergent_rho: f64,
    /// Slope at or below which growth counts as convergent.
    pub convergent_slope: f64,
    /// Convergent verdicts also need `max ρ_m` over the window at or below this.
    pub convergent_rho_cap: f64,
}

impl Default for VerdictRule {
    fn default() -> Self {
        VerdictRule {
            divergent_slope: 0.2,
            divergent_rho: 1.0,
            convergent_slope: 0.05,
            convergent_rho_cap: f64::INFINITY,
        }
    }
}

/// Per-degree growth statistics of a truncated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    /// `(m, ρ_m)` for `m = 1..=D`; zero where no degree-`m` term exists.
    pub rho: Vec<(u32, f64)>,
    pub verdict: Verdict,
    /// Truncation degree the verdict was computed at.
    pub degree_at_verdict: u32,
    /// Fitted log-log slope over the window (`None` if no nonzero term).
    pub slope: Option<f64>,
}

impl GrowthProfile {
    pub fn rho_at(&self, m: u32) -> f64 {
        self.rho
            .iter()
            .find(|(k, _)| *k == m)
            .map_or(0.0, |(_, r)| *r)
    }

    /// `ρ_D`, the growth at the truncation degree itself.
    pub fn rho_last(&self) -> f64 {
        self.rho.last().map_or(0.0, |(_, r)| *r)
    }

    pub fn rho_max(&self) -> f64 {
        self.rho.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    /// Builds a profile from `ln max |a_α|` per degree (`-inf` for none).
    pub fn from_log_maxima(log_max: &[f64], degree: u32, rule: &VerdictRule) -> Self {
        let rho: Vec<(u32, f64)> = (1..=degree)
            .map(|m| {
                let l = log_max
                    .get(m as usize)
                    .copied()
                    .unwrap_or(f64::NEG_INFINITY);
                (
                    m,
                    if l.is_finite() {
                        (l / m as f64).exp()
                    } else {
                        0.0
                    },
                )
            })
            .collect();
        let (verdict, slope) = classify(&rho, degree, rule);
        GrowthProfile {
            rho,
            verdict,
            degree_at_verdict: degree,
            slope,
        }
    }
}

fn classify(rho: &[(u32, f64)], degree: u32, rule: &VerdictRule) -> (Verdict, Option<f64>) {
    if degree < 4 {
        return (Verdict::Inconclusive, None);
    }
    let lo = degree.div_ceil(2);
    let window: Vec<(f64, f64)> = rho
        .iter()
        .filter(|(m, r)| *m >= lo && *r > 0.0)
        .map(|(m, r)| ((*m as f64).ln(), r.ln()))
        .collect();
    if window.is_empty() {
        // the tail vanishes identically
        return (Verdict::ConvergentLike, None);
    }
    let slope = if window.len() == 1 {
        0.0
    } else {
        let n = window.len() as f64;
        let mx = window.iter().map(|p| p.0).sum::<f64>() / n;
        let my = window.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = window.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = window.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        sxy / sxx
    };
    let rho_top = window.last().map(|p| p.1.exp()).unwrap_or(0.0);
    let rho_max = window.iter().map(|p| p.1.exp()).fold(0.0, f64::max);
    let verdict = if slope > rule.divergent_slope && rho_top > rule.divergent_rho {
        Verdict::DivergentLike
    } else if slope <= rule.convergent_slope && rho_max <= rule.convergent_rho_cap {
        Verdict::ConvergentLike
    } else {
        Verdict::Inconclusive
    };
    (verdict, Some(slope))
}

/// `ρ_m = max_{|α|=m} |a_α|^{1/m}` for `m = 1..=D` plus a verdict.
///
/// Degrees are plain exponent sums `|α|`, independent of truncation weights.
/// Coefficients are measured through the float backend so magnitudes far
/// beyond f64 range keep a meaningful `m`-th root.
pub fn growth_profile<C: Scalar>(f: &TruncatedSeries<C>, rule: &VerdictRule) -> GrowthProfile {
    let degree = f.degree_bound();
    let mut log_max = vec![f64::NEG_INFINITY; degree as usize + 1];
    for (m, c) in f.terms() {
        let len = m.length();
        if len == 0 || len > degree {
            continue;
        }
        let l = c.ln_abs();
        let slot = &mut log_max[len as usize];
        if l > *slot {
            *slot = l;
        }
    }
    GrowthProfile::from_log_maxima(&log_max, degree, rule)
}
