use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lab::report::{fmt_float, render};

use super::chebyshev::{chebyshev_constant, MinimaxOptions};
use super::fekete::transfinite_diameter;
use super::{CompactSet, Descriptor};

/// Estimates below this are reported as polar-like.
pub const POLAR_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityOptions {
    /// Ladder of degrees; the top two drive the extrapolation.
    pub rungs: Vec<usize>,
    pub minimax: MinimaxOptions,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        CapacityOptions {
            rungs: vec![8, 16, 32, 64],
            minimax: MinimaxOptions::default(),
        }
    }
}

impl CapacityOptions {
    /// Ladder stopping at `top`.
    pub fn up_to(top: usize) -> Self {
        let rungs = CapacityOptions::default()
            .rungs
            .into_iter()
            .filter(|&n| n <= top)
            .collect();
        CapacityOptions {
            rungs,
            ..Default::default()
        }
    }
}

/// Both estimator routes over the ladder. For a Cantor approximant the value
/// bounds the capacity of the limit set from above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub h: f64,
    /// `(n, d_n)`, increasing in `n`.
    pub d_n: Vec<(usize, f64)>,
    /// `(n, ρ_n^{1/n})`, increasing in `n`.
    pub rho_n: Vec<(usize, f64)>,
    /// `d_∞` extrapolated from the Fekete route.
    pub extrapolated: f64,
    /// `ρ_∞` extrapolated from the Chebyshev route.
    pub rho_extrapolated: f64,
    /// `|d_∞ − ρ_∞| / max(d_∞, ρ_∞)`.
    pub spread: f64,
}

impl CapacityEstimate {
    pub fn is_polar_like(&self) -> bool {
        self.extrapolated < POLAR_THRESHOLD
    }
}

/// Fits `v_n ≈ v_∞ + c/n` through the top two rungs, clamped at zero.
pub fn extrapolate(values: &[(usize, f64)]) -> f64 {
    match values {
        [] => 0.0,
        [(_, v)] => v.max(0.0),
        [.., (n1, v1), (n2, v2)] => {
            let (n1, n2) = (*n1 as f64, *n2 as f64);
            ((n2 * v2 - n1 * v1) / (n2 - n1)).max(0.0)
        }
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let top = a.abs().max(b.abs());
    if top == 0.0 {
        0.0
    } else {
        (a - b).abs() / top
    }
}

/// Runs both routes on every rung; rungs are independent and run in parallel.
pub fn capacity_with(set: &CompactSet, options: &CapacityOptions) -> Result<CapacityEstimate> {
    let mut rungs = options.rungs.clone();
    rungs.sort_unstable();
    rungs.dedup();
    if rungs.first().is_some_and(|&n| n < 2) {
        return Err(Error::precondition("capacity rungs start at n = 2"));
    }
    let rows = rungs
        .par_iter()
        .map(|&n| {
            Ok((
                n,
                transfinite_diameter(set, n)?,
                chebyshev_constant(set, n, &options.minimax)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let d_n: Vec<_> = rows.iter().map(|(n, d, _)| (*n, *d)).collect();
    let rho_n: Vec<_> = rows.iter().map(|(n, _, r)| (*n, *r)).collect();
    let extrapolated = extrapolate(&d_n);
    let rho_extrapolated = extrapolate(&rho_n);
    Ok(CapacityEstimate {
        h: set.h(),
        spread: relative_gap(extrapolated, rho_extrapolated),
        d_n,
        rho_n,
        extrapolated,
        rho_extrapolated,
    })
}

/// [`capacity_with`] on the default ladder `n ∈ {8, 16, 32, 64}`.
pub fn capacity(set: &CompactSet) -> Result<CapacityEstimate> {
    capacity_with(set, &CapacityOptions::default())
}

/// `n, d_n, rho_n_root, extrapolated, spread, h`, one row per rung.
pub fn capacity_csv(estimate: &CapacityEstimate) -> Result<String> {
    render(
        &["n", "d_n", "rho_n_root", "extrapolated", "spread", "h"],
        estimate
            .d_n
            .iter()
            .zip(&estimate.rho_n)
            .map(|((n, d), (_, r))| {
                vec![
                    n.to_string(),
                    fmt_float(*d),
                    fmt_float(*r),
                    fmt_float(estimate.extrapolated),
                    fmt_float(estimate.spread),
                    fmt_float(estimate.h),
                ]
            }),
    )
}

/// `law, lhs, rhs, relative_error, polar_like`, one row per report.
pub fn law_csv(reports: &[LawReport]) -> Result<String> {
    render(
        &["law", "lhs", "rhs", "relative_error", "polar_like"],
        reports.iter().map(|r| {
            vec![
                r.law.clone(),
                fmt_float(r.lhs),
                fmt_float(r.rhs),
                fmt_float(r.relative_error),
                r.polar_like.map_or(String::new(), |b| b.to_string()),
            ]
        }),
    )
}

/// A capacity identity to test numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    /// `c(λK) = |λ|·c(K)`.
    Scaling { set: Descriptor, factor: Complex64 },
    /// `c(P^{-1}(K)) = c(K)^{1/deg P}` for monic `P`, coefficients low to high.
    Preimage {
        set: Descriptor,
        coeffs: Vec<Complex64>,
    },
    /// A finite union of polar-like sets stays polar-like.
    Union(Vec<Descriptor>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    /// Capacity of the transformed set (or of the union).
    pub lhs: f64,
    /// The value predicted from the input capacity (for a union, the largest
    /// part).
    pub rhs: f64,
    pub relative_error: f64,
    /// Union only: whether the union estimate is below [`POLAR_THRESHOLD`].
    pub polar_like: Option<bool>,
}

pub fn law_check(law: &Law, h: f64, options: &CapacityOptions) -> Result<LawReport> {
    let cap = |d: &Descriptor| -> Result<f64> {
        Ok(capacity_with(&CompactSet::new(d.clone(), h)?, options)?.extrapolated)
    };
    match law {
        Law::Scaling { set, factor } => {
            let base = cap(set)?;
            let lhs = cap(&Descriptor::Scaled {
                factor: *factor,
                inner: Box::new(set.clone()),
            })?;
            let rhs = factor.norm() * base;
            Ok(LawReport {
                law: format!("scaling {factor}"),
                lhs,
                rhs,
                relative_error: relative_gap(lhs, rhs),
                polar_like: None,
            })
        }
        Law::Preimage { set, coeffs } => {
            let pre = Descriptor::Preimage {
                coeffs: coeffs.clone(),
                inner: Box::new(set.clone()),
            };
            pre.validate()?;
            let base = cap(set)?;
            let lhs = cap(&pre)?;
            let rhs = base.powf(1.0 / (coeffs.len() - 1) as f64);
            Ok(LawReport {
                law: format!("preimage degree {}", coeffs.len() - 1),
                lhs,
                rhs,
                relative_error: relative_gap(lhs, rhs),
                polar_like: None,
            })
        }
        Law::Union(parts) => {
            let mut rhs: f64 = 0.0;
            for p in parts {
                rhs = rhs.max(cap(p)?);
            }
            let lhs = cap(&Descriptor::Union(parts.clone()))?;
            Ok(LawReport {
                law: "union".into(),
                lhs,
                rhs,
                relative_error: lhs - rhs,
                polar_like: Some(lhs < POLAR_THRESHOLD),
            })
        }
    }
}
