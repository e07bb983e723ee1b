use std::collections::BTreeMap;
use std::str::FromStr;

use dashu_int::IBig;
use dashu_ratio::RBig;
use rayon::prelude::*;

use crate::curve::{forward_map, probe_dtable, ATable, Curve, Probe};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, ExactComplex, Scalar};
use crate::series::{Verdict, VerdictRule};

/// Square `n × n` grid of parameter samples centered at `center` with
/// half-width `radius`, held as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub center: ExactComplex,
    pub radius: RBig,
    pub n: u32,
}

impl Grid {
    /// Samples row by row, imaginary part ascending, then real part ascending.
    pub fn samples(&self) -> Vec<ExactComplex> {
        if self.n == 1 {
            return vec![self.center.clone()];
        }
        let step = RBig::from(2) * &self.radius / RBig::from(IBig::from(self.n - 1));
        let offset = |k: u32| RBig::from(IBig::from(k)) * &step - &self.radius;
        let mut out = Vec::with_capacity((self.n * self.n) as usize);
        for iy in 0..self.n {
            for ix in 0..self.n {
                out.push(ExactComplex::new(
                    &self.center.re + offset(ix),
                    &self.center.im + offset(iy),
                ));
            }
        }
        out
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `cx,cy,r,n`.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let [cx, cy, r, n] = parts.as_slice() else {
            return Err(Error::parse(format!(
                "grid must read cx,cy,r,n, got {text:?}"
            )));
        };
        let radius = parse_rational(r)?;
        if radius < RBig::ZERO {
            return Err(Error::parse("grid radius must be non-negative"));
        }
        let n: u32 = n
            .parse()
            .map_err(|_| Error::parse(format!("bad grid resolution {n:?}")))?;
        if n == 0 {
            return Err(Error::parse("grid resolution must be at least 1"));
        }
        Ok(Grid {
            center: ExactComplex::new(parse_rational(cx)?, parse_rational(cy)?),
            radius,
            n,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub s: ExactComplex,
    pub probe: Probe,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub degree: u32,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn counts(&self) -> BTreeMap<Verdict, usize> {
        let mut out = BTreeMap::new();
        for row in &self.rows {
            *out.entry(row.probe.profile.verdict).or_insert(0) += 1;
        }
        out
    }

    pub fn samples_with(&self, verdict: Verdict) -> Vec<&ExactComplex> {
        self.rows
            .iter()
            .filter(|r| r.probe.profile.verdict == verdict)
            .map(|r| &r.s)
            .collect()
    }
}

/// Probes `f` along `φ_s` at every sample; rows keep the sample order.
pub fn scan<C: Scalar>(
    a: &ATable<C>,
    curve: &Curve<C>,
    samples: &[ExactComplex],
    degree: u32,
    rule: &VerdictRule,
) -> Result<ScanReport> {
    if samples.is_empty() {
        return Err(Error::precondition("no samples to scan"));
    }
    let d = forward_map(a, curve, degree)?;
    let rows = samples
        .par_iter()
        .map(|s| {
            Ok(ScanRow {
                s: s.clone(),
                probe: probe_dtable(&d, s, rule)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport { degree, rows })
}
