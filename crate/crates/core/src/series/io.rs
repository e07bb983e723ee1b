//! Structured text (JSON) representation of truncated series.
//!
//! Rational coefficients are written as exact `"p/q"` strings, float
//! coefficients as the exact dyadic rational they hold, so both backends
//! round-trip bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Backend, ExactComplex, Scalar};

use super::monomial::{MultiIndex, VarSpace};
use super::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exp: Vec<u32>,
    pub re: String,
    pub im: String,
}

impl TermRecord {
    pub fn new(exp: &MultiIndex, value: &ExactComplex) -> Self {
        TermRecord {
            exp: exp.as_slice().to_vec(),
            re: value.re.to_string(),
            im: value.im.to_string(),
        }
    }

    pub fn value(&self) -> Result<ExactComplex> {
        Ok(ExactComplex::new(
            parse_rational(&self.re)?,
            parse_rational(&self.im)?,
        ))
    }
}

/// Backend tag as written in files: `"rational"` or `"float"` plus an
/// optional precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendTag {
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

impl BackendTag {
    pub fn of(backend: Backend) -> Self {
        match backend {
            Backend::Rational => BackendTag {
                backend: "rational".into(),
                precision: None,
            },
            Backend::Float { precision } => BackendTag {
                backend: "float".into(),
                precision: Some(precision),
            },
        }
    }

    pub fn parse(&self) -> Result<Backend> {
        match self.backend.as_str() {
            "rational" => Ok(Backend::Rational),
            "float" => Ok(Backend::Float {
                precision: self.precision.unwrap_or(crate::scalar::DEFAULT_PRECISION),
            }),
            other => Err(Error::parse(format!("unknown backend {other:?}"))),
        }
    }

    /// Checks that data tagged with `self` may be loaded into `C`.
    pub fn expect<C: Scalar>(&self, ctx: &C::Context) -> Result<()> {
        let found = self.parse()?;
        let wanted = C::backend(ctx);
        let same_kind = matches!(
            (found, wanted),
            (Backend::Rational, Backend::Rational) | (Backend::Float { .. }, Backend::Float { .. })
        );
        if same_kind {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                left: found.to_string(),
                right: wanted.to_string(),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub degree_bound: u32,
    #[serde(flatten)]
    pub backend: BackendTag,
    pub terms: Vec<TermRecord>,
}

pub(crate) fn var_space(
    names: &[String],
    weights: Option<&[u32]>,
) -> Result<std::sync::Arc<VarSpace>> {
    match weights {
        None => Ok(VarSpace::new(names.iter().cloned())),
        Some(w) if w.len() == names.len() => Ok(VarSpace::with_weights(
            names.iter().cloned(),
            w.iter().copied(),
        )),
        Some(w) => Err(Error::parse(format!(
            "{} weights for {} variables",
            w.len(),
            names.len()
        ))),
    }
}

pub(crate) fn weights_field(vars: &VarSpace) -> Option<Vec<u32>> {
    if vars.weights().iter().all(|&w| w == 1) {
        None
    } else {
        Some(vars.weights().to_vec())
    }
}

pub(crate) fn term_records<C: Scalar>(s: &TruncatedSeries<C>) -> Vec<TermRecord> {
    s.terms()
        .map(|(m, c)| TermRecord::new(m, &c.to_exact()))
        .collect()
}

pub(crate) fn series_from_terms<C: Scalar>(
    vars: std::sync::Arc<VarSpace>,
    degree_bound: u32,
    ctx: &C::Context,
    terms: &[TermRecord],
) -> Result<TruncatedSeries<C>> {
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exp.len() != vars.len() {
            return Err(Error::ExponentLength {
                expected: vars.len(),
                got: t.exp.len(),
            });
        }
        if vars.degree(&MultiIndex::from(t.exp.as_slice())) > degree_bound {
            return Err(Error::parse(format!(
                "term {:?} exceeds degree bound {degree_bound}",
                t.exp
            )));
        }
        parsed.push((
            MultiIndex::from(t.exp.as_slice()),
            C::from_exact(&t.value()?, ctx),
        ));
    }
    TruncatedSeries::from_terms(vars, degree_bound, ctx.clone(), parsed)
}

impl SeriesFile {
    pub fn from_series<C: Scalar>(s: &TruncatedSeries<C>) -> Self {
        SeriesFile {
            variables: s.vars().names().to_vec(),
            weights: weights_field(s.vars()),
            degree_bound: s.degree_bound(),
            backend: BackendTag::of(s.backend()),
            terms: term_records(s),
        }
    }

    pub fn to_series<C: Scalar>(&self, ctx: &C::Context) -> Result<TruncatedSeries<C>> {
        self.backend.expect::<C>(ctx)?;
        let vars = var_space(&self.variables, self.weights.as_deref())?;
        series_from_terms(vars, self.degree_bound, ctx, &self.terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))
    }
}
