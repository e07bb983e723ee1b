use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ExactComplex, Scalar};
use crate::series::{self, BackendTag, MultiIndex, TermRecord, TruncatedSeries, VarSpace};

/// The fixed curve `φ(t,x) = Σ_{j≥1} b_j(x) t^j`, stored as the finite table
/// `b_1 … b_J` of series in `x`, normalized by `b_1(0) = 1`.
///
/// Its family member at `s` is `φ_s(t,x) = s·b_1(x)·t + Σ_{j≥2} b_j(x) t^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<C: Scalar> {
    b: Vec<TruncatedSeries<C>>,
}

impl<C: Scalar> Curve<C> {
    /// `b[0]` is `b_1`. All entries must share one variable space and
    /// backend, and `b_1(0)` must equal 1 exactly.
    pub fn new(b: Vec<TruncatedSeries<C>>) -> Result<Self> {
        let Some(first) = b.first() else {
            return Err(Error::InvalidCurve("a curve needs at least b_1".into()));
        };
        for bj in &b[1..] {
            first.check_compatible(bj)?;
        }
        let curve = Curve { b };
        curve.validate()?;
        Ok(curve)
    }

    /// `b_1 = 1`, all other `b_j = 0`: the linear family `φ_s = s·t`.
    pub fn linear(x_vars: Arc<VarSpace>, x_degree: u32, ctx: C::Context) -> Self {
        Curve {
            b: vec![TruncatedSeries::one(x_vars, x_degree, ctx)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let b1 = &self.b[0];
        if b1.constant_term() != C::one(b1.ctx()) {
            return Err(Error::InvalidCurve(format!(
                "b_1(0) must equal 1, got {}",
                b1.constant_term().to_exact()
            )));
        }
        Ok(())
    }

    pub fn x_vars(&self) -> &Arc<VarSpace> {
        self.b[0].vars()
    }

    pub fn ctx(&self) -> &C::Context {
        self.b[0].ctx()
    }

    /// Number of stored coefficients `J`.
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `b_j` for `j ≥ 1` (zero beyond the stored table).
    pub fn b(&self, j: usize) -> Option<&TruncatedSeries<C>> {
        j.checked_sub(1).and_then(|k| self.b.get(k))
    }

    pub fn coefficients(&self) -> &[TruncatedSeries<C>] {
        &self.b
    }

    /// Variables `(t, x…)`.
    pub fn tx_space(&self) -> Arc<VarSpace> {
        self.x_vars().prepend([("t", 1)])
    }

    /// Variables `(y, t, x…)`.
    pub fn ytx_space(&self) -> Arc<VarSpace> {
        self.x_vars().prepend([("y", 1), ("t", 1)])
    }

    /// Variables `(s, t, x…)` with the formal parameter `s` weightless, so a
    /// truncation at `D` bounds the `(t,x)` degree only.
    pub fn stx_space(&self) -> Arc<VarSpace> {
        self.x_vars().prepend([("s", 0), ("t", 1)])
    }

    /// Lifts `b(x)·t^j` (times `s^p` in the formal space) into `space`.
    pub(crate) fn lift(
        &self,
        bx: &TruncatedSeries<C>,
        space: &Arc<VarSpace>,
        lead: usize,
        shift: &[u32],
        degree: u32,
    ) -> Result<TruncatedSeries<C>> {
        let nx = self.x_vars().len();
        let positions: Vec<usize> = (0..nx).map(|k| lead + k).collect();
        let lifted = bx.embed(space.clone(), &positions, degree)?;
        let mut exps = MultiIndex::zeros(space.len());
        for (k, e) in shift.iter().enumerate() {
            exps.set(k, *e);
        }
        lifted.shift(&exps)
    }

    /// `φ_s(t,x)` at a numeric parameter, truncated at total degree `D`.
    pub fn phi_at(&self, s: &C, degree: u32) -> Result<TruncatedSeries<C>> {
        let space = self.tx_space();
        let mut out = TruncatedSeries::zero(space.clone(), degree, self.ctx().clone());
        let first = self.lift(&self.b[0], &space, 1, &[1], degree)?.scale(s);
        out = out.add(&first)?;
        for j in 2..=self.b.len().min(degree as usize) {
            out = out.add(&self.lift(&self.b[j - 1], &space, 1, &[j as u32], degree)?)?;
        }
        Ok(out)
    }

    /// `φ(s,t,x)` with `s` kept as a formal weightless variable.
    pub fn phi_formal(&self, degree: u32) -> Result<TruncatedSeries<C>> {
        let space = self.stx_space();
        let mut out = self.lift(&self.b[0], &space, 2, &[1, 1], degree)?;
        for j in 2..=self.b.len().min(degree as usize) {
            out = out.add(&self.lift(&self.b[j - 1], &space, 2, &[0, j as u32], degree)?)?;
        }
        Ok(out)
    }

    /// `φ(s,t,x)/t = s·b_1(x) + Σ_{j≥2} b_j(x) t^{j−1}` in the formal space.
    pub(crate) fn phi_formal_over_t(&self, degree: u32) -> Result<TruncatedSeries<C>> {
        let space = self.stx_space();
        let mut out = self.lift(&self.b[0], &space, 2, &[1, 0], degree)?;
        for j in 2..=self.b.len().min(degree as usize + 1) {
            out = out.add(&self.lift(&self.b[j - 1], &space, 2, &[0, j as u32 - 1], degree)?)?;
        }
        Ok(out)
    }

    pub fn convert<T: Scalar>(&self, ctx: T::Context) -> Curve<T> {
        Curve {
            b: self.b.iter().map(|s| s.convert::<T>(ctx.clone())).collect(),
        }
    }
}

impl Curve<ExactComplex> {
    /// One x variable named `x`; `b[j-1]` lists the x-coefficients of `b_j`.
    pub fn from_coefficients(b: &[Vec<ExactComplex>], x_degree: u32) -> Result<Self> {
        let x = VarSpace::new(["x"]);
        let series = b
            .iter()
            .map(|coeffs| {
                TruncatedSeries::from_terms(
                    x.clone(),
                    x_degree,
                    (),
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| ([k as u32], c.clone())),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Curve::new(series)
    }

    /// Parses the inline form `"b1;b2;…"`, each `b_j` a comma-separated list
    /// of x-coefficients, e.g. `"1,1;0,1"` for `b_1 = 1 + x`, `b_2 = x`.
    pub fn parse_inline(text: &str, x_degree: u32) -> Result<Self> {
        let b = text
            .split(';')
            .map(|part| {
                part.split(',')
                    .map(crate::scalar::parse_exact_complex)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Curve::from_coefficients(&b, x_degree)
    }
}

/// File form of a curve: the shared x variables and one term list per `b_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub variables: Vec<String>,
    pub degree_bound: u32,
    #[serde(flatten)]
    pub backend: BackendTag,
    pub b: Vec<Vec<TermRecord>>,
}

impl CurveFile {
    pub fn from_curve<C: Scalar>(curve: &Curve<C>) -> Self {
        CurveFile {
            variables: curve.x_vars().names().to_vec(),
            degree_bound: curve.b[0].degree_bound(),
            backend: BackendTag::of(curve.b[0].backend()),
            b: curve.b.iter().map(series::term_records).collect(),
        }
    }

    pub fn to_curve<C: Scalar>(&self, ctx: &C::Context) -> Result<Curve<C>> {
        self.backend.expect::<C>(ctx)?;
        let vars = series::var_space(&self.variables, None)?;
        let b = self
            .b
            .iter()
            .map(|terms| series::series_from_terms(vars.clone(), self.degree_bound, ctx, terms))
            .collect::<Result<Vec<_>>>()?;
        Curve::new(b)
    }
}
