use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Backend, FloatComplex, Scalar};

use super::monomial::{MultiIndex, VarSpace};

/// Sparse multivariate power series truncated at a (weighted) total degree.
///
/// Canonical form: every stored exponent has degree `<= degree_bound` and no
/// stored coefficient is zero, so equality of series is equality of term maps.
#[derive(Clone)]
pub struct TruncatedSeries<C: Scalar> {
    vars: Arc<VarSpace>,
    degree_bound: u32,
    ctx: C::Context,
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Scalar> PartialEq for TruncatedSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.ctx == other.ctx && self.terms == other.terms
    }
}

impl<C: Scalar> TruncatedSeries<C> {
    pub fn zero(vars: Arc<VarSpace>, degree_bound: u32, ctx: C::Context) -> Self {
        TruncatedSeries {
            vars,
            degree_bound,
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<VarSpace>, degree_bound: u32, ctx: C::Context, value: C) -> Self {
        let mut s = Self::zero(vars, degree_bound, ctx);
        let origin = MultiIndex::zeros(s.vars.len());
        s.insert(origin, value);
        s
    }

    pub fn one(vars: Arc<VarSpace>, degree_bound: u32, ctx: C::Context) -> Self {
        let one = C::one(&ctx);
        Self::constant(vars, degree_bound, ctx, one)
    }

    /// The coordinate function of variable `var`.
    pub fn variable(
        vars: Arc<VarSpace>,
        degree_bound: u32,
        ctx: C::Context,
        var: usize,
    ) -> Result<Self> {
        if var >= vars.len() {
            return Err(Error::precondition(format!(
                "variable index {var} out of range"
            )));
        }
        let unit = MultiIndex::unit(vars.len(), var);
        let one = C::one(&ctx);
        Self::from_terms(vars, degree_bound, ctx, [(unit, one)])
    }

    /// Builds a series from raw terms, summing duplicates and dropping zeros
    /// and terms above the degree bound.
    pub fn from_terms<I, M>(
        vars: Arc<VarSpace>,
        degree_bound: u32,
        ctx: C::Context,
        terms: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (M, C)>,
        M: Into<MultiIndex>,
    {
        let mut s = Self::zero(vars, degree_bound, ctx);
        for (m, c) in terms {
            let m = m.into();
            if m.len() != s.vars.len() {
                return Err(Error::ExponentLength {
                    expected: s.vars.len(),
                    got: m.len(),
                });
            }
            s.accumulate(m, &c);
        }
        s.prune();
        Ok(s)
    }

    pub fn vars(&self) -> &Arc<VarSpace> {
        &self.vars
    }

    pub fn varcount(&self) -> usize {
        self.vars.len()
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn ctx(&self) -> &C::Context {
        &self.ctx
    }

    pub fn backend(&self) -> Backend {
        C::backend(&self.ctx)
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<MultiIndex, C> {
        self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(&MultiIndex::from(exps))
    }

    pub fn coefficient_or_zero(&self, exps: &[u32]) -> C {
        self.coefficient(exps)
            .cloned()
            .unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .get(&MultiIndex::zeros(self.vars.len()))
            .cloned()
            .unwrap_or_else(|| C::zero(&self.ctx))
    }

    /// Weighted degree of an exponent in this series' variable space.
    pub fn degree_of(&self, m: &MultiIndex) -> u32 {
        self.vars.degree(m)
    }

    /// Smallest weighted degree among stored terms (`None` for zero).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.vars.degree(m)).min()
    }

    /// Largest weighted degree among stored terms (`None` for zero).
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.vars.degree(m)).max()
    }

    pub fn with_degree_bound(mut self, degree_bound: u32) -> Self {
        self.degree_bound = degree_bound;
        let vars = self.vars.clone();
        self.terms.retain(|m, _| vars.degree(m) <= degree_bound);
        self
    }

    /// Drops all terms of degree above `degree_bound` (never raises the bound).
    pub fn truncate(&self, degree_bound: u32) -> Self {
        self.clone()
            .with_degree_bound(degree_bound.min(self.degree_bound))
    }

    pub(crate) fn insert(&mut self, m: MultiIndex, c: C) {
        if !c.is_zero() && self.vars.degree(&m) <= self.degree_bound {
            self.terms.insert(m, c);
        }
    }

    /// Adds `c` at `m` without pruning zeros; callers prune afterwards.
    fn accumulate(&mut self, m: MultiIndex, c: &C) {
        if self.vars.degree(&m) > self.degree_bound {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => e.get_mut().add_assign(c),
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VarSpaceMismatch {
                left: self.vars.describe(),
                right: other.vars.describe(),
            });
        }
        if self.ctx != other.ctx {
            return Err(Error::BackendMismatch {
                left: self.backend().to_string(),
                right: other.backend().to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.truncate(other.degree_bound);
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c);
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, factor: &C) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.degree_bound, self.ctx.clone());
        if factor.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.mul(factor));
        }
        out
    }

    /// Multiplies by the monomial of exponent `shift`, dropping what falls
    /// beyond the degree bound.
    pub fn shift(&self, shift: &MultiIndex) -> Result<Self> {
        if shift.len() != self.vars.len() {
            return Err(Error::ExponentLength {
                expected: self.vars.len(),
                got: shift.len(),
            });
        }
        let mut out = Self::zero(self.vars.clone(), self.degree_bound, self.ctx.clone());
        for (m, c) in &self.terms {
            out.insert(m.plus(shift), c.clone());
        }
        Ok(out)
    }

    /// Truncated product at `min(D_f, D_g)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_bounded(other, self.degree_bound.min(other.degree_bound)))
    }

    /// Truncated product at an explicit degree bound (no compatibility check).
    pub(crate) fn mul_bounded(&self, other: &Self, bound: u32) -> Self {
        let mut out = Self::zero(self.vars.clone(), bound, self.ctx.clone());
        if self.is_zero() || other.is_zero() {
            return out;
        }
        // bucket the right factor by degree so each left term only visits
        // the buckets that survive truncation
        let mut buckets: Vec<Vec<(&MultiIndex, &C)>> = vec![Vec::new(); bound as usize + 1];
        for (m, c) in &other.terms {
            let d = self.vars.degree(m);
            if d <= bound {
                buckets[d as usize].push((m, c));
            }
        }
        for (ma, ca) in &self.terms {
            let da = self.vars.degree(ma);
            if da > bound {
                continue;
            }
            for bucket in &buckets[..=(bound - da) as usize] {
                for (mb, cb) in bucket {
                    out.accumulate(ma.plus(mb), &ca.mul(cb));
                }
            }
        }
        out.prune();
        out
    }

    /// `f^e` by repeated truncated multiplication; `f^0 = 1`.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars.clone(), self.degree_bound, self.ctx.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_bounded(&base, self.degree_bound);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_bounded(&base, self.degree_bound);
            }
        }
        acc
    }

    /// Truncated multiplicative inverse by Newton iteration
    /// `g ← g + g·(1 − f·g)`, doubling the correct order each step.
    ///
    /// Requires an invertible constant term and no nonconstant terms of
    /// weighted degree zero.
    pub fn inverse(&self) -> Result<Self> {
        let origin = MultiIndex::zeros(self.vars.len());
        if self
            .terms
            .keys()
            .any(|m| *m != origin && self.vars.degree(m) == 0)
        {
            return Err(Error::precondition(
                "degree-zero part of the series is not constant",
            ));
        }
        let c0 = self.constant_term().inv()?;
        let bound = self.degree_bound;
        let one = Self::one(self.vars.clone(), bound, self.ctx.clone());
        let mut g = Self::constant(self.vars.clone(), bound, self.ctx.clone(), c0);
        let mut correct = 1u32; // g is exact below this degree
        while correct <= bound {
            let next = (2 * correct).min(bound + 1);
            g = g.with_degree_bound(next - 1);
            let fg = self.mul_bounded(&g, next - 1);
            let err = one.truncate(next - 1).sub(&fg)?;
            let corr = g.mul_bounded(&err, next - 1);
            g = g.add(&corr)?;
            correct = next;
        }
        Ok(g.with_degree_bound(bound))
    }

    /// Substitutes `u` for the first variable of `self`.
    ///
    /// The remaining variables of `self` must coincide with the trailing
    /// variables of `u`; any leading variables of `u` (formal parameters)
    /// are carried into the result, which lives in `u`'s variable space.
    /// Every term of `u` must have weighted degree at least the weight of
    /// the substituted variable, so each degree of the result depends on
    /// finitely many terms of `self`.
    pub fn substitute_y(&self, u: &Self) -> Result<Self> {
        if self.vars.is_empty() {
            return Err(Error::precondition(
                "cannot substitute into a series without variables",
            ));
        }
        let rest = self.vars.len() - 1;
        let lead = u
            .vars
            .len()
            .checked_sub(rest)
            .ok_or_else(|| Error::VarSpaceMismatch {
                left: self.vars.describe(),
                right: u.vars.describe(),
            })?;
        if self.vars.names()[1..] != u.vars.names()[lead..]
            || self.vars.weights()[1..] != u.vars.weights()[lead..]
        {
            return Err(Error::VarSpaceMismatch {
                left: self.vars.describe(),
                right: u.vars.describe(),
            });
        }
        if self.ctx != u.ctx {
            return Err(Error::BackendMismatch {
                left: self.backend().to_string(),
                right: u.backend().to_string(),
            });
        }
        let y_weight = self.vars.weights()[0];
        if u.order().is_some_and(|o| o < y_weight.max(1)) {
            return Err(Error::precondition(
                "substituted series has a nonzero constant term",
            ));
        }
        let bound = self.degree_bound.min(u.degree_bound);

        // group by the exponent of the substituted variable, lifted into u's space
        let mut slices: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let lifted: MultiIndex = std::iter::repeat_n(0, lead)
                .chain(m.iter().skip(1))
                .collect();
            slices
                .entry(m.get(0))
                .or_insert_with(|| Self::zero(u.vars.clone(), bound, u.ctx.clone()))
                .accumulate(lifted, c);
        }
        let Some(&top) = slices.keys().next_back() else {
            return Ok(Self::zero(u.vars.clone(), bound, u.ctx.clone()));
        };
        // Horner in the substituted variable
        let mut acc = Self::zero(u.vars.clone(), bound, u.ctx.clone());
        for i in (0..=top).rev() {
            if !acc.is_zero() {
                acc = acc.mul_bounded(u, bound);
            }
            if let Some(slice) = slices.get(&i) {
                for (m, c) in &slice.terms {
                    acc.accumulate(m.clone(), c);
                }
                acc.prune();
            }
        }
        Ok(acc)
    }

    /// Re-expresses the series in a larger space: variable `k` of `self`
    /// becomes variable `positions[k]` of `target`.
    pub fn embed(
        &self,
        target: Arc<VarSpace>,
        positions: &[usize],
        degree_bound: u32,
    ) -> Result<Self> {
        if positions.len() != self.vars.len() || positions.iter().any(|&p| p >= target.len()) {
            return Err(Error::VarSpaceMismatch {
                left: self.vars.describe(),
                right: target.describe(),
            });
        }
        let mut out = Self::zero(target.clone(), degree_bound, self.ctx.clone());
        for (m, c) in &self.terms {
            let mut e = MultiIndex::zeros(target.len());
            for (k, &p) in positions.iter().enumerate() {
                e.set(p, e.get(p) + m.get(k));
            }
            out.accumulate(e, c);
        }
        out.prune();
        Ok(out)
    }

    /// Converts every coefficient into another backend.
    pub fn convert<T: Scalar>(&self, ctx: T::Context) -> TruncatedSeries<T> {
        let mut out = TruncatedSeries::<T>::zero(self.vars.clone(), self.degree_bound, ctx.clone());
        for (m, c) in &self.terms {
            out.insert(m.clone(), T::from_exact(&c.to_exact(), &ctx));
        }
        out
    }

    pub fn to_float(&self, precision: usize) -> TruncatedSeries<FloatComplex> {
        let mut out =
            TruncatedSeries::<FloatComplex>::zero(self.vars.clone(), self.degree_bound, precision);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.to_float(precision));
        }
        out
    }
}

impl<C: Scalar> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.degree_bound + 1);
        }
        let names = self.vars.names();
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for (k, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", names[k])?,
                    _ => write!(f, "*{}^{e}", names[k])?,
                }
            }
        }
        write!(f, " + O({})", self.degree_bound + 1)
    }
}
