use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{self, BackendTag, MultiIndex, TermRecord, TruncatedSeries, VarSpace};

/// Coefficient table indexed by two non-negative integers, each entry a
/// truncated series in the x variables.
///
/// The entry at `(a, b)` is truncated at x-degree `D − level(a, b)`, where the
/// level is `a + b` for an [`ATable`] and `b` for a [`DTable`]; zero entries
/// are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<C: Scalar, K> {
    x_vars: Arc<VarSpace>,
    degree: u32,
    ctx: C::Context,
    entries: BTreeMap<(u32, u32), TruncatedSeries<C>>,
    _kind: std::marker::PhantomData<K>,
}

/// Index convention of a [`Table`].
pub trait TableKind: Clone + std::fmt::Debug + PartialEq + Send + Sync + 'static {
    /// Names of the two index keys in files.
    const KEYS: (&'static str, &'static str);
    /// Degree consumed by an index pair, beyond which nothing survives.
    fn level(a: u32, b: u32) -> u32;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DKind;

impl TableKind for AKind {
    const KEYS: (&'static str, &'static str) = ("i", "j");
    fn level(i: u32, j: u32) -> u32 {
        i + j
    }
}

impl TableKind for DKind {
    const KEYS: (&'static str, &'static str) = ("p", "q");
    fn level(_p: u32, q: u32) -> u32 {
        q
    }
}

/// `f(y,t,x) = Σ a_ij(x) y^i t^j`.
pub type ATable<C> = Table<C, AKind>;

/// `g(s;t,x) = Σ d_pq(x) s^p t^q`.
pub type DTable<C> = Table<C, DKind>;

/// Outcome of [`DTable::triangularity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangularity {
    pub holds: bool,
    /// First `(p, q)` with `p > q` and a nonzero entry.
    pub witness: Option<(u32, u32)>,
}

impl<C: Scalar, K: TableKind> Table<C, K> {
    pub fn new(x_vars: Arc<VarSpace>, degree: u32, ctx: C::Context) -> Self {
        Table {
            x_vars,
            degree,
            ctx,
            entries: BTreeMap::new(),
            _kind: std::marker::PhantomData,
        }
    }

    pub fn x_vars(&self) -> &Arc<VarSpace> {
        &self.x_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ctx(&self) -> &C::Context {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Bound on the x-degree of the entry at `(a, b)`, `None` if the entry
    /// cannot survive truncation.
    pub fn entry_bound(&self, a: u32, b: u32) -> Option<u32> {
        self.degree.checked_sub(K::level(a, b))
    }

    /// Stores `value` at `(a, b)` after truncation; zero removes the entry.
    pub fn insert(&mut self, a: u32, b: u32, value: TruncatedSeries<C>) -> Result<()> {
        self.check_entry(&value)?;
        let Some(bound) = self.entry_bound(a, b) else {
            self.entries.remove(&(a, b));
            return Ok(());
        };
        let value = value.truncate(bound);
        if value.is_zero() {
            self.entries.remove(&(a, b));
        } else {
            self.entries.insert((a, b), value);
        }
        Ok(())
    }

    /// Adds `value` into the entry at `(a, b)`.
    pub fn accumulate(&mut self, a: u32, b: u32, value: &TruncatedSeries<C>) -> Result<()> {
        let sum = match self.entries.get(&(a, b)) {
            Some(old) => old.add(value)?,
            None => value.clone(),
        };
        self.insert(a, b, sum)
    }

    fn check_entry(&self, value: &TruncatedSeries<C>) -> Result<()> {
        if value.vars() != &self.x_vars {
            return Err(Error::VarSpaceMismatch {
                left: describe(&self.x_vars),
                right: describe(value.vars()),
            });
        }
        if value.ctx() != &self.ctx {
            return Err(Error::BackendMismatch {
                left: C::backend(&self.ctx).to_string(),
                right: value.backend().to_string(),
            });
        }
        Ok(())
    }

    pub fn get(&self, a: u32, b: u32) -> Option<&TruncatedSeries<C>> {
        self.entries.get(&(a, b))
    }

    /// The entry at `(a, b)`, or the zero series when absent.
    pub fn get_or_zero(&self, a: u32, b: u32) -> TruncatedSeries<C> {
        self.entries.get(&(a, b)).cloned().unwrap_or_else(|| {
            TruncatedSeries::zero(
                self.x_vars.clone(),
                self.entry_bound(a, b).unwrap_or(0),
                self.ctx.clone(),
            )
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &TruncatedSeries<C>)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Entrywise sum (the tables must share x variables, backend and `D`).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::precondition(format!(
                "table degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for ((a, b), v) in &other.entries {
            out.accumulate(*a, *b, v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &C) -> Self {
        let mut out = Self::new(self.x_vars.clone(), self.degree, self.ctx.clone());
        for (&(a, b), v) in &self.entries {
            let v = v.scale(factor);
            if !v.is_zero() {
                out.entries.insert((a, b), v);
            }
        }
        out
    }

    pub fn convert<T: Scalar>(&self, ctx: T::Context) -> Table<T, K> {
        let mut out = Table::<T, K>::new(self.x_vars.clone(), self.degree, ctx.clone());
        for (&k, v) in &self.entries {
            let v = v.convert::<T>(ctx.clone());
            if !v.is_zero() {
                out.entries.insert(k, v);
            }
        }
        out
    }

    /// Flattens into one series over `lead × x`, where `lead` names the two
    /// index variables with their weights.
    fn flatten(&self, lead: [(&str, u32); 2]) -> Result<TruncatedSeries<C>> {
        let space = self.x_vars.prepend(lead);
        let mut out = TruncatedSeries::zero(space.clone(), self.degree, self.ctx.clone());
        for (&(a, b), v) in &self.entries {
            for (m, c) in v.terms() {
                let e: MultiIndex = [a, b].into_iter().chain(m.iter()).collect();
                out.insert(e, c.clone());
            }
        }
        Ok(out)
    }

    fn unflatten(series: &TruncatedSeries<C>) -> Result<Self> {
        if series.varcount() < 2 {
            return Err(Error::precondition(
                "table series needs two index variables",
            ));
        }
        let x_vars = series.vars().drop_leading(2);
        let mut grouped: BTreeMap<(u32, u32), Vec<(MultiIndex, C)>> = BTreeMap::new();
        for (m, c) in series.terms() {
            let rest: MultiIndex = m.iter().skip(2).collect();
            grouped
                .entry((m.get(0), m.get(1)))
                .or_default()
                .push((rest, c.clone()));
        }
        let mut out = Self::new(x_vars.clone(), series.degree_bound(), series.ctx().clone());
        for ((a, b), terms) in grouped {
            let bound = out.entry_bound(a, b).unwrap_or(0);
            let entry =
                TruncatedSeries::from_terms(x_vars.clone(), bound, series.ctx().clone(), terms)?;
            out.insert(a, b, entry)?;
        }
        Ok(out)
    }
}

fn describe(v: &VarSpace) -> String {
    format!("({})", v.names().join(","))
}

impl<C: Scalar> ATable<C> {
    /// `f` as a series in `(y, t, x…)` truncated at `D`.
    pub fn to_series(&self) -> Result<TruncatedSeries<C>> {
        self.flatten([("y", 1), ("t", 1)])
    }

    /// Reads `a_ij(x)` off a series whose first two variables are `y`, `t`.
    pub fn from_series(f: &TruncatedSeries<C>) -> Result<Self> {
        Self::unflatten(f)
    }
}

impl<C: Scalar> DTable<C> {
    /// `g` as a series in `(s, t, x…)` with `s` weightless.
    pub fn to_series(&self) -> Result<TruncatedSeries<C>> {
        self.flatten([("s", 0), ("t", 1)])
    }

    /// Reads `d_pq(x)` off the `s^p t^q` strata of a series in `(s, t, x…)`.
    pub fn from_series(g: &TruncatedSeries<C>) -> Result<Self> {
        if g.vars().weights().first() != Some(&0) {
            return Err(Error::precondition(
                "the parameter variable of a D-table series must be weightless",
            ));
        }
        Self::unflatten(g)
    }

    /// True iff every entry with `p > q` vanishes; otherwise reports the
    /// first offending index in `(q, p)` order.
    pub fn triangularity_check(&self) -> Triangularity {
        let witness = self
            .entries
            .keys()
            .filter(|(p, q)| p > q)
            .min_by_key(|(p, q)| (*q, *p))
            .copied();
        Triangularity {
            holds: witness.is_none(),
            witness,
        }
    }

    /// Coefficients of `λ_qk(s) = Σ_p d_pqk s^p`, lowest degree first,
    /// with trailing zeros dropped (the zero polynomial is empty).
    pub fn lambda_poly(&self, q: u32, k: &MultiIndex) -> Vec<C> {
        let mut coeffs: Vec<C> = Vec::new();
        for (&(p, qq), v) in &self.entries {
            if qq != q {
                continue;
            }
            if let Some(c) = v.coefficient(k.as_slice()) {
                let p = p as usize;
                if coeffs.len() <= p {
                    coeffs.resize(p + 1, C::zero(&self.ctx));
                }
                coeffs[p] = c.clone();
            }
        }
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        coeffs
    }
}

/// One table entry in a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    #[serde(flatten)]
    pub index: BTreeMap<String, u32>,
    pub terms: Vec<TermRecord>,
}

/// File envelope of an [`ATable`] (keys `i`, `j`) or a [`DTable`] (keys `p`, `q`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub kind: String,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub degree_bound: u32,
    #[serde(flatten)]
    pub backend: BackendTag,
    pub entries: Vec<EntryRecord>,
}

impl TableFile {
    pub fn from_table<C: Scalar, K: TableKind>(table: &Table<C, K>) -> Self {
        let (ka, kb) = K::KEYS;
        TableFile {
            kind: format!("{ka}{kb}"),
            variables: table.x_vars.names().to_vec(),
            weights: series::weights_field(&table.x_vars),
            degree_bound: table.degree,
            backend: BackendTag::of(C::backend(&table.ctx)),
            entries: table
                .iter()
                .map(|((a, b), v)| EntryRecord {
                    index: [(ka.to_string(), a), (kb.to_string(), b)]
                        .into_iter()
                        .collect(),
                    terms: series::term_records(v),
                })
                .collect(),
        }
    }

    pub fn to_table<C: Scalar, K: TableKind>(&self, ctx: &C::Context) -> Result<Table<C, K>> {
        let (ka, kb) = K::KEYS;
        if self.kind != format!("{ka}{kb}") {
            return Err(Error::parse(format!(
                "expected a table keyed by {ka},{kb}, found {:?}",
                self.kind
            )));
        }
        self.backend.expect::<C>(ctx)?;
        let x_vars = series::var_space(&self.variables, self.weights.as_deref())?;
        let mut table = Table::<C, K>::new(x_vars.clone(), self.degree_bound, ctx.clone());
        for e in &self.entries {
            let key = |k: &str| {
                e.index
                    .get(k)
                    .copied()
                    .ok_or_else(|| Error::parse(format!("entry without key {k:?}")))
            };
            let (a, b) = (key(ka)?, key(kb)?);
            let Some(bound) = table.entry_bound(a, b) else {
                return Err(Error::parse(format!(
                    "entry ({a},{b}) exceeds degree bound {}",
                    self.degree_bound
                )));
            };
            let v = series::series_from_terms(x_vars.clone(), bound, ctx, &e.terms)?;
            table.insert(a, b, v)?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))
    }
}
