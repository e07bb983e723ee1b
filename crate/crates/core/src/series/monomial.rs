use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Exponent vector of a monomial, one entry per variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn zeros(len: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, len))
    }

    pub fn unit(len: usize, var: usize) -> Self {
        let mut m = Self::zeros(len);
        m.0[var] = 1;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α|`, the plain sum of exponents.
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn set(&mut self, var: usize, exp: u32) {
        self.0[var] = exp;
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(exps: Vec<u32>) -> Self {
        MultiIndex(SmallVec::from_vec(exps))
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(exps: [u32; N]) -> Self {
        MultiIndex(SmallVec::from_slice(&exps))
    }
}

impl FromIterator<u32> for MultiIndex {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        MultiIndex(iter.into_iter().collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Ordered variable names with their truncation weights.
///
/// The truncation degree of a monomial is `Σ weight_i · α_i`. Every weight
/// defaults to 1 (plain total degree); a weight of 0 marks a formal
/// parameter that never counts toward truncation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpace {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl VarSpace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let weights = vec![1; names.len()];
        Arc::new(VarSpace { names, weights })
    }

    /// # Panics
    /// If `names` and `weights` differ in length.
    pub fn with_weights<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        weights: impl IntoIterator<Item = u32>,
    ) -> Arc<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let weights: Vec<u32> = weights.into_iter().collect();
        assert_eq!(names.len(), weights.len(), "one weight per variable");
        Arc::new(VarSpace { names, weights })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, m: &MultiIndex) -> u32 {
        m.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// Prepends variables to this space.
    pub fn prepend<S: Into<String>>(&self, names: impl IntoIterator<Item = (S, u32)>) -> Arc<Self> {
        let (mut n, mut w): (Vec<String>, Vec<u32>) =
            names.into_iter().map(|(s, w)| (s.into(), w)).unzip();
        n.extend(self.names.iter().cloned());
        w.extend(self.weights.iter().copied());
        Arc::new(VarSpace {
            names: n,
            weights: w,
        })
    }

    /// The space without its first `k` variables.
    pub fn drop_leading(&self, k: usize) -> Arc<Self> {
        Arc::new(VarSpace {
            names: self.names[k..].to_vec(),
            weights: self.weights[k..].to_vec(),
        })
    }

    pub(crate) fn describe(&self) -> String {
        let parts: Vec<String> = self
            .names
            .iter()
            .zip(&self.weights)
            .map(|(n, w)| {
                if *w == 1 {
                    n.clone()
                } else {
                    format!("{n}:{w}")
                }
            })
            .collect();
        format!("({})", parts.join(","))
    }
}
