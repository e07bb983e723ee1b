use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use crate::curve::{ATable, Curve};
use crate::error::{Error, Result};
use crate::scalar::ExactComplex;
use crate::series::{MultiIndex, TruncatedSeries};

/// How the curves `φ_j` of the example generators are built from `s_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `φ_j = φ_{s_j}`, the member of the family at `s_j`. Then
    /// `φ_s − φ_j = (s − s_j)·b_1·t` and the factor vanishes exactly at `s_j`.
    #[default]
    Member,
    /// `φ_j = s_j·t + φ` with `φ = Σ b_j t^j` taken literally. For `b_1 = 1`
    /// the factor vanishes at `s = s_j + 1` instead.
    Shifted,
}

/// `s_j` for `j = 1, 2, …`, repeating `seq` cyclically.
fn nth(seq: &[ExactComplex], j: u32) -> Result<&ExactComplex> {
    if seq.is_empty() {
        return Err(Error::precondition("the parameter sequence is empty"));
    }
    Ok(&seq[(j as usize - 1) % seq.len()])
}

/// `y − φ_j(t,x)` in `(y, t, x…)`.
fn y_minus_phi(
    curve: &Curve<ExactComplex>,
    sj: &ExactComplex,
    degree: u32,
    convention: Convention,
) -> Result<TruncatedSeries<ExactComplex>> {
    let phi = match convention {
        Convention::Member => curve.phi_at(sj, degree)?,
        Convention::Shifted => {
            let base = curve.phi_at(&ExactComplex::one(), degree)?;
            let mut shift = MultiIndex::zeros(base.varcount());
            shift.set(0, 1);
            let linear = TruncatedSeries::constant(base.vars().clone(), degree, (), sj.clone())
                .shift(&shift)?;
            base.add(&linear)?
        }
    };
    let space = curve.ytx_space();
    let positions: Vec<usize> = (1..space.len()).collect();
    let y = TruncatedSeries::variable(space.clone(), degree, (), 0)?;
    y.sub(&phi.embed(space, &positions, degree)?)
}

fn check_count(n: u32, degree: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::precondition("N must be at least 1"));
    }
    if degree == 0 {
        return Err(Error::precondition("the degree bound must be positive"));
    }
    Ok(())
}

/// `f = Σ_{n=1}^N n^n Π_{j=1}^n (y − φ_j(t,x))`, truncated at `D`.
pub fn gen_example_f(
    seq: &[ExactComplex],
    n: u32,
    curve: &Curve<ExactComplex>,
    degree: u32,
    convention: Convention,
) -> Result<ATable<ExactComplex>> {
    check_count(n, degree)?;
    let space = curve.ytx_space();
    let mut product = TruncatedSeries::one(space.clone(), degree, ());
    let mut f = TruncatedSeries::zero(space, degree, ());
    // every factor has order 1, so products beyond D factors vanish
    for k in 1..=n.min(degree) {
        product = product.mul(&y_minus_phi(curve, nth(seq, k)?, degree, convention)?)?;
        let coef = ExactComplex::from_int(IBig::from(k).pow(k as usize));
        f = f.add(&product.scale(&coef))?;
    }
    ATable::from_series(&f)
}

/// `g = Σ_{i=1}^N [i!·t^i + (i!)²·(y − φ_i(t,x))^i]`, truncated at `D`.
pub fn gen_example_g(
    seq: &[ExactComplex],
    n: u32,
    curve: &Curve<ExactComplex>,
    degree: u32,
    convention: Convention,
) -> Result<ATable<ExactComplex>> {
    check_count(n, degree)?;
    let space = curve.ytx_space();
    let mut g = TruncatedSeries::zero(space.clone(), degree, ());
    let mut fact = IBig::ONE;
    for i in 1..=n.min(degree) {
        fact *= IBig::from(i);
        let mut t_i = MultiIndex::zeros(space.len());
        t_i.set(1, i);
        let t_term = TruncatedSeries::from_terms(
            space.clone(),
            degree,
            (),
            [(t_i, ExactComplex::from_int(fact.clone()))],
        )?;
        let square = ExactComplex::from_int(&fact * &fact);
        let power = y_minus_phi(curve, nth(seq, i)?, degree, convention)?
            .pow(i)
            .scale(&square);
        g = g.add(&t_term)?.add(&power)?;
    }
    ATable::from_series(&g)
}
