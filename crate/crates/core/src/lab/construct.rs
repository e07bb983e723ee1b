use dashu_int::IBig;

use crate::curve::{inverse_solve, ATable, Curve, DTable};
use crate::error::{Error, Result};
use crate::scalar::{ExactComplex, Scalar};
use crate::series::TruncatedSeries;

/// Coefficients of `P(s) = Π (s − s_i)`, lowest degree first.
pub fn target_polynomial(targets: &[ExactComplex]) -> Vec<ExactComplex> {
    let mut poly = vec![ExactComplex::one()];
    for root in targets {
        let mut next = vec![ExactComplex::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(root));
        }
        poly = next;
    }
    poly
}

fn poly_mul(a: &[ExactComplex], b: &[ExactComplex]) -> Vec<ExactComplex> {
    let mut out = vec![ExactComplex::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn check_targets(targets: &[ExactComplex], degree: u32) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::precondition("the target set is empty"));
    }
    for (k, s) in targets.iter().enumerate() {
        if targets[..k].contains(s) {
            return Err(Error::precondition(format!("duplicate target {s}")));
        }
    }
    let m = targets.len() as u32;
    if degree < 2 * m {
        return Err(Error::precondition(format!(
            "degree {degree} is below 2m = {}",
            2 * m
        )));
    }
    Ok(())
}

/// D-table of `ψ_s(t) = Σ_j j^j·P(s)^j·t^{jm}` for `jm ≤ D`, independent of x.
pub fn target_dtable(
    targets: &[ExactComplex],
    x_vars: std::sync::Arc<crate::series::VarSpace>,
    degree: u32,
) -> Result<DTable<ExactComplex>> {
    check_targets(targets, degree)?;
    let m = targets.len() as u32;
    let p = target_polynomial(targets);
    let mut d = DTable::new(x_vars.clone(), degree, ());
    let mut power = vec![ExactComplex::one()];
    for j in 1..=degree / m {
        power = poly_mul(&power, &p);
        let jj = ExactComplex::from_int(IBig::from(j).pow(j as usize));
        for (k, c) in power.iter().enumerate() {
            if !c.is_zero() {
                let value = c.mul(&jj);
                d.insert(
                    k as u32,
                    j * m,
                    TruncatedSeries::constant(x_vars.clone(), degree, (), value),
                )?;
            }
        }
    }
    Ok(d)
}

/// A divergent `f` with `f(φ_s(t,x), t, x) = ψ_s(t)` up to degree `D`, so that
/// the restriction vanishes identically exactly at the targets.
pub fn construct_for_finite_set(
    targets: &[ExactComplex],
    curve: &Curve<ExactComplex>,
    degree: u32,
) -> Result<ATable<ExactComplex>> {
    let d = target_dtable(targets, curve.x_vars().clone(), degree)?;
    inverse_solve(&d, curve, degree)
}
