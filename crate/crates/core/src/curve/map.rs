use std::collections::BTreeMap;

use dashu_int::IBig;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{MultiIndex, TruncatedSeries};

use super::{ATable, Curve, DTable};

fn check_inputs<C: Scalar>(
    x_vars: &crate::series::VarSpace,
    ctx: &C::Context,
    curve: &Curve<C>,
) -> Result<()> {
    curve.validate()?;
    if x_vars != curve.x_vars().as_ref() {
        return Err(Error::VarSpaceMismatch {
            left: format!("({})", x_vars.names().join(",")),
            right: format!("({})", curve.x_vars().names().join(",")),
        });
    }
    if ctx != curve.ctx() {
        return Err(Error::BackendMismatch {
            left: C::backend(ctx).to_string(),
            right: C::backend(curve.ctx()).to_string(),
        });
    }
    Ok(())
}

/// `d_pq(x)` with `Σ d_pq s^p t^q = Σ a_ij(x)·φ_s(t,x)^i·t^j` up to `(t,x)`
/// degree `D`, computed by substituting `φ` with `s` kept formal.
pub fn forward_map<C: Scalar>(a: &ATable<C>, curve: &Curve<C>, degree: u32) -> Result<DTable<C>> {
    check_inputs(a.x_vars(), a.ctx(), curve)?;
    let f = a.to_series()?.with_degree_bound(degree);
    let u = curve.phi_formal(degree)?;
    DTable::from_series(&f.substitute_y(&u)?)
}

/// Same result as [`forward_map`], summed term by term from the multinomial
/// expansion of `φ_s^i`:
/// `d_pq = Σ a_ij · i!/(p! m_2! m_3! ⋯) · b_1^p b_2^{m_2} ⋯`
/// over `p + Σ m_k = i` and `j + p + Σ k·m_k = q`.
pub fn forward_map_multinomial<C: Scalar>(
    a: &ATable<C>,
    curve: &Curve<C>,
    degree: u32,
) -> Result<DTable<C>> {
    check_inputs(a.x_vars(), a.ctx(), curve)?;
    let ctx = curve.ctx().clone();
    let x = curve.x_vars().clone();
    let mut d = DTable::new(x.clone(), degree, ctx.clone());

    let mut rows: BTreeMap<u32, Vec<(u32, &TruncatedSeries<C>)>> = BTreeMap::new();
    for ((i, j), v) in a.iter() {
        if i + j <= degree {
            rows.entry(i).or_default().push((j, v));
        }
    }
    let mut factorial = vec![IBig::ONE];
    for k in 1..=degree as usize {
        let next = &factorial[k - 1] * IBig::from(k);
        factorial.push(next);
    }
    // b[k] for k = 1..=J, zero entries dropped from the enumeration
    let b: Vec<TruncatedSeries<C>> = curve
        .coefficients()
        .iter()
        .map(|s| s.clone().with_degree_bound(degree))
        .collect();
    let nonzero: Vec<usize> = (2..=b.len().min(degree as usize))
        .filter(|&k| !b[k - 1].is_zero())
        .collect();
    let mut powers: BTreeMap<(usize, u32), TruncatedSeries<C>> = BTreeMap::new();
    let mut power = |k: usize, m: u32| -> TruncatedSeries<C> {
        powers
            .entry((k, m))
            .or_insert_with(|| b[k - 1].pow(m))
            .clone()
    };

    for (i, row) in rows {
        let jmin = row.iter().map(|(j, _)| *j).min().unwrap_or(0);
        let slack = degree - i - jmin;
        let mut tuples = Vec::new();
        enumerate_tuples(&nonzero, 0, slack, i, &mut Vec::new(), &mut tuples);
        for ms in tuples {
            let used: u32 = ms.iter().map(|(_, m)| m).sum();
            let extra: u32 = ms.iter().map(|(k, m)| (*k as u32 - 1) * m).sum();
            let p = i - used;
            let w = i + extra;
            let bound = degree - w - jmin;
            let mut denom = factorial[p as usize].clone();
            for (_, m) in &ms {
                denom *= &factorial[*m as usize];
            }
            let coef = C::from_int(&factorial[i as usize] / denom, &ctx);
            let mut prod = power(1, p).truncate(bound);
            for &(k, m) in &ms {
                prod = prod.mul_bounded(&power(k, m), bound);
            }
            let prod = prod.scale(&coef);
            for &(j, aij) in &row {
                let q = j + w;
                if q > degree {
                    continue;
                }
                d.accumulate(p, q, &aij.mul_bounded(&prod, degree - q))?;
            }
        }
    }
    Ok(d)
}

/// All `[(k, m_k)]` with `m_k > 0`, `Σ (k−1)·m_k ≤ slack` and `Σ m_k ≤ count`.
fn enumerate_tuples(
    ks: &[usize],
    from: usize,
    slack: u32,
    count: u32,
    current: &mut Vec<(usize, u32)>,
    out: &mut Vec<Vec<(usize, u32)>>,
) {
    out.push(current.clone());
    for idx in from..ks.len() {
        let k = ks[idx];
        let step = k as u32 - 1;
        if step > slack {
            break;
        }
        let mut m = 1;
        while m * step <= slack && m <= count {
            current.push((k, m));
            enumerate_tuples(ks, idx + 1, slack - m * step, count - m, current, out);
            current.pop();
            m += 1;
        }
    }
}

/// The unique `a_ij(x)` with `forward_map(a) = d` up to degree `D`.
///
/// Strata `q = 0…D` are solved in ascending order and, within a stratum, for
/// `p = q…0`: `a_{p,q−p} = r_pq · b_1^{−p}` where `r` is `d` minus the image
/// of all coefficients solved so far. The image of one stratum
/// `Σ_{i+j=q} a_ij φ^i t^j = t^q Σ_i a_{i,q−i} (φ/t)^i` is folded by Horner.
pub fn inverse_solve<C: Scalar>(d: &DTable<C>, curve: &Curve<C>, degree: u32) -> Result<ATable<C>> {
    check_inputs(d.x_vars(), d.ctx(), curve)?;
    if let Some((p, q)) = d.triangularity_check().witness {
        return Err(Error::Triangularity { p, q });
    }
    let ctx = curve.ctx().clone();
    let x = curve.x_vars().clone();
    let space = curve.stx_space();
    let b1_inv = curve.coefficients()[0]
        .clone()
        .with_degree_bound(degree)
        .inverse()?;
    let mut inv_powers = vec![TruncatedSeries::one(x.clone(), degree, ctx.clone())];
    let over_t = curve.phi_formal_over_t(degree)?;
    let mut residual = d.to_series()?.with_degree_bound(degree);
    let mut a = ATable::new(x.clone(), degree, ctx.clone());

    for q in 0..=degree {
        let bound = degree - q;
        let mut strata: BTreeMap<u32, Vec<(MultiIndex, C)>> = BTreeMap::new();
        for (m, c) in residual.terms() {
            if m.get(1) == q {
                strata
                    .entry(m.get(0))
                    .or_default()
                    .push((m.iter().skip(2).collect(), c.clone()));
            }
        }
        if strata.is_empty() {
            continue;
        }
        let mut solved = Vec::new();
        for p in (0..=q).rev() {
            let Some(terms) = strata.remove(&p) else {
                continue;
            };
            while inv_powers.len() <= p as usize {
                let next = inv_powers
                    .last()
                    .expect("nonempty")
                    .mul_bounded(&b1_inv, degree);
                inv_powers.push(next);
            }
            let r = TruncatedSeries::from_terms(x.clone(), bound, ctx.clone(), terms)?;
            let value = r.mul_bounded(&inv_powers[p as usize], bound);
            a.insert(p, q - p, value.clone())?;
            solved.push((p, value));
        }
        if q == degree || solved.is_empty() {
            continue;
        }
        // Horner over i = top…0 of a_{i,q−i}, the entries of this stratum
        let top = solved.iter().map(|(p, _)| *p).max().expect("nonempty");
        let mut by_i: BTreeMap<u32, TruncatedSeries<C>> = solved.into_iter().collect();
        let mut h = TruncatedSeries::zero(space.clone(), bound, ctx.clone());
        for i in (0..=top).rev() {
            if !h.is_zero() {
                h = h.mul_bounded(&over_t, bound);
            }
            if let Some(v) = by_i.remove(&i) {
                h = h.add(&curve.lift(&v, &space, 2, &[0, 0], bound)?)?;
            }
        }
        let mut shift = MultiIndex::zeros(space.len());
        shift.set(1, q);
        let image = h.with_degree_bound(degree).shift(&shift)?;
        residual = residual.sub(&image)?;
    }
    Ok(a)
}
