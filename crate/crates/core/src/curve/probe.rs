use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::{ExactComplex, Scalar};
use crate::series::{growth_profile, GrowthProfile, MultiIndex, TruncatedSeries, VerdictRule};

use super::{forward_map, ATable, Curve, DTable};

/// Growth of `f(φ_s(t,x), t, x) = Σ λ_qk(s) t^q x^k` at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub s: (f64, f64),
    pub profile: GrowthProfile,
    /// Smallest `n ≥ 1` with `|λ_qk(s)| ≤ n^{q+|k|}` for all `1 ≤ q+|k| ≤ D`.
    pub e_n_index: u64,
}

/// `Σ λ_qk(s) t^q x^k` as a series in `(t, x…)`.
pub fn restrict<C: Scalar>(d: &DTable<C>, s: &C) -> Result<TruncatedSeries<C>> {
    let space = d.x_vars().prepend([("t", 1)]);
    let top_p = d.iter().map(|((p, _), _)| p).max().unwrap_or(0);
    let mut powers = vec![C::one(d.ctx())];
    for k in 1..=top_p as usize {
        powers.push(powers[k - 1].mul(s));
    }
    let mut out = TruncatedSeries::zero(space.clone(), d.degree(), d.ctx().clone());
    for ((p, q), v) in d.iter() {
        if powers[p as usize].is_zero() {
            continue;
        }
        let mut shift = MultiIndex::zeros(space.len());
        shift.set(0, q);
        let lifted = v.embed(
            space.clone(),
            &(1..space.len()).collect::<Vec<_>>(),
            d.degree(),
        )?;
        out = out.add(&lifted.scale(&powers[p as usize]).shift(&shift)?)?;
    }
    Ok(out)
}

/// Smallest `n ≥ 1` with `|c_α| ≤ n^{|α|}` for every term of degree `≥ 1`.
pub fn exhaustion_index<C: Scalar>(f: &TruncatedSeries<C>, rho_max: f64) -> u64 {
    let fits = |n: u64| {
        f.terms()
            .all(|(m, c)| m.length() == 0 || c.abs_le_pow(n, m.length()))
    };
    // the float estimate is a near-miss at worst; exact checks settle it
    let mut n = if rho_max.is_finite() {
        (rho_max.floor() as u64).max(1)
    } else {
        1
    };
    while n > 1 && fits(n - 1) {
        n -= 1;
    }
    while !fits(n) {
        n += 1;
    }
    n
}

/// Probes a precomputed D-table at `s`.
pub fn probe_dtable<C: Scalar>(
    d: &DTable<C>,
    s: &ExactComplex,
    rule: &VerdictRule,
) -> Result<Probe> {
    let g = restrict(d, &C::from_exact(s, d.ctx()))?;
    let profile = growth_profile(&g, rule);
    let e_n_index = exhaustion_index(&g, profile.rho_max());
    Ok(Probe {
        s: s.to_f64(),
        profile,
        e_n_index,
    })
}

/// Growth profile of `f(φ_s(t,x), t, x)` up to degree `D`.
pub fn probe<C: Scalar>(
    a: &ATable<C>,
    curve: &Curve<C>,
    s: &ExactComplex,
    degree: u32,
    rule: &VerdictRule,
) -> Result<Probe> {
    let d = forward_map(a, curve, degree)?;
    probe_dtable(&d, s, rule)
}
