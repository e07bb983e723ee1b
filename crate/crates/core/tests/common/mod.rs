#![allow(dead_code)]

use std::sync::Arc;

use convlab::curve::{ATable, Curve, DTable};
use convlab::{ExactComplex, MultiIndex, Scalar, TruncatedSeries, VarSpace};
use dashu_int::IBig;
use dashu_ratio::RBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Series = TruncatedSeries<ExactComplex>;

pub fn c(text: &str) -> ExactComplex {
    convlab::scalar::parse_exact_complex(text).unwrap()
}

pub fn x_space() -> Arc<VarSpace> {
    VarSpace::new(["x"])
}

/// Polynomial in x from its coefficient list.
pub fn xpoly(coeffs: &[&str], bound: u32) -> Series {
    TruncatedSeries::from_terms(
        x_space(),
        bound,
        (),
        coeffs.iter().enumerate().map(|(k, v)| ([k as u32], c(v))),
    )
    .unwrap()
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> ExactComplex {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1u64..=7);
    let re = RBig::from_parts(IBig::from(num), den.into());
    if rng.gen_bool(0.2) {
        let im = RBig::from_parts(
            IBig::from(rng.gen_range(-5i64..=5)),
            rng.gen_range(1u64..=4).into(),
        );
        ExactComplex::new(re, im)
    } else {
        ExactComplex::real(re)
    }
}

fn random_xpoly(rng: &mut ChaCha8Rng, max_deg: u32, bound: u32, density: f64) -> Series {
    let mut terms = Vec::new();
    for k in 0..=max_deg {
        if rng.gen_bool(density) {
            terms.push(([k], small_rational(rng)));
        }
    }
    TruncatedSeries::from_terms(x_space(), bound, (), terms).unwrap()
}

/// Curve with `J ≤ 4` random rational coefficients and `b_1(0) = 1`.
pub fn random_curve(rng: &mut ChaCha8Rng, degree: u32) -> Curve<ExactComplex> {
    let j = rng.gen_range(1..=4usize);
    let mut b = Vec::new();
    for k in 0..j {
        let mut p = random_xpoly(rng, 3, degree, 0.5);
        if k == 0 {
            let c0 = p.constant_term();
            p = p
                .add(&TruncatedSeries::constant(
                    x_space(),
                    degree,
                    (),
                    ExactComplex::one().sub(&c0),
                ))
                .unwrap();
        }
        b.push(p);
    }
    Curve::new(b).unwrap()
}

/// Sparse random A-table in one x variable.
pub fn random_atable(rng: &mut ChaCha8Rng, degree: u32) -> ATable<ExactComplex> {
    let mut a = ATable::new(x_space(), degree, ());
    for i in 0..=degree {
        for j in 0..=(degree - i) {
            if rng.gen_bool(0.3) {
                let room = degree - i - j;
                a.insert(i, j, random_xpoly(rng, room.min(3), room, 0.6))
                    .unwrap();
            }
        }
    }
    a
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent inverse: `f = Σ d_pq(x)·b_1^{−p}·(y − ψ)^p·t^{q−p}` with
/// `ψ = Σ_{j≥2} b_j t^j`, since `φ_s − ψ = s·b_1·t`.
pub fn closed_form_inverse(
    d: &DTable<ExactComplex>,
    curve: &Curve<ExactComplex>,
    degree: u32,
) -> ATable<ExactComplex> {
    let ytx = VarSpace::new(["y", "t", "x"]);
    let embed = |s: &Series| s.embed(ytx.clone(), &[2], degree).unwrap();
    let var = |k: usize| TruncatedSeries::variable(ytx.clone(), degree, (), k).unwrap();
    let t = var(1);
    let mut psi = TruncatedSeries::zero(ytx.clone(), degree, ());
    for (k, bk) in curve.coefficients().iter().enumerate().skip(1) {
        psi = psi
            .add(&embed(bk).mul(&t.pow(k as u32 + 1)).unwrap())
            .unwrap();
    }
    let y_minus_psi = var(0).sub(&psi).unwrap();
    let b1_inv = embed(&curve.coefficients()[0]).inverse().unwrap();
    let mut f = TruncatedSeries::zero(ytx.clone(), degree, ());
    for ((p, q), dpq) in d.iter() {
        let term = embed(dpq)
            .mul(&b1_inv.pow(p))
            .unwrap()
            .mul(&y_minus_psi.pow(p))
            .unwrap()
            .mul(&t.pow(q - p))
            .unwrap();
        f = f.add(&term).unwrap();
    }
    ATable::from_series(&f).unwrap()
}

pub fn x_index(k: u32) -> MultiIndex {
    MultiIndex::from([k])
}
