use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use rand::Rng;

use crate::curve::{ATable, Curve};
use crate::error::Result;
use crate::scalar::{ExactComplex, Scalar};
use crate::series::{TruncatedSeries, VarSpace};

/// Shape of random fuzzing instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceShape {
    pub degree: u32,
    /// Largest number of curve coefficients `J`.
    pub max_curve_len: usize,
    /// Largest x-degree of a curve coefficient.
    pub curve_x_degree: u32,
    /// Chance that an `(i, j)` slot of the A-table is populated.
    pub density: f64,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            degree: 10,
            max_curve_len: 4,
            curve_x_degree: 3,
            density: 0.3,
        }
    }
}

fn rational<R: Rng>(rng: &mut R) -> ExactComplex {
    let re = RBig::from_parts(
        IBig::from(rng.gen_range(-12i64..=12)),
        UBig::from(rng.gen_range(1u32..=9)),
    );
    if rng.gen_bool(0.25) {
        let im = RBig::from_parts(
            IBig::from(rng.gen_range(-6i64..=6)),
            UBig::from(rng.gen_range(1u32..=5)),
        );
        ExactComplex::new(re, im)
    } else {
        ExactComplex::real(re)
    }
}

fn poly<R: Rng>(
    rng: &mut R,
    x: &std::sync::Arc<VarSpace>,
    max_deg: u32,
    bound: u32,
) -> Result<TruncatedSeries<ExactComplex>> {
    let mut terms = Vec::new();
    for k in 0..=max_deg {
        if rng.gen_bool(0.5) {
            terms.push(([k], rational(rng)));
        }
    }
    TruncatedSeries::from_terms(x.clone(), bound, (), terms)
}

/// A random curve in one variable `x` with `b_1(0) = 1`.
pub fn random_curve<R: Rng>(rng: &mut R, shape: &InstanceShape) -> Result<Curve<ExactComplex>> {
    let x = VarSpace::new(["x"]);
    let len = rng.gen_range(1..=shape.max_curve_len.max(1));
    let mut b = Vec::with_capacity(len);
    for k in 0..len {
        let mut p = poly(rng, &x, shape.curve_x_degree, shape.degree)?;
        if k == 0 {
            let fix = ExactComplex::one().sub(&p.constant_term());
            p = p.add(&TruncatedSeries::constant(x.clone(), shape.degree, (), fix))?;
        }
        b.push(p);
    }
    Curve::new(b)
}

/// A random sparse A-table over the x variables of `curve`.
pub fn random_atable<R: Rng>(
    rng: &mut R,
    curve: &Curve<ExactComplex>,
    shape: &InstanceShape,
) -> Result<ATable<ExactComplex>> {
    let d = shape.degree;
    let x = curve.x_vars().clone();
    let mut a = ATable::new(x.clone(), d, ());
    for i in 0..=d {
        for j in 0..=(d - i) {
            if rng.gen_bool(shape.density) {
                let room = d - i - j;
                a.insert(i, j, poly(rng, &x, room.min(3), room)?)?;
            }
        }
    }
    Ok(a)
}
