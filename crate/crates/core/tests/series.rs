mod common;

use std::sync::Arc;

use common::{c, rng, small_rational};
use convlab::{
    growth_profile, ExactComplex, MultiIndex, Scalar, TruncatedSeries, VarSpace, VerdictRule,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Series = TruncatedSeries<ExactComplex>;

fn space(n: usize) -> Arc<VarSpace> {
    VarSpace::new(["y", "t", "x"].into_iter().take(n))
}

fn random_series(r: &mut ChaCha8Rng, vars: &Arc<VarSpace>, d: u32, density: f64) -> Series {
    let n = vars.len();
    let mut terms = Vec::new();
    for idx in all_indices(n, d) {
        if idx.iter().sum::<u32>() <= d && r.gen_bool(density) {
            terms.push((MultiIndex::from(idx.as_slice()), small_rational(r)));
        }
    }
    TruncatedSeries::from_terms(vars.clone(), d, (), terms).unwrap()
}

/// Every exponent vector in `[0, d]^n`.
fn all_indices(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=d).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

// Dense oracle: coefficients in a flat array over [0, d]^n, mixed radix.
struct Dense {
    n: usize,
    d: u32,
    cells: Vec<ExactComplex>,
}

impl Dense {
    fn zero(n: usize, d: u32) -> Self {
        let len = (d as usize + 1).pow(n as u32);
        Dense {
            n,
            d,
            cells: vec![ExactComplex::zero(); len],
        }
    }

    fn pos(&self, idx: &[u32]) -> usize {
        idx.iter()
            .fold(0, |acc, &e| acc * (self.d as usize + 1) + e as usize)
    }

    fn from_series(f: &Series, d: u32) -> Self {
        let mut out = Dense::zero(f.varcount(), d);
        for (m, v) in f.terms() {
            let p = out.pos(m.as_slice());
            out.cells[p] = v.clone();
        }
        out
    }

    fn add(&self, other: &Dense) -> Dense {
        let mut out = Dense::zero(self.n, self.d);
        for i in 0..self.cells.len() {
            out.cells[i] = self.cells[i].add(&other.cells[i]);
        }
        out
    }

    fn mul(&self, other: &Dense) -> Dense {
        let mut out = Dense::zero(self.n, self.d);
        let idx = all_indices(self.n, self.d);
        for a in &idx {
            for b in &idx {
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if sum.iter().sum::<u32>() > self.d {
                    continue;
                }
                let term = self.cells[self.pos(a)].mul(&other.cells[other.pos(b)]);
                let p = out.pos(&sum);
                out.cells[p] = out.cells[p].add(&term);
            }
        }
        out
    }

    fn truncated(&self) -> Dense {
        let mut out = Dense::zero(self.n, self.d);
        for a in all_indices(self.n, self.d) {
            if a.iter().sum::<u32>() <= self.d {
                let p = self.pos(&a);
                out.cells[p] = self.cells[p].clone();
            }
        }
        out
    }

    fn matches(&self, f: &Series) -> bool {
        all_indices(self.n, self.d).iter().all(|a| {
            let want = &self.cells[self.pos(a)];
            match f.coefficient(a) {
                Some(v) => v == want,
                None => want.is_zero(),
            }
        })
    }
}

fn tx(terms: &[([u32; 2], &str)], d: u32) -> Series {
    TruncatedSeries::from_terms(
        VarSpace::new(["t", "x"]),
        d,
        (),
        terms.iter().map(|(e, v)| (*e, c(v))),
    )
    .unwrap()
}

#[test]
fn add_matches_dense_oracle() {
    let mut r = rng(11);
    for case in 0..40 {
        let n = 1 + case % 3;
        let vars = space(n);
        let d = r.gen_range(0..=8);
        let f = random_series(&mut r, &vars, d, 0.3);
        let g = random_series(&mut r, &vars, d, 0.3);
        let sum = f.add(&g).unwrap();
        let oracle = Dense::from_series(&f, d).add(&Dense::from_series(&g, d));
        assert!(oracle.matches(&sum), "case {case}");
        assert!(sum.terms().all(|(_, v)| !v.is_zero()));
    }
}

#[test]
fn mul_matches_dense_convolution() {
    let mut r = rng(12);
    for case in 0..30 {
        let n = 1 + case % 3;
        let vars = space(n);
        let d = if n == 3 { 6 } else { 8 };
        let f = random_series(&mut r, &vars, d, 0.25);
        let g = random_series(&mut r, &vars, d, 0.25);
        let prod = f.mul(&g).unwrap();
        let oracle = Dense::from_series(&f, d)
            .mul(&Dense::from_series(&g, d))
            .truncated();
        assert!(oracle.matches(&prod), "case {case}");
        assert!(prod.terms().all(|(m, _)| m.length() <= d));
    }
}

#[test]
fn squared_binomial_in_two_variables() {
    // (st + t²)² = s²t² + 2st³ + t⁴
    let f = tx(&[([1, 1], "1"), ([2, 0], "1")], 5);
    let want = tx(&[([2, 2], "1"), ([3, 1], "2"), ([4, 0], "1")], 5);
    assert_eq!(f.pow(2), want);
    let dense = Dense::from_series(&f, 5);
    assert!(dense.mul(&dense).truncated().matches(&f.pow(2)));
}

#[test]
fn substitution_matches_expanded_oracle() {
    // f = y²t with u = st + t², variables (y, s, t) against (s, t)
    let f = TruncatedSeries::from_terms(
        VarSpace::new(["y", "s", "t"]),
        6,
        (),
        [([2u32, 0, 1], c("1"))],
    )
    .unwrap();
    let u = TruncatedSeries::from_terms(
        VarSpace::new(["s", "t"]),
        6,
        (),
        [([1u32, 1], c("1")), ([0, 2], c("1"))],
    )
    .unwrap();
    let got = f.substitute_y(&u).unwrap();
    let want = TruncatedSeries::from_terms(
        VarSpace::new(["s", "t"]),
        6,
        (),
        [([2u32, 3], c("1")), ([1, 4], c("2")), ([0, 5], c("1"))],
    )
    .unwrap();
    assert_eq!(got, want);
}

fn random_yt_x(r: &mut ChaCha8Rng, d: u32) -> Series {
    random_series(r, &VarSpace::new(["y", "t", "x"]), d, 0.15)
}

fn random_u(r: &mut ChaCha8Rng, d: u32) -> Series {
    let u = random_series(r, &VarSpace::new(["t", "x"]), d, 0.4);
    let constant = u.constant_term();
    u.sub(&Series::constant(u.vars().clone(), d, (), constant))
        .unwrap()
}

/// Σ a_{ijk} u^i t^j x^k summed with the dense oracle.
fn substitute_by_expansion(f: &Series, u: &Series, d: u32) -> Dense {
    let mut out = Dense::zero(2, d);
    let du = Dense::from_series(u, d);
    for (m, v) in f.terms() {
        let mut term = Dense::zero(2, d);
        let p = term.pos(&[m.get(1), m.get(2)]);
        term.cells[p] = v.clone();
        for _ in 0..m.get(0) {
            term = term.mul(&du).truncated();
        }
        out = out.add(&term.truncated());
    }
    out
}

#[test]
fn substitution_matches_term_by_term_expansion() {
    let mut r = rng(13);
    for case in 0..20 {
        let d = 6;
        let f = random_yt_x(&mut r, d);
        let u = random_u(&mut r, d);
        let got = f.substitute_y(&u).unwrap();
        assert!(
            substitute_by_expansion(&f, &u, d).matches(&got),
            "case {case}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ring_laws_hold_exactly(seed in any::<u64>(), n in 1usize..=3, d in 0u32..=8) {
        let mut r = rng(seed);
        let vars = space(n);
        let f = random_series(&mut r, &vars, d, 0.2);
        let g = random_series(&mut r, &vars, d, 0.2);
        let h = random_series(&mut r, &vars, d, 0.2);
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(
            f.add(&g).unwrap().add(&h).unwrap(),
            f.add(&g.add(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.mul(&g).unwrap().mul(&h).unwrap(),
            f.mul(&g.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(f.add(&g).unwrap().sub(&g).unwrap(), f);
    }

    #[test]
    fn truncation_commutes_with_mul(seed in any::<u64>(), n in 1usize..=3, d in 0u32..=8, cut in 0u32..=8) {
        let cut = cut.min(d);
        let mut r = rng(seed);
        let vars = space(n);
        let f = random_series(&mut r, &vars, d, 0.3);
        let g = random_series(&mut r, &vars, d, 0.3);
        prop_assert_eq!(
            f.mul(&g).unwrap().truncate(cut),
            f.truncate(cut).mul(&g.truncate(cut)).unwrap()
        );
    }

    #[test]
    fn substitution_is_multiplicative(seed in any::<u64>(), d in 2u32..=7) {
        let mut r = rng(seed);
        let f = random_yt_x(&mut r, d);
        let h = random_yt_x(&mut r, d);
        let u = random_u(&mut r, d);
        prop_assert_eq!(
            f.mul(&h).unwrap().substitute_y(&u).unwrap(),
            f.substitute_y(&u).unwrap().mul(&h.substitute_y(&u).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.add(&h).unwrap().substitute_y(&u).unwrap(),
            f.substitute_y(&u).unwrap().add(&h.substitute_y(&u).unwrap()).unwrap()
        );
    }

    #[test]
    fn growth_stays_below_a_known_bound(seed in any::<u64>(), base in 1u32..=6, d in 4u32..=16) {
        // each coefficient is base^|α| divided by something in 1..=9
        let mut r = rng(seed);
        let vars = space(2);
        let mut terms = Vec::new();
        for idx in all_indices(2, d) {
            let len: u32 = idx.iter().sum();
            if len <= d && r.gen_bool(0.5) {
                let top = dashu_int::IBig::from(base).pow(len as usize);
                let den = dashu_int::UBig::from(r.gen_range(1u32..=9));
                let v = ExactComplex::real(dashu_ratio::RBig::from_parts(top, den));
                terms.push((MultiIndex::from(idx.as_slice()), v));
            }
        }
        let f = TruncatedSeries::from_terms(vars, d, (), terms).unwrap();
        let p = growth_profile(&f, &VerdictRule::default());
        prop_assert!(p.rho.iter().all(|(_, rho)| *rho <= base as f64 * (1.0 + 1e-12)));
    }
}
