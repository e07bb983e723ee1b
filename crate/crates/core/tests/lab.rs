mod common;

use std::time::Instant;

use common::*;
use convlab::curve::{forward_map, probe, ATable, Curve};
use convlab::lab::{
    construct_for_finite_set, gen_example_f, gen_example_g, report, scan, target_dtable,
    Convention, Grid,
};
use convlab::{growth_profile, Error, ExactComplex, Verdict, VerdictRule};

fn seq(values: &[&str]) -> Vec<ExactComplex> {
    values.iter().map(|v| c(v)).collect()
}

fn quad_curve(degree: u32) -> Curve<ExactComplex> {
    Curve::new(vec![xpoly(&["1"], degree), xpoly(&["1"], degree)]).unwrap()
}

fn verdict(a: &ATable<ExactComplex>, cv: &Curve<ExactComplex>, s: &str, degree: u32) -> Verdict {
    probe(a, cv, &c(s), degree, &VerdictRule::default())
        .unwrap()
        .profile
        .verdict
}

#[test]
fn example_f_single_factor() {
    let line = Curve::linear(x_space(), 6, ());
    let f = gen_example_f(&seq(&["0"]), 1, &line, 6, Convention::Shifted).unwrap();
    let mut want = ATable::new(x_space(), 6, ());
    want.insert(1, 0, xpoly(&["1"], 6)).unwrap();
    want.insert(0, 1, xpoly(&["-1"], 6)).unwrap();
    assert_eq!(f, want);

    // the member at s = 0 is the zero curve
    let f = gen_example_f(&seq(&["0"]), 1, &line, 6, Convention::Member).unwrap();
    let mut want = ATable::new(x_space(), 6, ());
    want.insert(1, 0, xpoly(&["1"], 6)).unwrap();
    assert_eq!(f, want);
}

#[test]
fn example_f_converges_on_the_sequence_only() {
    let degree = 30;
    let cv = quad_curve(degree);
    let f = gen_example_f(&seq(&["0", "1", "2"]), 30, &cv, degree, Convention::Member).unwrap();
    for s in ["0", "1", "2"] {
        assert_eq!(
            verdict(&f, &cv, s, degree),
            Verdict::ConvergentLike,
            "s = {s}"
        );
    }
    let p = probe(&f, &cv, &c("5"), degree, &VerdictRule::default()).unwrap();
    assert_eq!(p.profile.verdict, Verdict::DivergentLike);
    // along φ_5 the t^m coefficient is m^m Π_{j≤m} (5 − s_j)
    let geo = |m: u32| -> f64 {
        let s = [0.0f64, 1.0, 2.0];
        (1..=m)
            .map(|j| (5.0 - s[(j as usize - 1) % 3]).ln())
            .sum::<f64>()
            / m as f64
    };
    for m in [10u32, 20, 30] {
        let want = m as f64 * geo(m).exp();
        assert!((p.profile.rho_at(m) - want).abs() < 1e-9 * want, "m = {m}");
    }
}

#[test]
fn shifted_convention_moves_the_convergence_points() {
    let degree = 16;
    let line = Curve::linear(x_space(), degree, ());
    let f = gen_example_f(&seq(&["0", "1"]), 16, &line, degree, Convention::Shifted).unwrap();
    assert_eq!(verdict(&f, &line, "1", degree), Verdict::ConvergentLike);
    assert_eq!(verdict(&f, &line, "2", degree), Verdict::ConvergentLike);
    assert_eq!(verdict(&f, &line, "0", degree), Verdict::DivergentLike);
}

#[test]
fn constant_sequence_converges_at_its_value() {
    // φ_j ≡ φ_1: the restriction vanishes identically at s_1 only
    let degree = 20;
    let cv = quad_curve(degree);
    let f = gen_example_f(&seq(&["1"]), 20, &cv, degree, Convention::Member).unwrap();
    assert_eq!(verdict(&f, &cv, "1", degree), Verdict::ConvergentLike);
    assert_eq!(verdict(&f, &cv, "3", degree), Verdict::DivergentLike);
}

#[test]
fn example_g_diverges_everywhere() {
    let degree = 24;
    let cv = quad_curve(degree);
    let g = gen_example_g(&seq(&["0", "1", "2"]), 24, &cv, degree, Convention::Member).unwrap();
    for s in ["0", "1", "2", "5", "1/2+i"] {
        assert_eq!(
            verdict(&g, &cv, s, degree),
            Verdict::DivergentLike,
            "s = {s}"
        );
    }
    assert_eq!(
        growth_profile(&g.to_series().unwrap(), &VerdictRule::default()).verdict,
        Verdict::DivergentLike
    );

    let line = Curve::linear(x_space(), 6, ());
    let g1 = gen_example_g(&seq(&["3"]), 1, &line, 6, Convention::Shifted).unwrap();
    // t + (y − 3t − t)
    let mut want = ATable::new(x_space(), 6, ());
    want.insert(1, 0, xpoly(&["1"], 6)).unwrap();
    want.insert(0, 1, xpoly(&["-3"], 6)).unwrap();
    assert_eq!(g1, want);
}

#[test]
fn construction_targets() {
    let degree = 40;
    let line = Curve::linear(x_space(), degree, ());
    let a = construct_for_finite_set(&seq(&["0"]), &line, degree).unwrap();
    let p = probe(&a, &line, &c("0"), degree, &VerdictRule::default()).unwrap();
    assert!(p.profile.rho.iter().all(|(_, r)| *r == 0.0));
    assert_eq!(p.profile.verdict, Verdict::ConvergentLike);

    let a = construct_for_finite_set(&seq(&["0", "1"]), &line, degree).unwrap();
    let p = probe(&a, &line, &c("1/2"), degree, &VerdictRule::default()).unwrap();
    assert_eq!(p.profile.verdict, Verdict::DivergentLike);
    // t^{2j} coefficient j^j (−1/4)^j
    let want = (20f64 / 4.0).sqrt();
    assert!((p.profile.rho_at(40) - want).abs() < 1e-12 * want);
}

#[test]
fn construction_round_trips_through_the_forward_map() {
    let degree = 18;
    let cv = Curve::new(vec![
        xpoly(&["1", "2"], degree),
        xpoly(&["0", "1"], degree),
        xpoly(&["-1/3"], degree),
    ])
    .unwrap();
    let targets = seq(&["0", "1", "-1+1/2i"]);
    let a = construct_for_finite_set(&targets, &cv, degree).unwrap();
    assert_eq!(
        forward_map(&a, &cv, degree).unwrap(),
        target_dtable(&targets, x_space(), degree).unwrap()
    );
}

#[test]
fn construction_rejects_bad_targets() {
    let line = Curve::linear(x_space(), 10, ());
    assert!(matches!(
        construct_for_finite_set(&seq(&["1", "1"]), &line, 10),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        construct_for_finite_set(&[], &line, 10),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        construct_for_finite_set(&seq(&["0", "1", "2"]), &line, 5),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn grid_samples() {
    let g: Grid = "1/2,0,1,5".parse().unwrap();
    let s = g.samples();
    assert_eq!(s.len(), 25);
    assert_eq!(s[0], c("-1/2-i"));
    assert_eq!(s[12], c("1/2"));
    assert_eq!(s[24], c("3/2+i"));
    assert_eq!("0,0,1,1".parse::<Grid>().unwrap().samples(), vec![c("0")]);
    assert!("0,0,1".parse::<Grid>().is_err());
    assert!("0,0,1,0".parse::<Grid>().is_err());
}

#[test]
fn scan_of_a_polynomial_is_all_convergent() {
    let degree = 8;
    let cv = quad_curve(degree);
    let mut f = ATable::new(x_space(), degree, ());
    f.insert(1, 0, xpoly(&["1"], degree)).unwrap();
    let grid: Grid = "0,0,3,4".parse().unwrap();
    let r = scan(&f, &cv, &grid.samples(), degree, &VerdictRule::default()).unwrap();
    assert_eq!(r.counts().get(&Verdict::ConvergentLike), Some(&16));
}

#[test]
fn scan_finds_exactly_the_constructed_targets() {
    let degree = 40;
    let line = Curve::linear(x_space(), degree, ());
    let a = construct_for_finite_set(&seq(&["0", "1"]), &line, degree).unwrap();
    let grid: Grid = "1/2,0,1,5".parse().unwrap();
    let r = scan(&a, &line, &grid.samples(), degree, &VerdictRule::default()).unwrap();
    let conv = r.samples_with(Verdict::ConvergentLike);
    assert_eq!(conv, vec![&c("0"), &c("1")]);
    assert_eq!(r.samples_with(Verdict::DivergentLike).len(), 23);
}

#[test]
fn scan_of_a_convergent_series_never_diverges() {
    // |a_ijk| ≤ 2^{i+j+k}; below D ≈ 16 the rising approach of ρ_m to its
    // limit can still read as divergent growth
    let degree = 20;
    let mut r = rng(5);
    let cv = random_curve(&mut r, degree);
    let mut a = ATable::new(x_space(), degree, ());
    for i in 0..=degree {
        for j in 0..=(degree - i) {
            let coeffs: Vec<String> = (0..=(degree - i - j))
                .map(|k| format!("{}/3", 1u64 << (i + j + k)))
                .collect();
            let refs: Vec<&str> = coeffs.iter().map(String::as_str).collect();
            a.insert(i, j, xpoly(&refs, degree)).unwrap();
        }
    }
    let grid: Grid = "0,0,2,5".parse().unwrap();
    let report = scan(&a, &cv, &grid.samples(), degree, &VerdictRule::default()).unwrap();
    assert_eq!(report.counts().get(&Verdict::DivergentLike), None);
}

#[test]
fn scan_csv_layout_is_fixed_and_repeatable() {
    let degree = 10;
    let cv = quad_curve(degree);
    let f = gen_example_f(&seq(&["0", "1"]), 10, &cv, degree, Convention::Member).unwrap();
    let grid: Grid = "0,0,1,3".parse().unwrap();
    let one = scan(&f, &cv, &grid.samples(), degree, &VerdictRule::default()).unwrap();
    let two = scan(&f, &cv, &grid.samples(), degree, &VerdictRule::default()).unwrap();
    let text = report::scan_csv(&one).unwrap();
    assert_eq!(text, report::scan_csv(&two).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s_re,s_im,verdict,rho_last,E_n_index,D"));
    assert_eq!(lines.next().unwrap().split(',').count(), 6);
    assert_eq!(text.lines().count(), 10);
    let prof = report::profile_csv(&one).unwrap();
    assert!(prof.starts_with("s_re,s_im,m,rho_m,verdict,E_n_index\n"));
    assert_eq!(prof.lines().count(), 1 + 9 * 10);
    assert_eq!(report::fmt_float(0.1), "1.0000000000000001e-1");
}

#[test]
#[ignore]
fn timing_at_acceptance_scale() {
    let start = Instant::now();
    let cv = quad_curve(40);
    let f = gen_example_f(&seq(&["0", "1", "2"]), 40, &cv, 40, Convention::Member).unwrap();
    eprintln!("gen f {:?}", start.elapsed());
    let d = forward_map(&f, &cv, 40).unwrap();
    eprintln!("forward f {:?} ({} entries)", start.elapsed(), d.len());
    let g = gen_example_g(&seq(&["0", "1", "2"]), 40, &cv, 40, Convention::Member).unwrap();
    let _ = forward_map(&g, &cv, 40).unwrap();
    eprintln!("g {:?}", start.elapsed());
    let a = construct_for_finite_set(&seq(&["0", "1", "-1"]), &cv, 36).unwrap();
    eprintln!("construct {:?} ({} entries)", start.elapsed(), a.len());
    let grid: Grid = "0,0,2,5".parse().unwrap();
    let r = scan(&a, &cv, &grid.samples(), 36, &VerdictRule::default()).unwrap();
    eprintln!("scan {:?} {:?}", start.elapsed(), r.counts());
}
