//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{random_atable, random_curve, rng};
use convlab::capacity::{
    self, capacity, capacity_csv, law_check, CapacityOptions, CompactSet, Descriptor, Law,
};
use convlab::curve::{forward_map, forward_map_multinomial, inverse_solve};
use convlab::lab::report::scan_csv;
use convlab::lab::{
    construct_for_finite_set, gen_example_f, gen_example_g, scan, Convention, Grid,
};
use convlab::{growth_profile, Curve, ExactComplex, Verdict, VerdictRule};
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn line(id: u32, o: &Outcome) {
    println!(
        "criterion {id}: {} {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

/// Criteria 1–3 share the 200 random instances.
fn exact_identities() -> [Outcome; 3] {
    let start = Instant::now();
    let degree = 10;
    let mut r = rng(20240601);
    let (mut round, mut tri, mut routes) = (0, 0, 0);
    let mut bound_violations = 0;
    let cases = 200;
    for _ in 0..cases {
        let curve = random_curve(&mut r, degree);
        let a = random_atable(&mut r, degree);
        let d = forward_map(&a, &curve, degree).unwrap();
        if d.triangularity_check().holds {
            tri += 1;
        }
        for ((_, q), v) in d.iter() {
            for (k, _) in v.terms() {
                if d.lambda_poly(q, k).len() > q as usize + 1 {
                    bound_violations += 1;
                }
            }
        }
        if forward_map_multinomial(&a, &curve, degree).unwrap() == d {
            routes += 1;
        }
        if inverse_solve(&d, &curve, degree).is_ok_and(|back| back == a) {
            round += 1;
        }
    }
    let elapsed = start.elapsed();
    [
        Outcome {
            pass: round == cases && elapsed < Duration::from_secs(60),
            detail: format!("{round}/{cases} exact round trips in {}", secs(elapsed)),
        },
        Outcome {
            pass: tri == cases && bound_violations == 0,
            detail: format!("{tri}/{cases} triangular, {bound_violations} degree-bound violations"),
        },
        Outcome {
            pass: routes == cases,
            detail: format!("{routes}/{cases} cases with identical routes"),
        },
    ]
}

fn curve(degree: u32) -> Curve<ExactComplex> {
    // b_1 = 1 + x, b_2 = x
    Curve::parse_inline("1,1;0,1", degree).unwrap()
}

fn ints(v: &[i64]) -> Vec<ExactComplex> {
    v.iter().map(|&k| ExactComplex::from_int(k)).collect()
}

fn example_one() -> (Outcome, String) {
    let start = Instant::now();
    let degree = 40;
    let cv = curve(degree);
    let e = ints(&[0, 1, 2]);
    let samples = "1,0,2,5".parse::<Grid>().unwrap().samples();
    let rule = VerdictRule::default();
    let f = gen_example_f(&e, degree, &cv, degree, Convention::Member).unwrap();
    let g = gen_example_g(&e, degree, &cv, degree, Convention::Member).unwrap();
    let rf = scan(&f, &cv, &samples, degree, &rule).unwrap();
    let rg = scan(&g, &cv, &samples, degree, &rule).unwrap();
    let elapsed = start.elapsed();

    let mut f_ok = true;
    let mut off_divergent = 0;
    for row in &rf.rows {
        let on_e = e.contains(&row.s);
        let v = row.probe.profile.verdict;
        f_ok &= (v == Verdict::ConvergentLike) == on_e;
        if !on_e && v == Verdict::DivergentLike {
            off_divergent += 1;
        }
    }
    let g_div = rg
        .rows
        .iter()
        .filter(|r| r.probe.profile.verdict == Verdict::DivergentLike)
        .count();
    let pass =
        f_ok && off_divergent >= 20 && g_div == rg.rows.len() && elapsed < Duration::from_secs(120);
    let detail = format!(
        "f convergent exactly on E: {f_ok}, f divergent off E: {off_divergent}/{}, g divergent: {g_div}/{}, {}",
        rf.rows.len() - 3,
        rg.rows.len(),
        secs(elapsed)
    );
    let csv = scan_csv(&rf).unwrap() + &scan_csv(&rg).unwrap();
    (Outcome { pass, detail }, csv)
}

fn converse() -> (Outcome, String) {
    let start = Instant::now();
    let degree = 36;
    let cv = curve(degree);
    let targets = ints(&[0, 1, -1]);
    let a = construct_for_finite_set(&targets, &cv, degree).unwrap();
    let mut samples = "0,0,1,5".parse::<Grid>().unwrap().samples();
    samples.extend(targets.iter().cloned());
    let rule = VerdictRule::default();
    let report = scan(&a, &cv, &samples, degree, &rule).unwrap();
    let mut exact = true;
    for row in &report.rows {
        exact &= (row.probe.profile.verdict == Verdict::ConvergentLike) == targets.contains(&row.s);
    }
    let convergent = report.samples_with(Verdict::ConvergentLike).len();
    let own = growth_profile(&a.to_series().unwrap(), &rule).verdict;
    let pass = exact && own == Verdict::DivergentLike;
    let detail = format!(
        "convergent exactly at targets: {exact} ({convergent} of {} samples), f itself {own}, {}",
        report.rows.len(),
        secs(start.elapsed())
    );
    (Outcome { pass, detail }, scan_csv(&report).unwrap())
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol * target.abs()
}

fn estimate(spec: &str, h: f64) -> capacity::CapacityEstimate {
    capacity(&capacity::make_set(&spec.parse().unwrap(), h).unwrap()).unwrap()
}

fn closed_forms() -> (Outcome, String) {
    let start = Instant::now();
    let h = 1e-3;
    let disk = estimate("disk:0,0,1", h);
    let segment = estimate("segment:-1,1", h);
    let square = estimate("square:0,0,1", h);
    let finite_a = estimate("points:0;1;-1", h);
    let finite_b = estimate("points:0;1/2;2i;-1-i;3;0.25+0.75i", h);
    let elapsed = start.elapsed();
    let pass = within(disk.extrapolated, 1.0, 0.02)
        && within(segment.extrapolated, 0.5, 0.02)
        && finite_a.extrapolated <= 0.01
        && finite_b.extrapolated <= 0.01
        && [&disk, &segment, &square].iter().all(|e| e.spread <= 0.05)
        && elapsed < Duration::from_secs(300);
    let detail = format!(
        "disk {:.4}, segment {:.4}, finite {:.4}/{:.4}, spread disk {:.4} segment {:.4} square {:.4} (square {:.4}), {}",
        disk.extrapolated,
        segment.extrapolated,
        finite_a.extrapolated,
        finite_b.extrapolated,
        disk.spread,
        segment.spread,
        square.spread,
        square.extrapolated,
        secs(elapsed)
    );
    let csv = [&disk, &segment, &square, &finite_a, &finite_b]
        .iter()
        .map(|e| capacity_csv(e).unwrap())
        .collect();
    (Outcome { pass, detail }, csv)
}

fn laws() -> (Outcome, String) {
    let opts = CapacityOptions::default();
    let scaling = law_check(
        &Law::Scaling {
            set: "segment:-1,1".parse().unwrap(),
            factor: Complex64::new(3.0, 0.0),
        },
        1e-3,
        &opts,
    )
    .unwrap();
    let z2 = vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ];
    let pre = law_check(
        &Law::Preimage {
            set: "disk:0,0,0.25".parse().unwrap(),
            coeffs: z2,
        },
        1e-3,
        &opts,
    )
    .unwrap();
    let against_closed = (pre.lhs - 0.5).abs() / 0.5;
    let pass =
        scaling.relative_error <= 0.03 && pre.relative_error <= 0.03 && against_closed <= 0.03;
    let detail = format!(
        "scaling error {:.5}, preimage error {:.5} (vs 1/2: {:.5})",
        scaling.relative_error, pre.relative_error, against_closed
    );
    (
        Outcome { pass, detail },
        capacity::law_csv(&[scaling, pre]).unwrap(),
    )
}

fn cantor(ratios: Vec<f64>, depth: u32) -> capacity::CapacityEstimate {
    capacity(&CompactSet::new(Descriptor::Cantor { ratios, depth }, 1e-3).unwrap()).unwrap()
}

fn cantor_dichotomy() -> (Outcome, String) {
    let c8 = cantor(vec![1.0 / 3.0], 8);
    let c10 = cantor(vec![1.0 / 3.0], 10);
    let stable = c8.extrapolated > 0.0
        && (c10.extrapolated - c8.extrapolated).abs() <= 0.05 * c8.extrapolated;
    let ratios: Vec<f64> = (1..=5).map(|k| 3f64.powi(-(1 << k))).collect();
    let thin: Vec<_> = (2..=5).map(|depth| cantor(ratios.clone(), depth)).collect();
    let values: Vec<f64> = thin.iter().map(|e| e.extrapolated).collect();
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let small = values[3] < 0.05;
    let detail = format!(
        "1/3-Cantor depth 8 {:.5} depth 10 {:.5}; 3^-2^k depths 2-5 {}",
        c8.extrapolated,
        c10.extrapolated,
        values
            .iter()
            .map(|v| format!("{v:.5}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let csv = [&c8, &c10]
        .into_iter()
        .chain(thin.iter())
        .map(|e| capacity_csv(e).unwrap())
        .collect();
    (
        Outcome {
            pass: stable && decreasing && small,
            detail,
        },
        csv,
    )
}

fn main() {
    let mut failures = Vec::new();
    let mut report = |id: u32, o: &Outcome| {
        line(id, o);
        if !o.pass {
            failures.push(id);
        }
    };

    for (k, o) in exact_identities().iter().enumerate() {
        report(k as u32 + 1, o);
    }
    let runs: [fn() -> (Outcome, String); 5] =
        [example_one, converse, closed_forms, laws, cantor_dichotomy];
    let mut first = Vec::new();
    for (k, run) in runs.iter().enumerate() {
        let (o, csv) = run();
        report(k as u32 + 4, &o);
        first.push(csv);
    }
    let second: Vec<String> = runs.iter().map(|run| run().1).collect();
    let identical = first == second;
    let bytes: usize = first.iter().map(String::len).sum();
    report(
        9,
        &Outcome {
            pass: identical,
            detail: format!("second run of 4-8 byte-identical: {identical} ({bytes} bytes)"),
        },
    );

    if !failures.is_empty() {
        println!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
