use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use convlab::capacity::{self, CapacityOptions, Descriptor, Law};
use convlab::curve::{
    forward_map, forward_map_multinomial, inverse_solve, AKind, CurveFile, TableFile,
};
use convlab::lab::random::{random_atable, random_curve, InstanceShape};
use convlab::lab::report::{profile_csv, render, scan_csv};
use convlab::lab::{self, Convention, Grid};
use convlab::scalar::{parse_exact_complex, MIN_PRECISION};
use convlab::{growth_profile, ATable, Curve, Error, ExactComplex, FloatComplex};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{check_distinct, BackendKind, ExperimentConfig};
use crate::{Common, LawCommon};

/// Validation failures carry the library error so the exit code is 1.
fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::Precondition(msg.into()).into()
}

struct Run {
    cfg: ExperimentConfig,
    common: Common,
}

impl Run {
    fn new(common: &Common) -> Result<Self> {
        let cfg = ExperimentConfig::load(common.config.as_deref())?;
        if let Some(n) = common.workers.or(cfg.workers) {
            ensure!(n >= 1, invalid("workers must be at least 1"));
            // a second build in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        Ok(Run {
            cfg,
            common: common.clone(),
        })
    }

    fn degree(&self, default: u32) -> Result<u32> {
        let d = self.common.degree.or(self.cfg.degree).unwrap_or(default);
        ensure!(
            d >= 4,
            invalid(format!("degree must be at least 4, got {d}"))
        );
        Ok(d)
    }

    fn backend(&self) -> BackendKind {
        self.common.backend.or(self.cfg.backend).unwrap_or_default()
    }

    fn precision(&self) -> Result<usize> {
        let p = self.common.precision.or(self.cfg.precision).unwrap_or(128);
        ensure!(
            p >= MIN_PRECISION,
            invalid(format!(
                "precision must be at least {MIN_PRECISION} bits, got {p}"
            ))
        );
        Ok(p)
    }

    fn out(&self) -> Option<PathBuf> {
        self.common.out.clone().or_else(|| self.cfg.out.clone())
    }

    fn emit(&self, text: &str) -> Result<()> {
        write_output(self.out().as_deref(), text)
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<ExactComplex>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Ok(parse_exact_complex(s)?))
        .collect()
}

fn list_arg(cli: Option<String>, cfg: &Option<Vec<String>>) -> Result<Option<Vec<ExactComplex>>> {
    match (cli, cfg) {
        (Some(text), _) => parse_list(&text).map(Some),
        (None, Some(items)) => items
            .iter()
            .map(|s| Ok(parse_exact_complex(s)?))
            .collect::<Result<Vec<_>>>()
            .map(Some),
        (None, None) => Ok(None),
    }
}

/// Inline coefficients, or a curve JSON file when the argument names one.
fn load_curve(
    spec: Option<String>,
    cfg: &ExperimentConfig,
    degree: u32,
) -> Result<(Curve<ExactComplex>, Option<PathBuf>)> {
    let spec = spec
        .or_else(|| cfg.curve.clone())
        .unwrap_or_else(|| "1".into());
    let path = Path::new(&spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading curve {}", path.display()))?;
        let file: CurveFile = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(e.to_string()))
            .with_context(|| format!("parsing curve {}", path.display()))?;
        Ok((
            file.to_curve::<ExactComplex>(&())?,
            Some(path.to_path_buf()),
        ))
    } else {
        Ok((
            Curve::parse_inline(&spec, degree).with_context(|| format!("curve {spec:?}"))?,
            None,
        ))
    }
}

fn load_atable(path: &Path) -> Result<ATable<ExactComplex>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading series {}", path.display()))?;
    let file = TableFile::from_json(&text)
        .with_context(|| format!("parsing series {}", path.display()))?;
    file.to_table::<ExactComplex, AKind>(&())
        .with_context(|| format!("loading series {}", path.display()))
}

fn table_json(a: &ATable<ExactComplex>) -> String {
    let mut text = TableFile::from_table(a).to_json();
    text.push('\n');
    text
}

pub fn scan(
    common: &Common,
    series: Option<PathBuf>,
    curve: Option<String>,
    grid: Option<String>,
    samples: Option<String>,
    profile_out: Option<PathBuf>,
) -> Result<()> {
    let run = Run::new(common)?;
    let degree = run.degree(20)?;
    let series = series
        .or_else(|| run.cfg.series.clone())
        .ok_or_else(|| invalid("scan needs --series"))?;
    let profile_out = profile_out.or_else(|| run.cfg.profile_out.clone());
    let a = load_atable(&series)?;
    ensure!(
        a.degree() >= degree,
        invalid(format!(
            "{} is truncated at degree {} < D = {degree}",
            series.display(),
            a.degree()
        ))
    );
    let (curve, curve_path) = load_curve(curve, &run.cfg, degree)?;
    let inputs = [
        Some(series.as_path()),
        curve_path.as_deref(),
        common.config.as_deref(),
    ];
    check_distinct(run.out().as_deref(), &inputs)?;
    check_distinct(profile_out.as_deref(), &inputs)?;

    let mut points = Vec::new();
    if let Some(g) = grid.or_else(|| run.cfg.grid.clone()) {
        points.extend(g.parse::<Grid>()?.samples());
    }
    if let Some(extra) = list_arg(samples, &run.cfg.samples)? {
        points.extend(extra);
    }
    ensure!(
        !points.is_empty(),
        invalid("scan needs --grid or --samples")
    );

    let rule = run.cfg.rule;
    let report = match run.backend() {
        BackendKind::Rational => lab::scan(&a, &curve, &points, degree, &rule)?,
        BackendKind::Float => {
            let p = run.precision()?;
            lab::scan(
                &a.convert::<FloatComplex>(p),
                &curve.convert::<FloatComplex>(p),
                &points,
                degree,
                &rule,
            )?
        }
    };
    run.emit(&scan_csv(&report)?)?;
    if let Some(path) = profile_out {
        write_output(Some(&path), &profile_csv(&report)?)?;
    }
    let counts: Vec<String> = report
        .counts()
        .iter()
        .map(|(v, n)| format!("{v}={n}"))
        .collect();
    eprintln!(
        "{} samples at D={degree}: {}",
        report.rows.len(),
        counts.join(" ")
    );
    Ok(())
}

pub fn construct(common: &Common, targets: Option<String>, curve: Option<String>) -> Result<()> {
    let run = Run::new(common)?;
    let degree = run.degree(36)?;
    let targets =
        list_arg(targets, &run.cfg.targets)?.ok_or_else(|| invalid("construct needs --targets"))?;
    let (curve, curve_path) = load_curve(curve, &run.cfg, degree)?;
    check_distinct(
        run.out().as_deref(),
        &[curve_path.as_deref(), common.config.as_deref()],
    )?;
    let a = lab::construct_for_finite_set(&targets, &curve, degree)?;
    run.emit(&table_json(&a))?;
    let verdict = growth_profile(&a.to_series()?, &run.cfg.rule).verdict;
    eprintln!(
        "constructed series for {} targets at D={degree}: {verdict}",
        targets.len()
    );
    Ok(())
}

pub fn examples(
    common: &Common,
    g: bool,
    sequence: Option<String>,
    count: Option<u32>,
    convention: Option<Convention>,
    curve: Option<String>,
) -> Result<()> {
    let run = Run::new(common)?;
    let degree = run.degree(40)?;
    let seq = list_arg(sequence, &run.cfg.sequence)?
        .unwrap_or_else(|| (0..3).map(ExactComplex::from_int).collect());
    let n = count.or(run.cfg.count).unwrap_or(degree);
    let convention = convention.or(run.cfg.convention).unwrap_or_default();
    let (curve, curve_path) = load_curve(curve, &run.cfg, degree)?;
    check_distinct(
        run.out().as_deref(),
        &[curve_path.as_deref(), common.config.as_deref()],
    )?;
    let a = if g {
        lab::gen_example_g(&seq, n, &curve, degree, convention)?
    } else {
        lab::gen_example_f(&seq, n, &curve, degree, convention)?
    };
    run.emit(&table_json(&a))
}

fn capacity_options(run: &Run, rungs: Option<Vec<usize>>) -> CapacityOptions {
    let mut options = CapacityOptions::default();
    if let Some(rungs) = rungs.or_else(|| run.cfg.rungs.clone()) {
        options.rungs = rungs;
    }
    if let Some(rounds) = run.cfg.minimax_rounds {
        options.minimax.max_rounds = rounds;
    }
    if let Some(tol) = run.cfg.minimax_tolerance {
        options.minimax.tolerance = tol;
    }
    options
}

fn fineness(run: &Run, h: Option<f64>) -> f64 {
    h.or(run.cfg.h).unwrap_or(1e-3)
}

fn descriptor(text: Option<String>, run: &Run) -> Result<Descriptor> {
    let text = text
        .or_else(|| run.cfg.set.clone())
        .ok_or_else(|| invalid("a set descriptor is required (--set)"))?;
    text.parse::<Descriptor>()
        .with_context(|| format!("set {text:?}"))
}

pub fn capacity(
    common: &Common,
    set: Option<String>,
    h: Option<f64>,
    rungs: Option<Vec<usize>>,
) -> Result<()> {
    let run = Run::new(common)?;
    check_distinct(run.out().as_deref(), &[common.config.as_deref()])?;
    let desc = descriptor(set, &run)?;
    let k = capacity::make_set(&desc, fineness(&run, h))?;
    let est = capacity::capacity_with(&k, &capacity_options(&run, rungs))?;
    run.emit(&capacity::capacity_csv(&est)?)?;
    let mut note = String::new();
    if est.is_polar_like() {
        note.push_str(" (polar-like)");
    }
    if matches!(desc, Descriptor::Cantor { .. }) {
        note.push_str(" (finite-depth approximant: upper-bound proxy)");
    }
    eprintln!(
        "{desc}: {} points, capacity ~ {:.6}, spread {:.4}{note}",
        k.len(),
        est.extrapolated,
        est.spread
    );
    Ok(())
}

pub enum LawInput {
    Scaling { set: Option<String>, factor: String },
    Preimage { set: Option<String>, poly: String },
    Union(Vec<String>),
}

fn complex(text: &str) -> Result<Complex64> {
    let (re, im) = parse_exact_complex(text.trim())?.to_f64();
    Ok(Complex64::new(re, im))
}

pub fn lawcheck(shared: &LawCommon, input: LawInput) -> Result<()> {
    let run = Run::new(&shared.common)?;
    check_distinct(run.out().as_deref(), &[shared.common.config.as_deref()])?;
    let law = match input {
        LawInput::Scaling { set, factor } => Law::Scaling {
            set: descriptor(set, &run)?,
            factor: complex(&factor)?,
        },
        LawInput::Preimage { set, poly } => Law::Preimage {
            set: descriptor(set, &run)?,
            coeffs: poly.split(',').map(complex).collect::<Result<Vec<_>>>()?,
        },
        LawInput::Union(sets) => Law::Union(
            sets.iter()
                .map(|s| {
                    s.parse::<Descriptor>()
                        .with_context(|| format!("set {s:?}"))
                })
                .collect::<Result<_>>()?,
        ),
    };
    let report = capacity::law_check(
        &law,
        fineness(&run, shared.h),
        &capacity_options(&run, shared.rungs.clone()),
    )?;
    run.emit(&capacity::law_csv(std::slice::from_ref(&report))?)?;
    eprintln!(
        "{}: lhs {:.6}, rhs {:.6}",
        report.law, report.lhs, report.rhs
    );
    Ok(())
}

struct CaseResult {
    triangular: bool,
    degree_bound: bool,
    routes_agree: bool,
    round_trip: bool,
}

fn fuzz_case(rng: &mut ChaCha8Rng, shape: &InstanceShape) -> Result<CaseResult> {
    let curve = random_curve(rng, shape)?;
    let a = random_atable(rng, &curve, shape)?;
    let d = forward_map(&a, &curve, shape.degree)?;
    let triangular = d.triangularity_check().holds;
    let mut degree_bound = true;
    for ((_, q), v) in d.iter() {
        for (k, _) in v.terms() {
            degree_bound &= d.lambda_poly(q, k).len() <= q as usize + 1;
        }
    }
    let routes_agree = forward_map_multinomial(&a, &curve, shape.degree)? == d;
    let round_trip = inverse_solve(&d, &curve, shape.degree).is_ok_and(|back| back == a);
    Ok(CaseResult {
        triangular,
        degree_bound,
        routes_agree,
        round_trip,
    })
}

pub fn roundtrip(common: &Common, seed: Option<u64>, cases: Option<u32>) -> Result<()> {
    let run = Run::new(common)?;
    ensure!(
        run.backend() == BackendKind::Rational,
        invalid("roundtrip checks exact identities; use the rational backend")
    );
    check_distinct(run.out().as_deref(), &[common.config.as_deref()])?;
    let degree = run.degree(10)?;
    let seed = seed.or(run.cfg.seed).unwrap_or(0);
    let cases = cases.or(run.cfg.cases).unwrap_or(200);
    let shape = InstanceShape {
        degree,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut failures = 0;
    for case in 0..cases {
        let r = fuzz_case(&mut rng, &shape)?;
        let flags = [r.triangular, r.degree_bound, r.routes_agree, r.round_trip];
        if flags.contains(&false) {
            failures += 1;
        }
        let mut row = vec![case.to_string()];
        row.extend(flags.iter().map(bool::to_string));
        rows.push(row);
    }
    run.emit(&render(
        &[
            "case",
            "triangular",
            "degree_bound",
            "routes_agree",
            "round_trip",
        ],
        rows,
    )?)?;
    if failures > 0 {
        bail!(invalid(format!(
            "{failures} of {cases} cases violated an identity (seed {seed})"
        )));
    }
    eprintln!("{cases} cases at D={degree}, seed {seed}: all identities hold");
    Ok(())
}
