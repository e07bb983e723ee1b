use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::parse_exact_complex;

/// Smallest total sample count of a Cantor approximant, so the ladder rungs
/// can still pick distinct points at shallow depths.
const MIN_CANTOR_SAMPLES: usize = 256;

/// Generator of a bounded planar compact.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Disk {
        center: Complex64,
        radius: f64,
    },
    Square {
        center: Complex64,
        side: f64,
    },
    Circle {
        center: Complex64,
        radius: f64,
    },
    Segment {
        x0: f64,
        x1: f64,
    },
    Points(Vec<Complex64>),
    /// Generalized Cantor set in `[0, 1]`: at level `k` every interval keeps
    /// its two end pieces of relative length `ratios[k]` (the last ratio
    /// repeats).
    Cantor {
        ratios: Vec<f64>,
        depth: u32,
    },
    Union(Vec<Descriptor>),
    Scaled {
        factor: Complex64,
        inner: Box<Descriptor>,
    },
    /// `P^{-1}(inner)` for the monic polynomial with coefficients `coeffs`,
    /// lowest degree first.
    Preimage {
        coeffs: Vec<Complex64>,
        inner: Box<Descriptor>,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDescriptor(msg.into())
}

fn number(text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| invalid(format!("bad number {text:?}")))
}

fn complex(text: &str) -> Result<Complex64> {
    let (re, im) = parse_exact_complex(text.trim())
        .map_err(|_| invalid(format!("bad complex number {text:?}")))?
        .to_f64();
    Ok(Complex64::new(re, im))
}

fn numbers<const N: usize>(text: &str) -> Result<[f64; N]> {
    let parts = text.split(',').map(number).collect::<Result<Vec<_>>>()?;
    parts.try_into().map_err(|_| {
        invalid(format!(
            "expected {N} comma-separated numbers, got {text:?}"
        ))
    })
}

/// Splits on `sep` outside parentheses.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (k, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(invalid("empty descriptor"));
        }
        for (head, build) in [("union(", 0), ("scaled(", 1), ("preimage(", 2)] {
            if let Some(body) = text.strip_prefix(head) {
                let body = body
                    .strip_suffix(')')
                    .ok_or_else(|| invalid(format!("unbalanced parentheses in {text:?}")))?;
                let parts = split_top(body, '|');
                let desc = match build {
                    0 => {
                        Descriptor::Union(parts.into_iter().map(str::parse).collect::<Result<_>>()?)
                    }
                    _ => {
                        let [head, inner] = parts.as_slice() else {
                            return Err(invalid(format!("expected `args|spec` in {text:?}")));
                        };
                        let inner = Box::new(inner.parse()?);
                        if build == 1 {
                            Descriptor::Scaled {
                                factor: complex(head)?,
                                inner,
                            }
                        } else {
                            let coeffs = head.split(',').map(complex).collect::<Result<_>>()?;
                            Descriptor::Preimage { coeffs, inner }
                        }
                    }
                };
                desc.validate()?;
                return Ok(desc);
            }
        }
        let (kind, args) = text
            .split_once(':')
            .ok_or_else(|| invalid(format!("missing `kind:` in {text:?}")))?;
        let desc = match kind.trim() {
            "disk" => {
                let [cx, cy, r] = numbers(args)?;
                Descriptor::Disk {
                    center: Complex64::new(cx, cy),
                    radius: r,
                }
            }
            "circle" => {
                let [cx, cy, r] = numbers(args)?;
                Descriptor::Circle {
                    center: Complex64::new(cx, cy),
                    radius: r,
                }
            }
            "square" => {
                let [cx, cy, side] = numbers(args)?;
                Descriptor::Square {
                    center: Complex64::new(cx, cy),
                    side,
                }
            }
            "segment" => {
                let [x0, x1] = numbers(args)?;
                Descriptor::Segment { x0, x1 }
            }
            "points" => Descriptor::Points(args.split(';').map(complex).collect::<Result<_>>()?),
            "cantor" => {
                let (ratios, depth) = args
                    .rsplit_once(':')
                    .ok_or_else(|| invalid("cantor needs `ratios:depth`"))?;
                let depth = depth
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("bad cantor depth {depth:?}")))?;
                Descriptor::Cantor {
                    ratios: ratios.split(',').map(number).collect::<Result<_>>()?,
                    depth,
                }
            }
            other => return Err(invalid(format!("unknown set kind {other:?}"))),
        };
        desc.validate()?;
        Ok(desc)
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join =
            |v: &[Complex64], sep: &str| v.iter().map(|z| fmt_c(*z)).collect::<Vec<_>>().join(sep);
        match self {
            Descriptor::Disk { center, radius } => {
                write!(f, "disk:{},{},{}", center.re, center.im, radius)
            }
            Descriptor::Circle { center, radius } => {
                write!(f, "circle:{},{},{}", center.re, center.im, radius)
            }
            Descriptor::Square { center, side } => {
                write!(f, "square:{},{},{}", center.re, center.im, side)
            }
            Descriptor::Segment { x0, x1 } => write!(f, "segment:{x0},{x1}"),
            Descriptor::Points(p) => write!(f, "points:{}", join(p, ";")),
            Descriptor::Cantor { ratios, depth } => {
                let r: Vec<String> = ratios.iter().map(|r| r.to_string()).collect();
                write!(f, "cantor:{}:{depth}", r.join(","))
            }
            Descriptor::Union(parts) => {
                let p: Vec<String> = parts.iter().map(|d| d.to_string()).collect();
                write!(f, "union({})", p.join("|"))
            }
            Descriptor::Scaled { factor, inner } => write!(f, "scaled({}|{inner})", fmt_c(*factor)),
            Descriptor::Preimage { coeffs, inner } => {
                write!(f, "preimage({}|{inner})", join(coeffs, ","))
            }
        }
    }
}

impl Descriptor {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match self {
            Descriptor::Disk { center, radius } | Descriptor::Circle { center, radius } => {
                if !(finite(center.re) && finite(center.im) && *radius > 0.0 && finite(*radius)) {
                    return Err(invalid(format!(
                        "{self}: radius must be positive and finite"
                    )));
                }
            }
            Descriptor::Square { center, side } => {
                if !(finite(center.re) && finite(center.im) && *side > 0.0 && finite(*side)) {
                    return Err(invalid(format!("{self}: side must be positive and finite")));
                }
            }
            Descriptor::Segment { x0, x1 } => {
                if !(finite(*x0) && finite(*x1) && x0 <= x1) {
                    return Err(invalid(format!("{self}: need finite x0 <= x1")));
                }
            }
            Descriptor::Points(p) => {
                if p.is_empty() {
                    return Err(invalid("empty point set"));
                }
                if p.iter().any(|z| !(finite(z.re) && finite(z.im))) {
                    return Err(invalid("non-finite point"));
                }
            }
            Descriptor::Cantor { ratios, .. } => {
                if ratios.is_empty() {
                    return Err(invalid("cantor needs at least one ratio"));
                }
                if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r <= 0.5)) {
                    return Err(invalid(format!("cantor ratio {r} outside (0, 1/2]")));
                }
            }
            Descriptor::Union(parts) => {
                if parts.is_empty() {
                    return Err(invalid("empty union"));
                }
                for p in parts {
                    p.validate()?;
                }
            }
            Descriptor::Scaled { factor, inner } => {
                if factor.norm() == 0.0 || !factor.norm().is_finite() {
                    return Err(invalid("scale factor must be nonzero and finite"));
                }
                inner.validate()?;
            }
            Descriptor::Preimage { coeffs, inner } => {
                if coeffs.len() < 2 || coeffs.last() != Some(&Complex64::new(1.0, 0.0)) {
                    return Err(invalid(
                        "preimage needs a monic polynomial of degree at least 1",
                    ));
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    /// Boundary and extremal samples at covering radius `h`.
    fn sample(&self, h: f64) -> Vec<Complex64> {
        match self {
            Descriptor::Disk { center, radius } | Descriptor::Circle { center, radius } => {
                let n = ((2.0 * PI * radius / h).ceil() as usize).max(16);
                (0..n)
                    .map(|k| {
                        center + Complex64::from_polar(*radius, 2.0 * PI * k as f64 / n as f64)
                    })
                    .collect()
            }
            Descriptor::Square { center, side } => {
                let m = ((side / h).ceil() as usize).max(4);
                let half = side / 2.0;
                let corners = [
                    Complex64::new(-half, -half),
                    Complex64::new(half, -half),
                    Complex64::new(half, half),
                    Complex64::new(-half, half),
                ];
                let mut out = Vec::with_capacity(4 * m);
                for e in 0..4 {
                    let (a, b) = (corners[e], corners[(e + 1) % 4]);
                    for k in 0..m {
                        out.push(center + a + (b - a) * (k as f64 / m as f64));
                    }
                }
                out
            }
            Descriptor::Segment { x0, x1 } => {
                let m = (((x1 - x0) / h).ceil() as usize).max(1);
                (0..=m)
                    .map(|k| Complex64::new(x0 + (x1 - x0) * k as f64 / m as f64, 0.0))
                    .collect()
            }
            Descriptor::Points(p) => p.clone(),
            Descriptor::Cantor { ratios, depth } => {
                let intervals = cantor_intervals(ratios, *depth);
                let floor = MIN_CANTOR_SAMPLES.div_ceil(intervals.len()) + 1;
                let mut out = Vec::new();
                for (a, b) in intervals {
                    let mut k = (((b - a) / h).ceil() as usize + 1).max(floor).max(3);
                    if k.is_multiple_of(2) {
                        k += 1;
                    }
                    // cosine spacing, endpoints and midpoint included
                    for i in 0..k {
                        let u = (1.0 - (PI * i as f64 / (k - 1) as f64).cos()) / 2.0;
                        out.push(Complex64::new(a + (b - a) * u, 0.0));
                    }
                }
                out
            }
            Descriptor::Union(parts) => parts.iter().flat_map(|p| p.sample(h)).collect(),
            Descriptor::Scaled { factor, inner } => inner
                .sample(h / factor.norm())
                .into_iter()
                .map(|z| z * factor)
                .collect(),
            Descriptor::Preimage { coeffs, inner } => {
                let pre = |h_inner: f64| -> Vec<Complex64> {
                    inner
                        .sample(h_inner)
                        .into_iter()
                        .flat_map(|w| super::roots::preimage(coeffs, w))
                        .collect()
                };
                let first = pre(h);
                // |dz| ≈ |dw| / |P'(z)|: refine the inner cloud where P' is small
                let slope = first
                    .iter()
                    .map(|z| super::roots::derivative_abs(coeffs, *z))
                    .fold(f64::INFINITY, f64::min);
                if slope < 1.0 {
                    pre(h * slope.max(1e-3))
                } else {
                    first
                }
            }
        }
    }

    /// Interior lattice points of the solid parts at the given spacing.
    fn interior(&self, spacing: f64) -> Vec<Complex64> {
        let lattice =
            |half: f64, keep: &dyn Fn(Complex64) -> bool, center: Complex64| -> Vec<Complex64> {
                let m = (half / spacing).floor() as i64;
                let mut out = Vec::new();
                for iy in -m..=m {
                    for ix in -m..=m {
                        let z = Complex64::new(ix as f64 * spacing, iy as f64 * spacing);
                        if keep(z) {
                            out.push(center + z);
                        }
                    }
                }
                out
            };
        match self {
            Descriptor::Disk { center, radius } => {
                lattice(*radius, &|z| z.norm() < *radius, *center)
            }
            Descriptor::Square { center, side } => {
                let half = side / 2.0;
                lattice(half, &|z| z.re.abs() < half && z.im.abs() < half, *center)
            }
            Descriptor::Union(parts) => parts.iter().flat_map(|p| p.interior(spacing)).collect(),
            Descriptor::Scaled { factor, inner } => inner
                .interior(spacing / factor.norm())
                .into_iter()
                .map(|z| z * factor)
                .collect(),
            Descriptor::Preimage { coeffs, inner } => inner
                .interior(spacing)
                .into_iter()
                .flat_map(|w| super::roots::preimage(coeffs, w))
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// The `2^depth` intervals of the depth-`depth` Cantor construction in `[0, 1]`.
pub fn cantor_intervals(ratios: &[f64], depth: u32) -> Vec<(f64, f64)> {
    let mut intervals = vec![(0.0, 1.0)];
    for level in 0..depth as usize {
        let r = ratios[level.min(ratios.len() - 1)];
        intervals = intervals
            .into_iter()
            .flat_map(|(a, b)| {
                let piece = (b - a) * r;
                [(a, a + piece), (b - piece, b)]
            })
            .collect();
    }
    intervals
}

fn dedupe(points: Vec<Complex64>) -> Vec<Complex64> {
    let mut seen = HashSet::new();
    points
        .into_iter()
        .filter(|z| seen.insert((canonical(z.re).to_bits(), canonical(z.im).to_bits())))
        .collect()
}

fn canonical(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// A discretized planar compact.
///
/// `points` samples the outer boundary and any isolated pieces at covering
/// radius `h`. Capacity, Fekete points and Chebyshev norms only see the outer
/// boundary, so solid regions keep their interior out of the cloud; it is
/// available through [`CompactSet::interior_points`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompactSet {
    descriptor: Descriptor,
    h: f64,
    points: Vec<Complex64>,
}

impl CompactSet {
    pub fn new(descriptor: Descriptor, h: f64) -> Result<Self> {
        descriptor.validate()?;
        if !(h > 0.0 && h.is_finite()) {
            return Err(invalid(format!("fineness must be positive, got {h}")));
        }
        let points = dedupe(descriptor.sample(h));
        Ok(CompactSet {
            descriptor,
            h,
            points,
        })
    }

    /// A finite point set taken as is.
    pub fn from_points(points: Vec<Complex64>) -> Result<Self> {
        Self::new(Descriptor::Points(points), 1.0)
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Lattice points inside the solid parts (disks, squares), not repeated
    /// in [`points`](Self::points).
    pub fn interior_points(&self, spacing: f64) -> Vec<Complex64> {
        self.descriptor.interior(spacing)
    }

    /// The same cloud multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Result<Self> {
        let descriptor = Descriptor::Scaled {
            factor,
            inner: Box::new(self.descriptor.clone()),
        };
        descriptor.validate()?;
        Ok(CompactSet {
            descriptor,
            h: self.h * factor.norm(),
            points: self.points.iter().map(|z| z * factor).collect(),
        })
    }
}

/// `make_set`: samples `descriptor` at fineness `h`.
pub fn make_set(descriptor: &Descriptor, h: f64) -> Result<CompactSet> {
    CompactSet::new(descriptor.clone(), h)
}
