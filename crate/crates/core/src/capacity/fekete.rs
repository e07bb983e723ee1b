use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::CompactSet;

fn arg_2pi(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Indices of the greedy Leja sequence in `cloud`.
fn leja_indices(cloud: &[Complex64], n: usize) -> Vec<usize> {
    let mut first = 0;
    for (k, z) in cloud.iter().enumerate() {
        let best = cloud[first];
        if z.norm() > best.norm() || (z.norm() == best.norm() && arg_2pi(*z) < arg_2pi(best)) {
            first = k;
        }
    }
    let mut chosen = vec![first];
    let mut potential: Vec<f64> = cloud
        .iter()
        .map(|z| (z - cloud[first]).norm().ln())
        .collect();
    while chosen.len() < n {
        let mut best = None;
        for (k, u) in potential.iter().enumerate() {
            if *u == f64::NEG_INFINITY {
                continue;
            }
            if best.is_none_or(|b: usize| *u > potential[b]) {
                best = Some(k);
            }
        }
        let Some(next) = best else { break };
        chosen.push(next);
        for (u, z) in potential.iter_mut().zip(cloud) {
            *u += (z - cloud[next]).norm().ln();
        }
    }
    chosen
}

/// Greedy Leja sequence of length `n`: `z_1` has the largest modulus (ties go
/// to the smallest argument in `[0, 2π)`), and each next point maximizes
/// `Π |z − z_i|` over the cloud (ties go to the earliest sample).
pub fn leja_points(set: &CompactSet, n: usize) -> Result<Vec<Complex64>> {
    if n < 1 {
        return Err(Error::precondition("at least one Leja point is needed"));
    }
    if n > set.len() {
        return Err(Error::precondition(format!(
            "{n} Leja points requested from {} samples",
            set.len()
        )));
    }
    Ok(leja_indices(set.points(), n)
        .into_iter()
        .map(|k| set.points()[k])
        .collect())
}

/// `(Π_{i<j} |z_i − z_j|)^{2/(n(n−1))}` of a configuration (zero if any two
/// points coincide).
pub fn vandermonde_mean(points: &[Complex64]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (points[i] - points[j]).norm();
            if d == 0.0 {
                return 0.0;
            }
            sum += d.ln();
        }
    }
    (2.0 * sum / (n * (n - 1)) as f64).exp()
}

/// Improves a configuration by single-point exchanges within the cloud until
/// no swap increases the Vandermonde product.
fn exchange(cloud: &[Complex64], chosen: &mut [usize], max_sweeps: usize) {
    let n = chosen.len();
    let potentials = |chosen: &[usize]| -> Vec<f64> {
        cloud
            .iter()
            .map(|w| chosen.iter().map(|&j| (w - cloud[j]).norm().ln()).sum())
            .collect()
    };
    for _ in 0..max_sweeps {
        // recomputed every sweep to keep rounding drift out of the comparisons
        let mut u = potentials(chosen);
        let mut swapped = false;
        for i in 0..n {
            let zi = cloud[chosen[i]];
            let current: f64 = chosen
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, &j)| (zi - cloud[j]).norm().ln())
                .sum();
            let mut best = None;
            let mut best_val = current + 1e-12 * current.abs().max(1.0);
            for (k, w) in cloud.iter().enumerate() {
                if u[k] == f64::NEG_INFINITY {
                    continue;
                }
                let val = u[k] - (w - zi).norm().ln();
                if val > best_val {
                    best_val = val;
                    best = Some(k);
                }
            }
            if let Some(k) = best {
                let old = chosen[i];
                chosen[i] = k;
                swapped = true;
                let wk = cloud[k];
                for (m, w) in cloud.iter().enumerate() {
                    u[m] += (w - wk).norm().ln() - (w - zi).norm().ln();
                }
                u[old] = chosen.iter().map(|&j| (zi - cloud[j]).norm().ln()).sum();
            }
        }
        if !swapped {
            break;
        }
    }
}

/// Approximate Fekete configuration: Leja points refined by exchange.
pub fn fekete_points(set: &CompactSet, n: usize) -> Result<Vec<Complex64>> {
    let mut chosen = leja_indices(set.points(), n.min(set.len()));
    exchange(set.points(), &mut chosen, 200);
    Ok(chosen.into_iter().map(|k| set.points()[k]).collect())
}

/// `d_n` of the exchange-refined Leja configuration; zero once `n` exceeds the
/// number of distinct samples.
pub fn transfinite_diameter(set: &CompactSet, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::precondition("the transfinite diameter needs n >= 2"));
    }
    if n > set.len() {
        return Ok(0.0);
    }
    Ok(vandermonde_mean(&fekete_points(set, n)?))
}
