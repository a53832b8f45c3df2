//! Readout histograms of a prepared cyclic state: signal/noise split, mean
//! noise per excitation number and a decay-plus-floor noise model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::Label;

/// Measured counts keyed by bitstring, leftmost character = qubit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsHistogram {
    n: usize,
    counts: BTreeMap<Label, u64>,
}

#[derive(Debug, Deserialize)]
struct CountsJson {
    counts: BTreeMap<String, u64>,
}

impl CountsHistogram {
    /// Build from (bitstring, count) pairs. With `reverse_bits` the strings
    /// are read right to left.
    pub fn from_pairs<I, S>(pairs: I, reverse_bits: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut n = None;
        let mut counts = BTreeMap::new();
        for (key, c) in pairs {
            let key = key.as_ref().trim();
            let bits: String = if reverse_bits {
                key.chars().rev().collect()
            } else {
                key.to_string()
            };
            if bits.is_empty() || bits.len() > 127 || !bits.chars().all(|ch| ch == '0' || ch == '1')
            {
                return Err(Error::Parse(format!("`{key}` is not a bitstring")));
            }
            match n {
                None => n = Some(bits.len()),
                Some(m) if m != bits.len() => {
                    return Err(Error::Parse(format!(
                        "bitstring `{key}` has length {}, expected {m}",
                        bits.len()
                    )));
                }
                _ => {}
            }
            let label = Label::from_str_radix(&bits, 2).expect("checked binary");
            *counts.entry(label).or_insert(0) += c;
        }
        let n = n.ok_or_else(|| Error::Parse("histogram has no entries".into()))?;
        let h = CountsHistogram { n, counts };
        if h.total() == 0 {
            return Err(Error::Parameter("histogram total is zero".into()));
        }
        Ok(h)
    }

    /// `{"counts": {"00011": 812, ...}}`.
    pub fn from_json(text: &str, reverse_bits: bool) -> Result<Self> {
        let parsed: CountsJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        CountsHistogram::from_pairs(parsed.counts, reverse_bits)
    }

    /// `bitstring,count` rows; a non-numeric first row is taken as a header.
    pub fn from_csv(text: &str, reverse_bits: bool) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(',').ok_or_else(|| {
                Error::Parse(format!("line {}: expected `bitstring,count`", i + 1))
            })?;
            match value.trim().parse::<u64>() {
                Ok(c) => pairs.push((key.trim().to_string(), c)),
                Err(_) if pairs.is_empty() && i == 0 => continue,
                Err(_) => {
                    return Err(Error::Parse(format!(
                        "line {}: invalid count `{}`",
                        i + 1,
                        value.trim()
                    )))
                }
            }
        }
        CountsHistogram::from_pairs(pairs, reverse_bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<Label, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn probability(&self, label: Label) -> f64 {
        self.counts.get(&label).copied().unwrap_or(0) as f64 / self.total() as f64
    }

    /// Sum counts of histograms over the same qubits.
    pub fn pool(hists: &[CountsHistogram]) -> Result<CountsHistogram> {
        let first = hists
            .first()
            .ok_or_else(|| Error::Parameter("nothing to pool".into()))?;
        let mut counts = BTreeMap::new();
        for h in hists {
            if h.n != first.n {
                return Err(Error::Shape(format!(
                    "pooling {} and {} qubit histograms",
                    first.n, h.n
                )));
            }
            for (&l, &c) in &h.counts {
                *counts.entry(l).or_insert(0) += c;
            }
        }
        Ok(CountsHistogram { n: first.n, counts })
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(3..=20).contains(&n) {
        return Err(Error::Parameter(format!("need 3 <= n <= 20, got {n}")));
    }
    Ok(())
}

/// Weight-2 strings whose excitations sit on cyclically adjacent qubits.
pub fn signal_set(n: usize) -> Result<Vec<Label>> {
    check_n(n)?;
    let mut out: Vec<Label> = (0..n)
        .map(|i| (1u128 << (n - 1 - i)) | (1u128 << (n - 1 - (i + 1) % n)))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Non-signal strings grouped by weight, `k = 0..=n`.
pub fn noise_strata(n: usize) -> Result<Vec<Vec<Label>>> {
    let signal = signal_set(n)?;
    let mut strata = vec![Vec::new(); n + 1];
    for l in 0..(1u128 << n) {
        if signal.binary_search(&l).is_err() {
            strata[l.count_ones() as usize].push(l);
        }
    }
    Ok(strata)
}

pub fn signal_probability(h: &CountsHistogram) -> Result<f64> {
    Ok(signal_set(h.n())?
        .into_iter()
        .map(|l| h.probability(l))
        .sum())
}

/// Mean probability over each noise stratum, `None` for empty strata.
pub fn stratum_means(h: &CountsHistogram) -> Result<Vec<Option<f64>>> {
    Ok(noise_strata(h.n())?
        .into_iter()
        .map(|s| {
            if s.is_empty() {
                None
            } else {
                Some(s.iter().map(|&l| h.probability(l)).sum::<f64>() / s.len() as f64)
            }
        })
        .collect())
}

/// `alpha exp(-beta k) + gamma` fitted to the stratum means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseFit {
    pub means: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub fitted: Vec<f64>,
    /// `sum over k of (mean_k - fit_k)^2`.
    pub residual: f64,
    /// False when the refinement hit its iteration cap; the parameters are
    /// then the best point found.
    pub converged: bool,
}

pub fn model(alpha: f64, beta: f64, gamma: f64, k: usize) -> f64 {
    alpha * (-beta * k as f64).exp() + gamma
}

const BETA_MAX: f64 = 20.0;
const GRID: usize = 4000;
const MAX_ITER: usize = 500;

fn residual(means: &[f64], p: &[f64; 3]) -> f64 {
    means
        .iter()
        .enumerate()
        .map(|(k, m)| (m - model(p[0], p[1], p[2], k)).powi(2))
        .sum()
}

/// Best `(alpha, gamma) >= 0` for fixed `beta`, optionally with `gamma = 0`.
fn nnls_for_beta(means: &[f64], beta: f64, floor: bool) -> [f64; 3] {
    let x: Vec<f64> = (0..means.len()).map(|k| (-beta * k as f64).exp()).collect();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(means).map(|(a, b)| a * b).sum();
    let only_alpha = [(sxy / sxx).max(0.0), beta, 0.0];
    if !floor {
        return only_alpha;
    }
    let m = means.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = means.iter().sum();
    let only_gamma = [0.0, beta, (sy / m).max(0.0)];
    let mut candidates = vec![only_alpha, only_gamma];
    let det = sxx * m - sx * sx;
    if det.abs() > 1e-14 * sxx * m {
        let a = (sxy * m - sx * sy) / det;
        let g = (sxx * sy - sx * sxy) / det;
        if a >= 0.0 && g >= 0.0 {
            candidates.push([a, beta, g]);
        }
    }
    candidates
        .into_iter()
        .min_by(|p, q| residual(means, p).total_cmp(&residual(means, q)))
        .expect("nonempty")
}

/// Solve a small dense system by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * y;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Damped Gauss-Newton on the free parameters, projected onto `p >= 0`.
fn refine(means: &[f64], start: [f64; 3], floor: bool) -> ([f64; 3], bool) {
    let free: Vec<usize> = if floor { vec![0, 1, 2] } else { vec![0, 1] };
    let mut p = start;
    let mut best = residual(means, &p);
    let mut damping = 1e-3;
    for _ in 0..MAX_ITER {
        if best < 1e-30 {
            return (p, true);
        }
        let rows: Vec<(f64, [f64; 3])> = means
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let e = (-p[1] * k as f64).exp();
                (
                    m - model(p[0], p[1], p[2], k),
                    [e, -p[0] * k as f64 * e, 1.0],
                )
            })
            .collect();
        let dim = free.len();
        let mut jtj = vec![vec![0.0; dim]; dim];
        let mut jtr = vec![0.0; dim];
        for (r, grad) in &rows {
            for (i, &a) in free.iter().enumerate() {
                jtr[i] += grad[a] * r;
                for (j, &b) in free.iter().enumerate() {
                    jtj[i][j] += grad[a] * grad[b];
                }
            }
        }
        let grad_norm = jtr.iter().map(|x| x * x).sum::<f64>().sqrt();
        if grad_norm < 1e-18 {
            return (p, true);
        }
        let mut improved = false;
        while damping < 1e12 {
            let mut a = jtj.clone();
            for i in 0..dim {
                a[i][i] += damping * jtj[i][i].max(1e-12);
            }
            let Some(step) = solve(a, jtr.clone()) else {
                damping *= 10.0;
                continue;
            };
            let mut trial = p;
            for (i, &idx) in free.iter().enumerate() {
                trial[idx] = (trial[idx] + step[i]).max(0.0);
            }
            let r = residual(means, &trial);
            if r < best {
                let change = (best - r) / best.max(1e-300);
                p = trial;
                best = r;
                damping = (damping / 10.0).max(1e-12);
                improved = true;
                if change < 1e-14 {
                    return (p, true);
                }
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            // no descent direction left within the bounds
            return (p, true);
        }
    }
    (p, false)
}

fn fit(means: &[f64], floor: bool) -> Result<NoiseFit> {
    if means.len() < 2 || means.iter().any(|m| !m.is_finite() || *m < 0.0) {
        return Err(Error::Parameter(
            "need at least two finite nonnegative means".into(),
        ));
    }
    let start = (0..=GRID)
        .map(|i| nnls_for_beta(means, BETA_MAX * i as f64 / GRID as f64, floor))
        .min_by(|p, q| residual(means, p).total_cmp(&residual(means, q)))
        .expect("nonempty grid");
    let (p, converged) = refine(means, start, floor);
    let fitted: Vec<f64> = (0..means.len())
        .map(|k| model(p[0], p[1], p[2], k))
        .collect();
    Ok(NoiseFit {
        means: means.to_vec(),
        alpha: p[0],
        beta: p[1],
        gamma: p[2],
        residual: residual(means, &p),
        fitted,
        converged,
    })
}

/// Fit `alpha exp(-beta k) + gamma` with all parameters nonnegative over
/// `k = 0..means.len()`. The floorless optimum is feasible here too, so it
/// is also refined and the better of the two is kept.
pub fn fit_noise_model(means: &[f64]) -> Result<NoiseFit> {
    let grid = fit(means, true)?;
    let decay = fit(means, false)?;
    let start = [decay.alpha, decay.beta, 0.0];
    let (p, converged) = refine(means, start, true);
    if residual(means, &p) < grid.residual {
        let fitted = (0..means.len())
            .map(|k| model(p[0], p[1], p[2], k))
            .collect();
        return Ok(NoiseFit {
            means: means.to_vec(),
            alpha: p[0],
            beta: p[1],
            gamma: p[2],
            residual: residual(means, &p),
            fitted,
            converged,
        });
    }
    Ok(grid)
}

/// The same fit with the floor fixed at zero.
pub fn fit_decay_only(means: &[f64]) -> Result<NoiseFit> {
    fit(means, false)
}

/// Means of strata `0..n`, the ones entering the fit; the full-weight
/// stratum is left out.
pub fn fit_input(h: &CountsHistogram) -> Result<Vec<f64>> {
    let means = stratum_means(h)?;
    means[..h.n()]
        .iter()
        .enumerate()
        .map(|(k, m)| m.ok_or_else(|| Error::Precondition(format!("noise stratum {k} is empty"))))
        .collect()
}
