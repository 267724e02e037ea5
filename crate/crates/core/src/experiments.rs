//! Cycle-power variance sweeps and the closed-form variance constants and
//! bounds they are checked against.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::cycle_block_clustering;
use crate::error::{check_probability, Error, Result};
use crate::estimator::{variance_mc, PotentialOutcomes};
use crate::exposure::ExposureKind;
use crate::graph::gen_cycle_power;
use crate::rng::mix_seed;

/// Coefficient of `Ȳ²/n` in the asymptotic variance for the cycle with
/// contiguous blocks of `c` vertices, full neighborhood exposure, `p = 1/2`,
/// `y1 = Ȳ`, `y0 = 0`: `15/2` for `c = 1` and `c/2 + 2 + 4/c` otherwise.
pub fn asymptotic_cycle_variance(c: usize) -> f64 {
    assert!(c >= 1, "cluster size must be positive");
    if c == 1 {
        7.5
    } else {
        let c = c as f64;
        c / 2.0 + 2.0 + 4.0 / c
    }
}

/// Lower bound for full-neighborhood exposure under vertex randomization of
/// a `d`-regular graph: `(Y_m² / n)(p^-(d+1) + (1-p)^-(d+1) - 2)`.
pub fn vertex_randomization_variance_lower_bound(d: usize, p: f64, y_min: f64, n: usize) -> Result<f64> {
    check_probability(p)?;
    if !(y_min > 0.0) {
        return Err(Error::param("the response lower bound must be positive"));
    }
    let e = -(d as f64 + 1.0);
    Ok(y_min * y_min / n as f64 * (p.powf(e) + (1.0 - p).powf(e) - 2.0))
}

/// Upper bound for 3-net cluster randomization of a restricted-growth graph
/// with growth constant `kappa`: the treatment-arm bound
/// `Y_M² [(p^-κ³ - 1) + κ⁵ (d+1)(p^(-2κ³-1) - 1)] / n`, the same with
/// `1 - p` for control, plus the covariance bound `2 Y_M² [κ⁵ (d+1) + 1] / n`.
pub fn net3_variance_upper_bound(kappa: f64, d: usize, p: f64, y_max: f64, n: usize) -> Result<f64> {
    check_probability(p)?;
    if !(kappa >= 1.0) {
        return Err(Error::param("growth constant must be at least 1"));
    }
    let k3 = kappa.powi(3);
    let k5d = kappa.powi(5) * (d as f64 + 1.0);
    let arm = |q: f64| (q.powf(-k3) - 1.0) + k5d * (q.powf(-2.0 * k3 - 1.0) - 1.0);
    let scale = y_max * y_max / n as f64;
    Ok(scale * (arm(p) + arm(1.0 - p) + 2.0 * (k5d + 1.0)))
}

/// Bound for contiguous blocks of `c = d + 1` on the `d`-regular cycle
/// power: `Y_M² (p^-2 - 1)(3d + 2) / n`.
pub fn cycle_block_bound(d: usize, p: f64, y_max: f64, n: usize) -> Result<f64> {
    check_probability(p)?;
    Ok(y_max * y_max * (p.powi(-2) - 1.0) * (3.0 * d as f64 + 2.0) / n as f64)
}

/// A grid of `(k, c)` cells on cycle powers with contiguous block clusters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: usize,
    pub ks: Vec<usize>,
    pub cs: Vec<usize>,
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_spec")]
    pub spec: ExposureKind,
    #[serde(default = "default_y1")]
    pub y1: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    pub seed: u64,
}

fn default_p() -> f64 {
    0.5
}
fn default_spec() -> ExposureKind {
    ExposureKind::FullNeighborhood
}
fn default_y1() -> f64 {
    1.0
}
fn default_replicates() -> u64 {
    100_000
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        self.spec.validate()?;
        if self.ks.is_empty() || self.cs.is_empty() {
            return Err(Error::param("sweep needs at least one k and one c"));
        }
        for &k in &self.ks {
            if k == 0 || self.n <= 2 * k {
                return Err(Error::param(format!("k = {k} invalid for n = {}", self.n)));
            }
        }
        for &c in &self.cs {
            if c == 0 || c > self.n {
                return Err(Error::param(format!("c = {c} invalid for n = {}", self.n)));
            }
        }
        if self.replicates < 2 {
            return Err(Error::param("sweep needs at least two replicates per cell"));
        }
        Ok(())
    }

    /// Parses a flat `key = value` file (TOML syntax).
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| Error::param(format!("sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_toml(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    /// Seed of the `(k, c)` cell, independent of the rest of the grid.
    pub fn cell_seed(&self, k: usize, c: usize) -> u64 {
        mix_seed(mix_seed(self.seed, k as u64), c as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub c: usize,
    pub n: usize,
    pub p: f64,
    pub replicates: u64,
    pub var: f64,
    pub var_stderr: f64,
    pub mean: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn row(&self, k: usize, c: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.k == k && r.c == c)
    }

    /// Row with the smallest simulated variance for a given `k`.
    pub fn argmin(&self, k: usize) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.k == k)
            .min_by(|a, b| a.var.total_cmp(&b.var))
    }

    /// CSV with header `k,c,n,p,replicates,var,var_stderr,mean,seed`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(file)
    }
}

/// Simulated variance of `τ̂` for every `(k, c)` cell: the `k`th cycle
/// power on `n` vertices, contiguous blocks of `c`, uniform responses.
/// Cells run in parallel with seeds derived from `(seed, k, c)`; rows come
/// out in `ks` x `cs` order.
pub fn cycle_power_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = cfg
        .ks
        .iter()
        .flat_map(|&k| cfg.cs.iter().map(move |&c| (k, c)))
        .collect();
    let po = PotentialOutcomes::uniform(cfg.n, cfg.y1, cfg.y0)?;
    let rows = cells
        .par_iter()
        .map(|&(k, c)| {
            let g = gen_cycle_power(cfg.n, k)?;
            let cl = cycle_block_clustering(cfg.n, c)?;
            let seed = cfg.cell_seed(k, c);
            let stats = variance_mc(&g, &cl, &po, cfg.p, cfg.spec, cfg.replicates, seed)?;
            Ok(SweepRow {
                k,
                c,
                n: cfg.n,
                p: cfg.p,
                replicates: cfg.replicates,
                var: stats.variance,
                var_stderr: stats.variance_stderr,
                mean: stats.mean,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Least-squares line through `(x, y)`: `(slope, intercept, r²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, my - slope * mx, r2)
}
