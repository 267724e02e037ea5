//! Cluster-randomized assignments, the Horvitz-Thompson effect estimate, and
//! its variance: analytic (from exposure and joint exposure probabilities)
//! and simulated.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{Clustering, ExposureWeights};
use crate::error::{check_probability, Error, Result};
use crate::exposure::{
    exposed_vertices, Arm, Assignment, ExposureEvaluator, ExposureKind, ProbabilityTable, TableOptions,
};
use crate::graph::Graph;
use crate::rng::{draw_coins, mix_seed, replicate_rng};

/// Responses of every vertex under network exposure to treatment and to
/// control. Only available in simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialOutcomes {
    y1: Vec<f64>,
    y0: Vec<f64>,
    bounds: Option<(f64, f64)>,
}

impl PotentialOutcomes {
    pub fn new(y1: Vec<f64>, y0: Vec<f64>) -> Result<Self> {
        if y1.len() != y0.len() {
            return Err(Error::param("y1 and y0 must have the same length"));
        }
        if let Some(v) = y1.iter().chain(&y0).position(|y| !y.is_finite()) {
            return Err(Error::param(format!(
                "non-finite potential outcome for vertex {}",
                v % y1.len().max(1)
            )));
        }
        Ok(PotentialOutcomes { y1, y0, bounds: None })
    }

    pub fn uniform(n: usize, y1: f64, y0: f64) -> Result<Self> {
        Self::new(vec![y1; n], vec![y0; n])
    }

    /// Declares `lo <= y <= hi` with `lo > 0` and checks every outcome.
    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && lo <= hi) {
            return Err(Error::param(format!("invalid response bounds [{lo}, {hi}]")));
        }
        for (v, (&a, &b)) in self.y1.iter().zip(&self.y0).enumerate() {
            if a < lo || a > hi || b < lo || b > hi {
                return Err(Error::param(format!("vertex {v} outcome outside [{lo}, {hi}]")));
            }
        }
        self.bounds = Some((lo, hi));
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.y1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y1.is_empty()
    }

    pub fn y1(&self) -> &[f64] {
        &self.y1
    }

    pub fn y0(&self) -> &[f64] {
        &self.y0
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    #[inline]
    pub fn response(&self, i: usize, arm: Arm) -> f64 {
        match arm {
            Arm::Treatment => self.y1[i],
            Arm::Control => self.y0[i],
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.y1.iter().map(|y| y * factor).collect(),
            self.y0.iter().map(|y| y * factor).collect(),
        )
    }
}

/// Average treatment effect `mean(y1) - mean(y0)`.
pub fn true_effect(po: &PotentialOutcomes) -> f64 {
    let n = po.len() as f64;
    po.y1.iter().sum::<f64>() / n - po.y0.iter().sum::<f64>() / n
}

/// One Bernoulli(`p`) coin per cluster, deterministic in `seed`.
pub fn sample_assignment(cl: &Clustering, p: f64, seed: u64) -> Result<Assignment> {
    check_probability(p)?;
    let mut coins = vec![false; cl.num_clusters()];
    draw_coins(&mut replicate_rng(seed, 0), p, &mut coins);
    Assignment::from_coins(cl, coins)
}

/// A realized experiment: the assignment, the responses that were observed,
/// and which vertices ended up network exposed to each arm.
#[derive(Clone, Debug)]
pub struct ObservedExperiment {
    pub assignment: Assignment,
    pub responses: Vec<Option<f64>>,
    pub exposed1: Vec<bool>,
    pub exposed0: Vec<bool>,
}

impl ObservedExperiment {
    /// Flags exposures under `kind` and checks every exposed vertex has a
    /// response.
    pub fn new(g: &Graph, assignment: Assignment, kind: ExposureKind, responses: Vec<Option<f64>>) -> Result<Self> {
        if assignment.len() != g.num_vertices() || responses.len() != g.num_vertices() {
            return Err(Error::param("assignment, responses and graph sizes disagree"));
        }
        let exposed1 = exposed_vertices(g, assignment.z(), kind, Arm::Treatment);
        let exposed0 = exposed_vertices(g, assignment.z(), kind, Arm::Control);
        for v in 0..g.num_vertices() {
            if (exposed1[v] || exposed0[v]) && responses[v].is_none() {
                return Err(Error::MissingResponse { vertex: v });
            }
        }
        Ok(ObservedExperiment {
            assignment,
            responses,
            exposed1,
            exposed0,
        })
    }

    /// Synthesizes the responses of exposed vertices from potential outcomes.
    pub fn simulate(g: &Graph, assignment: Assignment, kind: ExposureKind, po: &PotentialOutcomes) -> Result<Self> {
        let e1 = exposed_vertices(g, assignment.z(), kind, Arm::Treatment);
        let e0 = exposed_vertices(g, assignment.z(), kind, Arm::Control);
        let responses = (0..g.num_vertices())
            .map(|v| {
                if e1[v] {
                    Some(po.y1[v])
                } else if e0[v] {
                    Some(po.y0[v])
                } else {
                    None
                }
            })
            .collect();
        Self::new(g, assignment, kind, responses)
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmTotals {
    pub treatment: f64,
    pub control: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExposedCounts {
    pub treatment: usize,
    pub control: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectEstimate {
    pub tau_hat: f64,
    pub arm_totals: ArmTotals,
    pub exposed_counts: ExposedCounts,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variance_analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variance_mc: Option<f64>,
}

/// Horvitz-Thompson estimate
/// `τ̂ = (1/n) Σ_i [Y_i 1[i ∈ σ^1] / π_i^1 - Y_i 1[i ∈ σ^0] / π_i^0]`.
pub fn ht_estimate(obs: &ObservedExperiment, pt: &ProbabilityTable) -> Result<EffectEstimate> {
    let n = obs.len();
    if pt.num_vertices() != n {
        return Err(Error::param(format!(
            "probability table covers {} vertices, experiment has {n}",
            pt.num_vertices()
        )));
    }
    let mut totals = [0.0f64; 2];
    let mut counts = [0usize; 2];
    for i in 0..n {
        for (slot, arm, flagged) in [(0, Arm::Treatment, obs.exposed1[i]), (1, Arm::Control, obs.exposed0[i])] {
            if !flagged {
                continue;
            }
            let pi = pt.pi(i, arm);
            if !(pi > 0.0) {
                return Err(Error::ZeroProbability { vertex: i, arm });
            }
            let y = obs.responses[i].ok_or(Error::MissingResponse { vertex: i })?;
            totals[slot] += y / pi;
            counts[slot] += 1;
        }
    }
    let nf = n as f64;
    let arm_totals = ArmTotals {
        treatment: totals[0] / nf,
        control: totals[1] / nf,
    };
    Ok(EffectEstimate {
        tau_hat: arm_totals.treatment - arm_totals.control,
        arm_totals,
        exposed_counts: ExposedCounts {
            treatment: counts[0],
            control: counts[1],
        },
        variance_analytic: None,
        variance_mc: None,
    })
}

/// `Var[τ̂] = Var[Ŷ¹] + Var[Ŷ⁰] - 2 Cov[Ŷ¹, Ŷ⁰]`, term by term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceDecomposition {
    pub var_treatment: f64,
    pub var_control: f64,
    pub covariance: f64,
    pub total: f64,
    /// `(vertex, arm)` with zero exposure probability, left out of all sums.
    pub excluded: Vec<(usize, Arm)>,
}

/// Analytic variance of the HT estimator from potential outcomes, marginal
/// and joint exposure probabilities. Only structurally dependent pairs
/// (sharing a connected cluster) contribute to the double sums; each of them
/// must have a joint entry in `pt`.
pub fn variance_analytic(
    po: &PotentialOutcomes,
    pt: &ProbabilityTable,
    ew: &ExposureWeights,
) -> Result<VarianceDecomposition> {
    let n = po.len();
    if pt.num_vertices() != n || ew.num_vertices() != n {
        return Err(Error::param("outcomes, probability table and weights sizes disagree"));
    }
    let ok = |i: usize, arm: Arm| pt.pi(i, arm) > 0.0;

    let mut var = [0.0f64; 2];
    let mut cov = 0.0f64;
    for i in 0..n {
        for (slot, arm) in [(0, Arm::Treatment), (1, Arm::Control)] {
            if ok(i, arm) {
                let pi = pt.pi(i, arm);
                let y = po.response(i, arm);
                var[slot] += (1.0 - pi) / pi * y * y;
            }
        }
        if ok(i, Arm::Treatment) && ok(i, Arm::Control) {
            cov -= po.y1[i] * po.y0[i];
        }
    }

    let pairs = ew.dependent_pairs();
    let terms: Vec<[f64; 3]> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut t = [0.0; 3];
            let rel = |x: Arm, y: Arm| -> Result<Option<f64>> {
                if !ok(i, x) || !ok(j, y) {
                    return Ok(None);
                }
                let joint = pt.joint(i, j, x, y).ok_or(Error::MissingJoint { i, j })?;
                let prod = pt.pi(i, x) * pt.pi(j, y);
                Ok(Some((joint - prod) / prod * po.response(i, x) * po.response(j, y)))
            };
            // (i, j) and (j, i) both appear in the ordered double sums
            if let Some(v) = rel(Arm::Treatment, Arm::Treatment)? {
                t[0] = 2.0 * v;
            }
            if let Some(v) = rel(Arm::Control, Arm::Control)? {
                t[1] = 2.0 * v;
            }
            t[2] = rel(Arm::Treatment, Arm::Control)?.unwrap_or(0.0)
                + rel(Arm::Control, Arm::Treatment)?.unwrap_or(0.0);
            Ok(t)
        })
        .collect::<Result<_>>()?;
    for t in &terms {
        var[0] += t[0];
        var[1] += t[1];
        cov += t[2];
    }

    let scale = 1.0 / (n as f64 * n as f64);
    let (v1, v0, c) = (var[0] * scale, var[1] * scale, cov * scale);
    Ok(VarianceDecomposition {
        var_treatment: v1,
        var_control: v0,
        covariance: c,
        total: v1 + v0 - 2.0 * c,
        excluded: pt.zero_probability_vertices(),
    })
}

/// Summary of `τ̂` over simulated randomizations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceMc {
    pub replicates: u64,
    pub mean: f64,
    pub mean_stderr: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Large-sample standard error of the sample variance,
    /// `sqrt((m4 - m2²) / R)` from central moments.
    pub variance_stderr: f64,
}

impl VarianceMc {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let r = samples.len();
        if r < 2 {
            return Err(Error::param("variance needs at least two replicates"));
        }
        let rf = r as f64;
        let mean = samples.iter().sum::<f64>() / rf;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &x in samples {
            let d = (x - mean) * (x - mean);
            m2 += d;
            m4 += d * d;
        }
        let variance = m2 / (rf - 1.0);
        let (m2, m4) = (m2 / rf, m4 / rf);
        Ok(VarianceMc {
            replicates: r as u64,
            mean,
            mean_stderr: (variance / rf).sqrt(),
            variance,
            variance_stderr: ((m4 - m2 * m2).max(0.0) / rf).sqrt(),
        })
    }
}

const BATCH: u64 = 256;

/// `τ̂` for replicates `0..replicates`, replicate `r` drawn from stream
/// `(seed, r)`, in replicate order.
pub fn simulate_estimates(
    g: &Graph,
    cl: &Clustering,
    po: &PotentialOutcomes,
    pt: &ProbabilityTable,
    replicates: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = g.num_vertices();
    if po.len() != n || pt.num_vertices() != n {
        return Err(Error::param("outcomes, probability table and graph sizes disagree"));
    }
    let p = pt.p;
    check_probability(p)?;
    // inverse-weighted responses; NaN marks a zero-probability exposure
    let weighted = |arm: Arm| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let pi = pt.pi(i, arm);
                if pi > 0.0 {
                    po.response(i, arm) / pi
                } else {
                    f64::NAN
                }
            })
            .collect()
    };
    let (w1, w0) = (weighted(Arm::Treatment), weighted(Arm::Control));
    ExposureEvaluator::new(g, cl, pt.spec)?;

    let batches = replicates.div_ceil(BATCH);
    let chunks: Vec<Vec<f64>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut eval = ExposureEvaluator::new(g, cl, pt.spec).expect("validated");
            let mut coins = vec![false; cl.num_clusters()];
            let (mut t, mut c) = (vec![false; n], vec![false; n]);
            let mut out = Vec::with_capacity(BATCH as usize);
            for r in b * BATCH..((b + 1) * BATCH).min(replicates) {
                draw_coins(&mut replicate_rng(seed, r), p, &mut coins);
                eval.evaluate(&coins, &mut t, &mut c);
                let mut total = 0.0;
                for i in 0..n {
                    if t[i] {
                        total += w1[i];
                    } else if c[i] {
                        total -= w0[i];
                    }
                }
                out.push(total / n as f64);
            }
            out
        })
        .collect();
    let estimates: Vec<f64> = chunks.into_iter().flatten().collect();
    if let Some(r) = estimates.iter().position(|x| x.is_nan()) {
        // rerun the offending replicate to name the vertex
        let mut eval = ExposureEvaluator::new(g, cl, pt.spec)?;
        let mut coins = vec![false; cl.num_clusters()];
        let (mut t, mut c) = (vec![false; n], vec![false; n]);
        draw_coins(&mut replicate_rng(seed, r as u64), p, &mut coins);
        eval.evaluate(&coins, &mut t, &mut c);
        let (vertex, arm) = (0..n)
            .find_map(|i| {
                if t[i] && w1[i].is_nan() {
                    Some((i, Arm::Treatment))
                } else if c[i] && w0[i].is_nan() {
                    Some((i, Arm::Control))
                } else {
                    None
                }
            })
            .expect("a NaN estimate comes from a zero-probability exposure");
        return Err(Error::ZeroProbability { vertex, arm });
    }
    Ok(estimates)
}

/// Sample mean and variance of `τ̂` over `replicates` simulated cluster
/// randomizations. Neighborhood conditions use exact probabilities; other
/// conditions estimate them first from an independent set of streams.
pub fn variance_mc(
    g: &Graph,
    cl: &Clustering,
    po: &PotentialOutcomes,
    p: f64,
    kind: ExposureKind,
    replicates: u64,
    seed: u64,
) -> Result<VarianceMc> {
    check_probability(p)?;
    if replicates < 2 {
        return Err(Error::param("variance needs at least two replicates"));
    }
    let pt = if kind.is_neighborhood() {
        ProbabilityTable::exact(g, cl, p, kind, TableOptions::default())?
    } else {
        ProbabilityTable::monte_carlo(g, cl, p, kind, replicates, mix_seed(seed, 0x5eed), false)?
    };
    VarianceMc::from_samples(&simulate_estimates(g, cl, po, &pt, replicates, seed)?)
}

/// Reads `vertex y1 y0` lines; every vertex below `n` must appear once.
pub fn load_potential_outcomes(path: impl AsRef<Path>, n: usize) -> Result<PotentialOutcomes> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = parse_rows::<2>(&text, n)?;
    let (mut y1, mut y0) = (vec![0.0; n], vec![0.0; n]);
    for (v, row) in rows.into_iter().enumerate() {
        let [a, b] = row.ok_or(Error::MissingVertex { vertex: v })?;
        y1[v] = a;
        y0[v] = b;
    }
    PotentialOutcomes::new(y1, y0)
}

/// Reads `vertex y` lines; vertices without a line have no observed response.
pub fn load_observed_responses(path: impl AsRef<Path>, n: usize) -> Result<Vec<Option<f64>>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_rows::<1>(&text, n)?.into_iter().map(|r| r.map(|[y]| y)).collect())
}

fn parse_rows<const K: usize>(text: &str, n: usize) -> Result<Vec<Option<[f64; K]>>> {
    let mut rows = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Parse {
            line: idx + 1,
            message: format!("expected `vertex` followed by {K} numbers, got `{line}`"),
        };
        let mut fields = line.split_whitespace();
        let v: usize = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
        let mut vals = [0.0; K];
        for slot in vals.iter_mut() {
            *slot = fields
                .next()
                .and_then(|f| f.parse::<f64>().ok())
                .filter(|y| y.is_finite())
                .ok_or_else(bad)?;
        }
        if fields.next().is_some() {
            return Err(bad());
        }
        if v >= n {
            return Err(Error::VertexOutOfRange {
                line: idx + 1,
                id: v,
                num_vertices: n,
            });
        }
        if rows[v].replace(vals).is_some() {
            return Err(Error::DuplicateVertex { vertex: v });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{cycle_block_clustering, exposure_weights, singleton_clustering};
    use crate::exposure::{JointEntry, Method, VertexProbability};
    use crate::graph::gen_cycle;

    #[test]
    fn true_effect_examples() {
        assert_eq!(true_effect(&PotentialOutcomes::uniform(4, 2.5, 0.0).unwrap()), 2.5);
        assert_eq!(true_effect(&PotentialOutcomes::new(vec![1.0, 3.0], vec![1.0, 3.0]).unwrap()), 0.0);
        let po = PotentialOutcomes::new(vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(true_effect(&po), 1.0);
    }

    #[test]
    fn outcome_validation() {
        assert!(PotentialOutcomes::new(vec![1.0], vec![]).is_err());
        assert!(PotentialOutcomes::new(vec![f64::NAN], vec![0.0]).is_err());
        let po = PotentialOutcomes::new(vec![1.0, 2.0], vec![1.5, 1.0]).unwrap();
        assert!(po.clone().with_bounds(1.0, 2.0).is_ok());
        assert!(po.clone().with_bounds(1.1, 2.0).is_err());
        assert!(po.with_bounds(0.0, 2.0).is_err());
    }

    fn table(pi1: &[f64], pi0: &[f64]) -> ProbabilityTable {
        let vertices = pi1
            .iter()
            .zip(pi0)
            .map(|(&a, &b)| VertexProbability {
                pi1: a,
                pi0: b,
                method: Method::Exact,
                stderr1: None,
                stderr0: None,
            })
            .collect();
        ProbabilityTable::new(ExposureKind::FullNeighborhood, 0.5, vertices, Vec::new()).unwrap()
    }

    #[test]
    fn ht_arithmetic() {
        let cl = singleton_clustering(2);
        let obs = ObservedExperiment {
            assignment: Assignment::from_coins(&cl, vec![true, true]).unwrap(),
            responses: vec![Some(1.0), Some(1.0)],
            exposed1: vec![true, true],
            exposed0: vec![false, false],
        };
        let est = ht_estimate(&obs, &table(&[0.5, 0.5], &[0.5, 0.5])).unwrap();
        assert_eq!(est.tau_hat, 2.0);
        assert_eq!(est.exposed_counts, ExposedCounts { treatment: 2, control: 0 });

        let none = ObservedExperiment {
            exposed1: vec![false, false],
            ..obs.clone()
        };
        assert_eq!(ht_estimate(&none, &table(&[0.5, 0.5], &[0.5, 0.5])).unwrap().tau_hat, 0.0);

        let err = ht_estimate(&obs, &table(&[0.5, 0.0], &[0.5, 0.5])).unwrap_err();
        assert!(matches!(err, Error::ZeroProbability { vertex: 1, arm: Arm::Treatment }));
    }

    #[test]
    fn observed_experiment_requires_responses() {
        let g = gen_cycle(4).unwrap();
        let cl = singleton_clustering(4);
        let a = Assignment::from_coins(&cl, vec![true; 4]).unwrap();
        let err = ObservedExperiment::new(&g, a, ExposureKind::FullNeighborhood, vec![Some(1.0), None, Some(1.0), Some(1.0)]);
        assert!(matches!(err, Err(Error::MissingResponse { vertex: 1 })));
    }

    #[test]
    fn sample_assignment_is_deterministic() {
        let cl = cycle_block_clustering(30, 3).unwrap();
        let a = sample_assignment(&cl, 0.4, 17).unwrap();
        assert_eq!(a, sample_assignment(&cl, 0.4, 17).unwrap());
        assert!(sample_assignment(&cl, 0.0, 17).is_err());
        let one = crate::clustering::Clustering::from_assignment(vec![0; 9]).unwrap();
        let z = sample_assignment(&one, 0.5, 3).unwrap();
        assert!(z.z().iter().all(|&b| b == z.z()[0]));
    }

    #[test]
    fn treated_cluster_fraction_is_p() {
        let cl = singleton_clustering(10_000);
        let a = sample_assignment(&cl, 0.3, 5).unwrap();
        let frac = a.cluster_coins().iter().filter(|&&c| c).count() as f64 / 1e4;
        let sd = (0.3f64 * 0.7 / 1e4).sqrt();
        assert!((frac - 0.3).abs() < 4.0 * sd, "{frac}");
    }

    #[test]
    fn missing_joint_is_reported() {
        let g = gen_cycle(6).unwrap();
        let cl = singleton_clustering(6);
        let ew = exposure_weights(&g, &cl).unwrap();
        let pt = ProbabilityTable::exact(&g, &cl, 0.5, ExposureKind::FullNeighborhood, TableOptions::default()).unwrap();
        let po = PotentialOutcomes::uniform(6, 1.0, 0.0).unwrap();
        assert!(matches!(variance_analytic(&po, &pt, &ew), Err(Error::MissingJoint { .. })));
    }

    #[test]
    fn zero_probability_vertices_are_excluded_from_variance() {
        let g = gen_cycle(5).unwrap();
        let cl = singleton_clustering(5);
        let ew = exposure_weights(&g, &cl).unwrap();
        let opts = TableOptions {
            joints: true,
            ..Default::default()
        };
        let mut pt = ProbabilityTable::exact(&g, &cl, 0.5, ExposureKind::FullNeighborhood, opts).unwrap();
        pt.vertices[2].pi0 = 0.0;
        let po = PotentialOutcomes::uniform(5, 1.0, 1.0).unwrap();
        let dec = variance_analytic(&po, &pt, &ew).unwrap();
        assert_eq!(dec.excluded, vec![(2, Arm::Control)]);
        assert!(dec.total.is_finite());
    }

    #[test]
    fn variance_from_samples() {
        let s = VarianceMc::from_samples(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!(VarianceMc::from_samples(&[1.0]).is_err());
    }

    #[test]
    fn simulation_detects_zero_probability_exposure() {
        let g = gen_cycle(5).unwrap();
        let cl = singleton_clustering(5);
        let mut pt = ProbabilityTable::exact(&g, &cl, 0.5, ExposureKind::AbsoluteK(1), TableOptions::default()).unwrap();
        pt.vertices[3].pi1 = 0.0;
        let po = PotentialOutcomes::uniform(5, 1.0, 0.0).unwrap();
        let err = simulate_estimates(&g, &cl, &po, &pt, 200, 1).unwrap_err();
        assert!(matches!(err, Error::ZeroProbability { vertex: 3, arm: Arm::Treatment }));
    }

    #[test]
    fn response_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("po.txt");
        fs::write(&path, "# vertex y1 y0\n1 2.0 0.5\n0 1 0\n").unwrap();
        let po = load_potential_outcomes(&path, 2).unwrap();
        assert_eq!(po.y1(), &[1.0, 2.0]);
        assert!(matches!(load_potential_outcomes(&path, 3), Err(Error::MissingVertex { vertex: 2 })));
        fs::write(&path, "2 4.5\n").unwrap();
        assert_eq!(load_observed_responses(&path, 3).unwrap(), vec![None, None, Some(4.5)]);
        fs::write(&path, "0 1 2 3\n").unwrap();
        assert!(matches!(load_potential_outcomes(&path, 1), Err(Error::Parse { line: 1, .. })));
        let _ = JointEntry {
            i: 0,
            j: 1,
            p11: 0.0,
            p10: 0.0,
            p01: 0.0,
            p00: 0.0,
            method: Method::Exact,
        };
    }
}
