use rayon::prelude::*;

use super::{ExposureEvaluator, ExposureKind};
use crate::clustering::Clustering;
use crate::error::{check_probability, Error, Result};
use crate::graph::Graph;
use crate::rng::{draw_coins, replicate_rng};

const BATCH: u64 = 512;

/// Frequency estimates of exposure probabilities from sampled randomizations.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub replicates: u64,
    pub pi1: Vec<f64>,
    pub pi0: Vec<f64>,
    pub stderr1: Vec<f64>,
    pub stderr0: Vec<f64>,
    /// For each requested pair, the frequencies `[11, 10, 01, 00]`.
    pub joint: Vec<[f64; 4]>,
}

#[derive(Clone)]
struct Counts {
    treated: Vec<u64>,
    control: Vec<u64>,
    joint: Vec<[u64; 4]>,
}

impl Counts {
    fn zeros(n: usize, pairs: usize) -> Self {
        Counts {
            treated: vec![0; n],
            control: vec![0; n],
            joint: vec![[0; 4]; pairs],
        }
    }

    fn merge(mut self, other: Counts) -> Counts {
        for (a, b) in self.treated.iter_mut().zip(&other.treated) {
            *a += b;
        }
        for (a, b) in self.control.iter_mut().zip(&other.control) {
            *a += b;
        }
        for (a, b) in self.joint.iter_mut().zip(&other.joint) {
            for k in 0..4 {
                a[k] += b[k];
            }
        }
        self
    }
}

/// Estimates `π_i^1`, `π_i^0` for every vertex (and joint probabilities for
/// `pairs`) by sampling `replicates` cluster randomizations. Replicate `r`
/// uses stream `(seed, r)`; counts are integers, so the result is identical
/// however the replicates are scheduled.
pub fn exposure_probability_mc(
    g: &Graph,
    cl: &Clustering,
    p: f64,
    kind: ExposureKind,
    replicates: u64,
    seed: u64,
    pairs: &[(usize, usize)],
) -> Result<McEstimate> {
    check_probability(p)?;
    if replicates == 0 {
        return Err(Error::param("Monte Carlo needs at least one replicate"));
    }
    let n = g.num_vertices();
    for &(i, j) in pairs {
        g.check_vertex(i)?;
        g.check_vertex(j)?;
    }
    // validates the clustering against the graph up front
    ExposureEvaluator::new(g, cl, kind)?;

    let batches = replicates.div_ceil(BATCH);
    let counts = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut eval = ExposureEvaluator::new(g, cl, kind).expect("validated");
            let mut counts = Counts::zeros(n, pairs.len());
            let mut coins = vec![false; cl.num_clusters()];
            let (mut t, mut c) = (vec![false; n], vec![false; n]);
            for r in b * BATCH..((b + 1) * BATCH).min(replicates) {
                draw_coins(&mut replicate_rng(seed, r), p, &mut coins);
                eval.evaluate(&coins, &mut t, &mut c);
                for v in 0..n {
                    counts.treated[v] += u64::from(t[v]);
                    counts.control[v] += u64::from(c[v]);
                }
                for (slot, &(i, j)) in counts.joint.iter_mut().zip(pairs) {
                    slot[0] += u64::from(t[i] && t[j]);
                    slot[1] += u64::from(t[i] && c[j]);
                    slot[2] += u64::from(c[i] && t[j]);
                    slot[3] += u64::from(c[i] && c[j]);
                }
            }
            counts
        })
        .reduce(|| Counts::zeros(n, pairs.len()), Counts::merge);

    let r = replicates as f64;
    let freq = |x: &u64| *x as f64 / r;
    let se = |pi: &f64| (pi * (1.0 - pi) / r).sqrt();
    let pi1: Vec<f64> = counts.treated.iter().map(freq).collect();
    let pi0: Vec<f64> = counts.control.iter().map(freq).collect();
    Ok(McEstimate {
        replicates,
        stderr1: pi1.iter().map(se).collect(),
        stderr0: pi0.iter().map(se).collect(),
        pi1,
        pi0,
        joint: counts.joint.iter().map(|c| c.map(|x| freq(&x))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{exposure_weights, singleton_clustering};
    use crate::exposure::{exposure_probability_exact, Arm, ExposureSpec};
    use crate::graph::gen_cycle;

    #[test]
    fn deterministic_and_close_to_exact() {
        let g = gen_cycle(10).unwrap();
        let cl = singleton_clustering(10);
        let a = exposure_probability_mc(&g, &cl, 0.5, ExposureKind::FullNeighborhood, 20_000, 3, &[(0, 1)]).unwrap();
        let b = exposure_probability_mc(&g, &cl, 0.5, ExposureKind::FullNeighborhood, 20_000, 3, &[(0, 1)]).unwrap();
        assert_eq!(a, b);
        let ew = exposure_weights(&g, &cl).unwrap();
        for i in 0..10 {
            let spec = ExposureSpec::new(ExposureKind::FullNeighborhood, Arm::Treatment);
            let exact = exposure_probability_exact(ew.vertex(i), 0.5, spec).unwrap();
            assert!((a.pi1[i] - exact).abs() < 4.0 * a.stderr1[i]);
        }
        assert!((a.joint[0][0] - 1.0 / 16.0).abs() < 0.01);
        assert_eq!(a.joint[0][1], 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = gen_cycle(5).unwrap();
        let cl = singleton_clustering(5);
        assert!(exposure_probability_mc(&g, &cl, 0.5, ExposureKind::Component, 0, 1, &[]).is_err());
        assert!(exposure_probability_mc(&g, &cl, 1.0, ExposureKind::Component, 10, 1, &[]).is_err());
        assert!(exposure_probability_mc(&g, &cl, 0.5, ExposureKind::Component, 10, 1, &[(0, 9)]).is_err());
    }
}
