//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use netexp::clustering::Clustering;
use netexp::exposure::{exposed_vertices, Arm, ExposureKind, ProbabilityTable};
use netexp::estimator::PotentialOutcomes;
use netexp::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub graph: Graph,
    pub clustering: Clustering,
}

/// Random graph on `n` vertices with edge probability `density`, and a random
/// partition into at most `max_clusters` clusters.
pub fn random_fixture(rng: &mut ChaCha8Rng, n: usize, density: f64, max_clusters: usize) -> Fixture {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < density {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(n, edges).unwrap();
    let k = rng.gen_range(1..=max_clusters.min(n));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Fixture {
        graph,
        clustering: Clustering::from_labels(&labels),
    }
}

/// `count` fixtures with 2..=12 vertices and at most 8 clusters.
pub fn small_fixtures(count: usize, seed: u64) -> Vec<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=12);
            let density = rng.gen_range(0.15..0.7);
            random_fixture(&mut rng, n, density, 8)
        })
        .collect()
}

/// Neighborhood conditions used by the oracle checks: full, `abs:k` for
/// `k = 1..=max_degree`, and `frac:q` for q in {1/4, 1/2, 3/4, 1}.
pub fn neighborhood_kinds(g: &Graph) -> Vec<ExposureKind> {
    let mut kinds = vec![ExposureKind::FullNeighborhood];
    kinds.extend((1..=g.max_degree().max(1)).map(ExposureKind::AbsoluteK));
    kinds.extend([0.25, 0.5, 0.75, 1.0].map(ExposureKind::FractionalQ));
    kinds
}

/// Every cluster-coin outcome with its probability and the exposure flags
/// of both arms, computed directly from vertex bits.
pub struct Outcome {
    pub weight: f64,
    pub treated: Vec<bool>,
    pub control: Vec<bool>,
}

pub fn enumerate_outcomes(fx: &Fixture, kind: ExposureKind, p: f64) -> Vec<Outcome> {
    let nc = fx.clustering.num_clusters();
    assert!(nc <= 16, "too many clusters to enumerate");
    (0u32..1 << nc)
        .map(|mask| {
            let coins: Vec<bool> = (0..nc).map(|c| mask >> c & 1 == 1).collect();
            let weight = coins.iter().map(|&b| if b { p } else { 1.0 - p }).product();
            let z: Vec<bool> = fx.clustering.assignment().iter().map(|&c| coins[c]).collect();
            Outcome {
                weight,
                treated: exposed_vertices(&fx.graph, &z, kind, Arm::Treatment),
                control: exposed_vertices(&fx.graph, &z, kind, Arm::Control),
            }
        })
        .collect()
}

pub fn flags(o: &Outcome, arm: Arm) -> &[bool] {
    match arm {
        Arm::Treatment => &o.treated,
        Arm::Control => &o.control,
    }
}

pub fn oracle_marginal(outcomes: &[Outcome], i: usize, arm: Arm) -> f64 {
    outcomes.iter().filter(|o| flags(o, arm)[i]).map(|o| o.weight).sum()
}

pub fn oracle_joint(outcomes: &[Outcome], i: usize, x: Arm, j: usize, y: Arm) -> f64 {
    outcomes
        .iter()
        .filter(|o| flags(o, x)[i] && flags(o, y)[j])
        .map(|o| o.weight)
        .sum()
}

/// HT estimate for one outcome, straight from the definition.
pub fn tau_hat(o: &Outcome, po: &PotentialOutcomes, pt: &ProbabilityTable) -> f64 {
    let n = po.len();
    let mut total = 0.0;
    for i in 0..n {
        if o.treated[i] {
            total += po.y1()[i] / pt.pi(i, Arm::Treatment);
        }
        if o.control[i] {
            total -= po.y0()[i] / pt.pi(i, Arm::Control);
        }
    }
    total / n as f64
}

/// Exact mean and variance of the estimator over all outcomes.
pub fn enumerated_moments(outcomes: &[Outcome], po: &PotentialOutcomes, pt: &ProbabilityTable) -> (f64, f64) {
    let values: Vec<(f64, f64)> = outcomes.iter().map(|o| (o.weight, tau_hat(o, po, pt))).collect();
    let mean: f64 = values.iter().map(|(w, t)| w * t).sum();
    let var: f64 = values.iter().map(|(w, t)| w * (t - mean).powi(2)).sum();
    (mean, var)
}

pub fn random_outcomes(rng: &mut ChaCha8Rng, n: usize) -> PotentialOutcomes {
    let y1 = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
    let y0 = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
    PotentialOutcomes::new(y1, y0).unwrap()
}
