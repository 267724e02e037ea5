//! One simulated experiment end to end: cluster, randomize, observe the
//! responses of exposed vertices, and form the Horvitz-Thompson estimate.
//!
//! ```text
//! cargo run --release --example ht_estimation
//! ```

use netexp::clustering::{exposure_weights, net3_clustering, ScanOrder};
use netexp::estimator::{
    ht_estimate, sample_assignment, true_effect, variance_analytic, variance_mc, ObservedExperiment,
    PotentialOutcomes,
};
use netexp::exposure::{ExposureKind, ProbabilityTable, TableOptions};
use netexp::graph::gen_random_geometric;

fn main() -> netexp::Result<()> {
    let n = 1000;
    let g = gen_random_geometric(n, 0.06, 2, 5)?;
    let cl = net3_clustering(&g, ScanOrder::ByIndex).clustering;
    let kind = ExposureKind::FractionalQ(0.75);
    let p = 0.5;

    // responses grow with degree under treatment, so the effect is heterogeneous
    let y1: Vec<f64> = (0..n).map(|v| 2.0 + 0.1 * g.degree(v) as f64).collect();
    let po = PotentialOutcomes::new(y1, vec![1.0; n])?;
    let pt = ProbabilityTable::exact(&g, &cl, p, kind, TableOptions { joints: true, joint_fallback: None })?;

    let a = sample_assignment(&cl, p, 2024)?;
    let obs = ObservedExperiment::simulate(&g, a, kind, &po)?;
    let est = ht_estimate(&obs, &pt)?;
    println!(
        "exposed: {} treated, {} control of {n}",
        est.exposed_counts.treatment, est.exposed_counts.control
    );
    println!("tau_hat = {:.4}, true effect = {:.4}", est.tau_hat, true_effect(&po));

    let analytic = variance_analytic(&po, &pt, &exposure_weights(&g, &cl)?)?;
    let mc = variance_mc(&g, &cl, &po, p, kind, 20_000, 7)?;
    println!(
        "Var: analytic {:.5} (treatment {:.5}, control {:.5}, covariance {:.5}); simulated {:.5} +/- {:.5}",
        analytic.total, analytic.var_treatment, analytic.var_control, analytic.covariance, mc.variance, mc.variance_stderr
    );
    println!("mean of tau_hat over simulations: {:.4} +/- {:.4}", mc.mean, mc.mean_stderr);
    Ok(())
}
