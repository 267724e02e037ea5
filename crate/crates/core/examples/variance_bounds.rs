//! Closed-form variance coefficients and bounds next to the analytic
//! variance they describe.
//!
//! ```text
//! cargo run --release --example variance_bounds
//! ```

use netexp::clustering::{cycle_block_clustering, exposure_weights, net3_clustering, ScanOrder};
use netexp::estimator::{variance_analytic, PotentialOutcomes};
use netexp::experiments::{
    asymptotic_cycle_variance, cycle_block_bound, net3_variance_upper_bound,
    vertex_randomization_variance_lower_bound,
};
use netexp::exposure::{ExposureKind, ProbabilityTable, TableOptions};
use netexp::graph::{gen_cycle_power, growth_report, Graph};
use netexp::clustering::Clustering;

fn analytic(g: &Graph, cl: &Clustering, p: f64) -> netexp::Result<f64> {
    let po = PotentialOutcomes::uniform(g.num_vertices(), 1.0, 0.0)?;
    let opts = TableOptions { joints: true, joint_fallback: None };
    let pt = ProbabilityTable::exact(g, cl, p, ExposureKind::FullNeighborhood, opts)?;
    Ok(variance_analytic(&po, &pt, &exposure_weights(g, cl)?)?.total)
}

fn main() -> netexp::Result<()> {
    let (n, p) = (1200, 0.5);
    println!("cycle, blocks of c: n * Var against the closed-form coefficient");
    let cycle = gen_cycle_power(n, 1)?;
    for c in 1..=8 {
        let v = n as f64 * analytic(&cycle, &cycle_block_clustering(n, c)?, p)?;
        println!("  c = {c}: {v:.4}  coefficient {:.4}", asymptotic_cycle_variance(c));
    }

    println!("cycle powers: vertex randomization lower bound, blocks of d + 1, 3-net");
    for k in 1..=4 {
        let d = 2 * k;
        let g = gen_cycle_power(n, k)?;
        let single = analytic(&g, &cycle_block_clustering(n, 1)?, p)?;
        let blocks = analytic(&g, &cycle_block_clustering(n, d + 1)?, p)?;
        let net = analytic(&g, &net3_clustering(&g, ScanOrder::ByIndex).clustering, p)?;
        let kappa = growth_report(&g, 6)?.kappa_hat;
        println!(
            "  d = {d}: vertex {single:.4} >= {:.4}; blocks {blocks:.5} <= {:.5}; 3-net {net:.5} <= {:.3e} (kappa {kappa:.3})",
            vertex_randomization_variance_lower_bound(d, p, 1.0, n)?,
            cycle_block_bound(d, p, 1.0, n)?,
            net3_variance_upper_bound(kappa, d, p, 1.0, n)?,
        );
    }
    Ok(())
}
