//! Which vertices are network exposed under each condition for a single
//! cluster randomization, including the core-based conditions.
//!
//! ```text
//! cargo run --release --example core_exposure
//! ```

use netexp::clustering::{net3_clustering, ScanOrder};
use netexp::estimator::sample_assignment;
use netexp::exposure::{exposed_vertices, Arm, ExposureKind};
use netexp::graph::{fractional_q_core, gen_random_geometric, heterogeneous_k_core, VertexSet};

fn main() -> netexp::Result<()> {
    let g = gen_random_geometric(500, 0.08, 2, 3)?;
    let cl = net3_clustering(&g, ScanOrder::ByIndex).clustering;
    let a = sample_assignment(&cl, 0.5, 42)?;
    let treated = VertexSet::from_mask(a.z());
    println!("{} vertices, {} clusters, {} treated", g.num_vertices(), cl.num_clusters(), treated.len());

    // the 2-core of the treated subgraph, computed directly
    let thresholds: Vec<usize> = (0..g.num_vertices())
        .map(|v| if a.z()[v] { g.degree(v).min(2) } else { usize::MAX })
        .collect();
    println!("treated 2-core: {} vertices", heterogeneous_k_core(&g, &thresholds).len());
    println!("treated 0.5-core: {} vertices", fractional_q_core(&g, &treated, 0.5).len());

    let kinds = [
        "full", "abs:1", "abs:3", "frac:0.5", "frac:0.75", "component", "kcore:1", "kcore:3", "fqcore:0.5",
        "fqcore:1",
    ];
    println!("{:<12} {:>9} {:>9}", "condition", "treated", "control");
    for spec in kinds {
        let kind: ExposureKind = spec.parse()?;
        let count = |arm| exposed_vertices(&g, a.z(), kind, arm).iter().filter(|&&b| b).count();
        println!("{spec:<12} {:>9} {:>9}", count(Arm::Treatment), count(Arm::Control));
    }
    Ok(())
}
