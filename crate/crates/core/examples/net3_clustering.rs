//! 3-net clustering of a random geometric graph: separation of centers,
//! cluster radius, and how many clusters a vertex neighborhood can touch.
//!
//! ```text
//! cargo run --release --example net3_clustering [scan-seed]
//! ```

use netexp::clustering::{net3_clustering, write_clustering, ScanOrder};
use netexp::graph::{ball, bfs_distances, gen_random_geometric, growth_report};

fn main() -> netexp::Result<()> {
    let scan = match std::env::args().nth(1) {
        Some(s) => ScanOrder::Random {
            seed: s.parse().map_err(|_| netexp::Error::InvalidParameter(format!("bad seed `{s}`")))?,
        },
        None => ScanOrder::ByIndex,
    };
    let g = gen_random_geometric(2000, 0.05, 2, 8)?;
    let trace = net3_clustering(&g, scan);
    let cl = &trace.clustering;
    let sizes = cl.cluster_sizes();
    println!(
        "{} clusters, sizes {}..={}, mean {:.2}",
        cl.num_clusters(),
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap(),
        g.num_vertices() as f64 / cl.num_clusters() as f64
    );

    let mut min_separation = usize::MAX;
    let mut max_radius = 0;
    for (j, &c) in trace.centers.iter().enumerate() {
        let dist = bfs_distances(&g, c)?;
        for &other in trace.centers.iter().filter(|&&o| o != c) {
            min_separation = min_separation.min(dist[other]);
        }
        max_radius = cl.members(j).iter().map(|&v| dist[v]).fold(max_radius, usize::max);
    }
    println!("closest pair of centers at distance {min_separation}, largest cluster radius {max_radius}");

    let kappa = growth_report(&g, 6)?.kappa_hat;
    let touched = (0..g.num_vertices())
        .map(|w| {
            let mut seen: Vec<usize> = ball(&g, w, 1).unwrap().iter().map(|v| cl.cluster_of(v)).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        })
        .max()
        .unwrap_or(0);
    println!("every B_1 meets at most {touched} clusters; kappa_hat^3 = {:.1}", kappa.powi(3));

    let mut head = Vec::new();
    write_clustering(cl, &mut head).expect("in-memory write");
    let preview: Vec<&str> = std::str::from_utf8(&head).unwrap().lines().take(4).collect();
    println!("clustering file starts:\n{}", preview.join("\n"));
    Ok(())
}
