//! Build graphs, round-trip them through the edge-list format, and look at
//! balls, components and growth.
//!
//! ```text
//! cargo run --release --example graph_basics
//! ```

use netexp::graph::{
    ball, connected_components, gen_cycle_power, gen_grid, gen_random_geometric, growth_report, parse_edge_list,
    write_edge_list,
};

fn main() -> netexp::Result<()> {
    let g = gen_cycle_power(12, 2)?;
    println!("cycle power: {} vertices, {} edges, degree {}", g.num_vertices(), g.num_edges(), g.max_degree());
    println!("neighbors of 0: {:?}", g.neighbors(0));
    println!("B_2(0) = {:?}", ball(&g, 0, 2)?.as_slice());

    let mut text = Vec::new();
    write_edge_list(&g, &mut text).expect("in-memory write");
    let back = parse_edge_list(std::str::from_utf8(&text).expect("utf-8"))?;
    assert_eq!(back, g);
    println!("edge list round trip ok ({} bytes)", text.len());

    let rgg = gen_random_geometric(2000, 0.03, 2, 7)?;
    let comps = connected_components(&rgg);
    let largest = comps.sizes.iter().max().copied().unwrap_or(0);
    println!(
        "random geometric graph: {} edges, {} components, largest {largest}",
        rgg.num_edges(),
        comps.count()
    );

    for (name, graph) in [("cycle power", &g), ("grid", &gen_grid(40, 40)?), ("rgg", &rgg)] {
        let report = growth_report(graph, 6)?;
        let ratios: Vec<String> = report.ratios.iter().map(|r| format!("{r:.3}")).collect();
        println!("{name}: growth ratios [{}], kappa_hat = {:.3}", ratios.join(", "), report.kappa_hat);
    }
    Ok(())
}
