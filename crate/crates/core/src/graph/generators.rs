use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

pub fn gen_cycle(n: usize) -> Result<Graph> {
    gen_cycle_power(n, 1)
}

/// The `k`th power of the `n`-cycle: each vertex joined to the `k` nearest
/// vertices on either side, giving a `2k`-regular graph.
pub fn gen_cycle_power(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || n <= 2 * k {
        return Err(Error::param(format!(
            "cycle power needs k >= 1 and n > 2k (got n = {n}, k = {k})"
        )));
    }
    let adj = (0..n)
        .map(|v| {
            (1..=k)
                .flat_map(|off| [(v + off) % n, (v + n - off) % n])
                .collect()
        })
        .collect();
    Ok(Graph::from_adjacency_unchecked(adj))
}

/// `width x height` 4-connected lattice; vertex `(x, y)` has id `y * width + x`.
pub fn gen_grid(width: usize, height: usize) -> Result<Graph> {
    if width == 0 || height == 0 {
        return Err(Error::param("grid dimensions must be positive"));
    }
    let id = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    Graph::from_edges(width * height, edges)
}

/// Points drawn i.i.d. uniform in `[0, 1]^dim`; vertices are joined when
/// their Euclidean distance is at most `radius`. Deterministic in `seed`.
pub fn gen_random_geometric(n: usize, radius: f64, dim: usize, seed: u64) -> Result<Graph> {
    if !(radius > 0.0) || dim == 0 {
        return Err(Error::param(format!(
            "random geometric graph needs radius > 0 and dim >= 1 (got radius = {radius}, dim = {dim})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<f64> = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    let r2 = radius * radius;

    // bucket points into a uniform grid of cell side >= radius on the first
    // two axes, then test only neighboring cells
    let cells_per_axis = ((1.0 / radius).floor() as usize).clamp(1, 1 << 10);
    let grid_axes = dim.min(2);
    let cell_of = |i: usize, axis: usize| {
        ((points[i * dim + axis] * cells_per_axis as f64) as usize).min(cells_per_axis - 1)
    };
    let cell_index = |i: usize| {
        (0..grid_axes).fold(0, |acc, axis| acc * cells_per_axis + cell_of(i, axis))
    };
    let num_cells = cells_per_axis.pow(grid_axes as u32);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); num_cells];
    for i in 0..n {
        buckets[cell_index(i)].push(i);
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let home: Vec<usize> = (0..grid_axes).map(|a| cell_of(i, a)).collect();
        let visit = |cell: usize, adj: &mut Vec<Vec<usize>>| {
            for &j in &buckets[cell] {
                if j <= i {
                    continue;
                }
                let d2: f64 = (0..dim)
                    .map(|a| {
                        let d = points[i * dim + a] - points[j * dim + a];
                        d * d
                    })
                    .sum();
                if d2 <= r2 {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        };
        let lo = |c: usize| c.saturating_sub(1);
        let hi = |c: usize| (c + 1).min(cells_per_axis - 1);
        if grid_axes == 1 {
            for cx in lo(home[0])..=hi(home[0]) {
                visit(cx, &mut adj);
            }
        } else {
            for cx in lo(home[0])..=hi(home[0]) {
                for cy in lo(home[1])..=hi(home[1]) {
                    visit(cx * cells_per_axis + cy, &mut adj);
                }
            }
        }
    }
    Ok(Graph::from_adjacency_unchecked(adj))
}
