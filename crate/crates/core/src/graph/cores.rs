use super::{Graph, VertexSet};

/// `ceil(q * d)`, tolerant of products like `0.3 * 10` landing a hair above
/// an integer.
pub fn fractional_threshold(q: f64, degree: usize) -> usize {
    let x = q * degree as f64;
    let snapped = x.round();
    if (x - snapped).abs() <= 1e-9 * x.abs().max(1.0) {
        snapped.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

/// Worklist peeling for heterogeneous cores. Buffers are kept between calls
/// so repeated evaluation (one per Monte Carlo draw) does not allocate.
pub struct CorePeeler<'g> {
    graph: &'g Graph,
    residual: Vec<usize>,
    queue: Vec<usize>,
}

impl<'g> CorePeeler<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        CorePeeler {
            graph,
            residual: vec![0; graph.num_vertices()],
            queue: Vec::new(),
        }
    }

    /// Writes into `alive` the maximal subset of `active` in which every
    /// vertex `v` keeps at least `thresholds[v]` neighbors inside the subset.
    pub fn peel(&mut self, active: &[bool], thresholds: &[usize], alive: &mut [bool]) {
        let g = self.graph;
        let n = g.num_vertices();
        debug_assert!(active.len() == n && thresholds.len() == n && alive.len() == n);
        self.queue.clear();
        alive.copy_from_slice(active);
        for v in 0..n {
            if !active[v] {
                continue;
            }
            let r = g.neighbors(v).iter().filter(|&&w| active[w]).count();
            self.residual[v] = r;
            if r < thresholds[v] {
                alive[v] = false;
                self.queue.push(v);
            }
        }
        while let Some(v) = self.queue.pop() {
            for &w in g.neighbors(v) {
                if alive[w] {
                    self.residual[w] -= 1;
                    if self.residual[w] < thresholds[w] {
                        alive[w] = false;
                        self.queue.push(w);
                    }
                }
            }
        }
    }
}

/// The unique maximal vertex set in which every member `v` has at least
/// `thresholds[v]` neighbors inside the set.
pub fn heterogeneous_k_core(g: &Graph, thresholds: &[usize]) -> VertexSet {
    assert_eq!(thresholds.len(), g.num_vertices(), "one threshold per vertex");
    let active = vec![true; g.num_vertices()];
    let mut alive = vec![false; g.num_vertices()];
    CorePeeler::new(g).peel(&active, thresholds, &mut alive);
    VertexSet::from_mask(&alive)
}

/// Fractional q-core of the subgraph induced on `subset`, where each vertex
/// must keep `ceil(q * deg_G(v))` neighbors, degrees taken in the full graph.
pub fn fractional_q_core(g: &Graph, subset: &VertexSet, q: f64) -> VertexSet {
    let n = g.num_vertices();
    let thresholds: Vec<usize> = (0..n).map(|v| fractional_threshold(q, g.degree(v))).collect();
    let active = subset.to_mask(n);
    let mut alive = vec![false; n];
    CorePeeler::new(g).peel(&active, &thresholds, &mut alive);
    VertexSet::from_mask(&alive)
}
