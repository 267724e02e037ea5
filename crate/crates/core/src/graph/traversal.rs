use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Graph, VertexSet};
use crate::error::{Error, Result};

pub const UNREACHABLE: usize = usize::MAX;

/// Reusable BFS state for repeated bounded searches on one graph.
pub struct BallSearcher<'g> {
    graph: &'g Graph,
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<usize>,
    next: Vec<usize>,
}

impl<'g> BallSearcher<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        BallSearcher {
            graph,
            stamp: vec![0; graph.num_vertices()],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn bump(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    /// Sizes `|B_0(v)|, |B_1(v)|, ..., |B_max_radius(v)|`.
    pub fn ball_sizes(&mut self, v: usize, max_radius: usize) -> Vec<usize> {
        self.bump();
        let epoch = self.epoch;
        self.frontier.clear();
        self.frontier.push(v);
        self.stamp[v] = epoch;
        let mut sizes = Vec::with_capacity(max_radius + 1);
        let mut total = 1;
        sizes.push(total);
        for _ in 0..max_radius {
            self.next.clear();
            for &u in &self.frontier {
                for &w in self.graph.neighbors(u) {
                    if self.stamp[w] != epoch {
                        self.stamp[w] = epoch;
                        self.next.push(w);
                    }
                }
            }
            total += self.next.len();
            sizes.push(total);
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        sizes
    }

    /// Members of `B_radius(v)` in BFS order.
    pub fn ball_members(&mut self, v: usize, radius: usize) -> Vec<usize> {
        self.bump();
        let epoch = self.epoch;
        let mut members = vec![v];
        self.stamp[v] = epoch;
        let mut start = 0;
        for _ in 0..radius {
            let end = members.len();
            for idx in start..end {
                let u = members[idx];
                for &w in self.graph.neighbors(u) {
                    if self.stamp[w] != epoch {
                        self.stamp[w] = epoch;
                        members.push(w);
                    }
                }
            }
            if members.len() == end {
                break;
            }
            start = end;
        }
        members
    }
}

/// The BFS ball `B_r(v)`, inclusive of `v`.
pub fn ball(g: &Graph, v: usize, radius: usize) -> Result<VertexSet> {
    g.check_vertex(v)?;
    Ok(BallSearcher::new(g)
        .ball_members(v, radius)
        .into_iter()
        .collect())
}

/// Hop distances from `source`; [`UNREACHABLE`] for other components.
pub fn bfs_distances(g: &Graph, source: usize) -> Result<Vec<usize>> {
    g.check_vertex(source)?;
    let mut dist = vec![UNREACHABLE; g.num_vertices()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Component id per vertex, dense from 0 in order of lowest member.
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

pub fn connected_components(g: &Graph) -> Components {
    let n = g.num_vertices();
    let mut labels = vec![UNREACHABLE; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for root in 0..n {
        if labels[root] != UNREACHABLE {
            continue;
        }
        let id = sizes.len();
        labels[root] = id;
        stack.push(root);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in g.neighbors(u) {
                if labels[w] == UNREACHABLE {
                    labels[w] = id;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    Components { labels, sizes }
}

/// Empirical growth profile of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    /// `ratios[r - 1]` is `max_v |B_{r+1}(v)| / |B_r(v)|` over vertices
    /// whose radius-`r` ball is not the whole graph, for `r = 1..=r_max`.
    pub ratios: Vec<f64>,
    pub kappa_hat: f64,
}

/// Computes exact per-radius maximum growth ratios. Radius 0 is excluded and
/// saturated balls (`|B_r(v)| = n`) do not enter the maximum; a radius at
/// which every ball is saturated reports a ratio of 1.
pub fn growth_report(g: &Graph, r_max: usize) -> Result<GrowthReport> {
    if r_max == 0 {
        return Err(Error::param("growth_report needs r_max >= 1"));
    }
    let n = g.num_vertices();
    let per_vertex: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map_init(
            || BallSearcher::new(g),
            |searcher, v| {
                let sizes = searcher.ball_sizes(v, r_max + 1);
                (1..=r_max)
                    .map(|r| {
                        if sizes[r] < n {
                            sizes[r + 1] as f64 / sizes[r] as f64
                        } else {
                            1.0
                        }
                    })
                    .collect()
            },
        )
        .collect();
    let mut ratios = vec![1.0f64; r_max];
    for row in &per_vertex {
        for (acc, &x) in ratios.iter_mut().zip(row) {
            *acc = acc.max(x);
        }
    }
    let kappa_hat = ratios.iter().copied().fold(1.0, f64::max);
    Ok(GrowthReport { ratios, kappa_hat })
}
