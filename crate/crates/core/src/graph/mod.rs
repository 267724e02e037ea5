//! Undirected simple graphs in compressed adjacency form, plus the traversal,
//! core-peeling and generator routines built on top of them.

mod cores;
mod generators;
mod io;
mod traversal;

pub use cores::{fractional_q_core, fractional_threshold, heterogeneous_k_core, CorePeeler};
pub use generators::{gen_cycle, gen_cycle_power, gen_grid, gen_random_geometric};
pub use io::{load_graph, parse_edge_list, save_graph, write_edge_list};
pub use traversal::{
    ball, bfs_distances, connected_components, growth_report, BallSearcher, Components,
    GrowthReport, UNREACHABLE,
};

use crate::error::{Error, Result};

/// Immutable undirected simple graph. Neighbor lists are sorted and stored
/// contiguously; `offsets[v]..offsets[v + 1]` indexes the neighbors of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list, symmetrizing and dropping duplicate
    /// edges. Self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
        for (line, (u, v)) in edges.into_iter().enumerate() {
            for id in [u, v] {
                if id >= num_vertices {
                    return Err(Error::VertexOutOfRange {
                        line: line + 1,
                        id,
                        num_vertices,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: line + 1,
                    vertex: u,
                });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency_unchecked(adj))
    }

    /// Sorts and dedups each list; the caller guarantees symmetry and range.
    pub(crate) fn from_adjacency_unchecked(mut adj: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_vertices()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_vertices())
            .flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
            .filter(|(u, v)| u < v)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                num_vertices: self.num_vertices(),
            })
        }
    }
}

/// Sorted set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet { members }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet {
            members: mask
                .iter()
                .enumerate()
                .filter_map(|(v, &m)| m.then_some(v))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    pub fn to_mask(&self, num_vertices: usize) -> Vec<bool> {
        let mut mask = vec![false; num_vertices];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }
}
