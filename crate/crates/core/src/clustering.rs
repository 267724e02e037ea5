//! Vertex partitions used as units of randomization, and the per-vertex
//! connected-cluster structure the exposure computations work from.

use std::collections::VecDeque;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BallSearcher, Graph, UNREACHABLE};

/// An exact partition of `0..n` into non-empty clusters with dense ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clustering {
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Clustering {
    /// Validates that cluster ids are dense `0..k` with no empty cluster.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        let k = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); k];
        for (v, &c) in assignment.iter().enumerate() {
            members[c].push(v);
        }
        if let Some(empty) = members.iter().position(Vec::is_empty) {
            return Err(Error::InvalidPartition(format!(
                "cluster id {empty} has no members; ids must be dense 0..{k}"
            )));
        }
        Ok(Clustering {
            assignment,
            members,
        })
    }

    /// Relabels arbitrary cluster labels to dense ids, preserving label order.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut distinct: Vec<usize> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let assignment = labels
            .iter()
            .map(|l| distinct.binary_search(l).expect("label present"))
            .collect();
        Self::from_assignment(assignment).expect("dense by construction")
    }

    pub fn num_vertices(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn members(&self, cluster: usize) -> &[usize] {
        &self.members[cluster]
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.num_vertices() != g.num_vertices() {
            return Err(Error::InvalidPartition(format!(
                "clustering covers {} vertices but the graph has {}",
                self.num_vertices(),
                g.num_vertices()
            )));
        }
        Ok(())
    }
}

/// Every vertex its own cluster.
pub fn singleton_clustering(n: usize) -> Clustering {
    Clustering::from_assignment((0..n).collect()).expect("dense")
}

/// Contiguous blocks `{0..c}, {c..2c}, ...`; the last block is short when
/// `c` does not divide `n`.
pub fn cycle_block_clustering(n: usize, c: usize) -> Result<Clustering> {
    if c == 0 || c > n {
        return Err(Error::param(format!(
            "block size must satisfy 1 <= c <= n (got c = {c}, n = {n})"
        )));
    }
    Clustering::from_assignment((0..n).map(|v| v / c).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scan", rename_all = "kebab-case")]
pub enum ScanOrder {
    ByIndex,
    Random { seed: u64 },
}

impl ScanOrder {
    fn permutation(self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        if let ScanOrder::Random { seed } = self {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        order
    }
}

/// Output of [`net3_clustering`]: cluster `j` belongs to `centers[j]`.
#[derive(Clone, Debug)]
pub struct NetClusteringTrace {
    pub centers: Vec<usize>,
    pub clustering: Clustering,
    pub scan: ScanOrder,
}

/// 3-net clustering: greedily pick unmarked vertices in scan order as
/// centers, marking each center's radius-2 ball, then assign every vertex
/// to its nearest center with ties going to the lower center index.
pub fn net3_clustering(g: &Graph, scan: ScanOrder) -> NetClusteringTrace {
    let n = g.num_vertices();
    let mut marked = vec![false; n];
    let mut centers = Vec::new();
    let mut searcher = BallSearcher::new(g);
    for v in scan.permutation(n) {
        if marked[v] {
            continue;
        }
        centers.push(v);
        for w in searcher.ball_members(v, 2) {
            marked[w] = true;
        }
    }

    // Multi-source BFS seeded in center order. Each BFS layer is discovered
    // from a queue sorted by owner index, so the first visit to a vertex
    // comes from the lowest-index center among those at minimum distance.
    let mut owner = vec![UNREACHABLE; n];
    let mut queue = VecDeque::with_capacity(n);
    for (j, &c) in centers.iter().enumerate() {
        owner[c] = j;
        queue.push_back(c);
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if owner[w] == UNREACHABLE {
                owner[w] = owner[u];
                queue.push_back(w);
            }
        }
    }
    let clustering = Clustering::from_assignment(owner).expect("every center owns itself");
    NetClusteringTrace {
        centers,
        clustering,
        scan,
    }
}

/// For every vertex `i`, the clusters meeting `{i} ∪ N(i)` with the number of
/// neighbors of `i` in each. Stored contiguously; entries per vertex are sorted
/// by cluster id and always include the vertex's own cluster.
#[derive(Clone, Debug)]
pub struct ExposureWeights {
    offsets: Vec<usize>,
    clusters: Vec<usize>,
    weights: Vec<usize>,
    own_slot: Vec<usize>,
    own_cluster: Vec<usize>,
    degrees: Vec<usize>,
    num_clusters: usize,
}

/// Borrowed view of one vertex's connected clusters.
#[derive(Clone, Copy, Debug)]
pub struct VertexWeights<'a> {
    pub own_cluster: usize,
    pub degree: usize,
    own_slot: usize,
    clusters: &'a [usize],
    weights: &'a [usize],
}

impl<'a> VertexWeights<'a> {
    /// `|S_i|`.
    pub fn num_connected(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &'a [usize] {
        self.clusters
    }

    pub fn weights(&self) -> &'a [usize] {
        self.weights
    }

    /// Neighbors of the vertex that share its cluster.
    pub fn own_weight(&self) -> usize {
        self.weights[self.own_slot]
    }

    pub fn own_slot(&self) -> usize {
        self.own_slot
    }

    /// `(cluster, weight)` for every connected cluster other than the own one.
    pub fn others(&self) -> impl Iterator<Item = (usize, usize)> + 'a {
        let own = self.own_slot;
        self.clusters
            .iter()
            .zip(self.weights)
            .enumerate()
            .filter(move |&(slot, _)| slot != own)
            .map(|(_, (&c, &w))| (c, w))
    }

    pub fn other_weights(&self) -> Vec<usize> {
        self.others().map(|(_, w)| w).collect()
    }

    pub fn weight_of(&self, cluster: usize) -> Option<usize> {
        self.clusters
            .binary_search(&cluster)
            .ok()
            .map(|slot| self.weights[slot])
    }
}

impl ExposureWeights {
    pub fn num_vertices(&self) -> usize {
        self.own_cluster.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> VertexWeights<'_> {
        let range = self.offsets[i]..self.offsets[i + 1];
        VertexWeights {
            own_cluster: self.own_cluster[i],
            degree: self.degrees[i],
            own_slot: self.own_slot[i],
            clusters: &self.clusters[range.clone()],
            weights: &self.weights[range],
        }
    }

    /// For each cluster, the vertices connected to it, ascending.
    pub fn cluster_reach(&self) -> Vec<Vec<usize>> {
        let mut reach = vec![Vec::new(); self.num_clusters];
        for i in 0..self.num_vertices() {
            for &c in self.vertex(i).clusters() {
                reach[c].push(i);
            }
        }
        reach
    }

    /// Pairs `(i, j)` with `i < j` sharing at least one connected cluster.
    /// These are exactly the pairs whose exposures are dependent.
    pub fn dependent_pairs(&self) -> Vec<(usize, usize)> {
        let reach = self.cluster_reach();
        let mut partners: Vec<Vec<usize>> = vec![Vec::new(); self.num_vertices()];
        for list in &reach {
            for (a, &i) in list.iter().enumerate() {
                partners[i].extend_from_slice(&list[a + 1..]);
            }
        }
        let mut pairs = Vec::new();
        for (i, list) in partners.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            pairs.extend(list.iter().map(|&j| (i, j)));
        }
        pairs
    }
}

/// Computes `S_i` and the connection counts `w_ij` for every vertex.
pub fn exposure_weights(g: &Graph, cl: &Clustering) -> Result<ExposureWeights> {
    cl.check_graph(g)?;
    let n = g.num_vertices();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut clusters = Vec::new();
    let mut weights = Vec::new();
    let mut own_slot = Vec::with_capacity(n);
    let mut scratch: Vec<usize> = Vec::new();
    for i in 0..n {
        let own = cl.cluster_of(i);
        scratch.clear();
        scratch.push(own);
        scratch.extend(g.neighbors(i).iter().map(|&w| cl.cluster_of(w)));
        // own cluster counted once without a neighbor
        scratch.sort_unstable();
        let start = clusters.len();
        let mut idx = 0;
        while idx < scratch.len() {
            let c = scratch[idx];
            let run = scratch[idx..].iter().take_while(|&&x| x == c).count();
            clusters.push(c);
            weights.push(if c == own { run - 1 } else { run });
            idx += run;
        }
        let slot = clusters[start..]
            .binary_search(&own)
            .expect("own cluster always present");
        own_slot.push(slot);
        offsets.push(clusters.len());
    }
    Ok(ExposureWeights {
        offsets,
        clusters,
        weights,
        own_slot,
        own_cluster: cl.assignment().to_vec(),
        degrees: g.degrees(),
        num_clusters: cl.num_clusters(),
    })
}

/// Reads `vertex cluster` lines. Cluster labels need not be dense; they are
/// compacted preserving their order, so already-dense files load unchanged.
/// With `num_vertices` given, every vertex below it must appear exactly once.
pub fn load_clustering(path: impl AsRef<Path>, num_vertices: Option<usize>) -> Result<Clustering> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_clustering(&text, num_vertices)
}

pub fn parse_clustering(text: &str, num_vertices: Option<usize>) -> Result<Clustering> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<Vec<usize>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[v, c]) => pairs.push((v, c)),
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected `vertex cluster`, got `{line}`"),
                })
            }
        }
    }
    let n = num_vertices.unwrap_or_else(|| pairs.iter().map(|&(v, _)| v + 1).max().unwrap_or(0));
    let mut labels = vec![None; n];
    for (line, &(v, c)) in pairs.iter().enumerate() {
        if v >= n {
            return Err(Error::VertexOutOfRange {
                line: line + 1,
                id: v,
                num_vertices: n,
            });
        }
        if labels[v].replace(c).is_some() {
            return Err(Error::DuplicateVertex { vertex: v });
        }
    }
    let labels: Vec<usize> = labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or(Error::MissingVertex { vertex: v }))
        .collect::<Result<_>>()?;
    Ok(Clustering::from_labels(&labels))
}

pub fn write_clustering<W: Write>(cl: &Clustering, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# vertex cluster")?;
    for (v, c) in cl.assignment().iter().enumerate() {
        writeln!(out, "{v} {c}")?;
    }
    Ok(())
}

pub fn save_clustering(cl: &Clustering, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_clustering(cl, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterMethod {
    Singleton,
    Blocks,
    Net3,
}

impl FromStr for ClusterMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singleton" => Ok(ClusterMethod::Singleton),
            "blocks" => Ok(ClusterMethod::Blocks),
            "net3" => Ok(ClusterMethod::Net3),
            other => Err(Error::param(format!("unknown clustering method `{other}`"))),
        }
    }
}

impl Serialize for ClusterMethod {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for ClusterMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClusterMethod::Singleton => "singleton",
            ClusterMethod::Blocks => "blocks",
            ClusterMethod::Net3 => "net3",
        })
    }
}
