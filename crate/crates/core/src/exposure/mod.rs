//! Network exposure conditions, assignments, and exposure probabilities
//! under independent cluster randomization.

mod exact;
mod monte_carlo;
mod table;

pub use exact::{
    dp_tail, exposure_distribution, exposure_probability_exact, joint_exposure_probability_exact,
    ExposureDistribution, MAX_SHARED_EXACT,
};
pub use monte_carlo::{exposure_probability_mc, McEstimate};
pub use table::{JointEntry, Method, ProbabilityTable, TableOptions, VertexProbability};

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clustering::{exposure_weights, Clustering, ExposureWeights};
use crate::error::{Error, Result};
use crate::graph::{connected_components, fractional_threshold, CorePeeler, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Treatment,
    Control,
}

impl Arm {
    pub const BOTH: [Arm; 2] = [Arm::Treatment, Arm::Control];

    /// The assignment bit this arm corresponds to.
    #[inline]
    pub fn bit(self) -> bool {
        matches!(self, Arm::Treatment)
    }

    /// Probability that one cluster coin lands on this arm.
    #[inline]
    pub fn coin_probability(self, p: f64) -> f64 {
        match self {
            Arm::Treatment => p,
            Arm::Control => 1.0 - p,
        }
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arm::Treatment => "treatment",
            Arm::Control => "control",
        })
    }
}

/// Which condition defines `σ_i^x`. Grammar: `full`, `abs:<k>`, `frac:<q>`,
/// `component`, `kcore:<k>`, `fqcore:<q>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExposureKind {
    FullNeighborhood,
    AbsoluteK(usize),
    FractionalQ(f64),
    Component,
    KCore(usize),
    FractionalQCore(f64),
}

impl ExposureKind {
    pub fn validate(self) -> Result<Self> {
        match self {
            ExposureKind::AbsoluteK(0) | ExposureKind::KCore(0) => {
                Err(Error::param(format!("`{self}`: k must be at least 1")))
            }
            ExposureKind::FractionalQ(q) | ExposureKind::FractionalQCore(q)
                if !(0.0..=1.0).contains(&q) =>
            {
                Err(Error::param(format!("`{self}`: q must lie in [0, 1]")))
            }
            _ => Ok(self),
        }
    }

    /// Neighborhood conditions admit exact probabilities.
    pub fn is_neighborhood(self) -> bool {
        matches!(
            self,
            ExposureKind::FullNeighborhood | ExposureKind::AbsoluteK(_) | ExposureKind::FractionalQ(_)
        )
    }

    /// Number of same-arm neighbors a vertex of degree `d` needs under a
    /// neighborhood condition. Absolute `k` falls back to full exposure when
    /// `d < k`.
    pub fn neighbor_threshold(self, degree: usize) -> Option<usize> {
        match self {
            ExposureKind::FullNeighborhood => Some(degree),
            ExposureKind::AbsoluteK(k) => Some(k.min(degree)),
            ExposureKind::FractionalQ(q) => Some(fractional_threshold(q, degree)),
            _ => None,
        }
    }

    /// Per-vertex threshold inside the induced same-arm subgraph for core
    /// conditions. `kcore:k` uses `min(k, d)` for the same reason as `abs:k`.
    pub fn core_threshold(self, degree: usize) -> Option<usize> {
        match self {
            ExposureKind::KCore(k) => Some(k.min(degree)),
            ExposureKind::FractionalQCore(q) => Some(fractional_threshold(q, degree)),
            _ => None,
        }
    }
}

impl fmt::Display for ExposureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExposureKind::FullNeighborhood => write!(f, "full"),
            ExposureKind::AbsoluteK(k) => write!(f, "abs:{k}"),
            ExposureKind::FractionalQ(q) => write!(f, "frac:{q}"),
            ExposureKind::Component => write!(f, "component"),
            ExposureKind::KCore(k) => write!(f, "kcore:{k}"),
            ExposureKind::FractionalQCore(q) => write!(f, "fqcore:{q}"),
        }
    }
}

impl FromStr for ExposureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("invalid exposure spec `{s}`"));
        let kind = match s.split_once(':') {
            None => match s {
                "full" => ExposureKind::FullNeighborhood,
                "component" => ExposureKind::Component,
                _ => return Err(bad()),
            },
            Some((name, arg)) => match name {
                "abs" => ExposureKind::AbsoluteK(arg.parse().map_err(|_| bad())?),
                "kcore" => ExposureKind::KCore(arg.parse().map_err(|_| bad())?),
                "frac" => ExposureKind::FractionalQ(arg.parse().map_err(|_| bad())?),
                "fqcore" => ExposureKind::FractionalQCore(arg.parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            },
        };
        kind.validate()
    }
}

impl Serialize for ExposureKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExposureKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExposureSpec {
    pub kind: ExposureKind,
    pub arm: Arm,
}

impl ExposureSpec {
    pub fn new(kind: ExposureKind, arm: Arm) -> Self {
        ExposureSpec { kind, arm }
    }
}

/// A realized randomization: one coin per cluster and the implied vertex bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    cluster_coins: Vec<bool>,
    z: Vec<bool>,
}

impl Assignment {
    pub fn from_coins(cl: &Clustering, cluster_coins: Vec<bool>) -> Result<Self> {
        if cluster_coins.len() != cl.num_clusters() {
            return Err(Error::param(format!(
                "{} coins for {} clusters",
                cluster_coins.len(),
                cl.num_clusters()
            )));
        }
        let z = cl.assignment().iter().map(|&c| cluster_coins[c]).collect();
        Ok(Assignment { cluster_coins, z })
    }

    /// Rebuilds coins from vertex bits, checking they are constant per cluster.
    pub fn from_vertex_bits(cl: &Clustering, z: Vec<bool>) -> Result<Self> {
        if z.len() != cl.num_vertices() {
            return Err(Error::param(format!(
                "assignment has {} vertices, clustering has {}",
                z.len(),
                cl.num_vertices()
            )));
        }
        let mut coins = Vec::with_capacity(cl.num_clusters());
        for c in 0..cl.num_clusters() {
            let members = cl.members(c);
            let bit = z[members[0]];
            if let Some(&v) = members.iter().find(|&&v| z[v] != bit) {
                return Err(Error::param(format!(
                    "vertex {v} disagrees with the rest of cluster {c}"
                )));
            }
            coins.push(bit);
        }
        Ok(Assignment {
            cluster_coins: coins,
            z,
        })
    }

    pub fn cluster_coins(&self) -> &[bool] {
        &self.cluster_coins
    }

    pub fn z(&self) -> &[bool] {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Flags every vertex exposed to `arm` under `kind`, directly from vertex bits.
pub fn exposed_vertices(g: &Graph, z: &[bool], kind: ExposureKind, arm: Arm) -> Vec<bool> {
    let n = g.num_vertices();
    let x = arm.bit();
    let same = |v: usize| z[v] == x;
    match kind {
        ExposureKind::FullNeighborhood | ExposureKind::AbsoluteK(_) | ExposureKind::FractionalQ(_) => {
            (0..n)
                .map(|i| {
                    let need = kind.neighbor_threshold(g.degree(i)).expect("neighborhood");
                    same(i) && g.neighbors(i).iter().filter(|&&w| same(w)).count() >= need
                })
                .collect()
        }
        ExposureKind::Component => {
            let comps = connected_components(g);
            let mut pure = vec![true; comps.count()];
            for v in 0..n {
                if !same(v) {
                    pure[comps.labels[v]] = false;
                }
            }
            (0..n).map(|v| pure[comps.labels[v]]).collect()
        }
        ExposureKind::KCore(_) | ExposureKind::FractionalQCore(_) => {
            let active: Vec<bool> = (0..n).map(same).collect();
            let thresholds: Vec<usize> = (0..n)
                .map(|v| kind.core_threshold(g.degree(v)).expect("core"))
                .collect();
            let mut alive = vec![false; n];
            CorePeeler::new(g).peel(&active, &thresholds, &mut alive);
            alive
        }
    }
}

/// Whether vertex `i` is network exposed to `spec.arm` under assignment `a`.
pub fn is_exposed(g: &Graph, a: &Assignment, spec: ExposureSpec, i: usize) -> Result<bool> {
    g.check_vertex(i)?;
    if a.len() != g.num_vertices() {
        return Err(Error::param("assignment length does not match the graph"));
    }
    if spec.kind.is_neighborhood() {
        let x = spec.arm.bit();
        let z = a.z();
        let need = spec.kind.neighbor_threshold(g.degree(i)).expect("neighborhood");
        return Ok(z[i] == x && g.neighbors(i).iter().filter(|&&w| z[w] == x).count() >= need);
    }
    Ok(exposed_vertices(g, a.z(), spec.kind, spec.arm)[i])
}

enum EvalMode<'g> {
    Neighborhood {
        thresholds: Vec<usize>,
    },
    Component {
        labels: Vec<usize>,
        pure: [Vec<bool>; 2],
    },
    Core {
        peeler: CorePeeler<'g>,
        thresholds: Vec<usize>,
        active: Vec<bool>,
    },
}

/// Evaluates exposure flags for both arms from cluster coins, reusing its
/// buffers across calls. This is the inner loop of every Monte Carlo path.
pub struct ExposureEvaluator<'g> {
    graph: &'g Graph,
    weights: ExposureWeights,
    kind: ExposureKind,
    mode: EvalMode<'g>,
}

impl<'g> ExposureEvaluator<'g> {
    pub fn new(g: &'g Graph, cl: &Clustering, kind: ExposureKind) -> Result<Self> {
        let kind = kind.validate()?;
        let weights = exposure_weights(g, cl)?;
        let n = g.num_vertices();
        let mode = match kind {
            ExposureKind::FullNeighborhood | ExposureKind::AbsoluteK(_) | ExposureKind::FractionalQ(_) => {
                EvalMode::Neighborhood {
                    thresholds: (0..n)
                        .map(|v| kind.neighbor_threshold(g.degree(v)).expect("neighborhood"))
                        .collect(),
                }
            }
            ExposureKind::Component => {
                let comps = connected_components(g);
                let k = comps.count();
                EvalMode::Component {
                    labels: comps.labels,
                    pure: [vec![true; k], vec![true; k]],
                }
            }
            ExposureKind::KCore(_) | ExposureKind::FractionalQCore(_) => EvalMode::Core {
                peeler: CorePeeler::new(g),
                thresholds: (0..n)
                    .map(|v| kind.core_threshold(g.degree(v)).expect("core"))
                    .collect(),
                active: vec![false; n],
            },
        };
        Ok(ExposureEvaluator {
            graph: g,
            weights,
            kind,
            mode,
        })
    }

    pub fn kind(&self) -> ExposureKind {
        self.kind
    }

    pub fn weights(&self) -> &ExposureWeights {
        &self.weights
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    /// Fills `treated[i]` / `control[i]` with exposure to each arm.
    pub fn evaluate(&mut self, coins: &[bool], treated: &mut [bool], control: &mut [bool]) {
        let n = self.graph.num_vertices();
        let ew = &self.weights;
        match &mut self.mode {
            EvalMode::Neighborhood { thresholds } => {
                for i in 0..n {
                    let vw = ew.vertex(i);
                    let own = coins[vw.own_cluster];
                    // neighbors sharing the vertex's own arm
                    let mut count = 0;
                    for (&c, &w) in vw.clusters().iter().zip(vw.weights()) {
                        if coins[c] == own {
                            count += w;
                        }
                    }
                    let hit = count >= thresholds[i];
                    treated[i] = own && hit;
                    control[i] = !own && hit;
                }
            }
            EvalMode::Component { labels, pure } => {
                for flags in pure.iter_mut() {
                    flags.fill(true);
                }
                for v in 0..n {
                    let bit = coins[ew.vertex(v).own_cluster];
                    // a treated vertex spoils control purity and vice versa
                    pure[usize::from(bit)][labels[v]] = false;
                }
                for v in 0..n {
                    treated[v] = pure[0][labels[v]];
                    control[v] = pure[1][labels[v]];
                }
            }
            EvalMode::Core {
                peeler,
                thresholds,
                active,
            } => {
                for v in 0..n {
                    active[v] = coins[ew.vertex(v).own_cluster];
                }
                peeler.peel(active, thresholds, treated);
                for a in active.iter_mut() {
                    *a = !*a;
                }
                peeler.peel(active, thresholds, control);
            }
        }
    }
}

/// Writes `vertex z` lines with `z` in {0, 1}.
pub fn write_assignment<W: Write>(a: &Assignment, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# vertex z")?;
    for (v, &z) in a.z().iter().enumerate() {
        writeln!(out, "{v} {}", u8::from(z))?;
    }
    Ok(())
}

pub fn save_assignment(a: &Assignment, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_assignment(a, &mut buf).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Parses `vertex z` lines; every vertex must appear once and the bits must
/// be constant within each cluster of `cl`.
pub fn parse_assignment(text: &str, cl: &Clustering) -> Result<Assignment> {
    let n = cl.num_vertices();
    let mut z = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Parse {
            line: idx + 1,
            message: format!("expected `vertex z` with z in {{0, 1}}, got `{line}`"),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [v, bit] = fields[..] else { return Err(bad()) };
        let v: usize = v.parse().map_err(|_| bad())?;
        let bit = match bit {
            "0" => false,
            "1" => true,
            _ => return Err(bad()),
        };
        if v >= n {
            return Err(Error::VertexOutOfRange { line: idx + 1, id: v, num_vertices: n });
        }
        if z[v].replace(bit).is_some() {
            return Err(Error::param(format!("line {}: vertex {v} assigned twice", idx + 1)));
        }
    }
    let z = z
        .into_iter()
        .enumerate()
        .map(|(v, b)| b.ok_or_else(|| Error::param(format!("assignment is missing vertex {v}"))))
        .collect::<Result<Vec<_>>>()?;
    Assignment::from_vertex_bits(cl, z)
}

pub fn load_assignment(path: impl AsRef<Path>, cl: &Clustering) -> Result<Assignment> {
    let path = path.as_ref();
    parse_assignment(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?, cl)
}
