use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{joint_for_kind, MAX_SHARED_EXACT};
use super::{exposure_probability_exact, exposure_probability_mc, Arm, ExposureKind, ExposureSpec};
use crate::clustering::{exposure_weights, Clustering};
use crate::error::{check_probability, Error, Result};
use crate::graph::Graph;

/// How a probability was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo { replicates: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexProbability {
    pub pi1: f64,
    pub pi0: f64,
    #[serde(flatten)]
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr0: Option<f64>,
}

/// Joint exposure probabilities of a dependent pair `i < j`:
/// `p10 = Pr[i exposed to treatment, j exposed to control]`, and so on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointEntry {
    pub i: usize,
    pub j: usize,
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
    #[serde(flatten)]
    pub method: Method,
}

impl JointEntry {
    fn get(&self, x: Arm, y: Arm) -> f64 {
        match (x, y) {
            (Arm::Treatment, Arm::Treatment) => self.p11,
            (Arm::Treatment, Arm::Control) => self.p10,
            (Arm::Control, Arm::Treatment) => self.p01,
            (Arm::Control, Arm::Control) => self.p00,
        }
    }
}

/// Options for building a table from a graph and clustering.
#[derive(Clone, Copy, Debug, Default)]
pub struct TableOptions {
    /// Compute joint probabilities for every dependent pair.
    pub joints: bool,
    /// Monte Carlo `(replicates, seed)` used for joints whose shared cluster
    /// count is too large to enumerate. Without it such pairs are an error.
    pub joint_fallback: Option<(u64, u64)>,
}

/// Per-vertex `π_i^1`, `π_i^0` and sparse joint probabilities for one
/// exposure condition and treatment probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub spec: ExposureKind,
    pub p: f64,
    pub vertices: Vec<VertexProbability>,
    #[serde(default)]
    pub joint: Vec<JointEntry>,
    #[serde(skip)]
    index: HashMap<(usize, usize), usize>,
}

impl ProbabilityTable {
    pub fn new(spec: ExposureKind, p: f64, vertices: Vec<VertexProbability>, mut joint: Vec<JointEntry>) -> Result<Self> {
        let n = vertices.len();
        for e in &mut joint {
            if e.i == e.j || e.i.max(e.j) >= n {
                return Err(Error::param(format!("invalid joint pair ({}, {})", e.i, e.j)));
            }
            if e.i > e.j {
                std::mem::swap(&mut e.i, &mut e.j);
                std::mem::swap(&mut e.p10, &mut e.p01);
            }
        }
        joint.sort_by_key(|e| (e.i, e.j));
        let mut table = ProbabilityTable {
            spec,
            p,
            vertices,
            joint,
            index: HashMap::new(),
        };
        table.reindex()?;
        Ok(table)
    }

    fn reindex(&mut self) -> Result<()> {
        self.index.clear();
        for (slot, e) in self.joint.iter().enumerate() {
            if self.index.insert((e.i, e.j), slot).is_some() {
                return Err(Error::param(format!("duplicate joint pair ({}, {})", e.i, e.j)));
            }
        }
        Ok(())
    }

    /// Exact table for a neighborhood condition.
    pub fn exact(g: &Graph, cl: &Clustering, p: f64, kind: ExposureKind, opts: TableOptions) -> Result<Self> {
        check_probability(p)?;
        let kind = kind.validate()?;
        if !kind.is_neighborhood() {
            return Err(Error::UnsupportedSpec(kind.to_string()));
        }
        let ew = exposure_weights(g, cl)?;
        let vertices = (0..g.num_vertices())
            .into_par_iter()
            .map(|i| {
                let vw = ew.vertex(i);
                Ok(VertexProbability {
                    pi1: exposure_probability_exact(vw, p, ExposureSpec::new(kind, Arm::Treatment))?,
                    pi0: exposure_probability_exact(vw, p, ExposureSpec::new(kind, Arm::Control))?,
                    method: Method::Exact,
                    stderr1: None,
                    stderr0: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut joint = Vec::new();
        if opts.joints {
            let pairs = ew.dependent_pairs();
            let computed: Vec<Option<JointEntry>> = pairs
                .par_iter()
                .map(|&(i, j)| {
                    let (vi, vj) = (ew.vertex(i), ew.vertex(j));
                    let shared = vi.clusters().iter().filter(|c| vj.weight_of(**c).is_some()).count();
                    if shared > MAX_SHARED_EXACT {
                        return Ok(None);
                    }
                    let get = |x, y| joint_for_kind(vi, vj, kind, x, y, p);
                    Ok(Some(JointEntry {
                        i,
                        j,
                        p11: get(Arm::Treatment, Arm::Treatment)?,
                        p10: get(Arm::Treatment, Arm::Control)?,
                        p01: get(Arm::Control, Arm::Treatment)?,
                        p00: get(Arm::Control, Arm::Control)?,
                        method: Method::Exact,
                    }))
                })
                .collect::<Result<_>>()?;
            let oversized: Vec<(usize, usize)> = pairs
                .iter()
                .zip(&computed)
                .filter(|(_, e)| e.is_none())
                .map(|(&pair, _)| pair)
                .collect();
            joint = computed.into_iter().flatten().collect();
            if let Some(&(i, j)) = oversized.first() {
                let (replicates, seed) = opts.joint_fallback.ok_or_else(|| {
                    Error::param(format!(
                        "pair ({i}, {j}) shares more than {MAX_SHARED_EXACT} clusters; \
                         a Monte Carlo fallback is required"
                    ))
                })?;
                let mc = exposure_probability_mc(g, cl, p, kind, replicates, seed, &oversized)?;
                joint.extend(oversized.iter().zip(&mc.joint).map(|(&(i, j), f)| JointEntry {
                    i,
                    j,
                    p11: f[0],
                    p10: f[1],
                    p01: f[2],
                    p00: f[3],
                    method: Method::MonteCarlo { replicates },
                }));
            }
        }
        Self::new(kind, p, vertices, joint)
    }

    /// Monte Carlo table; the only option for component and core conditions.
    pub fn monte_carlo(
        g: &Graph,
        cl: &Clustering,
        p: f64,
        kind: ExposureKind,
        replicates: u64,
        seed: u64,
        joints: bool,
    ) -> Result<Self> {
        let kind = kind.validate()?;
        let pairs = if joints {
            exposure_weights(g, cl)?.dependent_pairs()
        } else {
            Vec::new()
        };
        let mc = exposure_probability_mc(g, cl, p, kind, replicates, seed, &pairs)?;
        let method = Method::MonteCarlo { replicates };
        let vertices = (0..g.num_vertices())
            .map(|i| VertexProbability {
                pi1: mc.pi1[i],
                pi0: mc.pi0[i],
                method,
                stderr1: Some(mc.stderr1[i]),
                stderr0: Some(mc.stderr0[i]),
            })
            .collect();
        let joint = pairs
            .iter()
            .zip(&mc.joint)
            .map(|(&(i, j), f)| JointEntry {
                i,
                j,
                p11: f[0],
                p10: f[1],
                p01: f[2],
                p00: f[3],
                method,
            })
            .collect();
        Self::new(kind, p, vertices, joint)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn pi(&self, i: usize, arm: Arm) -> f64 {
        match arm {
            Arm::Treatment => self.vertices[i].pi1,
            Arm::Control => self.vertices[i].pi0,
        }
    }

    /// `π_ij^{xy}` if the pair is stored.
    pub fn joint(&self, i: usize, j: usize, x: Arm, y: Arm) -> Option<f64> {
        if i < j {
            self.index.get(&(i, j)).map(|&s| self.joint[s].get(x, y))
        } else {
            self.index.get(&(j, i)).map(|&s| self.joint[s].get(y, x))
        }
    }

    /// Vertices whose exposure probability to an arm is zero; they cannot be
    /// inverse weighted.
    pub fn zero_probability_vertices(&self) -> Vec<(usize, Arm)> {
        let mut out = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.pi1 <= 0.0 {
                out.push((i, Arm::Treatment));
            }
            if v.pi0 <= 0.0 {
                out.push((i, Arm::Control));
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut table: ProbabilityTable = serde_json::from_str(text)?;
        let joint = std::mem::take(&mut table.joint);
        Self::new(table.spec, table.p, table.vertices, joint)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}
