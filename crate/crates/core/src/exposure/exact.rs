use super::{Arm, ExposureKind, ExposureSpec};
use crate::clustering::VertexWeights;
use crate::error::{check_probability, Error, Result};

/// Shared-cluster count above which joint probabilities are not enumerated.
pub const MAX_SHARED_EXACT: usize = 20;

/// `Pr[Σ_j w_j X_j >= threshold]` for independent `X_j ~ Bernoulli(p)`.
///
/// Runs the tail recursion
/// `F_j(T) = p F_{j-1}(T - w_j) + (1 - p) F_{j-1}(T)` from `F_0(T) = 1[T <= 0]`,
/// keeping `F` as a vector over `T = 0..=W + 1` where `W = Σ w`.
pub fn dp_tail(weights: &[usize], p: f64, threshold: i64) -> f64 {
    if threshold <= 0 {
        return 1.0;
    }
    let total: usize = weights.iter().sum();
    if threshold as usize > total {
        return 0.0;
    }
    tail_table(weights, p)[threshold as usize]
}

/// Full tail table `F_s(T)` for `T = 0..=W + 1`; `F(T) = 1` for `T <= 0`.
fn tail_table(weights: &[usize], p: f64) -> Vec<f64> {
    let total: usize = weights.iter().sum();
    let mut tail = vec![0.0; total + 2];
    tail[0] = 1.0;
    for &w in weights {
        // descending so tail[t - w] still holds the previous stage
        for t in (1..=total).rev() {
            let shifted = if t >= w { tail[t - w] } else { 1.0 };
            tail[t] = p * shifted + (1.0 - p) * tail[t];
        }
    }
    tail
}

#[inline]
fn lookup_tail(tail: &[f64], threshold: i64) -> f64 {
    if threshold <= 0 {
        1.0
    } else {
        tail.get(threshold as usize).copied().unwrap_or(0.0)
    }
}

/// Exact `π_i^x` for a neighborhood condition: the vertex's own cluster must
/// land on the arm and the other connected clusters must contribute at least
/// `threshold - w_own` same-arm neighbors.
pub fn exposure_probability_exact(vw: VertexWeights<'_>, p: f64, spec: ExposureSpec) -> Result<f64> {
    check_probability(p)?;
    let threshold = spec
        .kind
        .neighbor_threshold(vw.degree)
        .ok_or_else(|| Error::UnsupportedSpec(spec.kind.to_string()))?;
    let q = spec.arm.coin_probability(p);
    let need = threshold as i64 - vw.own_weight() as i64;
    Ok(q * dp_tail(&vw.other_weights(), q, need))
}

/// Per-threshold exposure probabilities for one vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ExposureDistribution {
    /// `treatment[k] = Pr[z_i = 1 and at least k neighbors treated]`, `k = 0..=d`.
    pub treatment: Vec<f64>,
    pub control: Vec<f64>,
}

impl ExposureDistribution {
    pub fn arm(&self, arm: Arm) -> &[f64] {
        match arm {
            Arm::Treatment => &self.treatment,
            Arm::Control => &self.control,
        }
    }
}

/// Probabilities for every neighbor threshold `k = 0..=d_i`, both arms, from
/// one tail table per arm.
pub fn exposure_distribution(vw: VertexWeights<'_>, p: f64) -> Result<ExposureDistribution> {
    check_probability(p)?;
    let others = vw.other_weights();
    let own = vw.own_weight() as i64;
    let per_arm = |arm: Arm| {
        let q = arm.coin_probability(p);
        let tail = tail_table(&others, q);
        (0..=vw.degree as i64)
            .map(|k| q * lookup_tail(&tail, k - own))
            .collect::<Vec<f64>>()
    };
    Ok(ExposureDistribution {
        treatment: per_arm(Arm::Treatment),
        control: per_arm(Arm::Control),
    })
}

struct Side {
    arm_bit: bool,
    threshold: i64,
    own_weight: i64,
    /// Slot of the own cluster within the shared list, if shared.
    own_shared: Option<usize>,
    /// Weight of each shared cluster for this vertex.
    shared_weights: Vec<i64>,
    /// Tail table over the clusters only this vertex touches (own excluded).
    private_tail: Vec<f64>,
    arm_q: f64,
}

impl Side {
    fn probability_given(&self, shared_coins: u32) -> f64 {
        let mut factor = 1.0;
        let mut fixed = 0i64;
        match self.own_shared {
            Some(slot) => {
                if (shared_coins >> slot & 1 == 1) != self.arm_bit {
                    return 0.0;
                }
            }
            None => {
                factor = self.arm_q;
                fixed += self.own_weight;
            }
        }
        for (slot, &w) in self.shared_weights.iter().enumerate() {
            if (shared_coins >> slot & 1 == 1) == self.arm_bit {
                fixed += w;
            }
        }
        factor * lookup_tail(&self.private_tail, self.threshold - fixed)
    }
}

/// Exact `π_ij^{xy} = Pr[Z ∈ σ_i^x ∩ σ_j^y]` for neighborhood conditions.
///
/// Enumerates the coins of the clusters connected to both vertices; given
/// those, the remaining requirements involve disjoint cluster sets and
/// factor into two independent tails.
pub fn joint_exposure_probability_exact(
    vi: VertexWeights<'_>,
    spec_i: ExposureSpec,
    vj: VertexWeights<'_>,
    spec_j: ExposureSpec,
    p: f64,
) -> Result<f64> {
    check_probability(p)?;
    let (ci, cj) = (vi.clusters(), vj.clusters());
    let mut shared: Vec<(usize, usize, usize)> = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < ci.len() && b < cj.len() {
        match ci[a].cmp(&cj[b]) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                shared.push((ci[a], vi.weights()[a], vj.weights()[b]));
                a += 1;
                b += 1;
            }
        }
    }
    if shared.len() > MAX_SHARED_EXACT {
        return Err(Error::param(format!(
            "{} shared clusters exceed the exact joint limit of {MAX_SHARED_EXACT}",
            shared.len()
        )));
    }

    let side = |vw: VertexWeights<'_>, spec: ExposureSpec, pick: fn(&(usize, usize, usize)) -> usize| {
        let threshold = spec
            .kind
            .neighbor_threshold(vw.degree)
            .ok_or_else(|| Error::UnsupportedSpec(spec.kind.to_string()))?;
        let q = spec.arm.coin_probability(p);
        let private: Vec<usize> = vw
            .others()
            .filter(|(c, _)| shared.binary_search_by_key(c, |s| s.0).is_err())
            .map(|(_, w)| w)
            .collect();
        Ok::<_, Error>(Side {
            arm_bit: spec.arm.bit(),
            threshold: threshold as i64,
            own_weight: vw.own_weight() as i64,
            own_shared: shared.iter().position(|s| s.0 == vw.own_cluster),
            shared_weights: shared.iter().map(|s| pick(s) as i64).collect(),
            private_tail: tail_table(&private, q),
            arm_q: q,
        })
    };
    let left = side(vi, spec_i, |s| s.1)?;
    let right = side(vj, spec_j, |s| s.2)?;

    let m = shared.len();
    let mut total = 0.0;
    for coins in 0u32..(1u32 << m) {
        let mut weight = 1.0;
        for slot in 0..m {
            weight *= if coins >> slot & 1 == 1 { p } else { 1.0 - p };
        }
        let li = left.probability_given(coins);
        if li == 0.0 {
            continue;
        }
        total += weight * li * right.probability_given(coins);
    }
    Ok(total)
}

/// Same as [`joint_exposure_probability_exact`] over a common kind.
pub(crate) fn joint_for_kind(
    vi: VertexWeights<'_>,
    vj: VertexWeights<'_>,
    kind: ExposureKind,
    x: Arm,
    y: Arm,
    p: f64,
) -> Result<f64> {
    joint_exposure_probability_exact(vi, ExposureSpec::new(kind, x), vj, ExposureSpec::new(kind, y), p)
}
