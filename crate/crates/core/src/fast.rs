//! Risk of every node from the subtree aggregates, `O(k * depth)` per node.
//!
//! For a target `yp` with root path `r = a_0, ..., a_m = yp`, the risk splits
//! by where the true label sits:
//!
//! - inside the subtree of `yp`: `K[yp]`;
//! - on the path above `yp`: `p[a_j] * d(a_j, yp)` for `j < m`;
//! - in a sibling subtree hanging off `a_j` at child `c`:
//!   `K[c] + S[c] * (up(c) + d(a_j, yp))`.
//!
//! `d(a_j, yp)` is the down-weight suffix along the path, so every sibling
//! term costs `O(1)`. Directed weights are used throughout, which makes the
//! same routine exact for asymmetric losses.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::hierarchy::{Hierarchy, Label};
use crate::probe::Probe;
use crate::scalar::Scalar;
use crate::stats::{ProbVector, SubtreeStats};

/// Which algorithm produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bruteforce,
    Fast,
    Greedy,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bruteforce, Method::Fast, Method::Greedy];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bruteforce => "bruteforce",
            Method::Fast => "fast",
            Method::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected bruteforce, fast or greedy)"))
    }
}

/// A chosen label with its Bayes risk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction<T> {
    pub node: Label,
    pub risk: T,
    pub method: Method,
}

/// Risk of predicting each label; entry `y - 1` belongs to label `y`.
pub fn risk_all_nodes_fast<T: Scalar>(
    h: &Hierarchy<T>,
    p: &ProbVector<T>,
    stats: &SubtreeStats<T>,
) -> Result<Vec<T>, Error> {
    risk_all_nodes_probed(h, p, stats, &mut ())
}

/// [`risk_all_nodes_fast`] reporting its constant-time steps to `probe`.
pub fn risk_all_nodes_probed<T: Scalar, P: Probe>(
    h: &Hierarchy<T>,
    p: &ProbVector<T>,
    stats: &SubtreeStats<T>,
    probe: &mut P,
) -> Result<Vec<T>, Error> {
    p.check_len(h.len())?;
    stats.check_len(h.len())?;

    let mass = stats.masses();
    let k = stats.descendant_losses();
    let mut risks = Vec::with_capacity(h.len());
    let mut path: Vec<Label> = Vec::with_capacity(h.height() + 1);
    let mut dist: Vec<T> = Vec::with_capacity(h.height() + 1);

    for target in h.labels() {
        path.clear();
        path.push(target);
        path.extend(h.ancestors(target));
        path.reverse();
        let last = path.len() - 1;

        // dist[j] = d(path[j], target), a suffix sum of down weights.
        dist.clear();
        dist.resize(path.len(), T::zero());
        for j in (0..last).rev() {
            probe.op();
            dist[j] = dist[j + 1] + h.down(path[j + 1]);
        }

        let mut risk = k[target - 1];
        for j in 0..last {
            let (anc, next, d) = (path[j], path[j + 1], dist[j]);
            probe.op();
            risk = risk + p.get(anc) * d;
            for &c in h.children(anc) {
                probe.op();
                if c != next {
                    risk = risk + k[c - 1] + mass[c - 1] * (h.up(c) + d);
                }
            }
        }
        risks.push(risk);
    }
    Ok(risks)
}

/// Smallest label whose risk is within [`Scalar::tolerance`] of the minimum.
pub fn smallest_minimizer<T: Scalar>(risks: &[T]) -> Option<(Label, T)> {
    let min = risks.iter().copied().fold(T::infinity(), T::min);
    risks
        .iter()
        .position(|&r| r - min <= T::tolerance())
        .map(|i| (i + 1, risks[i]))
}

/// Bayes-optimal label via the full fast risk table.
pub fn bayes_optimal_fast<T: Scalar>(
    h: &Hierarchy<T>,
    p: &ProbVector<T>,
) -> Result<Prediction<T>, Error> {
    let stats = SubtreeStats::compute(h, p)?;
    let risks = risk_all_nodes_fast(h, p, &stats)?;
    let (node, risk) = smallest_minimizer(&risks).expect("hierarchy has at least one node");
    Ok(Prediction {
        node,
        risk,
        method: Method::Fast,
    })
}
