//! Probability vectors and the per-node subtree aggregates `S` and `K`.
//!
//! For a node `y`, `S[y]` is the probability mass of the subtree rooted at
//! `y` and `K[y]` is the expected loss of moving every subtree member up to
//! `y`. Both come out of one post-order pass:
//!
//! ```text
//! S[y] = p[y] + sum_c S[c]
//! K[y] = sum_c (K[c] + up(c) * S[c])
//! ```

use std::fmt;

use thiserror::Error;

use crate::hierarchy::{Hierarchy, Label};
use crate::probe::Probe;
use crate::scalar::Scalar;

/// Slack allowed in a probability file before it is rejected rather than
/// renormalized.
pub const FILE_SUM_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("probability vector is empty")]
    Empty,
    #[error("expected {expected} entries, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("probability for node {node} is negative or not finite")]
    InvalidEntry { node: Label },
    #[error("probabilities sum to {sum}, not 1")]
    BadSum { sum: f64 },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: node {node} outside 1..={n}")]
    NodeOutOfRange { line: usize, node: Label, n: usize },
    #[error("line {line}: node {node} listed twice")]
    Duplicate { line: usize, node: Label },
    #[error("node {node} has no probability line")]
    Missing { node: Label },
}

/// A point on the probability simplex, indexed by label.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector<T> {
    p: Vec<T>,
}

impl<T: Scalar> ProbVector<T> {
    /// Validates non-negativity and that the entries sum to one within
    /// [`Scalar::tolerance`].
    pub fn new(values: Vec<T>) -> Result<Self, StatsError> {
        check_entries(&values)?;
        let sum = sum_of(&values);
        if (sum - T::one()).abs() > T::tolerance() {
            return Err(StatsError::BadSum {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(ProbVector { p: values })
    }

    /// Divides by the total; fails when every entry is zero.
    pub fn normalized(mut values: Vec<T>) -> Result<Self, StatsError> {
        check_entries(&values)?;
        let sum = sum_of(&values);
        if sum <= T::zero() {
            return Err(StatsError::BadSum { sum: 0.0 });
        }
        for v in values.iter_mut() {
            *v = *v / sum;
        }
        Ok(ProbVector { p: values })
    }

    /// Point mass on `y`.
    pub fn point_mass(n: usize, y: Label) -> Self {
        let mut p = vec![T::zero(); n];
        p[y - 1] = T::one();
        ProbVector { p }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Probability of label `y`.
    pub fn get(&self, y: Label) -> T {
        self.p[y - 1]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.p
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<(), StatsError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(StatsError::SizeMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }
}

fn check_entries<T: Scalar>(values: &[T]) -> Result<(), StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    match values
        .iter()
        .position(|v| !(v.is_finite() && *v >= T::zero()))
    {
        Some(i) => Err(StatsError::InvalidEntry { node: i + 1 }),
        None => Ok(()),
    }
}

fn sum_of<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, &v| acc + v)
}

/// Parses `<node_id>,<probability>` lines for a tree of `n` nodes.
///
/// Every node must appear exactly once. Values summing to one within
/// [`Scalar::tolerance`] are kept verbatim, a total within [`FILE_SUM_SLACK`]
/// of one is renormalized, and anything further off is an error.
pub fn parse_probs<T: Scalar>(text: &str, n: usize) -> Result<ProbVector<T>, StatsError> {
    let mut values: Vec<Option<T>> = vec![None; n];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let syntax = |message: String| StatsError::Syntax { line, message };
        let (id, prob) = content
            .split_once(',')
            .ok_or_else(|| syntax("expected `<node_id>,<probability>`".into()))?;
        let node: Label = id
            .trim()
            .parse()
            .map_err(|_| syntax(format!("invalid node id `{}`", id.trim())))?;
        let value: T = prob
            .trim()
            .parse()
            .map_err(|_| syntax(format!("invalid probability `{}`", prob.trim())))?;
        if node == 0 || node > n {
            return Err(StatsError::NodeOutOfRange { line, node, n });
        }
        if !(value.is_finite() && value >= T::zero()) {
            return Err(StatsError::InvalidEntry { node });
        }
        if values[node - 1].replace(value).is_some() {
            return Err(StatsError::Duplicate { line, node });
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(StatsError::Missing { node: i + 1 }))
        .collect::<Result<Vec<T>, _>>()?;
    let sum = sum_of(&values);
    if (sum - T::one()).abs() > T::lit(FILE_SUM_SLACK) {
        return Err(StatsError::BadSum {
            sum: sum.to_f64().unwrap_or(f64::NAN),
        });
    }
    if (sum - T::one()).abs() <= T::tolerance() {
        return Ok(ProbVector { p: values });
    }
    ProbVector::normalized(values)
}

impl<T: Scalar> fmt::Display for ProbVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.p.iter().enumerate() {
            writeln!(f, "{},{}", i + 1, p)?;
        }
        Ok(())
    }
}

/// Subtree mass `S` and descendant loss mass `K` for every node.
#[derive(Debug, Clone, PartialEq)]
pub struct SubtreeStats<T> {
    mass: Vec<T>,
    descendant_loss: Vec<T>,
}

impl<T: Scalar> SubtreeStats<T> {
    pub fn compute(h: &Hierarchy<T>, p: &ProbVector<T>) -> Result<Self, StatsError> {
        Self::compute_probed(h, p, &mut ())
    }

    /// [`SubtreeStats::compute`] reporting each node visit to `probe`.
    pub fn compute_probed<P: Probe>(
        h: &Hierarchy<T>,
        p: &ProbVector<T>,
        probe: &mut P,
    ) -> Result<Self, StatsError> {
        p.check_len(h.len())?;
        let n = h.len();
        let mut mass = vec![T::zero(); n];
        let mut descendant_loss = vec![T::zero(); n];
        for y in h.post_order() {
            probe.visit(y);
            let mut s = p.get(y);
            let mut k = T::zero();
            for &c in h.children(y) {
                let sc = mass[c - 1];
                s = s + sc;
                k = k + descendant_loss[c - 1] + h.up(c) * sc;
            }
            mass[y - 1] = s;
            descendant_loss[y - 1] = k;
        }
        Ok(SubtreeStats {
            mass,
            descendant_loss,
        })
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// `S[y]`.
    pub fn mass(&self, y: Label) -> T {
        self.mass[y - 1]
    }

    /// `K[y]`.
    pub fn descendant_loss(&self, y: Label) -> T {
        self.descendant_loss[y - 1]
    }

    pub fn masses(&self) -> &[T] {
        &self.mass
    }

    pub fn descendant_losses(&self) -> &[T] {
        &self.descendant_loss
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<(), StatsError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(StatsError::SizeMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }
}

/// `S` alone; entry `y - 1` is the mass of the subtree at `y`.
pub fn subtree_mass<T: Scalar>(h: &Hierarchy<T>, p: &ProbVector<T>) -> Result<Vec<T>, StatsError> {
    Ok(SubtreeStats::compute(h, p)?.mass)
}

/// `K` from a precomputed `S`, using the directed up weights.
pub fn descendant_loss_mass<T: Scalar>(h: &Hierarchy<T>, mass: &[T]) -> Result<Vec<T>, StatsError> {
    if mass.len() != h.len() {
        return Err(StatsError::SizeMismatch {
            expected: h.len(),
            found: mass.len(),
        });
    }
    let mut k = vec![T::zero(); h.len()];
    for y in h.post_order() {
        k[y - 1] = h
            .children(y)
            .iter()
            .fold(T::zero(), |acc, &c| acc + k[c - 1] + h.up(c) * mass[c - 1]);
    }
    Ok(k)
}
