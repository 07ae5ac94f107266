//! Top-down threshold descent for asymmetric losses, the assumptions that
//! make it exact, and optimality certificates.
//!
//! Moving a prediction from `y` down to its child `c` changes the risk by
//! `down(c) - S[c] * (down(c) + up(c))`, so descending pays off exactly when
//! `S[c] >= rho(c)`. When the edge ratios never decrease along a root-to-leaf
//! path and every root edge has `up <= down`, the margin `S[y] - rho(y)` is
//! non-increasing downwards and the first node with no qualifying child is
//! Bayes optimal. The descent then touches at most `k` children per level.

use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::fast::{Method, Prediction};
use crate::hierarchy::{Hierarchy, Label};
use crate::loss::ratio;
use crate::oracle::risk_unchecked;
use crate::probe::Probe;
use crate::scalar::Scalar;
use crate::stats::{ProbVector, SubtreeStats};

/// One failed assumption.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation<T> {
    /// The edge into `child_edge` has a smaller ratio than the edge into its
    /// parent `parent_edge`.
    RatioMonotonicity {
        parent_edge: Label,
        child_edge: Label,
        rho_parent: T,
        rho_child: T,
    },
    /// A root edge with `up / down > 1`.
    RootRatio { node: Label, ratio: T },
}

impl<T: Scalar> Violation<T> {
    pub fn to_f64(self) -> Violation<f64> {
        let w = |v: T| v.to_f64().unwrap_or(f64::NAN);
        match self {
            Violation::RatioMonotonicity {
                parent_edge,
                child_edge,
                rho_parent,
                rho_child,
            } => Violation::RatioMonotonicity {
                parent_edge,
                child_edge,
                rho_parent: w(rho_parent),
                rho_child: w(rho_child),
            },
            Violation::RootRatio { node, ratio } => Violation::RootRatio {
                node,
                ratio: w(ratio),
            },
        }
    }
}

impl<T: Scalar> fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RatioMonotonicity {
                parent_edge,
                child_edge,
                rho_parent,
                rho_child,
            } => write!(
                f,
                "edge ratio drops from {rho_parent} (edge into {parent_edge}) \
                 to {rho_child} (edge into {child_edge})"
            ),
            Violation::RootRatio { node, ratio } => {
                write!(f, "root edge into {node} has up/down ratio {ratio} > 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport<T> {
    pub holds: bool,
    pub violations: Vec<Violation<T>>,
}

/// Checks ratio monotonicity on every non-root edge whose parent is not the
/// root, and `up <= down` on every root edge. Violations are listed in child
/// label order.
pub fn validate_assumptions<T: Scalar>(h: &Hierarchy<T>) -> AssumptionReport<T> {
    let tol = T::ratio_tolerance();
    let mut violations = Vec::new();
    for y in h.labels() {
        let parent = match h.parent(y) {
            Some(p) => p,
            None => continue,
        };
        if parent == h.root() {
            let r = h.up(y) / h.down(y);
            if r > T::one() + tol {
                violations.push(Violation::RootRatio { node: y, ratio: r });
            }
        } else {
            let (rho_parent, rho_child) = (ratio(h, parent), ratio(h, y));
            if rho_child < rho_parent - tol {
                violations.push(Violation::RatioMonotonicity {
                    parent_edge: parent,
                    child_edge: y,
                    rho_parent,
                    rho_child,
                });
            }
        }
    }
    let holds = violations.is_empty();
    if holds {
        // Every ratio then sits at or above 1/2, up to the chained slack.
        debug_assert!(h.labels().filter(|&y| y != h.root()).all(|y| {
            let slack = tol * T::from_usize(h.depth(y) + 1).unwrap();
            ratio(h, y) >= T::half() - slack
        }));
    }
    AssumptionReport { holds, violations }
}

/// Machine check of the two optimality conditions at a node:
/// (a) `S[y] >= rho(y)` unless `y` is the root, and
/// (b) `S[c] <= rho(c)` for every child `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionCertificate<T> {
    node: Label,
    valid: bool,
    parent_threshold_ok: bool,
    child_thresholds_ok: bool,
    /// `S[y] - rho(y)`; absent at the root.
    parent_margin: Option<T>,
    /// `min_c rho(c) - S[c]`; absent at a leaf.
    child_margin: Option<T>,
}

impl<T: Scalar> ConditionCertificate<T> {
    pub fn node(&self) -> Label {
        self.node
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn parent_threshold_ok(&self) -> bool {
        self.parent_threshold_ok
    }

    pub fn child_thresholds_ok(&self) -> bool {
        self.child_thresholds_ok
    }

    pub fn parent_margin(&self) -> Option<T> {
        self.parent_margin
    }

    pub fn child_margin(&self) -> Option<T> {
        self.child_margin
    }
}

/// Certificate for `y` from precomputed subtree masses.
pub fn certify<T: Scalar>(
    h: &Hierarchy<T>,
    stats: &SubtreeStats<T>,
    y: Label,
) -> Result<ConditionCertificate<T>, Error> {
    h.check(y)?;
    stats.check_len(h.len())?;
    let tol = T::tolerance();
    let parent_margin = h.parent(y).map(|_| stats.mass(y) - ratio(h, y));
    let child_margin = h
        .children(y)
        .iter()
        .map(|&c| ratio(h, c) - stats.mass(c))
        .reduce(T::min);
    let parent_threshold_ok = parent_margin.is_none_or(|m| m >= -tol);
    let child_thresholds_ok = child_margin.is_none_or(|m| m >= -tol);
    Ok(ConditionCertificate {
        node: y,
        valid: parent_threshold_ok && child_thresholds_ok,
        parent_threshold_ok,
        child_thresholds_ok,
        parent_margin,
        child_margin,
    })
}

/// Certificate for `y` under the distribution `p`.
pub fn check_conditions<T: Scalar>(
    h: &Hierarchy<T>,
    p: &ProbVector<T>,
    y: Label,
) -> Result<ConditionCertificate<T>, Error> {
    h.check(y)?;
    let stats = SubtreeStats::compute(h, p)?;
    certify(h, &stats, y)
}

/// Where a descent stopped and how many children it compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Descent {
    pub node: Label,
    pub inspected: usize,
}

/// Walks down from the root into the first child (ascending label) with
/// `S[c] >= rho(c)`, stopping at a leaf or when no child qualifies.
///
/// No assumption check is made; on a hierarchy that fails
/// [`validate_assumptions`] the result need not be optimal.
pub fn threshold_descent<T: Scalar, P: Probe>(
    h: &Hierarchy<T>,
    stats: &SubtreeStats<T>,
    probe: &mut P,
) -> Descent {
    let tol = T::tolerance();
    let mass = stats.masses();
    let mut y = h.root();
    let mut inspected = 0;
    'descend: loop {
        probe.visit(y);
        for &c in h.children(y) {
            inspected += 1;
            probe.op();
            if mass[c - 1] >= ratio(h, c) - tol {
                y = c;
                continue 'descend;
            }
        }
        return Descent { node: y, inspected };
    }
}

/// A hierarchy that passed [`validate_assumptions`], ready for repeated
/// `O(k * depth)` descents.
#[derive(Debug, Clone, Copy)]
pub struct GreedyDescent<'a, T> {
    h: &'a Hierarchy<T>,
}

impl<'a, T: Scalar> GreedyDescent<'a, T> {
    /// Validates the assumptions once; fails with the first violation.
    pub fn new(h: &'a Hierarchy<T>) -> Result<Self, Error> {
        let report = validate_assumptions(h);
        match report.violations.first() {
            Some(v) => Err(Error::AssumptionsViolated(v.to_f64())),
            None => Ok(GreedyDescent { h }),
        }
    }

    pub fn hierarchy(&self) -> &'a Hierarchy<T> {
        self.h
    }

    pub fn descend(&self, stats: &SubtreeStats<T>) -> Result<Descent, Error> {
        self.descend_probed(stats, &mut ())
    }

    pub fn descend_probed<P: Probe>(
        &self,
        stats: &SubtreeStats<T>,
        probe: &mut P,
    ) -> Result<Descent, Error> {
        stats.check_len(self.h.len())?;
        Ok(threshold_descent(self.h, stats, probe))
    }
}

/// Bayes-optimal label by greedy descent. The reported risk comes from one
/// direct risk evaluation.
pub fn bayes_optimal_greedy<T: Scalar>(
    h: &Hierarchy<T>,
    p: &ProbVector<T>,
) -> Result<Prediction<T>, Error> {
    let greedy = GreedyDescent::new(h)?;
    let stats = SubtreeStats::compute(h, p)?;
    let node = greedy.descend(&stats)?.node;
    Ok(Prediction {
        node,
        risk: risk_unchecked(h, p, node),
        method: Method::Greedy,
    })
}
