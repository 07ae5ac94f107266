//! Directed tree-distance loss.
//!
//! The loss of predicting `yp` when the true label is `y` is the weight of
//! the path `y -> lca(y, yp) -> yp`: up weights while climbing out of `y`,
//! down weights while descending into `yp`. With equal up and down weights
//! this is the ordinary symmetric tree distance.

use serde::Serialize;
use thiserror::Error;

use crate::hierarchy::{Hierarchy, HierarchyError, Label};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LossError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("node {0} is the root and has no parent edge")]
    RootHasNoEdge(Label),
}

/// Loss of predicting `yp` when the truth is `y`.
pub fn tree_distance<T: Scalar>(h: &Hierarchy<T>, y: Label, yp: Label) -> Result<T, LossError> {
    h.check(y)?;
    h.check(yp)?;
    Ok(distance(h, y, yp))
}

/// Unchecked path walk with depth equalization.
pub(crate) fn distance<T: Scalar>(h: &Hierarchy<T>, y: Label, yp: Label) -> T {
    let (mut a, mut b) = (y, yp);
    let mut climb = T::zero();
    let mut descend = T::zero();
    while h.depth(a) > h.depth(b) {
        climb = climb + h.up(a);
        a = h.parent_raw(a);
    }
    while h.depth(b) > h.depth(a) {
        descend = descend + h.down(b);
        b = h.parent_raw(b);
    }
    while a != b {
        climb = climb + h.up(a);
        descend = descend + h.down(b);
        a = h.parent_raw(a);
        b = h.parent_raw(b);
    }
    climb + descend
}

/// Column of losses for predicting `yp`; entry `i - 1` is the loss when the
/// truth is label `i`.
pub fn loss_vector<T: Scalar>(h: &Hierarchy<T>, yp: Label) -> Result<Vec<T>, LossError> {
    h.check(yp)?;
    Ok(h.labels().map(|i| distance(h, i, yp)).collect())
}

/// Down-weight share of the edge into a non-root node:
/// `down / (down + up)`, always in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeRatio<T> {
    pub node: Label,
    pub rho: T,
}

pub fn edge_ratio<T: Scalar>(h: &Hierarchy<T>, y: Label) -> Result<EdgeRatio<T>, LossError> {
    h.check(y)?;
    if y == h.root() {
        return Err(LossError::RootHasNoEdge(y));
    }
    Ok(EdgeRatio {
        node: y,
        rho: ratio(h, y),
    })
}

#[inline]
pub(crate) fn ratio<T: Scalar>(h: &Hierarchy<T>, y: Label) -> T {
    let down = h.down(y);
    down / (down + h.up(y))
}
