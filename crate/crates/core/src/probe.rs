//! Zero-cost instrumentation hooks for the traversal routines.
//!
//! Every hot loop is generic over a [`Probe`]; passing `&mut ()` compiles the
//! hooks away. Tests pass an [`OpCount`] or [`VisitLog`] to check the
//! operation bounds.

use crate::hierarchy::Label;

pub trait Probe {
    /// One unit of constant-time work.
    #[inline(always)]
    fn op(&mut self) {}

    /// A traversal touched `node`.
    #[inline(always)]
    fn visit(&mut self, _node: Label) {}
}

impl Probe for () {}

/// Counts basic operations and visits together.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCount(pub u64);

impl Probe for OpCount {
    fn op(&mut self) {
        self.0 += 1;
    }

    fn visit(&mut self, _node: Label) {
        self.0 += 1;
    }
}

/// Per-node visit counts; entry `y - 1` belongs to label `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitLog(pub Vec<u32>);

impl VisitLog {
    pub fn new(n: usize) -> Self {
        VisitLog(vec![0; n])
    }
}

impl Probe for VisitLog {
    fn visit(&mut self, node: Label) {
        self.0[node - 1] += 1;
    }
}
