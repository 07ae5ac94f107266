//! Bayes-optimal prediction over tree-structured label hierarchies.
//!
//! Given a rooted tree of labels with directed edge weights and a
//! conditional distribution `p` over the labels, the crate finds the label
//! minimizing the expected tree-distance loss in three ways:
//!
//! - [`oracle::bayes_optimal_bruteforce`] sums every path directly;
//! - [`fast::bayes_optimal_fast`] derives every node's risk from the subtree
//!   aggregates in [`stats`], `O(n k log n)` on balanced trees;
//! - [`greedy::bayes_optimal_greedy`] descends from the root in
//!   `O(k log n)` when the edge ratios satisfy [`greedy::validate_assumptions`].
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`). The `*64`
//! and `*32` aliases below fix the scalar type.

pub mod bench;
mod error;
pub mod fast;
pub mod gen;
pub mod greedy;
pub mod hierarchy;
pub mod loss;
pub mod oracle;
pub mod probe;
pub mod scalar;
pub mod stats;

#[cfg(test)]
mod test_fixtures;

pub use error::Error;
pub use fast::{bayes_optimal_fast, risk_all_nodes_fast, Method, Prediction};
pub use gen::{random_simplex, random_tree, symmetrize, GenSpec, Shape, WeightMode};
pub use greedy::{
    bayes_optimal_greedy, check_conditions, validate_assumptions, AssumptionReport,
    ConditionCertificate, GreedyDescent, Violation,
};
pub use hierarchy::{parse_hierarchy, Edge, Hierarchy, HierarchyError, Label};
pub use loss::{edge_ratio, loss_vector, tree_distance, EdgeRatio};
pub use oracle::{bayes_optimal_bruteforce, risk, ArgminReport};
pub use scalar::Scalar;
pub use stats::{parse_probs, ProbVector, SubtreeStats};

pub type Hierarchy64 = Hierarchy<f64>;
pub type Hierarchy32 = Hierarchy<f32>;
pub type ProbVector64 = ProbVector<f64>;
pub type ProbVector32 = ProbVector<f32>;
pub type SubtreeStats64 = SubtreeStats<f64>;
pub type SubtreeStats32 = SubtreeStats<f32>;
pub type ArgminReport64 = ArgminReport<f64>;
pub type Prediction64 = Prediction<f64>;
pub type AssumptionReport64 = AssumptionReport<f64>;
pub type ConditionCertificate64 = ConditionCertificate<f64>;
