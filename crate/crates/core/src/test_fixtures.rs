//! Hand-built trees shared by the unit tests.

/// Unit-weight symmetric tree: 1 -> {2, 3}, 2 -> {4, 5}.
pub const T5: &str = "\
n 5 root 1
edge 1 2 1.0 1.0
edge 1 3 1.0 1.0
edge 2 4 1.0 1.0
edge 2 5 1.0 1.0
";

/// Same topology; depth-2 edges are cheaper to climb (up = 0.5).
pub const T5A: &str = "\
n 5 root 1
edge 1 2 1.0 1.0
edge 1 3 1.0 1.0
edge 2 4 1.0 0.5
edge 2 5 1.0 0.5
";

/// Edge ratios fall from 1/2 to 1/3 below node 2.
pub const T5_DECREASING: &str = "\
n 5 root 1
edge 1 2 1.0 1.0
edge 1 3 1.0 1.0
edge 2 4 1.0 2.0
edge 2 5 1.0 2.0
";

/// Root 1 with leaves 2 and 3, unit weights.
pub const STAR3: &str = "\
n 3 root 1
edge 1 2 1 1
edge 1 3 1 1
";

pub const P5: [f64; 5] = [0.05, 0.15, 0.30, 0.25, 0.25];
