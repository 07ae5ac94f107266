#![allow(dead_code)]

use treeloss::{random_simplex, random_tree, GenSpec, Hierarchy, Label, ProbVector, WeightMode};

/// Distance by depth-first search over the undirected tree, charging the
/// directed weight of each traversed edge. Shares nothing with the library's
/// ancestor walk.
pub fn dfs_distance(h: &Hierarchy<f64>, from: Label, to: Label) -> f64 {
    let mut dist = vec![f64::NAN; h.len() + 1];
    dist[from] = 0.0;
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        let mut step = |v: Label, w: f64, stack: &mut Vec<Label>| {
            if dist[v].is_nan() {
                dist[v] = dist[u] + w;
                stack.push(v);
            }
        };
        for &c in h.children(u) {
            step(c, h.down_weight(c).unwrap(), &mut stack);
        }
        if let Some(p) = h.parent(u) {
            step(p, h.up_weight(u).unwrap(), &mut stack);
        }
    }
    dist[to]
}

/// Labels in the subtree of `y`, found by checking ancestry of every label.
pub fn descendants(h: &Hierarchy<f64>, y: Label) -> Vec<Label> {
    h.labels()
        .filter(|&i| i == y || h.ancestors(i).any(|a| a == y))
        .collect()
}

pub fn instance(
    n: usize,
    k: usize,
    seed: u64,
    mode: WeightMode,
    concentration: f64,
) -> (Hierarchy<f64>, ProbVector<f64>) {
    let h = random_tree(&GenSpec::new(n, k, seed, mode)).unwrap();
    let p = random_simplex(n, seed, concentration).unwrap();
    (h, p)
}
