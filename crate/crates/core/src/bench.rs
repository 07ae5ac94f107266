//! Wall-clock timing of the three methods on balanced trees.
//!
//! Each method is timed on its own inputs only: the subtree aggregates and
//! the assumption check are per-instance preprocessing and stay outside the
//! timed region for the fast and greedy methods. Short calls are batched
//! until a sample lasts at least [`BenchConfig::min_sample`], and the
//! reported figure is the median per-call time across repeats.

use std::hint::black_box;
use std::time::{Duration, Instant};

use crate::fast::{risk_all_nodes_fast, smallest_minimizer, Method};
use crate::gen::{random_simplex, random_tree, GenError, GenSpec, Shape, WeightMode};
use crate::greedy::GreedyDescent;
use crate::hierarchy::Hierarchy;
use crate::oracle::bayes_optimal_bruteforce;
use crate::stats::{ProbVector, SubtreeStats};

/// Sizes above this skip the brute-force method unless forced.
pub const DEFAULT_BRUTEFORCE_CUTOFF: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub arity: usize,
    pub repeats: usize,
    pub seed: u64,
    /// `None` never skips brute force.
    pub bruteforce_cutoff: Option<usize>,
    pub methods: Vec<Method>,
    pub min_sample: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1 << 10, 1 << 12, 1 << 14],
            arity: 2,
            repeats: 5,
            seed: 0,
            bruteforce_cutoff: Some(DEFAULT_BRUTEFORCE_CUTOFF),
            methods: Method::ALL.to_vec(),
            min_sample: Duration::from_millis(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub method: Method,
    pub median_elapsed_ns: f64,
}

/// Balanced `k`-ary tree with assumption-satisfying weights and a diffuse
/// probability vector.
pub fn bench_instance(
    n: usize,
    k: usize,
    seed: u64,
) -> Result<(Hierarchy<f64>, ProbVector<f64>), GenError> {
    let spec = GenSpec::new(n, k, seed, WeightMode::AsymmetricValid).with_shape(Shape::Balanced);
    let h = random_tree(&spec)?;
    let p = random_simplex(n, seed, 1.0)?;
    Ok((h, p))
}

/// Median per-call time of `f` in nanoseconds.
pub fn median_ns<R, F: FnMut() -> R>(repeats: usize, min_sample: Duration, mut f: F) -> f64 {
    let mut iters: u32 = 1;
    loop {
        let start = Instant::now();
        for _ in 0..iters {
            black_box(f());
        }
        if start.elapsed() >= min_sample || iters >= 1 << 24 {
            break;
        }
        iters *= 2;
    }
    let mut samples: Vec<f64> = (0..repeats.max(1))
        .map(|_| {
            let start = Instant::now();
            for _ in 0..iters {
                black_box(f());
            }
            start.elapsed().as_nanos() as f64 / f64::from(iters)
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

/// Times `method` on one instance.
pub fn time_method(
    h: &Hierarchy<f64>,
    p: &ProbVector<f64>,
    method: Method,
    repeats: usize,
    min_sample: Duration,
) -> f64 {
    let stats = SubtreeStats::compute(h, p).expect("instance sizes agree");
    match method {
        Method::Bruteforce => median_ns(repeats, min_sample, || {
            bayes_optimal_bruteforce(black_box(h), black_box(p)).map(|r| r.min_risk())
        }),
        Method::Fast => median_ns(repeats, min_sample, || {
            let risks = risk_all_nodes_fast(black_box(h), black_box(p), black_box(&stats))
                .expect("instance sizes agree");
            smallest_minimizer(&risks)
        }),
        Method::Greedy => {
            let greedy = GreedyDescent::new(h).expect("bench instances satisfy the assumptions");
            median_ns(repeats, min_sample, || {
                greedy.descend(black_box(&stats)).map(|d| d.node)
            })
        }
    }
}

/// One row per (size, method), brute force omitted above the cutoff.
pub fn run(config: &BenchConfig) -> Result<Vec<BenchRow>, GenError> {
    let mut rows = Vec::new();
    for &size in &config.sizes {
        let (h, p) = bench_instance(size, config.arity, config.seed)?;
        for &method in &config.methods {
            let skip = method == Method::Bruteforce
                && config.bruteforce_cutoff.is_some_and(|cut| size > cut);
            if skip {
                continue;
            }
            rows.push(BenchRow {
                size,
                method,
                median_elapsed_ns: time_method(&h, &p, method, config.repeats, config.min_sample),
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of `ln(time)` against `ln(size)`.
///
/// # Panics
/// With fewer than two points or a non-positive coordinate.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "need at least two points");
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| {
            assert!(x > 0.0 && y > 0.0, "log-log fit needs positive values");
            (x.ln(), y.ln())
        })
        .collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
