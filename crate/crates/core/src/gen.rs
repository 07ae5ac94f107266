//! Seeded random hierarchies and probability vectors.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; probability
//! vectors use stream 1 of the same seed so a tree and its vector can share
//! one seed without reusing draws.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;
use thiserror::Error;

use crate::hierarchy::{Edge, Hierarchy, Label};
use crate::scalar::Scalar;
use crate::stats::ProbVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

/// How edge weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightMode {
    /// Every weight is 1.
    SymmetricUnit,
    /// `down = up ~ U[0.1, 10]`.
    SymmetricRandom,
    /// Ratios inherited down each path, so the descent assumptions hold.
    AsymmetricValid,
    /// `down, up ~ U[0.1, 10]` independently.
    AsymmetricArbitrary,
}

impl WeightMode {
    pub const ALL: [WeightMode; 4] = [
        WeightMode::SymmetricUnit,
        WeightMode::SymmetricRandom,
        WeightMode::AsymmetricValid,
        WeightMode::AsymmetricArbitrary,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::SymmetricUnit => "symmetric-unit",
            WeightMode::SymmetricRandom => "symmetric-random",
            WeightMode::AsymmetricValid => "asymmetric-valid",
            WeightMode::AsymmetricArbitrary => "asymmetric-arbitrary",
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            WeightMode::SymmetricUnit | WeightMode::SymmetricRandom
        )
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WeightMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown weight mode `{s}`"))
    }
}

/// Smallest `1 - rho` the valid mode will draw. Without a floor the ratios
/// on long paths converge to 1 and the up weights underflow.
pub const MIN_RATIO_GAP: f64 = 1e-6;

/// Tree topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Shape {
    /// Each new node attaches to a uniformly chosen node with spare arity.
    #[default]
    Random,
    /// Complete k-ary tree in breadth-first label order.
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub nodes: usize,
    pub max_arity: usize,
    pub seed: u64,
    pub weight_mode: WeightMode,
    /// Gamma shape for [`random_simplex`].
    pub concentration: f64,
    pub shape: Shape,
}

impl GenSpec {
    pub fn new(nodes: usize, max_arity: usize, seed: u64, weight_mode: WeightMode) -> Self {
        GenSpec {
            nodes,
            max_arity,
            seed,
            weight_mode,
            concentration: 1.0,
            shape: Shape::Random,
        }
    }

    pub fn with_concentration(mut self, concentration: f64) -> Self {
        self.concentration = concentration;
        self
    }

    pub fn with_shape(mut self, shape: Shape) -> Self {
        self.shape = shape;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.nodes < 1 {
            return Err(GenError::InvalidSpec(
                "node count must be at least 1".into(),
            ));
        }
        if self.max_arity < 1 {
            return Err(GenError::InvalidSpec("arity must be at least 1".into()));
        }
        check_concentration(self.concentration)
    }
}

fn check_concentration(c: f64) -> Result<(), GenError> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(GenError::InvalidSpec(format!(
            "concentration must be positive, got {c}"
        )))
    }
}

/// Random hierarchy rooted at label 1.
pub fn random_tree<T: Scalar>(spec: &GenSpec) -> Result<Hierarchy<T>, GenError> {
    spec.validate()?;
    let n = spec.nodes;
    let k = spec.max_arity;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut parent: Vec<Label> = vec![0; n + 1];
    match spec.shape {
        Shape::Balanced => {
            for (y, slot) in parent.iter_mut().enumerate().skip(2) {
                *slot = (y - 2) / k + 1;
            }
        }
        Shape::Random => {
            let mut arity = vec![0usize; n + 1];
            let mut open: Vec<Label> = vec![1];
            for (y, slot_parent) in parent.iter_mut().enumerate().skip(2) {
                let slot = rng.random_range(0..open.len());
                let p = open[slot];
                *slot_parent = p;
                arity[p] += 1;
                if arity[p] == k {
                    open.swap_remove(slot);
                }
                open.push(y);
            }
        }
    }

    // Parents precede children in label order, so a parent's gap is set
    // before any child edge needs it. The gap is `1 - rho`; root edges
    // inherit 1/2.
    let mut gap = vec![0.5f64; n + 1];
    let mut edges = Vec::with_capacity(n - 1);
    for y in 2..=n {
        let p = parent[y];
        let (down, up) = match spec.weight_mode {
            WeightMode::SymmetricUnit => (1.0, 1.0),
            WeightMode::SymmetricRandom => {
                let w = rng.random_range(0.1..=10.0);
                (w, w)
            }
            WeightMode::AsymmetricValid => {
                let total = rng.random_range(0.2..=20.0);
                // rho uniform on [rho(parent), 1), floored away from 1.
                let shrink: f64 = rng.random_range(0.0..1.0);
                let g = (gap[p] * (1.0 - shrink)).max(MIN_RATIO_GAP.min(gap[p]));
                gap[y] = g;
                ((1.0 - g) * total, g * total)
            }
            WeightMode::AsymmetricArbitrary => {
                (rng.random_range(0.1..=10.0), rng.random_range(0.1..=10.0))
            }
        };
        edges.push(Edge::new(p, y, T::lit(down), T::lit(up)));
    }
    Ok(Hierarchy::from_edges(n, 1, edges).expect("generated edges form a valid tree"))
}

/// Normalized independent `Gamma(concentration, 1)` draws.
///
/// Small concentrations give peaked vectors, large ones diffuse vectors.
pub fn random_simplex<T: Scalar>(
    n: usize,
    seed: u64,
    concentration: f64,
) -> Result<ProbVector<T>, GenError> {
    if n < 1 {
        return Err(GenError::InvalidSpec(
            "node count must be at least 1".into(),
        ));
    }
    check_concentration(concentration)?;
    let gamma = Gamma::new(concentration, 1.0).map_err(|e| GenError::InvalidSpec(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.sample(gamma)).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 0.0 && sum.is_finite() {
            let values = draws.into_iter().map(|v| T::lit(v / sum)).collect();
            return Ok(ProbVector::normalized(values).expect("positive total"));
        }
    }
}

/// Replaces each edge's down and up weights by their average.
pub fn symmetrize<T: Scalar>(h: &Hierarchy<T>) -> Hierarchy<T> {
    h.map_weights(|e| {
        let w = (e.down + e.up) * T::half();
        (w, w)
    })
}
