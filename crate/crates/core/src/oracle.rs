//! Brute-force Bayes risk: the reference every faster method is checked
//! against.

use crate::error::Error;
use crate::hierarchy::{Hierarchy, Label};
use crate::loss::distance;
use crate::scalar::Scalar;
use crate::stats::ProbVector;

/// Risks of every candidate prediction and the set of minimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgminReport<T> {
    risks: Vec<T>,
    min_risk: T,
    argmin_set: Vec<Label>,
}

impl<T: Scalar> ArgminReport<T> {
    /// Collects every label whose risk lies within [`Scalar::tolerance`] of
    /// the minimum. Entry `y - 1` of `risks` belongs to label `y`.
    ///
    /// # Panics
    /// If `risks` is empty.
    pub fn from_risks(risks: Vec<T>) -> Self {
        assert!(!risks.is_empty(), "risk table must not be empty");
        let min_risk = risks.iter().copied().fold(T::infinity(), T::min);
        let argmin_set = risks
            .iter()
            .enumerate()
            .filter(|(_, &r)| r - min_risk <= T::tolerance())
            .map(|(i, _)| i + 1)
            .collect();
        ArgminReport {
            risks,
            min_risk,
            argmin_set,
        }
    }

    pub fn risks(&self) -> &[T] {
        &self.risks
    }

    pub fn risk(&self, y: Label) -> T {
        self.risks[y - 1]
    }

    pub fn min_risk(&self) -> T {
        self.min_risk
    }

    /// Ascending list of minimizers.
    pub fn argmin_set(&self) -> &[Label] {
        &self.argmin_set
    }

    pub fn contains(&self, y: Label) -> bool {
        self.argmin_set.binary_search(&y).is_ok()
    }
}

/// Expected loss of predicting `yp`, summed directly over all true labels.
pub fn risk<T: Scalar>(h: &Hierarchy<T>, p: &ProbVector<T>, yp: Label) -> Result<T, Error> {
    h.check(yp)?;
    p.check_len(h.len())?;
    Ok(risk_unchecked(h, p, yp))
}

pub(crate) fn risk_unchecked<T: Scalar>(h: &Hierarchy<T>, p: &ProbVector<T>, yp: Label) -> T {
    h.labels().fold(T::zero(), |acc, i| {
        let pi = p.get(i);
        if pi == T::zero() {
            acc
        } else {
            acc + pi * distance(h, i, yp)
        }
    })
}

/// Risk table for every node, `O(n)` path walks per node.
pub fn bayes_optimal_bruteforce<T: Scalar>(
    h: &Hierarchy<T>,
    p: &ProbVector<T>,
) -> Result<ArgminReport<T>, Error> {
    p.check_len(h.len())?;
    let risks = h.labels().map(|yp| risk_unchecked(h, p, yp)).collect();
    Ok(ArgminReport::from_risks(risks))
}
