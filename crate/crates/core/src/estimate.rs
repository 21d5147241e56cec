//! Norm values with certified bound directions, witnesses and search budgets.

use std::fmt;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::tensor::{Decomposition, OperatorTensor};
use crate::Scalar;

/// What a computed value certifies about the true norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Closed form; equal to the true value up to rounding.
    Exact,
    /// The true value is at least this (sup-type searches).
    LowerBound,
    /// The true value is at most this (feasible representations).
    UpperBound,
    /// No certified relation; excluded from acceptance comparisons.
    Heuristic,
}

impl Direction {
    /// Direction of a sup over ratios `num / den` evaluated at explicit points.
    ///
    /// Certified only when each point value is a lower bound of the true
    /// ratio at that point: numerator in {Exact, LowerBound} and denominator
    /// in {Exact, UpperBound}.
    pub fn ratio_sup(num: Direction, den: Direction) -> Direction {
        use Direction::*;
        match (num, den) {
            (Exact | LowerBound, Exact | UpperBound) => LowerBound,
            _ => Heuristic,
        }
    }

    pub fn is_certified(self) -> bool {
        self != Direction::Heuristic
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Direction::Exact => "exact",
            Direction::LowerBound => "lower",
            Direction::UpperBound => "upper",
            Direction::Heuristic => "heuristic",
        };
        f.write_str(s)
    }
}

/// Evidence attached to an estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness<T: Scalar> {
    /// Unit-norm dual functionals `(f, g)` with `|fᵀ F g|` equal to the value.
    Functionals { f: Array1<T>, g: Array1<T> },
    /// A feasible representation whose cost equals the value.
    Decomposition(Decomposition<T>),
    /// Maximizing vector of an operator-norm search.
    Vector(Array1<T>),
    /// Maximizing matrix (tensor, operator or pairing) of a ratio search.
    Matrix(Array2<T>),
    /// Maximizing operator tensor of a functional-norm search.
    OperatorTensor(OperatorTensor<T>),
    /// Unit vectors `(x, w, y, z)` attaining `|Σ_j (wᵀA_j x)(zᵀB_j y)|`.
    RankOnePairings {
        x: Array1<T>,
        w: Array1<T>,
        y: Array1<T>,
        z: Array1<T>,
    },
}

/// A norm value together with its bound direction and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate<T: Scalar> {
    pub value: T,
    pub direction: Direction,
    pub witness: Option<Witness<T>>,
    pub method: String,
    pub restarts: usize,
    pub seed: u64,
}

impl<T: Scalar> NormEstimate<T> {
    pub fn exact(value: T, method: impl Into<String>) -> Self {
        NormEstimate {
            value,
            direction: Direction::Exact,
            witness: None,
            method: method.into(),
            restarts: 0,
            seed: 0,
        }
    }

    pub fn zero() -> Self {
        Self::exact(T::zero(), "zero")
    }

    pub fn with_witness(mut self, witness: Witness<T>) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::from_estimate(self.value.to_f64_lossy(), self.direction)
    }
}

/// Interval enclosure `[lo, hi]` of a nonnegative true value, with a point
/// estimate. `None` means unbounded on that side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub value: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Bounds {
    pub fn from_estimate(value: f64, direction: Direction) -> Self {
        let (lo, hi) = match direction {
            Direction::Exact => (Some(value), Some(value)),
            Direction::LowerBound => (Some(value), None),
            Direction::UpperBound => (Some(0.0), Some(value)),
            Direction::Heuristic => (Some(0.0), None),
        };
        Bounds { value, lo, hi }
    }

    pub fn exact(value: f64) -> Self {
        Self::from_estimate(value, Direction::Exact)
    }

    /// Direction implied by the enclosure: which certified end, if any, the
    /// point value sits on.
    pub fn direction(&self) -> Direction {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => Direction::Exact,
            (Some(l), _) if l == self.value => Direction::LowerBound,
            (_, Some(h)) if h == self.value => Direction::UpperBound,
            _ => Direction::Heuristic,
        }
    }

    /// Two enclosures of the same quantity. The point value of `self` is
    /// kept unless `other` is exact.
    pub fn intersect(self, other: Bounds) -> Bounds {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let value = if other.direction() == Direction::Exact {
            other.value
        } else {
            self.value
        };
        Bounds { value, lo, hi }
    }

    /// Product of two nonnegative enclosures.
    pub fn mul(self, other: Bounds) -> Bounds {
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a * b),
            (Some(a), None) | (None, Some(a)) if a == 0.0 => Some(0.0),
            _ => None,
        };
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a * b),
            _ => Some(0.0),
        };
        Bounds {
            value: self.value * other.value,
            lo,
            hi,
        }
    }

    /// Reciprocal of a positive enclosure.
    pub fn recip(self) -> Bounds {
        let lo = self
            .hi
            .map(|h| if h > 0.0 { 1.0 / h } else { f64::INFINITY });
        let hi = match self.lo {
            Some(l) if l > 0.0 => Some(1.0 / l),
            _ => None,
        };
        Bounds {
            value: 1.0 / self.value,
            lo: lo.or(Some(0.0)),
            hi,
        }
    }
}

/// Search budget for multi-start estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub restarts: usize,
    pub max_iters: usize,
    /// Monotone fixed-point iterations run from each start before the
    /// subgradient phase.
    pub polish_iters: usize,
    pub step0: f64,
    pub decay: f64,
    pub seed: u64,
    /// Enumeration cap for ℓ∞ sign vectors.
    pub enumeration_cap: usize,
    /// Maximum number of terms in operator tensors searched by functional norms.
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            restarts: 32,
            max_iters: 200,
            polish_iters: 100,
            step0: 0.5,
            decay: 0.9,
            seed: 0,
            enumeration_cap: crate::spaces::DEFAULT_ENUMERATION_CAP,
            max_terms: 2,
        }
    }
}

impl Budget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    /// A budget with no search at all.
    pub fn none() -> Self {
        Budget {
            restarts: 0,
            max_iters: 0,
            polish_iters: 0,
            ..Budget::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.restarts == 0 || (self.max_iters == 0 && self.polish_iters == 0)
    }
}
