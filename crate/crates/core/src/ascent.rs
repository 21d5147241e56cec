//! Multi-start maximization of scale-invariant ratios `num(z) / den(z)`.
//!
//! Every restart runs a monotone fixed-point phase (when the problem offers
//! one) followed by a normalized subgradient phase with geometric step decay.
//! Only points actually evaluated are reported, so the best value is a lower
//! bound of the supremum whenever the point evaluations are.

use ndarray::Array1;
use rayon::prelude::*;

use crate::estimate::{Budget, Direction};
use crate::rng::{derive_seed, gaussian_vector, seeded, SeededRng};
use crate::Scalar;

/// Numerator and denominator at a point, with subgradients.
pub(crate) struct RatioPoint<T: Scalar> {
    pub num: T,
    pub den: T,
    pub num_dir: Direction,
    pub den_dir: Direction,
    pub grad_num: Array1<T>,
    pub grad_den: Array1<T>,
}

impl<T: Scalar> RatioPoint<T> {
    pub fn ratio(&self) -> T {
        self.num / self.den
    }

    pub fn direction(&self) -> Direction {
        Direction::ratio_sup(self.num_dir, self.den_dir)
    }

    fn gradient(&self) -> Array1<T> {
        (&self.grad_num * self.den - &self.grad_den * self.num) / (self.den * self.den)
    }
}

pub(crate) trait RatioProblem<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    /// `None` when the denominator vanishes or the point is unusable.
    fn evaluate(&self, z: &Array1<T>) -> Option<RatioPoint<T>>;

    fn start(&self, rng: &mut SeededRng) -> Array1<T> {
        gaussian_vector(rng, self.dim())
    }

    /// One monotone improvement step, if the problem has one.
    fn polish(&self, _z: &Array1<T>, _at: &RatioPoint<T>) -> Option<Array1<T>> {
        None
    }
}

#[derive(Debug, Clone)]
pub(crate) struct AscentResult<T: Scalar> {
    pub value: T,
    pub direction: Direction,
    pub point: Array1<T>,
    pub restarts: usize,
}

fn unit<T: Scalar>(z: Array1<T>) -> Option<Array1<T>> {
    let n = z.iter().map(|&v| v * v).sum::<T>().sqrt();
    (n > T::zero() && n.is_finite()).then(|| z / n)
}

struct Best<T: Scalar> {
    value: T,
    direction: Direction,
    point: Array1<T>,
}

impl<T: Scalar> Best<T> {
    fn offer(&mut self, z: &Array1<T>, at: &RatioPoint<T>) -> bool {
        let r = at.ratio();
        if r.is_finite() && r > self.value {
            self.value = r;
            self.direction = at.direction();
            self.point = z.clone();
            true
        } else {
            false
        }
    }
}

fn run_restart<T: Scalar, P: RatioProblem<T>>(
    problem: &P,
    start: Array1<T>,
    budget: &Budget,
    iterate: bool,
) -> Option<Best<T>> {
    let mut z = unit(start)?;
    let mut at = problem.evaluate(&z)?;
    let mut best = Best {
        value: T::neg_infinity(),
        direction: at.direction(),
        point: z.clone(),
    };
    best.offer(&z, &at);
    if !iterate {
        return Some(best);
    }
    let tiny = T::lit(1e-15);
    for _ in 0..budget.polish_iters {
        let Some(next) = problem.polish(&z, &at).and_then(unit) else {
            break;
        };
        let Some(next_at) = problem.evaluate(&next) else {
            break;
        };
        let (old, new) = (at.ratio(), next_at.ratio());
        if !(new > old) {
            break;
        }
        z = next;
        at = next_at;
        best.offer(&z, &at);
        if new - old <= tiny * new.abs() {
            break;
        }
    }
    // continue from the best point found so far
    z = best.point.clone();
    at = problem.evaluate(&z)?;
    let mut step = T::lit(budget.step0);
    let decay = T::lit(budget.decay);
    for _ in 0..budget.max_iters {
        let g = at.gradient();
        let gn = g.iter().map(|&v| v * v).sum::<T>().sqrt();
        if !(gn > T::zero()) || !gn.is_finite() {
            break;
        }
        let Some(next) = unit(&z + &(g * (step / gn))) else {
            break;
        };
        step *= decay;
        match problem.evaluate(&next) {
            Some(next_at) => {
                z = next;
                at = next_at;
                best.offer(&z, &at);
            }
            None => continue,
        }
    }
    Some(best)
}

/// Maximizes the ratio over `fixed_starts` followed by `budget.restarts`
/// seeded Gaussian starts. With zero restarts only the first seeded start is
/// evaluated, without iterating. Ties go to the lowest start index.
pub(crate) fn maximize_ratio<T: Scalar, P: RatioProblem<T>>(
    problem: &P,
    budget: &Budget,
    fixed_starts: &[Array1<T>],
) -> Option<AscentResult<T>> {
    let iterate = budget.restarts > 0;
    let random = budget.restarts.max(1);
    let total = fixed_starts.len() + random;
    let results: Vec<Option<Best<T>>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let start = if i < fixed_starts.len() {
                fixed_starts[i].clone()
            } else {
                let r = (i - fixed_starts.len()) as u64;
                let mut rng = seeded(derive_seed(budget.seed, r));
                problem.start(&mut rng)
            };
            run_restart(problem, start, budget, iterate)
        })
        .collect();
    let mut best: Option<Best<T>> = None;
    for b in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|cur| b.value > cur.value) {
            best = Some(b);
        }
    }
    best.map(|b| AscentResult {
        value: b.value,
        direction: b.direction,
        point: b.point,
        restarts: total,
    })
}
