//! Seeded instance generation and suite execution.

use crossnorm::rng::{derive_seed, gaussian_matrix, gaussian_vector, seeded, SeededRng};
use crossnorm::verify::{
    check_corollary_44, check_gamma, check_prop_32_dual_bound, check_remark_chain, check_sandwich,
    check_theorem_41, check_uniform_identity, question4, CheckRecord,
};
use crossnorm::{Budget, Exponent, LpSpace, OperatorSpaces, OperatorTensor, Tensor};
use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Dims, Plan, Suite, SuiteConfig};

/// A check record tagged with where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub suite: Suite,
    pub trial: usize,
    #[serde(flatten)]
    pub record: CheckRecord,
}

fn space(n: usize, p: Exponent) -> crossnorm::Result<LpSpace> {
    LpSpace::new(n, p)
}

fn operator_spaces(d: Dims, p: Exponent) -> crossnorm::Result<OperatorSpaces> {
    let [x, y, v, w] = d.quad();
    Ok(OperatorSpaces::new(
        space(x, p)?,
        space(y, p)?,
        space(v, p)?,
        space(w, p)?,
    ))
}

/// Gaussian tensor; every seventh trial is a single tensor.
fn random_tensor(rng: &mut SeededRng, trial: usize, n: usize, m: usize) -> Array2<f64> {
    if trial % 7 == 6 {
        let x = gaussian_vector::<f64, _>(rng, n);
        let y = gaussian_vector::<f64, _>(rng, m);
        Array2::from_shape_fn((n, m), |(i, j)| x[i] * y[j])
    } else {
        gaussian_matrix(rng, n, m)
    }
}

/// `1 + trial mod 3` Gaussian terms.
fn random_operator(
    rng: &mut SeededRng,
    trial: usize,
    sp: OperatorSpaces,
) -> crossnorm::Result<OperatorTensor<f64>> {
    let (a, b) = (sp.a_shape(), sp.b_shape());
    let terms = (0..1 + trial % 3)
        .map(|_| {
            (
                gaussian_matrix(rng, a.0, a.1),
                gaussian_matrix(rng, b.0, b.1),
            )
        })
        .collect();
    OperatorTensor::new(terms, sp)
}

/// Sum of `1 + trial mod 2` Gaussian rank-one matrices.
fn random_low_rank(rng: &mut SeededRng, trial: usize, shape: (usize, usize)) -> Array2<f64> {
    let mut m = Array2::zeros(shape);
    for _ in 0..1 + trial % 2 {
        let u = gaussian_vector::<f64, _>(rng, shape.0);
        let v = gaussian_vector::<f64, _>(rng, shape.1);
        m += &Array2::from_shape_fn(shape, |(i, j)| u[i] * v[j]);
    }
    m
}

pub fn trial_seed(seed: u64, suite: Suite, trial: usize) -> u64 {
    let s = Suite::EACH.iter().position(|&x| x == suite).unwrap_or(0) as u64;
    derive_seed(derive_seed(seed, s), trial as u64)
}

/// Runs one trial of one suite.
pub fn run_trial(cfg: &SuiteConfig, plan: &Plan, trial: usize) -> crossnorm::Result<TrialRecord> {
    let seed = trial_seed(cfg.seed, plan.suite, trial);
    let mut rng = seeded(seed);
    let budget = Budget::default()
        .with_seed(derive_seed(seed, u64::MAX))
        .with_restarts(cfg.restarts)
        .with_max_iters(cfg.max_iters);
    let (dims, p, tag) = plan.combination(trial);
    let tol = cfg.tol;
    let record = if plan.suite.is_operator() {
        let sp = operator_spaces(dims, p)?;
        match plan.suite {
            Suite::UniformIdentity => {
                let a = gaussian_matrix::<f64, _>(&mut rng, sp.a_shape().0, sp.a_shape().1);
                let b = gaussian_matrix(&mut rng, sp.b_shape().0, sp.b_shape().1);
                check_uniform_identity(&a, &b, &sp, tag, &budget, tol)?
            }
            Suite::Prop32 => {
                let phi = random_low_rank(&mut rng, trial, sp.a_shape());
                let eta = random_low_rank(&mut rng, trial, sp.b_shape());
                check_prop_32_dual_bound(&phi, &eta, &sp, tag, &budget, tol)?
            }
            suite => {
                let l = random_operator(&mut rng, trial, sp)?;
                match suite {
                    Suite::Theorem41 => check_theorem_41(&l, tag, &budget, tol)?,
                    Suite::Corollary44 => check_corollary_44(&l, tag, &budget, tol)?,
                    Suite::RemarkChain => check_remark_chain(&l, tag, &budget, tol)?,
                    _ => question4(&l, tag, &budget, tol)?,
                }
            }
        }
    } else {
        let (n, m) = dims.pair();
        let t = Tensor::new(
            random_tensor(&mut rng, trial, n, m),
            space(n, p)?,
            space(m, p)?,
        )?;
        match plan.suite {
            Suite::Sandwich => check_sandwich(&t, tag, &budget, tol)?,
            _ => check_gamma(&t, tag, &budget, tol)?,
        }
    };
    let mut record = record;
    record.seed = seed;
    Ok(TrialRecord {
        suite: plan.suite,
        trial,
        record,
    })
}

/// All records of the configured suites, ordered by suite then trial.
pub fn run(cfg: &SuiteConfig) -> crossnorm::Result<Vec<TrialRecord>> {
    let mut out = Vec::new();
    for suite in cfg.suite.expand() {
        let plan = cfg.plan(suite);
        let records: crossnorm::Result<Vec<TrialRecord>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &plan, t))
            .collect();
        out.extend(records?);
    }
    Ok(out)
}
