//! Crossnorms on `X⊗Y`: injective, projective and the entrywise-ℓp family.
//!
//! Closed forms are used where they exist and are reported as `Exact`.
//! Otherwise the injective norm is searched from below (a `LowerBound` with a
//! functional-pair witness) and the projective norm from above (an
//! `UpperBound` with an exactly feasible decomposition).

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::ascent::{maximize_ratio, RatioPoint, RatioProblem};
use crate::error::{dim_err, Error, Result};
use crate::estimate::{Budget, Direction, NormEstimate, Witness};
use crate::linalg::{polar_factor, svd};
use crate::rng::{derive_seed, gaussian_matrix, seeded};
use crate::spaces::{
    lp_norm, lp_norm_iter, norming_functional, unit_ball_extreme_points_capped, Exponent,
    Functional, LpSpace,
};
use crate::tensor::{outer, Decomposition, Tensor};
use crate::Scalar;

/// Which crossnorm equips a tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CrossnormTag {
    Injective,
    Projective,
    /// Entrywise ℓp norm of the coefficient matrix; only for `ℓp⊗ℓp`.
    EntrywiseP(Exponent),
    /// Frobenius norm on `ℓ2⊗ℓ2` (same as `EntrywiseP(2)`).
    Hilbertian,
}

impl CrossnormTag {
    /// Checks that the tag can equip `x⊗y`.
    pub fn check_attachable(&self, x: &LpSpace, y: &LpSpace) -> Result<()> {
        match self {
            CrossnormTag::Injective | CrossnormTag::Projective => Ok(()),
            CrossnormTag::EntrywiseP(p) if x.p() == *p && y.p() == *p => Ok(()),
            CrossnormTag::Hilbertian if x.p().is_two() && y.p().is_two() => Ok(()),
            _ => Err(Error::Capability(format!("{self} cannot equip {x}⊗{y}"))),
        }
    }

    pub fn is_attachable(&self, x: &LpSpace, y: &LpSpace) -> bool {
        self.check_attachable(x, y).is_ok()
    }

    /// `Hilbertian` and `EntrywiseP(2)` name the same norm.
    pub fn canonical(self) -> CrossnormTag {
        match self {
            CrossnormTag::EntrywiseP(p) if p.is_two() => CrossnormTag::Hilbertian,
            t => t,
        }
    }
}

impl fmt::Display for CrossnormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossnormTag::Injective => f.write_str("injective"),
            CrossnormTag::Projective => f.write_str("projective"),
            CrossnormTag::EntrywiseP(p) => write!(f, "entrywise:{p}"),
            CrossnormTag::Hilbertian => f.write_str("hilbertian"),
        }
    }
}

impl FromStr for CrossnormTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "injective" | "inj" | "vee" => Ok(CrossnormTag::Injective),
            "projective" | "proj" | "wedge" => Ok(CrossnormTag::Projective),
            "hilbertian" | "frobenius" => Ok(CrossnormTag::Hilbertian),
            _ => match t.strip_prefix("entrywise:") {
                Some(p) => Ok(CrossnormTag::EntrywiseP(p.parse()?)),
                None => Err(Error::Input(format!("unknown crossnorm tag {s:?}"))),
            },
        }
    }
}

impl TryFrom<String> for CrossnormTag {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CrossnormTag> for String {
    fn from(t: CrossnormTag) -> String {
        t.to_string()
    }
}

/// `(fᵀ F g)`, the value of `f⊗g` on `F`.
pub fn dual_injective_pair_value<T: Scalar>(
    f: &Functional<T>,
    g: &Functional<T>,
    t: &Tensor<T>,
) -> Result<T> {
    if f.space().dim() != t.x_space().dim() || g.space().dim() != t.y_space().dim() {
        return dim_err(format!(
            "functionals of lengths {} and {} on a {:?} tensor",
            f.space().dim(),
            g.space().dim(),
            t.entries().dim()
        ));
    }
    Ok(f.coefficients().dot(&t.entries().dot(g.coefficients())))
}

/// A norm value with a subgradient at the evaluated tensor.
pub(crate) struct Subgradient<T: Scalar> {
    pub estimate: NormEstimate<T>,
    pub grad: Array2<T>,
}

// ---------------------------------------------------------------- injective

/// `injective_norm(F)`: `sup_{‖f‖,‖g‖≤1} |fᵀ F g|`.
pub fn injective_norm<T: Scalar>(t: &Tensor<T>, budget: &Budget) -> NormEstimate<T> {
    injective_with_subgradient(t, budget).estimate
}

pub(crate) fn injective_with_subgradient<T: Scalar>(
    t: &Tensor<T>,
    budget: &Budget,
) -> Subgradient<T> {
    let (xs, ys) = (*t.x_space(), *t.y_space());
    if t.is_zero() {
        return Subgradient {
            estimate: NormEstimate::zero(),
            grad: Array2::zeros(t.entries().dim()),
        };
    }
    let (f, g, est) = if xs.p().is_two() && ys.p().is_two() {
        let d = svd(t.entries().view());
        let (f, g) = (d.u.column(0).to_owned(), d.v.column(0).to_owned());
        (f, g, NormEstimate::exact(d.spectral(), "spectral"))
    } else if let Some((f, g, v)) = enumerate_injective(t, budget.enumeration_cap) {
        (f, g, NormEstimate::exact(v, "dual-extreme-points"))
    } else if let Some((g, f, v)) = enumerate_injective(&t.transposed(), budget.enumeration_cap) {
        (f, g, NormEstimate::exact(v, "dual-extreme-points"))
    } else {
        search_injective(t, budget)
    };
    let s = f.dot(&t.entries().dot(&g)).sign0();
    let grad = outer(f.view(), g.view()) * s;
    let estimate = est.with_witness(Witness::Functionals { f, g });
    Subgradient { estimate, grad }
}

/// `max_{f ∈ ext B_{X*}} ‖Fᵀ f‖_Y` when the dual ball of `X` is a polytope
/// within the enumeration cap.
fn enumerate_injective<T: Scalar>(t: &Tensor<T>, cap: usize) -> Option<(Array1<T>, Array1<T>, T)> {
    let (xs, ys) = (*t.x_space(), *t.y_space());
    let points = unit_ball_extreme_points_capped::<T>(&xs.dual(), cap).ok()?;
    let mut best: Option<(Array1<T>, T)> = None;
    for f in points {
        let v = lp_norm(t.entries().t().dot(&f).view(), ys.p());
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((f, v));
        }
    }
    let (f, v) = best?;
    let g = norming_functional(t.entries().t().dot(&f).view(), ys.p());
    Some((f, g, v))
}

/// Ratio `‖Fᵀ f‖_Y / ‖f‖_{X*}` over `f ∈ ℝⁿ`.
struct InjectiveProblem<'a, T: Scalar> {
    m: &'a Array2<T>,
    xd: Exponent,
    y: Exponent,
}

impl<T: Scalar> RatioProblem<T> for InjectiveProblem<'_, T> {
    fn dim(&self) -> usize {
        self.m.nrows()
    }

    fn evaluate(&self, f: &Array1<T>) -> Option<RatioPoint<T>> {
        let den = lp_norm(f.view(), self.xd);
        if !(den > T::zero()) {
            return None;
        }
        let img = self.m.t().dot(f);
        let num = lp_norm(img.view(), self.y);
        let g = norming_functional(img.view(), self.y);
        Some(RatioPoint {
            num,
            den,
            num_dir: Direction::Exact,
            den_dir: Direction::Exact,
            grad_num: self.m.dot(&g),
            grad_den: norming_functional(f.view(), self.xd),
        })
    }

    fn polish(&self, f: &Array1<T>, _at: &RatioPoint<T>) -> Option<Array1<T>> {
        let g = norming_functional(self.m.t().dot(f).view(), self.y);
        let c = self.m.dot(&g);
        Some(norming_functional(c.view(), self.xd.dual()))
    }
}

fn search_injective<T: Scalar>(
    t: &Tensor<T>,
    budget: &Budget,
) -> (Array1<T>, Array1<T>, NormEstimate<T>) {
    // search over the smaller factor
    if t.x_space().dim() > t.y_space().dim() {
        let (g, f, est) = search_injective(&t.transposed(), budget);
        return (f, g, est);
    }
    let problem = InjectiveProblem {
        m: t.entries(),
        xd: t.x_space().p().dual(),
        y: t.y_space().p(),
    };
    let res = maximize_ratio(&problem, budget, &[]).expect("nonzero tensor has a usable start");
    let f = &res.point / lp_norm(res.point.view(), problem.xd);
    let img = t.entries().t().dot(&f);
    let g = norming_functional(img.view(), problem.y);
    let value = f.dot(&t.entries().dot(&g)).abs();
    let est = NormEstimate {
        value,
        direction: Direction::LowerBound,
        witness: None,
        method: "multistart-ascent".into(),
        restarts: res.restarts,
        seed: budget.seed,
    };
    (f, g, est)
}

// --------------------------------------------------------------- projective

/// `projective_norm(F)`: `inf Σ_i ‖x_i‖‖y_i‖` over representations of `F`.
pub fn projective_norm<T: Scalar>(t: &Tensor<T>, budget: &Budget) -> NormEstimate<T> {
    projective_with_subgradient(t, budget).estimate
}

pub(crate) fn projective_with_subgradient<T: Scalar>(
    t: &Tensor<T>,
    budget: &Budget,
) -> Subgradient<T> {
    let (xs, ys) = (*t.x_space(), *t.y_space());
    let f = t.entries();
    if t.is_zero() {
        return Subgradient {
            estimate: NormEstimate::zero()
                .with_witness(Witness::Decomposition(Decomposition::default())),
            grad: Array2::zeros(f.dim()),
        };
    }
    if xs.p().is_two() && ys.p().is_two() {
        let d = svd(f.view());
        let mut dec = Decomposition::default();
        for k in 0..d.s.len() {
            if d.s[k] > T::zero() {
                let s = d.s[k].sqrt();
                dec.push(d.u.column(k).to_owned() * s, d.v.column(k).to_owned() * s);
            }
        }
        return Subgradient {
            estimate: NormEstimate::exact(d.nuclear(), "nuclear")
                .with_witness(Witness::Decomposition(dec)),
            grad: polar_factor(f.view()),
        };
    }
    if xs.p().is_one() {
        let value = f.axis_iter(Axis(0)).map(|row| lp_norm(row, ys.p())).sum();
        let mut grad = Array2::zeros(f.dim());
        for (k, row) in f.axis_iter(Axis(0)).enumerate() {
            grad.row_mut(k).assign(&norming_functional(row, ys.p()));
        }
        return Subgradient {
            estimate: NormEstimate::exact(value, "l1-rows")
                .with_witness(Witness::Decomposition(t.row_decomposition())),
            grad,
        };
    }
    if ys.p().is_one() {
        let value = f.axis_iter(Axis(1)).map(|col| lp_norm(col, xs.p())).sum();
        let mut grad = Array2::zeros(f.dim());
        for (l, col) in f.axis_iter(Axis(1)).enumerate() {
            grad.column_mut(l).assign(&norming_functional(col, xs.p()));
        }
        return Subgradient {
            estimate: NormEstimate::exact(value, "l1-columns")
                .with_witness(Witness::Decomposition(t.column_decomposition())),
            grad,
        };
    }
    search_projective(t, budget)
}

/// Exponent used inside the smooth optimizer; ℓ∞ is approximated by a large
/// finite exponent, and costs are always re-evaluated in the true norms.
fn smoothing_exponent(p: Exponent) -> Exponent {
    match p {
        Exponent::Infinity => Exponent::Finite(64.0),
        p => p,
    }
}

struct Factorization<T: Scalar> {
    x: Array2<T>,
    y: Array2<T>,
}

/// Repaired decomposition: the factor columns plus the row decomposition
/// of the residual `F − XYᵀ`, which makes it exactly feasible.
fn repaired<T: Scalar>(fac: &Factorization<T>, target: &Tensor<T>) -> Decomposition<T> {
    let mut dec = Decomposition::new(
        fac.x
            .axis_iter(Axis(1))
            .zip(fac.y.axis_iter(Axis(1)))
            .map(|(x, y)| (x.to_owned(), y.to_owned()))
            .collect(),
    );
    let resid = target.entries() - &fac.x.dot(&fac.y.t());
    let rt = Tensor::new(resid, *target.x_space(), *target.y_space()).expect("same shape");
    dec.extend(rt.row_decomposition());
    dec.prune()
}

/// Penalized balanced objective
/// `½Σ_i(‖x_i‖² + ‖y_i‖²) + (μ/2)‖XYᵀ − F‖²_F` and its gradient.
fn penalty_objective<T: Scalar>(
    fac: &Factorization<T>,
    f: &Array2<T>,
    a: Exponent,
    b: Exponent,
    mu: T,
    grad: bool,
) -> (T, Option<Factorization<T>>) {
    let half = T::lit(0.5);
    let resid = fac.x.dot(&fac.y.t()) - f;
    let mut e = half * mu * resid.iter().map(|&v| v * v).sum::<T>();
    let mut gx = if grad {
        resid.dot(&fac.y) * mu
    } else {
        Array2::zeros((0, 0))
    };
    let mut gy = if grad {
        resid.t().dot(&fac.x) * mu
    } else {
        Array2::zeros((0, 0))
    };
    for (i, col) in fac.x.axis_iter(Axis(1)).enumerate() {
        let n = lp_norm(col, a);
        e += half * n * n;
        if grad && n > T::zero() {
            let mut c = gx.column_mut(i);
            c += &(norming_functional(col, a) * n);
        }
    }
    for (i, col) in fac.y.axis_iter(Axis(1)).enumerate() {
        let n = lp_norm(col, b);
        e += half * n * n;
        if grad && n > T::zero() {
            let mut c = gy.column_mut(i);
            c += &(norming_functional(col, b) * n);
        }
    }
    (e, grad.then_some(Factorization { x: gx, y: gy }))
}

/// Gradient descent with Barzilai–Borwein initial steps and Armijo
/// backtracking, for `iters` accepted steps at most.
fn descend<T: Scalar>(
    fac: &mut Factorization<T>,
    f: &Array2<T>,
    a: Exponent,
    b: Exponent,
    mu: T,
    iters: usize,
) {
    let dot = |p: &Factorization<T>, q: &Factorization<T>| -> T {
        p.x.iter().zip(q.x.iter()).map(|(&u, &v)| u * v).sum::<T>()
            + p.y.iter().zip(q.y.iter()).map(|(&u, &v)| u * v).sum::<T>()
    };
    let (mut e, g) = penalty_objective(fac, f, a, b, mu, true);
    let mut g = g.unwrap();
    let mut step = T::one() / (T::one() + mu);
    let mut prev: Option<(Factorization<T>, Factorization<T>)> = None;
    for _ in 0..iters {
        let gg = dot(&g, &g);
        if !(gg > T::epsilon() * T::epsilon()) {
            break;
        }
        if let Some((px, pg)) = &prev {
            let s = Factorization {
                x: &fac.x - &px.x,
                y: &fac.y - &px.y,
            };
            let yv = Factorization {
                x: &g.x - &pg.x,
                y: &g.y - &pg.y,
            };
            let sy = dot(&s, &yv);
            if sy > T::zero() {
                step = dot(&s, &s) / sy;
            }
        }
        let mut accepted = false;
        let mut stalled = false;
        for _ in 0..40 {
            let cand = Factorization {
                x: &fac.x - &(&g.x * step),
                y: &fac.y - &(&g.y * step),
            };
            let (ce, _) = penalty_objective(&cand, f, a, b, mu, false);
            if ce <= e - T::lit(1e-4) * step * gg {
                let (ce, cg) = penalty_objective(&cand, f, a, b, mu, true);
                stalled = e - ce <= T::lit(1e-12) * e;
                let old = std::mem::replace(fac, cand);
                let old_g = std::mem::replace(&mut g, cg.unwrap());
                prev = Some((old, old_g));
                e = ce;
                accepted = true;
                break;
            }
            step *= T::lit(0.5);
        }
        if !accepted || stalled {
            break;
        }
    }
}

/// Factorization starts are expensive; extra restarts beyond this many
/// rarely improve the cost.
const PROJECTIVE_MAX_STARTS: usize = 4;

fn search_projective<T: Scalar>(t: &Tensor<T>, budget: &Budget) -> Subgradient<T> {
    let (xs, ys) = (*t.x_space(), *t.y_space());
    let (n, m) = (xs.dim(), ys.dim());
    let r = n * m;
    let scale = t.entries().iter().map(|&v| v * v).sum::<T>().sqrt();
    let f = t.entries() / scale;
    let unit = Tensor::new(f.clone(), xs, ys).expect("same shape");
    let (a, b) = (smoothing_exponent(xs.p()), smoothing_exponent(ys.p()));

    let mut candidates: Vec<Decomposition<T>> =
        vec![unit.row_decomposition(), unit.column_decomposition()];
    let d = svd(f.view());
    let mut svd_dec = Decomposition::default();
    for k in 0..d.s.len() {
        if d.s[k] > T::zero() {
            svd_dec.push(d.u.column(k).to_owned() * d.s[k], d.v.column(k).to_owned());
        }
    }
    let cg_seed = svd_dec.clone();
    candidates.push(svd_dec);

    let starts = budget.restarts.clamp(1, PROJECTIVE_MAX_STARTS);
    let stages: Vec<T> = (1..=4).map(|k| T::lit(10f64.powi(2 * k))).collect();
    let runs: Vec<(Decomposition<T>, Array2<T>)> = {
        use rayon::prelude::*;
        (0..starts)
            .into_par_iter()
            .map(|s| {
                let mut rng = seeded(derive_seed(budget.seed, s as u64));
                let mut fac = if s == 0 {
                    let mut x = gaussian_matrix::<T, _>(&mut rng, n, r) * T::lit(1e-3);
                    let mut y = gaussian_matrix::<T, _>(&mut rng, m, r) * T::lit(1e-3);
                    for k in 0..d.s.len().min(r) {
                        let s = d.s[k].sqrt();
                        x.column_mut(k).assign(&(d.u.column(k).to_owned() * s));
                        y.column_mut(k).assign(&(d.v.column(k).to_owned() * s));
                    }
                    Factorization { x, y }
                } else {
                    let c = T::lit(1.0 / (r as f64).sqrt());
                    Factorization {
                        x: gaussian_matrix::<T, _>(&mut rng, n, r) * c,
                        y: gaussian_matrix::<T, _>(&mut rng, m, r) * c,
                    }
                };
                let mut best: Option<(T, Decomposition<T>)> = None;
                if budget.restarts > 0 {
                    for &mu in &stages {
                        descend(&mut fac, &f, a, b, mu, budget.max_iters);
                        let dec = repaired(&fac, &unit);
                        let c = dec.cost(&xs, &ys);
                        if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
                            best = Some((c, dec));
                        }
                    }
                } else {
                    let dec = repaired(&fac, &unit);
                    best = Some((dec.cost(&xs, &ys), dec));
                }
                let mult = (&f - &fac.x.dot(&fac.y.t())) * *stages.last().unwrap();
                (best.unwrap().1, mult)
            })
            .collect()
    };
    let mut mult = Array2::zeros(f.dim());
    let mut best_run_cost = T::infinity();
    for (dec, g) in runs {
        let c = dec.cost(&xs, &ys);
        if c < best_run_cost {
            best_run_cost = c;
            mult = g;
        }
        candidates.push(dec);
    }
    let mut best = candidates
        .into_iter()
        .map(|dec| (dec.cost(&xs, &ys), dec))
        .fold(None::<(T, Decomposition<T>)>, |acc, (c, dec)| match acc {
            Some((bc, bd)) if bc <= c => Some((bc, bd)),
            _ => Some((c, dec)),
        })
        .expect("at least one candidate")
        .1;
    let mut method = "penalized-factorization";
    if budget.restarts > 0 {
        if let Some((dec, g)) = column_generation(&unit, &cg_seed, budget) {
            if dec.cost(&xs, &ys) < best.cost(&xs, &ys) {
                best = dec;
                method = "column-generation";
            }
            mult = g;
        }
    }
    if best.len() > n * m + 1 {
        best = best.caratheodory_reduce(&xs, &ys);
    }
    // undo the normalization: scale the x factors
    let dec = Decomposition::new(
        best.terms
            .into_iter()
            .map(|(x, y)| (x * scale, y))
            .collect(),
    );
    let value = dec.cost(&xs, &ys);
    // dual certificate estimate, normalized in the Frobenius norm
    let size = lp_norm_iter(mult.iter().copied(), Exponent::TWO);
    let grad = if size > T::zero() { mult / size } else { mult };
    Subgradient {
        estimate: NormEstimate {
            value,
            direction: Direction::UpperBound,
            witness: Some(Witness::Decomposition(dec)),
            method: method.into(),
            restarts: starts,
            seed: budget.seed,
        },
        grad,
    }
}

/// Rounds of atom generation in [`column_generation`].
const COLUMN_GENERATION_ROUNDS: usize = 200;

/// Column generation on the atomic form `min Σ_k |c_k|` with `F = Σ_k c_k x_k⊗y_k`
/// over unit atoms. Each round solves the restricted dual
/// `max ⟨G, F⟩` s.t. `|x_kᵀ G y_k| ≤ 1` and adds the atom maximizing
/// `xᵀ G y`, found by an injective search of `G` in `X*⊗Y*`. The final
/// restricted primal is repaired to exact feasibility. Returns the
/// decomposition and the last dual point `G`.
fn column_generation<T: Scalar>(
    unit: &Tensor<T>,
    seed: &Decomposition<T>,
    budget: &Budget,
) -> Option<(Decomposition<T>, Array2<T>)> {
    let (xs, ys) = (*unit.x_space(), *unit.y_space());
    let (n, m) = (xs.dim(), ys.dim());
    let f: Array2<f64> = unit.entries().mapv(|v| v.to_f64_lossy());
    let mut atoms: Vec<(Array1<f64>, Array1<f64>)> = Vec::new();
    for i in 0..n {
        for j in 0..m {
            let mut x = Array1::zeros(n);
            let mut y = Array1::zeros(m);
            x[i] = 1.0;
            y[j] = 1.0;
            atoms.push((x, y));
        }
    }
    for (x, y) in &seed.terms {
        let x: Array1<f64> = x.mapv(|v| v.to_f64_lossy());
        let y: Array1<f64> = y.mapv(|v| v.to_f64_lossy());
        let (nx, ny) = (lp_norm(x.view(), xs.p()), lp_norm(y.view(), ys.p()));
        if nx > 0.0 && ny > 0.0 {
            atoms.push((x / nx, y / ny));
        }
    }
    // fixed inner effort: the outcome depends on the budget only through its seed
    let inner = Budget {
        restarts: 4,
        enumeration_cap: budget.enumeration_cap,
        ..Budget::default()
    };
    let mut dual = RestrictedDual::new(&f, &atoms)?;
    let mut g = dual.point();
    for round in 0..COLUMN_GENERATION_ROUNDS {
        let gt = Tensor::new(g.mapv(T::lit), xs.dual(), ys.dual()).ok()?;
        let sub = injective_with_subgradient(
            &gt,
            &inner.with_seed(derive_seed(budget.seed, round as u64)),
        );
        if sub.estimate.value.to_f64_lossy() <= 1.0 + 1e-13 {
            break;
        }
        let Some(Witness::Functionals { f: x, g: y }) = sub.estimate.witness else {
            break;
        };
        let atom = (x.mapv(|v| v.to_f64_lossy()), y.mapv(|v| v.to_f64_lossy()));
        dual = dual.cut(&atom)?;
        g = dual.point();
        atoms.push(atom);
    }
    let coeffs = restricted_primal(&f, &atoms)?;
    let mut dec = Decomposition::default();
    for ((x, y), c) in atoms.iter().zip(coeffs) {
        if c != 0.0 {
            dec.push((x * c).mapv(T::lit), y.mapv(T::lit));
        }
    }
    let approx = assemble_terms(&dec, n, m);
    let resid = Tensor::new(unit.entries() - &approx, xs, ys).ok()?;
    dec.extend(resid.row_decomposition());
    Some((dec.prune(), g.mapv(T::lit)))
}

fn assemble_terms<T: Scalar>(dec: &Decomposition<T>, n: usize, m: usize) -> Array2<T> {
    let mut out = Array2::zeros((n, m));
    for (x, y) in &dec.terms {
        out += &outer(x.view(), y.view());
    }
    out
}

fn atom_expr(
    x: &Array1<f64>,
    y: &Array1<f64>,
    vars: &[microlp::Variable],
) -> Vec<(microlp::Variable, f64)> {
    let m = y.len();
    let mut e = Vec::new();
    for (i, &xi) in x.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            let c = xi * yj;
            if c != 0.0 {
                e.push((vars[i * m + j], c));
            }
        }
    }
    e
}

/// `max ⟨G, F⟩` subject to `|xᵀ G y| ≤ 1` on every atom, re-solved
/// incrementally as atoms are added.
struct RestrictedDual {
    vars: Vec<microlp::Variable>,
    sol: microlp::Solution,
    shape: (usize, usize),
}

impl RestrictedDual {
    fn new(f: &Array2<f64>, atoms: &[(Array1<f64>, Array1<f64>)]) -> Option<Self> {
        use microlp::{ComparisonOp, OptimizationDirection, Problem};
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = f
            .iter()
            .map(|&v| p.add_var(v, (f64::NEG_INFINITY, f64::INFINITY)))
            .collect();
        for (x, y) in atoms {
            let e = atom_expr(x, y, &vars);
            p.add_constraint(e.as_slice(), ComparisonOp::Le, 1.0);
            p.add_constraint(e.as_slice(), ComparisonOp::Ge, -1.0);
        }
        let sol = p.solve().ok()?.into_solution().ok()?;
        Some(RestrictedDual {
            vars,
            sol,
            shape: f.dim(),
        })
    }

    fn cut(self, (x, y): &(Array1<f64>, Array1<f64>)) -> Option<Self> {
        use microlp::ComparisonOp;
        let e = atom_expr(x, y, &self.vars);
        let sol = self
            .sol
            .add_constraint(e.as_slice(), ComparisonOp::Le, 1.0)
            .ok()?;
        let sol = sol.into_solution().ok()?;
        let sol = sol
            .add_constraint(e.as_slice(), ComparisonOp::Ge, -1.0)
            .ok()?;
        let sol = sol.into_solution().ok()?;
        Some(RestrictedDual { sol, ..self })
    }

    fn point(&self) -> Array2<f64> {
        let m = self.shape.1;
        Array2::from_shape_fn(self.shape, |(i, j)| {
            self.sol.var_value(self.vars[i * m + j])
        })
    }
}

/// `min Σ_k |c_k|` subject to `Σ_k c_k x_k y_kᵀ = F`.
fn restricted_primal(f: &Array2<f64>, atoms: &[(Array1<f64>, Array1<f64>)]) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let pos: Vec<_> = atoms
        .iter()
        .map(|_| p.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    let neg: Vec<_> = atoms
        .iter()
        .map(|_| p.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    for ((i, j), &v) in f.indexed_iter() {
        let mut e = Vec::new();
        for (k, (x, y)) in atoms.iter().enumerate() {
            let c = x[i] * y[j];
            if c != 0.0 {
                e.push((pos[k], c));
                e.push((neg[k], -c));
            }
        }
        p.add_constraint(e.as_slice(), ComparisonOp::Eq, v);
    }
    let sol = p.solve().ok()?.into_solution().ok()?;
    let mut c: Vec<f64> = pos
        .iter()
        .zip(&neg)
        .map(|(&a, &b)| sol.var_value(a) - sol.var_value(b))
        .collect();
    resolve_support(f, atoms, &mut c);
    Some(c)
}

/// Re-solves the coefficients on the LP support by least squares, removing
/// the simplex feasibility error.
fn resolve_support(f: &Array2<f64>, atoms: &[(Array1<f64>, Array1<f64>)], c: &mut [f64]) {
    let top = c.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let support: Vec<usize> = (0..c.len()).filter(|&k| c[k].abs() > 1e-12 * top).collect();
    if support.is_empty() {
        return;
    }
    let b = Array2::from_shape_fn((f.len(), support.len()), |(r, k)| {
        let (x, y) = &atoms[support[k]];
        x[r / f.ncols()] * y[r % f.ncols()]
    });
    let rhs = Array1::from_iter(f.iter().copied());
    let d = svd(b.view());
    let cut = d.spectral() * 1e-12;
    let mut sol = Array1::<f64>::zeros(support.len());
    for (k, &sk) in d.s.iter().enumerate() {
        if sk > cut {
            sol.scaled_add(d.u.column(k).dot(&rhs) / sk, &d.v.column(k));
        }
    }
    let resid = |v: &Array1<f64>| (&b.dot(v) - &rhs).mapv(|e| e * e).sum();
    let old = Array1::from_iter(support.iter().map(|&k| c[k]));
    if resid(&sol) < resid(&old) {
        for (&k, &v) in support.iter().zip(&sol) {
            c[k] = v;
        }
    }
}

// ------------------------------------------------------------------ α family

fn entrywise_with_subgradient<T: Scalar>(
    t: &Tensor<T>,
    p: Exponent,
    method: &str,
) -> Subgradient<T> {
    let f = t.entries();
    let value = lp_norm_iter(f.iter().copied(), p);
    let flat = Array1::from_iter(f.iter().copied());
    let g = norming_functional(flat.view(), p);
    let grad = Array2::from_shape_vec(f.dim(), g.to_vec()).expect("same length");
    Subgradient {
        estimate: NormEstimate::exact(value, method),
        grad,
    }
}

/// `alpha_norm(F, tag)` with the default search budget.
pub fn alpha_norm<T: Scalar>(t: &Tensor<T>, tag: CrossnormTag) -> Result<NormEstimate<T>> {
    alpha_norm_with(t, tag, &Budget::default())
}

pub fn alpha_norm_with<T: Scalar>(
    t: &Tensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
) -> Result<NormEstimate<T>> {
    Ok(crossnorm_with_subgradient(t, tag, budget)?.estimate)
}

pub(crate) fn crossnorm_with_subgradient<T: Scalar>(
    t: &Tensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
) -> Result<Subgradient<T>> {
    tag.check_attachable(t.x_space(), t.y_space())?;
    Ok(match tag {
        CrossnormTag::Injective => injective_with_subgradient(t, budget),
        CrossnormTag::Projective => projective_with_subgradient(t, budget),
        CrossnormTag::EntrywiseP(p) => entrywise_with_subgradient(t, p, "entrywise"),
        CrossnormTag::Hilbertian => entrywise_with_subgradient(t, Exponent::TWO, "frobenius"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn sp(n: usize, p: &str) -> LpSpace {
        LpSpace::new(n, p.parse().unwrap()).unwrap()
    }

    fn tensor(m: Array2<f64>, p: &str, q: &str) -> Tensor<f64> {
        let (n, k) = m.dim();
        Tensor::new(m, sp(n, p), sp(k, q)).unwrap()
    }

    #[test]
    fn injective_examples() {
        let b = Budget::default();
        let e = injective_norm(&tensor(Array2::eye(2), "2", "2"), &b);
        assert_abs_diff_eq!(e.value, 1.0, epsilon = 1e-14);
        assert_eq!(e.direction, Direction::Exact);
        let e = injective_norm(&tensor(Array2::eye(2), "1", "1"), &b);
        assert_abs_diff_eq!(e.value, 2.0, epsilon = 1e-14);
        assert_eq!(e.direction, Direction::Exact);
        let z = injective_norm(&tensor(Array2::zeros((2, 3)), "3", "1.5"), &b);
        assert_eq!((z.value, z.direction), (0.0, Direction::Exact));
    }

    #[test]
    fn projective_examples() {
        let b = Budget::default();
        let e = projective_norm(&tensor(Array2::eye(2), "2", "2"), &b);
        assert_abs_diff_eq!(e.value, 2.0, epsilon = 1e-14);
        assert_eq!(e.direction, Direction::Exact);
        let e = projective_norm(&tensor(Array2::eye(2), "1", "1"), &b);
        assert_abs_diff_eq!(e.value, 2.0, epsilon = 1e-14);
        assert_eq!(e.direction, Direction::Exact);
        let e = projective_norm(&tensor(array![[1.0, 2.0], [3.0, -1.0]], "3", "1"), &b);
        assert_eq!(e.method, "l1-columns");
        assert_abs_diff_eq!(
            e.value,
            lp_norm(array![1.0, 3.0].view(), Exponent::Finite(3.0))
                + lp_norm(array![2.0, -1.0].view(), Exponent::Finite(3.0)),
            epsilon = 1e-14
        );
    }

    #[test]
    fn single_tensor_identity_on_exact_paths() {
        let x = array![1.0, -2.0, 0.5];
        let y = array![0.3, 4.0];
        for (p, q) in [
            ("2", "2"),
            ("1", "3"),
            ("inf", "1.5"),
            ("1.5", "inf"),
            ("1", "1"),
        ] {
            let t = crate::tensor::single_tensor(x.view(), y.view(), sp(3, p), sp(2, q)).unwrap();
            let want = lp_norm(x.view(), sp(3, p).p()) * lp_norm(y.view(), sp(2, q).p());
            let b = Budget::default();
            let inj = injective_norm(&t, &b);
            assert_eq!(inj.direction, Direction::Exact, "{p} {q}");
            assert_abs_diff_eq!(inj.value, want, epsilon = 1e-9);
            let proj = projective_norm(&t, &b);
            if proj.direction == Direction::Exact {
                assert_abs_diff_eq!(proj.value, want, epsilon = 1e-9);
            } else {
                assert!(proj.value >= want - 1e-9);
                assert!(
                    proj.value <= want * (1.0 + 1e-6),
                    "{p} {q}: {} vs {want}",
                    proj.value
                );
            }
        }
    }

    #[test]
    fn alpha_norm_examples() {
        let id = tensor(Array2::eye(2), "2", "2");
        let e = alpha_norm(&id, CrossnormTag::EntrywiseP(Exponent::TWO)).unwrap();
        assert_abs_diff_eq!(e.value, 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(e.direction, Direction::Exact);
        let xy = crate::tensor::single_tensor(
            array![3.0, 4.0].view(),
            array![1.0, 0.0, -1.0].view(),
            sp(2, "2"),
            sp(3, "2"),
        )
        .unwrap();
        let e = alpha_norm(&xy, CrossnormTag::Hilbertian).unwrap();
        assert_abs_diff_eq!(e.value, 5.0 * 2f64.sqrt(), epsilon = 1e-14);
        let m = tensor(array![[1.0, 2.0], [0.0, -3.0]], "2", "2");
        assert_eq!(
            alpha_norm(&m, CrossnormTag::Injective).unwrap().value,
            injective_norm(&m, &Budget::default()).value
        );
        let mixed = tensor(Array2::eye(2), "2", "3");
        assert!(matches!(
            alpha_norm(&mixed, CrossnormTag::Hilbertian),
            Err(Error::Capability(_))
        ));
        assert!(alpha_norm(&mixed, CrossnormTag::EntrywiseP(Exponent::Finite(3.0))).is_err());
    }

    #[test]
    fn tag_parsing() {
        assert_eq!(
            "injective".parse::<CrossnormTag>().unwrap(),
            CrossnormTag::Injective
        );
        assert_eq!(
            "entrywise:inf".parse::<CrossnormTag>().unwrap(),
            CrossnormTag::EntrywiseP(Exponent::INF)
        );
        assert!("bogus".parse::<CrossnormTag>().is_err());
        assert_eq!(
            CrossnormTag::EntrywiseP(Exponent::TWO).canonical(),
            CrossnormTag::Hilbertian
        );
    }

    #[test]
    fn pair_value_examples() {
        let t = tensor(array![[5.0, 0.0], [0.0, 3.0]], "2", "2");
        let e1 = Functional::new(array![1.0, 0.0], sp(2, "2")).unwrap();
        assert_abs_diff_eq!(dual_injective_pair_value(&e1, &e1, &t).unwrap(), 5.0);
        let rows = tensor(array![[1.0, 2.0], [2.0, 4.0]], "2", "2");
        let perp = Functional::new(array![2.0, -1.0], sp(2, "2")).unwrap();
        let g = Functional::new(array![0.3, 0.7], sp(2, "2")).unwrap();
        assert_abs_diff_eq!(dual_injective_pair_value(&perp, &g, &rows).unwrap(), 0.0);
        let f3 = Functional::new(array![3.0, -6.0], sp(2, "2")).unwrap();
        let f1 = Functional::new(array![1.0, -2.0], sp(2, "2")).unwrap();
        assert_abs_diff_eq!(
            dual_injective_pair_value(&f3, &g, &t).unwrap(),
            3.0 * dual_injective_pair_value(&f1, &g, &t).unwrap(),
            epsilon = 1e-14
        );
        let short = Functional::new(array![1.0], sp(1, "2")).unwrap();
        assert!(dual_injective_pair_value(&short, &g, &t).is_err());
    }
}
