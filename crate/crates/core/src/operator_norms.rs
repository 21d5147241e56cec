//! Operator norms `‖A‖_{X→V}`, induced norms `‖L‖_[β,γ]` of operator
//! tensors, the injective and projective norms on `B[X,V]⊗B[Y,W]`, and
//! norms of functionals on operator spaces.

use std::fmt;

use ndarray::{Array1, Array2, Array4, Axis};
use serde::{Deserialize, Serialize};

use crate::ascent::{maximize_ratio, RatioPoint, RatioProblem};
use crate::crossnorms::{
    crossnorm_with_subgradient, injective_with_subgradient, projective_with_subgradient,
    CrossnormTag, Subgradient,
};
use crate::error::{dim_err, Result};
use crate::estimate::{Budget, Direction, NormEstimate, Witness};
use crate::linalg::{polar_factor, svd};
use crate::oracle::{kron_matrix, unvec_col_major};
use crate::rng::{derive_seed, seeded};
use crate::spaces::{
    lp_norm, norming_functional, unit_ball_extreme_points_capped, Exponent, LpSpace,
};
use crate::tensor::{pair, OperatorFunctionalTensor, OperatorSpaces, OperatorTensor, Tensor};
use crate::Scalar;

/// The pair of crossnorms `[β, γ]`: `β` on the domain `X⊗Y`, `γ` on the
/// codomain `V⊗W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedNormSpec {
    pub domain: CrossnormTag,
    pub codomain: CrossnormTag,
}

impl InducedNormSpec {
    pub fn new(domain: CrossnormTag, codomain: CrossnormTag) -> Self {
        InducedNormSpec { domain, codomain }
    }

    /// `[α, α]`.
    pub fn uniform(tag: CrossnormTag) -> Self {
        Self::new(tag, tag)
    }

    pub fn check(&self, spaces: &OperatorSpaces) -> Result<()> {
        self.domain.check_attachable(&spaces.x, &spaces.y)?;
        self.codomain.check_attachable(&spaces.v, &spaces.w)
    }

    fn is_hilbertian(&self) -> bool {
        self.domain.canonical() == CrossnormTag::Hilbertian
            && self.codomain.canonical() == CrossnormTag::Hilbertian
    }
}

impl fmt::Display for InducedNormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.domain, self.codomain)
    }
}

/// Cheaper budget for norms evaluated inside another search.
fn inner_budget(budget: &Budget) -> Budget {
    Budget {
        restarts: budget.restarts.min(2),
        max_iters: budget.max_iters.min(40),
        polish_iters: budget.polish_iters.min(20),
        ..*budget
    }
}

fn flatten<T: Scalar>(m: &Array2<T>) -> impl Iterator<Item = T> + '_ {
    m.iter().copied()
}

fn max_abs<T: Scalar>(m: &Array2<T>) -> T {
    m.iter().fold(T::zero(), |a, &b| a.max(b.abs()))
}

// ------------------------------------------------------------ operator norm

fn check_shape<T: Scalar>(a: &Array2<T>, x: &LpSpace, v: &LpSpace) -> Result<()> {
    if a.dim() != (v.dim(), x.dim()) {
        return dim_err(format!(
            "operator of shape {:?} between {x} and {v}",
            a.dim()
        ));
    }
    Ok(())
}

/// Closed form of `‖A‖_{X→V}` with a maximizing unit vector, when one exists.
fn operator_norm_closed<T: Scalar>(
    a: &Array2<T>,
    x: &LpSpace,
    v: &LpSpace,
    cap: usize,
) -> Option<(T, Array1<T>, &'static str)> {
    if x.p().is_two() && v.p().is_two() {
        let d = svd(a.view());
        return Some((d.spectral(), d.v.column(0).to_owned(), "spectral"));
    }
    if let Ok(points) = unit_ball_extreme_points_capped::<T>(x, cap) {
        let mut best = (T::zero(), points[0].clone());
        for p in points {
            let val = lp_norm(a.dot(&p).view(), v.p());
            if val > best.0 {
                best = (val, p);
            }
        }
        return Some((best.0, best.1, "domain-extreme-points"));
    }
    // ‖A‖_{X→V} = ‖Aᵀ‖_{V*→X*}
    if let Ok(points) = unit_ball_extreme_points_capped::<T>(&v.dual(), cap) {
        let mut best = (T::zero(), points[0].clone());
        for w in points {
            let val = lp_norm(a.t().dot(&w).view(), x.p().dual());
            if val > best.0 {
                best = (val, w);
            }
        }
        let xv = norming_functional(a.t().dot(&best.1).view(), x.p().dual());
        return Some((best.0, xv, "dual-extreme-points"));
    }
    None
}

/// Ratio `‖A x‖_V / ‖x‖_X`.
struct OperatorProblem<'a, T: Scalar> {
    a: &'a Array2<T>,
    x: Exponent,
    v: Exponent,
}

impl<T: Scalar> RatioProblem<T> for OperatorProblem<'_, T> {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn evaluate(&self, z: &Array1<T>) -> Option<RatioPoint<T>> {
        let den = lp_norm(z.view(), self.x);
        if !(den > T::zero()) {
            return None;
        }
        let img = self.a.dot(z);
        let w = norming_functional(img.view(), self.v);
        Some(RatioPoint {
            num: lp_norm(img.view(), self.v),
            den,
            num_dir: Direction::Exact,
            den_dir: Direction::Exact,
            grad_num: self.a.t().dot(&w),
            grad_den: norming_functional(z.view(), self.x),
        })
    }

    fn polish(&self, z: &Array1<T>, _at: &RatioPoint<T>) -> Option<Array1<T>> {
        let w = norming_functional(self.a.dot(z).view(), self.v);
        Some(norming_functional(self.a.t().dot(&w).view(), self.x.dual()))
    }
}

/// `‖A‖_{X→V} = sup_{‖x‖≤1} ‖Ax‖`.
pub fn operator_norm<T: Scalar>(
    a: &Array2<T>,
    x: &LpSpace,
    v: &LpSpace,
    budget: &Budget,
) -> Result<NormEstimate<T>> {
    check_shape(a, x, v)?;
    if max_abs(a) == T::zero() {
        return Ok(NormEstimate::zero());
    }
    if let Some((val, xv, method)) = operator_norm_closed(a, x, v, budget.enumeration_cap) {
        return Ok(NormEstimate::exact(val, method).with_witness(Witness::Vector(xv)));
    }
    let problem = OperatorProblem {
        a,
        x: x.p(),
        v: v.p(),
    };
    let res = maximize_ratio(&problem, budget, &[]).expect("nonzero operator");
    let xv = &res.point / lp_norm(res.point.view(), x.p());
    Ok(NormEstimate {
        value: lp_norm(a.dot(&xv).view(), v.p()),
        direction: Direction::LowerBound,
        witness: Some(Witness::Vector(xv)),
        method: "multistart-ascent".into(),
        restarts: res.restarts,
        seed: budget.seed,
    })
}

fn identity_norm(n: usize, from: Exponent, to: Exponent) -> f64 {
    // ‖id‖_{ℓp^n → ℓq^n} = n^{max(0, 1/q − 1/p)}
    let inv = |p: Exponent| match p {
        Exponent::Finite(p) => 1.0 / p,
        Exponent::Infinity => 0.0,
    };
    (n as f64).powf((inv(to) - inv(from)).max(0.0))
}

/// A certified upper bound of `‖A‖_{X→V}`: the closed form when there is
/// one, otherwise the best of three factorizations through `ℓ1`, `ℓ∞` and `ℓ2`.
pub fn operator_norm_upper<T: Scalar>(
    a: &Array2<T>,
    x: &LpSpace,
    v: &LpSpace,
    cap: usize,
) -> Result<NormEstimate<T>> {
    check_shape(a, x, v)?;
    if max_abs(a) == T::zero() {
        return Ok(NormEstimate::zero());
    }
    if let Some((val, xv, method)) = operator_norm_closed(a, x, v, cap) {
        return Ok(NormEstimate::exact(val, method).with_witness(Witness::Vector(xv)));
    }
    let (n, m) = (x.dim(), v.dim());
    let (p, q) = (x.p(), v.p());
    let col_max = a
        .axis_iter(Axis(1))
        .map(|c| lp_norm(c, q))
        .fold(T::zero(), T::max);
    let row_max = a
        .axis_iter(Axis(0))
        .map(|r| lp_norm(r, p.dual()))
        .fold(T::zero(), T::max);
    let via_l1 = col_max * T::lit(identity_norm(n, p, Exponent::ONE));
    let via_linf = row_max * T::lit(identity_norm(m, Exponent::INF, q));
    let via_l2 = svd(a.view()).spectral()
        * T::lit(identity_norm(n, p, Exponent::TWO) * identity_norm(m, Exponent::TWO, q));
    let value = via_l1.min(via_linf).min(via_l2);
    Ok(NormEstimate {
        value,
        direction: Direction::UpperBound,
        witness: None,
        method: "factorization-bound".into(),
        restarts: 0,
        seed: 0,
    })
}

// ------------------------------------------------------------ induced norms

/// A crossnorm evaluated on a raw matrix over the given spaces.
fn eval_crossnorm<T: Scalar>(
    m: &Array2<T>,
    tag: CrossnormTag,
    xs: LpSpace,
    ys: LpSpace,
    budget: &Budget,
) -> Subgradient<T> {
    let t = Tensor::new(m.clone(), xs, ys).expect("shape matches spaces");
    crossnorm_with_subgradient(&t, tag, budget).expect("attachability checked by caller")
}

/// A maximizer of `⟨H, F⟩` over the unit ball of `tag`, when cheaply available.
fn dual_ball_argmax<T: Scalar>(
    h: &Array2<T>,
    tag: CrossnormTag,
    xs: LpSpace,
    ys: LpSpace,
    budget: &Budget,
) -> Option<Array2<T>> {
    let entrywise = |p: Exponent| {
        let flat = Array1::from_iter(flatten(h));
        let g = norming_functional(flat.view(), p.dual());
        Array2::from_shape_vec(h.dim(), g.to_vec()).expect("same length")
    };
    match tag.canonical() {
        CrossnormTag::Hilbertian => Some(entrywise(Exponent::TWO)),
        CrossnormTag::EntrywiseP(p) => Some(entrywise(p)),
        CrossnormTag::Injective if xs.p().is_two() && ys.p().is_two() => {
            Some(polar_factor(h.view()))
        }
        CrossnormTag::Injective => None,
        CrossnormTag::Projective => {
            let t = Tensor::new(h.clone(), xs.dual(), ys.dual()).ok()?;
            match injective_with_subgradient(&t, budget).estimate.witness {
                Some(Witness::Functionals { f, g }) => {
                    let s = f.dot(&h.dot(&g)).sign0();
                    Some(crate::tensor::outer(f.view(), g.view()) * s)
                }
                _ => None,
            }
        }
    }
}

/// An induced-norm value with the maximizing unit domain point `f` and the
/// codomain subgradient `g` at `L f`, so that `value ≈ ⟨g, L f⟩`.
pub(crate) struct Induced<T: Scalar> {
    pub estimate: NormEstimate<T>,
    pub f: Array2<T>,
    pub g: Array2<T>,
}

/// Search over unit single tensors `x⊗y` (the extreme points of the
/// projective ball).
struct ProjectiveDomainProblem<'a, T: Scalar> {
    l: &'a OperatorTensor<T>,
    codomain: CrossnormTag,
    inner: Budget,
}

impl<T: Scalar> ProjectiveDomainProblem<'_, T> {
    fn split(&self, z: &Array1<T>) -> (Array1<T>, Array1<T>) {
        let nx = self.l.spaces().x.dim();
        (
            z.slice(ndarray::s![..nx]).to_owned(),
            z.slice(ndarray::s![nx..]).to_owned(),
        )
    }

    fn image(&self, x: &Array1<T>, y: &Array1<T>) -> Array2<T> {
        let sp = self.l.spaces();
        let mut out = Array2::zeros((sp.v.dim(), sp.w.dim()));
        for (a, b) in self.l.terms() {
            out += &crate::tensor::outer(a.dot(x).view(), b.dot(y).view());
        }
        out
    }

    fn codomain_norm(&self, m: &Array2<T>) -> Subgradient<T> {
        let sp = self.l.spaces();
        eval_crossnorm(m, self.codomain, sp.v, sp.w, &self.inner)
    }

    /// `(Σ_j A_jᵀ G B_j y, Σ_j B_jᵀ Gᵀ A_j x)`.
    fn partials(&self, g: &Array2<T>, x: &Array1<T>, y: &Array1<T>) -> (Array1<T>, Array1<T>) {
        let sp = self.l.spaces();
        let mut gx = Array1::zeros(sp.x.dim());
        let mut gy = Array1::zeros(sp.y.dim());
        for (a, b) in self.l.terms() {
            gx += &a.t().dot(&g.dot(&b.dot(y)));
            gy += &b.t().dot(&g.t().dot(&a.dot(x)));
        }
        (gx, gy)
    }
}

impl<T: Scalar> RatioProblem<T> for ProjectiveDomainProblem<'_, T> {
    fn dim(&self) -> usize {
        self.l.spaces().x.dim() + self.l.spaces().y.dim()
    }

    fn evaluate(&self, z: &Array1<T>) -> Option<RatioPoint<T>> {
        let sp = self.l.spaces();
        let (x, y) = self.split(z);
        let (nxn, nyn) = (lp_norm(x.view(), sp.x.p()), lp_norm(y.view(), sp.y.p()));
        if !(nxn > T::zero() && nyn > T::zero()) {
            return None;
        }
        let s = self.codomain_norm(&self.image(&x, &y));
        let (gx, gy) = self.partials(&s.grad, &x, &y);
        let mut grad_num = Array1::zeros(z.len());
        grad_num.slice_mut(ndarray::s![..x.len()]).assign(&gx);
        grad_num.slice_mut(ndarray::s![x.len()..]).assign(&gy);
        let mut grad_den = Array1::zeros(z.len());
        grad_den
            .slice_mut(ndarray::s![..x.len()])
            .assign(&(norming_functional(x.view(), sp.x.p()) * nyn));
        grad_den
            .slice_mut(ndarray::s![x.len()..])
            .assign(&(norming_functional(y.view(), sp.y.p()) * nxn));
        Some(RatioPoint {
            num: s.estimate.value,
            den: nxn * nyn,
            num_dir: s.estimate.direction,
            den_dir: Direction::Exact,
            grad_num,
            grad_den,
        })
    }

    fn polish(&self, z: &Array1<T>, _at: &RatioPoint<T>) -> Option<Array1<T>> {
        let sp = self.l.spaces();
        let (x, y) = self.split(z);
        let s = self.codomain_norm(&self.image(&x, &y));
        let (gx, _) = self.partials(&s.grad, &x, &y);
        let x2 = norming_functional(gx.view(), sp.x.p().dual());
        let s2 = self.codomain_norm(&self.image(&x2, &y));
        let (_, gy) = self.partials(&s2.grad, &x2, &y);
        let y2 = norming_functional(gy.view(), sp.y.p().dual());
        let mut out = Array1::zeros(z.len());
        out.slice_mut(ndarray::s![..x.len()]).assign(&x2);
        out.slice_mut(ndarray::s![x.len()..]).assign(&y2);
        Some(out)
    }
}

/// Search over all `F ∈ ℝ^{n×m}` of `γ(L F) / β(F)`.
struct GeneralDomainProblem<'a, T: Scalar> {
    l: &'a OperatorTensor<T>,
    spec: InducedNormSpec,
    inner: Budget,
}

impl<T: Scalar> GeneralDomainProblem<'_, T> {
    fn matrix(&self, z: &Array1<T>) -> Array2<T> {
        let sp = self.l.spaces();
        Array2::from_shape_vec((sp.x.dim(), sp.y.dim()), z.to_vec()).expect("length n·m")
    }
}

impl<T: Scalar> RatioProblem<T> for GeneralDomainProblem<'_, T> {
    fn dim(&self) -> usize {
        self.l.spaces().x.dim() * self.l.spaces().y.dim()
    }

    fn evaluate(&self, z: &Array1<T>) -> Option<RatioPoint<T>> {
        let sp = self.l.spaces();
        let f = self.matrix(z);
        let den = eval_crossnorm(&f, self.spec.domain, sp.x, sp.y, &self.inner);
        if !(den.estimate.value > T::zero()) {
            return None;
        }
        let num = eval_crossnorm(
            &self.l.apply_matrix(&f),
            self.spec.codomain,
            sp.v,
            sp.w,
            &self.inner,
        );
        let h = self.l.adjoint_matrix(&num.grad);
        Some(RatioPoint {
            num: num.estimate.value,
            den: den.estimate.value,
            num_dir: num.estimate.direction,
            den_dir: den.estimate.direction,
            grad_num: Array1::from_iter(flatten(&h)),
            grad_den: Array1::from_iter(flatten(&den.grad)),
        })
    }

    fn polish(&self, z: &Array1<T>, _at: &RatioPoint<T>) -> Option<Array1<T>> {
        let sp = self.l.spaces();
        let f = self.matrix(z);
        let num = eval_crossnorm(
            &self.l.apply_matrix(&f),
            self.spec.codomain,
            sp.v,
            sp.w,
            &self.inner,
        );
        let h = self.l.adjoint_matrix(&num.grad);
        let f2 = dual_ball_argmax(&h, self.spec.domain, sp.x, sp.y, &self.inner)?;
        Some(Array1::from_iter(flatten(&f2)))
    }
}

/// Top right singular vector of the Kronecker matrix, as an `n×m` start.
fn kron_start<T: Scalar>(l: &OperatorTensor<T>) -> Array2<T> {
    let sp = l.spaces();
    let d = svd(kron_matrix(l).view());
    unvec_col_major(&d.v.column(0).to_owned(), sp.x.dim(), sp.y.dim())
}

fn rank_one_starts<T: Scalar>(l: &OperatorTensor<T>) -> Vec<(Array1<T>, Array1<T>)> {
    let mut out = Vec::new();
    let k = svd(kron_start(l).view());
    out.push((k.u.column(0).to_owned(), k.v.column(0).to_owned()));
    for (a, b) in l.terms().iter().take(3) {
        let (da, db) = (svd(a.view()), svd(b.view()));
        out.push((da.v.column(0).to_owned(), db.v.column(0).to_owned()));
    }
    out
}

pub(crate) fn induced_with_witness<T: Scalar>(
    l: &OperatorTensor<T>,
    spec: InducedNormSpec,
    budget: &Budget,
) -> Result<Induced<T>> {
    let sp = *l.spaces();
    spec.check(&sp)?;
    if l.is_zero_map() {
        return Ok(Induced {
            estimate: NormEstimate::zero(),
            f: Array2::zeros((sp.x.dim(), sp.y.dim())),
            g: Array2::zeros((sp.v.dim(), sp.w.dim())),
        });
    }
    if spec.is_hilbertian() {
        let d = svd(kron_matrix(l).view());
        let f = unvec_col_major(&d.v.column(0).to_owned(), sp.x.dim(), sp.y.dim());
        let g = unvec_col_major(&d.u.column(0).to_owned(), sp.v.dim(), sp.w.dim());
        return Ok(Induced {
            estimate: NormEstimate::exact(d.spectral(), "kronecker-spectral")
                .with_witness(Witness::Matrix(f.clone())),
            f,
            g,
        });
    }
    let inner = Budget {
        seed: derive_seed(budget.seed, 0x1d),
        ..inner_budget(budget)
    };
    if spec.domain == CrossnormTag::Projective {
        let problem = ProjectiveDomainProblem {
            l,
            codomain: spec.codomain,
            inner,
        };
        if let Some(r) = enumerate_projective_domain(&problem, budget.enumeration_cap) {
            return Ok(r);
        }
        let starts: Vec<Array1<T>> = rank_one_starts(l)
            .into_iter()
            .map(|(x, y)| x.iter().chain(y.iter()).copied().collect())
            .collect();
        let res = maximize_ratio(&problem, budget, &starts).expect("nonzero map");
        let (x, y) = problem.split(&res.point);
        let x = &x / lp_norm(x.view(), sp.x.p());
        let y = &y / lp_norm(y.view(), sp.y.p());
        let f = crate::tensor::outer(x.view(), y.view());
        let s = problem.codomain_norm(&problem.image(&x, &y));
        return Ok(Induced {
            estimate: NormEstimate {
                value: s.estimate.value,
                direction: Direction::ratio_sup(s.estimate.direction, Direction::Exact),
                witness: Some(Witness::Matrix(f.clone())),
                method: "rank-one-ascent".into(),
                restarts: res.restarts,
                seed: budget.seed,
            },
            f,
            g: s.grad,
        });
    }
    let problem = GeneralDomainProblem { l, spec, inner };
    let mut starts = vec![Array1::from_iter(flatten(&kron_start(l)))];
    if sp.x.dim() == sp.y.dim() {
        starts.push(Array1::from_iter(flatten(&Array2::<T>::eye(sp.x.dim()))));
    }
    let res = maximize_ratio(&problem, budget, &starts).expect("nonzero map");
    let f = problem.matrix(&res.point);
    let den = eval_crossnorm(&f, spec.domain, sp.x, sp.y, &inner);
    let f = f / den.estimate.value;
    let num = eval_crossnorm(&l.apply_matrix(&f), spec.codomain, sp.v, sp.w, &inner);
    Ok(Induced {
        estimate: NormEstimate {
            value: res.value,
            direction: res.direction,
            witness: Some(Witness::Matrix(f.clone())),
            method: "matrix-ascent".into(),
            restarts: res.restarts,
            seed: budget.seed,
        },
        f,
        g: num.grad,
    })
}

/// Exact `[∧, γ]` by enumerating `ext B_X × ext B_Y` when both are finite
/// and small and `γ` has a closed form at every image.
fn enumerate_projective_domain<T: Scalar>(
    problem: &ProjectiveDomainProblem<'_, T>,
    cap: usize,
) -> Option<Induced<T>> {
    let sp = problem.l.spaces();
    let xs = unit_ball_extreme_points_capped::<T>(&sp.x, cap).ok()?;
    let ys = unit_ball_extreme_points_capped::<T>(&sp.y, cap).ok()?;
    if xs.len() * ys.len() > 1 << cap {
        return None;
    }
    let mut best: Option<(T, Array1<T>, Array1<T>, Array2<T>)> = None;
    for x in &xs {
        for y in &ys {
            let s = problem.codomain_norm(&problem.image(x, y));
            if s.estimate.direction != Direction::Exact {
                return None;
            }
            if best.as_ref().is_none_or(|b| s.estimate.value > b.0) {
                best = Some((s.estimate.value, x.clone(), y.clone(), s.grad));
            }
        }
    }
    let (value, x, y, g) = best?;
    let f = crate::tensor::outer(x.view(), y.view());
    Some(Induced {
        estimate: NormEstimate::exact(value, "rank-one-extreme-points")
            .with_witness(Witness::Matrix(f.clone())),
        f,
        g,
    })
}

/// `‖L‖_[β,γ] = sup_{β(F) ≤ 1} γ(L F)`.
pub fn induced_crossnorm<T: Scalar>(
    l: &OperatorTensor<T>,
    spec: InducedNormSpec,
    budget: &Budget,
) -> Result<NormEstimate<T>> {
    Ok(induced_with_witness(l, spec, budget)?.estimate)
}

// -------------------------------------------- norms on B[X,V]⊗B[Y,W] itself

/// `|Σ_j (wᵀA_j x)(zᵀB_j y)| / (‖x‖‖w‖_{V*}‖y‖‖z‖_{W*})` over `(x, w, y, z)`.
struct MultilinearProblem<'a, T: Scalar> {
    l: &'a OperatorTensor<T>,
}

impl<T: Scalar> MultilinearProblem<'_, T> {
    fn dims(&self) -> [usize; 4] {
        let sp = self.l.spaces();
        [sp.x.dim(), sp.v.dim(), sp.y.dim(), sp.w.dim()]
    }

    fn exponents(&self) -> [Exponent; 4] {
        let sp = self.l.spaces();
        [sp.x.p(), sp.v.p().dual(), sp.y.p(), sp.w.p().dual()]
    }

    fn blocks(&self, z: &Array1<T>) -> [Array1<T>; 4] {
        let d = self.dims();
        let mut at = 0;
        std::array::from_fn(|i| {
            let b = z.slice(ndarray::s![at..at + d[i]]).to_owned();
            at += d[i];
            b
        })
    }

    fn join(blocks: &[Array1<T>; 4]) -> Array1<T> {
        blocks.iter().flat_map(|b| b.iter().copied()).collect()
    }

    fn value(&self, b: &[Array1<T>; 4]) -> T {
        let [x, w, y, z] = b;
        self.l
            .terms()
            .iter()
            .map(|(a, bb)| w.dot(&a.dot(x)) * z.dot(&bb.dot(y)))
            .sum()
    }

    /// Partial derivatives of the multilinear form in each block.
    fn partials(&self, b: &[Array1<T>; 4]) -> [Array1<T>; 4] {
        let [x, w, y, z] = b;
        let mut out: [Array1<T>; 4] = std::array::from_fn(|i| Array1::zeros(b[i].len()));
        for (a, bb) in self.l.terms() {
            let (ax, by) = (a.dot(x), bb.dot(y));
            let (wa, zb) = (w.dot(&ax), z.dot(&by));
            out[0] += &(a.t().dot(w) * zb);
            out[1] += &(ax * zb);
            out[2] += &(bb.t().dot(z) * wa);
            out[3] += &(by * wa);
        }
        out
    }
}

impl<T: Scalar> RatioProblem<T> for MultilinearProblem<'_, T> {
    fn dim(&self) -> usize {
        self.dims().iter().sum()
    }

    fn evaluate(&self, z: &Array1<T>) -> Option<RatioPoint<T>> {
        let b = self.blocks(z);
        let e = self.exponents();
        let norms: Vec<T> = (0..4).map(|i| lp_norm(b[i].view(), e[i])).collect();
        if norms.iter().any(|&n| !(n > T::zero())) {
            return None;
        }
        let h = self.value(&b);
        let s = h.sign0();
        let parts = self.partials(&b);
        let den = norms.iter().copied().fold(T::one(), |a, n| a * n);
        let grad_den: [Array1<T>; 4] =
            std::array::from_fn(|i| norming_functional(b[i].view(), e[i]) * (den / norms[i]));
        Some(RatioPoint {
            num: h.abs(),
            den,
            num_dir: Direction::Exact,
            den_dir: Direction::Exact,
            grad_num: Self::join(&parts.map(|p| p * s)),
            grad_den: Self::join(&grad_den),
        })
    }

    fn polish(&self, z: &Array1<T>, _at: &RatioPoint<T>) -> Option<Array1<T>> {
        let mut b = self.blocks(z);
        let e = self.exponents();
        for i in 0..4 {
            let s = self.value(&b).sign0();
            let s = if s == T::zero() { T::one() } else { s };
            let p = self.partials(&b);
            b[i] = norming_functional((&p[i] * s).view(), e[i].dual());
        }
        Some(Self::join(&b))
    }
}

/// `‖L‖_∨` on `B[X,V]⊗B[Y,W]`: the sup of `|Σ_j φ(A_j)η(B_j)|` over unit
/// functionals. The dual ball of an operator space is the hull of the
/// rank-one pairings `A ↦ wᵀAx`, so the sup runs over unit `x, w, y, z`.
pub fn operator_injective_norm<T: Scalar>(
    l: &OperatorTensor<T>,
    budget: &Budget,
) -> NormEstimate<T> {
    if l.is_zero_map() {
        return NormEstimate::zero();
    }
    let problem = MultilinearProblem { l };
    let mut starts = Vec::new();
    for (a, b) in l.terms().iter().take(3) {
        let (da, db) = (svd(a.view()), svd(b.view()));
        starts.push(MultilinearProblem::join(&[
            da.v.column(0).to_owned(),
            da.u.column(0).to_owned(),
            db.v.column(0).to_owned(),
            db.u.column(0).to_owned(),
        ]));
    }
    let res = maximize_ratio(&problem, budget, &starts).expect("nonzero map");
    let e = problem.exponents();
    let [x, w, y, z] = problem.blocks(&res.point);
    let unit = |v: Array1<T>, p: Exponent| {
        let n = lp_norm(v.view(), p);
        v / n
    };
    let (x, w, y, z) = (unit(x, e[0]), unit(w, e[1]), unit(y, e[2]), unit(z, e[3]));
    let b = [x, w, y, z];
    let value = problem.value(&b).abs();
    let [x, w, y, z] = b;
    NormEstimate {
        value,
        direction: Direction::LowerBound,
        witness: Some(Witness::RankOnePairings { x, w, y, z }),
        method: "multilinear-ascent".into(),
        restarts: res.restarts,
        seed: budget.seed,
    }
}

/// An upper bound of `‖L‖_∨` on `B[X,V]⊗B[Y,W]` when all four spaces are
/// ℓ2: the least spectral norm over the matricizations of the array
/// `Σ_j A_j[v,x] B_j[w,y]`, since a product of unit vectors is a unit vector.
pub fn operator_injective_norm_upper<T: Scalar>(l: &OperatorTensor<T>) -> Option<NormEstimate<T>> {
    let sp = l.spaces();
    if ![sp.x, sp.y, sp.v, sp.w].iter().all(|s| s.p().is_two()) {
        return None;
    }
    if l.is_zero_map() {
        return Some(NormEstimate::zero());
    }
    let ((nv, nx), (nw, ny)) = (sp.a_shape(), sp.b_shape());
    let dims = [nv, nx, nw, ny];
    let mut t = Array4::<T>::zeros(dims);
    for (a, b) in l.terms() {
        for ((v, x), &av) in a.indexed_iter() {
            for ((w, y), &bw) in b.indexed_iter() {
                t[[v, x, w, y]] += av * bw;
            }
        }
    }
    let groups: [&[usize]; 7] = [&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];
    let mut best = T::infinity();
    for g in groups {
        let mut perm: Vec<usize> = g.to_vec();
        perm.extend((0..4).filter(|i| !g.contains(i)));
        let rows: usize = g.iter().map(|&i| dims[i]).product();
        let cols = dims.iter().product::<usize>() / rows;
        let m = t
            .view()
            .permuted_axes([perm[0], perm[1], perm[2], perm[3]])
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((rows, cols))
            .expect("sizes agree");
        best = best.min(svd(m.view()).spectral());
    }
    Some(NormEstimate {
        value: best,
        direction: Direction::UpperBound,
        witness: None,
        method: "flattening-bound".into(),
        restarts: 0,
        seed: 0,
    })
}

/// Vectorized terms `(vec A_j, vec B_j)` as the columns of two matrices.
fn realign<T: Scalar>(
    terms: &[(Array2<T>, Array2<T>)],
    sp: &OperatorSpaces,
) -> (Array2<T>, Array2<T>) {
    let (sa, sb) = (sp.a_shape(), sp.b_shape());
    let mut p = Array2::zeros((sa.0 * sa.1, terms.len()));
    let mut q = Array2::zeros((sb.0 * sb.1, terms.len()));
    for (j, (a, b)) in terms.iter().enumerate() {
        p.column_mut(j).assign(&Array1::from_iter(flatten(a)));
        q.column_mut(j).assign(&Array1::from_iter(flatten(b)));
    }
    (p, q)
}

fn unrealign<T: Scalar>(
    p: &Array2<T>,
    q: &Array2<T>,
    sp: &OperatorSpaces,
) -> Vec<(Array2<T>, Array2<T>)> {
    p.axis_iter(Axis(1))
        .zip(q.axis_iter(Axis(1)))
        .map(|(a, b)| {
            (
                Array2::from_shape_vec(sp.a_shape(), a.to_vec()).expect("shape"),
                Array2::from_shape_vec(sp.b_shape(), b.to_vec()).expect("shape"),
            )
        })
        .collect()
}

struct RepCost {
    value: f64,
    exact_norms: bool,
}

fn representation_cost<T: Scalar>(
    terms: &[(Array2<T>, Array2<T>)],
    sp: &OperatorSpaces,
    cap: usize,
) -> RepCost {
    let mut value = 0.0;
    let mut exact_norms = true;
    for (a, b) in terms {
        let na = operator_norm_upper(a, &sp.x, &sp.v, cap).expect("shape");
        if na.value == T::zero() {
            continue;
        }
        let nb = operator_norm_upper(b, &sp.y, &sp.w, cap).expect("shape");
        exact_norms &= na.direction == Direction::Exact && nb.direction == Direction::Exact;
        value += (na.value * nb.value).to_f64_lossy();
    }
    RepCost { value, exact_norms }
}

/// Residual terms restoring `Σ vec(A) vec(B)ᵀ = target` exactly: one
/// matrix unit `E_r` per row of the realigned residual.
fn repair_terms<T: Scalar>(
    target: &Array2<T>,
    p: &Array2<T>,
    q: &Array2<T>,
    sp: &OperatorSpaces,
) -> Vec<(Array2<T>, Array2<T>)> {
    let resid = target - &p.dot(&q.t());
    let mut out = Vec::new();
    for (r, row) in resid.axis_iter(Axis(0)).enumerate() {
        if row.iter().all(|&v| v == T::zero()) {
            continue;
        }
        let mut e = Array2::zeros(sp.a_shape());
        e[[r / sp.a_shape().1, r % sp.a_shape().1]] = T::one();
        out.push((
            e,
            Array2::from_shape_vec(sp.b_shape(), row.to_vec()).expect("shape"),
        ));
    }
    out
}

/// `‖L‖_∧` on `B[X,V]⊗B[Y,W]`: `inf Σ_j ‖A_j‖‖B_j‖` over representations.
///
/// Candidates are the given terms, the singular value decomposition of the
/// realigned coefficient matrix `Σ_j vec(A_j) vec(B_j)ᵀ`, and random
/// invertible mixings of both (repaired to exact feasibility). Operator norms
/// without a closed form are replaced by certified upper bounds, so the
/// result is always an `UpperBound` (or `Exact` zero).
pub fn operator_projective_norm<T: Scalar>(
    l: &OperatorTensor<T>,
    budget: &Budget,
) -> NormEstimate<T> {
    if l.is_zero_map() {
        return NormEstimate::zero()
            .with_witness(Witness::OperatorTensor(OperatorTensor::zero(*l.spaces())));
    }
    let sp = *l.spaces();
    let cap = budget.enumeration_cap;
    let (p0, q0) = realign(l.terms(), &sp);
    let target = p0.dot(&q0.t());
    let d = svd(target.view());
    let rank = d.rank(T::lit(1e-13)).max(1);
    let mut ps = Array2::zeros((target.nrows(), rank));
    let mut qs = Array2::zeros((target.ncols(), rank));
    for k in 0..rank {
        ps.column_mut(k)
            .assign(&(d.u.column(k).to_owned() * d.s[k]));
        qs.column_mut(k).assign(&d.v.column(k));
    }
    let bases = [(p0, q0), (ps, qs)];
    let evaluate = |p: &Array2<T>, q: &Array2<T>| {
        let mut terms = unrealign(p, q, &sp);
        terms.extend(repair_terms(&target, p, q, &sp));
        let c = representation_cost(&terms, &sp, cap);
        (c, terms)
    };
    let mut best: Option<(RepCost, Vec<(Array2<T>, Array2<T>)>)> = None;
    let consider =
        |c: RepCost, terms: Vec<(Array2<T>, Array2<T>)>, best: &mut Option<(RepCost, Vec<_>)>| {
            if best.as_ref().is_none_or(|(b, _)| c.value < b.value) {
                *best = Some((c, terms));
            }
        };
    for (p, q) in &bases {
        let (c, t) = evaluate(p, q);
        consider(c, t, &mut best);
    }
    let samples = 16 * budget.restarts;
    let mut rng = seeded(derive_seed(budget.seed, 0x70726f));
    let mut local: Option<(usize, Array2<f64>)> = None;
    let mut local_cost = f64::INFINITY;
    for s in 0..samples {
        let k_range = |b: usize| bases[b].0.ncols();
        let (b, mix) = match (&local, s % 2) {
            (Some((b, m)), 1) => {
                let step = 10f64.powf(-(1.0 + 3.0 * (s as f64 / samples as f64)));
                let noise = Array2::from_shape_fn(m.dim(), |_| {
                    rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal) * step
                });
                (*b, m + &noise)
            }
            _ => {
                let b = s / 2 % bases.len();
                let k = k_range(b);
                (
                    b,
                    Array2::from_shape_fn((k, k), |_| {
                        rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal)
                    }),
                )
            }
        };
        let Some(inv) = invert_f64(&mix) else {
            continue;
        };
        let mt = mix.mapv(T::lit);
        let it = inv.t().mapv(T::lit);
        let (p, q) = (&bases[b].0, &bases[b].1);
        let (c, terms) = evaluate(&p.dot(&mt), &q.dot(&it));
        if c.value < local_cost {
            local_cost = c.value;
            local = Some((b, mix));
        }
        consider(c, terms, &mut best);
    }
    let (cost, terms) = best.expect("at least the given terms");
    NormEstimate {
        value: T::lit(cost.value),
        direction: Direction::UpperBound,
        witness: Some(Witness::OperatorTensor(
            OperatorTensor::new(terms, sp).expect("shapes preserved"),
        )),
        method: if cost.exact_norms {
            "representation-search".into()
        } else {
            "representation-search+norm-bounds".into()
        },
        restarts: samples,
        seed: budget.seed,
    }
}

fn invert_f64(a: &Array2<f64>) -> Option<Array2<f64>> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut inv = Array2::<f64>::eye(n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[[i, col]].abs().total_cmp(&m[[j, col]].abs()))?;
        if m[[piv, col]].abs() < 1e-8 {
            return None;
        }
        for c in 0..n {
            m.swap([col, c], [piv, c]);
            inv.swap([col, c], [piv, c]);
        }
        let d = m[[col, col]];
        m.row_mut(col).mapv_inplace(|v| v / d);
        inv.row_mut(col).mapv_inplace(|v| v / d);
        for i in 0..n {
            if i != col {
                let f = m[[i, col]];
                if f != 0.0 {
                    let (mr, ir) = (m.row(col).to_owned(), inv.row(col).to_owned());
                    m.row_mut(i).scaled_add(-f, &mr);
                    inv.row_mut(i).scaled_add(-f, &ir);
                }
            }
        }
    }
    Some(inv)
}

// ------------------------------------------------------ functionals on B[X,V]

/// `φ` as an element of `V*⊗X`, whose projective norm is its dual norm.
fn pairing_tensor<T: Scalar>(phi: &Array2<T>, x: &LpSpace, v: &LpSpace) -> Result<Tensor<T>> {
    check_shape(phi, x, v)?;
    Tensor::new(phi.clone(), v.dual(), *x)
}

/// Dual norm of `φ` on `B[X,V]` from above: the projective norm of `φ` in
/// `V*⊗X` (Exact where that has a closed form, otherwise an `UpperBound`).
/// The witness is a maximizing operator when available.
pub fn functional_operator_dual_norm_upper<T: Scalar>(
    phi: &Array2<T>,
    x: &LpSpace,
    v: &LpSpace,
    budget: &Budget,
) -> Result<NormEstimate<T>> {
    let t = pairing_tensor(phi, x, v)?;
    let s = projective_with_subgradient(&t, budget);
    let mut est = s.estimate;
    est.witness = Some(Witness::Matrix(s.grad));
    est.method = format!("projective-dual/{}", est.method);
    Ok(est)
}

/// `⟨φ, A⟩ / ‖A‖_{X→V}` over operators `A`.
struct DualOperatorProblem<'a, T: Scalar> {
    phi: &'a Array2<T>,
    x: LpSpace,
    v: LpSpace,
    inner: Budget,
}

impl<T: Scalar> RatioProblem<T> for DualOperatorProblem<'_, T> {
    fn dim(&self) -> usize {
        self.phi.len()
    }

    fn evaluate(&self, z: &Array1<T>) -> Option<RatioPoint<T>> {
        let a = Array2::from_shape_vec(self.phi.dim(), z.to_vec()).ok()?;
        let den = operator_norm(&a, &self.x, &self.v, &self.inner).ok()?;
        if !(den.value > T::zero()) {
            return None;
        }
        // subgradient of ‖A‖ at A: w xᵀ with x the maximizer and w norming A x
        let grad_den = match &den.witness {
            Some(Witness::Vector(xv)) => {
                let w = norming_functional(a.dot(xv).view(), self.v.p());
                Array1::from_iter(flatten(&crate::tensor::outer(w.view(), xv.view())))
            }
            _ => Array1::zeros(z.len()),
        };
        let h: T = self.phi.iter().zip(z.iter()).map(|(&p, &v)| p * v).sum();
        Some(RatioPoint {
            num: h.abs(),
            den: den.value,
            num_dir: Direction::Exact,
            den_dir: den.direction,
            grad_num: Array1::from_iter(flatten(self.phi)) * h.sign0(),
            grad_den,
        })
    }
}

/// `‖φ‖ = sup_{‖A‖_{X→V} ≤ 1} ⟨φ, A⟩` for the trace pairing `⟨φ, A⟩ = Σ φ_rc A_rc`.
///
/// Exact when the projective norm of `φ` in `V*⊗X` has a closed form;
/// otherwise a `LowerBound` from ascent over `A` (`Heuristic` when the
/// operator norm in the denominator is itself only a lower bound).
pub fn functional_operator_dual_norm<T: Scalar>(
    phi: &Array2<T>,
    x: &LpSpace,
    v: &LpSpace,
    budget: &Budget,
) -> Result<NormEstimate<T>> {
    check_shape(phi, x, v)?;
    if max_abs(phi) == T::zero() {
        return Ok(NormEstimate::zero());
    }
    let upper = functional_operator_dual_norm_upper(phi, x, v, budget)?;
    if upper.direction == Direction::Exact {
        return Ok(upper);
    }
    let mut starts = vec![Array1::from_iter(flatten(phi))];
    if let Some(Witness::Matrix(g)) = &upper.witness {
        starts.push(Array1::from_iter(flatten(g)));
    }
    let problem = DualOperatorProblem {
        phi,
        x: *x,
        v: *v,
        inner: inner_budget(budget),
    };
    let res = maximize_ratio(&problem, budget, &starts).expect("nonzero functional");
    let a = Array2::from_shape_vec(phi.dim(), res.point.to_vec()).expect("shape");
    Ok(NormEstimate {
        value: res.value,
        direction: res.direction,
        witness: Some(Witness::Matrix(a)),
        method: "operator-ascent".into(),
        restarts: res.restarts,
        seed: budget.seed,
    })
}

/// `|𝕜(L)| / ‖L‖_[β,γ]` over operator tensors with a fixed number of terms.
struct FunctionalTensorProblem<'a, T: Scalar> {
    k: &'a OperatorFunctionalTensor<T>,
    spaces: OperatorSpaces,
    spec: InducedNormSpec,
    terms: usize,
    inner: Budget,
}

impl<T: Scalar> FunctionalTensorProblem<'_, T> {
    fn operator(&self, z: &Array1<T>) -> OperatorTensor<T> {
        let (sa, sb) = (self.spaces.a_shape(), self.spaces.b_shape());
        let (la, lb) = (sa.0 * sa.1, sb.0 * sb.1);
        let terms = (0..self.terms)
            .map(|j| {
                let off = j * (la + lb);
                let a = z.slice(ndarray::s![off..off + la]).to_vec();
                let b = z.slice(ndarray::s![off + la..off + la + lb]).to_vec();
                (
                    Array2::from_shape_vec(sa, a).expect("shape"),
                    Array2::from_shape_vec(sb, b).expect("shape"),
                )
            })
            .collect();
        OperatorTensor::new(terms, self.spaces).expect("shapes")
    }

    fn encode(&self, terms: &[(Array2<T>, Array2<T>)]) -> Array1<T> {
        let (sa, sb) = (self.spaces.a_shape(), self.spaces.b_shape());
        let mut out = Vec::with_capacity(self.dim());
        for j in 0..self.terms {
            match terms.get(j) {
                Some((a, b)) => {
                    out.extend(flatten(a));
                    out.extend(flatten(b));
                }
                None => out.extend(std::iter::repeat_n(T::zero(), sa.0 * sa.1 + sb.0 * sb.1)),
            }
        }
        Array1::from_vec(out)
    }
}

impl<T: Scalar> RatioProblem<T> for FunctionalTensorProblem<'_, T> {
    fn dim(&self) -> usize {
        let (sa, sb) = (self.spaces.a_shape(), self.spaces.b_shape());
        self.terms * (sa.0 * sa.1 + sb.0 * sb.1)
    }

    fn evaluate(&self, z: &Array1<T>) -> Option<RatioPoint<T>> {
        let l = self.operator(z);
        let den = induced_with_witness(&l, self.spec, &self.inner).ok()?;
        if !(den.estimate.value > T::zero()) {
            return None;
        }
        let h = pair(self.k, &l).ok()?;
        let s = h.sign0();
        let mut grad_num = Vec::with_capacity(z.len());
        let mut grad_den = Vec::with_capacity(z.len());
        for (a, b) in l.terms() {
            // ∂/∂A_j Σ_k φ_k(A_j)η_k(B_j) and the same for B_j
            let mut ga = Array2::zeros(a.dim());
            let mut gb = Array2::zeros(b.dim());
            for (phi, eta) in self.k.terms() {
                let pa: T = phi.iter().zip(a.iter()).map(|(&u, &v)| u * v).sum();
                let eb: T = eta.iter().zip(b.iter()).map(|(&u, &v)| u * v).sum();
                ga.scaled_add(eb * s, phi);
                gb.scaled_add(pa * s, eta);
            }
            grad_num.extend(flatten(&ga));
            grad_num.extend(flatten(&gb));
            // ∂/∂A_j ⟨G, Σ A_j F B_jᵀ⟩ = G B_j Fᵀ, ∂/∂B_j = Gᵀ A_j F
            grad_den.extend(flatten(&den.g.dot(&b.dot(&den.f.t()))));
            grad_den.extend(flatten(&den.g.t().dot(&a.dot(&den.f))));
        }
        Some(RatioPoint {
            num: h.abs(),
            den: den.estimate.value,
            num_dir: Direction::Exact,
            den_dir: den.estimate.direction,
            grad_num: Array1::from_vec(grad_num),
            grad_den: Array1::from_vec(grad_den),
        })
    }
}

/// `‖𝕜‖_{*[β,γ]} = sup |𝕜(L)| / ‖L‖_[β,γ]`, searched over operator tensors
/// with at most `budget.max_terms` terms.
pub fn functional_tensor_norm<T: Scalar>(
    k: &OperatorFunctionalTensor<T>,
    spaces: &OperatorSpaces,
    spec: InducedNormSpec,
    budget: &Budget,
) -> Result<NormEstimate<T>> {
    spec.check(spaces)?;
    if k.phi_shape() != spaces.a_shape() || k.eta_shape() != spaces.b_shape() {
        return dim_err(format!(
            "functional shapes {:?}/{:?} against operator shapes {:?}/{:?}",
            k.phi_shape(),
            k.eta_shape(),
            spaces.a_shape(),
            spaces.b_shape()
        ));
    }
    if k.is_zero() {
        return Ok(NormEstimate::zero());
    }
    let problem = FunctionalTensorProblem {
        k,
        spaces: *spaces,
        spec,
        terms: budget.max_terms.max(1),
        inner: Budget {
            seed: derive_seed(budget.seed, 0x6b),
            ..inner_budget(budget)
        },
    };
    // starts: each term of 𝕜 paired with maximizing operators
    let mut starts = Vec::new();
    let mut lead = Vec::new();
    for (phi, eta) in k.terms().iter().take(problem.terms) {
        let best_op = |m: &Array2<T>, x: &LpSpace, v: &LpSpace| -> Array2<T> {
            match functional_operator_dual_norm_upper(m, x, v, &problem.inner)
                .ok()
                .and_then(|e| e.witness)
            {
                Some(Witness::Matrix(g)) if max_abs(&g) > T::zero() => g,
                _ => m.clone(),
            }
        };
        let a = best_op(phi, &spaces.x, &spaces.v);
        let b = best_op(eta, &spaces.y, &spaces.w);
        starts.push(problem.encode(&[(a.clone(), b.clone())]));
        lead.push((a, b));
    }
    starts.push(problem.encode(&lead));
    let res = maximize_ratio(&problem, budget, &starts).expect("nonzero functional");
    Ok(NormEstimate {
        value: res.value,
        direction: res.direction,
        witness: Some(Witness::OperatorTensor(problem.operator(&res.point))),
        method: format!("operator-tensor-ascent/{}-terms", problem.terms),
        restarts: res.restarts,
        seed: budget.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{kron_spectral, svd_nuclear, svd_spectral};
    use crate::rng::gaussian_matrix;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn sp(n: usize, p: Exponent) -> LpSpace {
        LpSpace::new(n, p).unwrap()
    }

    #[test]
    fn operator_norm_examples() {
        let b = Budget::default();
        let l2 = sp(2, Exponent::TWO);
        let e = operator_norm(&array![[2.0, 0.0], [0.0, 1.0]], &l2, &l2, &b).unwrap();
        assert_eq!((e.value, e.direction), (2.0, Direction::Exact));
        for p in [
            Exponent::ONE,
            Exponent::Finite(1.5),
            Exponent::TWO,
            Exponent::Finite(3.0),
            Exponent::INF,
        ] {
            let s = sp(3, p);
            let e = operator_norm(&Array2::<f64>::eye(3), &s, &s, &b).unwrap();
            assert!((e.value - 1.0).abs() < 1e-9, "{p}: {}", e.value);
        }
        let l1 = sp(2, Exponent::ONE);
        let e = operator_norm(&array![[1.0, 1.0], [0.0, 0.0]], &l1, &l1, &b).unwrap();
        assert_eq!((e.value, e.direction), (1.0, Direction::Exact));
        assert!(operator_norm(&array![[1.0, 1.0]], &l1, &l1, &b).is_err());
    }

    #[test]
    fn operator_upper_dominates_search() {
        let mut rng = seeded(4);
        let (x, v) = (sp(3, Exponent::Finite(1.5)), sp(3, Exponent::Finite(3.0)));
        for _ in 0..10 {
            let a = gaussian_matrix::<f64, _>(&mut rng, 3, 3);
            let lo = operator_norm(&a, &x, &v, &Budget::default()).unwrap();
            let hi = operator_norm_upper(&a, &x, &v, 12).unwrap();
            assert_eq!(lo.direction, Direction::LowerBound);
            assert!(lo.value <= hi.value + 1e-12);
        }
    }

    #[test]
    fn induced_examples() {
        let b = Budget::default();
        let l2 = sp(2, Exponent::TWO);
        let id = OperatorTensor::<f64>::identity(l2, l2);
        let e = induced_crossnorm(
            &id,
            InducedNormSpec::uniform(CrossnormTag::EntrywiseP(Exponent::TWO)),
            &b,
        )
        .unwrap();
        assert_abs_diff_eq!(e.value, 1.0, epsilon = 1e-14);
        assert_eq!(e.direction, Direction::Exact);
        let l = OperatorTensor::single(
            array![[2.0, 0.0], [0.0, 1.0]],
            array![[3.0, 0.0], [0.0, 1.0]],
            OperatorSpaces::square(l2, l2),
        )
        .unwrap();
        let e =
            induced_crossnorm(&l, InducedNormSpec::uniform(CrossnormTag::Hilbertian), &b).unwrap();
        assert_abs_diff_eq!(e.value, 6.0, epsilon = 1e-13);
        let l1 = sp(2, Exponent::ONE);
        assert!(induced_crossnorm(
            &OperatorTensor::<f64>::identity(l1, l1),
            InducedNormSpec::uniform(CrossnormTag::Hilbertian),
            &b
        )
        .is_err());
    }

    #[test]
    fn induced_matches_kron_oracle() {
        let mut rng = seeded(9);
        let l2 = sp(2, Exponent::TWO);
        for _ in 0..10 {
            let a = gaussian_matrix::<f64, _>(&mut rng, 2, 2);
            let bm = gaussian_matrix::<f64, _>(&mut rng, 2, 2);
            let l = OperatorTensor::single(a.clone(), bm.clone(), OperatorSpaces::square(l2, l2))
                .unwrap();
            let e = induced_crossnorm(
                &l,
                InducedNormSpec::uniform(CrossnormTag::Hilbertian),
                &Budget::default(),
            )
            .unwrap();
            assert!((e.value - kron_spectral(&l).unwrap()).abs() < 1e-8);
            assert!((e.value - svd_spectral(a.view()) * svd_spectral(bm.view())).abs() < 1e-8);
        }
    }

    #[test]
    fn injective_and_projective_domains_on_single_terms() {
        // for A⊗B every uniform pair gives ‖A‖‖B‖ in the ℓ2 regime
        let mut rng = seeded(2);
        let l2 = sp(2, Exponent::TWO);
        let a = gaussian_matrix::<f64, _>(&mut rng, 2, 2);
        let bm = gaussian_matrix::<f64, _>(&mut rng, 2, 2);
        let want = svd_spectral(a.view()) * svd_spectral(bm.view());
        let l = OperatorTensor::single(a, bm, OperatorSpaces::square(l2, l2)).unwrap();
        for tag in [CrossnormTag::Injective, CrossnormTag::Projective] {
            let e =
                induced_crossnorm(&l, InducedNormSpec::uniform(tag), &Budget::default()).unwrap();
            assert_eq!(e.direction, Direction::LowerBound, "{tag}");
            assert!(
                e.value <= want + 1e-9 && e.value >= want - 1e-6,
                "{tag}: {} vs {want}",
                e.value
            );
        }
        let inj = operator_injective_norm(&l, &Budget::default());
        assert!((inj.value - want).abs() < 1e-6);
        let proj = operator_projective_norm(&l, &Budget::default());
        assert_eq!(proj.direction, Direction::UpperBound);
        assert!((proj.value - want).abs() < 1e-9);
    }

    #[test]
    fn projective_domain_enumeration_is_exact() {
        let l1 = sp(2, Exponent::ONE);
        let l = OperatorTensor::single(
            array![[1.0, 2.0], [0.0, 1.0]],
            array![[1.0, -1.0], [0.5, 1.0]],
            OperatorSpaces::square(l1, l1),
        )
        .unwrap();
        let e = induced_crossnorm(
            &l,
            InducedNormSpec::uniform(CrossnormTag::Projective),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(e.direction, Direction::Exact);
        // ‖A‖_{1→1} = 3, ‖B‖_{1→1} = 2
        assert_abs_diff_eq!(e.value, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn functional_dual_norm_examples() {
        let b = Budget::default();
        let l2 = sp(2, Exponent::TWO);
        let e = functional_operator_dual_norm(&Array2::<f64>::eye(2), &l2, &l2, &b).unwrap();
        assert_abs_diff_eq!(
            e.value,
            svd_nuclear(Array2::<f64>::eye(2).view()),
            epsilon = 1e-13
        );
        assert_eq!(e.direction, Direction::Exact);
        let u = array![[1.0], [2.0]];
        let v = array![[3.0, -1.0]];
        let e = functional_operator_dual_norm(&u.dot(&v), &l2, &l2, &b).unwrap();
        assert_abs_diff_eq!(e.value, 5f64.sqrt() * 10f64.sqrt(), epsilon = 1e-12);
        let z = functional_operator_dual_norm(&Array2::<f64>::zeros((2, 2)), &l2, &l2, &b).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn functional_tensor_norm_examples() {
        let b = Budget::default();
        let l2 = sp(2, Exponent::TWO);
        let spaces = OperatorSpaces::square(l2, l2);
        let phi = array![[1.0, 0.5], [0.0, 2.0]];
        let eta = array![[0.0, 1.0], [1.0, 1.0]];
        let k = OperatorFunctionalTensor::single(phi.clone(), eta.clone());
        let spec = InducedNormSpec::uniform(CrossnormTag::Hilbertian);
        let e = functional_tensor_norm(&k, &spaces, spec, &b).unwrap();
        let bound = svd_nuclear(phi.view()) * svd_nuclear(eta.view());
        assert_eq!(e.direction, Direction::LowerBound);
        assert!(e.value <= bound + 1e-6, "{} vs {bound}", e.value);
        assert!(e.value >= bound - 1e-6, "{} vs {bound}", e.value);
        if let Some(Witness::OperatorTensor(l)) = &e.witness {
            let n = induced_crossnorm(l, spec, &b).unwrap().value;
            assert!((pair::<f64>(&k, l).unwrap().abs() / n - e.value).abs() < 1e-9);
        } else {
            panic!("missing witness");
        }
        let zero = OperatorFunctionalTensor::single(Array2::<f64>::zeros((2, 2)), eta);
        assert_eq!(
            functional_tensor_norm(&zero, &spaces, spec, &b)
                .unwrap()
                .value,
            0.0
        );
    }
}
