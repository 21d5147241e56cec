//! Direction-aware numerical checks of crossnorm inequalities.
//!
//! Each side of an inequality is an interval enclosure of the true value
//! (see [`Bounds`]). A comparison `lhs ≤ rhs` is *certified* when
//! `lhs.hi ≤ rhs.lo + tol` and *violated* when `lhs.lo > rhs.hi + tol`;
//! anything else cannot be decided from the computed bounds.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::ascent::{maximize_ratio, RatioPoint, RatioProblem};
use crate::crossnorms::{
    alpha_norm_with, crossnorm_with_subgradient, projective_with_subgradient, CrossnormTag,
};
use crate::error::Result;
use crate::estimate::{Bounds, Budget, Direction, NormEstimate, Witness};
use crate::operator_norms::{
    functional_operator_dual_norm, functional_operator_dual_norm_upper, functional_tensor_norm,
    induced_crossnorm, operator_injective_norm, operator_injective_norm_upper, operator_norm,
    operator_norm_upper, operator_projective_norm, InducedNormSpec,
};
use crate::spaces::{norming_functional, Exponent, LpSpace};
use crate::tensor::{OperatorFunctionalTensor, OperatorSpaces, OperatorTensor, Tensor};
use crate::{injective_norm, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Every comparison certified with nonnegative slack, up to rounding.
    Holds,
    /// Every comparison certified, some only within the tolerance.
    HoldsWithSlack,
    /// Some comparison cannot be certified from the bound directions.
    Inconclusive,
    /// Some comparison certifiably fails beyond the tolerance.
    Violated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithSlack => "holds-with-slack",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Violated => "violated",
        };
        f.write_str(s)
    }
}

/// One side of a checked inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub label: String,
    pub value: f64,
    pub direction: Direction,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub method: String,
}

impl Side {
    pub fn from_bounds(label: impl Into<String>, b: Bounds, method: impl Into<String>) -> Self {
        Side {
            label: label.into(),
            value: b.value,
            direction: b.direction(),
            lo: b.lo,
            hi: b.hi,
            method: method.into(),
        }
    }

    pub fn from_estimate<T: Scalar>(label: impl Into<String>, e: &NormEstimate<T>) -> Self {
        Self::from_bounds(label, e.bounds(), e.method.clone())
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            value: self.value,
            lo: self.lo,
            hi: self.hi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComparisonStatus {
    Certified,
    CertifiedWithinTol,
    Uncertified,
    Violated,
}

/// `sides[lhs] ≤ sides[rhs]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub lhs: usize,
    pub rhs: usize,
    /// `rhs.value − lhs.value`.
    pub slack: f64,
    /// `rhs.lo − lhs.hi` when both ends exist.
    pub certified_slack: Option<f64>,
    pub status: ComparisonStatus,
}

/// Relative size of disagreements attributed to floating-point rounding.
pub const ROUNDING: f64 = 1e-12;

/// Direction-aware comparison of `lhs ≤ rhs` with absolute tolerance `tol`.
/// Certified slack down to rounding level counts as `Certified`.
pub fn compare(lhs: &Side, rhs: &Side, tol: f64) -> (Option<f64>, ComparisonStatus) {
    let certified_slack = match (lhs.hi, rhs.lo) {
        (Some(h), Some(l)) => Some(l - h),
        _ => None,
    };
    let rounding = ROUNDING * lhs.value.abs().max(rhs.value.abs()).max(1.0);
    if let (Some(l), Some(h)) = (lhs.lo, rhs.hi) {
        if l > h + tol {
            return (certified_slack, ComparisonStatus::Violated);
        }
    }
    let status = match certified_slack {
        Some(s) if s >= -rounding => ComparisonStatus::Certified,
        Some(s) if s >= -tol => ComparisonStatus::CertifiedWithinTol,
        _ => ComparisonStatus::Uncertified,
    };
    (certified_slack, status)
}

/// Verdict of a set of comparison statuses.
pub fn verdict_of(statuses: &[ComparisonStatus]) -> Verdict {
    use ComparisonStatus::*;
    if statuses.contains(&Violated) {
        Verdict::Violated
    } else if statuses.contains(&Uncertified) {
        Verdict::Inconclusive
    } else if statuses.contains(&CertifiedWithinTol) {
        Verdict::HoldsWithSlack
    } else {
        Verdict::Holds
    }
}

/// One verified inequality (or chain) with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub sides: Vec<Side>,
    pub comparisons: Vec<Comparison>,
    pub slacks: Vec<f64>,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub seed: u64,
    pub budget: Budget,
    pub spaces: Vec<String>,
    pub dims: Vec<usize>,
    pub tag: String,
    /// Whether a `Violated` verdict contradicts a proved statement.
    pub gating: bool,
    pub notes: Vec<String>,
}

impl CheckRecord {
    /// Builds a record comparing the given `(lhs, rhs)` index pairs.
    pub fn new(
        name: impl Into<String>,
        sides: Vec<Side>,
        pairs: &[(usize, usize)],
        tol: f64,
        budget: &Budget,
    ) -> Self {
        let comparisons: Vec<Comparison> = pairs
            .iter()
            .map(|&(i, j)| {
                let (certified_slack, status) = compare(&sides[i], &sides[j], tol);
                Comparison {
                    lhs: i,
                    rhs: j,
                    slack: sides[j].value - sides[i].value,
                    certified_slack,
                    status,
                }
            })
            .collect();
        let statuses: Vec<ComparisonStatus> = comparisons.iter().map(|c| c.status).collect();
        CheckRecord {
            name: name.into(),
            slacks: comparisons.iter().map(|c| c.slack).collect(),
            verdict: verdict_of(&statuses),
            sides,
            comparisons,
            tolerance: tol,
            seed: budget.seed,
            budget: *budget,
            spaces: Vec::new(),
            dims: Vec::new(),
            tag: String::new(),
            gating: true,
            notes: Vec::new(),
        }
    }

    fn with_meta(mut self, spaces: &[LpSpace], tag: impl ToString) -> Self {
        self.spaces = spaces.iter().map(|s| s.to_string()).collect();
        self.dims = spaces.iter().map(|s| s.dim()).collect();
        self.tag = tag.to_string();
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    /// Smallest point slack over all comparisons.
    pub fn worst_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn side(&self, label: &str) -> Option<&Side> {
        self.sides.iter().find(|s| s.label == label)
    }
}

/// Every `i < j` pair of a chain `s_0 ≤ s_1 ≤ …`.
fn chain_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn op_spaces(sp: &OperatorSpaces) -> [LpSpace; 4] {
    [sp.x, sp.y, sp.v, sp.w]
}

// ------------------------------------------------------------- enclosures

/// `‖F‖_∨` as an interval. A search lower bound is closed from above by an
/// upper bound of the operator norm of `F: X* → Y`.
pub fn injective_bounds<T: Scalar>(
    t: &Tensor<T>,
    budget: &Budget,
) -> Result<(NormEstimate<T>, Bounds)> {
    let est = injective_norm(t, budget);
    let mut b = est.bounds();
    if b.hi.is_none_or(|hi| hi > b.value) {
        let ft = t.entries().t().to_owned();
        let up = operator_norm_upper(
            &ft,
            &t.x_space().dual(),
            t.y_space(),
            budget.enumeration_cap,
        )?;
        b = b.intersect(Bounds::from_estimate(up.value.to_f64_lossy(), up.direction));
    }
    Ok((est, b))
}

/// Upper bound of the injective norm of `G` in `X*⊗Y*`.
fn dual_injective_upper<T: Scalar>(
    g: &Array2<T>,
    x: &LpSpace,
    y: &LpSpace,
    cap: usize,
) -> Result<f64> {
    let gt = g.t().to_owned();
    Ok(operator_norm_upper(&gt, x, &y.dual(), cap)?
        .value
        .to_f64_lossy())
}

/// `‖F‖_∧` as an interval. A decomposition upper bound is closed from
/// below by weak duality, `⟨G, F⟩ / ‖G‖_∨ ≤ ‖F‖_∧` for any `G` in `X*⊗Y*`,
/// tried at the search multiplier and at entrywise norming functionals.
pub fn projective_bounds<T: Scalar>(
    t: &Tensor<T>,
    budget: &Budget,
) -> Result<(NormEstimate<T>, Bounds)> {
    let sub = projective_with_subgradient(t, budget);
    let mut b = sub.estimate.bounds();
    if b.lo.is_none_or(|lo| lo < b.value) {
        let f = t.entries();
        let flat: ndarray::Array1<T> = f.iter().copied().collect();
        let mut candidates = vec![sub.grad.clone()];
        for p in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
            let g = norming_functional(flat.view(), p);
            candidates.push(Array2::from_shape_vec(f.dim(), g.to_vec()).expect("same length"));
        }
        let mut lo: Option<f64> = None;
        for g in &candidates {
            let num: f64 = g
                .iter()
                .zip(f.iter())
                .map(|(a, b)| (*a * *b).to_f64_lossy())
                .sum();
            let den = dual_injective_upper(g, t.x_space(), t.y_space(), budget.enumeration_cap)?;
            if num > 0.0 && den > 0.0 && den.is_finite() {
                let v = num / den;
                lo = Some(lo.map_or(v, |c: f64| c.max(v)));
            }
        }
        if let Some(lo) = lo {
            b = b.intersect(Bounds {
                value: lo,
                lo: Some(lo),
                hi: None,
            });
        }
    }
    Ok((sub.estimate, b))
}

/// Both enclosures, each tightened by `‖F‖_∨ ≤ ‖F‖_∧`.
fn injective_projective_bounds<T: Scalar>(
    t: &Tensor<T>,
    budget: &Budget,
) -> Result<((NormEstimate<T>, Bounds), (NormEstimate<T>, Bounds))> {
    let (inj, ib) = injective_bounds(t, budget)?;
    let (proj, pb) = projective_bounds(t, budget)?;
    let ib2 = ib.intersect(Bounds {
        value: ib.value,
        lo: None,
        hi: pb.hi,
    });
    let pb2 = pb.intersect(Bounds {
        value: pb.value,
        lo: ib.lo,
        hi: None,
    });
    Ok(((inj, ib2), (proj, pb2)))
}

/// `‖L‖_∨` on `B[X,V]⊗B[Y,W]` as an interval.
pub fn operator_injective_bounds<T: Scalar>(
    l: &OperatorTensor<T>,
    budget: &Budget,
) -> (NormEstimate<T>, Bounds) {
    let est = operator_injective_norm(l, budget);
    let mut b = est.bounds();
    if let Some(up) = operator_injective_norm_upper(l) {
        b = b.intersect(Bounds::from_estimate(up.value.to_f64_lossy(), up.direction));
    }
    (est, b)
}

// --------------------------------------------------------------- sandwich

/// `‖F‖_∨ ≤ ‖F‖_α ≤ ‖F‖_∧`.
pub fn check_sandwich<T: Scalar>(
    t: &Tensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let alpha = alpha_norm_with(t, tag, budget)?;
    let ((inj, inj_b), (proj, proj_b)) = injective_projective_bounds(t, budget)?;
    let sides = vec![
        Side::from_bounds("injective", inj_b, inj.method),
        Side::from_estimate("alpha", &alpha),
        Side::from_bounds("projective", proj_b, proj.method),
    ];
    Ok(
        CheckRecord::new("sandwich", sides, &chain_pairs(3), tol, budget)
            .with_meta(&[*t.x_space(), *t.y_space()], tag),
    )
}

// ------------------------------------------------------- uniform identity

/// `‖A⊗B‖_[α,α] = ‖A‖‖B‖`, checked as two inequalities.
pub fn check_uniform_identity<T: Scalar>(
    a: &Array2<T>,
    b: &Array2<T>,
    spaces: &OperatorSpaces,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let l = OperatorTensor::single(a.clone(), b.clone(), *spaces)?;
    let lhs = induced_crossnorm(&l, InducedNormSpec::uniform(tag), budget)?;
    let na = operator_norm(a, &spaces.x, &spaces.v, budget)?;
    let nb = operator_norm(b, &spaces.y, &spaces.w, budget)?;
    let rhs = na.bounds().mul(nb.bounds());
    let sides = vec![
        Side::from_estimate("induced", &lhs),
        Side::from_bounds("product", rhs, format!("{}*{}", na.method, nb.method)),
    ];
    let mut rec = CheckRecord::new("uniform-identity", sides, &[(0, 1), (1, 0)], tol, budget)
        .with_meta(&op_spaces(spaces), tag);
    if matches!(tag, CrossnormTag::EntrywiseP(p) if !p.is_two()) {
        rec.gating = false;
        rec = rec.note("entrywise p≠2 is not known to be uniform; reported only");
    }
    Ok(rec)
}

// ------------------------------------------------------ operator-space chain

/// `‖L‖_∨ ≤ ‖L‖_[α,α] ≤ ‖L‖_∧` with the outer norms taken on
/// `B[X,V]⊗B[Y,W]`.
pub fn check_theorem_41<T: Scalar>(
    l: &OperatorTensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let mid = induced_crossnorm(l, InducedNormSpec::uniform(tag), budget)?;
    let inj = operator_injective_side(l, budget);
    let sides = vec![
        inj.clone(),
        Side::from_estimate("induced", &mid),
        operator_projective_side(l, budget, &inj)?,
    ];
    Ok(
        CheckRecord::new("theorem41", sides, &chain_pairs(3), tol, budget)
            .with_meta(&op_spaces(l.spaces()), tag),
    )
}

/// `‖L‖_∧` on `B[X,V]⊗B[Y,W]` as an interval. The representation-search
/// upper bound is closed from below by `‖L‖_∨` and by weak duality at the
/// leading singular pairs `(φ, η)` of the realigned matrix `Σ_j vec A_j vec B_jᵀ`,
/// `|Σ_j φ(A_j)η(B_j)| / (‖φ‖‖η‖) ≤ ‖L‖_∧`.
pub fn operator_projective_bounds<T: Scalar>(
    l: &OperatorTensor<T>,
    budget: &Budget,
    injective_lo: Option<f64>,
) -> Result<(NormEstimate<T>, Bounds)> {
    let est = operator_projective_norm(l, budget);
    let mut b = est.bounds();
    if b.lo.is_none_or(|lo| lo < b.value) {
        let sp = *l.spaces();
        let (sa, sb) = (sp.a_shape(), sp.b_shape());
        let mut r = Array2::<T>::zeros((sa.0 * sa.1, sb.0 * sb.1));
        for (a, bm) in l.terms() {
            let va: ndarray::Array1<T> = a.iter().copied().collect();
            let vb: ndarray::Array1<T> = bm.iter().copied().collect();
            r += &(va
                .insert_axis(ndarray::Axis(1))
                .dot(&vb.insert_axis(ndarray::Axis(0))));
        }
        let mut lo = injective_lo.unwrap_or(0.0);
        let d = crate::linalg::svd(r.view());
        for k in 0..d.s.len().min(3) {
            let sigma = d.s[k].to_f64_lossy();
            if !(sigma > 0.0) {
                break;
            }
            let phi = Array2::from_shape_vec(sa, d.u.column(k).to_vec()).expect("shape");
            let eta = Array2::from_shape_vec(sb, d.v.column(k).to_vec()).expect("shape");
            let np = functional_operator_dual_norm_upper(&phi, &sp.x, &sp.v, budget)?;
            let ne = functional_operator_dual_norm_upper(&eta, &sp.y, &sp.w, budget)?;
            let den = (np.value * ne.value).to_f64_lossy();
            if den > 0.0 {
                lo = lo.max(sigma / den);
            }
        }
        b = b.intersect(Bounds {
            value: lo,
            lo: Some(lo),
            hi: None,
        });
    }
    Ok((est, b))
}

fn operator_projective_side<T: Scalar>(
    l: &OperatorTensor<T>,
    budget: &Budget,
    inj: &Side,
) -> Result<Side> {
    let (est, b) = operator_projective_bounds(l, budget, inj.lo)?;
    Ok(Side::from_bounds("operator-projective", b, est.method))
}

fn operator_injective_side<T: Scalar>(l: &OperatorTensor<T>, budget: &Budget) -> Side {
    let (est, b) = operator_injective_bounds(l, budget);
    Side::from_bounds("operator-injective", b, est.method)
}

/// `‖·‖_∨ ≤ ‖·‖_[∧,∨] ≤ ‖·‖_[α,α] ≤ ‖·‖_∧`.
pub fn check_remark_chain<T: Scalar>(
    l: &OperatorTensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let mixed = induced_crossnorm(
        l,
        InducedNormSpec::new(CrossnormTag::Projective, CrossnormTag::Injective),
        budget,
    )?;
    let mid = induced_crossnorm(l, InducedNormSpec::uniform(tag), budget)?;
    let inj = operator_injective_side(l, budget);
    // the projective unit ball is the hull of unit x⊗y, so [∧,∨] and the
    // operator-space ∨ are the same supremum and share enclosures
    let mixed_b = mixed.bounds().intersect(Bounds {
        value: mixed.value.to_f64_lossy(),
        lo: inj.lo,
        hi: inj.hi,
    });
    let sides = vec![
        inj.clone(),
        Side::from_bounds(
            "induced[projective,injective]",
            mixed_b,
            mixed.method.clone(),
        ),
        Side::from_estimate("induced", &mid),
        operator_projective_side(l, budget, &inj)?,
    ];
    Ok(
        CheckRecord::new("remark-chain", sides, &chain_pairs(4), tol, budget)
            .with_meta(&op_spaces(l.spaces()), tag),
    )
}

// ------------------------------------------------------- equivalence ratios

/// `num(F) / den(F)` over nonzero `F`.
struct RatioOfNorms {
    num: CrossnormTag,
    den: CrossnormTag,
    x: LpSpace,
    y: LpSpace,
    inner: Budget,
}

impl RatioOfNorms {
    fn matrix<T: Scalar>(&self, z: &ndarray::Array1<T>) -> Array2<T> {
        Array2::from_shape_vec((self.x.dim(), self.y.dim()), z.to_vec()).expect("length n·m")
    }
}

impl<T: Scalar> RatioProblem<T> for RatioOfNorms {
    fn dim(&self) -> usize {
        self.x.dim() * self.y.dim()
    }

    fn evaluate(&self, z: &ndarray::Array1<T>) -> Option<RatioPoint<T>> {
        let t = Tensor::new(self.matrix(z), self.x, self.y).ok()?;
        let d = crossnorm_with_subgradient(&t, self.den, &self.inner).ok()?;
        if !(d.estimate.value > T::zero()) {
            return None;
        }
        let n = crossnorm_with_subgradient(&t, self.num, &self.inner).ok()?;
        Some(RatioPoint {
            num: n.estimate.value,
            den: d.estimate.value,
            num_dir: n.estimate.direction,
            den_dir: d.estimate.direction,
            grad_num: n.grad.iter().copied().collect(),
            grad_den: d.grad.iter().copied().collect(),
        })
    }
}

/// `sup_{F≠0} num(F) / den(F)` on `X⊗Y`, from below, with the maximizing
/// tensor (normalized to `den(F) = 1`) as witness.
pub fn equivalence_ratio<T: Scalar>(
    num: CrossnormTag,
    den: CrossnormTag,
    x: &LpSpace,
    y: &LpSpace,
    budget: &Budget,
) -> Result<NormEstimate<T>> {
    num.check_attachable(x, y)?;
    den.check_attachable(x, y)?;
    let (n, m) = (x.dim(), y.dim());
    if num.canonical() == den.canonical() {
        let mut e = Array2::zeros((n, m));
        e[[0, 0]] = T::one();
        return Ok(NormEstimate::exact(T::one(), "same-norm").with_witness(Witness::Matrix(e)));
    }
    let problem = RatioOfNorms {
        num,
        den,
        x: *x,
        y: *y,
        inner: Budget {
            restarts: budget.restarts.min(2),
            ..*budget
        },
    };
    let mut starts: Vec<ndarray::Array1<T>> = Vec::new();
    starts.push(
        Array2::<T>::eye(n.max(m))
            .slice(ndarray::s![..n, ..m])
            .iter()
            .copied()
            .collect(),
    );
    let mut e11 = Array2::<T>::zeros((n, m));
    e11[[0, 0]] = T::one();
    starts.push(e11.iter().copied().collect());
    starts.push(
        Array2::<T>::from_elem((n, m), T::one())
            .iter()
            .copied()
            .collect(),
    );
    let res = maximize_ratio(&problem, budget, &starts).expect("nonzero starts exist");
    let f = problem.matrix(&res.point);
    let t = Tensor::new(f.clone(), *x, *y)?;
    let d = alpha_norm_with(&t, den, &problem.inner)?.value;
    Ok(NormEstimate {
        value: res.value,
        direction: if matches!(res.direction, Direction::Exact | Direction::LowerBound) {
            Direction::LowerBound
        } else {
            Direction::Heuristic
        },
        witness: Some(Witness::Matrix(f / d)),
        method: "ratio-ascent".into(),
        restarts: res.restarts,
        seed: budget.seed,
    })
}

/// Closed forms of `sup num/den` on `ℓ2^n⊗ℓ2^m` for the singular-value
/// norms: spectral, Frobenius and nuclear are the ℓ∞, ℓ2 and ℓ1 norms of
/// the singular values, whose ratios peak at `r = min(n, m)` equal values
/// or at a single nonzero one.
pub fn equivalence_ratio_closed(
    num: CrossnormTag,
    den: CrossnormTag,
    x: &LpSpace,
    y: &LpSpace,
) -> Option<f64> {
    if !(x.p().is_two() && y.p().is_two()) {
        return None;
    }
    let level = |t: CrossnormTag| match t.canonical() {
        CrossnormTag::Injective => Some(0.0),
        CrossnormTag::Hilbertian => Some(0.5),
        CrossnormTag::Projective => Some(1.0),
        _ => None,
    };
    let (a, b) = (level(num)?, level(den)?);
    let r = x.dim().min(y.dim()) as f64;
    Some(if a > b { r.powf(a - b) } else { 1.0 })
}

fn sup_bounds<T: Scalar>(est: &NormEstimate<T>, closed: Option<f64>) -> Bounds {
    let b = est.bounds();
    match closed {
        Some(c) => b.intersect(Bounds::exact(c)),
        None => b,
    }
}

/// `inf(∨/α)·‖L‖_[∨,∨] ≤ ‖L‖_[α,α] ≤ sup(∧/α)·‖L‖_[∧,∧]`, with the ratio
/// extrema combined over the domain and codomain pairs (smaller inf,
/// larger sup).
pub fn check_corollary_44<T: Scalar>(
    l: &OperatorTensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let sp = *l.spaces();
    let mut inf_weight: Option<Bounds> = None;
    let mut sup_weight: Option<Bounds> = None;
    for (x, y) in [(sp.x, sp.y), (sp.v, sp.w)] {
        let a_over_inj = equivalence_ratio::<T>(tag, CrossnormTag::Injective, &x, &y, budget)?;
        let inf = sup_bounds(
            &a_over_inj,
            equivalence_ratio_closed(tag, CrossnormTag::Injective, &x, &y),
        )
        .recip();
        let proj_over_a = equivalence_ratio::<T>(CrossnormTag::Projective, tag, &x, &y, budget)?;
        let sup = sup_bounds(
            &proj_over_a,
            equivalence_ratio_closed(CrossnormTag::Projective, tag, &x, &y),
        );
        inf_weight = Some(match inf_weight {
            None => inf,
            Some(w) => min_bounds(w, inf),
        });
        sup_weight = Some(match sup_weight {
            None => sup,
            Some(w) => max_bounds(w, sup),
        });
    }
    let (inf_w, sup_w) = (inf_weight.unwrap(), sup_weight.unwrap());
    // ‖L‖_[β,β] ≤ Σ_j ‖A_j‖‖B_j‖ for uniform β, so the operator-space
    // projective bound caps both outer induced norms from above
    let cap = operator_projective_norm(l, budget).bounds();
    let cap = Bounds {
        value: cap.value,
        lo: None,
        hi: cap.hi,
    };
    let inj = induced_crossnorm(l, InducedNormSpec::uniform(CrossnormTag::Injective), budget)?;
    let proj = induced_crossnorm(
        l,
        InducedNormSpec::uniform(CrossnormTag::Projective),
        budget,
    )?;
    let mid = induced_crossnorm(l, InducedNormSpec::uniform(tag), budget)?;
    // ‖LF‖_∨ ≤ sup_{V⊗W}(∨/α)·‖L‖_[α,α]·sup_{X⊗Y}(α/∨)·‖F‖_∨ when both
    // constants are known in closed form
    let mut inj_hi = cap;
    if let (Some(cv), Some(cx)) = (
        equivalence_ratio_closed(CrossnormTag::Injective, tag, &sp.v, &sp.w),
        equivalence_ratio_closed(tag, CrossnormTag::Injective, &sp.x, &sp.y),
    ) {
        if let Some(h) = mid.bounds().hi {
            let h = cv * cx * h;
            inj_hi.hi = Some(inj_hi.hi.map_or(h, |c| c.min(h)));
        }
    }
    let left = inf_w.mul(inj.bounds().intersect(inj_hi));
    let right = sup_w.mul(proj.bounds().intersect(cap));
    let sides = vec![
        Side::from_bounds("inf-ratio*induced[injective]", left, inj.method.clone()),
        Side::from_estimate("induced", &mid),
        Side::from_bounds("sup-ratio*induced[projective]", right, proj.method.clone()),
    ];
    Ok(
        CheckRecord::new("corollary44", sides, &[(0, 1), (1, 2)], tol, budget)
            .with_meta(&op_spaces(&sp), tag)
            .note(format!(
                "ratio extrema combined over domain and codomain pairs: inf {:.6}, sup {:.6}",
                inf_w.value, sup_w.value
            )),
    )
}

fn min_bounds(a: Bounds, b: Bounds) -> Bounds {
    let opt = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    };
    Bounds {
        value: a.value.min(b.value),
        lo: opt(a.lo, b.lo),
        hi: match (a.hi, b.hi) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
    }
}

fn max_bounds(a: Bounds, b: Bounds) -> Bounds {
    let opt = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    };
    Bounds {
        value: a.value.max(b.value),
        lo: match (a.lo, b.lo) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        },
        hi: opt(a.hi, b.hi),
    }
}

/// `‖F‖_∨ ≤ ‖F‖_α ≤ ‖F‖_∧ ≤ γ‖F‖_∨` with `γ = sup ‖·‖_∧/‖·‖_∨` on the
/// tensor's space pair.
pub fn check_gamma<T: Scalar>(
    t: &Tensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let (x, y) = (*t.x_space(), *t.y_space());
    let gamma = equivalence_ratio::<T>(
        CrossnormTag::Projective,
        CrossnormTag::Injective,
        &x,
        &y,
        budget,
    )?;
    let g = sup_bounds(
        &gamma,
        equivalence_ratio_closed(CrossnormTag::Projective, CrossnormTag::Injective, &x, &y),
    );
    let ((inj, inj_b), (proj, proj_b)) = injective_projective_bounds(t, budget)?;
    let sides = vec![
        Side::from_bounds("injective", inj_b, inj.method.clone()),
        Side::from_estimate("alpha", &alpha_norm_with(t, tag, budget)?),
        Side::from_bounds("projective", proj_b, proj.method),
        Side::from_bounds("gamma*injective", g.mul(inj_b), gamma.method.clone()),
    ];
    Ok(
        CheckRecord::new("gamma", sides, &chain_pairs(4), tol, budget)
            .with_meta(&[x, y], tag)
            .note(format!("gamma {:.6} ({})", g.value, gamma.direction)),
    )
}

// ------------------------------------------------------ functional bound

/// `‖φ⊗η‖_{*[α,α]} ≤ ‖φ‖‖η‖`.
pub fn check_prop_32_dual_bound<T: Scalar>(
    phi: &Array2<T>,
    eta: &Array2<T>,
    spaces: &OperatorSpaces,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let k = OperatorFunctionalTensor::single(phi.clone(), eta.clone());
    let lhs = functional_tensor_norm(&k, spaces, InducedNormSpec::uniform(tag), budget)?;
    let dual = |m: &Array2<T>, x: &LpSpace, v: &LpSpace| -> Result<Bounds> {
        let up = functional_operator_dual_norm_upper(m, x, v, budget)?;
        if up.direction == Direction::Exact {
            return Ok(up.bounds());
        }
        let lo = functional_operator_dual_norm(m, x, v, budget)?;
        Ok(up.bounds().intersect(lo.bounds()))
    };
    let rhs = dual(phi, &spaces.x, &spaces.v)?.mul(dual(eta, &spaces.y, &spaces.w)?);
    let sides = vec![
        Side::from_estimate("functional-tensor", &lhs),
        Side::from_bounds("dual-product", rhs, "projective-dual"),
    ];
    Ok(
        CheckRecord::new("prop32", sides, &[(0, 1)], tol, budget)
            .with_meta(&op_spaces(spaces), tag),
    )
}

// -------------------------------------------------------------- open case

/// `‖L‖_[∨,∨] ≤ ‖L‖_[α,α] ≤ ‖L‖_[∧,∧]`: an open question, so never gating.
pub fn question4<T: Scalar>(
    l: &OperatorTensor<T>,
    tag: CrossnormTag,
    budget: &Budget,
    tol: f64,
) -> Result<CheckRecord> {
    let sides = vec![
        Side::from_estimate(
            "induced[injective]",
            &induced_crossnorm(l, InducedNormSpec::uniform(CrossnormTag::Injective), budget)?,
        ),
        Side::from_estimate(
            "induced",
            &induced_crossnorm(l, InducedNormSpec::uniform(tag), budget)?,
        ),
        Side::from_estimate(
            "induced[projective]",
            &induced_crossnorm(
                l,
                InducedNormSpec::uniform(CrossnormTag::Projective),
                budget,
            )?,
        ),
    ];
    let mut rec = CheckRecord::new("question4", sides, &chain_pairs(3), tol, budget)
        .with_meta(&op_spaces(l.spaces()), tag)
        .note("exploratory; the ordering is not known to hold in general");
    rec.gating = false;
    Ok(rec)
}
