//! Tensors `F ∈ X⊗Y` as dense matrices, their representations as sums of
//! single tensors, operator tensors `L = Σ_j A_j⊗B_j` and functionals on them.
//!
//! The canonical action of an operator tensor is `F ↦ Σ_j A_j F B_jᵀ`; no
//! Kronecker matrix is formed here.

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::error::{dim_err, Error, Result};
use crate::spaces::{lp_norm, LpSpace};
use crate::Scalar;

/// An element of `X⊗Y`, stored as the `dim X × dim Y` matrix `Σ_i x_i y_iᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T: Scalar> {
    entries: Array2<T>,
    x_space: LpSpace,
    y_space: LpSpace,
}

impl<T: Scalar> Tensor<T> {
    pub fn new(entries: Array2<T>, x_space: LpSpace, y_space: LpSpace) -> Result<Self> {
        if entries.dim() != (x_space.dim(), y_space.dim()) {
            return dim_err(format!(
                "matrix of shape {:?} for tensor product {x_space}⊗{y_space}",
                entries.dim()
            ));
        }
        Ok(Tensor {
            entries,
            x_space,
            y_space,
        })
    }

    pub fn zeros(x_space: LpSpace, y_space: LpSpace) -> Self {
        Tensor {
            entries: Array2::zeros((x_space.dim(), y_space.dim())),
            x_space,
            y_space,
        }
    }

    pub fn entries(&self) -> &Array2<T> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<T> {
        self.entries
    }

    pub fn x_space(&self) -> &LpSpace {
        &self.x_space
    }

    pub fn y_space(&self) -> &LpSpace {
        &self.y_space
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == T::zero())
    }

    /// Same matrix regarded as an element of `Y⊗X`.
    pub fn transposed(&self) -> Tensor<T> {
        Tensor {
            entries: self.entries.t().to_owned(),
            x_space: self.y_space,
            y_space: self.x_space,
        }
    }

    /// Same entries in different factor spaces of equal dimensions.
    pub fn with_spaces(&self, x_space: LpSpace, y_space: LpSpace) -> Result<Tensor<T>> {
        Tensor::new(self.entries.clone(), x_space, y_space)
    }

    pub fn scaled(&self, c: T) -> Tensor<T> {
        Tensor {
            entries: &self.entries * c,
            x_space: self.x_space,
            y_space: self.y_space,
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: T, other: &Tensor<T>, b: T) -> Result<Tensor<T>> {
        self.check_same_spaces(other)?;
        Ok(Tensor {
            entries: &self.entries * a + &other.entries * b,
            x_space: self.x_space,
            y_space: self.y_space,
        })
    }

    fn check_same_spaces(&self, other: &Tensor<T>) -> Result<()> {
        if self.x_space != other.x_space || self.y_space != other.y_space {
            return dim_err(format!(
                "tensors live in {}⊗{} and {}⊗{}",
                self.x_space, self.y_space, other.x_space, other.y_space
            ));
        }
        Ok(())
    }

    /// The row decomposition `Σ_k e_k ⊗ row_k(F)`, skipping zero rows.
    pub fn row_decomposition(&self) -> Decomposition<T> {
        let n = self.x_space.dim();
        let terms = self
            .entries
            .axis_iter(Axis(0))
            .enumerate()
            .filter(|(_, row)| row.iter().any(|&v| v != T::zero()))
            .map(|(k, row)| {
                let mut e = Array1::zeros(n);
                e[k] = T::one();
                (e, row.to_owned())
            })
            .collect();
        Decomposition { terms }
    }

    /// The column decomposition `Σ_l col_l(F) ⊗ e_l`, skipping zero columns.
    pub fn column_decomposition(&self) -> Decomposition<T> {
        let m = self.y_space.dim();
        let terms = self
            .entries
            .axis_iter(Axis(1))
            .enumerate()
            .filter(|(_, col)| col.iter().any(|&v| v != T::zero()))
            .map(|(l, col)| {
                let mut e = Array1::zeros(m);
                e[l] = T::one();
                (col.to_owned(), e)
            })
            .collect();
        Decomposition { terms }
    }
}

/// `x⊗y`, i.e. the outer product `x yᵀ`.
pub fn single_tensor<T: Scalar>(
    x: ArrayView1<'_, T>,
    y: ArrayView1<'_, T>,
    x_space: LpSpace,
    y_space: LpSpace,
) -> Result<Tensor<T>> {
    if x.len() != x_space.dim() || y.len() != y_space.dim() {
        return dim_err(format!(
            "single tensor of vectors with lengths {} and {} in {x_space}⊗{y_space}",
            x.len(),
            y.len()
        ));
    }
    Ok(Tensor {
        entries: outer(x, y),
        x_space,
        y_space,
    })
}

pub(crate) fn outer<T: Scalar>(x: ArrayView1<'_, T>, y: ArrayView1<'_, T>) -> Array2<T> {
    x.insert_axis(Axis(1)).dot(&y.insert_axis(Axis(0)))
}

/// A representation `Σ_i x_i⊗y_i`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Decomposition<T: Scalar> {
    pub terms: Vec<(Array1<T>, Array1<T>)>,
}

impl<T: Scalar> Decomposition<T> {
    pub fn new(terms: Vec<(Array1<T>, Array1<T>)>) -> Self {
        Decomposition { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_i ‖x_i‖_X ‖y_i‖_Y`.
    pub fn cost(&self, x_space: &LpSpace, y_space: &LpSpace) -> T {
        self.terms
            .iter()
            .map(|(x, y)| lp_norm(x.view(), x_space.p()) * lp_norm(y.view(), y_space.p()))
            .sum()
    }

    pub fn push(&mut self, x: Array1<T>, y: Array1<T>) {
        self.terms.push((x, y));
    }

    pub fn extend(&mut self, other: Decomposition<T>) {
        self.terms.extend(other.terms);
    }

    /// Drops terms with a zero factor.
    pub fn prune(mut self) -> Self {
        self.terms.retain(|(x, y)| {
            x.iter().any(|&v| v != T::zero()) && y.iter().any(|&v| v != T::zero())
        });
        self
    }

    /// Reduces the number of terms to at most `dim X · dim Y + 1` without
    /// changing the assembled tensor or the cost (Carathéodory reduction on
    /// the normalized atoms).
    pub fn caratheodory_reduce(self, x_space: &LpSpace, y_space: &LpSpace) -> Self {
        let (n, m) = (x_space.dim(), y_space.dim());
        let limit = n * m + 1;
        // atoms a_i = u_i v_iᵀ with unit factors, weights w_i = ‖x_i‖‖y_i‖
        let mut atoms: Vec<(Array1<T>, Array1<T>, T)> = self
            .prune()
            .terms
            .into_iter()
            .map(|(x, y)| {
                let nx = lp_norm(x.view(), x_space.p());
                let ny = lp_norm(y.view(), y_space.p());
                (x / nx, y / ny, nx * ny)
            })
            .collect();
        while atoms.len() > limit {
            let k = atoms.len();
            // columns: (vec(a_i), 1) in R^{nm+1}
            let mut mat = Array2::<T>::zeros((n * m + 1, k));
            for (i, (u, v, _)) in atoms.iter().enumerate() {
                let a = outer(u.view(), v.view());
                for r in 0..n {
                    for c in 0..m {
                        mat[[r * m + c, i]] = a[[r, c]];
                    }
                }
                mat[[n * m, i]] = T::one();
            }
            let lambda = null_vector(mat);
            // the coefficient vector sums to zero, so some entry is positive
            let Some((drop, t)) = atoms
                .iter()
                .zip(lambda.iter())
                .enumerate()
                .filter(|(_, (_, &l))| l > T::zero())
                .map(|(i, ((_, _, w), &l))| (i, *w / l))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            else {
                break;
            };
            for ((_, _, w), &l) in atoms.iter_mut().zip(lambda.iter()) {
                *w = (*w - t * l).max(T::zero());
            }
            atoms.remove(drop);
        }
        Decomposition {
            terms: atoms
                .into_iter()
                .filter(|(_, _, w)| *w > T::zero())
                .map(|(u, v, w)| {
                    let s = w.sqrt();
                    (u * s, v * s)
                })
                .collect(),
        }
    }
}

/// A nonzero vector in the null space of a wide matrix (more columns than
/// rows), via Gaussian elimination with partial pivoting.
fn null_vector<T: Scalar>(mut a: Array2<T>) -> Array1<T> {
    let (rows, cols) = a.dim();
    let scale = a.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    let tol = scale * T::epsilon() * T::lit(64.0);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    let mut free = None;
    for c in 0..cols {
        if r == rows {
            free = free.or(Some(c));
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, a[[i, c]].abs()))
            .fold((r, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            free = free.or(Some(c));
            continue;
        }
        for j in 0..cols {
            a.swap([r, j], [best, j]);
        }
        let piv = a[[r, c]];
        for j in 0..cols {
            a[[r, j]] /= piv;
        }
        for i in 0..rows {
            if i != r {
                let f = a[[i, c]];
                if f != T::zero() {
                    for j in 0..cols {
                        a[[i, j]] = a[[i, j]] - f * a[[r, j]];
                    }
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let free = free.unwrap_or(cols - 1);
    let mut x = Array1::zeros(cols);
    x[free] = T::one();
    for &(row, col) in &pivots {
        x[col] = -a[[row, free]];
    }
    x
}

/// `assemble(d)`: the tensor `Σ_i x_i y_iᵀ`.
pub fn assemble<T: Scalar>(
    d: &Decomposition<T>,
    x_space: LpSpace,
    y_space: LpSpace,
) -> Result<Tensor<T>> {
    let mut entries = Array2::zeros((x_space.dim(), y_space.dim()));
    for (i, (x, y)) in d.terms.iter().enumerate() {
        if x.len() != x_space.dim() || y.len() != y_space.dim() {
            return dim_err(format!(
                "term {i} has factor lengths ({}, {}) in {x_space}⊗{y_space}",
                x.len(),
                y.len()
            ));
        }
        entries += &outer(x.view(), y.view());
    }
    Ok(Tensor {
        entries,
        x_space,
        y_space,
    })
}

/// The four factor spaces of an operator tensor `B[X,V]⊗B[Y,W]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpaces {
    pub x: LpSpace,
    pub y: LpSpace,
    pub v: LpSpace,
    pub w: LpSpace,
}

impl OperatorSpaces {
    pub fn new(x: LpSpace, y: LpSpace, v: LpSpace, w: LpSpace) -> Self {
        OperatorSpaces { x, y, v, w }
    }

    /// `X = V`, `Y = W`.
    pub fn square(x: LpSpace, y: LpSpace) -> Self {
        OperatorSpaces { x, y, v: x, w: y }
    }

    pub fn a_shape(&self) -> (usize, usize) {
        (self.v.dim(), self.x.dim())
    }

    pub fn b_shape(&self) -> (usize, usize) {
        (self.w.dim(), self.y.dim())
    }
}

/// `L = Σ_j A_j⊗B_j` with `A_j : X → V` and `B_j : Y → W`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTensor<T: Scalar> {
    terms: Vec<(Array2<T>, Array2<T>)>,
    spaces: OperatorSpaces,
}

impl<T: Scalar> OperatorTensor<T> {
    pub fn new(terms: Vec<(Array2<T>, Array2<T>)>, spaces: OperatorSpaces) -> Result<Self> {
        for (j, (a, b)) in terms.iter().enumerate() {
            if a.dim() != spaces.a_shape() || b.dim() != spaces.b_shape() {
                return dim_err(format!(
                    "term {j}: A is {:?}, B is {:?}; expected {:?} and {:?}",
                    a.dim(),
                    b.dim(),
                    spaces.a_shape(),
                    spaces.b_shape()
                ));
            }
        }
        Ok(OperatorTensor { terms, spaces })
    }

    /// `A⊗B`.
    pub fn single(a: Array2<T>, b: Array2<T>, spaces: OperatorSpaces) -> Result<Self> {
        Self::new(vec![(a, b)], spaces)
    }

    /// `I⊗I` on `X⊗Y`.
    pub fn identity(x: LpSpace, y: LpSpace) -> Self {
        OperatorTensor {
            terms: vec![(Array2::eye(x.dim()), Array2::eye(y.dim()))],
            spaces: OperatorSpaces::square(x, y),
        }
    }

    pub fn zero(spaces: OperatorSpaces) -> Self {
        OperatorTensor {
            terms: Vec::new(),
            spaces,
        }
    }

    pub fn terms(&self) -> &[(Array2<T>, Array2<T>)] {
        &self.terms
    }

    pub fn spaces(&self) -> &OperatorSpaces {
        &self.spaces
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when `L` acts as the zero map.
    pub fn is_zero_map(&self) -> bool {
        let (nx, ny) = (self.spaces.x.dim(), self.spaces.y.dim());
        let mut acc = T::zero();
        let mut scale = T::zero();
        for k in 0..nx {
            for l in 0..ny {
                let mut e = Array2::zeros((nx, ny));
                e[[k, l]] = T::one();
                let img = self.apply_matrix(&e);
                acc = acc.max(img.iter().fold(T::zero(), |m, &v| m.max(v.abs())));
            }
        }
        for (a, b) in &self.terms {
            let sa = a.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
            let sb = b.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
            scale = scale.max(sa * sb);
        }
        acc <= scale * T::epsilon() * T::lit(64.0)
    }

    pub fn scaled(&self, c: T) -> Self {
        OperatorTensor {
            terms: self.terms.iter().map(|(a, b)| (a * c, b.clone())).collect(),
            spaces: self.spaces,
        }
    }

    /// Concatenation of the term lists (the sum of the two maps).
    pub fn plus(&self, other: &OperatorTensor<T>) -> Result<Self> {
        if self.spaces != other.spaces {
            return dim_err("operator tensors act between different spaces");
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(OperatorTensor {
            terms,
            spaces: self.spaces,
        })
    }

    /// `self ∘ inner`: terms `(A_j A'_k, B_j B'_k)`.
    pub fn compose(&self, inner: &OperatorTensor<T>) -> Result<Self> {
        let (o, i) = (&self.spaces, &inner.spaces);
        if o.x.dim() != i.v.dim() || o.y.dim() != i.w.dim() {
            return dim_err("composition of operator tensors with incompatible middle spaces");
        }
        let mut terms = Vec::with_capacity(self.terms.len() * inner.terms.len());
        for (a, b) in &self.terms {
            for (a2, b2) in &inner.terms {
                terms.push((a.dot(a2), b.dot(b2)));
            }
        }
        Ok(OperatorTensor {
            terms,
            spaces: OperatorSpaces::new(i.x, i.y, o.v, o.w),
        })
    }

    /// `Σ_j A_j F B_jᵀ` on raw matrices.
    pub(crate) fn apply_matrix(&self, f: &Array2<T>) -> Array2<T> {
        let mut out = Array2::zeros((self.spaces.v.dim(), self.spaces.w.dim()));
        for (a, b) in &self.terms {
            out += &a.dot(f).dot(&b.t());
        }
        out
    }

    /// Adjoint action `G ↦ Σ_j A_jᵀ G B_j`.
    pub(crate) fn adjoint_matrix(&self, g: &Array2<T>) -> Array2<T> {
        let mut out = Array2::zeros((self.spaces.x.dim(), self.spaces.y.dim()));
        for (a, b) in &self.terms {
            out += &a.t().dot(g).dot(b);
        }
        out
    }
}

/// `apply(L, F) = Σ_j A_j F B_jᵀ ∈ V⊗W`.
pub fn apply<T: Scalar>(l: &OperatorTensor<T>, f: &Tensor<T>) -> Result<Tensor<T>> {
    if f.x_space != l.spaces.x || f.y_space != l.spaces.y {
        return dim_err(format!(
            "tensor in {}⊗{} but operator tensor acts on {}⊗{}",
            f.x_space, f.y_space, l.spaces.x, l.spaces.y
        ));
    }
    Ok(Tensor {
        entries: l.apply_matrix(&f.entries),
        x_space: l.spaces.v,
        y_space: l.spaces.w,
    })
}

/// `𝕜 = Σ_k φ_k⊗η_k` with `φ_k ∈ B[X,V]*`, `η_k ∈ B[Y,W]*`, each given by
/// its trace-pairing matrix `⟨φ, A⟩ = Σ_{r,c} φ_{rc} A_{rc}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFunctionalTensor<T: Scalar> {
    terms: Vec<(Array2<T>, Array2<T>)>,
    phi_shape: (usize, usize),
    eta_shape: (usize, usize),
}

impl<T: Scalar> OperatorFunctionalTensor<T> {
    pub fn new(
        terms: Vec<(Array2<T>, Array2<T>)>,
        phi_shape: (usize, usize),
        eta_shape: (usize, usize),
    ) -> Result<Self> {
        for (k, (phi, eta)) in terms.iter().enumerate() {
            if phi.dim() != phi_shape || eta.dim() != eta_shape {
                return dim_err(format!(
                    "functional term {k} has shapes {:?} and {:?}",
                    phi.dim(),
                    eta.dim()
                ));
            }
        }
        Ok(OperatorFunctionalTensor {
            terms,
            phi_shape,
            eta_shape,
        })
    }

    /// `φ⊗η`.
    pub fn single(phi: Array2<T>, eta: Array2<T>) -> Self {
        let (phi_shape, eta_shape) = (phi.dim(), eta.dim());
        OperatorFunctionalTensor {
            terms: vec![(phi, eta)],
            phi_shape,
            eta_shape,
        }
    }

    pub fn terms(&self) -> &[(Array2<T>, Array2<T>)] {
        &self.terms
    }

    pub fn phi_shape(&self) -> (usize, usize) {
        self.phi_shape
    }

    pub fn eta_shape(&self) -> (usize, usize) {
        self.eta_shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms
            .iter()
            .all(|(p, e)| p.iter().all(|&v| v == T::zero()) || e.iter().all(|&v| v == T::zero()))
    }
}

pub(crate) fn trace_pairing<T: Scalar>(phi: &Array2<T>, a: &Array2<T>) -> T {
    phi.iter().zip(a.iter()).map(|(&p, &x)| p * x).sum()
}

/// `pair(𝕜, L) = Σ_{k,j} φ_k(A_j) η_k(B_j)`.
pub fn pair<T: Scalar>(k: &OperatorFunctionalTensor<T>, l: &OperatorTensor<T>) -> Result<T> {
    if k.phi_shape != l.spaces.a_shape() || k.eta_shape != l.spaces.b_shape() {
        return Err(Error::Dimension(format!(
            "functional shapes {:?}/{:?} against operator shapes {:?}/{:?}",
            k.phi_shape,
            k.eta_shape,
            l.spaces.a_shape(),
            l.spaces.b_shape()
        )));
    }
    Ok(pair_terms(k.terms(), l.terms()))
}

pub(crate) fn pair_terms<T: Scalar>(
    k: &[(Array2<T>, Array2<T>)],
    l: &[(Array2<T>, Array2<T>)],
) -> T {
    let mut total = T::zero();
    for (phi, eta) in k {
        for (a, b) in l {
            total += trace_pairing(phi, a) * trace_pairing(eta, b);
        }
    }
    total
}
