//! Brute-force and closed-form references, independent of the estimators.
//!
//! Nothing here calls the optimizers in [`crate::crossnorms`] or
//! [`crate::operator_norms`]; singular values come from a symmetric Jacobi
//! eigensolver on the Gram matrix rather than from [`crate::linalg`].
//!
//! This is also the only place an operator tensor is written out as a matrix.
//! The flattening is column-major on both sides: `F ∈ ℝ^{n×m}` maps to
//! `vec(F)[k + n·l] = F[k, l]`, so the row index varies fastest. Under it
//! `vec(Σ_j A_j F B_jᵀ) = (Σ_j B_j ⊗ A_j) vec(F)`.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};
use crate::spaces::{vector_norm, LpSpace};
use crate::tensor::{OperatorTensor, Tensor};
use crate::Scalar;

/// What an oracle value certifies about the true value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certainty {
    Exact,
    /// At most the true value: a maximum over explicit grid points.
    GridLower,
    /// At least the true value: a minimum over explicit feasible decompositions.
    SampledUpper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T: Scalar> {
    pub value: T,
    pub certainty: Certainty,
    /// Grid points or decompositions examined.
    pub samples: usize,
}

/// Largest dimension per factor accepted by the exhaustive oracles.
pub const ORACLE_MAX_DIM: usize = 3;

// ------------------------------------------------------------ singular values

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix by cyclic
/// two-sided Jacobi rotations.
fn symmetric_eigen<T: Scalar>(mut a: Array2<T>) -> (Array1<T>, Array2<T>) {
    let n = a.nrows();
    let mut v = Array2::<T>::eye(n);
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[[i, j]] * a[[i, j]])
            .sum();
        let diag: T = (0..n).map(|i| a[[i, i]] * a[[i, i]]).sum();
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[[k, p]], a[[k, q]]);
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[[p, k]], a[[q, k]]);
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[[k, p]], v[[k, q]]);
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    (a.diag().to_owned(), v)
}

/// Singular values of `m`, unsorted: `σ_k = ‖M v_k‖₂` for the eigenvectors
/// `v_k` of the smaller Gram matrix.
pub fn singular_values<T: Scalar>(m: ArrayView2<'_, T>) -> Vec<T> {
    let m = if m.nrows() < m.ncols() { m.t() } else { m };
    if m.ncols() == 0 {
        return Vec::new();
    }
    let (_, v) = symmetric_eigen(m.t().dot(&m));
    v.axis_iter(Axis(1))
        .map(|vk| m.dot(&vk).iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect()
}

pub fn svd_spectral<T: Scalar>(m: ArrayView2<'_, T>) -> T {
    singular_values(m)
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

pub fn svd_nuclear<T: Scalar>(m: ArrayView2<'_, T>) -> T {
    singular_values(m).into_iter().sum()
}

// -------------------------------------------------------------- injective grid

fn check_oracle_dims(n: usize, m: usize) -> Result<()> {
    if n > ORACLE_MAX_DIM || m > ORACLE_MAX_DIM {
        return Err(Error::Budget(format!(
            "oracle limited to factor dims ≤ {ORACLE_MAX_DIM}, got {n}×{m}"
        )));
    }
    Ok(())
}

/// Points of the cube surface `‖f‖_∞ = 1` on the lattice with `s`
/// subdivisions per edge, one of each antipodal pair.
fn cube_surface(n: usize, s: usize) -> Vec<Vec<f64>> {
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / s as f64;
    let total = (s + 1).pow(n as u32);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        if idx.iter().any(|&i| i == 0 || i == s) {
            let p: Vec<f64> = idx.iter().map(|&i| coord(i)).collect();
            // keep the representative whose first nonzero coordinate is positive
            if p.iter().find(|&&x| x != 0.0).is_some_and(|&x| x > 0.0) {
                out.push(p);
            }
        }
        for d in idx.iter_mut() {
            *d += 1;
            if *d <= s {
                break;
            }
            *d = 0;
        }
    }
    out
}

/// Maximum of `‖Fᵀ f‖_Y / ‖f‖_{X*}` over a dyadic lattice on the cube
/// surface (radially projected onto the dual sphere). Grids for larger
/// resolutions contain those for smaller ones, so the value is monotone.
pub fn grid_injective<T: Scalar>(t: &Tensor<T>, resolution: usize) -> Result<OracleResult<T>> {
    let (n, m) = t.entries().dim();
    check_oracle_dims(n, m)?;
    if t.y_space().dim() < t.x_space().dim() {
        return grid_injective(&t.transposed(), resolution);
    }
    let s = resolution.max(1).next_power_of_two();
    let xd = t.x_space().dual();
    let points = cube_surface(n, s);
    let mut best = T::zero();
    for p in &points {
        let f = Array1::from_iter(p.iter().map(|&x| T::lit(x)));
        let den = vector_norm(f.view(), &xd)?;
        let num = vector_norm(t.entries().t().dot(&f).view(), t.y_space())?;
        let r = num / den;
        if r > best {
            best = r;
        }
    }
    Ok(OracleResult {
        value: best,
        certainty: Certainty::GridLower,
        samples: points.len(),
    })
}

// ---------------------------------------------------- decomposition sampling

/// `F = C R` with `C` the pivot columns of `F` (Gauss–Jordan with partial
/// pivoting on `F`), as factor matrices `(C, Rᵀ)`.
fn cr_factorization(f: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let (n, m) = f.dim();
    let mut r = f.clone();
    let scale = f.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let tol = scale * 1e-12 * (n.max(m) as f64);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        if row == n {
            break;
        }
        let (best, val) = (row..n)
            .map(|i| (i, r[[i, col]].abs()))
            .fold((row, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if val <= tol {
            continue;
        }
        for c in 0..m {
            r.swap([row, c], [best, c]);
        }
        let p = r[[row, col]];
        for c in 0..m {
            r[[row, c]] /= p;
        }
        for i in 0..n {
            if i != row {
                let factor = r[[i, col]];
                if factor != 0.0 {
                    for c in 0..m {
                        r[[i, c]] -= factor * r[[row, c]];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let k = pivots.len();
    let mut c = Array2::zeros((n, k));
    for (j, &col) in pivots.iter().enumerate() {
        c.column_mut(j).assign(&f.column(col));
    }
    let rt = r.slice(ndarray::s![0..k, ..]).t().to_owned();
    (c, rt)
}

/// Inverse by Gauss–Jordan with partial pivoting; `None` if numerically singular.
fn invert(a: &Array2<f64>) -> Option<Array2<f64>> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut inv = Array2::<f64>::eye(n);
    for col in 0..n {
        let (best, val) = (col..n)
            .map(|i| (i, m[[i, col]].abs()))
            .fold((col, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if val < 1e-8 {
            return None;
        }
        for c in 0..n {
            m.swap([col, c], [best, c]);
            inv.swap([col, c], [best, c]);
        }
        let p = m[[col, col]];
        for c in 0..n {
            m[[col, c]] /= p;
            inv[[col, c]] /= p;
        }
        for i in 0..n {
            if i != col {
                let factor = m[[i, col]];
                if factor != 0.0 {
                    for c in 0..n {
                        m[[i, c]] -= factor * m[[col, c]];
                        inv[[i, c]] -= factor * inv[[col, c]];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Cost `Σ_i ‖x_i‖‖y_i‖` of `X Yᵀ` plus the row decomposition of the
/// residual `F − X Yᵀ`, which makes the decomposition exactly feasible.
fn feasible_cost(
    f: &Array2<f64>,
    x: &Array2<f64>,
    y: &Array2<f64>,
    xs: &LpSpace,
    ys: &LpSpace,
) -> f64 {
    let mut cost = 0.0;
    for (xc, yc) in x.axis_iter(Axis(1)).zip(y.axis_iter(Axis(1))) {
        cost += vector_norm(xc, xs).unwrap() * vector_norm(yc, ys).unwrap();
    }
    let resid = f - &x.dot(&y.t());
    for (k, row) in resid.axis_iter(Axis(0)).enumerate() {
        let mut e = Array1::zeros(xs.dim());
        e[k] = 1.0;
        cost += vector_norm(e.view(), xs).unwrap() * vector_norm(row, ys).unwrap();
    }
    cost
}

fn gaussian_square<R: Rng>(rng: &mut R, k: usize) -> Array2<f64> {
    Array2::from_shape_fn((k, k), |_| rng.sample::<f64, _>(rand_distr::StandardNormal))
}

/// Minimum cost over `samples` exactly feasible decompositions of `F`.
///
/// Sample 0 is the rank factorization `F = C R`. Further samples mix the
/// factor columns of the rank or row factorization (padded with zero columns
/// up to `n·m` terms) by random invertible matrices; half of them perturb the
/// best mixing found so far instead of drawing a fresh one.
pub fn random_decomposition_search<T: Scalar>(
    t: &Tensor<T>,
    samples: usize,
    seed: u64,
) -> Result<OracleResult<T>> {
    let (n, m) = t.entries().dim();
    check_oracle_dims(n, m)?;
    let (xs, ys) = (t.x_space(), t.y_space());
    let f = t.entries().mapv(|v| v.to_f64_lossy());
    if f.iter().all(|&v| v == 0.0) {
        return Ok(OracleResult {
            value: T::zero(),
            certainty: Certainty::SampledUpper,
            samples: 1,
        });
    }
    let (c, rt) = cr_factorization(&f);
    let rows = (Array2::<f64>::eye(n), f.t().to_owned());
    let pad = |x: &Array2<f64>, k: usize| {
        let mut out = Array2::zeros((x.nrows(), k));
        out.slice_mut(ndarray::s![.., 0..x.ncols()]).assign(x);
        out
    };
    let bases = [(c.clone(), rt.clone()), rows];
    let mut best = feasible_cost(&f, &c, &rt, xs, ys);
    let mut best_mix: Option<(usize, usize, Array2<f64>)> = None;
    let mut rng = seeded(derive_seed(seed, 0x6f72_6163));
    for s in 1..samples {
        let local = s % 2 == 0 && best_mix.is_some();
        let (b, k, mix) = if local {
            let (b, k, base) = best_mix.as_ref().unwrap();
            let step = 10f64.powf(-rng.random_range(0.5..4.0));
            (*b, *k, base + &(gaussian_square(&mut rng, *k) * step))
        } else {
            let b = rng.random_range(0..bases.len());
            let min_k = bases[b].0.ncols().max(1);
            let k = rng.random_range(min_k..=n * m);
            (b, k, gaussian_square(&mut rng, k))
        };
        let Some(inv) = invert(&mix) else { continue };
        let x = pad(&bases[b].0, k).dot(&mix);
        let y = pad(&bases[b].1, k).dot(&inv.t());
        let cost = feasible_cost(&f, &x, &y, xs, ys);
        if cost < best {
            best = cost;
            best_mix = Some((b, k, mix));
        } else if best_mix.is_none() {
            best_mix = Some((b, k, Array2::eye(k)));
        }
    }
    Ok(OracleResult {
        value: T::lit(best),
        certainty: Certainty::SampledUpper,
        samples: samples.max(1),
    })
}

// ------------------------------------------------------------------ Kronecker

/// The `(n_V n_W) × (n_X n_Y)` matrix of `F ↦ Σ_j A_j F B_jᵀ`:
/// `K[v + n_V w, x + n_X y] = Σ_j A_j[v, x] B_j[w, y]`.
pub fn kron_matrix<T: Scalar>(l: &OperatorTensor<T>) -> Array2<T> {
    let sp = l.spaces();
    let (nx, ny, nv, nw) = (sp.x.dim(), sp.y.dim(), sp.v.dim(), sp.w.dim());
    let mut k = Array2::zeros((nv * nw, nx * ny));
    for (a, b) in l.terms() {
        for w in 0..nw {
            for y in 0..ny {
                let bwy = b[[w, y]];
                if bwy == T::zero() {
                    continue;
                }
                for v in 0..nv {
                    for x in 0..nx {
                        k[[v + nv * w, x + nx * y]] += a[[v, x]] * bwy;
                    }
                }
            }
        }
    }
    k
}

/// Column-major `vec` matching [`kron_matrix`].
pub fn vec_col_major<T: Scalar>(f: &Array2<T>) -> Array1<T> {
    f.t().iter().copied().collect()
}

/// Inverse of [`vec_col_major`].
pub fn unvec_col_major<T: Scalar>(v: &Array1<T>, rows: usize, cols: usize) -> Array2<T> {
    Array2::from_shape_vec((cols, rows), v.to_vec())
        .expect("length rows·cols")
        .reversed_axes()
        .as_standard_layout()
        .to_owned()
}

/// `‖L‖` from `ℓ2⊗ℓ2` (Frobenius) to `ℓ2⊗ℓ2`: the spectral norm of [`kron_matrix`].
pub fn kron_spectral<T: Scalar>(l: &OperatorTensor<T>) -> Result<T> {
    let sp = l.spaces();
    if ![sp.x, sp.y, sp.v, sp.w].iter().all(|s| s.p().is_two()) {
        return Err(Error::Capability(
            "kron_spectral needs ℓ2 spaces on all four factors".into(),
        ));
    }
    Ok(svd_spectral(kron_matrix(l).view()))
}
