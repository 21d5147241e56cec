//! Dense singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! Matrices here are at most a few dozen rows, so the cubic-per-sweep cost is
//! irrelevant and Jacobi gives singular values to high relative accuracy.

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::Scalar;

/// Thin SVD `M = U diag(s) Vᵀ` with `s` sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    /// `rows × k`, columns are left singular vectors (zero where `s = 0`).
    pub u: Array2<T>,
    pub s: Array1<T>,
    /// `cols × k`, columns are right singular vectors.
    pub v: Array2<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn spectral(&self) -> T {
        self.s.first().copied().unwrap_or_else(T::zero)
    }

    pub fn nuclear(&self) -> T {
        self.s.iter().copied().sum()
    }

    pub fn frobenius(&self) -> T {
        self.s.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    /// Number of singular values above `tol · s_max`.
    pub fn rank(&self, tol: T) -> usize {
        let cut = self.spectral() * tol;
        self.s.iter().filter(|&&x| x > cut).count()
    }
}

const MAX_SWEEPS: usize = 80;

pub fn svd<T: Scalar>(m: ArrayView2<'_, T>) -> Svd<T> {
    let (rows, cols) = m.dim();
    if rows < cols {
        let t = jacobi_tall(m.t());
        return Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    jacobi_tall(m)
}

fn jacobi_tall<T: Scalar>(m: ArrayView2<'_, T>) -> Svd<T> {
    let (rows, cols) = m.dim();
    let mut a = m.to_owned();
    let mut v = Array2::<T>::eye(cols);
    let eps = T::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for r in 0..rows {
                    let (x, y) = (a[[r, p]], a[[r, q]]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = (T::one() + t * t).sqrt().recip();
                let s = c * t;
                for r in 0..rows {
                    let (x, y) = (a[[r, p]], a[[r, q]]);
                    a[[r, p]] = c * x - s * y;
                    a[[r, q]] = s * x + c * y;
                }
                for r in 0..cols {
                    let (x, y) = (v[[r, p]], v[[r, q]]);
                    v[[r, p]] = c * x - s * y;
                    v[[r, q]] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = a
        .axis_iter(Axis(1))
        .map(|col| col.iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut u = Array2::zeros((rows, cols));
    let mut vs = Array2::zeros((cols, cols));
    let mut s = Array1::zeros(cols);
    for (k, &j) in order.iter().enumerate() {
        s[k] = norms[j];
        if norms[j] > T::zero() {
            u.column_mut(k).assign(&(&a.column(j) / norms[j]));
        }
        vs.column_mut(k).assign(&v.column(j));
    }
    Svd { u, s, v: vs }
}

/// Largest singular value.
pub fn spectral_norm<T: Scalar>(m: ArrayView2<'_, T>) -> T {
    svd(m).spectral()
}

/// Sum of singular values.
pub fn nuclear_norm<T: Scalar>(m: ArrayView2<'_, T>) -> T {
    svd(m).nuclear()
}

/// `U Vᵀ` restricted to the nonzero singular values: the maximizer of
/// `⟨G, F⟩` over the spectral-norm unit ball.
pub fn polar_factor<T: Scalar>(g: ArrayView2<'_, T>) -> Array2<T> {
    let d = svd(g);
    let cut = d.spectral() * T::epsilon() * T::lit(16.0);
    let mut out = Array2::zeros(g.dim());
    for k in 0..d.s.len() {
        if d.s[k] > cut {
            let uk = d.u.column(k).insert_axis(Axis(1));
            let vk = d.v.column(k).insert_axis(Axis(0));
            out = out + uk.dot(&vk);
        }
    }
    out
}
