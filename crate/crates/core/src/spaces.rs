//! Finite-dimensional real ℓp spaces, their norms and dual norms, and unit-ball
//! geometry (extreme points, sphere sampling, norming functionals).

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Error, Result};
use crate::rng::{gaussian_vector, seeded};
use crate::Scalar;

/// Largest dimension for which the 2^dim sign vectors of the ℓ∞ ball are enumerated.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// An ℓp exponent `p ∈ [1, ∞]`. Infinity is its own variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);
    pub const INF: Exponent = Exponent::Infinity;

    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Input(format!(
                "exponent must lie in [1, inf], got {p}"
            )))
        }
    }

    /// Hölder conjugate: `1/p + 1/p' = 1`, with `1' = ∞`, `∞' = 1`.
    pub fn dual(self) -> Self {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) if p == 2.0 => Exponent::TWO,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_one(self) -> bool {
        self == Exponent::ONE
    }

    pub fn is_two(self) -> bool {
        self == Exponent::TWO
    }

    pub fn is_infinite(self) -> bool {
        self == Exponent::Infinity
    }

    /// True when the unit ball is a polytope (p = 1 or p = ∞).
    pub fn is_polyhedral(self) -> bool {
        self.is_one() || self.is_infinite()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => write!(f, "inf"),
            Exponent::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Input(format!("cannot parse exponent {s:?}")))?;
        Exponent::finite(p)
    }
}

impl TryFrom<String> for Exponent {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Exponent> for String {
    fn from(p: Exponent) -> String {
        p.to_string()
    }
}

/// `ℓp^dim` over the reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpSpace {
    dim: usize,
    p: Exponent,
}

impl LpSpace {
    pub fn new(dim: usize, p: Exponent) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("space dimension must be at least 1".into()));
        }
        if let Exponent::Finite(v) = p {
            Exponent::finite(v)?;
        }
        Ok(LpSpace { dim, p })
    }

    pub fn l2(dim: usize) -> Result<Self> {
        Self::new(dim, Exponent::TWO)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    /// The dual space `ℓ_{p'}^dim`.
    pub fn dual(&self) -> LpSpace {
        LpSpace {
            dim: self.dim,
            p: self.p.dual(),
        }
    }

    pub fn with_dim(&self, dim: usize) -> Result<LpSpace> {
        LpSpace::new(dim, self.p)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return dim_err(format!(
                "vector of length {len} in space of dimension {}",
                self.dim
            ));
        }
        Ok(())
    }

    /// Norm of `v`, checking its length.
    pub fn norm<T: Scalar>(&self, v: ArrayView1<'_, T>) -> Result<T> {
        self.check_len(v.len())?;
        Ok(lp_norm(v, self.p))
    }
}

impl fmt::Display for LpSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}^{}", self.p, self.dim)
    }
}

/// `dual_exponent(p)`.
pub fn dual_exponent(p: Exponent) -> Exponent {
    p.dual()
}

/// ℓp norm of a slice of entries, without any length check.
pub(crate) fn lp_norm_iter<T, I>(entries: I, p: Exponent) -> T
where
    T: Scalar,
    I: Iterator<Item = T> + Clone,
{
    let max = entries.clone().fold(T::zero(), |m, x| m.max(x.abs()));
    match p {
        Exponent::Infinity => max,
        _ if max == T::zero() => T::zero(),
        Exponent::Finite(q) if q == 1.0 => entries.map(|x| x.abs()).sum(),
        Exponent::Finite(q) if q == 2.0 => {
            let s: T = entries.map(|x| (x / max) * (x / max)).sum();
            max * s.sqrt()
        }
        Exponent::Finite(q) => {
            let q = T::lit(q);
            let s: T = entries.map(|x| (x.abs() / max).powf(q)).sum();
            max * s.powf(q.recip())
        }
    }
}

pub(crate) fn lp_norm<T: Scalar>(v: ArrayView1<'_, T>, p: Exponent) -> T {
    lp_norm_iter(v.iter().copied(), p)
}

/// `vector_norm(v, s)`: `(Σ|v_i|^p)^{1/p}`, or `max |v_i|` for p = ∞.
pub fn vector_norm<T: Scalar>(v: ArrayView1<'_, T>, s: &LpSpace) -> Result<T> {
    s.norm(v)
}

/// Unit vector of the dual space that norms `v`: `‖w‖_{p'} = 1` and
/// `⟨w, v⟩ = ‖v‖_p`. This is also a subgradient of `‖·‖_p` at `v`.
/// Returns the zero vector when `v = 0`.
pub fn norming_functional<T: Scalar>(v: ArrayView1<'_, T>, p: Exponent) -> Array1<T> {
    let norm = lp_norm(v, p);
    let mut w = Array1::zeros(v.len());
    if norm == T::zero() {
        return w;
    }
    match p {
        Exponent::Infinity => {
            let (k, _) = v
                .iter()
                .enumerate()
                .fold((0, T::neg_infinity()), |(bk, bv), (i, &x)| {
                    if x.abs() > bv {
                        (i, x.abs())
                    } else {
                        (bk, bv)
                    }
                });
            w[k] = v[k].sign0();
        }
        Exponent::Finite(q) if q == 1.0 => w.zip_mut_with(&v, |wi, &x| *wi = x.sign0()),
        Exponent::Finite(q) if q == 2.0 => w.zip_mut_with(&v, |wi, &x| *wi = x / norm),
        Exponent::Finite(q) => {
            let e = T::lit(q - 1.0);
            w.zip_mut_with(&v, |wi, &x| *wi = x.sign0() * (x.abs() / norm).powf(e));
        }
    }
    w
}

/// Rescales `v` onto the unit sphere of ℓp; `None` for the zero vector.
pub fn normalize<T: Scalar>(v: &Array1<T>, p: Exponent) -> Option<Array1<T>> {
    let n = lp_norm(v.view(), p);
    if n > T::zero() && n.is_finite() {
        Some(v / n)
    } else {
        None
    }
}

/// A linear functional on an ℓp space, represented by its coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional<T: Scalar> {
    coefficients: Array1<T>,
    space: LpSpace,
}

impl<T: Scalar> Functional<T> {
    pub fn new(coefficients: Array1<T>, space: LpSpace) -> Result<Self> {
        space.check_len(coefficients.len())?;
        Ok(Functional {
            coefficients,
            space,
        })
    }

    pub fn coefficients(&self) -> &Array1<T> {
        &self.coefficients
    }

    pub fn space(&self) -> &LpSpace {
        &self.space
    }

    /// `⟨f, x⟩`.
    pub fn apply(&self, x: ArrayView1<'_, T>) -> Result<T> {
        self.space.check_len(x.len())?;
        Ok(self.coefficients.dot(&x))
    }

    /// Norm in the dual space: the ℓ_{p'} norm of the coefficients.
    pub fn dual_norm(&self) -> T {
        lp_norm(self.coefficients.view(), self.space.p.dual())
    }
}

/// `dual_norm(f)`.
pub fn dual_norm<T: Scalar>(f: &Functional<T>) -> T {
    f.dual_norm()
}

/// Extreme points of the closed unit ball of `s` (p ∈ {1, ∞} only).
pub fn unit_ball_extreme_points<T: Scalar>(s: &LpSpace) -> Result<Vec<Array1<T>>> {
    unit_ball_extreme_points_capped(s, DEFAULT_ENUMERATION_CAP)
}

pub fn unit_ball_extreme_points_capped<T: Scalar>(
    s: &LpSpace,
    cap: usize,
) -> Result<Vec<Array1<T>>> {
    let n = s.dim;
    match s.p {
        Exponent::Finite(q) if q == 1.0 => {
            let mut out = Vec::with_capacity(2 * n);
            for k in 0..n {
                for sign in [T::one(), -T::one()] {
                    let mut e = Array1::zeros(n);
                    e[k] = sign;
                    out.push(e);
                }
            }
            Ok(out)
        }
        Exponent::Infinity => {
            if n > cap {
                return Err(Error::Budget(format!(
                    "2^{n} sign vectors exceed the enumeration cap 2^{cap}"
                )));
            }
            Ok((0..1u64 << n)
                .map(|mask| {
                    Array1::from_shape_fn(n, |k| {
                        if mask >> k & 1 == 1 {
                            -T::one()
                        } else {
                            T::one()
                        }
                    })
                })
                .collect())
        }
        Exponent::Finite(_) => Err(Error::Capability(format!(
            "the unit ball of {s} has no finite set of extreme points"
        ))),
    }
}

/// Deterministic point on the unit sphere of `s`: a standard normal draw
/// normalized in the norm of `s`.
pub fn sample_unit_sphere<T: Scalar>(s: &LpSpace, seed: u64) -> Array1<T> {
    let mut rng = seeded(seed);
    sample_unit_sphere_with(s, &mut rng)
}

pub fn sample_unit_sphere_with<T: Scalar, R: rand::Rng + ?Sized>(
    s: &LpSpace,
    rng: &mut R,
) -> Array1<T> {
    loop {
        let g: Array1<T> = gaussian_vector(rng, s.dim);
        if let Some(u) = normalize(&g, s.p) {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn sp(dim: usize, p: &str) -> LpSpace {
        LpSpace::new(dim, p.parse().unwrap()).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_abs_diff_eq!(sp(2, "2").norm(array![3.0, 4.0].view()).unwrap(), 5.0);
        assert_abs_diff_eq!(sp(3, "1").norm(array![1.0, -1.0, 1.0].view()).unwrap(), 3.0);
        for p in ["1", "1.5", "2", "3", "inf"] {
            assert_eq!(sp(4, p).norm(Array1::<f64>::zeros(4).view()).unwrap(), 0.0);
        }
        assert_abs_diff_eq!(
            sp(3, "inf").norm(array![1.0, -7.0, 2.0].view()).unwrap(),
            7.0
        );
    }

    #[test]
    fn norm_rejects_wrong_length() {
        let err = sp(3, "2").norm(array![1.0, 2.0].view()).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn exponent_parsing_and_validation() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::INF);
        assert_eq!("1.5".parse::<Exponent>().unwrap(), Exponent::Finite(1.5));
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
        assert!(Exponent::finite(f64::INFINITY).is_err());
        assert!(LpSpace::new(0, Exponent::TWO).is_err());
    }

    #[test]
    fn dual_exponent_examples() {
        assert_eq!(dual_exponent(Exponent::TWO), Exponent::TWO);
        assert_eq!(dual_exponent(Exponent::ONE), Exponent::INF);
        assert_eq!(dual_exponent(Exponent::INF), Exponent::ONE);
        match dual_exponent(Exponent::Finite(3.0)) {
            Exponent::Finite(q) => assert_abs_diff_eq!(q, 1.5, epsilon = 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dual_norm_examples() {
        let f = Functional::new(array![1.0, 1.0], sp(2, "1")).unwrap();
        assert_abs_diff_eq!(f.dual_norm(), 1.0);
        let f = Functional::new(array![3.0, 4.0], sp(2, "2")).unwrap();
        assert_abs_diff_eq!(f.dual_norm(), 5.0);
        let f = Functional::new(array![2.0, -1.0], sp(2, "inf")).unwrap();
        assert_abs_diff_eq!(dual_norm(&f), 3.0);
        assert!(Functional::new(array![1.0], sp(2, "2")).is_err());
    }

    #[test]
    fn extreme_point_examples() {
        let pts = unit_ball_extreme_points::<f64>(&sp(2, "1")).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.contains(&array![1.0, 0.0]));
        assert!(pts.contains(&array![0.0, -1.0]));
        let pts = unit_ball_extreme_points::<f64>(&sp(2, "inf")).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.contains(&array![-1.0, 1.0]));
        assert!(matches!(
            unit_ball_extreme_points::<f64>(&sp(2, "2")),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            unit_ball_extreme_points::<f64>(&sp(13, "inf")),
            Err(Error::Budget(_))
        ));
        for s in [sp(3, "1"), sp(3, "inf")] {
            for e in unit_ball_extreme_points::<f64>(&s).unwrap() {
                assert_abs_diff_eq!(s.norm(e.view()).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn sphere_samples_are_unit_and_deterministic() {
        let s = sp(3, "2");
        let a: Array1<f64> = sample_unit_sphere(&s, 0);
        assert_abs_diff_eq!(s.norm(a.view()).unwrap(), 1.0, epsilon = 1e-12);
        let s1 = sp(2, "1");
        let b: Array1<f64> = sample_unit_sphere(&s1, 7);
        assert_abs_diff_eq!(s1.norm(b.view()).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(b, sample_unit_sphere::<f64>(&s1, 7));
    }

    #[test]
    fn norming_functional_attains_holder_equality() {
        for p in ["1", "1.5", "2", "3", "inf"] {
            let s = sp(4, p);
            let v: Array1<f64> = sample_unit_sphere(&s, 11) * 2.5;
            let w = norming_functional(v.view(), s.p());
            assert_abs_diff_eq!(lp_norm(w.view(), s.p().dual()), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(w.dot(&v), 2.5, epsilon = 1e-12);
        }
        let z = norming_functional(Array1::<f64>::zeros(3).view(), Exponent::INF);
        assert_eq!(z, Array1::zeros(3));
    }

    #[test]
    fn works_in_single_precision() {
        let s = sp(2, "2");
        let n: f32 = s.norm(array![3.0f32, 4.0].view()).unwrap();
        assert!((n - 5.0).abs() < 1e-6);
    }
}
