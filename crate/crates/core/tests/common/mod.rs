#![allow(dead_code)]

use crossnorm::{Budget, Exponent, LpSpace, OperatorSpaces, OperatorTensor, Tensor};
use ndarray::Array2;
use proptest::prelude::*;

pub fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::Finite(1.5)),
        Just(Exponent::TWO),
        Just(Exponent::Finite(3.0)),
        Just(Exponent::INF),
    ]
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(-2.0..2.0f64, rows * cols)
        .prop_map(move |v| Array2::from_shape_vec((rows, cols), v).unwrap())
}

pub fn vector(len: usize) -> impl Strategy<Value = ndarray::Array1<f64>> {
    prop::collection::vec(-2.0..2.0f64, len).prop_map(ndarray::Array1::from)
}

pub fn space(n: usize, p: Exponent) -> LpSpace {
    LpSpace::new(n, p).unwrap()
}

pub fn l2(n: usize) -> LpSpace {
    LpSpace::l2(n).unwrap()
}

/// A tensor on `ℓp^n⊗ℓp^m` with `n, m ≤ max_dim`.
pub fn tensor(max_dim: usize) -> impl Strategy<Value = Tensor<f64>> {
    (1..=max_dim, 1..=max_dim, exponent()).prop_flat_map(|(n, m, p)| {
        matrix(n, m).prop_map(move |f| Tensor::new(f, space(n, p), space(m, p)).unwrap())
    })
}

/// A tensor on `ℓ2^n⊗ℓ2^m`.
pub fn l2_tensor(max_dim: usize) -> impl Strategy<Value = Tensor<f64>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(n, m)| {
        matrix(n, m).prop_map(move |f| Tensor::new(f, l2(n), l2(m)).unwrap())
    })
}

/// An operator tensor with `1..=max_terms` terms over ℓ2 factors.
pub fn l2_operator(max_dim: usize, max_terms: usize) -> impl Strategy<Value = OperatorTensor<f64>> {
    (
        1..=max_dim,
        1..=max_dim,
        1..=max_dim,
        1..=max_dim,
        1..=max_terms,
    )
        .prop_flat_map(|(nx, ny, nv, nw, k)| {
            let sp = OperatorSpaces::new(l2(nx), l2(ny), l2(nv), l2(nw));
            prop::collection::vec((matrix(nv, nx), matrix(nw, ny)), k)
                .prop_map(move |terms| OperatorTensor::new(terms, sp).unwrap())
        })
}

pub fn quick_budget(seed: u64) -> Budget {
    Budget::default()
        .with_seed(seed)
        .with_restarts(4)
        .with_max_iters(60)
}

pub fn scale(m: &Array2<f64>) -> f64 {
    m.iter().fold(1.0f64, |a, &b| a.max(b.abs()))
}
