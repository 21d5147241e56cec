mod common;

use common::{l2, l2_operator, l2_tensor, matrix, quick_budget, scale, tensor};
use crossnorm::oracle::{kron_matrix, svd_nuclear, vec_col_major};
use crossnorm::{
    apply, assemble, injective_norm, pair, projective_norm, Decomposition,
    OperatorFunctionalTensor, OperatorTensor, Tensor,
};
use ndarray::Array1;
use proptest::prelude::*;

fn close(a: &ndarray::Array2<f64>, b: &ndarray::Array2<f64>, tol: f64) -> bool {
    a.dim() == b.dim() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_and_column_decompositions_assemble_back(t in tensor(5)) {
        let (x, y) = (*t.x_space(), *t.y_space());
        prop_assert!(close(assemble(&t.row_decomposition(), x, y).unwrap().entries(), t.entries(), 1e-12));
        prop_assert!(close(assemble(&t.column_decomposition(), x, y).unwrap().entries(), t.entries(), 1e-12));
    }

    /// Norms depend on the tensor, not on the representation it was built from.
    #[test]
    fn norms_ignore_the_representation(t in l2_tensor(3), extra in (1usize..=3).prop_flat_map(common::vector)) {
        let (x, y) = (*t.x_space(), *t.y_space());
        let mut d = t.row_decomposition();
        let u = Array1::from_shape_fn(x.dim(), |i| extra[i % extra.len()]);
        let v = Array1::from_shape_fn(y.dim(), |j| extra[(j + 1) % extra.len()]);
        d.push(u.clone(), v.clone());
        d.push(-u, v);
        let t2 = assemble(&d, x, y).unwrap();
        let b = quick_budget(1);
        let (i1, i2) = (injective_norm(&t, &b).value, injective_norm(&t2, &b).value);
        let (p1, p2) = (projective_norm(&t, &b).value, projective_norm(&t2, &b).value);
        prop_assert!((i1 - i2).abs() <= 1e-9 * (1.0 + i1));
        prop_assert!((p1 - p2).abs() <= 1e-9 * (1.0 + p1));
    }

    #[test]
    fn caratheodory_keeps_the_tensor_and_does_not_raise_cost(t in tensor(3), extra in matrix(6, 6)) {
        let (x, y) = (*t.x_space(), *t.y_space());
        let (n, m) = (x.dim(), y.dim());
        let mut d = t.row_decomposition();
        for k in 0..6 {
            let u = Array1::from_shape_fn(n, |i| extra[[k, i]]);
            let v = Array1::from_shape_fn(m, |j| extra[[j, k]]);
            d.push(u.clone(), v.clone());
            d.push(-u, v);
        }
        let before = d.cost(&x, &y);
        let tensor_before = assemble(&d, x, y).unwrap();
        let r = d.caratheodory_reduce(&x, &y);
        prop_assert!(r.len() <= n * m + 1);
        prop_assert!(r.cost(&x, &y) <= before * (1.0 + 1e-12) + 1e-12);
        prop_assert!(close(assemble(&r, x, y).unwrap().entries(), tensor_before.entries(), 1e-9 * (1.0 + before)));
    }

    #[test]
    fn apply_is_linear(l in l2_operator(3, 3), a in -2.0..2.0f64, b in -2.0..2.0f64, seed in any::<u64>()) {
        let sp = *l.spaces();
        let mut rng = crossnorm::rng::seeded(seed);
        let f = crossnorm::rng::gaussian_matrix::<f64, _>(&mut rng, sp.x.dim(), sp.y.dim());
        let g = crossnorm::rng::gaussian_matrix::<f64, _>(&mut rng, sp.x.dim(), sp.y.dim());
        let tf = Tensor::new(f.clone(), sp.x, sp.y).unwrap();
        let tg = Tensor::new(g.clone(), sp.x, sp.y).unwrap();
        let combo = tf.combine(a, &tg, b).unwrap();
        let lhs = apply(&l, &combo).unwrap();
        let rhs = apply(&l, &tf).unwrap().entries() * a + apply(&l, &tg).unwrap().entries() * b;
        prop_assert!(close(lhs.entries(), &rhs, 1e-10 * (1.0 + scale(&rhs))));
    }

    /// `K vec(F) = vec(L(F))` for the column-major Kronecker matrix.
    #[test]
    fn kronecker_matrix_represents_apply(l in l2_operator(3, 3), seed in any::<u64>()) {
        let sp = *l.spaces();
        let mut rng = crossnorm::rng::seeded(seed);
        let f = crossnorm::rng::gaussian_matrix::<f64, _>(&mut rng, sp.x.dim(), sp.y.dim());
        let lf = apply(&l, &Tensor::new(f.clone(), sp.x, sp.y).unwrap()).unwrap();
        let via_k = kron_matrix(&l).dot(&vec_col_major(&f));
        let direct = vec_col_major(lf.entries());
        prop_assert!(via_k.iter().zip(direct.iter()).all(|(a, b)| (a - b).abs() < 1e-10 * (1.0 + b.abs())));
    }

    /// Splitting a term changes the representation, not the pairing.
    #[test]
    fn pairing_is_representation_invariant(l in l2_operator(3, 2), seed in any::<u64>()) {
        let sp = *l.spaces();
        let mut rng = crossnorm::rng::seeded(seed);
        let (sa, sb) = (sp.a_shape(), sp.b_shape());
        let phi = crossnorm::rng::gaussian_matrix::<f64, _>(&mut rng, sa.0, sa.1);
        let eta = crossnorm::rng::gaussian_matrix::<f64, _>(&mut rng, sb.0, sb.1);
        let k = OperatorFunctionalTensor::single(phi, eta);
        let mut split = Vec::new();
        for (a, b) in l.terms() {
            split.push((a * 0.25, b.clone()));
            split.push((a * 0.75, b.clone()));
        }
        let l2 = OperatorTensor::new(split, sp).unwrap();
        let (p1, p2) = (pair(&k, &l).unwrap(), pair(&k, &l2).unwrap());
        prop_assert!((p1 - p2).abs() <= 1e-10 * (1.0 + p1.abs()));
    }
}

#[test]
fn nuclear_norm_is_a_representation_infimum() {
    // a redundant representation never costs less than the nuclear norm
    let t = Tensor::new(ndarray::array![[1.0, 2.0], [3.0, -1.0]], l2(2), l2(2)).unwrap();
    let d = t.row_decomposition();
    assert!(d.cost(&l2(2), &l2(2)) >= svd_nuclear(t.entries().view()) - 1e-12);
    let empty = Decomposition::<f64>::default();
    assert_eq!(assemble(&empty, l2(2), l2(3)).unwrap().entries().sum(), 0.0);
}
