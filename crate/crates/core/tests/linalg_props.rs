mod common;

use contextual_heat::linalg::{
    eig_hermitian, expm_hermitian_generator, kron, partial_trace, ComplexMatrix, HermitianOp, C64,
};
use proptest::prelude::*;

fn matrix(n: usize, m: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * m)
        .prop_map(move |v| ComplexMatrix::from_vec(n, m, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = HermitianOp> {
    matrix(n, n).prop_map(|m| HermitianOp::new(m.hermitian_part()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2, 3), b in matrix(3, 2), c in matrix(2, 2)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2, 2), b in matrix(3, 3), c in matrix(2, 2), d in matrix(3, 3)) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn partial_trace_preserves_trace(m in matrix(6, 6)) {
        let total = m.trace();
        for keep in 0..2 {
            let r = partial_trace(&m, &[2, 3], keep).unwrap();
            prop_assert!((r.trace() - total).norm() < 1e-13);
        }
    }

    #[test]
    fn partial_trace_of_product(a in matrix(3, 3), b in matrix(2, 2)) {
        let ab = kron(&a, &b);
        let ra = partial_trace(&ab, &[3, 2], 0).unwrap();
        let rb = partial_trace(&ab, &[3, 2], 1).unwrap();
        prop_assert!(ra.max_abs_diff(&a.scale(b.trace())) < 1e-13);
        prop_assert!(rb.max_abs_diff(&b.scale(a.trace())) < 1e-13);
    }

    #[test]
    fn eigen_reconstructs(h in hermitian(6)) {
        let e = eig_hermitian(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(h.matrix()) < 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let vv = &e.vectors.adjoint() * &e.vectors;
        prop_assert!(vv.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-12);
    }

    #[test]
    fn exponential_is_unitary(h in hermitian(5), t in -10.0f64..10.0) {
        let u = expm_hermitian_generator(&h, C64::new(0.0, -t)).unwrap();
        let uu = &u.adjoint() * &u;
        prop_assert!(uu.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn exponential_group_law(h in hermitian(4), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let us = expm_hermitian_generator(&h, C64::new(0.0, -s)).unwrap();
        let ut = expm_hermitian_generator(&h, C64::new(0.0, -t)).unwrap();
        let ust = expm_hermitian_generator(&h, C64::new(0.0, -(s + t))).unwrap();
        prop_assert!((&us * &ut).max_abs_diff(&ust) < 1e-12);
    }
}

#[test]
fn eigen_reconstructs_256() {
    let mut rng = common::rng(256);
    let h = common::random_hermitian(&mut rng, 256);
    let e = eig_hermitian(&h).unwrap();
    let scale = h.matrix().max_norm();
    assert!(e.reconstruct().max_abs_diff(h.matrix()) < 1e-10 * scale);
    let trace: f64 = e.values.iter().sum();
    assert!((trace - h.matrix().trace().re).abs() < 1e-9);
}

#[test]
fn rejects_non_hermitian_and_bad_shapes() {
    let mut m = ComplexMatrix::identity(2);
    m[(0, 1)] = C64::new(1.0, 0.0);
    assert!(HermitianOp::new(m).is_err());
    assert!(partial_trace(&ComplexMatrix::identity(6), &[2, 2], 0).is_err());
    assert!(ComplexMatrix::identity(2).matmul(&ComplexMatrix::identity(3)).is_err());
}
