use linsup_core::densela::{dot, norm, DenseMatrix};
use linsup_core::feasibility::HalfspaceSystem;
use proptest::prelude::*;

fn halfspace_case() -> impl Strategy<Value = (Vec<f64>, f64, Vec<f64>, f64)> {
    (1usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0..10.0f64, n).prop_filter("nonzero row", |a| norm(a) > 1e-3),
            -10.0..10.0f64,
            prop::collection::vec(-100.0..100.0f64, n),
            1e-4..1.0f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn margin_postcondition_and_idempotence((a, b, x, r) in halfspace_case()) {
        let n = a.len();
        let mat = DenseMatrix::from_vec(1, n, a.clone()).unwrap();
        let rhs = [b];
        let sys = HalfspaceSystem::new(&mat, &rhs, r).unwrap();
        let mut y = x.clone();
        let moved = sys.project_in_place(&mut y, 0);
        prop_assert_eq!(moved, dot(&a, &x) > b);
        if moved {
            let target = b - r * norm(&a);
            prop_assert!((dot(&a, &y) - target).abs() <= 1e-10, "residual {}", dot(&a, &y) - target);
        } else {
            prop_assert_eq!(&y, &x);
        }
        let mut z = y.clone();
        prop_assert!(!sys.project_in_place(&mut z, 0));
        prop_assert_eq!(z, y);
    }
}

fn anchored_system() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, f64)> {
    (1usize..6, 1usize..6).prop_flat_map(|(m, n)| {
        (
            Just(n),
            prop::collection::vec(-5.0..5.0f64, m * n),
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(0.0..3.0f64, m),
            prop::collection::vec(-50.0..50.0f64, n),
            1e-4..0.5f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    /// A sweep never moves a point farther from any anchor that satisfies
    /// every row with margin `r ||a_i||`.
    #[test]
    fn sweep_is_fejer_toward_shifted_feasible_anchor((n, a, anchor, slack, x, r) in anchored_system()) {
        let m = a.len() / n;
        prop_assume!((0..m).all(|i| norm(&a[i * n..(i + 1) * n]) > 1e-3));
        let mat = DenseMatrix::from_vec(m, n, a).unwrap();
        let b: Vec<f64> = (0..m)
            .map(|i| dot(mat.row(i), &anchor) + r * norm(mat.row(i)) + slack[i])
            .collect();
        let sys = HalfspaceSystem::new(&mat, &b, r).unwrap();
        let dist = |p: &[f64]| norm(&p.iter().zip(&anchor).map(|(u, v)| u - v).collect::<Vec<_>>());
        let mut y = x.clone();
        sys.sweep_in_place(&mut y);
        prop_assert!(dist(&y) <= dist(&x) + 1e-10, "{} > {}", dist(&y), dist(&x));
    }

    #[test]
    fn sweep_of_feasible_point_is_identity((n, a, anchor, slack, _x, r) in anchored_system()) {
        let m = a.len() / n;
        prop_assume!((0..m).all(|i| norm(&a[i * n..(i + 1) * n]) > 1e-3));
        let mat = DenseMatrix::from_vec(m, n, a).unwrap();
        let b: Vec<f64> = (0..m).map(|i| dot(mat.row(i), &anchor) + slack[i]).collect();
        let sys = HalfspaceSystem::new(&mat, &b, r).unwrap();
        let mut y = anchor.clone();
        prop_assert_eq!(sys.sweep_in_place(&mut y), 0);
        prop_assert_eq!(y, anchor);
    }
}
