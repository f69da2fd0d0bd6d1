use arknit_core::linalg::{Field, Mat, PrimeField};
use proptest::prelude::*;

fn f() -> PrimeField {
    PrimeField::new(7).unwrap()
}

fn mat(rows: usize, cols: usize) -> impl Strategy<Value = Mat<PrimeField>> {
    prop::collection::vec(0u64..7, rows * cols)
        .prop_map(move |data| Mat::from_vec(&f(), rows, cols, data).unwrap())
}

fn any_mat() -> impl Strategy<Value = Mat<PrimeField>> {
    (0usize..5, 0usize..5).prop_flat_map(|(r, c)| mat(r, c))
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in any_mat()) {
        let (r, p) = m.rref();
        prop_assert_eq!(r.rref(), (r.clone(), p));
    }

    #[test]
    fn rank_plus_nullity(m in any_mat()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_is_exact((a, x) in (1usize..5, 1usize..5, 1usize..3)
        .prop_flat_map(|(r, c, k)| (mat(r, c), mat(c, k))))
    {
        let b = a.mul(&x);
        let y = a.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul(&y), b);
    }

    #[test]
    fn inconsistent_systems_are_reported(a in mat(3, 2), b in mat(3, 1)) {
        match a.solve(&b).unwrap() {
            Some(x) => prop_assert_eq!(a.mul(&x), b),
            None => prop_assert!(a.rank() < Mat::hstack(&f(), 3, &[&a, &b]).rank()),
        }
    }

    #[test]
    fn kron_mixed_product(
        (a, c) in (1usize..3, 1usize..3, 1usize..3).prop_flat_map(|(r, m, k)| (mat(r, m), mat(m, k))),
        (b, d) in (1usize..3, 1usize..3, 1usize..3).prop_flat_map(|(r, m, k)| (mat(r, m), mat(m, k))),
    ) {
        prop_assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
    }

    #[test]
    fn entries_are_canonical(a in mat(3, 3), b in mat(3, 3)) {
        let p = a.mul(&b).sub(&a).add(&b.neg());
        prop_assert!(p.entries().iter().all(|&e| e < 7));
        prop_assert_eq!(f().characteristic(), 7);
    }
}
