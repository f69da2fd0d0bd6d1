use std::sync::Arc;

use arknit_core::fincat::{category_of, rep_category, tensor_product, FinCategory};
use arknit_core::linalg::PrimeField;
use arknit_core::modcat::{
    decompose_module, hom_space, projective_sum, yoneda_projective, CModule, ModuleCategory,
};
use arknit_core::quiver::{BoundQuiver, MonomialIdeal, Quiver};
use arknit_core::repcat::{phi, psi, random_rep, RepSetting};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f() -> PrimeField {
    PrimeField::default()
}

/// Acyclic quivers on up to 4 vertices, arrows only from lower to higher
/// index, cut down by a power of the arrow ideal.
fn bound_quiver() -> impl Strategy<Value = BoundQuiver> {
    (2usize..=4)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            (
                Just(n),
                prop::sample::subsequence(pairs.clone(), 1..=pairs.len().min(4)),
                2usize..=3,
            )
        })
        .prop_map(|(n, arrows, k)| {
            let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let arrows: Vec<(String, String, String)> = arrows
                .iter()
                .enumerate()
                .map(|(a, &(i, j))| (format!("x{a}"), format!("v{i}"), format!("v{j}")))
                .collect();
            let q = Quiver::new(&vs, &arrows).unwrap();
            let ideal = MonomialIdeal::all_paths_of_length(&q, k).unwrap();
            BoundQuiver::new(q, ideal).unwrap()
        })
}

fn total_paths(bq: &BoundQuiver) -> usize {
    let n = bq.quiver().num_vertices();
    (0..n)
        .flat_map(|v| (0..n).map(move |w| (v, w)))
        .map(|(v, w)| bq.paths(v, w).len())
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn opposite_is_an_involution(bq in bound_quiver()) {
        let op = bq.opposite();
        prop_assert_eq!(op.opposite(), bq.clone());
        prop_assert_eq!(total_paths(&op), total_paths(&bq));
        let c = category_of(&f(), &bq);
        let d = category_of(&f(), &op);
        let n = c.num_objects();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(c.hom_dim(x, y), d.hom_dim(y, x));
            }
        }
        prop_assert_eq!(c.opposite().opposite(), c);
    }

    #[test]
    fn tensor_hom_dims_multiply(a in bound_quiver(), b in bound_quiver()) {
        let (l, r) = (rep_category(&f(), &a), rep_category(&f(), &b));
        let t = tensor_product(l.clone(), r.clone()).unwrap();
        for x in 0..l.num_objects() {
            for y in 0..l.num_objects() {
                for u in 0..r.num_objects() {
                    for v in 0..r.num_objects() {
                        prop_assert_eq!(
                            t.cat.hom_dim(t.object(x, u), t.object(y, v)),
                            l.hom_dim(x, y) * r.hom_dim(u, v)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn yoneda_and_duality(bq in bound_quiver(), seed in any::<u64>()) {
        let setting = RepSetting::new(bq, Arc::new(FinCategory::point(&f()))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Arc::new(phi(&random_rep(&setting, 3, &mut rng)));
        let c = setting.tensor.cat.clone();
        let mc = ModuleCategory::new(c.clone());
        for x in 0..c.num_objects() {
            let p = Arc::new(yoneda_projective(&c, x));
            prop_assert_eq!(hom_space(&p, &m).unwrap().dim(), m.dim(x));
        }
        let dd = mc.double_dual_iso(&m).unwrap();
        prop_assert!(dd.is_iso());
        let d = mc.dual(&m).unwrap();
        prop_assert_eq!(d.dims(), m.dims());
    }

    #[test]
    fn round_trip_with_coefficients(a in bound_quiver(), b in bound_quiver(), seed in any::<u64>()) {
        let setting = RepSetting::new(a, rep_category(&f(), &b)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_rep(&setting, 2, &mut rng);
        let m = phi(&r);
        let back = psi(&setting, &m).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(phi(&back), m);
    }

    #[test]
    fn projective_sums_decompose(bq in bound_quiver(), picks in prop::collection::vec(0usize..4, 1..4)) {
        let c = Arc::new(category_of(&f(), &bq));
        let objs: Vec<usize> = picks.iter().map(|&x| x % c.num_objects()).collect();
        let sum = Arc::new(projective_sum(&c, &objs));
        let parts = decompose_module(&sum, 0).unwrap();
        let mut got: Vec<Vec<usize>> = parts.iter().map(|p| p.module.dims().to_vec()).collect();
        let mut want: Vec<Vec<usize>> = objs.iter().map(|&x| yoneda_projective(&c, x).dims().to_vec()).collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
        let total: usize = parts.iter().map(|p| p.module.total_dim()).sum();
        prop_assert_eq!(total, CModule::total_dim(&sum));
    }
}
