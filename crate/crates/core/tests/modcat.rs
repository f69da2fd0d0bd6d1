use std::sync::Arc;

use arknit_core::error::Error;
use arknit_core::fincat::{rep_category, FinCategory};
use arknit_core::linalg::{Mat, PrimeField};
use arknit_core::modcat::*;
use arknit_core::quiver::{BoundQuiver, MonomialIdeal, Quiver};

type C = Arc<FinCategory<PrimeField>>;
type M = Arc<CModule<PrimeField>>;

fn f() -> PrimeField {
    PrimeField::default()
}

fn a_n_rad(m: usize, n: Option<usize>) -> C {
    let q = Quiver::linear(m);
    let bq = match n {
        Some(n) => BoundQuiver::new(
            q.clone(),
            MonomialIdeal::all_paths_of_length(&q, n).unwrap(),
        ),
        None => BoundQuiver::free(q),
    };
    rep_category(&f(), &bq.unwrap())
}

fn cyclic_rad2(n: usize) -> C {
    let q = Quiver::cyclic(n);
    let i = MonomialIdeal::all_paths_of_length(&q, 2).unwrap();
    rep_category(&f(), &BoundQuiver::new(q, i).unwrap())
}

fn s(c: &C, x: usize) -> M {
    Arc::new(simple(c, x).unwrap())
}

fn p(c: &C, x: usize) -> M {
    Arc::new(yoneda_projective(c, x))
}

#[test]
fn hom_examples() {
    let c = a_n_rad(2, None);
    assert_eq!(hom_space(&p(&c, 0), &s(&c, 0)).unwrap().dim(), 1);
    assert_eq!(hom_space(&s(&c, 0), &p(&c, 0)).unwrap().dim(), 0);
    let zero = Arc::new(CModule::zero(c.clone()));
    assert_eq!(hom_space(&p(&c, 0), &zero).unwrap().dim(), 0);
    let end = hom_space(&p(&c, 0), &p(&c, 0)).unwrap();
    assert!(end.coords(&ModuleMap::identity(p(&c, 0))).is_some());
}

#[test]
fn representable_dims() {
    let c = a_n_rad(2, None);
    assert_eq!(p(&c, 0).dims(), &[1, 1]);
    assert_eq!(p(&c, 1).dims(), &[0, 1]);
    assert_eq!(p(&cyclic_rad2(2), 0).dims(), &[1, 1]);
}

#[test]
fn yoneda_dimension() {
    let c = cyclic_rad2(3);
    let ms = [p(&c, 1), s(&c, 2), Arc::new(CModule::zero(c.clone()))];
    for m in &ms {
        for x in 0..3 {
            assert_eq!(hom_space(&p(&c, x), m).unwrap().dim(), m.dim(x));
        }
    }
}

#[test]
fn covers_and_presentations() {
    let c = a_n_rad(2, None);
    let cover = projective_cover(&s(&c, 0)).unwrap();
    assert_eq!(cover.objs, vec![0]);
    let (k, _) = cover.map.kernel();
    assert!(find_isomorphism(&k, &s(&c, 1)).unwrap().is_some());
    let pres = minimal_presentation(&s(&c, 0)).unwrap();
    assert_eq!(pres.p1.objs, vec![1]);
    let proj = minimal_presentation(&p(&c, 0)).unwrap();
    assert!(proj.syzygy.is_zero());
    assert!(proj.p1.objs.is_empty());
    let ss = CModule::direct_sum(&c, &[&*s(&c, 0), &*s(&c, 0)]).sum;
    assert_eq!(projective_cover(&ss).unwrap().objs, vec![0, 0]);
}

#[test]
fn duality() {
    let c = a_n_rad(2, None);
    let mc = ModuleCategory::new(c.clone());
    let d = mc.dual(&p(&c, 0)).unwrap();
    assert_eq!(d.dims(), &[1, 1]);
    d.verify().unwrap();
    let ds = mc.dual(&s(&c, 1)).unwrap();
    let s_op = Arc::new(simple(&mc.op, 1).unwrap());
    assert!(find_isomorphism(&ds, &s_op).unwrap().is_some());
    for m in [p(&c, 0), p(&c, 1), s(&c, 0), s(&c, 1)] {
        let iso = mc.double_dual_iso(&m).unwrap();
        assert!(iso.is_iso());
        assert_eq!(iso.tgt.dims(), m.dims());
    }
}

#[test]
fn transpose_examples() {
    let c = a_n_rad(2, None);
    let mc = ModuleCategory::new(c.clone());
    let tr = mc.transpose(&s(&c, 0)).unwrap();
    let s2_op = Arc::new(simple(&mc.op, 1).unwrap());
    assert!(find_isomorphism(&tr, &s2_op).unwrap().is_some());
    assert!(matches!(mc.transpose(&p(&c, 0)), Err(Error::Projective)));
    let mixed = CModule::direct_sum(&c, &[&*s(&c, 0), &*p(&c, 0)]).sum;
    assert!(matches!(
        mc.transpose(&mixed),
        Err(Error::ProjectiveSummand { .. })
    ));
    // additivity on a sum of non-projectives
    let c3 = cyclic_rad2(3);
    let mc3 = ModuleCategory::new(c3.clone());
    let sum = CModule::direct_sum(&c3, &[&*s(&c3, 0), &*s(&c3, 1)]).sum;
    let t = mc3.transpose(&sum).unwrap();
    let t0 = mc3.transpose(&s(&c3, 0)).unwrap();
    let t1 = mc3.transpose(&s(&c3, 1)).unwrap();
    let dims: Vec<usize> = (0..3).map(|x| t0.dim(x) + t1.dim(x)).collect();
    assert_eq!(t.dims(), &dims[..]);
}

#[test]
fn tau_examples() {
    let c = a_n_rad(2, None);
    let mc = ModuleCategory::new(c.clone());
    assert!(is_isomorphic(&mc.tau(&s(&c, 0)).unwrap(), &s(&c, 1)).unwrap());
    let z = cyclic_rad2(2);
    let mz = ModuleCategory::new(z.clone());
    assert!(is_isomorphic(&mz.tau(&s(&z, 0)).unwrap(), &s(&z, 1)).unwrap());
    let a3 = a_n_rad(3, Some(2));
    let m3 = ModuleCategory::new(a3.clone());
    assert!(is_isomorphic(&m3.tau(&s(&a3, 0)).unwrap(), &s(&a3, 1)).unwrap());
    assert!(m3.tau(&p(&a3, 0)).is_err());
}

#[test]
fn ext_examples() {
    let c = a_n_rad(2, None);
    let mc = ModuleCategory::new(c.clone());
    assert_eq!(mc.ext1(&s(&c, 0), &s(&c, 1)).unwrap().dim(), 1);
    assert_eq!(mc.ext1(&s(&c, 0), &s(&c, 0)).unwrap().dim(), 0);
    assert_eq!(mc.ext1(&p(&c, 0), &s(&c, 1)).unwrap().dim(), 0);
}

#[test]
fn ass_a2() {
    let c = a_n_rad(2, None);
    let mc = ModuleCategory::new(c.clone());
    let seq = mc.almost_split_sequence(&s(&c, 0), 0).unwrap();
    assert!(is_isomorphic(&seq.x, &s(&c, 1)).unwrap());
    assert!(is_isomorphic(&seq.y, &p(&c, 0)).unwrap());
    let fam = vec![s(&c, 0), s(&c, 1), p(&c, 0)];
    let rep = mc.verify_almost_split(&seq, &fam, true).unwrap();
    assert!(rep.is_certificate(), "{rep}");
    let partial = mc.verify_almost_split(&seq, &fam[1..], false).unwrap();
    assert!(!partial.covers_z);
    assert!(!partial.passed());
}

#[test]
fn split_sequence_rejected() {
    let c = a_n_rad(2, None);
    let mc = ModuleCategory::new(c.clone());
    let (s1, s2) = (s(&c, 0), s(&c, 1));
    let sum = CModule::direct_sum(&c, &[&*s2, &*s1]);
    let seq = AlmostSplitSequence {
        x: s2,
        y: sum.sum.clone(),
        z: s1.clone(),
        f: sum.inj[0].clone(),
        g: sum.proj[1].clone(),
    };
    let fam = vec![s(&c, 0), s(&c, 1), p(&c, 0)];
    let rep = mc.verify_almost_split(&seq, &fam, true).unwrap();
    assert!(rep.exact);
    assert!(!rep.non_split);
    assert!(!rep.passed());
}

#[test]
fn ass_cyclic() {
    let c = cyclic_rad2(2);
    let mc = ModuleCategory::new(c.clone());
    let seq = mc.almost_split_sequence(&s(&c, 0), 0).unwrap();
    assert!(is_isomorphic(&seq.x, &s(&c, 1)).unwrap());
    assert!(is_isomorphic(&seq.y, &p(&c, 0)).unwrap());
    let fam = vec![s(&c, 0), s(&c, 1), p(&c, 0), p(&c, 1)];
    assert!(mc
        .verify_almost_split(&seq, &fam, true)
        .unwrap()
        .is_certificate());
    assert!(matches!(
        mc.almost_split_sequence(&p(&c, 0), 0),
        Err(Error::Projective)
    ));
}

#[test]
fn decomposition() {
    let c = a_n_rad(2, None);
    let m = CModule::direct_sum(&c, &[&*p(&c, 0), &*s(&c, 1)]).sum;
    let parts = decompose_module(&m, 0).unwrap();
    assert_eq!(parts.len(), 2);
    let mut dims: Vec<Vec<usize>> = parts.iter().map(|s| s.module.dims().to_vec()).collect();
    dims.sort();
    assert_eq!(dims, vec![vec![0, 1], vec![1, 1]]);
    let ss = CModule::direct_sum(&c, &[&*s(&c, 0), &*s(&c, 0)]).sum;
    assert_eq!(decompose_module(&ss, 0).unwrap().len(), 2);
    assert_eq!(decompose_module(&p(&c, 0), 0).unwrap().len(), 1);
}

#[test]
fn knitting() {
    let opts = KnitOptions::default();
    let ar = ar_quiver(&ModuleCategory::new(a_n_rad(2, None)), opts).unwrap();
    assert!(ar.closed);
    assert_eq!(ar.vertices.len(), 3);
    let ar = ar_quiver(&ModuleCategory::new(a_n_rad(3, Some(2))), opts).unwrap();
    assert!(ar.closed);
    assert_eq!(ar.vertices.len(), 5);
    let ar = ar_quiver(&ModuleCategory::new(cyclic_rad2(2)), opts).unwrap();
    assert!(ar.closed);
    assert_eq!(ar.vertices.len(), 4);
    let point = Arc::new(FinCategory::point(&f()));
    let ar = ar_quiver(&ModuleCategory::new(point), opts).unwrap();
    assert_eq!(ar.vertices.len(), 1);
    assert!(ar.to_dot().starts_with("digraph"));
}

#[test]
fn interval_counts() {
    for m in 1..=4 {
        for n in 2..=3 {
            let c = a_n_rad(m, Some(n));
            let ar = ar_quiver(&ModuleCategory::new(c), KnitOptions::default()).unwrap();
            let want: usize = (1..=m).map(|i| n.min(m - i + 1)).sum();
            assert!(ar.closed);
            assert_eq!(ar.vertices.len(), want, "A_{m}/rad^{n}");
        }
    }
}

#[test]
fn every_sequence_certified() {
    for c in [a_n_rad(3, None), cyclic_rad2(3), a_n_rad(4, Some(3))] {
        let mc = ModuleCategory::new(c);
        let ar = ar_quiver(&mc, KnitOptions::default()).unwrap();
        assert!(ar.closed);
        let fam = ar.modules();
        for seq in ar.sequences.values() {
            let rep = mc.verify_almost_split(seq, &fam, true).unwrap();
            assert!(rep.is_certificate(), "{rep}");
        }
    }
}

#[test]
fn global_dimensions() {
    let cap = 5;
    assert_eq!(
        global_dimension(&Arc::new(FinCategory::point(&f())), cap).unwrap(),
        Dimension::Exactly(0)
    );
    assert_eq!(
        global_dimension(&a_n_rad(2, None), cap).unwrap(),
        Dimension::Exactly(1)
    );
    let l = Quiver::new(&["x"], &[("a", "x", "x")]).unwrap();
    let i = MonomialIdeal::all_paths_of_length(&l, 2).unwrap();
    let c = rep_category(&f(), &BoundQuiver::new(l, i).unwrap());
    assert_eq!(
        global_dimension(&c, cap).unwrap(),
        Dimension::AtLeast(cap + 1)
    );
}

#[test]
fn functoriality_enforced() {
    let c = a_n_rad(2, None);
    let bad: Vec<Mat<PrimeField>> = c
        .basis()
        .iter()
        .map(|m| {
            if m.src == m.tgt {
                Mat::zeros(&f(), 1, 1)
            } else {
                Mat::identity(&f(), 1)
            }
        })
        .collect();
    assert!(CModule::new(c, vec![1, 1], bad).is_err());
}
