use std::sync::Arc;

use arknit_core::complexes::*;
use arknit_core::fincat::{category_of, FinCategory};
use arknit_core::linalg::{Field, Mat, PrimeField};
use arknit_core::modcat::{
    ar_quiver, hom_space, simple, yoneda_projective, CModule, KnitOptions, ModuleCategory,
    ModuleMap,
};
use arknit_core::quiver::{BoundQuiver, Quiver};
use arknit_core::repcat::{psi, random_rep};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f() -> PrimeField {
    PrimeField::default()
}

fn point() -> Arc<FinCategory<PrimeField>> {
    Arc::new(FinCategory::point(&f()))
}

fn ka2() -> Arc<FinCategory<PrimeField>> {
    let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
    Arc::new(category_of(&f(), &BoundQuiver::free(q).unwrap()))
}

fn k(c: &Arc<FinCategory<PrimeField>>) -> Arc<CModule<PrimeField>> {
    Arc::new(yoneda_projective(c, 0))
}

#[test]
fn categories() {
    let a2 = build_category(&NComplexSpec::interval(2, 2).unwrap()).unwrap();
    assert!(a2.ideal().generators().is_empty());
    let a3 = build_category(&NComplexSpec::interval(2, 3).unwrap()).unwrap();
    assert_eq!(a3.ideal().generators().len(), 1);
    let z2 = build_category(&NComplexSpec::cyclic(2).unwrap()).unwrap();
    assert_eq!(z2.ideal().generators().len(), 2);
    assert!(NComplexSpec::interval(1, 3).is_err());
    assert!(NComplexSpec::window(2, 3, 1).is_err());
    assert!(NComplexSpec::cyclic(1).is_ok());
}

#[test]
fn interval_complexes() {
    let cc = ComplexCategory::new(NComplexSpec::window(3, -1, 4).unwrap(), point()).unwrap();
    let j = cc.interval_j(0, &k(cc.coeff())).unwrap();
    assert_eq!(j.total_dims(), vec![0, 1, 1, 1, 0, 0]);
    assert!(j.differential(1).comps[0].is_identity());
    assert!(j.differential(3).is_zero());
    let top = cc.interval_j(3, &k(cc.coeff())).unwrap();
    assert_eq!(top.total_dims(), vec![0, 0, 0, 0, 1, 1]);

    let c1 = ComplexCategory::new(NComplexSpec::cyclic(1).unwrap(), point()).unwrap();
    let j = c1.interval_j(0, &k(c1.coeff())).unwrap();
    assert_eq!(j.total_dims(), vec![2]);
    assert_eq!(
        j.differential(0).comps[0],
        Mat::from_i64(&f(), &[&[0, 0], &[1, 0]])
    );

    let c2 = ComplexCategory::new(NComplexSpec::cyclic(2).unwrap(), point()).unwrap();
    let j = c2.interval_j(0, &k(c2.coeff())).unwrap();
    assert_eq!(j.total_dims(), vec![1, 1]);
    assert!(j.differential(0).comps[0].is_identity());
    assert!(j.differential(1).is_zero());
}

#[test]
fn module_round_trip() {
    let cc = ComplexCategory::new(NComplexSpec::interval(2, 3).unwrap(), ka2()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let r = random_rep(&cc.setting, 3, &mut rng);
        let x = NComplex {
            spec: cc.spec,
            rep: r,
        };
        assert_eq!(cc.from_module(&x.to_module()).unwrap(), x);
    }
    assert!(cc.zero().to_module().is_zero());
}

#[test]
fn coil_epis() {
    let cc = ComplexCategory::new(NComplexSpec::interval(2, 3).unwrap(), point()).unwrap();
    let kk = k(cc.coeff());
    let s = cc.stalk(2, &kk).unwrap();
    let p = cc.coil_epi(&s).unwrap();
    assert!(p.map.is_vertexwise_surjective());
    assert_eq!(p.degrees, vec![2]);
    let j = cc.interval_j(1, &kk).unwrap();
    let p = cc.coil_epi(&j).unwrap();
    assert!(p.map.is_vertexwise_surjective());
    assert!(cc.coil_epi(&cc.zero()).unwrap().degrees.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in [
        NComplexSpec::interval(3, 4).unwrap(),
        NComplexSpec::cyclic(1).unwrap(),
        NComplexSpec::cyclic(3).unwrap(),
    ] {
        let cc = ComplexCategory::new(spec, ka2()).unwrap();
        for _ in 0..5 {
            let z = NComplex {
                spec,
                rep: random_rep(&cc.setting, 3, &mut rng),
            };
            assert!(cc.coil_epi(&z).unwrap().map.is_vertexwise_surjective());
        }
    }
}

fn random_homotopy(
    cc: &ComplexCategory<PrimeField>,
    zp: &NComplex<PrimeField>,
    z: &NComplex<PrimeField>,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, ModuleMap<PrimeField>)> {
    let r = cc.spec.relation_length() as i64;
    let mut s = Vec::new();
    for j in 0..cc.spec.len() {
        let Some(t) = cc.spec.shift(j, -(r - 1)) else {
            continue;
        };
        let hs = hom_space(zp.component(j), z.component(t)).unwrap();
        let coords: Vec<_> = (0..hs.dim()).map(|_| f().random_elem(rng)).collect();
        s.push((j, hs.element(&coords)));
    }
    s
}

#[test]
fn null_homotopies_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [
        NComplexSpec::interval(2, 3).unwrap(),
        NComplexSpec::cyclic(2).unwrap(),
        NComplexSpec::cyclic(1).unwrap(),
    ] {
        let cc = ComplexCategory::new(spec, ka2()).unwrap();
        for _ in 0..6 {
            let zp = NComplex {
                spec,
                rep: random_rep(&cc.setting, 2, &mut rng),
            };
            let z = NComplex {
                spec,
                rep: random_rep(&cc.setting, 2, &mut rng),
            };
            let s = random_homotopy(&cc, &zp, &z, &mut rng);
            let l = cc.homotopy_sum(&zp, &z, &s);
            l.verify().unwrap();
            let p = cc.coil_epi(&z).unwrap();
            let fac = cc.factor_null_homotopy(&l, &p).unwrap();
            let back = compose_rep(&fac.lift, &p.map);
            assert_eq!(back, l);
        }
    }
}

#[test]
fn identity_is_not_null_homotopic() {
    let cc = ComplexCategory::new(NComplexSpec::interval(2, 3).unwrap(), point()).unwrap();
    let s = cc.stalk(2, &k(cc.coeff())).unwrap();
    let id = arknit_core::repcat::RepMap {
        src: s.rep.clone(),
        tgt: s.rep.clone(),
        comps: s
            .rep
            .vertex_modules
            .iter()
            .map(|m| ModuleMap::identity(m.clone()))
            .collect(),
    };
    let p = cc.coil_epi(&s).unwrap();
    assert!(cc.factor_null_homotopy(&id, &p).is_err());
    let zero = zero_rep_map(&s.rep, &s.rep);
    let fac = cc.factor_null_homotopy(&zero, &p).unwrap();
    assert!(fac.lift.comps.iter().all(ModuleMap::is_zero));
}

#[test]
fn truncation() {
    let cc = ComplexCategory::new(NComplexSpec::window(2, 0, 3).unwrap(), point()).unwrap();
    let j = cc.interval_j(0, &k(cc.coeff())).unwrap();
    let t = cc.hard_truncate(&j, 1).unwrap();
    assert_eq!(t, cc.stalk(1, &k(cc.coeff())).unwrap());
    assert_eq!(cc.hard_truncate(&t, 1).unwrap(), t);
    assert_eq!(cc.hard_truncate(&j, -5).unwrap(), j);
    assert_eq!(cc.hard_truncate(&j, 10).unwrap(), cc.zero());
}

#[test]
fn approximations() {
    let spec = NComplexSpec::interval(2, 2).unwrap();
    let cc = ComplexCategory::new(spec, point()).unwrap();
    let kk = k(cc.coeff());
    let gens = vec![
        cc.interval_j(1, &kk).unwrap(),
        cc.interval_j(2, &kk).unwrap(),
    ];
    let s1 = cc.stalk(1, &kk).unwrap();
    let a = cc.right_approximation(&s1, &gens).unwrap();
    assert!(a.passed());
    assert!(a.map.is_vertexwise_surjective());
    let a = cc.right_approximation(&s1, &[]).unwrap();
    assert!(a.certificate.iter().all(|c| c.coil));
    assert!(a.passed());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = NComplexSpec::interval(2, 3).unwrap();
    let cc = ComplexCategory::new(spec, ka2()).unwrap();
    for _ in 0..4 {
        let z = NComplex {
            spec,
            rep: random_rep(&cc.setting, 2, &mut rng),
        };
        let g: Vec<_> = (0..2)
            .map(|_| NComplex {
                spec,
                rep: random_rep(&cc.setting, 2, &mut rng),
            })
            .collect();
        assert!(cc.right_approximation(&z, &g).unwrap().passed());
    }
}

#[test]
fn stalk_filtrations() {
    let cc = ComplexCategory::new(NComplexSpec::cyclic(2).unwrap(), point()).unwrap();
    let kk = k(cc.coeff());
    let s = cc.stalk(0, &kk).unwrap();
    assert_eq!(
        cc.stalk_filtration_certificate(&s, 10)
            .unwrap()
            .unwrap()
            .len(),
        1
    );
    let j = cc.interval_j(0, &kk).unwrap();
    let steps = cc.stalk_filtration_certificate(&j, 10).unwrap().unwrap();
    assert_eq!(
        steps.iter().map(|s| s.degree).collect::<Vec<_>>(),
        vec![1, 0]
    );

    let cc = ComplexCategory::new(NComplexSpec::cyclic(2).unwrap(), ka2()).unwrap();
    let mc = ModuleCategory::new(cc.setting.tensor.cat.clone());
    let ar = ar_quiver(&mc, KnitOptions::default()).unwrap();
    assert!(ar.closed);
    for v in &ar.vertices {
        let x = NComplex {
            spec: cc.spec,
            rep: psi(&cc.setting, &v.module).unwrap(),
        };
        assert!(cc.stalk_filtration_certificate(&x, 20).unwrap().is_some());
    }
}

#[test]
fn sequences_land_in_complexes() {
    let spec = NComplexSpec::interval(2, 3).unwrap();
    let cc = ComplexCategory::new(spec, point()).unwrap();
    let mc = ModuleCategory::new(cc.setting.tensor.cat.clone());
    let s1 = Arc::new(simple(&mc.cat, 0).unwrap());
    let seq = mc.almost_split_sequence(&s1, 0).unwrap();
    for m in [&seq.x, &seq.y, &seq.z] {
        let x = cc.from_module(m).unwrap();
        assert_eq!(x.to_module(), **m);
    }
}
