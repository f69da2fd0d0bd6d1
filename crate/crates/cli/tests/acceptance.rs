use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use arknit_core::complexes::{compose_rep, ComplexCategory, NComplex, NComplexSpec};
use arknit_core::fincat::{rep_category, FinCategory};
use arknit_core::linalg::{Field, PrimeField};
use arknit_core::modcat::{
    ar_quiver, decompose_module, hom_space, is_isomorphic, simple, yoneda_projective,
    AlmostSplitSequence, ArQuiver, CModule, KnitOptions, ModuleCategory, ModuleMap,
};
use arknit_core::quiver::{BoundQuiver, MonomialIdeal, Quiver};
use arknit_core::repcat::{
    check_adjunction, conjugate, lemma2_cover, phi, psi, random_rep, RepSetting,
};
use arknit_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;


type Outcome = Result<String, String>;

fn f() -> PrimeField {
    PrimeField::default()
}

fn rad(q: Quiver, k: usize) -> BoundQuiver {
    let ideal = MonomialIdeal::all_paths_of_length(&q, k).unwrap();
    BoundQuiver::new(q, ideal).unwrap()
}

fn a2() -> BoundQuiver {
    BoundQuiver::free(Quiver::linear(2)).unwrap()
}

fn point() -> Arc<FinCategory<PrimeField>> {
    Arc::new(FinCategory::point(&f()))
}

fn ka2() -> Arc<FinCategory<PrimeField>> {
    rep_category(&f(), &a2())
}

/// The three (B, A) pairs used throughout.
fn settings() -> Vec<(&'static str, Arc<RepSetting<PrimeField>>)> {
    vec![
        ("kA2 x k", RepSetting::new(a2(), point()).unwrap()),
        (
            "kA3/rad2 x kA2",
            RepSetting::new(rad(Quiver::linear(3), 2), ka2()).unwrap(),
        ),
        (
            "Z2/rad2 x kA2",
            RepSetting::new(rad(Quiver::cyclic(2), 2), ka2()).unwrap(),
        ),
    ]
}

fn knit(s: &RepSetting<PrimeField>) -> (ModuleCategory<PrimeField>, ArQuiver<PrimeField>) {
    let mc = ModuleCategory::new(s.tensor.cat.clone());
    let ar = ar_quiver(&mc, KnitOptions::default()).unwrap();
    (mc, ar)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut total = 0;
    for (name, s) in settings() {
        for i in 0..50 {
            let r = random_rep(&s, 3, &mut rng);
            let m = phi(&r);
            let back = psi(&s, &m).map_err(|e| format!("{name} #{i}: {e}"))?;
            check(back == r, || format!("{name} #{i}: psi(phi(R)) != R"))?;
            check(phi(&back) == m, || format!("{name} #{i}: phi(psi(M)) != M"))?;
            total += 1;
        }
    }
    Ok(format!("{total} representations"))
}

fn covers_and_adjunction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut total = 0;
    for (name, s) in settings() {
        for i in 0..50 {
            let r = random_rep(&s, 3, &mut rng);
            let cover = lemma2_cover(&r).map_err(|e| format!("{name} #{i}: {e}"))?;
            check(cover.map.is_vertexwise_surjective(), || {
                format!("{name} #{i}: cover not surjective")
            })?;
            let other = random_rep(&s, 3, &mut rng);
            let v = rng.gen_range(0..s.num_vertices());
            let rep =
                check_adjunction(&s, v, &other.vertex_modules[v], &r).map_err(|e| e.to_string())?;
            check(rep.passed(), || format!("{name} #{i}: adjunction {rep:?}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} instances"))
}

fn sequences_certified() -> Outcome {
    let mut lines = Vec::new();
    for (name, s) in settings() {
        let (mc, ar) = knit(&s);
        check(ar.closed, || format!("{name}: knitting did not close"))?;
        let family = ar.modules();
        let mut count = 0;
        for (i, v) in ar.vertices.iter().enumerate() {
            if v.projective {
                continue;
            }
            let seq = mc
                .almost_split_sequence(&v.module, 0)
                .map_err(|e| format!("{name} v{i}: {e}"))?;
            let rep = mc
                .verify_almost_split(&seq, &family, true)
                .map_err(|e| e.to_string())?;
            check(rep.is_certificate(), || format!("{name} v{i}:\n{rep}"))?;
            count += 1;
        }
        lines.push(format!(
            "{name}: {} indecomposables, {count} sequences",
            ar.vertices.len()
        ));
    }
    Ok(lines.join("; "))
}

fn two_complexes_of_length_three() -> Outcome {
    let spec = NComplexSpec::interval(2, 3).unwrap();
    let cc = ComplexCategory::new(spec, point()).unwrap();
    let (mc, ar) = knit(&cc.setting);
    check(ar.closed, || "knitting did not close".into())?;
    let (n, m) = (2usize, 3usize);
    let oracle: usize = (1..=m).map(|i| n.min(m - i + 1)).sum();
    check(ar.vertices.len() == oracle && oracle == 5, || {
        format!(
            "{} indecomposables, interval oracle {oracle}",
            ar.vertices.len()
        )
    })?;
    let family = ar.modules();
    let mut certified = 0;
    for v in ar.vertices.iter().filter(|v| !v.projective) {
        let seq = mc
            .almost_split_sequence(&v.module, 0)
            .map_err(|e| e.to_string())?;
        let rep = mc
            .verify_almost_split(&seq, &family, true)
            .map_err(|e| e.to_string())?;
        check(rep.is_certificate(), || format!("{}:\n{rep}", v.label()))?;
        certified += 1;
    }
    let non_projective: Vec<String> = ar
        .vertices
        .iter()
        .filter(|v| !v.projective)
        .map(|v| v.label())
        .collect();
    check(non_projective.len() == 3, || {
        format!(
            "5 indecomposables found, but only {} are non-projective ({}), all {certified} certified; 3 expected",
            non_projective.len(),
            non_projective.join(", ")
        )
    })?;
    Ok(format!("5 indecomposables, {certified} sequences"))
}

fn cyclic_complexes() -> Outcome {
    let cc = ComplexCategory::new(NComplexSpec::cyclic(2).unwrap(), point()).unwrap();
    let (mc, ar) = knit(&cc.setting);
    let c = &cc.setting.tensor.cat;
    check(ar.closed && ar.vertices.len() == 4, || {
        format!("{} indecomposables", ar.vertices.len())
    })?;
    let s0 = Arc::new(simple(c, 0).map_err(|e| e.to_string())?);
    let seq = mc
        .almost_split_sequence(&s0, 0)
        .map_err(|e| e.to_string())?;
    let s1 = Arc::new(simple(c, 1).unwrap());
    let p0 = Arc::new(yoneda_projective(c, 0));
    check(is_isomorphic(&seq.x, &s1).unwrap(), || {
        format!("X = {}", seq.x.dim_vector_string())
    })?;
    check(is_isomorphic(&seq.y, &p0).unwrap(), || {
        format!("Y = {}", seq.y.dim_vector_string())
    })?;
    let rep = mc
        .verify_almost_split(&seq, &ar.modules(), true)
        .map_err(|e| e.to_string())?;
    check(rep.is_certificate(), || rep.to_string())?;
    Ok("4 indecomposables, 0 -> S1 -> P0 -> S0 -> 0 certified".into())
}

fn krull_schmidt() -> Outcome {
    let s = RepSetting::new(rad(Quiver::linear(3), 2), ka2()).unwrap();
    let (_, ar) = knit(&s);
    let c = s.tensor.cat.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let small: Vec<usize> = (0..ar.vertices.len())
        .filter(|&i| ar.vertices[i].module.total_dim() <= 8)
        .collect();
    for trial in 0..50 {
        let mut picks = Vec::new();
        let mut total = 0;
        loop {
            let i = small[rng.gen_range(0..small.len())];
            let d = ar.vertices[i].module.total_dim();
            if total + d > 8 || picks.len() >= 4 {
                break;
            }
            total += d;
            picks.push(i);
        }
        if picks.is_empty() {
            picks.push(small[0]);
        }
        let parts: Vec<&CModule<PrimeField>> =
            picks.iter().map(|&i| &*ar.vertices[i].module).collect();
        let sum = CModule::direct_sum(&c, &parts).sum;
        let m = Arc::new(conjugate(&sum, &mut rng));
        let summands = decompose_module(&m, trial).map_err(|e| format!("trial {trial}: {e}"))?;
        let mut found = Vec::new();
        let mut es: Option<ModuleMap<PrimeField>> = None;
        for p in &summands {
            check(
                p.inclusion.then(&p.projection) == ModuleMap::identity(p.module.clone()),
                || format!("trial {trial}: projection after inclusion is not 1"),
            )?;
            let e = p.projection.then(&p.inclusion);
            check(e.then(&e) == e, || {
                format!("trial {trial}: e is not idempotent")
            })?;
            es = Some(match es {
                None => e,
                Some(acc) => acc.add(&e),
            });
            let idx = ar
                .vertices
                .iter()
                .position(|v| is_isomorphic(&v.module, &p.module).unwrap());
            found.push(
                idx.ok_or_else(|| format!("trial {trial}: summand is not a known indecomposable"))?,
            );
        }
        check(es == Some(ModuleMap::identity(m.clone())), || {
            format!("trial {trial}: idempotents do not sum to 1")
        })?;
        let (mut want, mut got) = (picks.clone(), found);
        want.sort();
        got.sort();
        check(want == got, || {
            format!("trial {trial}: summands {got:?}, built from {want:?}")
        })?;
    }
    Ok("50 direct sums".into())
}

fn random_homotopy(
    cc: &ComplexCategory<PrimeField>,
    zp: &NComplex<PrimeField>,
    z: &NComplex<PrimeField>,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, ModuleMap<PrimeField>)> {
    let r = cc.spec.relation_length() as i64;
    (0..cc.spec.len())
        .filter_map(|j| {
            let t = cc.spec.shift(j, -(r - 1))?;
            let hs = hom_space(zp.component(j), z.component(t)).unwrap();
            let coords: Vec<_> = (0..hs.dim()).map(|_| f().random_elem(rng)).collect();
            Some((j, hs.element(&coords)))
        })
        .collect()
}

fn approximations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shapes = [
        NComplexSpec::interval(2, 3).unwrap(),
        NComplexSpec::window(3, -1, 2).unwrap(),
        NComplexSpec::cyclic(1).unwrap(),
        NComplexSpec::cyclic(2).unwrap(),
    ];
    let mut checks = 0;
    for spec in shapes {
        let cc = ComplexCategory::new(spec, ka2()).unwrap();
        let rand = |rng: &mut ChaCha8Rng| NComplex {
            spec,
            rep: random_rep(&cc.setting, 2, rng),
        };
        for i in 0..20 {
            let z = rand(&mut rng);
            let gens: Vec<_> = (0..2).map(|_| rand(&mut rng)).collect();
            let a = cc
                .right_approximation(&z, &gens)
                .map_err(|e| format!("{spec:?} #{i}: {e}"))?;
            check(a.passed(), || format!("{spec:?} #{i}: {:?}", a.certificate))?;
            checks += a.certificate.len();
            let p = cc.coil_epi(&z).map_err(|e| e.to_string())?;
            check(p.map.is_vertexwise_surjective(), || {
                format!("{spec:?} #{i}: coil epi not surjective")
            })?;
            let zp = rand(&mut rng);
            let s = random_homotopy(&cc, &zp, &z, &mut rng);
            let l = cc.homotopy_sum(&zp, &z, &s);
            let fac = cc
                .factor_null_homotopy(&l, &p)
                .map_err(|e| format!("{spec:?} #{i}: {e}"))?;
            check(compose_rep(&fac.lift, &p.map) == l, || {
                format!("{spec:?} #{i}: nonzero residual")
            })?;
        }
    }
    Ok(format!("80 complexes, {checks} generator checks"))
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    for (name, s) in settings() {
        let (mc, ar) = knit(&s);
        let mut corpus = ar.modules();
        for _ in 0..10 {
            corpus.push(Arc::new(phi(&random_rep(&s, 3, &mut rng))));
        }
        for m in &corpus {
            let iso = mc.double_dual_iso(m).map_err(|e| format!("{name}: {e}"))?;
            check(iso.is_iso(), || {
                format!("{name}: {} not iso", m.dim_vector_string())
            })?;
            check(
                iso.tgt.dims() == m.dims() && iso.src.dims() == m.dims(),
                || format!("{name}: dims changed for {}", m.dim_vector_string()),
            )?;
            let d = mc.dual(m).map_err(|e| e.to_string())?;
            check(d.dims() == m.dims(), || format!("{name}: D changed dims"))?;
            count += 1;
        }
    }
    Ok(format!("{count} modules"))
}

fn negative_controls() -> Outcome {
    let s = RepSetting::new(a2(), point()).unwrap();
    let c = s.tensor.cat.clone();
    let mc = ModuleCategory::new(c.clone());
    let (s0, s1) = (
        Arc::new(simple(&c, 0).unwrap()),
        Arc::new(simple(&c, 1).unwrap()),
    );
    let (x, z) = if yoneda_projective(&c, 0).total_dim() == 1 {
        (s0, s1)
    } else {
        (s1, s0)
    };
    let sum = CModule::direct_sum(&c, &[&*x, &*z]);
    let seq = AlmostSplitSequence {
        x,
        y: sum.sum.clone(),
        z,
        f: sum.inj[0].clone(),
        g: sum.proj[1].clone(),
    };
    let (_, ar) = knit(&s);
    let rep = mc
        .verify_almost_split(&seq, &ar.modules(), true)
        .map_err(|e| e.to_string())?;
    check(rep.exact && !rep.non_split && !rep.passed(), || {
        format!("split sequence accepted:\n{rep}")
    })?;
    for x in 0..c.num_objects() {
        let p = Arc::new(yoneda_projective(&c, x));
        check(matches!(mc.tau(&p), Err(Error::Projective)), || {
            format!("tau accepted P{x}")
        })?;
        match mc.almost_split_sequence(&p, 0) {
            Err(e) if e.is_precondition() => {}
            other => return Err(format!("sequence for P{x}: {:?}", other.map(|_| ()))),
        }
    }
    let job = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs/a2_projective.job");
    let out = Command::new(env!("CARGO_BIN_EXE_arknit"))
        .arg(job)
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.code() == Some(2), || {
        format!("CLI exit code {:?}", out.status.code())
    })?;
    Ok("split sequence rejected, projectives rejected, CLI exit 2".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("round trip phi/psi", round_trip),
        ("covers and adjunction", covers_and_adjunction),
        ("almost split sequences certified", sequences_certified),
        (
            "2-complexes of length 3 over k",
            two_complexes_of_length_three,
        ),
        ("2-cyclic complexes over k", cyclic_complexes),
        ("Krull-Schmidt decomposition", krull_schmidt),
        ("approximations and homotopies", approximations),
        ("duality D D = id", duality),
        ("negative controls", negative_controls),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let line = match &result {
            Ok(detail) => format!("PASS {n} {name}: {detail}"),
            Err(detail) => {
                failed.push(n);
                format!("FAIL {n} {name}: {detail}")
            }
        };
        writeln!(out, "{line}").unwrap();
    }
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
