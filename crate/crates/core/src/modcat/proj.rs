use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::linalg::{quotient_map, Field, Mat, SpanSolver};

use super::module::{CModule, ModuleMap};

/// `P_x = C(-, x)`; `P_x(w)` has the local basis of `C(w, x)`.
pub fn yoneda_projective<F: Field>(cat: &Arc<FinCategory<F>>, x: usize) -> CModule<F> {
    let n = cat.num_objects();
    let dims = (0..n).map(|w| cat.hom_dim(w, x)).collect();
    let action = (0..cat.basis().len())
        .map(|b| cat.precompose_matrix(b, x))
        .collect();
    CModule::new_unchecked(cat.clone(), dims, action)
}

/// `⊕_j P_{objs[j]}`.
pub fn projective_sum<F: Field>(cat: &Arc<FinCategory<F>>, objs: &[usize]) -> Arc<CModule<F>> {
    let parts: Vec<CModule<F>> = objs.iter().map(|&x| yoneda_projective(cat, x)).collect();
    let refs: Vec<&CModule<F>> = parts.iter().collect();
    CModule::direct_sum(cat, &refs).sum
}

/// The map `⊕_j P_{objs[j]} -> N` sending the unit of summand `j` to
/// `gens[j] ∈ N(objs[j])`.
pub fn yoneda_map<F: Field>(
    src: &Arc<CModule<F>>,
    objs: &[usize],
    gens: &[Vec<F::Elem>],
    n: &Arc<CModule<F>>,
) -> ModuleMap<F> {
    let cat = n.cat();
    let field = n.field().clone();
    let comps = (0..cat.num_objects())
        .map(|w| {
            let mut cols = Vec::with_capacity(src.dim(w));
            for (j, &x) in objs.iter().enumerate() {
                for &g in cat.hom(w, x) {
                    cols.push(n.act(g).apply(&gens[j]));
                }
            }
            Mat::from_columns(&field, n.dim(w), &cols)
        })
        .collect();
    ModuleMap::new_unchecked(src.clone(), n.clone(), comps)
}

/// The simple module at `x`: `k` at `x`, radical morphisms act by zero.
pub fn simple<F: Field>(cat: &Arc<FinCategory<F>>, x: usize) -> Result<CModule<F>> {
    let field = cat.field().clone();
    let rad = cat.radical(x)?;
    let d = cat.hom_dim(x, x);
    // the functional End(x) -> k vanishing on the radical, 1 on the unit
    let q = quotient_map(&field, d, rad);
    let unit = cat.unit_local(x);
    let at_unit = q.pi.apply(&unit)[0].clone();
    let inv = field.inv(&at_unit).expect("unit survives the radical");
    let n = cat.num_objects();
    let mut dims = vec![0; n];
    dims[x] = 1;
    let action = cat
        .basis()
        .iter()
        .enumerate()
        .map(|(b, m)| {
            if m.src == x && m.tgt == x {
                let v = field.mul(&q.pi[(0, cat.local_index(b))], &inv);
                Mat::from_vec(&field, 1, 1, vec![v]).expect("1x1")
            } else {
                Mat::zeros(&field, dims[m.src], dims[m.tgt])
            }
        })
        .collect();
    Ok(CModule::new_unchecked(cat.clone(), dims, action))
}

/// Columns spanning `rad M(x)`, the sum of the images of `M(r)` over radical
/// morphisms `r: x -> y`.
pub fn radical_spaces<F: Field>(m: &CModule<F>) -> Result<Vec<Mat<F>>> {
    let cat = m.cat();
    let field = m.field().clone();
    let n = cat.num_objects();
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let mut parts: Vec<Mat<F>> = Vec::new();
        for y in 0..n {
            if m.dim(y) == 0 {
                continue;
            }
            for r in cat.radical_morphisms(x, y)? {
                parts.push(m.act_local(x, y, &r));
            }
        }
        let refs: Vec<&Mat<F>> = parts.iter().collect();
        out.push(Mat::hstack(&field, m.dim(x), &refs).column_space());
    }
    Ok(out)
}

/// Columns spanning `soc M(x)`: vectors killed by every `M(r)` with `r`
/// radical `y -> x`.
pub fn socle_spaces<F: Field>(m: &CModule<F>) -> Result<Vec<Mat<F>>> {
    let cat = m.cat();
    let field = m.field().clone();
    let n = cat.num_objects();
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let mut parts: Vec<Mat<F>> = Vec::new();
        for y in 0..n {
            if m.dim(y) == 0 {
                continue;
            }
            for r in cat.radical_morphisms(y, x)? {
                parts.push(m.act_local(y, x, &r));
            }
        }
        let refs: Vec<&Mat<F>> = parts.iter().collect();
        let total: usize = parts.iter().map(Mat::rows).sum();
        let stacked = Mat::vstack(&field, m.dim(x), &refs);
        out.push(if total == 0 {
            Mat::identity(&field, m.dim(x))
        } else {
            stacked.kernel_basis()
        });
    }
    Ok(out)
}

/// `dim (M / rad M)(x)` for each object.
pub fn top_dims<F: Field>(m: &CModule<F>) -> Result<Vec<usize>> {
    Ok(radical_spaces(m)?
        .iter()
        .enumerate()
        .map(|(x, r)| m.dim(x) - r.cols())
        .collect())
}

/// A projective cover `⊕ P_{objs[j]} -> M`, minimal since the generators
/// map to a basis of the top.
#[derive(Debug, Clone)]
pub struct ProjectiveCover<F: Field> {
    pub objs: Vec<usize>,
    pub gens: Vec<Vec<F::Elem>>,
    pub map: ModuleMap<F>,
}

pub fn projective_cover<F: Field>(m: &Arc<CModule<F>>) -> Result<ProjectiveCover<F>> {
    let cat = m.cat();
    let field = m.field().clone();
    let rads = radical_spaces(m)?;
    let mut objs = Vec::new();
    let mut gens = Vec::new();
    for x in 0..cat.num_objects() {
        let q = quotient_map(&field, m.dim(x), &rads[x]);
        for v in q.section.columns() {
            objs.push(x);
            gens.push(v);
        }
    }
    let p = projective_sum(cat, &objs);
    let map = yoneda_map(&p, &objs, &gens, m);
    if !map.is_epi() {
        return Err(Error::VerificationFailed(
            "projective cover is not surjective".into(),
        ));
    }
    Ok(ProjectiveCover { objs, gens, map })
}

/// `P1 --d1--> P0 --π0--> M -> 0` with both covers minimal.
#[derive(Debug, Clone)]
pub struct Presentation<F: Field> {
    pub p0: ProjectiveCover<F>,
    /// `K = ker π0` and its inclusion into `P0`.
    pub syzygy: Arc<CModule<F>>,
    pub inclusion: ModuleMap<F>,
    pub p1: ProjectiveCover<F>,
    pub d1: ModuleMap<F>,
}

impl<F: Field> Presentation<F> {
    /// Entry `(j, i)` is the element of `C(y_i, x_j)` giving the component
    /// of `d1` from summand `i` of `P1` to summand `j` of `P0`.
    pub fn morphism_matrix(&self) -> Vec<Vec<Vec<F::Elem>>> {
        matrix_between_projectives(&self.d1, &self.p1.objs, &self.p0.objs)
    }
}

/// Local coordinates of the components of a map between sums of
/// representables, indexed `[target summand][source summand]`.
pub fn matrix_between_projectives<F: Field>(
    f: &ModuleMap<F>,
    src_objs: &[usize],
    tgt_objs: &[usize],
) -> Vec<Vec<Vec<F::Elem>>> {
    let cat = f.src.cat();
    let mut out = vec![vec![Vec::new(); src_objs.len()]; tgt_objs.len()];
    for (i, &y) in src_objs.iter().enumerate() {
        // unit of summand i inside P1(y)
        let mut offset = 0;
        for &w in &src_objs[..i] {
            offset += cat.hom_dim(y, w);
        }
        let mut v = vec![f.src.field().zero(); f.src.dim(y)];
        for (k, c) in cat.unit_local(y).into_iter().enumerate() {
            v[offset + k] = c;
        }
        let img = f.comps[y].apply(&v);
        let mut o = 0;
        for (j, &x) in tgt_objs.iter().enumerate() {
            let d = cat.hom_dim(y, x);
            out[j][i] = img[o..o + d].to_vec();
            o += d;
        }
    }
    out
}

pub fn minimal_presentation<F: Field>(m: &Arc<CModule<F>>) -> Result<Presentation<F>> {
    let p0 = projective_cover(m)?;
    let (syzygy, inclusion) = p0.map.kernel();
    let p1 = projective_cover(&syzygy)?;
    let d1 = p1.map.then(&inclusion);
    Ok(Presentation {
        p0,
        syzygy,
        inclusion,
        p1,
        d1,
    })
}

pub fn is_projective<F: Field>(m: &Arc<CModule<F>>) -> Result<bool> {
    let cover = projective_cover(m)?;
    Ok(cover.map.is_iso())
}

/// The first object `x` such that `P_x` is a direct summand of `M`: some
/// basis map `M -> P_x` reaches outside `rad End(x)`.
pub fn projective_summand<F: Field>(m: &Arc<CModule<F>>) -> Result<Option<usize>> {
    let cat = m.cat();
    for x in 0..cat.num_objects() {
        if m.dim(x) == 0 {
            continue;
        }
        let px = Arc::new(yoneda_projective(cat, x));
        let hs = super::hom::hom_space(m, &px)?;
        let rad = SpanSolver::new(cat.radical(x)?.clone());
        for g in &hs.basis {
            if g.comps[x].columns().iter().any(|c| !rad.contains(c)) {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Projective dimension bounded by `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Exactly(usize),
    AtLeast(usize),
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dimension::Exactly(d) => write!(f, "{d}"),
            Dimension::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

pub fn projective_dimension<F: Field>(m: &Arc<CModule<F>>, cap: usize) -> Result<Dimension> {
    let mut cur = m.clone();
    for k in 0..=cap {
        if cur.is_zero() {
            return Ok(Dimension::Exactly(k.saturating_sub(1)));
        }
        let cover = projective_cover(&cur)?;
        if cover.map.is_iso() {
            return Ok(Dimension::Exactly(k));
        }
        cur = cover.map.kernel().0;
    }
    Ok(Dimension::AtLeast(cap + 1))
}

/// The maximum projective dimension of the simples.
pub fn global_dimension<F: Field>(cat: &Arc<FinCategory<F>>, cap: usize) -> Result<Dimension> {
    let mut best = Dimension::Exactly(0);
    for x in 0..cat.num_objects() {
        let s = Arc::new(simple(cat, x)?);
        match projective_dimension(&s, cap)? {
            Dimension::AtLeast(d) => return Ok(Dimension::AtLeast(d)),
            Dimension::Exactly(d) => {
                if let Dimension::Exactly(b) = best {
                    best = Dimension::Exactly(b.max(d));
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::rep_category;
    use crate::linalg::PrimeField;
    use crate::quiver::{BoundQuiver, MonomialIdeal, Quiver};

    fn a3_rad2() -> Arc<FinCategory<PrimeField>> {
        let q = Quiver::linear(3);
        let i = MonomialIdeal::all_paths_of_length(&q, 2).unwrap();
        rep_category(&PrimeField::default(), &BoundQuiver::new(q, i).unwrap())
    }

    #[test]
    fn representables_and_simples() {
        let c = a3_rad2();
        // P_1 = paths from 1: trivial and a_1
        assert_eq!(yoneda_projective(&c, 0).dims(), &[1, 1, 0]);
        assert_eq!(yoneda_projective(&c, 2).dims(), &[0, 0, 1]);
        let s = simple(&c, 1).unwrap();
        assert_eq!(s.dims(), &[0, 1, 0]);
        s.verify().unwrap();
    }

    #[test]
    fn covers_and_syzygies() {
        let c = a3_rad2();
        let s1 = Arc::new(simple(&c, 0).unwrap());
        let pres = minimal_presentation(&s1).unwrap();
        assert_eq!(pres.p0.objs, vec![0]);
        assert_eq!(pres.syzygy.dims(), &[0, 1, 0]);
        assert_eq!(pres.p1.objs, vec![1]);
        assert!(!is_projective(&s1).unwrap());
        let p = Arc::new(yoneda_projective(&c, 0));
        assert!(is_projective(&p).unwrap());
        assert_eq!(projective_summand(&p).unwrap(), Some(0));
        assert_eq!(projective_summand(&s1).unwrap(), None);
    }

    #[test]
    fn global_dimensions() {
        assert_eq!(
            global_dimension(&a3_rad2(), 10).unwrap(),
            Dimension::Exactly(2)
        );
        let z = Quiver::cyclic(2);
        let i = MonomialIdeal::all_paths_of_length(&z, 2).unwrap();
        let c = rep_category(&PrimeField::default(), &BoundQuiver::new(z, i).unwrap());
        assert_eq!(global_dimension(&c, 6).unwrap(), Dimension::AtLeast(7));
    }
}
