use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::algebra::MatrixAlgebra;
use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::linalg::{quotient_map, Field, Mat, Quotient, SpanSolver};

use super::hom::{end_matrices, find_isomorphism, hom_space, is_split_epi, HomSpace};
use super::module::{CModule, ModuleMap};
use super::proj::{
    minimal_presentation, projective_sum, projective_summand, radical_spaces, socle_spaces,
    yoneda_map, yoneda_projective, Presentation,
};

/// A category together with its opposite, so modules on either side can be
/// moved across by `D` and `Tr` without rebuilding categories.
#[derive(Debug, Clone)]
pub struct ModuleCategory<F: Field> {
    pub cat: Arc<FinCategory<F>>,
    pub op: Arc<FinCategory<F>>,
}

impl<F: Field> ModuleCategory<F> {
    pub fn new(cat: Arc<FinCategory<F>>) -> Self {
        let op = Arc::new(cat.opposite());
        ModuleCategory { cat, op }
    }

    pub fn field(&self) -> &F {
        self.cat.field()
    }

    fn other_side(&self, m: &CModule<F>) -> Result<Arc<FinCategory<F>>> {
        if Arc::ptr_eq(m.cat(), &self.cat) || **m.cat() == *self.cat {
            Ok(self.op.clone())
        } else if Arc::ptr_eq(m.cat(), &self.op) || **m.cat() == *self.op {
            Ok(self.cat.clone())
        } else {
            Err(Error::CategoryMismatch(format!(
                "module over {} used with {}",
                m.cat().name(),
                self.cat.name()
            )))
        }
    }

    /// `DM` over the other side: same dims, transposed action.
    pub fn dual(&self, m: &CModule<F>) -> Result<Arc<CModule<F>>> {
        let other = self.other_side(m)?;
        let action = m.action().iter().map(Mat::transpose).collect();
        Ok(Arc::new(CModule::new_unchecked(
            other,
            m.dims().to_vec(),
            action,
        )))
    }

    /// The canonical `M -> DDM`, checked to be an isomorphism.
    pub fn double_dual_iso(&self, m: &Arc<CModule<F>>) -> Result<ModuleMap<F>> {
        let dd = self.dual(&*self.dual(m)?)?;
        let iso = ModuleMap::new(m.clone(), dd, ModuleMap::identity(m.clone()).comps)?;
        if !iso.is_iso() {
            return Err(Error::VerificationFailed(
                "M -> DDM is not invertible".into(),
            ));
        }
        Ok(iso)
    }

    fn check_nonzero(m: &CModule<F>) -> Result<()> {
        if m.is_zero() {
            Err(Error::ZeroModule)
        } else {
            Ok(())
        }
    }

    fn reject_projective_summand(m: &Arc<CModule<F>>) -> Result<()> {
        if let Some(x) = projective_summand(m)? {
            return Err(Error::ProjectiveSummand {
                object: m.cat().objects()[x].clone(),
                dims: m.dims().to_vec(),
            });
        }
        Ok(())
    }

    /// `Tr M = coker(Hom(P0, C) -> Hom(P1, C))` over the other side.
    pub fn transpose(&self, m: &Arc<CModule<F>>) -> Result<Arc<CModule<F>>> {
        Self::check_nonzero(m)?;
        if super::proj::is_projective(m)? {
            return Err(Error::Projective);
        }
        Self::reject_projective_summand(m)?;
        let pres = minimal_presentation(m)?;
        Ok(self.transpose_of(&pres)?.module)
    }

    fn transpose_of(&self, pres: &Presentation<F>) -> Result<super::module::Quotient<F>> {
        let other = self.other_side(&pres.p0.map.src)?;
        let (xs, ys) = (&pres.p0.objs, &pres.p1.objs);
        let entries = pres.morphism_matrix();
        let src = projective_sum(&other, xs);
        let tgt = projective_sum(&other, ys);
        // generator j goes to (f_{j i})_i in ⊕_i C^op(x_j, y_i)
        let gens: Vec<Vec<F::Elem>> = (0..xs.len())
            .map(|j| entries[j].iter().flatten().cloned().collect())
            .collect();
        let map = yoneda_map(&src, xs, &gens, &tgt);
        map.verify()?;
        Ok(map.cokernel())
    }

    /// `τM = D Tr M`.
    pub fn tau(&self, m: &Arc<CModule<F>>) -> Result<Arc<CModule<F>>> {
        let tr = self.transpose(m)?;
        self.dual(&tr)
    }

    /// `τ⁻¹M = Tr D M`.
    pub fn tau_inverse(&self, m: &Arc<CModule<F>>) -> Result<Arc<CModule<F>>> {
        Self::check_nonzero(m)?;
        let d = self.dual(m)?;
        if let Some(x) = projective_summand(&d)? {
            return Err(Error::ProjectiveSummand {
                object: format!("injective at {}", m.cat().objects()[x]),
                dims: m.dims().to_vec(),
            });
        }
        self.transpose(&d)
    }

    pub fn is_injective(&self, m: &Arc<CModule<F>>) -> Result<bool> {
        super::proj::is_projective(&self.dual(m)?)
    }

    /// `I_x = D(P_x over the opposite)`.
    pub fn injective(&self, x: usize) -> Result<Arc<CModule<F>>> {
        let q = yoneda_projective(&self.op, x);
        self.dual(&q)
    }

    pub fn ext1(&self, z: &Arc<CModule<F>>, x: &Arc<CModule<F>>) -> Result<Ext1<F>> {
        if **z.cat() != **x.cat() {
            return Err(Error::CategoryMismatch(
                "Ext between different categories".into(),
            ));
        }
        let pres = minimal_presentation(z)?;
        let hom_kx = hom_space(&pres.syzygy, x)?;
        let hom_px = hom_space(&pres.p0.map.src, x)?;
        let field = self.field().clone();
        let restricted: Vec<Vec<F::Elem>> = hom_px
            .basis
            .iter()
            .map(|h| {
                hom_kx
                    .coords(&pres.inclusion.then(h))
                    .expect("restriction lies in Hom(K, X)")
            })
            .collect();
        let im = Mat::from_columns(&field, hom_kx.dim(), &restricted);
        let quotient = quotient_map(&field, hom_kx.dim(), &im);
        Ok(Ext1 {
            z: z.clone(),
            x: x.clone(),
            pres,
            hom_kx,
            quotient,
        })
    }

    /// `τZ`, a socle element of `Ext¹(Z, τZ)` over `End(Z)`, and the
    /// extension it defines.
    pub fn almost_split_sequence(
        &self,
        z: &Arc<CModule<F>>,
        seed: u64,
    ) -> Result<AlmostSplitSequence<F>> {
        Self::check_nonzero(z)?;
        if let Some(x) = projective_summand(z)? {
            if super::proj::is_projective(z)? {
                return Err(Error::Projective);
            }
            return Err(Error::ProjectiveSummand {
                object: z.cat().objects()[x].clone(),
                dims: z.dims().to_vec(),
            });
        }
        let parts = decompose_module(z, seed)?;
        if parts.len() != 1 {
            return Err(Error::Decomposable(parts.len()));
        }
        let x = self.tau(z)?;
        if decompose_module(&x, seed)?.len() != 1 {
            return Err(Error::VerificationFailed("τZ is decomposable".into()));
        }
        let ext = self.ext1(z, &x)?;
        if ext.dim() == 0 {
            return Err(Error::VerificationFailed("Ext¹(Z, τZ) vanishes".into()));
        }
        let class = ext.socle_class()?;
        let cocycle = ext.cocycle(&class);
        let (y, f, g) = ext.extension(&cocycle)?;
        Ok(AlmostSplitSequence {
            x,
            y,
            z: z.clone(),
            f,
            g,
        })
    }

    /// Checks exactness, non-splitting and the almost split property
    /// against `family`; `complete` records whether the caller vouches that
    /// `family` lists every indecomposable.
    pub fn verify_almost_split(
        &self,
        seq: &AlmostSplitSequence<F>,
        family: &[Arc<CModule<F>>],
        complete: bool,
    ) -> Result<AssReport> {
        let (f, g) = (&seq.f, &seq.g);
        let exact = f.is_mono()
            && g.is_epi()
            && f.then(g).is_zero()
            && (0..seq.y.dims().len()).all(|v| seq.y.dim(v) == seq.x.dim(v) + seq.z.dim(v));
        let non_split = !is_split_epi(g)?;
        let top_z = end_top_dim(&seq.z)?;
        let top_x = end_top_dim(&seq.x)?;
        let mut entries = Vec::with_capacity(family.len());
        let (mut covers_z, mut covers_x) = (false, false);
        for (i, m) in family.iter().enumerate() {
            let is_z = find_isomorphism(m, &seq.z)?.is_some();
            let is_x = find_isomorphism(m, &seq.x)?.is_some();
            covers_z |= is_z;
            covers_x |= is_x;
            let hom_mz = hom_space(m, &seq.z)?;
            let hom_my = hom_space(m, &seq.y)?;
            let right_image: Vec<Vec<F::Elem>> =
                hom_my.basis.iter().map(|h| h.then(g).flatten()).collect();
            let right = hom_mz.dim() - rank_of(self.field(), &right_image, flat_len(&hom_mz));
            let hom_xm = hom_space(&seq.x, m)?;
            let hom_ym = hom_space(&seq.y, m)?;
            let left_image: Vec<Vec<F::Elem>> =
                hom_ym.basis.iter().map(|h| f.then(h).flatten()).collect();
            let left = hom_xm.dim() - rank_of(self.field(), &left_image, flat_len(&hom_xm));
            let right_expected = if is_z { top_z } else { 0 };
            let left_expected = if is_x { top_x } else { 0 };
            entries.push(FamilyCheck {
                index: i,
                dims: m.dim_vector_string(),
                right_coker: right,
                right_expected,
                left_coker: left,
                left_expected,
            });
        }
        Ok(AssReport {
            exact,
            non_split,
            entries,
            covers_z,
            covers_x,
            complete,
        })
    }
}

fn flat_len<F: Field>(h: &HomSpace<F>) -> usize {
    (0..h.src.dims().len())
        .map(|v| h.src.dim(v) * h.tgt.dim(v))
        .sum()
}

fn rank_of<F: Field>(field: &F, cols: &[Vec<F::Elem>], rows: usize) -> usize {
    if cols.is_empty() {
        return 0;
    }
    Mat::from_columns(field, rows, cols).rank()
}

/// `dim End(M) / rad End(M)`.
pub fn end_top_dim<F: Field>(m: &Arc<CModule<F>>) -> Result<usize> {
    let end = hom_space(m, m)?;
    let alg = end_algebra(m, &end)?;
    alg.top_dim()
}

fn end_algebra<F: Field>(m: &Arc<CModule<F>>, end: &HomSpace<F>) -> Result<MatrixAlgebra<F>> {
    let field = m.field().clone();
    MatrixAlgebra::new(
        &field,
        end_matrices(end),
        Mat::identity(&field, m.total_dim()),
    )
}

/// `Ext¹(Z, X) = Hom(K, X) / ι* Hom(P0, X)` for the syzygy `ι: K -> P0`.
#[derive(Debug, Clone)]
pub struct Ext1<F: Field> {
    pub z: Arc<CModule<F>>,
    pub x: Arc<CModule<F>>,
    pub pres: Presentation<F>,
    pub hom_kx: HomSpace<F>,
    /// Quotient of `Hom(K, X)` coordinates by the restricted maps.
    pub quotient: Quotient<F>,
}

impl<F: Field> Ext1<F> {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// The cocycle `K -> X` representing a class given in quotient coordinates.
    pub fn cocycle(&self, class: &[F::Elem]) -> ModuleMap<F> {
        self.hom_kx.element(&self.quotient.section.apply(class))
    }

    pub fn class_of(&self, c: &ModuleMap<F>) -> Vec<F::Elem> {
        self.quotient
            .pi
            .apply(&self.hom_kx.coords(c).expect("cocycle lies in Hom(K, X)"))
    }

    /// The pushout `0 -> X -> Y -> Z -> 0` of `0 -> K -> P0 -> Z -> 0`
    /// along `c: K -> X`.
    pub fn extension(
        &self,
        c: &ModuleMap<F>,
    ) -> Result<(Arc<CModule<F>>, ModuleMap<F>, ModuleMap<F>)> {
        let cat = self.x.cat();
        let p0 = self.pres.p0.map.src.clone();
        let sum = CModule::direct_sum(cat, &[&*self.x, &*p0]);
        let h = c
            .then(&sum.inj[0])
            .sub(&self.pres.inclusion.then(&sum.inj[1]));
        let q = h.cokernel();
        let f = sum.inj[0].then(&q.proj);
        let down = sum.proj[1].then(&self.pres.p0.map);
        let comps = (0..cat.num_objects())
            .map(|v| down.comps[v].mul(&q.sections[v]))
            .collect();
        let g = ModuleMap::new(q.module.clone(), self.z.clone(), comps)?;
        Ok((q.module, f, g))
    }

    /// The action of an endomorphism `r` of `Z` on `Ext¹(Z, X)` in quotient
    /// coordinates: `[c] ↦ [c ∘ r_K]` for a lift `r_K: K -> K`.
    pub fn end_action(&self, r: &ModuleMap<F>) -> Result<Mat<F>> {
        let field = self.z.field().clone();
        let cover = &self.pres.p0;
        let p0 = cover.map.src.clone();
        let mut lifts = Vec::with_capacity(cover.objs.len());
        for (j, &x) in cover.objs.iter().enumerate() {
            let want = r.comps[x].apply(&cover.gens[j]);
            let sol = cover.map.comps[x]
                .solve(&Mat::column(&field, want))?
                .ok_or_else(|| Error::VerificationFailed("cover is not surjective".into()))?;
            lifts.push(sol.col(0));
        }
        let r_p = yoneda_map(&p0, &cover.objs, &lifts, &p0);
        let inc = &self.pres.inclusion;
        let k = &self.pres.syzygy;
        let mut comps = Vec::with_capacity(k.dims().len());
        for v in 0..k.dims().len() {
            let solver = SpanSolver::new(inc.comps[v].clone());
            let img = r_p.comps[v].mul(&inc.comps[v]);
            let cols: Vec<Vec<F::Elem>> = img
                .columns()
                .iter()
                .map(|c| {
                    solver
                        .coords(c)
                        .ok_or_else(|| Error::VerificationFailed("lift leaves the syzygy".into()))
                })
                .collect::<Result<_>>()?;
            comps.push(Mat::from_columns(&field, k.dim(v), &cols));
        }
        let r_k = ModuleMap::new(k.clone(), k.clone(), comps)?;
        let d = self.dim();
        let cols: Vec<Vec<F::Elem>> = (0..d)
            .map(|i| {
                let mut e = vec![field.zero(); d];
                e[i] = field.one();
                self.class_of(&r_k.then(&self.cocycle(&e)))
            })
            .collect();
        Ok(Mat::from_columns(&field, d, &cols))
    }

    /// First canonical class killed by every element of `rad End(Z)`.
    pub fn socle_class(&self) -> Result<Vec<F::Elem>> {
        let field = self.z.field().clone();
        let end = hom_space(&self.z, &self.z)?;
        let alg = end_algebra(&self.z, &end)?;
        let rad = alg.radical_coords()?;
        let mut blocks = Vec::new();
        for coords in rad.columns() {
            blocks.push(self.end_action(&end.element(&coords))?);
        }
        let d = self.dim();
        let socle = if blocks.is_empty() {
            Mat::identity(&field, d)
        } else {
            let refs: Vec<&Mat<F>> = blocks.iter().collect();
            Mat::vstack(&field, d, &refs).kernel_basis()
        };
        if socle.cols() == 0 {
            return Err(Error::VerificationFailed("Ext¹ has zero socle".into()));
        }
        Ok(socle.col(0))
    }
}

#[derive(Debug, Clone)]
pub struct AlmostSplitSequence<F: Field> {
    pub x: Arc<CModule<F>>,
    pub y: Arc<CModule<F>>,
    pub z: Arc<CModule<F>>,
    pub f: ModuleMap<F>,
    pub g: ModuleMap<F>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCheck {
    pub index: usize,
    pub dims: String,
    pub right_coker: usize,
    pub right_expected: usize,
    pub left_coker: usize,
    pub left_expected: usize,
}

impl FamilyCheck {
    pub fn passed(&self) -> bool {
        self.right_coker == self.right_expected && self.left_coker == self.left_expected
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssReport {
    pub exact: bool,
    pub non_split: bool,
    pub entries: Vec<FamilyCheck>,
    pub covers_z: bool,
    pub covers_x: bool,
    pub complete: bool,
}

impl AssReport {
    /// All local checks pass and the family covers both ends.
    pub fn passed(&self) -> bool {
        self.exact
            && self.non_split
            && self.covers_z
            && self.covers_x
            && self.entries.iter().all(FamilyCheck::passed)
    }

    /// Passed against a family the caller vouched is complete.
    pub fn is_certificate(&self) -> bool {
        self.passed() && self.complete
    }
}

impl std::fmt::Display for AssReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "exact: {}", self.exact)?;
        writeln!(f, "non-split: {}", self.non_split)?;
        for e in &self.entries {
            writeln!(
                f,
                "  M{} {}: right coker {} (want {}), left coker {} (want {}) {}",
                e.index,
                e.dims,
                e.right_coker,
                e.right_expected,
                e.left_coker,
                e.left_expected,
                if e.passed() { "ok" } else { "FAIL" }
            )?;
        }
        writeln!(f, "family contains Z: {}", self.covers_z)?;
        writeln!(f, "family contains X: {}", self.covers_x)?;
        writeln!(f, "family complete: {}", self.complete)?;
        write!(
            f,
            "verdict: {}",
            if self.is_certificate() {
                "almost split (certified)"
            } else if self.passed() {
                "passes on the given family"
            } else {
                "not almost split"
            }
        )
    }
}

/// An indecomposable summand with its split inclusion and projection.
#[derive(Debug, Clone)]
pub struct Summand<F: Field> {
    pub module: Arc<CModule<F>>,
    pub inclusion: ModuleMap<F>,
    pub projection: ModuleMap<F>,
}

/// Krull–Schmidt decomposition through primitive idempotents of `End(M)`.
/// Each summand carries `projection ∘ inclusion = 1`; the idempotents
/// `inclusion ∘ projection` are orthogonal and sum to `1_M`.
pub fn decompose_module<F: Field>(m: &Arc<CModule<F>>, seed: u64) -> Result<Vec<Summand<F>>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let field = m.field().clone();
    let end = hom_space(m, m)?;
    let alg = end_algebra(m, &end)?;
    let idems = alg.primitive_idempotents(seed)?;
    let n = m.dims().len();
    let mut offsets = vec![0usize; n + 1];
    for x in 0..n {
        offsets[x + 1] = offsets[x] + m.dim(x);
    }
    let mut out = Vec::with_capacity(idems.len());
    for e in &idems {
        let comps: Vec<Mat<F>> = (0..n)
            .map(|x| e.block(offsets[x], offsets[x], m.dim(x), m.dim(x)))
            .collect();
        let e_map = ModuleMap::new(m.clone(), m.clone(), comps)?;
        let (sub, inc) = e_map.image();
        let mut pcomps = Vec::with_capacity(n);
        for x in 0..n {
            let solver = SpanSolver::new(inc.comps[x].clone());
            let cols: Vec<Vec<F::Elem>> = e_map.comps[x]
                .columns()
                .iter()
                .map(|c| solver.coords(c).expect("image of e"))
                .collect();
            pcomps.push(Mat::from_columns(&field, sub.dim(x), &cols));
        }
        let proj = ModuleMap::new(m.clone(), sub.clone(), pcomps)?;
        if !inc.then(&proj).comps.iter().all(Mat::is_identity) || proj.then(&inc) != e_map {
            return Err(Error::VerificationFailed("summand splitting".into()));
        }
        out.push(Summand {
            module: sub,
            inclusion: inc,
            projection: proj,
        });
    }
    let mut total = ModuleMap::zero(m.clone(), m.clone());
    for s in &out {
        total = total.add(&s.projection.then(&s.inclusion));
    }
    if total != ModuleMap::identity(m.clone()) {
        return Err(Error::VerificationFailed(
            "idempotents do not sum to 1".into(),
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ArVertex<F: Field> {
    pub module: Arc<CModule<F>>,
    pub projective: bool,
    pub injective: bool,
    /// Set when the vertex exceeded the cap and was not expanded.
    pub truncated: bool,
}

impl<F: Field> ArVertex<F> {
    pub fn label(&self) -> String {
        let mut s = self.module.dim_vector_string();
        if self.projective {
            s.push_str(" P");
        }
        if self.injective {
            s.push_str(" I");
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct ArQuiver<F: Field> {
    pub vertices: Vec<ArVertex<F>>,
    /// Irreducible maps `(from, to) -> multiplicity`.
    pub arrows: BTreeMap<(usize, usize), usize>,
    /// `(z, τz)` for every non-projective vertex that was expanded.
    pub tau: Vec<(usize, usize)>,
    /// The almost split sequence ending at each expanded non-projective.
    pub sequences: BTreeMap<usize, AlmostSplitSequence<F>>,
    pub closed: bool,
}

impl<F: Field> ArQuiver<F> {
    pub fn modules(&self) -> Vec<Arc<CModule<F>>> {
        self.vertices.iter().map(|v| v.module.clone()).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph ar {\n  rankdir=LR;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{}\"];\n", v.label()));
        }
        for (&(a, b), &m) in &self.arrows {
            if m == 1 {
                s.push_str(&format!("  v{a} -> v{b};\n"));
            } else {
                s.push_str(&format!("  v{a} -> v{b} [label=\"{m}\"];\n"));
            }
        }
        for &(z, x) in &self.tau {
            s.push_str(&format!("  v{z} -> v{x} [style=dashed, label=\"τ\"];\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Limits for knitting.
#[derive(Debug, Clone, Copy)]
pub struct KnitOptions {
    /// Vertices of larger total dimension are recorded but not expanded.
    pub dim_cap: usize,
    pub max_vertices: usize,
    pub seed: u64,
}

impl Default for KnitOptions {
    fn default() -> Self {
        KnitOptions {
            dim_cap: 24,
            max_vertices: 200,
            seed: 0,
        }
    }
}

struct Knitter<'a, F: Field> {
    mc: &'a ModuleCategory<F>,
    opts: KnitOptions,
    quiver: ArQuiver<F>,
    queue: VecDeque<usize>,
}

impl<F: Field> Knitter<'_, F> {
    fn add(&mut self, m: Arc<CModule<F>>) -> Result<usize> {
        for (i, v) in self.quiver.vertices.iter().enumerate() {
            if find_isomorphism(&m, &v.module)?.is_some() {
                return Ok(i);
            }
        }
        let projective = super::proj::is_projective(&m)?;
        let injective = self.mc.is_injective(&m)?;
        self.quiver.vertices.push(ArVertex {
            module: m,
            projective,
            injective,
            truncated: false,
        });
        let i = self.quiver.vertices.len() - 1;
        self.queue.push_back(i);
        Ok(i)
    }

    /// Adds the indecomposable summands of `m`, returning vertex -> multiplicity.
    fn add_summands(&mut self, m: &Arc<CModule<F>>) -> Result<BTreeMap<usize, usize>> {
        let mut counts = BTreeMap::new();
        for s in decompose_module(m, self.opts.seed)? {
            let i = self.add(s.module)?;
            *counts.entry(i).or_insert(0) += 1;
        }
        Ok(counts)
    }

    fn arrow(&mut self, from: usize, to: usize, mult: usize) {
        let e = self.quiver.arrows.entry((from, to)).or_insert(0);
        *e = (*e).max(mult);
    }

    fn expand(&mut self, i: usize) -> Result<()> {
        let v = self.quiver.vertices[i].clone();
        let z = v.module.clone();
        if v.projective {
            let rads = radical_spaces(&z)?;
            let (rad, _) = z.submodule(&rads)?;
            for (s, m) in self.add_summands(&rad)? {
                self.arrow(s, i, m);
            }
        } else {
            let seq = self.mc.almost_split_sequence(&z, self.opts.seed)?;
            let x = self.add(seq.x.clone())?;
            self.quiver.tau.push((i, x));
            for (s, m) in self.add_summands(&seq.y)? {
                self.arrow(x, s, m);
                self.arrow(s, i, m);
            }
            self.quiver.sequences.insert(i, seq);
        }
        if v.injective {
            let socs = socle_spaces(&z)?;
            let q = z.quotient(&socs)?;
            for (s, m) in self.add_summands(&q.module)? {
                self.arrow(i, s, m);
            }
        } else {
            let w = self.mc.tau_inverse(&z)?;
            self.add(w)?;
        }
        Ok(())
    }
}

/// Knits the Auslander–Reiten quiver from the indecomposable projectives.
/// `closed` is set when every discovered vertex was expanded.
pub fn ar_quiver<F: Field>(mc: &ModuleCategory<F>, opts: KnitOptions) -> Result<ArQuiver<F>> {
    let mut k = Knitter {
        mc,
        opts,
        quiver: ArQuiver {
            vertices: Vec::new(),
            arrows: BTreeMap::new(),
            tau: Vec::new(),
            sequences: BTreeMap::new(),
            closed: true,
        },
        queue: VecDeque::new(),
    };
    for x in 0..mc.cat.num_objects() {
        k.add(Arc::new(yoneda_projective(&mc.cat, x)))?;
    }
    while let Some(i) = k.queue.pop_front() {
        if k.quiver.vertices.len() > opts.max_vertices
            || k.quiver.vertices[i].module.total_dim() > opts.dim_cap
        {
            k.quiver.vertices[i].truncated = true;
            k.quiver.closed = false;
            continue;
        }
        k.expand(i)?;
    }
    Ok(k.quiver)
}
