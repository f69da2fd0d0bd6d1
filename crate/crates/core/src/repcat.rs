//! Representations of a bound quiver with values in modules over a
//! coefficient category, and their translation to modules over the tensor
//! category.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fincat::{
    basis_paths, rep_category, tensor_product, FinCategory, Sparse, TensorCategory,
};
use crate::linalg::{Field, Mat};
use crate::modcat::{hom_space, projective_cover, CModule, ModuleMap};
use crate::quiver::{BoundQuiver, LeftPathSpace, Path};

/// A bound quiver `Q_I`, a coefficient category `A`, and the tensor
/// category whose modules are representations of `Q_I` in `mod A`.
#[derive(Debug)]
pub struct RepSetting<F: Field> {
    pub bq: BoundQuiver,
    pub coeff: Arc<FinCategory<F>>,
    pub tensor: TensorCategory<F>,
    /// The left factor's basis, read as paths of `Q`.
    paths: Vec<Path>,
    /// Left basis index of each arrow.
    arrow_basis: Vec<usize>,
}

impl<F: Field> RepSetting<F> {
    pub fn new(bq: BoundQuiver, coeff: Arc<FinCategory<F>>) -> Result<Arc<Self>> {
        let left = rep_category(coeff.field(), &bq);
        let tensor = tensor_product(left, coeff.clone())?;
        let paths: Vec<Path> = basis_paths(&bq.opposite())
            .iter()
            .map(Path::opposite)
            .collect();
        let arrow_basis = (0..bq.quiver().arrows().len())
            .map(|a| {
                paths
                    .iter()
                    .position(|p| p.arrows == [a])
                    .expect("arrows survive an admissible ideal")
            })
            .collect();
        Ok(Arc::new(RepSetting {
            bq,
            coeff,
            tensor,
            paths,
            arrow_basis,
        }))
    }

    pub fn field(&self) -> &F {
        self.coeff.field()
    }

    pub fn num_vertices(&self) -> usize {
        self.bq.quiver().num_vertices()
    }

    /// Tensor object `(v, x)`.
    pub fn object(&self, v: usize, x: usize) -> usize {
        self.tensor.object(v, x)
    }

    fn unit_tensor(&self, left: &Sparse<F>, j: usize) -> Sparse<F> {
        let nr = self.coeff.basis().len();
        left.iter().map(|(i, c)| (i * nr + j, c.clone())).collect()
    }
}

/// `R(v)` per vertex and `R(a): R(s(a)) -> R(t(a))` per arrow.
#[derive(Clone)]
pub struct QRep<F: Field> {
    pub setting: Arc<RepSetting<F>>,
    pub vertex_modules: Vec<Arc<CModule<F>>>,
    pub arrow_maps: Vec<ModuleMap<F>>,
}

impl<F: Field> PartialEq for QRep<F> {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_modules == other.vertex_modules && self.arrow_maps == other.arrow_maps
    }
}

impl<F: Field> std::fmt::Debug for QRep<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims: Vec<&[usize]> = self.vertex_modules.iter().map(|m| m.dims()).collect();
        write!(f, "QRep{dims:?}")
    }
}

impl<F: Field> QRep<F> {
    pub fn new(
        setting: Arc<RepSetting<F>>,
        vertex_modules: Vec<Arc<CModule<F>>>,
        arrow_maps: Vec<ModuleMap<F>>,
    ) -> Result<Self> {
        let r = QRep {
            setting,
            vertex_modules,
            arrow_maps,
        };
        r.verify()?;
        Ok(r)
    }

    pub fn verify(&self) -> Result<()> {
        let s = &*self.setting;
        let q = s.bq.quiver();
        if self.vertex_modules.len() != q.num_vertices()
            || self.arrow_maps.len() != q.arrows().len()
        {
            return Err(Error::DimensionMismatch {
                op: "QRep",
                expected: format!("{} vertices, {} arrows", q.num_vertices(), q.arrows().len()),
                found: format!("{}, {}", self.vertex_modules.len(), self.arrow_maps.len()),
            });
        }
        for m in &self.vertex_modules {
            if **m.cat() != *s.coeff {
                return Err(Error::CategoryMismatch(
                    "vertex module over another category".into(),
                ));
            }
        }
        for (a, ar) in q.arrows().iter().enumerate() {
            let f = &self.arrow_maps[a];
            if f.src != self.vertex_modules[ar.src] || f.tgt != self.vertex_modules[ar.tgt] {
                return Err(Error::DimensionMismatch {
                    op: "QRep arrow",
                    expected: format!("R({}) -> R({})", q.vertices()[ar.src], q.vertices()[ar.tgt]),
                    found: format!("{:?} -> {:?}", f.src.dims(), f.tgt.dims()),
                });
            }
            f.verify()?;
        }
        for g in s.bq.ideal().generators() {
            if !self.path_map(g).is_zero() {
                return Err(Error::RelationViolated(g.display(q)));
            }
        }
        Ok(())
    }

    /// `R(p)` for a path `p`, composing arrow maps in traversal order.
    pub fn path_map(&self, p: &Path) -> ModuleMap<F> {
        let mut out = ModuleMap::identity(self.vertex_modules[p.source].clone());
        for &a in &p.arrows {
            out = out.then(&self.arrow_maps[a]);
        }
        out
    }

    pub fn zero(setting: Arc<RepSetting<F>>) -> Self {
        let z = Arc::new(CModule::zero(setting.coeff.clone()));
        let n = setting.num_vertices();
        let arrows = setting.bq.quiver().arrows().len();
        QRep {
            vertex_modules: vec![z.clone(); n],
            arrow_maps: vec![ModuleMap::zero(z.clone(), z); arrows],
            setting,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.vertex_modules.iter().map(|m| m.total_dim()).sum()
    }

    pub fn direct_sum(parts: &[&QRep<F>]) -> Result<(QRep<F>, Vec<RepMap<F>>, Vec<RepMap<F>>)> {
        let setting = parts.first().ok_or(Error::ZeroModule)?.setting.clone();
        let coeff = setting.coeff.clone();
        let field = setting.field().clone();
        let n = setting.num_vertices();
        let sums: Vec<_> = (0..n)
            .map(|v| {
                let ms: Vec<&CModule<F>> = parts.iter().map(|p| &*p.vertex_modules[v]).collect();
                CModule::direct_sum(&coeff, &ms)
            })
            .collect();
        let q = setting.bq.quiver();
        let arrow_maps = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, ar)| {
                let comps = (0..coeff.num_objects())
                    .map(|x| {
                        let blocks: Vec<&Mat<F>> =
                            parts.iter().map(|p| &p.arrow_maps[a].comps[x]).collect();
                        Mat::block_diag(&field, &blocks)
                    })
                    .collect();
                ModuleMap::new_unchecked(sums[ar.src].sum.clone(), sums[ar.tgt].sum.clone(), comps)
            })
            .collect();
        let sum = QRep {
            setting: setting.clone(),
            vertex_modules: sums.iter().map(|s| s.sum.clone()).collect(),
            arrow_maps,
        };
        let mut inj = Vec::with_capacity(parts.len());
        let mut proj = Vec::with_capacity(parts.len());
        for (k, p) in parts.iter().enumerate() {
            inj.push(RepMap {
                src: (*p).clone(),
                tgt: sum.clone(),
                comps: sums.iter().map(|s| s.inj[k].clone()).collect(),
            });
            proj.push(RepMap {
                src: sum.clone(),
                tgt: (*p).clone(),
                comps: sums.iter().map(|s| s.proj[k].clone()).collect(),
            });
        }
        Ok((sum, inj, proj))
    }
}

/// A morphism of representations: one module map per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMap<F: Field> {
    pub src: QRep<F>,
    pub tgt: QRep<F>,
    pub comps: Vec<ModuleMap<F>>,
}

impl<F: Field> RepMap<F> {
    pub fn verify(&self) -> Result<()> {
        let q = self.src.setting.bq.quiver();
        for c in &self.comps {
            c.verify()?;
        }
        for (a, ar) in q.arrows().iter().enumerate() {
            let lhs = self.src.arrow_maps[a].then(&self.comps[ar.tgt]);
            let rhs = self.comps[ar.src].then(&self.tgt.arrow_maps[a]);
            if lhs != rhs {
                return Err(Error::NotNatural(q.arrows()[a].id.clone()));
            }
        }
        Ok(())
    }

    /// Surjective at every vertex and every coefficient object.
    pub fn is_vertexwise_surjective(&self) -> bool {
        self.comps.iter().all(ModuleMap::is_epi)
    }
}

/// `Φ(R)((v, x)) = R(v)(x)`, `Φ(R)(p ⊗ f) = R(p)_{src f} ∘ R(v)(f)`.
pub fn phi<F: Field>(r: &QRep<F>) -> CModule<F> {
    let s = &*r.setting;
    let t = &s.tensor;
    let nl = s.num_vertices();
    let na = s.coeff.num_objects();
    let mut dims = vec![0; nl * na];
    for v in 0..nl {
        for x in 0..na {
            dims[t.object(v, x)] = r.vertex_modules[v].dim(x);
        }
    }
    let path_maps: Vec<ModuleMap<F>> = s.paths.iter().map(|p| r.path_map(p)).collect();
    let action = (0..t.cat.basis().len())
        .map(|b| {
            let (i, j) = t.split_morph(b);
            let v = s.paths[i].source;
            let sj = s.coeff.basis()[j].src;
            path_maps[i].comps[sj].mul(r.vertex_modules[v].act(j))
        })
        .collect();
    CModule::new_unchecked(t.cat.clone(), dims, action)
}

/// `Ψ(M)(v)(x) = M((v, x))`, `Ψ(M)(a)_x = M(a ⊗ 1_x)`.
pub fn psi<F: Field>(setting: &Arc<RepSetting<F>>, m: &CModule<F>) -> Result<QRep<F>> {
    let s = &**setting;
    let t = &s.tensor;
    if **m.cat() != *t.cat {
        return Err(Error::CategoryMismatch(
            "module is not over the tensor category".into(),
        ));
    }
    let nl = s.num_vertices();
    let na = s.coeff.num_objects();
    let left = &t.left;
    let vertex_modules: Vec<Arc<CModule<F>>> = (0..nl)
        .map(|v| {
            let dims = (0..na).map(|x| m.dim(t.object(v, x))).collect();
            let action = s
                .coeff
                .basis()
                .iter()
                .enumerate()
                .map(|(j, mor)| {
                    m.act_sparse(
                        t.object(v, mor.src),
                        t.object(v, mor.tgt),
                        &s.unit_tensor(left.unit(v), j),
                    )
                })
                .collect();
            Arc::new(CModule::new_unchecked(s.coeff.clone(), dims, action))
        })
        .collect();
    let q = s.bq.quiver();
    let arrow_maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, ar)| {
            let i = s.arrow_basis[a];
            let comps = (0..na)
                .map(|x| {
                    let mut mat = Mat::zeros(
                        s.field(),
                        m.dim(t.object(ar.tgt, x)),
                        m.dim(t.object(ar.src, x)),
                    );
                    for (j, c) in s.coeff.unit(x) {
                        mat.add_scaled(c, m.act(t.morph(i, *j)));
                    }
                    mat
                })
                .collect();
            ModuleMap::new_unchecked(
                vertex_modules[ar.src].clone(),
                vertex_modules[ar.tgt].clone(),
                comps,
            )
        })
        .collect();
    QRep::new(setting.clone(), vertex_modules, arrow_maps)
}

/// A representation of the left path space at `v` in `mod A`: a module per
/// path and a map per step `p -> ap`.
#[derive(Debug, Clone)]
pub struct PathSpaceRep<F: Field> {
    pub space: LeftPathSpace,
    pub modules: Vec<Arc<CModule<F>>>,
    pub maps: Vec<ModuleMap<F>>,
}

impl<F: Field> PathSpaceRep<F> {
    pub fn verify(&self) -> Result<()> {
        for (k, st) in self.space.steps.iter().enumerate() {
            let f = &self.maps[k];
            if f.src != self.modules[st.from] || f.tgt != self.modules[st.to] {
                return Err(Error::DimensionMismatch {
                    op: "path space map",
                    expected: "M(p) -> M(ap)".into(),
                    found: format!("{:?} -> {:?}", f.src.dims(), f.tgt.dims()),
                });
            }
            f.verify()?;
        }
        Ok(())
    }
}

/// `g*_v(N)`: `N` at every path, identities along steps.
pub fn g_star_v<F: Field>(
    setting: &RepSetting<F>,
    v: usize,
    n: &Arc<CModule<F>>,
) -> PathSpaceRep<F> {
    let space = setting.bq.left_path_space(v);
    let modules = vec![n.clone(); space.paths.len()];
    let maps = vec![ModuleMap::identity(n.clone()); space.steps.len()];
    PathSpaceRep {
        space,
        modules,
        maps,
    }
}

/// `t*_v(M)(w) = ⊕_{p: v -> w} M(p)`, with the block `(ap, p)` of `R(a)`
/// equal to `M(p -> ap)` and all other blocks zero.
pub fn t_star_v<F: Field>(setting: &Arc<RepSetting<F>>, m: &PathSpaceRep<F>) -> Result<QRep<F>> {
    m.verify()?;
    let s = &**setting;
    let coeff = &s.coeff;
    let q = s.bq.quiver();
    let paths = &m.space.paths;
    let at: Vec<Vec<usize>> = (0..q.num_vertices())
        .map(|w| (0..paths.len()).filter(|&i| paths[i].target == w).collect())
        .collect();
    let sums: Vec<_> = at
        .iter()
        .map(|idx| {
            let parts: Vec<&CModule<F>> = idx.iter().map(|&i| &*m.modules[i]).collect();
            CModule::direct_sum(coeff, &parts)
        })
        .collect();
    let arrow_maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, ar)| {
            let mut out = ModuleMap::zero(sums[ar.src].sum.clone(), sums[ar.tgt].sum.clone());
            for (k, st) in m.space.steps.iter().enumerate() {
                if st.arrow != a {
                    continue;
                }
                let col = at[ar.src]
                    .iter()
                    .position(|&i| i == st.from)
                    .expect("source block");
                let row = at[ar.tgt]
                    .iter()
                    .position(|&i| i == st.to)
                    .expect("target block");
                let block = sums[ar.src].proj[col]
                    .then(&m.maps[k])
                    .then(&sums[ar.tgt].inj[row]);
                out = out.add(&block);
            }
            out
        })
        .collect();
    QRep::new(
        setting.clone(),
        sums.iter().map(|s| s.sum.clone()).collect(),
        arrow_maps,
    )
}

/// `f*_v = t*_v ∘ g*_v`.
pub fn f_star_v<F: Field>(
    setting: &Arc<RepSetting<F>>,
    v: usize,
    n: &Arc<CModule<F>>,
) -> Result<QRep<F>> {
    t_star_v(setting, &g_star_v(setting, v, n))
}

/// All morphisms `R -> S`, solved through `Φ`.
pub fn rep_hom_space<F: Field>(r: &QRep<F>, s: &QRep<F>) -> Result<Vec<RepMap<F>>> {
    let pr = Arc::new(phi(r));
    let ps = Arc::new(phi(s));
    let hs = hom_space(&pr, &ps)?;
    let st = &*r.setting;
    let na = st.coeff.num_objects();
    Ok(hs
        .basis
        .iter()
        .map(|h| {
            let comps = (0..st.num_vertices())
                .map(|v| {
                    let c = (0..na).map(|x| h.comps[st.object(v, x)].clone()).collect();
                    ModuleMap::new_unchecked(
                        r.vertex_modules[v].clone(),
                        s.vertex_modules[v].clone(),
                        c,
                    )
                })
                .collect();
            RepMap {
                src: r.clone(),
                tgt: s.clone(),
                comps,
            }
        })
        .collect())
}

/// `η: N -> f*_v(N)(v)`, inclusion at the trivial path block.
pub fn unit_map<F: Field>(fv: &QRep<F>, v: usize, n: &Arc<CModule<F>>) -> ModuleMap<F> {
    // the trivial path comes first among paths from v ending at v
    let field = n.field().clone();
    let tgt = fv.vertex_modules[v].clone();
    let comps = (0..n.dims().len())
        .map(|x| {
            let mut m = Mat::zeros(&field, tgt.dim(x), n.dim(x));
            m.set_block(0, 0, &Mat::identity(&field, n.dim(x)));
            m
        })
        .collect();
    ModuleMap::new_unchecked(n.clone(), tgt, comps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// `dim Hom(f*_v(N), R)`.
    pub rep_side: usize,
    /// `dim Hom(N, R(v))`.
    pub module_side: usize,
    /// Rank of `φ ↦ φ_v ∘ η` on a basis of the left side.
    pub transpose_rank: usize,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.rep_side == self.module_side && self.transpose_rank == self.module_side
    }
}

pub fn check_adjunction<F: Field>(
    setting: &Arc<RepSetting<F>>,
    v: usize,
    n: &Arc<CModule<F>>,
    r: &QRep<F>,
) -> Result<AdjunctionReport> {
    let fv = f_star_v(setting, v, n)?;
    let left = rep_hom_space(&fv, r)?;
    let right = hom_space(n, &r.vertex_modules[v])?;
    let eta = unit_map(&fv, v, n);
    let field = setting.field().clone();
    let images: Vec<Vec<F::Elem>> = left
        .iter()
        .map(|phi_map| {
            let t = eta.then(&phi_map.comps[v]);
            right.coords(&t).expect("transpose is natural")
        })
        .collect();
    let transpose_rank = if images.is_empty() {
        0
    } else {
        Mat::from_columns(&field, right.dim(), &images).rank()
    };
    Ok(AdjunctionReport {
        rep_side: left.len(),
        module_side: right.dim(),
        transpose_rank,
    })
}

/// The map `f*_v(N) -> R` adjoint to `h: N -> R(v)`: on the block of a
/// path `p: v -> w` it is `R(p) ∘ h`.
pub fn adjoint_map<F: Field>(
    fv: &QRep<F>,
    v: usize,
    h: &ModuleMap<F>,
    r: &QRep<F>,
) -> Result<RepMap<F>> {
    let s = &*r.setting;
    let space = s.bq.left_path_space(v);
    let q = s.bq.quiver();
    let n = h.src.clone();
    let coeff = &s.coeff;
    let mut comps = Vec::with_capacity(q.num_vertices());
    for w in 0..q.num_vertices() {
        let idx: Vec<usize> = (0..space.paths.len())
            .filter(|&i| space.paths[i].target == w)
            .collect();
        let parts: Vec<&CModule<F>> = idx.iter().map(|_| &*n).collect();
        let ds = CModule::direct_sum(coeff, &parts);
        let mut out = ModuleMap::zero(fv.vertex_modules[w].clone(), r.vertex_modules[w].clone());
        for (k, &i) in idx.iter().enumerate() {
            let piece = ds.proj[k].then(h).then(&r.path_map(&space.paths[i]));
            let piece = ModuleMap::new_unchecked(
                fv.vertex_modules[w].clone(),
                piece.tgt.clone(),
                piece.comps,
            );
            out = out.add(&piece);
        }
        comps.push(out);
    }
    let m = RepMap {
        src: fv.clone(),
        tgt: r.clone(),
        comps,
    };
    m.verify()?;
    Ok(m)
}

/// `⊕_v f*_v(P_v) -> R` built from projective covers `P_v -> R(v)`.
#[derive(Debug, Clone)]
pub struct Lemma2Cover<F: Field> {
    pub summands: Vec<(usize, QRep<F>)>,
    pub map: RepMap<F>,
}

pub fn lemma2_cover<F: Field>(r: &QRep<F>) -> Result<Lemma2Cover<F>> {
    let s = &r.setting;
    let n = s.num_vertices();
    let mut summands = Vec::new();
    let mut pieces = Vec::new();
    for v in 0..n {
        if r.vertex_modules[v].is_zero() {
            continue;
        }
        let cover = projective_cover(&r.vertex_modules[v])?;
        let fv = f_star_v(s, v, &cover.map.src)?;
        pieces.push(adjoint_map(&fv, v, &cover.map, r)?);
        summands.push((v, fv));
    }
    let map = if summands.is_empty() {
        let z = QRep::zero(s.clone());
        RepMap {
            comps: (0..n)
                .map(|v| ModuleMap::zero(z.vertex_modules[v].clone(), r.vertex_modules[v].clone()))
                .collect(),
            src: z,
            tgt: r.clone(),
        }
    } else {
        let parts: Vec<&QRep<F>> = summands.iter().map(|(_, q)| q).collect();
        let (sum, _, proj) = QRep::direct_sum(&parts)?;
        let mut comps: Vec<ModuleMap<F>> = (0..n)
            .map(|v| ModuleMap::zero(sum.vertex_modules[v].clone(), r.vertex_modules[v].clone()))
            .collect();
        for (k, piece) in pieces.iter().enumerate() {
            for v in 0..n {
                comps[v] = comps[v].add(&proj[k].comps[v].then(&piece.comps[v]));
            }
        }
        RepMap {
            src: sum,
            tgt: r.clone(),
            comps,
        }
    };
    map.verify()?;
    if !map.is_vertexwise_surjective() {
        return Err(Error::VerificationFailed("cover is not surjective".into()));
    }
    Ok(Lemma2Cover { summands, map })
}

/// Random invertible matrix by rejection.
pub fn random_invertible<F: Field>(field: &F, n: usize, rng: &mut ChaCha8Rng) -> Mat<F> {
    loop {
        let data = (0..n * n).map(|_| field.random_elem(rng)).collect();
        let m = Mat::from_vec(field, n, n, data).expect("square");
        if m.rank() == n {
            return m;
        }
    }
}

/// `S_x M(b) S_y^{-1}` for random invertible `S_x`.
pub fn conjugate<F: Field>(m: &CModule<F>, rng: &mut ChaCha8Rng) -> CModule<F> {
    let field = m.field().clone();
    let cat = m.cat();
    let s: Vec<Mat<F>> = m
        .dims()
        .iter()
        .map(|&d| random_invertible(&field, d, rng))
        .collect();
    let inv: Vec<Mat<F>> = s.iter().map(|x| x.inverse().expect("invertible")).collect();
    let action = cat
        .basis()
        .iter()
        .enumerate()
        .map(|(b, mor)| s[mor.src].mul(m.act(b)).mul(&inv[mor.tgt]))
        .collect();
    CModule::new_unchecked(cat.clone(), m.dims().to_vec(), action)
}

/// A random representation: the cokernel of a random map between sums of
/// representables of the tensor category, conjugated by random bases.
/// Retries until every `R(v)(x)` has dimension at most `max_dim`.
pub fn random_rep<F: Field>(
    setting: &Arc<RepSetting<F>>,
    max_dim: usize,
    rng: &mut ChaCha8Rng,
) -> QRep<F> {
    use crate::modcat::{projective_sum, yoneda_map};
    let t = &setting.tensor.cat;
    let field = setting.field().clone();
    let n = t.num_objects();
    loop {
        let k0 = rng.gen_range(1..=2);
        let k1 = rng.gen_range(0..=2);
        let objs0: Vec<usize> = (0..k0).map(|_| rng.gen_range(0..n)).collect();
        let objs1: Vec<usize> = (0..k1).map(|_| rng.gen_range(0..n)).collect();
        let p0 = projective_sum(t, &objs0);
        let p1 = projective_sum(t, &objs1);
        let gens: Vec<Vec<F::Elem>> = objs1
            .iter()
            .map(|&y| (0..p0.dim(y)).map(|_| field.random_elem(rng)).collect())
            .collect();
        let d = yoneda_map(&p1, &objs1, &gens, &p0);
        let m = d.cokernel().module;
        if m.is_zero() || m.dims().iter().any(|&x| x > max_dim) {
            continue;
        }
        let m = conjugate(&m, rng);
        return psi(setting, &m).expect("modules over the tensor category are representations");
    }
}
