//! n-complexes on an interval or window of degrees and cyclic complexes, as
//! representations of bound quivers in `mod A`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::linalg::{Field, Mat};
use crate::modcat::{hom_space, projective_cover, CModule, ModuleMap};
use crate::quiver::{BoundQuiver, MonomialIdeal, Quiver};
use crate::repcat::{phi, psi, rep_hom_space, QRep, RepMap, RepSetting};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Degrees `1..=m`.
    Interval(usize),
    /// Degrees `lo..=hi`.
    Window(i64, i64),
    /// Degrees `ℤ/N`.
    Cyclic(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NComplexSpec {
    pub n: usize,
    pub shape: Shape,
}

impl fmt::Display for NComplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            Shape::Interval(m) => write!(f, "{}-complexes on [1, {m}]", self.n),
            Shape::Window(lo, hi) => write!(f, "{}-complexes on [{lo}, {hi}]", self.n),
            Shape::Cyclic(k) => write!(f, "Z/{k}-cyclic complexes"),
        }
    }
}

impl NComplexSpec {
    pub fn interval(n: usize, m: usize) -> Result<Self> {
        Self::validated(n, Shape::Interval(m))
    }

    pub fn window(n: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::validated(n, Shape::Window(lo, hi))
    }

    /// The nilpotency degree of a cyclic complex is 2; `n` is recorded as
    /// the order.
    pub fn cyclic(order: usize) -> Result<Self> {
        Self::validated(order, Shape::Cyclic(order))
    }

    fn validated(n: usize, shape: Shape) -> Result<Self> {
        let s = NComplexSpec { n, shape };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self.shape {
            Shape::Interval(m) if self.n < 2 || m == 0 => Err(Error::InvalidSpec(format!(
                "interval needs n >= 2 and m >= 1, got n = {}, m = {m}",
                self.n
            ))),
            Shape::Window(lo, hi) if self.n < 2 || lo > hi => Err(Error::InvalidSpec(format!(
                "window needs n >= 2 and lo <= hi, got n = {}, [{lo}, {hi}]",
                self.n
            ))),
            Shape::Cyclic(0) => Err(Error::InvalidSpec("cyclic order must be positive".into())),
            _ => Ok(()),
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.shape, Shape::Cyclic(_))
    }

    pub fn len(&self) -> usize {
        match self.shape {
            Shape::Interval(m) => m,
            Shape::Window(lo, hi) => (hi - lo + 1) as usize,
            Shape::Cyclic(k) => k,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lowest(&self) -> i64 {
        match self.shape {
            Shape::Interval(_) => 1,
            Shape::Window(lo, _) => lo,
            Shape::Cyclic(_) => 0,
        }
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.lowest() + idx as i64
    }

    pub fn index(&self, deg: i64) -> Option<usize> {
        match self.shape {
            Shape::Cyclic(k) => Some(deg.rem_euclid(k as i64) as usize),
            _ => {
                let i = deg - self.lowest();
                (i >= 0 && (i as usize) < self.len()).then_some(i as usize)
            }
        }
    }

    /// Index `idx + k` when it exists.
    pub fn shift(&self, idx: usize, k: i64) -> Option<usize> {
        self.index(self.degree(idx) + k)
    }

    /// Length of a vanishing composite of differentials.
    pub fn relation_length(&self) -> usize {
        if self.is_cyclic() {
            2
        } else {
            self.n
        }
    }

    /// Arrow leaving index `idx`, if any.
    pub fn arrow_from(&self, idx: usize) -> Option<usize> {
        match self.shape {
            Shape::Cyclic(_) => Some(idx),
            _ => (idx + 1 < self.len()).then_some(idx),
        }
    }
}

/// The bound quiver whose representations are the complexes of `spec`.
pub fn build_category(spec: &NComplexSpec) -> Result<BoundQuiver> {
    spec.validate()?;
    let q = match spec.shape {
        Shape::Cyclic(k) => Quiver::cyclic(k),
        _ => {
            let vs: Vec<String> = (0..spec.len())
                .map(|i| spec.degree(i).to_string())
                .collect();
            let arrows: Vec<(String, String, String)> = (0..spec.len().saturating_sub(1))
                .map(|i| {
                    let d = spec.degree(i);
                    (format!("a_{d}"), d.to_string(), (d + 1).to_string())
                })
                .collect();
            Quiver::new(&vs, &arrows)?
        }
    };
    let ideal = MonomialIdeal::all_paths_of_length(&q, spec.relation_length())?;
    BoundQuiver::new(q, ideal)
}

/// The category of complexes of a given shape over a coefficient category.
#[derive(Debug, Clone)]
pub struct ComplexCategory<F: Field> {
    pub spec: NComplexSpec,
    pub setting: Arc<RepSetting<F>>,
}

impl<F: Field> ComplexCategory<F> {
    pub fn new(spec: NComplexSpec, coeff: Arc<FinCategory<F>>) -> Result<Self> {
        let bq = build_category(&spec)?;
        Ok(ComplexCategory {
            spec,
            setting: RepSetting::new(bq, coeff)?,
        })
    }

    pub fn coeff(&self) -> &Arc<FinCategory<F>> {
        &self.setting.coeff
    }

    pub fn field(&self) -> &F {
        self.setting.field()
    }

    fn zero_module(&self) -> Arc<CModule<F>> {
        Arc::new(CModule::zero(self.coeff().clone()))
    }

    /// `components[i]` sits in degree `spec.degree(i)`; `differentials[i]`
    /// leaves it.
    pub fn complex(
        &self,
        components: Vec<Arc<CModule<F>>>,
        differentials: Vec<ModuleMap<F>>,
    ) -> Result<NComplex<F>> {
        let rep = QRep::new(self.setting.clone(), components, differentials)?;
        Ok(NComplex {
            spec: self.spec,
            rep,
        })
    }

    pub fn zero(&self) -> NComplex<F> {
        NComplex {
            spec: self.spec,
            rep: QRep::zero(self.setting.clone()),
        }
    }

    /// `m` in degree `deg`, zero elsewhere.
    pub fn stalk(&self, deg: i64, m: &Arc<CModule<F>>) -> Result<NComplex<F>> {
        let i = self.degree_index(deg)?;
        let z = self.zero_module();
        let mut comps = vec![z; self.spec.len()];
        comps[i] = m.clone();
        self.with_zero_differentials(comps)
    }

    fn with_zero_differentials(&self, comps: Vec<Arc<CModule<F>>>) -> Result<NComplex<F>> {
        let q = self.setting.bq.quiver();
        let ds = q
            .arrows()
            .iter()
            .map(|a| ModuleMap::zero(comps[a.src].clone(), comps[a.tgt].clone()))
            .collect();
        self.complex(comps, ds)
    }

    fn degree_index(&self, deg: i64) -> Result<usize> {
        self.spec
            .index(deg)
            .ok_or_else(|| Error::InvalidSpec(format!("degree {deg} is outside {}", self.spec)))
    }

    /// `J_j(M)`: `M` in degrees `j, ..., j+n-1` joined by identities, cut off
    /// at the top of a window. For cyclic order 1 it is `M ⊕ M` with the
    /// strictly lower triangular differential; for larger cyclic order it is
    /// `M -> M` in degrees `j, j+1`.
    pub fn interval_j(&self, j: i64, m: &Arc<CModule<F>>) -> Result<NComplex<F>> {
        let start = self.degree_index(j)?;
        let len = self.spec.len();
        let z = self.zero_module();
        let q = self.setting.bq.quiver();
        if let Shape::Cyclic(1) = self.spec.shape {
            let ds = CModule::direct_sum(self.coeff(), &[&**m, &**m]);
            let d = ds.proj[0].then(&ds.inj[1]);
            return self.complex(vec![ds.sum.clone()], vec![d]);
        }
        let span = if self.spec.is_cyclic() {
            2
        } else {
            self.spec.n
        };
        let mut support = vec![false; len];
        let mut comps = vec![z; len];
        for k in 0..span {
            if let Some(i) = self.spec.shift(start, k as i64) {
                support[i] = true;
                comps[i] = m.clone();
            }
        }
        let last = self.spec.shift(start, span as i64 - 1);
        let ds = q
            .arrows()
            .iter()
            .map(|ar| {
                if support[ar.src] && support[ar.tgt] && last != Some(ar.src) {
                    ModuleMap::identity(m.clone())
                } else {
                    ModuleMap::zero(comps[ar.src].clone(), comps[ar.tgt].clone())
                }
            })
            .collect();
        self.complex(comps, ds)
    }

    /// `J_j(f)` for a module map `f`.
    fn interval_j_map(&self, j: i64, f: &ModuleMap<F>) -> Result<RepMap<F>> {
        let src = self.interval_j(j, &f.src)?;
        let tgt = self.interval_j(j, &f.tgt)?;
        let comps = (0..self.spec.len())
            .map(|i| {
                if src.rep.vertex_modules[i].is_zero() {
                    ModuleMap::zero(
                        src.rep.vertex_modules[i].clone(),
                        tgt.rep.vertex_modules[i].clone(),
                    )
                } else if let Shape::Cyclic(1) = self.spec.shape {
                    let field = self.field().clone();
                    let comps = f
                        .comps
                        .iter()
                        .map(|c| Mat::block_diag(&field, &[c, c]))
                        .collect();
                    ModuleMap::new_unchecked(
                        src.rep.vertex_modules[i].clone(),
                        tgt.rep.vertex_modules[i].clone(),
                        comps,
                    )
                } else {
                    f.clone()
                }
            })
            .collect();
        let map = RepMap {
            src: src.rep,
            tgt: tgt.rep,
            comps,
        };
        map.verify()?;
        Ok(map)
    }

    pub fn from_module(&self, m: &CModule<F>) -> Result<NComplex<F>> {
        Ok(NComplex {
            spec: self.spec,
            rep: psi(&self.setting, m)?,
        })
    }

    /// The composite of `k` differentials starting at index `i`, or `None`
    /// when it leaves the window.
    fn d_power(&self, x: &NComplex<F>, i: usize, k: usize) -> Option<ModuleMap<F>> {
        let mut out = ModuleMap::identity(x.rep.vertex_modules[i].clone());
        let mut cur = i;
        for _ in 0..k {
            let a = self.spec.arrow_from(cur)?;
            out = out.then(&x.rep.arrow_maps[a]);
            cur = self.setting.bq.quiver().arrows()[a].tgt;
        }
        Some(out)
    }

    /// `p: ⊕_j J_j(Z^j) -> Z`; the copy at `j` maps to degree `j + k` by the
    /// composite of `k` differentials.
    pub fn coil_epi(&self, z: &NComplex<F>) -> Result<CoilEpi<F>> {
        let len = self.spec.len();
        let mut degrees = Vec::new();
        let mut pieces: Vec<QRep<F>> = Vec::new();
        let mut maps: Vec<Vec<ModuleMap<F>>> = Vec::new();
        for j in 0..len {
            let zj = &z.rep.vertex_modules[j];
            if zj.is_zero() {
                continue;
            }
            let deg = self.spec.degree(j);
            let jj = self.interval_j(deg, zj)?;
            let comps = self.coil_component(z, j, &jj)?;
            degrees.push(deg);
            pieces.push(jj.rep);
            maps.push(comps);
        }
        if pieces.is_empty() {
            let zero = self.zero();
            let comps = (0..len)
                .map(|i| {
                    ModuleMap::zero(
                        zero.rep.vertex_modules[i].clone(),
                        z.rep.vertex_modules[i].clone(),
                    )
                })
                .collect();
            return Ok(CoilEpi {
                degrees,
                inclusions: Vec::new(),
                source: zero.clone(),
                map: RepMap {
                    src: zero.rep,
                    tgt: z.rep.clone(),
                    comps,
                },
            });
        }
        let refs: Vec<&QRep<F>> = pieces.iter().collect();
        let (sum, inclusions, proj) = QRep::direct_sum(&refs)?;
        let mut comps: Vec<ModuleMap<F>> = (0..len)
            .map(|i| {
                ModuleMap::zero(
                    sum.vertex_modules[i].clone(),
                    z.rep.vertex_modules[i].clone(),
                )
            })
            .collect();
        for (k, m) in maps.iter().enumerate() {
            for i in 0..len {
                comps[i] = comps[i].add(&proj[k].comps[i].then(&m[i]));
            }
        }
        let map = RepMap {
            src: sum.clone(),
            tgt: z.rep.clone(),
            comps,
        };
        map.verify()?;
        if !map.is_vertexwise_surjective() {
            return Err(Error::VerificationFailed(
                "coil map is not surjective".into(),
            ));
        }
        Ok(CoilEpi {
            degrees,
            inclusions,
            source: NComplex {
                spec: self.spec,
                rep: sum,
            },
            map,
        })
    }

    fn coil_component(
        &self,
        z: &NComplex<F>,
        j: usize,
        jj: &NComplex<F>,
    ) -> Result<Vec<ModuleMap<F>>> {
        let len = self.spec.len();
        let mut out: Vec<ModuleMap<F>> = (0..len)
            .map(|i| {
                ModuleMap::zero(
                    jj.rep.vertex_modules[i].clone(),
                    z.rep.vertex_modules[i].clone(),
                )
            })
            .collect();
        if let Shape::Cyclic(1) = self.spec.shape {
            // (1, d) on Z^0 ⊕ Z^0
            let zj = &z.rep.vertex_modules[0];
            let ds = CModule::direct_sum(self.coeff(), &[&**zj, &**zj]);
            let m = ds.proj[0].add(&ds.proj[1].then(&z.rep.arrow_maps[0]));
            out[0] =
                ModuleMap::new_unchecked(jj.rep.vertex_modules[0].clone(), zj.clone(), m.comps);
            return Ok(out);
        }
        let span = if self.spec.is_cyclic() {
            2
        } else {
            self.spec.n
        };
        for k in 0..span {
            let Some(i) = self.spec.shift(j, k as i64) else {
                break;
            };
            if jj.rep.vertex_modules[i].is_zero() {
                break;
            }
            if let Some(d) = self.d_power(z, j, k) {
                out[i] = d;
            }
        }
        Ok(out)
    }

    /// Coordinates of `s`-maps `Z'^i -> Z^{i-(r-1)}` whose homotopy sum
    /// `Σ_k d^{r-1-k} s d^k` is `l`, for `r` the relation length.
    pub fn null_homotopy(&self, l: &RepMap<F>) -> Result<Option<Vec<ModuleMap<F>>>> {
        let (zp, z) = (
            NComplex {
                spec: self.spec,
                rep: l.src.clone(),
            },
            NComplex {
                spec: self.spec,
                rep: l.tgt.clone(),
            },
        );
        let r = self.spec.relation_length();
        let len = self.spec.len();
        let field = self.field().clone();
        let mut cands: Vec<(usize, ModuleMap<F>)> = Vec::new();
        for j in 0..len {
            let Some(t) = self.spec.shift(j, -(r as i64 - 1)) else {
                continue;
            };
            let hs = hom_space(&zp.rep.vertex_modules[j], &z.rep.vertex_modules[t])?;
            for b in hs.basis {
                cands.push((j, b));
            }
        }
        let target = flatten_rep(l);
        let cols: Vec<Vec<F::Elem>> = cands
            .iter()
            .map(|(j, s)| flatten_rep(&self.homotopy_sum(&zp, &z, &[(*j, s.clone())])))
            .collect();
        if cols.is_empty() {
            return Ok(if target.iter().all(|x| field.is_zero(x)) {
                Some(Vec::new())
            } else {
                None
            });
        }
        let a = Mat::from_columns(&field, target.len(), &cols);
        let Some(sol) = a.solve(&Mat::column(&field, target))? else {
            return Ok(None);
        };
        let coeffs = sol.col(0);
        let mut s: Vec<ModuleMap<F>> = (0..len)
            .map(|j| {
                let t = self.spec.shift(j, -(r as i64 - 1)).unwrap_or(j);
                ModuleMap::zero(
                    zp.rep.vertex_modules[j].clone(),
                    z.rep.vertex_modules[t].clone(),
                )
            })
            .collect();
        for ((j, b), c) in cands.iter().zip(&coeffs) {
            s[*j] = s[*j].add(&b.scale(c));
        }
        Ok(Some(s))
    }

    /// `Σ_k d^{r-1-k} s d^k` for the given degree pieces of `s`.
    pub fn homotopy_sum(
        &self,
        zp: &NComplex<F>,
        z: &NComplex<F>,
        s: &[(usize, ModuleMap<F>)],
    ) -> RepMap<F> {
        let r = self.spec.relation_length();
        let len = self.spec.len();
        let mut comps: Vec<ModuleMap<F>> = (0..len)
            .map(|i| {
                ModuleMap::zero(
                    zp.rep.vertex_modules[i].clone(),
                    z.rep.vertex_modules[i].clone(),
                )
            })
            .collect();
        for (j, sj) in s {
            let t = sj_target(self, *j);
            for k in 0..r {
                // degree i with i + k = j
                let Some(i) = self.spec.shift(*j, -(k as i64)) else {
                    continue;
                };
                let Some(before) = self.d_power(zp, i, k) else {
                    continue;
                };
                if self.spec.shift(i, k as i64) != Some(*j) {
                    continue;
                }
                let Some(after) = self.d_power(z, t, r - 1 - k) else {
                    continue;
                };
                if self.spec.shift(t, (r - 1 - k) as i64) != Some(i) {
                    continue;
                }
                comps[i] = comps[i].add(&before.then(sj).then(&after));
            }
        }
        RepMap {
            src: zp.rep.clone(),
            tgt: z.rep.clone(),
            comps,
        }
    }

    /// `l = p ∘ l'` for null-homotopic `l: Z' -> Z` and the coil epi of `Z`.
    pub fn factor_null_homotopy(&self, l: &RepMap<F>, p: &CoilEpi<F>) -> Result<Factorization<F>> {
        let homotopy = self.null_homotopy(l)?.ok_or(Error::NotNullHomotopic)?;
        let field = self.field().clone();
        let basis = rep_hom_space(&l.src, &p.source.rep)?;
        let target = flatten_rep(l);
        let cols: Vec<Vec<F::Elem>> = basis
            .iter()
            .map(|h| flatten_rep(&compose_rep(h, &p.map)))
            .collect();
        let lifted = if cols.is_empty() {
            if target.iter().all(|x| field.is_zero(x)) {
                zero_rep_map(&l.src, &p.source.rep)
            } else {
                return Err(Error::NoFactorization(
                    "no maps into the coil source".into(),
                ));
            }
        } else {
            let a = Mat::from_columns(&field, target.len(), &cols);
            let sol = a
                .solve(&Mat::column(&field, target))?
                .ok_or_else(|| Error::NoFactorization("l does not factor through p".into()))?;
            let mut out = zero_rep_map(&l.src, &p.source.rep);
            for (h, c) in basis.iter().zip(sol.col(0)) {
                out = add_rep(&out, &scale_rep(h, &c));
            }
            out
        };
        let residual = sub_rep(&compose_rep(&lifted, &p.map), l);
        if !residual.comps.iter().all(ModuleMap::is_zero) {
            return Err(Error::VerificationFailed(
                "nonzero factorization residual".into(),
            ));
        }
        Ok(Factorization {
            lift: lifted,
            homotopy,
        })
    }

    /// Sets every component below `floor` to zero.
    pub fn hard_truncate(&self, x: &NComplex<F>, floor: i64) -> Result<NComplex<F>> {
        if self.spec.is_cyclic() {
            return Err(Error::InvalidSpec("hard truncation needs a window".into()));
        }
        let z = self.zero_module();
        let comps: Vec<Arc<CModule<F>>> = (0..self.spec.len())
            .map(|i| {
                if self.spec.degree(i) >= floor {
                    x.rep.vertex_modules[i].clone()
                } else {
                    z.clone()
                }
            })
            .collect();
        let q = self.setting.bq.quiver();
        let ds = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, ar)| {
                if self.spec.degree(ar.src) >= floor {
                    x.rep.arrow_maps[a].clone()
                } else {
                    ModuleMap::zero(comps[ar.src].clone(), comps[ar.tgt].clone())
                }
            })
            .collect();
        self.complex(comps, ds)
    }

    /// `g = (evaluation, r): ⊕_G G^{dim Hom(G, Z)} ⊕ ⊕_j J_j(P_j) -> Z`
    /// with `r = p ∘ ⊕ J_j(π_j)` for projective covers `π_j: P_j -> Z^j`.
    pub fn right_approximation(
        &self,
        z: &NComplex<F>,
        gens: &[NComplex<F>],
    ) -> Result<Approximation<F>> {
        let mut pieces: Vec<QRep<F>> = Vec::new();
        let mut maps: Vec<RepMap<F>> = Vec::new();
        for g in gens {
            for h in rep_hom_space(&g.rep, &z.rep)? {
                pieces.push(g.rep.clone());
                maps.push(h);
            }
        }
        let coil = self.coil_epi(z)?;
        let mut coil_objects = Vec::new();
        for (k, &deg) in coil.degrees.iter().enumerate() {
            let j = self.degree_index(deg)?;
            let cover = projective_cover(&z.rep.vertex_modules[j])?;
            let jp = self.interval_j_map(deg, &cover.map)?;
            let r = compose_rep(&compose_rep(&jp, &coil.inclusions[k]), &coil.map);
            coil_objects.push(NComplex {
                spec: self.spec,
                rep: jp.src.clone(),
            });
            pieces.push(jp.src.clone());
            maps.push(r);
        }
        let (y, g) = if pieces.is_empty() {
            let zero = self.zero();
            let g = zero_rep_map(&zero.rep, &z.rep);
            (zero.rep, g)
        } else {
            let refs: Vec<&QRep<F>> = pieces.iter().collect();
            let (sum, _, proj) = QRep::direct_sum(&refs)?;
            let mut g = zero_rep_map(&sum, &z.rep);
            for (k, m) in maps.iter().enumerate() {
                g = add_rep(&g, &compose_rep(&proj[k], m));
            }
            (sum, g)
        };
        g.verify()?;
        let mut certificate = Vec::new();
        let tests: Vec<(&QRep<F>, bool)> = gens
            .iter()
            .map(|g| (&g.rep, false))
            .chain(coil_objects.iter().map(|c| (&c.rep, true)))
            .collect();
        for (i, (t, coil_part)) in tests.iter().enumerate() {
            let to_z = rep_hom_space(t, &z.rep)?;
            let to_y = rep_hom_space(t, &y)?;
            let images: Vec<Vec<F::Elem>> = to_y
                .iter()
                .map(|h| flatten_rep(&compose_rep(h, &g)))
                .collect();
            let rank = if images.is_empty() {
                0
            } else {
                Mat::from_columns(self.field(), flat_len(t, &z.rep), &images).rank()
            };
            certificate.push(ApproxCheck {
                index: i,
                coil: *coil_part,
                hom_dim: to_z.len(),
                rank,
            });
        }
        Ok(Approximation {
            source: NComplex {
                spec: self.spec,
                rep: y,
            },
            map: g,
            certificate,
        })
    }

    /// Greedily peels `ker d` at some degree as a stalk subcomplex until
    /// nothing is left. `None` means no certificate within `cap` steps.
    pub fn stalk_filtration_certificate(
        &self,
        x: &NComplex<F>,
        cap: usize,
    ) -> Result<Option<Vec<StalkStep>>> {
        if !self.spec.is_cyclic() {
            return Err(Error::InvalidSpec(
                "stalk filtrations are for cyclic complexes".into(),
            ));
        }
        let mut cur = x.clone();
        let mut steps = Vec::new();
        for _ in 0..cap {
            if cur.rep.total_dim() == 0 {
                return Ok(Some(steps));
            }
            let tm = Arc::new(phi(&cur.rep));
            let len = self.spec.len();
            let na = self.coeff().num_objects();
            let mut peeled = false;
            for i in 0..len {
                let d = &cur.rep.arrow_maps[i];
                let (k, inc) = d.kernel();
                if k.is_zero() {
                    continue;
                }
                let mut spaces: Vec<Mat<F>> = (0..tm.dims().len())
                    .map(|o| Mat::zeros(self.field(), tm.dim(o), 0))
                    .collect();
                for xo in 0..na {
                    spaces[self.setting.object(i, xo)] = inc.comps[xo].clone();
                }
                let q = tm.quotient(&spaces)?;
                steps.push(StalkStep {
                    degree: self.spec.degree(i),
                    dims: k.dims().to_vec(),
                });
                cur = self.from_module(&q.module)?;
                peeled = true;
                break;
            }
            if !peeled {
                return Ok(None);
            }
        }
        Ok((cur.rep.total_dim() == 0).then_some(steps))
    }
}

fn sj_target<F: Field>(cc: &ComplexCategory<F>, j: usize) -> usize {
    let r = cc.spec.relation_length();
    cc.spec
        .shift(j, -(r as i64 - 1))
        .expect("homotopy pieces have targets")
}

fn flat_len<F: Field>(a: &QRep<F>, b: &QRep<F>) -> usize {
    a.vertex_modules
        .iter()
        .zip(&b.vertex_modules)
        .map(|(x, y)| {
            (0..x.dims().len())
                .map(|o| x.dim(o) * y.dim(o))
                .sum::<usize>()
        })
        .sum()
}

pub fn flatten_rep<F: Field>(m: &RepMap<F>) -> Vec<F::Elem> {
    m.comps.iter().flat_map(|c| c.flatten()).collect()
}

pub fn compose_rep<F: Field>(f: &RepMap<F>, g: &RepMap<F>) -> RepMap<F> {
    RepMap {
        src: f.src.clone(),
        tgt: g.tgt.clone(),
        comps: f
            .comps
            .iter()
            .zip(&g.comps)
            .map(|(a, b)| a.then(b))
            .collect(),
    }
}

pub fn add_rep<F: Field>(f: &RepMap<F>, g: &RepMap<F>) -> RepMap<F> {
    RepMap {
        src: f.src.clone(),
        tgt: f.tgt.clone(),
        comps: f
            .comps
            .iter()
            .zip(&g.comps)
            .map(|(a, b)| a.add(b))
            .collect(),
    }
}

pub fn sub_rep<F: Field>(f: &RepMap<F>, g: &RepMap<F>) -> RepMap<F> {
    RepMap {
        src: f.src.clone(),
        tgt: f.tgt.clone(),
        comps: f
            .comps
            .iter()
            .zip(&g.comps)
            .map(|(a, b)| a.sub(b))
            .collect(),
    }
}

pub fn scale_rep<F: Field>(f: &RepMap<F>, c: &F::Elem) -> RepMap<F> {
    RepMap {
        src: f.src.clone(),
        tgt: f.tgt.clone(),
        comps: f.comps.iter().map(|a| a.scale(c)).collect(),
    }
}

pub fn zero_rep_map<F: Field>(a: &QRep<F>, b: &QRep<F>) -> RepMap<F> {
    RepMap {
        src: a.clone(),
        tgt: b.clone(),
        comps: a
            .vertex_modules
            .iter()
            .zip(&b.vertex_modules)
            .map(|(x, y)| ModuleMap::zero(x.clone(), y.clone()))
            .collect(),
    }
}

/// A complex: a representation of the bound quiver of its shape.
#[derive(Debug, Clone, PartialEq)]
pub struct NComplex<F: Field> {
    pub spec: NComplexSpec,
    pub rep: QRep<F>,
}

impl<F: Field> NComplex<F> {
    pub fn to_module(&self) -> CModule<F> {
        phi(&self.rep)
    }

    pub fn component(&self, i: usize) -> &Arc<CModule<F>> {
        &self.rep.vertex_modules[i]
    }

    pub fn differential(&self, i: usize) -> &ModuleMap<F> {
        &self.rep.arrow_maps[i]
    }

    pub fn total_dims(&self) -> Vec<usize> {
        self.rep
            .vertex_modules
            .iter()
            .map(|m| m.total_dim())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct CoilEpi<F: Field> {
    /// Degree of each `J_j` summand in order.
    pub degrees: Vec<i64>,
    pub source: NComplex<F>,
    pub map: RepMap<F>,
    /// Inclusion of each `J_j` summand into the source.
    pub inclusions: Vec<RepMap<F>>,
}

#[derive(Debug, Clone)]
pub struct Factorization<F: Field> {
    pub lift: RepMap<F>,
    /// `s^j: Z'^j -> Z^{j-(r-1)}` per index.
    pub homotopy: Vec<ModuleMap<F>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxCheck {
    pub index: usize,
    pub coil: bool,
    pub hom_dim: usize,
    pub rank: usize,
}

impl ApproxCheck {
    pub fn passed(&self) -> bool {
        self.rank == self.hom_dim
    }
}

#[derive(Debug, Clone)]
pub struct Approximation<F: Field> {
    pub source: NComplex<F>,
    pub map: RepMap<F>,
    pub certificate: Vec<ApproxCheck>,
}

impl<F: Field> Approximation<F> {
    pub fn passed(&self) -> bool {
        self.certificate.iter().all(ApproxCheck::passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StalkStep {
    pub degree: i64,
    pub dims: Vec<usize>,
}
