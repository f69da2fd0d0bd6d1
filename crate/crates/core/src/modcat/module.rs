use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::linalg::{quotient_map, Field, Mat, SpanSolver};

/// A contravariant functor `C -> mod k`: `action[b]` is `M(b): M(y) -> M(x)`
/// for basis element `b: x -> y`, a `dims[x] × dims[y]` matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct CModule<F: Field> {
    cat: Arc<FinCategory<F>>,
    dims: Vec<usize>,
    action: Vec<Mat<F>>,
}

impl<F: Field> fmt::Debug for CModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CModule{:?}", self.dims)
    }
}

pub fn dim_vector_string(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

impl<F: Field> CModule<F> {
    pub fn new(cat: Arc<FinCategory<F>>, dims: Vec<usize>, action: Vec<Mat<F>>) -> Result<Self> {
        let m = CModule { cat, dims, action };
        m.verify()?;
        Ok(m)
    }

    pub fn new_unchecked(cat: Arc<FinCategory<F>>, dims: Vec<usize>, action: Vec<Mat<F>>) -> Self {
        let m = CModule { cat, dims, action };
        debug_assert!(m.verify().is_ok(), "{:?}", m.verify());
        m
    }

    /// Functoriality on every composable pair of basis elements, and units.
    pub fn verify(&self) -> Result<()> {
        let c = &*self.cat;
        if self.dims.len() != c.num_objects() || self.action.len() != c.basis().len() {
            return Err(Error::DimensionMismatch {
                op: "CModule",
                expected: format!("{} objects, {} morphisms", c.num_objects(), c.basis().len()),
                found: format!("{} dims, {} matrices", self.dims.len(), self.action.len()),
            });
        }
        for (b, m) in c.basis().iter().enumerate() {
            if self.action[b].shape() != (self.dims[m.src], self.dims[m.tgt]) {
                return Err(Error::DimensionMismatch {
                    op: "CModule action",
                    expected: format!("{}x{}", self.dims[m.src], self.dims[m.tgt]),
                    found: format!("{:?}", self.action[b].shape()),
                });
            }
        }
        for x in 0..c.num_objects() {
            if !self.act_sparse(x, x, c.unit(x)).is_identity() {
                return Err(Error::NotFunctorial(format!("unit of {}", c.objects()[x])));
            }
        }
        let nb = c.basis().len();
        for i in 0..nb {
            for j in 0..nb {
                let Some(ij) = c.comp(i, j) else { continue };
                let (x, z) = (c.basis()[i].src, c.basis()[j].tgt);
                let lhs = self.act_sparse(x, z, ij);
                let rhs = self.action[i].mul(&self.action[j]);
                if lhs != rhs {
                    return Err(Error::NotFunctorial(format!(
                        "{} then {}",
                        c.basis()[i].label,
                        c.basis()[j].label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(cat: Arc<FinCategory<F>>) -> Self {
        let field = cat.field().clone();
        let dims = vec![0; cat.num_objects()];
        let action = cat
            .basis()
            .iter()
            .map(|_| Mat::zeros(&field, 0, 0))
            .collect();
        CModule { cat, dims, action }
    }

    pub fn cat(&self) -> &Arc<FinCategory<F>> {
        &self.cat
    }
    pub fn field(&self) -> &F {
        self.cat.field()
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
    pub fn action(&self) -> &[Mat<F>] {
        &self.action
    }
    pub fn act(&self, b: usize) -> &Mat<F> {
        &self.action[b]
    }

    /// `M(s)` for a sparse element `s` of `C(x, y)`.
    pub fn act_sparse(&self, x: usize, y: usize, s: &[(usize, F::Elem)]) -> Mat<F> {
        let mut m = Mat::zeros(self.field(), self.dims[x], self.dims[y]);
        for (b, c) in s {
            m.add_scaled(c, &self.action[*b]);
        }
        m
    }

    /// `M(v)` for `v` in local coordinates of `C(x, y)`.
    pub fn act_local(&self, x: usize, y: usize, v: &[F::Elem]) -> Mat<F> {
        let mut m = Mat::zeros(self.field(), self.dims[x], self.dims[y]);
        for (&b, c) in self.cat.hom(x, y).iter().zip(v) {
            m.add_scaled(c, &self.action[b]);
        }
        m
    }

    /// Same data over a structurally equal category.
    pub fn rebase(&self, cat: Arc<FinCategory<F>>) -> Result<Self> {
        if *cat != *self.cat {
            return Err(Error::CategoryMismatch(format!(
                "{} vs {}",
                cat.name(),
                self.cat.name()
            )));
        }
        Ok(CModule {
            cat,
            dims: self.dims.clone(),
            action: self.action.clone(),
        })
    }

    /// `M_1 ⊕ ... ⊕ M_r` with inclusions and projections.
    pub fn direct_sum(cat: &Arc<FinCategory<F>>, parts: &[&CModule<F>]) -> DirectSum<F> {
        let field = cat.field().clone();
        let n = cat.num_objects();
        let dims: Vec<usize> = (0..n)
            .map(|x| parts.iter().map(|p| p.dims[x]).sum())
            .collect();
        let action = (0..cat.basis().len())
            .map(|b| {
                let blocks: Vec<&Mat<F>> = parts.iter().map(|p| &p.action[b]).collect();
                Mat::block_diag(&field, &blocks)
            })
            .collect();
        let sum = Arc::new(CModule {
            cat: cat.clone(),
            dims,
            action,
        });
        let mut inj = Vec::with_capacity(parts.len());
        let mut proj = Vec::with_capacity(parts.len());
        let mut offsets = vec![0usize; n];
        for p in parts {
            let part = Arc::new((*p).clone());
            let mut ic = Vec::with_capacity(n);
            let mut pc = Vec::with_capacity(n);
            for x in 0..n {
                let mut i = Mat::zeros(&field, sum.dims[x], p.dims[x]);
                i.set_block(offsets[x], 0, &Mat::identity(&field, p.dims[x]));
                pc.push(i.transpose());
                ic.push(i);
                offsets[x] += p.dims[x];
            }
            inj.push(ModuleMap::new_unchecked(part.clone(), sum.clone(), ic));
            proj.push(ModuleMap::new_unchecked(sum.clone(), part, pc));
        }
        DirectSum { sum, inj, proj }
    }

    /// The submodule spanned per object by the columns of `spaces[x]`,
    /// which must be closed under the action.
    pub fn submodule(
        self: &Arc<Self>,
        spaces: &[Mat<F>],
    ) -> Result<(Arc<CModule<F>>, ModuleMap<F>)> {
        let field = self.field().clone();
        let n = self.cat.num_objects();
        let bases: Vec<Mat<F>> = spaces.iter().map(|s| s.column_space()).collect();
        let solvers: Vec<SpanSolver<F>> =
            bases.iter().map(|b| SpanSolver::new(b.clone())).collect();
        let mut action = Vec::with_capacity(self.cat.basis().len());
        for (b, m) in self.cat.basis().iter().enumerate() {
            let img = self.action[b].mul(&bases[m.tgt]);
            let mut cols = Vec::with_capacity(img.cols());
            for v in img.columns() {
                cols.push(solvers[m.src].coords(&v).ok_or_else(|| {
                    Error::NotFunctorial(format!("subspace not closed under {}", m.label))
                })?);
            }
            action.push(Mat::from_columns(&field, bases[m.src].cols(), &cols));
        }
        let dims = (0..n).map(|x| bases[x].cols()).collect();
        let sub = Arc::new(CModule::new_unchecked(self.cat.clone(), dims, action));
        let inc = ModuleMap::new_unchecked(sub.clone(), self.clone(), bases);
        Ok((sub, inc))
    }

    /// The quotient by the submodule spanned by `spaces[x]`, with the
    /// projection and a linear (not natural) section per object.
    pub fn quotient(self: &Arc<Self>, spaces: &[Mat<F>]) -> Result<Quotient<F>> {
        let field = self.field().clone();
        let n = self.cat.num_objects();
        let qs: Vec<crate::linalg::Quotient<F>> = (0..n)
            .map(|x| quotient_map(&field, self.dims[x], &spaces[x]))
            .collect();
        let mut action = Vec::with_capacity(self.cat.basis().len());
        for (b, m) in self.cat.basis().iter().enumerate() {
            // closure check: M(b) maps the sub at tgt into the sub at src
            if !qs[m.src]
                .pi
                .mul(&self.action[b])
                .mul(&qs[m.tgt].kernel)
                .is_zero()
            {
                return Err(Error::NotFunctorial(format!(
                    "subspace not closed under {}",
                    m.label
                )));
            }
            action.push(qs[m.src].pi.mul(&self.action[b]).mul(&qs[m.tgt].section));
        }
        let dims = qs.iter().map(|q| q.dim()).collect();
        let quo = Arc::new(CModule::new_unchecked(self.cat.clone(), dims, action));
        let proj = ModuleMap::new_unchecked(
            self.clone(),
            quo.clone(),
            qs.iter().map(|q| q.pi.clone()).collect(),
        );
        let sections = qs.into_iter().map(|q| q.section).collect();
        Ok(Quotient {
            module: quo,
            proj,
            sections,
        })
    }

    pub fn dim_vector_string(&self) -> String {
        dim_vector_string(&self.dims)
    }
}

#[derive(Debug, Clone)]
pub struct DirectSum<F: Field> {
    pub sum: Arc<CModule<F>>,
    pub inj: Vec<ModuleMap<F>>,
    pub proj: Vec<ModuleMap<F>>,
}

#[derive(Debug, Clone)]
pub struct Quotient<F: Field> {
    pub module: Arc<CModule<F>>,
    pub proj: ModuleMap<F>,
    /// Per object, a linear right inverse of `proj`.
    pub sections: Vec<Mat<F>>,
}

/// A natural transformation `M -> N`; `comps[x]` is `dims_N[x] × dims_M[x]`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap<F: Field> {
    pub src: Arc<CModule<F>>,
    pub tgt: Arc<CModule<F>>,
    pub comps: Vec<Mat<F>>,
}

impl<F: Field> fmt::Debug for ModuleMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModuleMap{:?}->{:?} {:?}",
            self.src.dims, self.tgt.dims, self.comps
        )
    }
}

impl<F: Field> ModuleMap<F> {
    pub fn new(src: Arc<CModule<F>>, tgt: Arc<CModule<F>>, comps: Vec<Mat<F>>) -> Result<Self> {
        let m = ModuleMap { src, tgt, comps };
        m.verify()?;
        Ok(m)
    }

    pub fn new_unchecked(src: Arc<CModule<F>>, tgt: Arc<CModule<F>>, comps: Vec<Mat<F>>) -> Self {
        let m = ModuleMap { src, tgt, comps };
        debug_assert!(m.verify().is_ok(), "{:?}", m.verify());
        m
    }

    pub fn verify(&self) -> Result<()> {
        if !Arc::ptr_eq(self.src.cat(), self.tgt.cat()) && **self.src.cat() != **self.tgt.cat() {
            return Err(Error::CategoryMismatch(
                "map between modules over different categories".into(),
            ));
        }
        let c = self.src.cat();
        if self.comps.len() != c.num_objects() {
            return Err(Error::DimensionMismatch {
                op: "ModuleMap",
                expected: format!("{} components", c.num_objects()),
                found: format!("{}", self.comps.len()),
            });
        }
        for x in 0..c.num_objects() {
            if self.comps[x].shape() != (self.tgt.dim(x), self.src.dim(x)) {
                return Err(Error::DimensionMismatch {
                    op: "ModuleMap component",
                    expected: format!("{}x{}", self.tgt.dim(x), self.src.dim(x)),
                    found: format!("{:?}", self.comps[x].shape()),
                });
            }
        }
        for (b, m) in c.basis().iter().enumerate() {
            let lhs = self.comps[m.src].mul(self.src.act(b));
            let rhs = self.tgt.act(b).mul(&self.comps[m.tgt]);
            if lhs != rhs {
                return Err(Error::NotNatural(m.label.clone()));
            }
        }
        Ok(())
    }

    pub fn zero(src: Arc<CModule<F>>, tgt: Arc<CModule<F>>) -> Self {
        let field = src.field().clone();
        let comps = (0..src.dims().len())
            .map(|x| Mat::zeros(&field, tgt.dim(x), src.dim(x)))
            .collect();
        ModuleMap { src, tgt, comps }
    }

    pub fn identity(m: Arc<CModule<F>>) -> Self {
        let field = m.field().clone();
        let comps = m.dims().iter().map(|&d| Mat::identity(&field, d)).collect();
        ModuleMap {
            src: m.clone(),
            tgt: m,
            comps,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModuleMap<F>) -> ModuleMap<F> {
        assert_eq!(self.tgt.dims(), next.src.dims(), "maps do not compose");
        let comps = self
            .comps
            .iter()
            .zip(&next.comps)
            .map(|(a, b)| b.mul(a))
            .collect();
        ModuleMap {
            src: self.src.clone(),
            tgt: next.tgt.clone(),
            comps,
        }
    }

    pub fn add(&self, other: &ModuleMap<F>) -> ModuleMap<F> {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        ModuleMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            comps,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> ModuleMap<F> {
        ModuleMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn sub(&self, other: &ModuleMap<F>) -> ModuleMap<F> {
        self.add(&other.scale(&self.src.field().neg(&self.src.field().one())))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Mat::is_zero)
    }

    pub fn is_mono(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.rows() == c.cols() && c.rank() == c.rows())
    }

    pub fn inverse(&self) -> Option<ModuleMap<F>> {
        let comps = self
            .comps
            .iter()
            .map(|c| c.inverse())
            .collect::<Option<Vec<_>>>()?;
        Some(ModuleMap {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            comps,
        })
    }

    /// Row-major concatenation of all components.
    pub fn flatten(&self) -> Vec<F::Elem> {
        self.comps
            .iter()
            .flat_map(|c| c.entries().iter().cloned())
            .collect()
    }

    pub fn kernel(&self) -> (Arc<CModule<F>>, ModuleMap<F>) {
        let spaces: Vec<Mat<F>> = self.comps.iter().map(|c| c.kernel_basis()).collect();
        self.src.submodule(&spaces).expect("kernels are submodules")
    }

    pub fn image(&self) -> (Arc<CModule<F>>, ModuleMap<F>) {
        let spaces: Vec<Mat<F>> = self.comps.to_vec();
        self.tgt.submodule(&spaces).expect("images are submodules")
    }

    pub fn cokernel(&self) -> Quotient<F> {
        self.tgt
            .quotient(&self.comps)
            .expect("images are submodules")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::rep_category;
    use crate::linalg::PrimeField;
    use crate::quiver::{BoundQuiver, Quiver};

    #[test]
    fn functoriality_is_checked() {
        let f = PrimeField::default();
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let c = rep_category(&f, &BoundQuiver::free(q).unwrap());
        // representation k -> k: the op-arrow a^op: 2 -> 1 acts M(1) -> M(2)
        let act: Vec<Mat<PrimeField>> = c
            .basis()
            .iter()
            .map(|m| {
                if m.src == m.tgt {
                    Mat::identity(&f, 1)
                } else {
                    Mat::from_i64(&f, &[&[3]])
                }
            })
            .collect();
        let m = CModule::new(c.clone(), vec![1, 1], act.clone()).unwrap();
        assert_eq!(m.total_dim(), 2);
        let mut bad = act;
        for (b, mm) in c.basis().iter().enumerate() {
            if mm.src == mm.tgt {
                bad[b] = Mat::from_i64(&f, &[&[2]]);
            }
        }
        assert!(matches!(
            CModule::new(c, vec![1, 1], bad),
            Err(Error::NotFunctorial(_))
        ));
    }
}
