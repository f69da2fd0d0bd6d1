use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Field, Mat, SpanSolver};

use super::module::{CModule, ModuleMap};

/// A basis of `Hom(M, N)` with a coordinate solver on flattened maps.
#[derive(Debug, Clone)]
pub struct HomSpace<F: Field> {
    pub src: Arc<CModule<F>>,
    pub tgt: Arc<CModule<F>>,
    pub basis: Vec<ModuleMap<F>>,
    solver: SpanSolver<F>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, f: &ModuleMap<F>) -> Option<Vec<F::Elem>> {
        self.solver.coords(&f.flatten())
    }

    pub fn element(&self, coords: &[F::Elem]) -> ModuleMap<F> {
        let mut out = ModuleMap::zero(self.src.clone(), self.tgt.clone());
        for (b, c) in self.basis.iter().zip(coords) {
            if !self.src.field().is_zero(c) {
                out = out.add(&b.scale(c));
            }
        }
        out
    }
}

/// Solves the naturality equations `φ_x M(b) = N(b) φ_y` over every basis
/// element `b: x -> y`.
pub fn hom_space<F: Field>(m: &Arc<CModule<F>>, n: &Arc<CModule<F>>) -> Result<HomSpace<F>> {
    if **m.cat() != **n.cat() {
        return Err(Error::CategoryMismatch(
            "hom between different categories".into(),
        ));
    }
    let field = m.field().clone();
    let cat = m.cat();
    let objs = cat.num_objects();
    let mut offset = Vec::with_capacity(objs + 1);
    offset.push(0);
    for x in 0..objs {
        offset.push(offset[x] + n.dim(x) * m.dim(x));
    }
    let unknowns = offset[objs];
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (b, mor) in cat.basis().iter().enumerate() {
        let (x, y) = (mor.src, mor.tgt);
        let mb = m.act(b);
        let nb = n.act(b);
        for r in 0..n.dim(x) {
            for c in 0..m.dim(y) {
                let mut row = vec![field.zero(); unknowns];
                for k in 0..m.dim(x) {
                    let e = &mut row[offset[x] + r * m.dim(x) + k];
                    *e = field.add(e, &mb[(k, c)]);
                }
                for k in 0..n.dim(y) {
                    let e = &mut row[offset[y] + k * m.dim(y) + c];
                    *e = field.sub(e, &nb[(r, k)]);
                }
                if row.iter().any(|v| !field.is_zero(v)) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Mat::identity(&field, unknowns)
    } else {
        let flat: Vec<F::Elem> = rows.concat();
        Mat::from_vec(&field, rows.len(), unknowns, flat)?.kernel_basis()
    };
    let basis: Vec<ModuleMap<F>> = kernel
        .columns()
        .into_iter()
        .map(|v| {
            let comps = (0..objs)
                .map(|x| {
                    Mat::from_vec(
                        &field,
                        n.dim(x),
                        m.dim(x),
                        v[offset[x]..offset[x + 1]].to_vec(),
                    )
                    .expect("component shape")
                })
                .collect();
            ModuleMap::new_unchecked(m.clone(), n.clone(), comps)
        })
        .collect();
    let solver = SpanSolver::new(kernel);
    Ok(HomSpace {
        src: m.clone(),
        tgt: n.clone(),
        basis,
        solver,
    })
}

/// `End(M)` as block-diagonal matrices of size `total_dim`.
pub fn end_matrices<F: Field>(end: &HomSpace<F>) -> Vec<Mat<F>> {
    end.basis.iter().map(block_matrix).collect()
}

pub fn block_matrix<F: Field>(f: &ModuleMap<F>) -> Mat<F> {
    let parts: Vec<&Mat<F>> = f.comps.iter().collect();
    Mat::block_diag(f.src.field(), &parts)
}

/// Whether `g ∘ f` is nilpotent as an endomorphism.
fn is_nilpotent_map<F: Field>(h: &ModuleMap<F>) -> bool {
    block_matrix(h).is_nilpotent()
}

/// For indecomposable `M` and `N`: an isomorphism `M -> N` if one exists.
///
/// Returns a basis map `f` with some basis `g` making `g ∘ f` invertible,
/// then `f` itself, checked to be an isomorphism.
pub fn find_isomorphism<F: Field>(
    m: &Arc<CModule<F>>,
    n: &Arc<CModule<F>>,
) -> Result<Option<ModuleMap<F>>> {
    if m.dims() != n.dims() {
        return Ok(None);
    }
    let mn = hom_space(m, n)?;
    if mn.dim() == 0 {
        return Ok(None);
    }
    let nm = hom_space(n, m)?;
    for f in &mn.basis {
        for g in &nm.basis {
            if !is_nilpotent_map(&f.then(g)) {
                if f.is_iso() {
                    return Ok(Some(f.clone()));
                }
                return Err(Error::Decomposable(m.total_dim()));
            }
        }
    }
    Ok(None)
}

pub fn is_isomorphic<F: Field>(m: &Arc<CModule<F>>, n: &Arc<CModule<F>>) -> Result<bool> {
    Ok(find_isomorphism(m, n)?.is_some())
}

/// Whether some `s: Z -> Y` satisfies `g ∘ s = 1_Z`.
pub fn is_split_epi<F: Field>(g: &ModuleMap<F>) -> Result<bool> {
    let zy = hom_space(&g.tgt, &g.src)?;
    let field = g.src.field().clone();
    let cols: Vec<Vec<F::Elem>> = zy.basis.iter().map(|s| s.then(g).flatten()).collect();
    let target = ModuleMap::identity(g.tgt.clone()).flatten();
    let a = Mat::from_columns(&field, target.len(), &cols);
    Ok(a.solve(&Mat::column(&field, target))?.is_some())
}

/// Whether some `r: Y -> X` satisfies `r ∘ f = 1_X`.
pub fn is_split_mono<F: Field>(f: &ModuleMap<F>) -> Result<bool> {
    let yx = hom_space(&f.tgt, &f.src)?;
    let field = f.src.field().clone();
    let cols: Vec<Vec<F::Elem>> = yx.basis.iter().map(|r| f.then(r).flatten()).collect();
    let target = ModuleMap::identity(f.src.clone()).flatten();
    let a = Mat::from_columns(&field, target.len(), &cols);
    Ok(a.solve(&Mat::column(&field, target))?.is_some())
}
