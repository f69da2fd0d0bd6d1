//! Finite k-categories presented by hom bases and structure constants.

mod hull;
mod tensor;

pub use hull::{AddMorphism, AddObject, HomBasis, KarObject, Splitting};
pub use tensor::{tensor_product, TensorCategory};

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::MatrixAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};
use crate::quiver::BoundQuiver;

/// Sparse element over the global basis: `(basis index, coefficient)`.
pub type Sparse<F> = Vec<(usize, <F as Field>::Elem)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morph {
    pub src: usize,
    pub tgt: usize,
    pub label: String,
}

pub struct FinCategory<F: Field> {
    field: F,
    name: String,
    objects: Vec<String>,
    basis: Vec<Morph>,
    /// `hom[x * n + y]`: global indices of the basis of `C(x, y)`.
    hom: Vec<Vec<usize>>,
    /// Position of each basis element inside its hom space.
    pos: Vec<usize>,
    /// `comp[i * nb + j] = basis[j] ∘ basis[i]` when composable.
    comp: Vec<Sparse<F>>,
    units: Vec<Sparse<F>>,
    radicals: OnceLock<Result<Vec<Mat<F>>>>,
}

impl<F: Field> fmt::Debug for FinCategory<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("name", &self.name)
            .field("objects", &self.objects)
            .field("basis", &self.basis.len())
            .finish()
    }
}

impl<F: Field> PartialEq for FinCategory<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.name == other.name
            && self.objects == other.objects
            && self.basis == other.basis
            && self.comp == other.comp
            && self.units == other.units
    }
}

impl<F: Field> Eq for FinCategory<F> {}

impl<F: Field> FinCategory<F> {
    /// Builds a category from a basis and the composition law
    /// `compose(i, j) = basis[j] ∘ basis[i]` (only called when composable),
    /// and checks associativity and the unit laws on all basis elements.
    pub fn new(
        field: &F,
        name: impl Into<String>,
        objects: Vec<String>,
        basis: Vec<Morph>,
        compose: impl Fn(usize, usize) -> Sparse<F>,
        units: Vec<Sparse<F>>,
    ) -> Result<Self> {
        let cat = Self::assemble(field, name.into(), objects, basis, compose, units);
        cat.verify()?;
        Ok(cat)
    }

    fn assemble(
        field: &F,
        name: String,
        objects: Vec<String>,
        basis: Vec<Morph>,
        compose: impl Fn(usize, usize) -> Sparse<F>,
        units: Vec<Sparse<F>>,
    ) -> Self {
        let n = objects.len();
        let nb = basis.len();
        let mut hom = vec![Vec::new(); n * n];
        let mut pos = vec![0; nb];
        for (i, m) in basis.iter().enumerate() {
            let h = &mut hom[m.src * n + m.tgt];
            pos[i] = h.len();
            h.push(i);
        }
        let mut comp = vec![Vec::new(); nb * nb];
        for i in 0..nb {
            for j in 0..nb {
                if basis[i].tgt == basis[j].src {
                    let mut c = compose(i, j);
                    c.retain(|(_, v)| !field.is_zero(v));
                    c.sort_by_key(|(k, _)| *k);
                    comp[i * nb + j] = c;
                }
            }
        }
        FinCategory {
            field: field.clone(),
            name,
            objects,
            basis,
            hom,
            pos,
            comp,
            units,
            radicals: OnceLock::new(),
        }
    }

    fn verify(&self) -> Result<()> {
        let nb = self.basis.len();
        for (i, m) in self.basis.iter().enumerate() {
            if m.src >= self.objects.len() || m.tgt >= self.objects.len() {
                return Err(Error::UnknownVertex(m.label.clone()));
            }
            for j in 0..nb {
                for (k, _) in &self.comp[i * nb + j] {
                    let b = &self.basis[*k];
                    if b.src != m.src || b.tgt != self.basis[j].tgt {
                        return Err(Error::NotComposable(format!(
                            "{} then {} lands outside its hom space",
                            m.label, self.basis[j].label
                        )));
                    }
                }
            }
        }
        if self.units.len() != self.objects.len() {
            return Err(Error::UnitLaw("one unit per object required".into()));
        }
        for i in 0..nb {
            let single = vec![(i, self.field.one())];
            let m = &self.basis[i];
            if self.compose_sparse(&self.units[m.src], &single) != single
                || self.compose_sparse(&single, &self.units[m.tgt]) != single
            {
                return Err(Error::UnitLaw(m.label.clone()));
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                if self.basis[i].tgt != self.basis[j].src {
                    continue;
                }
                let ij = &self.comp[i * nb + j];
                for k in 0..nb {
                    if self.basis[j].tgt != self.basis[k].src {
                        continue;
                    }
                    let jk = &self.comp[j * nb + k];
                    let left = self.compose_sparse(ij, &[(k, self.field.one())]);
                    let right = self.compose_sparse(&[(i, self.field.one())], jk);
                    if left != right {
                        return Err(Error::NotAssociative(format!(
                            "{}, {}, {}",
                            self.basis[i].label, self.basis[j].label, self.basis[k].label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// One object with endomorphism ring `k`.
    pub fn point(field: &F) -> Self {
        Self::assemble(
            field,
            "k".into(),
            vec!["*".into()],
            vec![Morph {
                src: 0,
                tgt: 0,
                label: "1".into(),
            }],
            |_, _| vec![(0, field.one())],
            vec![vec![(0, field.one())]],
        )
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn objects(&self) -> &[String] {
        &self.objects
    }
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn basis(&self) -> &[Morph] {
        &self.basis
    }
    pub fn object(&self, id: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Global indices of the basis of `C(x, y)`.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.hom[x * self.objects.len() + y]
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).len()
    }

    /// Position of basis element `b` inside its hom space.
    pub fn local_index(&self, b: usize) -> usize {
        self.pos[b]
    }

    /// `basis[j] ∘ basis[i]`, or `None` when not composable.
    pub fn comp(&self, i: usize, j: usize) -> Option<&Sparse<F>> {
        (self.basis[i].tgt == self.basis[j].src).then(|| &self.comp[i * self.basis.len() + j])
    }

    pub fn unit(&self, x: usize) -> &Sparse<F> {
        &self.units[x]
    }

    /// Unit of `x` in local coordinates of `End(x)`.
    pub fn unit_local(&self, x: usize) -> Vec<F::Elem> {
        self.to_local(x, x, &self.units[x])
    }

    /// `g ∘ f` for sparse elements (apply `f` first).
    pub fn compose_sparse(&self, f: &[(usize, F::Elem)], g: &[(usize, F::Elem)]) -> Sparse<F> {
        let fld = &self.field;
        let nb = self.basis.len();
        let mut acc: Vec<(usize, F::Elem)> = Vec::new();
        for (i, a) in f {
            for (j, b) in g {
                if self.basis[*i].tgt != self.basis[*j].src {
                    continue;
                }
                let ab = fld.mul(a, b);
                for (k, c) in &self.comp[i * nb + j] {
                    acc.push((*k, fld.mul(&ab, c)));
                }
            }
        }
        acc.sort_by_key(|(k, _)| *k);
        let mut out: Sparse<F> = Vec::new();
        for (k, v) in acc {
            match out.last_mut() {
                Some((lk, lv)) if *lk == k => *lv = fld.add(lv, &v),
                _ => out.push((k, v)),
            }
        }
        out.retain(|(_, v)| !fld.is_zero(v));
        out
    }

    pub fn to_local(&self, x: usize, y: usize, s: &[(usize, F::Elem)]) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.hom_dim(x, y)];
        for (k, c) in s {
            debug_assert_eq!((self.basis[*k].src, self.basis[*k].tgt), (x, y));
            v[self.pos[*k]] = self.field.add(&v[self.pos[*k]], c);
        }
        v
    }

    pub fn to_sparse(&self, x: usize, y: usize, v: &[F::Elem]) -> Sparse<F> {
        self.hom(x, y)
            .iter()
            .zip(v)
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(&k, c)| (k, c.clone()))
            .collect()
    }

    /// `g ∘ f` for `f ∈ C(x, y)`, `g ∈ C(y, z)` in local coordinates.
    pub fn compose(
        &self,
        x: usize,
        y: usize,
        z: usize,
        f: &[F::Elem],
        g: &[F::Elem],
    ) -> Vec<F::Elem> {
        let s = self.compose_sparse(&self.to_sparse(x, y, f), &self.to_sparse(y, z, g));
        self.to_local(x, z, &s)
    }

    /// The matrix of `f ↦ g ∘ f` from `C(x, y)` to `C(x, z)` for basis
    /// element `g` of `C(y, z)` (postcomposition).
    pub fn postcompose_matrix(&self, x: usize, g: usize) -> Mat<F> {
        let (y, z) = (self.basis[g].src, self.basis[g].tgt);
        let cols: Vec<Vec<F::Elem>> = self
            .hom(x, y)
            .iter()
            .map(|&f| self.to_local(x, z, self.comp(f, g).expect("composable")))
            .collect();
        Mat::from_columns(&self.field, self.hom_dim(x, z), &cols)
    }

    /// The matrix of `h ↦ h ∘ f` from `C(y, w)` to `C(x, w)` for basis
    /// element `f` of `C(x, y)` (precomposition).
    pub fn precompose_matrix(&self, f: usize, w: usize) -> Mat<F> {
        let (x, y) = (self.basis[f].src, self.basis[f].tgt);
        let cols: Vec<Vec<F::Elem>> = self
            .hom(y, w)
            .iter()
            .map(|&h| self.to_local(x, w, self.comp(f, h).expect("composable")))
            .collect();
        Mat::from_columns(&self.field, self.hom_dim(x, w), &cols)
    }

    /// `End(x)` through its left regular representation.
    pub fn end_algebra(&self, x: usize) -> MatrixAlgebra<F> {
        let d = self.hom_dim(x, x);
        let basis = self.hom(x, x).to_vec();
        MatrixAlgebra::from_structure(
            &self.field,
            d,
            |i, j| self.to_local(x, x, self.comp(basis[j], basis[i]).expect("endomorphisms")),
            &self.unit_local(x),
        )
    }

    /// Local coordinates (as columns) of a basis of `rad End(x)`, after
    /// checking that every `End(x)` is local with residue field `k` and that
    /// distinct objects are non-isomorphic.
    pub fn radical(&self, x: usize) -> Result<&Mat<F>> {
        let rads = self
            .radicals
            .get_or_init(|| self.compute_radicals())
            .as_ref()
            .map_err(Clone::clone)?;
        Ok(&rads[x])
    }

    fn compute_radicals(&self) -> Result<Vec<Mat<F>>> {
        let n = self.objects.len();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let rad = self.end_algebra(x).radical_coords()?;
            if self.hom_dim(x, x) - rad.cols() != 1 {
                return Err(Error::NotBasic(format!(
                    "End({}) modulo its radical has dimension {}",
                    self.objects[x],
                    self.hom_dim(x, x) - rad.cols()
                )));
            }
            out.push(rad);
        }
        for x in 0..n {
            let solver = crate::linalg::SpanSolver::new(out[x].clone());
            for y in 0..n {
                if x == y {
                    continue;
                }
                for &f in self.hom(x, y) {
                    for &g in self.hom(y, x) {
                        let gf = self.to_local(x, x, self.comp(f, g).expect("composable"));
                        if !solver.contains(&gf) {
                            return Err(Error::NotBasic(format!(
                                "objects {} and {} are isomorphic",
                                self.objects[x], self.objects[y]
                            )));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Spanning set (local coordinates) of the radical morphisms `x -> y`.
    pub fn radical_morphisms(&self, x: usize, y: usize) -> Result<Vec<Vec<F::Elem>>> {
        if x == y {
            Ok(self.radical(x)?.columns())
        } else {
            self.radical(x)?;
            let d = self.hom_dim(x, y);
            Ok((0..d)
                .map(|k| {
                    let mut v = vec![self.field.zero(); d];
                    v[k] = self.field.one();
                    v
                })
                .collect())
        }
    }

    /// Same basis and labels with every morphism reversed. Toggles a
    /// trailing `^op` in the name, so taking it twice gives back an equal
    /// category.
    pub fn opposite(&self) -> Self {
        let nb = self.basis.len();
        let basis = self
            .basis
            .iter()
            .map(|m| Morph {
                src: m.tgt,
                tgt: m.src,
                label: m.label.clone(),
            })
            .collect();
        let name = match self.name.strip_suffix("^op") {
            Some(b) => b.to_string(),
            None => format!("{}^op", self.name),
        };
        Self::assemble(
            &self.field,
            name,
            self.objects.clone(),
            basis,
            |i, j| self.comp[j * nb + i].clone(),
            self.units.clone(),
        )
    }
}

/// The surviving paths in the order used as the basis of `category_of`:
/// grouped by (source, target), canonical within each group.
pub fn basis_paths(bq: &BoundQuiver) -> Vec<crate::quiver::Path> {
    let n = bq.quiver().num_vertices();
    let mut paths = Vec::new();
    for v in 0..n {
        for w in 0..n {
            paths.extend(bq.paths(v, w));
        }
    }
    paths
}

/// The path category of a bound quiver: objects are vertices, morphisms
/// `v -> w` the surviving paths, composition is concatenation.
pub fn category_of<F: Field>(field: &F, bq: &BoundQuiver) -> FinCategory<F> {
    let q = bq.quiver();
    let n = q.num_vertices();
    let paths = basis_paths(bq);
    let index: std::collections::HashMap<_, _> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| ((p.source, p.arrows.clone()), i))
        .collect();
    let basis = paths
        .iter()
        .map(|p| Morph {
            src: p.source,
            tgt: p.target,
            label: p.display(q),
        })
        .collect();
    let units = (0..n)
        .map(|v| vec![(index[&(v, Vec::new())], field.one())])
        .collect();
    let name = bq.to_string();
    FinCategory::assemble(
        field,
        name,
        q.vertices().to_vec(),
        basis,
        |i, j| {
            let p = paths[i].then(&paths[j]).expect("composable");
            match index.get(&(p.source, p.arrows.clone())) {
                Some(&k) => vec![(k, field.one())],
                None => Vec::new(),
            }
        },
        units,
    )
}

/// The category whose modules are the representations of `bq`:
/// contravariant functors on the path category of the opposite quiver.
pub fn rep_category<F: Field>(field: &F, bq: &BoundQuiver) -> Arc<FinCategory<F>> {
    Arc::new(category_of(field, &bq.opposite()))
}
