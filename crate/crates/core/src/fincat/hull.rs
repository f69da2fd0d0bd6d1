//! Additive hull and idempotent completion of a [`FinCategory`].

use crate::algebra::{verify_decomposition, MatrixAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};

use super::FinCategory;

/// A finite direct sum of base objects, sorted by object index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddObject {
    pub summands: Vec<usize>,
}

impl AddObject {
    pub fn new(mut summands: Vec<usize>) -> Self {
        summands.sort_unstable();
        AddObject { summands }
    }

    pub fn zero() -> Self {
        AddObject {
            summands: Vec::new(),
        }
    }

    pub fn single(x: usize) -> Self {
        AddObject { summands: vec![x] }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }
}

/// Block `(row, col)` of a hom space between additive objects: the copy of
/// `C(x_col, y_row)` occupying `offset..offset + len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub row: usize,
    pub col: usize,
    pub offset: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct HomBasis<F: Field> {
    /// Coordinates of the ambient additive hom space.
    pub ambient: usize,
    pub blocks: Vec<Block>,
    /// Columns spanning the hom space inside the ambient coordinates.
    pub span: Mat<F>,
}

impl<F: Field> HomBasis<F> {
    pub fn dim(&self) -> usize {
        self.span.cols()
    }
}

/// A matrix of morphisms between additive objects, flattened along the
/// blocks of [`FinCategory::add_hom`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddMorphism<F: Field> {
    pub src: AddObject,
    pub tgt: AddObject,
    pub coords: Vec<F::Elem>,
}

/// An object of the idempotent completion of the additive hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KarObject<F: Field> {
    pub base: AddObject,
    pub idem: AddMorphism<F>,
}

/// `e = section ∘ retraction` and `retraction ∘ section = 1`.
#[derive(Debug, Clone)]
pub struct Splitting<F: Field> {
    pub retraction: AddMorphism<F>,
    pub section: AddMorphism<F>,
}

impl<F: Field> FinCategory<F> {
    fn blocks(&self, x: &AddObject, y: &AddObject) -> Vec<Block> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (row, &yj) in y.summands.iter().enumerate() {
            for (col, &xi) in x.summands.iter().enumerate() {
                let len = self.hom_dim(xi, yj);
                out.push(Block {
                    row,
                    col,
                    offset,
                    len,
                });
                offset += len;
            }
        }
        out
    }

    /// The hom space of the additive hull, with the standard basis.
    pub fn add_hom(&self, x: &AddObject, y: &AddObject) -> HomBasis<F> {
        let blocks = self.blocks(x, y);
        let ambient = blocks.iter().map(|b| b.len).sum();
        HomBasis {
            ambient,
            blocks,
            span: Mat::identity(&self.field, ambient),
        }
    }

    pub fn add_zero_morphism(&self, x: &AddObject, y: &AddObject) -> AddMorphism<F> {
        let d = self.add_hom(x, y).ambient;
        AddMorphism {
            src: x.clone(),
            tgt: y.clone(),
            coords: vec![self.field.zero(); d],
        }
    }

    pub fn add_identity(&self, x: &AddObject) -> AddMorphism<F> {
        let mut m = self.add_zero_morphism(x, x);
        for b in self.blocks(x, x) {
            if b.row == b.col {
                let u = self.unit_local(x.summands[b.row]);
                m.coords[b.offset..b.offset + b.len].clone_from_slice(&u);
            }
        }
        m
    }

    /// Builds a morphism from its blocks, `entry(row, col)` in local
    /// coordinates of `C(x_col, y_row)`.
    pub fn add_morphism(
        &self,
        x: &AddObject,
        y: &AddObject,
        entry: impl Fn(usize, usize) -> Vec<F::Elem>,
    ) -> AddMorphism<F> {
        let mut m = self.add_zero_morphism(x, y);
        for b in self.blocks(x, y) {
            let v = entry(b.row, b.col);
            assert_eq!(v.len(), b.len, "block size");
            m.coords[b.offset..b.offset + b.len].clone_from_slice(&v);
        }
        m
    }

    /// Block `(row, col)` of `m`.
    pub fn add_entry(&self, m: &AddMorphism<F>, row: usize, col: usize) -> Vec<F::Elem> {
        let b = self
            .blocks(&m.src, &m.tgt)
            .into_iter()
            .find(|b| b.row == row && b.col == col)
            .expect("block exists");
        m.coords[b.offset..b.offset + b.len].to_vec()
    }

    /// `g ∘ f`.
    pub fn add_compose(&self, f: &AddMorphism<F>, g: &AddMorphism<F>) -> Result<AddMorphism<F>> {
        if f.tgt != g.src {
            return Err(Error::NotComposable("additive morphisms".into()));
        }
        let (x, y, z) = (&f.src, &f.tgt, &g.tgt);
        let fl = &self.field;
        Ok(self.add_morphism(x, z, |k, i| {
            let (xi, zk) = (x.summands[i], z.summands[k]);
            let mut acc = vec![fl.zero(); self.hom_dim(xi, zk)];
            for (j, &yj) in y.summands.iter().enumerate() {
                let fj = self.add_entry(f, j, i);
                let gk = self.add_entry(g, k, j);
                let c = self.compose(xi, yj, zk, &fj, &gk);
                for (a, b) in acc.iter_mut().zip(&c) {
                    *a = fl.add(a, b);
                }
            }
            acc
        }))
    }

    pub fn kar_object(&self, base: AddObject, idem: AddMorphism<F>) -> Result<KarObject<F>> {
        if idem.src != base || idem.tgt != base {
            return Err(Error::CategoryMismatch(
                "idempotent on another object".into(),
            ));
        }
        if self.add_compose(&idem, &idem)? != idem {
            return Err(Error::NotIdempotent);
        }
        Ok(KarObject { base, idem })
    }

    pub fn kar_full(&self, base: AddObject) -> KarObject<F> {
        let idem = self.add_identity(&base);
        KarObject { base, idem }
    }

    /// `Hom((X, e), (Y, e')) = e' Hom(X, Y) e`, as the image of the
    /// projection `h ↦ e' h e`.
    pub fn kar_hom(&self, x: &KarObject<F>, y: &KarObject<F>) -> Result<HomBasis<F>> {
        let full = self.add_hom(&x.base, &y.base);
        let fl = &self.field;
        let mut cols = Vec::with_capacity(full.ambient);
        for k in 0..full.ambient {
            let mut coords = vec![fl.zero(); full.ambient];
            coords[k] = fl.one();
            let h = AddMorphism {
                src: x.base.clone(),
                tgt: y.base.clone(),
                coords,
            };
            let p = self.add_compose(&self.add_compose(&x.idem, &h)?, &y.idem)?;
            cols.push(p.coords);
        }
        let proj = Mat::from_columns(fl, full.ambient, &cols);
        Ok(HomBasis {
            ambient: full.ambient,
            blocks: full.blocks,
            span: proj.column_space(),
        })
    }

    /// Splits `e` through `(X, e)`: retraction `e: X -> (X, e)` and section
    /// `e: (X, e) -> X`, with both identities checked.
    pub fn split_idempotent(&self, x: &KarObject<F>) -> Result<Splitting<F>> {
        if self.add_compose(&x.idem, &x.idem)? != x.idem {
            return Err(Error::NotIdempotent);
        }
        let s = Splitting {
            retraction: x.idem.clone(),
            section: x.idem.clone(),
        };
        self.verify_splitting(&x.idem, &s, &x.idem)?;
        Ok(s)
    }

    /// Checks `e = section ∘ retraction` and `retraction ∘ section = unit`,
    /// where `unit` is the identity of the object split through.
    pub fn verify_splitting(
        &self,
        e: &AddMorphism<F>,
        s: &Splitting<F>,
        unit: &AddMorphism<F>,
    ) -> Result<()> {
        if self.add_compose(&s.retraction, &s.section)? != *e {
            return Err(Error::VerificationFailed("e != g f".into()));
        }
        if self.add_compose(&s.section, &s.retraction)? != *unit {
            return Err(Error::VerificationFailed("f g != 1".into()));
        }
        Ok(())
    }

    /// `End(X)` of an additive object, through its left regular
    /// representation.
    pub fn add_end_algebra(&self, x: &AddObject) -> MatrixAlgebra<F> {
        let d = self.add_hom(x, x).ambient;
        let fl = &self.field;
        let unit_vec = |k: usize| {
            let mut c = vec![fl.zero(); d];
            c[k] = fl.one();
            AddMorphism {
                src: x.clone(),
                tgt: x.clone(),
                coords: c,
            }
        };
        let basis: Vec<AddMorphism<F>> = (0..d).map(unit_vec).collect();
        MatrixAlgebra::from_structure(
            fl,
            d,
            |i, j| {
                self.add_compose(&basis[j], &basis[i])
                    .expect("endomorphisms compose")
                    .coords
            },
            &self.add_identity(x).coords,
        )
    }

    /// Krull-Schmidt decomposition: primitive orthogonal idempotents
    /// summing to `x.idem`, each giving a summand with local endomorphisms.
    pub fn decompose_object(&self, x: &KarObject<F>, seed: u64) -> Result<Vec<KarObject<F>>> {
        let alg = self.add_end_algebra(&x.base);
        let e = alg.elem(&x.idem.coords);
        let corner = alg.corner(&e);
        let idems = corner.primitive_idempotents(seed)?;
        verify_decomposition(&e, &idems)?;
        let unit = self.add_identity(&x.base).coords;
        let parts: Vec<KarObject<F>> = idems
            .iter()
            .map(|l| {
                let coords = l.apply(&unit);
                KarObject {
                    base: x.base.clone(),
                    idem: AddMorphism {
                        src: x.base.clone(),
                        tgt: x.base.clone(),
                        coords,
                    },
                }
            })
            .collect();
        self.verify_reassembly(x, &parts)?;
        Ok(parts)
    }

    /// The summands are orthogonal idempotents adding up to `x.idem`, so the
    /// row `(e_1 .. e_r)` and the column `(e_1; ..; e_r)` are mutually
    /// inverse between `x` and the direct sum of the parts.
    pub fn verify_reassembly(&self, x: &KarObject<F>, parts: &[KarObject<F>]) -> Result<()> {
        let mut sum = self.add_zero_morphism(&x.base, &x.base);
        for (i, a) in parts.iter().enumerate() {
            if a.base != x.base {
                return Err(Error::CategoryMismatch("summand on another base".into()));
            }
            if self.add_compose(&a.idem, &a.idem)? != a.idem {
                return Err(Error::NotIdempotent);
            }
            for (j, b) in parts.iter().enumerate() {
                let ab = self.add_compose(&b.idem, &a.idem)?;
                let expect = if i == j {
                    a.idem.clone()
                } else {
                    self.add_zero_morphism(&x.base, &x.base)
                };
                if ab != expect {
                    return Err(Error::VerificationFailed(
                        "summands are not orthogonal".into(),
                    ));
                }
            }
            for (s, t) in sum.coords.iter_mut().zip(&a.idem.coords) {
                *s = self.field.add(s, t);
            }
        }
        if sum != x.idem {
            return Err(Error::VerificationFailed("summands do not add up".into()));
        }
        Ok(())
    }
}
