use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Field;

use super::{FinCategory, Morph, Sparse};

/// `B ⊗ A` together with its factors. Object `(l, r)` has index
/// `l * |A| + r`; basis element `(i, j)` has index `i * |basis A| + j`.
#[derive(Debug, Clone)]
pub struct TensorCategory<F: Field> {
    pub cat: Arc<FinCategory<F>>,
    pub left: Arc<FinCategory<F>>,
    pub right: Arc<FinCategory<F>>,
}

impl<F: Field> TensorCategory<F> {
    pub fn object(&self, l: usize, r: usize) -> usize {
        l * self.right.num_objects() + r
    }

    pub fn split_object(&self, x: usize) -> (usize, usize) {
        let nr = self.right.num_objects();
        (x / nr, x % nr)
    }

    pub fn morph(&self, i: usize, j: usize) -> usize {
        i * self.right.basis().len() + j
    }

    pub fn split_morph(&self, b: usize) -> (usize, usize) {
        let nr = self.right.basis().len();
        (b / nr, b % nr)
    }
}

fn kron<F: Field>(field: &F, a: &Sparse<F>, b: &Sparse<F>, nr: usize) -> Sparse<F> {
    let mut out: Sparse<F> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a {
        for (j, y) in b {
            out.push((i * nr + j, field.mul(x, y)));
        }
    }
    out
}

/// Objects are pairs, `Hom((x, y), (x', y')) = B(x, x') ⊗ A(y, y')`, and
/// composition is componentwise.
pub fn tensor_product<F: Field>(
    left: Arc<FinCategory<F>>,
    right: Arc<FinCategory<F>>,
) -> Result<TensorCategory<F>> {
    if left.field() != right.field() {
        return Err(Error::FieldMismatch);
    }
    let field = left.field().clone();
    let (nl, nr) = (left.num_objects(), right.num_objects());
    let nbr = right.basis().len();
    let mut objects = Vec::with_capacity(nl * nr);
    for l in left.objects() {
        for r in right.objects() {
            objects.push(format!("({l},{r})"));
        }
    }
    let mut basis = Vec::with_capacity(left.basis().len() * nbr);
    for bl in left.basis() {
        for br in right.basis() {
            basis.push(Morph {
                src: bl.src * nr + br.src,
                tgt: bl.tgt * nr + br.tgt,
                label: format!("{}⊗{}", bl.label, br.label),
            });
        }
    }
    let mut units = Vec::with_capacity(nl * nr);
    for l in 0..nl {
        for r in 0..nr {
            units.push(kron(&field, left.unit(l), right.unit(r), nbr));
        }
    }
    let name = format!("({})⊗({})", left.name(), right.name());
    let cat = FinCategory::new(
        &field,
        name,
        objects,
        basis,
        |p, q| {
            let (i, j) = (p / nbr, p % nbr);
            let (i2, j2) = (q / nbr, q % nbr);
            let l = left.comp(i, i2).expect("left factors compose");
            let r = right.comp(j, j2).expect("right factors compose");
            kron(&field, l, r, nbr)
        },
        units,
    )?;
    Ok(TensorCategory {
        cat: Arc::new(cat),
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::category_of;
    use crate::linalg::PrimeField;
    use crate::quiver::{BoundQuiver, MonomialIdeal, Quiver};

    fn f() -> PrimeField {
        PrimeField::default()
    }

    fn a2() -> Arc<FinCategory<PrimeField>> {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        Arc::new(category_of(&f(), &BoundQuiver::free(q).unwrap()))
    }

    #[test]
    fn unit_factor() {
        let b = a2();
        let t = tensor_product(b.clone(), Arc::new(FinCategory::point(&f()))).unwrap();
        assert_eq!(t.cat.num_objects(), 2);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(t.cat.hom_dim(x, y), b.hom_dim(x, y));
            }
        }
    }

    #[test]
    fn a2_squared() {
        let t = tensor_product(a2(), a2()).unwrap();
        assert_eq!(t.cat.num_objects(), 4);
        assert_eq!(t.cat.hom_dim(t.object(0, 0), t.object(1, 1)), 1);
        assert_eq!(t.cat.hom_dim(t.object(1, 0), t.object(0, 1)), 0);
    }

    #[test]
    fn dims_multiply() {
        let z = Quiver::cyclic(2);
        let i = MonomialIdeal::all_paths_of_length(&z, 2).unwrap();
        let cz = Arc::new(category_of(&f(), &BoundQuiver::new(z, i).unwrap()));
        let q3 = Quiver::linear(3);
        let r2 = MonomialIdeal::all_paths_of_length(&q3, 2).unwrap();
        let c3 = Arc::new(category_of(&f(), &BoundQuiver::new(q3, r2).unwrap()));
        let t = tensor_product(cz.clone(), c3.clone()).unwrap();
        for x in 0..t.cat.num_objects() {
            for y in 0..t.cat.num_objects() {
                let (xl, xr) = t.split_object(x);
                let (yl, yr) = t.split_object(y);
                assert_eq!(t.cat.hom_dim(x, y), cz.hom_dim(xl, yl) * c3.hom_dim(xr, yr));
            }
        }
        t.cat.radical(0).unwrap();
    }

    #[test]
    fn field_mismatch() {
        let other = Arc::new(FinCategory::point(&PrimeField::new(7).unwrap()));
        assert_eq!(
            tensor_product(a2(), other).unwrap_err(),
            Error::FieldMismatch
        );
    }
}
