use num_traits::{One, Zero};

use super::monomial::{Monomial, SliceBasis};
use super::scalar_poly::Poly;
use super::vector_poly::VectorPoly;
use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Scalar};

fn check_dims(a: &ExactMatrix, phi: &VectorPoly) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    if a.rows() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: phi.dim() });
    }
    Ok(())
}

/// `x -> A phi(x)`.
pub fn mult_op(a: &ExactMatrix, phi: &VectorPoly) -> Result<VectorPoly> {
    check_dims(a, phi)?;
    let mut out = VectorPoly::zero(phi.dim());
    for (m, j, c) in phi.terms() {
        for i in 0..a.rows() {
            let aij = a.at(i, j);
            if !aij.is_zero() {
                out.add_term(m.clone(), i, aij * c);
            }
        }
    }
    Ok(out)
}

/// `x -> phi(A x)`.
pub fn subs_op(a: &ExactMatrix, phi: &VectorPoly) -> Result<VectorPoly> {
    check_dims(a, phi)?;
    let comps: Vec<Poly> = phi.components().iter().map(|p| p.substitute_linear(a)).collect();
    Ok(VectorPoly::from_components(&comps))
}

/// Homological operator `x -> A phi(x) - phi(A x)`.
pub fn homological_op(a: &ExactMatrix, phi: &VectorPoly) -> Result<VectorPoly> {
    Ok(mult_op(a, phi)?.sub(&subs_op(a, phi)?))
}

/// Matrix of `p -> p(Ax)` on the scalar slice `P_d`.
pub fn scalar_subs_matrix(a: &ExactMatrix, d: usize) -> ExactMatrix {
    let basis = SliceBasis::new(a.rows(), d);
    scalar_subs_matrix_on(a, &basis)
}

pub(crate) fn scalar_subs_matrix_on(a: &ExactMatrix, basis: &SliceBasis) -> ExactMatrix {
    let columns = basis
        .monomials()
        .iter()
        .map(|m| {
            let image = Poly::monomial(m.clone(), Scalar::one()).substitute_linear(a);
            image.terms().filter_map(|(mm, c)| basis.monomial_index(mm).map(|i| (i, c.clone()))).collect()
        })
        .collect();
    ExactMatrix::from_sparse_columns(basis.scalar_dim(), columns)
}

/// `n` diagonal copies of a scalar-slice operator: its action on every component.
pub fn componentwise(n: usize, scalar_op: &ExactMatrix) -> ExactMatrix {
    ExactMatrix::block_diagonal(&vec![scalar_op.clone(); n])
}

/// Matrix of `phi -> A phi` on `P_d ⊗ R^n`, where `dim P_d = s`.
pub fn mult_matrix(a: &ExactMatrix, s: usize) -> ExactMatrix {
    let n = a.rows();
    let mut m = ExactMatrix::zeros(n * s, n * s);
    for i in 0..n {
        for (j, v) in a.row_entries(i) {
            for k in 0..s {
                m.set(i * s + k, j * s + k, v.clone());
            }
        }
    }
    m
}

/// Description of a linear operator on polynomial maps.
#[derive(Clone, Debug)]
pub enum LinearOp {
    Mult(ExactMatrix),
    Subs(ExactMatrix),
    Homological(ExactMatrix),
    Scale(Scalar, Box<LinearOp>),
    Sum(Vec<LinearOp>),
    /// Composition; the last operator is applied first.
    Compose(Vec<LinearOp>),
}

impl LinearOp {
    pub fn apply(&self, phi: &VectorPoly) -> Result<VectorPoly> {
        match self {
            LinearOp::Mult(a) => mult_op(a, phi),
            LinearOp::Subs(a) => subs_op(a, phi),
            LinearOp::Homological(a) => homological_op(a, phi),
            LinearOp::Scale(s, op) => Ok(op.apply(phi)?.scale(s)),
            LinearOp::Sum(ops) => {
                let mut acc = VectorPoly::zero(phi.dim());
                for op in ops {
                    acc = acc.checked_add(&op.apply(phi)?)?;
                }
                Ok(acc)
            }
            LinearOp::Compose(ops) => {
                let mut acc = phi.clone();
                for op in ops.iter().rev() {
                    acc = op.apply(&acc)?;
                }
                Ok(acc)
            }
        }
    }

    fn matrix_on(&self, basis: &SliceBasis) -> ExactMatrix {
        let n = basis.n();
        let s = basis.scalar_dim();
        match self {
            LinearOp::Mult(a) => mult_matrix(a, s),
            LinearOp::Subs(a) => componentwise(n, &scalar_subs_matrix_on(a, basis)),
            LinearOp::Homological(a) => {
                &mult_matrix(a, s) - &componentwise(n, &scalar_subs_matrix_on(a, basis))
            }
            LinearOp::Scale(c, op) => op.matrix_on(basis).scale(c),
            LinearOp::Sum(ops) => ops
                .iter()
                .fold(ExactMatrix::zeros(n * s, n * s), |acc, op| &acc + &op.matrix_on(basis)),
            LinearOp::Compose(ops) => ops
                .iter()
                .fold(ExactMatrix::identity(n * s), |acc, op| &acc * &op.matrix_on(basis)),
        }
    }
}

/// Matrix of a linear operator on one homogeneous slice `P_d ⊗ R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOperator {
    pub n: usize,
    pub degree: usize,
    pub matrix: ExactMatrix,
}

impl GradedOperator {
    pub fn basis(&self) -> SliceBasis {
        SliceBasis::new(self.n, self.degree)
    }

    /// Applies the operator to the degree-`d` slice of `phi`.
    pub fn apply(&self, phi: &VectorPoly) -> VectorPoly {
        let basis = self.basis();
        self.apply_in(&basis, phi)
    }

    pub(crate) fn apply_in(&self, basis: &SliceBasis, phi: &VectorPoly) -> VectorPoly {
        VectorPoly::from_coords(basis, &self.matrix.mul_vec(&phi.to_coords(basis)))
    }
}

/// Realizes `op` as a matrix on `P_d ⊗ R^n` in the canonical basis.
pub fn operator_matrix(op: &LinearOp, n: usize, d: usize) -> GradedOperator {
    let basis = SliceBasis::new(n, d);
    GradedOperator { n, degree: d, matrix: op.matrix_on(&basis) }
}

/// Matrix whose column for each basis element `b` is `op(b)`, built by
/// applying the operator to every basis element.
pub fn operator_matrix_by_columns(op: &LinearOp, n: usize, d: usize) -> Result<GradedOperator> {
    let basis = SliceBasis::new(n, d);
    let mut columns = Vec::with_capacity(basis.dim());
    for pos in 0..basis.dim() {
        let (m, j) = basis.element(pos);
        let image = op.apply(&VectorPoly::term(m.clone(), j, Scalar::one()))?;
        columns.push(
            image.terms().filter_map(|(mm, jj, c)| basis.position(mm, jj).map(|p| (p, c.clone()))).collect(),
        );
    }
    Ok(GradedOperator { n, degree: d, matrix: ExactMatrix::from_sparse_columns(basis.dim(), columns) })
}

/// Convenience constructor for a monomial in tests and examples.
pub fn mono(exponents: &[u32]) -> Monomial {
    Monomial::new(exponents.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn n2() -> ExactMatrix {
        ExactMatrix::from_i64(&[&[0, 1], &[0, 0]])
    }

    #[test]
    fn mult_examples() {
        let phi = VectorPoly::unit(&[2, 0], 1);
        assert_eq!(mult_op(&ExactMatrix::identity(2), &phi).unwrap(), phi);
        assert_eq!(mult_op(&n2(), &phi).unwrap(), VectorPoly::unit(&[2, 0], 0));
        assert!(mult_op(&ExactMatrix::zeros(2, 2), &phi).unwrap().is_zero());
        assert!(mult_op(&ExactMatrix::identity(3), &phi).is_err());
    }

    #[test]
    fn subs_examples() {
        let phi = VectorPoly::unit(&[2, 0], 1);
        assert_eq!(subs_op(&ExactMatrix::identity(2), &phi).unwrap(), phi);
        assert_eq!(subs_op(&n2(), &phi).unwrap(), VectorPoly::unit(&[0, 2], 1));
        assert!(subs_op(&n2(), &VectorPoly::unit(&[1, 1], 0)).unwrap().is_zero());
    }

    #[test]
    fn homological_examples() {
        let phi = VectorPoly::unit(&[2, 0], 1);
        let expected = VectorPoly::unit(&[2, 0], 0).sub(&VectorPoly::unit(&[0, 2], 1));
        assert_eq!(homological_op(&n2(), &phi).unwrap(), expected);
        let a = ExactMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        let b = ExactMatrix::from_i64(&[&[3, 5], &[0, 3]]);
        assert!(homological_op(&a, &VectorPoly::linear(&b)).unwrap().is_zero());
        let q = VectorPoly::unit(&[1, 1], 0);
        assert!(homological_op(&ExactMatrix::zeros(2, 2), &q).unwrap().is_zero());
    }

    #[test]
    fn operator_matrix_examples() {
        let id = operator_matrix(&LinearOp::Mult(ExactMatrix::identity(2)), 2, 3);
        assert_eq!(id.matrix, ExactMatrix::identity(8));
        let s = operator_matrix(&LinearOp::Subs(n2()), 2, 2);
        assert_eq!(s.matrix.rows(), 6);
        assert!(!s.matrix.is_zero());
        assert!(s.matrix.pow(2).is_zero());
        let h = operator_matrix(&LinearOp::Homological(n2()), 2, 1);
        assert_eq!(h.matrix.rank(), 2);
    }

    #[test]
    fn structural_and_columnwise_matrices_agree() {
        let a = ExactMatrix::from_i64(&[&[1, 2, 0], &[0, -1, 1], &[3, 0, 1]]);
        let b = ExactMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let op = LinearOp::Sum(vec![
            LinearOp::Compose(vec![LinearOp::Subs(a.clone()), LinearOp::Mult(b.clone())]),
            LinearOp::Scale(int(3), Box::new(LinearOp::Homological(b))),
            LinearOp::Subs(a),
        ]);
        for d in 0..=3 {
            assert_eq!(operator_matrix(&op, 3, d), operator_matrix_by_columns(&op, 3, d).unwrap());
        }
    }
}
