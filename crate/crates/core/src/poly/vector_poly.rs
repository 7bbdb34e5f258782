use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::monomial::{Monomial, SliceBasis};
use super::scalar_poly::{write_term, Poly};
use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, Scalar};

/// Sparse exact polynomial map `R^n -> R^n`.
///
/// Terms are keyed by `(monomial, component)` with zero-based components;
/// `x^a e_(j+1)` is stored under `(x^a, j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorPoly {
    n: usize,
    terms: BTreeMap<(Monomial, usize), Scalar>,
}

impl VectorPoly {
    pub fn zero(n: usize) -> Self {
        VectorPoly { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(&ExactMatrix::identity(n))
    }

    /// `x -> A x`.
    pub fn linear(a: &ExactMatrix) -> Self {
        let n = a.rows();
        let mut out = Self::zero(n);
        for i in 0..n {
            for (k, c) in a.row_entries(i) {
                out.add_term(Monomial::var(n, *k), i, c.clone());
            }
        }
        out
    }

    /// Single term `c x^a e_(comp+1)`.
    pub fn term(m: Monomial, comp: usize, c: Scalar) -> Self {
        let mut out = Self::zero(m.nvars());
        out.add_term(m, comp, c);
        out
    }

    /// `x^exponents e_(comp+1)` with coefficient one.
    pub fn unit(exponents: &[u32], comp: usize) -> Self {
        Self::term(Monomial::new(exponents.to_vec()), comp, Scalar::one())
    }

    pub fn from_components(components: &[Poly]) -> Self {
        let n = components.len();
        let mut out = Self::zero(n);
        for (j, p) in components.iter().enumerate() {
            assert_eq!(p.nvars(), n, "component has the wrong number of variables");
            for (m, c) in p.terms() {
                out.add_term(m.clone(), j, c.clone());
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, usize, &Scalar)> {
        self.terms.iter().map(|((m, j), c)| (m, *j, c))
    }

    /// Terms sorted by ascending degree, then canonical slice order
    /// (component-major, monomials descending).
    pub fn canonical_terms(&self) -> Vec<(&Monomial, usize, &Scalar)> {
        let mut out: Vec<_> = self.terms().collect();
        out.sort_by(|a, b| {
            a.0.degree().cmp(&b.0.degree()).then(a.1.cmp(&b.1)).then_with(|| b.0.cmp(a.0))
        });
        out
    }

    pub fn coeff(&self, m: &Monomial, comp: usize) -> Scalar {
        self.terms.get(&(m.clone(), comp)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, comp: usize, c: Scalar) {
        assert_eq!(m.nvars(), self.n, "monomial has the wrong number of variables");
        assert!(comp < self.n, "component {comp} out of range");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((m, comp)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &VectorPoly) -> Result<VectorPoly> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut out = self.clone();
        for ((m, j), c) in &other.terms {
            out.add_term(m.clone(), *j, c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &VectorPoly) -> VectorPoly {
        self.checked_add(other).expect("dimension mismatch in VectorPoly::add")
    }

    pub fn sub(&self, other: &VectorPoly) -> VectorPoly {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> VectorPoly {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        VectorPoly { n: self.n, terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect() }
    }

    pub fn component(&self, j: usize) -> Poly {
        let mut p = Poly::zero(self.n);
        for ((m, comp), c) in &self.terms {
            if *comp == j {
                p.add_term(m.clone(), c.clone());
            }
        }
        p
    }

    pub fn components(&self) -> Vec<Poly> {
        (0..self.n).map(|j| self.component(j)).collect()
    }

    /// Degree-`d` part.
    pub fn slice(&self, d: usize) -> VectorPoly {
        self.filter_degree(|e| e == d)
    }

    /// Terms of degree at most `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> VectorPoly {
        self.filter_degree(|e| e <= max_degree)
    }

    /// Terms of degree at least two.
    pub fn nonlinear_part(&self) -> VectorPoly {
        self.filter_degree(|e| e >= 2)
    }

    fn filter_degree(&self, keep: impl Fn(usize) -> bool) -> VectorPoly {
        let terms = self
            .terms
            .iter()
            .filter(|((m, _), _)| keep(m.degree()))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        VectorPoly { n: self.n, terms }
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.keys().any(|(m, _)| m.degree() == 0)
    }

    /// Matrix of the degree-one part.
    pub fn linear_part(&self) -> ExactMatrix {
        let mut a = ExactMatrix::zeros(self.n, self.n);
        for ((m, j), c) in &self.terms {
            if m.degree() == 1 {
                let k = m.support().next().expect("degree one monomial has a variable");
                a.set(*j, k, c.clone());
            }
        }
        a
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|(m, _)| m.degree()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(m, _)| m.degree()).max()
    }

    /// Degree when all terms share one degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Coordinates of the slice of degree `basis.degree()`; other terms are ignored.
    pub fn to_coords(&self, basis: &SliceBasis) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); basis.dim()];
        for ((m, j), c) in &self.terms {
            if let Some(pos) = basis.position(m, *j) {
                v[pos] = c.clone();
            }
        }
        v
    }

    pub fn from_coords(basis: &SliceBasis, coords: &[Scalar]) -> VectorPoly {
        let mut out = Self::zero(basis.n());
        for (pos, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                let (m, j) = basis.element(pos);
                out.add_term(m.clone(), j, c.clone());
            }
        }
        out
    }
}

impl VectorPoly {
    pub(crate) fn from_sparse_coords(basis: &SliceBasis, coords: &[(usize, Scalar)]) -> VectorPoly {
        let mut out = Self::zero(basis.n());
        for (pos, c) in coords {
            let (m, j) = basis.element(*pos);
            out.add_term(m.clone(), j, c.clone());
        }
        out
    }
}

impl fmt::Display for VectorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, j, c)) in self.canonical_terms().into_iter().enumerate() {
            let body = if m.degree() == 0 { format!("e{}", j + 1) } else { format!("{m}*e{}", j + 1) };
            write_term(f, c, &body, k == 0)?;
        }
        Ok(())
    }
}
