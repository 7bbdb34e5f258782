use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::monomial::{Monomial, SliceBasis};
use crate::exact::{format_scalar, ExactMatrix, Scalar};

/// Sparse exact polynomial in `n` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::monomial(Monomial::one(n), c)
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(n, i), Scalar::one())
    }

    /// The linear form `sum_k coeffs[k] x_(k+1)`.
    pub fn linear_form(coeffs: &[(usize, Scalar)], n: usize) -> Self {
        let mut p = Self::zero(n);
        for (k, c) in coeffs {
            p.add_term(Monomial::var(n, *k), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(m.nvars(), self.n, "monomial has the wrong number of variables");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        use std::collections::btree_map::Entry;
        match entry {
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

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Poly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    /// Product with all terms of degree above `max_degree` dropped.
    pub fn mul_truncated(&self, other: &Poly, max_degree: usize) -> Poly {
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            let da = a.degree();
            if da > max_degree {
                continue;
            }
            for (b, cb) in &other.terms {
                if da + b.degree() <= max_degree {
                    out.add_term(a.mul(b), ca * cb);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, usize::MAX)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.min_degree() == self.max_degree()
    }

    pub fn slice(&self, d: usize) -> Poly {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        Poly { n: self.n, terms }
    }

    /// `p(Ax)`, expanded exactly.
    pub fn substitute_linear(&self, a: &ExactMatrix) -> Poly {
        let forms: Vec<Poly> = (0..self.n).map(|i| Poly::linear_form(a.row_entries(i), self.n)).collect();
        let mut cache: Vec<Vec<Poly>> = forms.iter().map(|f| vec![Poly::constant(self.n, Scalar::one()), f.clone()]).collect();
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(self.n, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = cache[i].last().expect("nonempty").mul(&forms[i]);
                    cache[i].push(next);
                }
                prod = prod.mul(&cache[i][e]);
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add(&prod);
        }
        out
    }

    /// Coordinates of the degree-`d` slice in the scalar monomial basis.
    pub fn to_coords(&self, basis: &SliceBasis) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); basis.scalar_dim()];
        for (m, c) in &self.terms {
            if let Some(i) = basis.monomial_index(m) {
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn from_coords(basis: &SliceBasis, coords: &[Scalar]) -> Poly {
        let mut p = Self::zero(basis.n());
        for (m, c) in basis.monomials().iter().zip(coords) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Poly {
    pub(crate) fn from_sparse_coords(basis: &SliceBasis, coords: &[(usize, Scalar)]) -> Poly {
        let mut p = Self::zero(basis.n());
        for (i, c) in coords {
            p.add_term(basis.monomials()[*i].clone(), c.clone());
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut ordered: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| b.0.cmp(a.0)));
        for (m, c) in ordered {
            write_term(f, c, &m.to_string(), first)?;
            first = false;
        }
        Ok(())
    }
}

/// Writes `± c*body` with the usual sign and unit-coefficient conventions.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, c: &Scalar, body: &str, first: bool) -> fmt::Result {
    let negative = c < &Scalar::zero();
    let abs = if negative { -c.clone() } else { c.clone() };
    let sign = match (first, negative) {
        (true, false) => "",
        (true, true) => "-",
        (false, false) => " + ",
        (false, true) => " - ",
    };
    if body == "1" {
        write!(f, "{sign}{}", format_scalar(&abs))
    } else if abs.is_one() {
        write!(f, "{sign}{body}")
    } else {
        write!(f, "{sign}{}*{body}", format_scalar(&abs))
    }
}
