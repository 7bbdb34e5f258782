use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_integer::binomial;

/// Exponent vector of a monomial in `n` variables.
///
/// Ordered graded-lexicographically with `x1 > x2 > ... > xn`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The variable `x_(i+1)` (zero-based `i`).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Zero-based indices of the variables that occur.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// `dim P_d = C(d + n - 1, n - 1)`.
pub fn slice_dim(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binomial(d + n - 1, n - 1)
}

/// All monomials of degree `d` in `n` variables, in descending order.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(slice_dim(n, d));
    if n > 0 {
        rec(n, d as u32, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Canonical basis of a homogeneous slice `P_d ⊗ R^n`.
///
/// The coordinate of `x^a e_j` is `j * dim P_d + position of x^a`, with
/// monomials listed in descending order.
#[derive(Clone, Debug)]
pub struct SliceBasis {
    n: usize,
    degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl SliceBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        let monomials = monomials_of_degree(n, degree);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        SliceBasis { n, degree, monomials, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn scalar_dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn dim(&self) -> usize {
        self.n * self.monomials.len()
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinate of `x^a e_(comp+1)`.
    pub fn position(&self, m: &Monomial, comp: usize) -> Option<usize> {
        if comp >= self.n {
            return None;
        }
        self.monomial_index(m).map(|i| comp * self.monomials.len() + i)
    }

    /// Inverse of [`SliceBasis::position`].
    pub fn element(&self, pos: usize) -> (&Monomial, usize) {
        let s = self.monomials.len();
        (&self.monomials[pos % s], pos / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![1, 1]);
        let c = Monomial::new(vec![0, 2]);
        let d = Monomial::new(vec![3, 0]);
        assert!(a > b && b > c && d > a);
        assert!(Monomial::new(vec![0, 0, 1]) < Monomial::new(vec![0, 1, 0]));
    }

    #[test]
    fn enumeration() {
        let m = monomials_of_degree(2, 2);
        let e: Vec<&[u32]> = m.iter().map(|x| x.exponents()).collect();
        assert_eq!(e, vec![&[2, 0][..], &[1, 1], &[0, 2]]);
        for n in 1..5 {
            for d in 0..5 {
                let ms = monomials_of_degree(n, d);
                assert_eq!(ms.len(), slice_dim(n, d));
                assert!(ms.windows(2).all(|w| w[0] > w[1]));
            }
        }
        assert_eq!(monomials_of_degree(3, 0), vec![Monomial::one(3)]);
    }

    #[test]
    fn positions() {
        let b = SliceBasis::new(2, 2);
        assert_eq!(b.dim(), 6);
        let m = Monomial::new(vec![0, 2]);
        assert_eq!(b.position(&m, 1), Some(5));
        assert_eq!(b.element(5), (&m, 1));
        assert_eq!(b.position(&m, 2), None);
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::new(vec![2, 1, 0]).to_string(), "x1^2*x2");
        assert_eq!(Monomial::one(2).to_string(), "1");
    }
}
