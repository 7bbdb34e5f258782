use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::transvectant::factorial_scalar;
use crate::error::{Error, Result};
use crate::exact::{binom, format_scalar, Scalar};
use crate::poly::{Monomial, VectorPoly};

/// One term `c * prefix * F(x_lo, ..., x_hi) e_component` of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyTerm {
    /// One-based component index.
    pub component: usize,
    /// One-based indices of the prefix variables.
    pub prefix: Vec<usize>,
    /// One-based inclusive range of the arguments of `F`.
    pub arguments: (usize, usize),
    #[serde(serialize_with = "crate::mapfile::serialize_scalar")]
    pub coefficient: Scalar,
}

/// The image of `x1 x_(n-k+1) F(x1, ..., x_(n-k+1)) ⊗ e_n` under the
/// transvectant of order `p`, with `F` an arbitrary polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormFamily {
    pub k: usize,
    pub order: usize,
    /// Weight `(k - 1) + (n - 1) - 2p` of the family.
    pub weight: i64,
    pub terms: Vec<FamilyTerm>,
}

impl NormalFormFamily {
    /// Instantiates the family for `F = base`, a monomial in `x1..x_(n-k+1)`.
    pub fn instantiate(&self, base: &Monomial) -> Result<VectorPoly> {
        let n = base.nvars();
        let width = self.terms.first().map_or(0, |t| t.arguments.1 - t.arguments.0 + 1);
        if base.support().any(|v| v >= width) {
            return Err(Error::Precondition(format!("F may only use x1..x{width}")));
        }
        let mut out = VectorPoly::zero(n);
        for t in &self.terms {
            let shift = t.arguments.0 - 1;
            let mut e = vec![0u32; n];
            for (v, &a) in base.exponents().iter().enumerate().take(width) {
                e[v + shift] += a;
            }
            for &v in &t.prefix {
                e[v - 1] += 1;
            }
            out.add_term(Monomial::new(e), t.component - 1, t.coefficient.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for FamilyTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.prefix.iter().map(|v| format!("x{v}")).collect();
        let args = if self.arguments.0 == self.arguments.1 {
            format!("x{}", self.arguments.0)
        } else {
            format!("x{},...,x{}", self.arguments.0, self.arguments.1)
        };
        write!(f, "{}*{}*F({args})*e{}", format_scalar(&self.coefficient), prefix.join("*"), self.component)
    }
}

impl fmt::Display for NormalFormFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        write!(f, "k={} p={} weight={}: {}", self.k, self.order, self.weight, terms.join(" + "))
    }
}

/// Families of the normal form for one Jordan block of size `n`:
/// `k = 1..=n`, `p = 0..k`, each a sum over `i + j = p` of
/// `C(p,i) / (C(n-1,i) C(k-1,j) i! j!) x_(j+1) x_(n-k+j+1) F(x_(j+1), ..., x_(n-k+j+1)) e_(n-i)`.
pub fn describe_irreducible_nf(n: usize) -> Result<Vec<NormalFormFamily>> {
    if n < 2 {
        return Err(Error::Precondition("describe_irreducible_nf needs n >= 2".into()));
    }
    let mut out = Vec::new();
    for k in 1..=n {
        for p in 0..k {
            let mut terms = Vec::new();
            for i in 0..=p.min(n - 1) {
                let j = p - i;
                let c = binom(p as i64, i as i64)
                    / (binom(n as i64 - 1, i as i64)
                        * binom(k as i64 - 1, j as i64)
                        * factorial_scalar(i)
                        * factorial_scalar(j));
                if c.is_zero() {
                    continue;
                }
                let lo = j + 1;
                let hi = n - k + j + 1;
                let mut prefix = vec![lo, hi];
                prefix.dedup();
                terms.push(FamilyTerm { component: n - i, prefix, arguments: (lo, hi), coefficient: c });
            }
            let weight = (k as i64 - 1) + (n as i64 - 1) - 2 * p as i64;
            out.push(NormalFormFamily { k, order: p, weight, terms });
        }
    }
    Ok(out)
}
