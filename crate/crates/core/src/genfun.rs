//! Truncated bivariate generating functions and the dimension audits built
//! on them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binom, format_scalar, int, Scalar};
use crate::nilpotent::NilpotentSpec;
use crate::poly::slice_dim;
use crate::sl2::{kernel_basis, starred_kernel_basis};

/// Power series in `(u, t)` truncated above `t^max_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    max_t: usize,
    /// `(t power, u power) -> coefficient`, no zeros stored.
    coeffs: BTreeMap<(usize, usize), Scalar>,
}

impl BiSeries {
    pub fn zero(max_t: usize) -> Self {
        BiSeries { max_t, coeffs: BTreeMap::new() }
    }

    pub fn monomial(max_t: usize, c: Scalar, u: usize, t: usize) -> Self {
        let mut s = Self::zero(max_t);
        s.add_coeff(u, t, c);
        s
    }

    pub fn max_t(&self) -> usize {
        self.max_t
    }

    pub fn coeff(&self, u: usize, t: usize) -> Scalar {
        self.coeffs.get(&(t, u)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `c u^u t^t`; terms beyond the truncation are dropped.
    pub fn add_coeff(&mut self, u: usize, t: usize, c: Scalar) {
        if t > self.max_t || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((t, u)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(t, u));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.coeffs.iter().map(|((t, u), c)| (*u, *t, c))
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries { max_t: self.max_t.min(other.max_t), coeffs: BTreeMap::new() };
        for (u, t, c) in self.terms().chain(other.terms()) {
            out.add_coeff(u, t, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> BiSeries {
        let mut out = BiSeries::zero(self.max_t);
        for (u, t, c) in self.terms() {
            out.add_coeff(u, t, c * s);
        }
        out
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries::zero(self.max_t.min(other.max_t));
        for (u1, t1, c1) in self.terms() {
            for (u2, t2, c2) in other.terms() {
                out.add_coeff(u1 + u2, t1 + t2, c1 * c2);
            }
        }
        out
    }

    /// Coefficients of `t^0..=t^max_t` at `u = 1`.
    pub fn at_u_one(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.max_t + 1];
        for (_, t, c) in self.terms() {
            v[t] += c;
        }
        v
    }

    /// Coefficients of `d/du (u G)` at `u = 1`.
    pub fn cushman_sanders_totals(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.max_t + 1];
        for (u, t, c) in self.terms() {
            v[t] += c * int(u as i64 + 1);
        }
        v
    }

    pub fn truncate(&self, max_t: usize) -> BiSeries {
        let mut out = BiSeries::zero(max_t.min(self.max_t));
        for (u, t, c) in self.terms() {
            out.add_coeff(u, t, c.clone());
        }
        out
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (u, t, c) in self.terms() {
            let mut body = Vec::new();
            if u > 0 {
                body.push(if u == 1 { "u".to_string() } else { format!("u^{u}") });
            }
            if t > 0 {
                body.push(if t == 1 { "t".to_string() } else { format!("t^{t}") });
            }
            let body = body.join("*");
            parts.push(match (body.is_empty(), c.is_one()) {
                (true, _) => format_scalar(c),
                (false, true) => body,
                (false, false) => format!("{}*{body}", format_scalar(c)),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(t^{})", parts.join(" + "), self.max_t + 1)
    }
}

/// Coefficient of `t^d` in `t^b / (1 - t)^e`.
pub fn rational_coefficient(b: usize, e: i64, d: usize) -> Scalar {
    if d < b {
        return Scalar::zero();
    }
    let k = (d - b) as i64;
    if e > 0 {
        binom(k + e - 1, e - 1)
    } else {
        // (1 - t)^|e| is a polynomial
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        sign * binom(-e, k)
    }
}

/// One term `c u^u t^t / (1 - t)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfTerm {
    pub coeff: Scalar,
    pub u: usize,
    pub t: usize,
    pub e: i64,
}

/// Symbolic sum of [`GfTerm`]s, expanded only on demand.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClosedFormGF {
    pub terms: Vec<GfTerm>,
}

impl ClosedFormGF {
    pub fn push(&mut self, coeff: Scalar, u: usize, t: usize, e: i64) {
        if !coeff.is_zero() {
            self.terms.push(GfTerm { coeff, u, t, e });
        }
    }

    pub fn expand(&self, max_t: usize) -> BiSeries {
        let mut s = BiSeries::zero(max_t);
        for term in &self.terms {
            for d in term.t..=max_t {
                s.add_coeff(term.u, d, &term.coeff * rational_coefficient(term.t, term.e, d));
            }
        }
        s
    }

    /// The same sum with every `u` set to one.
    pub fn at_u_one(&self) -> ClosedFormGF {
        ClosedFormGF { terms: self.terms.iter().map(|t| GfTerm { u: 0, ..t.clone() }).collect() }
    }

    /// `d/du (u G)` at `u = 1`.
    pub fn cushman_sanders(&self) -> ClosedFormGF {
        ClosedFormGF {
            terms: self
                .terms
                .iter()
                .map(|t| GfTerm { coeff: &t.coeff * int(t.u as i64 + 1), u: 0, ..t.clone() })
                .collect(),
        }
    }
}

impl fmt::Display for ClosedFormGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            let negative = term.coeff < Scalar::zero();
            let abs = if negative { -term.coeff.clone() } else { term.coeff.clone() };
            let sign = match (k == 0, negative) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            let mut num = Vec::new();
            if !abs.is_one() {
                num.push(format_scalar(&abs));
            }
            match term.u {
                0 => {}
                1 => num.push("u".into()),
                u => num.push(format!("u^{u}")),
            }
            match term.t {
                0 => {}
                1 => num.push("t".into()),
                t => num.push(format!("t^{t}")),
            }
            let num = if num.is_empty() { "1".to_string() } else { num.join("*") };
            let den = match term.e {
                0 => String::new(),
                1 => "/(1-t)".to_string(),
                e if e > 0 => format!("/(1-t)^{e}"),
                e => format!("*(1-t)^{}", -e),
            };
            write!(f, "{sign}{num}{den}")?;
        }
        Ok(())
    }
}

/// Kernel generating function from data: `t^d` for the slice `P_d ⊗ R^n`,
/// `u^w` for a kernel vector of weight `w`.
pub fn empirical_gf(spec: &NilpotentSpec, max_t: usize) -> Result<BiSeries> {
    let mut s = BiSeries::zero(max_t);
    for d in 0..=max_t {
        for v in kernel_basis(spec, d)?.vectors {
            s.add_coeff(weight_index(v.weight)?, d, Scalar::one());
        }
    }
    Ok(s)
}

/// Generating function of `ker (starred m)` on scalar slices.
pub fn empirical_subs_kernel_gf(spec: &NilpotentSpec, max_t: usize) -> Result<BiSeries> {
    let mut s = BiSeries::zero(max_t);
    for d in 0..=max_t {
        for v in starred_kernel_basis(spec, d)? {
            s.add_coeff(weight_index(v.weight)?, d, Scalar::one());
        }
    }
    Ok(s)
}

fn weight_index(w: i64) -> Result<usize> {
    usize::try_from(w).map_err(|_| Error::NotTopWeight(format!("kernel vector with negative weight {w}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsRow {
    pub degree: usize,
    pub kernel_dim: usize,
    pub weights: Vec<i64>,
    pub weight_sum: i64,
    pub expected: i64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsReport {
    pub blocks: Vec<usize>,
    pub rows: Vec<CsRow>,
}

impl CsReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.rows.iter().find(|r| !r.passed).map(|r| r.degree)
    }
}

/// Checks `sum (weight + 1) = n C(d + n - 1, n - 1)` for `d = 0..=max_t`.
pub fn cushman_sanders_check(spec: &NilpotentSpec, max_t: usize) -> Result<CsReport> {
    let n = spec.dim();
    let mut rows = Vec::new();
    for d in 0..=max_t {
        let k = kernel_basis(spec, d)?;
        let weights = k.weights();
        let weight_sum = weights.iter().map(|w| w + 1).sum();
        let expected = (n * slice_dim(n, d)) as i64;
        rows.push(CsRow { degree: d, kernel_dim: k.dim(), weights, weight_sum, expected, passed: weight_sum == expected });
    }
    Ok(CsReport { blocks: spec.blocks().to_vec(), rows })
}

fn check_order(k1: usize, k2: usize) -> Result<()> {
    if k1 == 0 {
        return Err(Error::InvalidBlocks("block sizes must be positive".into()));
    }
    if k1 > k2 {
        return Err(Error::BlockOrder(k1, k2));
    }
    Ok(())
}

/// `2/(1-t)^(k1+k2) - sum_(i=1)^(k2-k1) t/(1-t)^i`, the `u = 1` kernel
/// generating function of a two-block spec.
pub fn closed_form_kernel_gf(k1: usize, k2: usize) -> Result<ClosedFormGF> {
    check_order(k1, k2)?;
    let mut g = ClosedFormGF::default();
    g.push(int(2), 0, 0, (k1 + k2) as i64);
    for i in 1..=(k2 - k1) {
        g.push(int(-1), 0, 1, i as i64);
    }
    Ok(g)
}

/// Conjectured `u = 1` kernel generating function for any block list:
/// `b/(1-t)^n - sum_(n_j < n_i) sum_(k=1)^(n_i - n_j) t/(1-t)^k`.
pub fn conjectured_gf(blocks: &[usize]) -> ClosedFormGF {
    let n: usize = blocks.iter().sum();
    let mut g = ClosedFormGF::default();
    g.push(int(blocks.len() as i64), 0, 0, n as i64);
    for &ni in blocks {
        for &nj in blocks {
            if nj < ni {
                for k in 1..=(ni - nj) {
                    g.push(int(-1), 0, 1, k as i64);
                }
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub blocks: Vec<usize>,
    #[serde(serialize_with = "serialize_scalars")]
    pub conjectured: Vec<Scalar>,
    #[serde(serialize_with = "serialize_scalars")]
    pub empirical: Vec<Scalar>,
    pub first_disagreement: Option<usize>,
    /// Whether agreement is a proven statement for this block count (at most two blocks).
    pub covered_by_proof: bool,
}

impl ConjectureReport {
    pub fn agrees(&self) -> bool {
        self.first_disagreement.is_none()
    }
}

fn serialize_scalars<S: serde::Serializer>(v: &[Scalar], ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(v.len()))?;
    for s in v {
        seq.serialize_element(&format_scalar(s))?;
    }
    seq.end()
}

/// Compares [`conjectured_gf`] with the empirical kernel dimensions.
pub fn conjecture_check(spec: &NilpotentSpec, max_t: usize) -> Result<ConjectureReport> {
    if max_t == 0 {
        return Err(Error::Precondition("conjecture_check needs T >= 1".into()));
    }
    let conjectured = conjectured_gf(spec.blocks()).expand(max_t).at_u_one();
    let empirical = empirical_gf(spec, max_t)?.at_u_one();
    let first_disagreement = (0..=max_t).find(|&d| conjectured[d] != empirical[d]);
    Ok(ConjectureReport {
        blocks: spec.blocks().to_vec(),
        conjectured,
        empirical,
        first_disagreement,
        covered_by_proof: spec.blocks().len() <= 2,
    })
}

/// Closed form of the starred-kernel generating function of a two-block
/// spec `(k1, k2)` with `tau = 1 - t`:
///
/// `1 + sum_(i=0)^(k1-2) u^i t^2 / tau^(k1+k2-2i) + 2 sum_(i=0)^(k1-2) u^i t^2 / tau^(k1+k2-2i-1)
///  + sum_(i=0)^(k1-3) u^i t^2 / tau^(k1+k2-2i-2) + sum_(i=k1-2)^(k2-2) u^i t^2 / tau^(k2-i)
///  + u^(k1-1) t / tau^(k2-k1+2) + u^(k2-1) t / tau`.
///
/// Sums whose ranges reach below `i = 0` are clipped there.
pub fn subs_kernel_gf_closed_form(k1: usize, k2: usize) -> Result<ClosedFormGF> {
    check_order(k1, k2)?;
    let (a, b) = (k1 as i64, k2 as i64);
    let mut g = ClosedFormGF::default();
    g.push(int(1), 0, 0, 0);
    for i in 0..=(a - 2) {
        g.push(int(1), i as usize, 2, a + b - 2 * i);
    }
    for i in 0..=(a - 2) {
        g.push(int(2), i as usize, 2, a + b - 2 * i - 1);
    }
    for i in 0..=(a - 3) {
        g.push(int(1), i as usize, 2, a + b - 2 * i - 2);
    }
    for i in (a - 2).max(0)..=(b - 2) {
        g.push(int(1), i as usize, 2, b - i);
    }
    g.push(int(1), k1 - 1, 1, b - a + 2);
    g.push(int(1), k2 - 1, 1, 1);
    Ok(g)
}

/// `1 + 1/tau^(k1+k2) - 1/tau^(k1+k2-2)`.
pub fn subs_kernel_gf_at_u_one(k1: usize, k2: usize) -> Result<ClosedFormGF> {
    check_order(k1, k2)?;
    let n = (k1 + k2) as i64;
    let mut g = ClosedFormGF::default();
    g.push(int(1), 0, 0, 0);
    g.push(int(1), 0, 0, n);
    g.push(int(-1), 0, 0, n - 2);
    Ok(g)
}

/// `[(m1+1)T^m1 - m1 T^(m1+1) - (m2+2) T^(m2+1) + (m2+1) T^(m2+2)] / (1-T)^2`,
/// which equals `sum_(i=m1)^m2 (1+i) T^i`.
pub fn summation_lemma_closed_form(m1: usize, m2: usize) -> ClosedFormGF {
    let (a, b) = (m1 as i64, m2 as i64);
    let mut g = ClosedFormGF::default();
    g.push(int(a + 1), 0, m1, 2);
    g.push(int(-a), 0, m1 + 1, 2);
    g.push(int(-(b + 2)), 0, m2 + 1, 2);
    g.push(int(b + 1), 0, m2 + 2, 2);
    g
}

/// `sum_(i=m1)^m2 (1+i) T^i` as a series.
pub fn summation_lemma_direct(m1: usize, m2: usize, max_t: usize) -> BiSeries {
    let mut s = BiSeries::zero(max_t);
    for i in m1..=m2 {
        s.add_coeff(0, i, int(i as i64 + 1));
    }
    s
}
