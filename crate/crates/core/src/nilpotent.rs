//! Nilpotent matrices in Jordan form, their conjugate transposes, the
//! projection operators built from them and the matrix sl2-triple.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binom, factorial, from_bigint, int, sign_factor, ExactMatrix, Scalar};

/// Jordan block sizes of a nilpotent matrix plus an optional conjugator `P`.
///
/// The nilpotent is `n = P^-1 N P` with `N` the upper Jordan form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentSpec {
    blocks: Vec<usize>,
    conjugator: Option<(ExactMatrix, ExactMatrix)>,
}

impl NilpotentSpec {
    pub fn new(blocks: &[usize]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidBlocks("no blocks given".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidBlocks("block sizes must be positive".into()));
        }
        Ok(NilpotentSpec { blocks: blocks.to_vec(), conjugator: None })
    }

    pub fn with_conjugator(blocks: &[usize], p: ExactMatrix) -> Result<Self> {
        let mut spec = Self::new(blocks)?;
        let n = spec.dim();
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.rows().max(p.cols()) });
        }
        let inv = p.inverse().ok_or(Error::SingularConjugator)?;
        spec.conjugator = Some((p, inv));
        Ok(spec)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Nilpotency index `p`, the largest block size.
    pub fn index(&self) -> usize {
        self.blocks.iter().copied().max().unwrap_or(1)
    }

    pub fn is_irreducible(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn conjugator(&self) -> Option<&ExactMatrix> {
        self.conjugator.as_ref().map(|c| &c.0)
    }

    pub fn is_jordan_frame(&self) -> bool {
        self.conjugator.is_none()
    }

    /// Same blocks without the conjugator.
    pub fn jordan_spec(&self) -> NilpotentSpec {
        NilpotentSpec { blocks: self.blocks.clone(), conjugator: None }
    }

    /// Conjugates a Jordan-frame matrix `A` into this spec's frame: `P^-1 A P`.
    pub fn to_frame(&self, a: &ExactMatrix) -> ExactMatrix {
        match &self.conjugator {
            Some((p, inv)) => &(inv * a) * p,
            None => a.clone(),
        }
    }

    /// Zero-based index of the first coordinate of each block.
    pub fn block_starts(&self) -> Vec<usize> {
        let mut starts = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &k in &self.blocks {
            starts.push(acc);
            acc += k;
        }
        starts
    }

    /// The upper Jordan nilpotent `N`, ignoring any conjugator.
    pub fn jordan_form(&self) -> ExactMatrix {
        let n = self.dim();
        let mut m = ExactMatrix::zeros(n, n);
        for (start, &k) in self.block_starts().iter().zip(&self.blocks) {
            for r in 0..k.saturating_sub(1) {
                m.set(start + r, start + r + 1, Scalar::one());
            }
        }
        m
    }
}

/// `n = P^-1 N P`.
pub fn jordan_matrix(spec: &NilpotentSpec) -> ExactMatrix {
    spec.to_frame(&spec.jordan_form())
}

/// `m = P^-1 N^t P`.
pub fn conjugate_transpose(spec: &NilpotentSpec) -> ExactMatrix {
    spec.to_frame(&spec.jordan_form().transpose())
}

/// Powers `a^0 ..= a^max`.
pub(crate) fn powers(a: &ExactMatrix, max: usize) -> Vec<ExactMatrix> {
    let mut out = vec![ExactMatrix::identity(a.rows())];
    for k in 1..=max {
        let next = &out[k - 1] * a;
        out.push(next);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub identity: String,
    pub k: usize,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failure: Option<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks the four word relations between powers of `n` and `m` for
/// `1 <= k <= max_k`, `0 <= l <= max_k`, with `k ⊕ l = max(k, l)`.
pub fn verify_word_relations(spec: &NilpotentSpec, max_k: usize) -> Result<RelationReport> {
    if max_k == 0 {
        return Err(Error::Precondition("max_k must be at least 1".into()));
    }
    let n = powers(&jordan_matrix(spec), 2 * max_k);
    let m = powers(&conjugate_transpose(spec), 2 * max_k);
    let mut checked = 0;
    for k in 1..=max_k {
        for l in 0..=max_k {
            let s = k.max(l);
            let cases: [(&str, ExactMatrix, ExactMatrix); 4] = [
                ("n^l m^k n^k = m^(s-l) n^s", &(&n[l] * &m[k]) * &n[k], &m[s - l] * &n[s]),
                ("m^k n^k m^l = m^s n^(s-l)", &(&m[k] * &n[k]) * &m[l], &m[s] * &n[s - l]),
                ("m^l n^k m^k = n^(s-l) m^s", &(&m[l] * &n[k]) * &m[k], &n[s - l] * &m[s]),
                ("n^k m^k n^l = n^s m^(s-l)", &(&n[k] * &m[k]) * &n[l], &n[s] * &m[s - l]),
            ];
            for (name, lhs, rhs) in cases {
                checked += 1;
                if lhs != rhs {
                    let failure = RelationFailure { identity: name.to_string(), k, l };
                    return Ok(RelationReport { checked, failure: Some(failure) });
                }
            }
        }
    }
    Ok(RelationReport { checked, failure: None })
}

/// `n m n = n` and `m n m = m`.
pub fn verify_weak_inverse(spec: &NilpotentSpec) -> bool {
    let n = jordan_matrix(spec);
    let m = conjugate_transpose(spec);
    &(&n * &m) * &n == n && &(&m * &n) * &m == m
}

/// `pi_i^l = n^l m^i n^(i-l)`.
pub fn projection(spec: &NilpotentSpec, i: usize, l: usize) -> Result<ExactMatrix> {
    if i == 0 || l > i {
        return Err(Error::IndexOutOfRange(format!("projection needs i >= 1 and l <= i (i={i}, l={l})")));
    }
    let n = jordan_matrix(spec);
    let m = conjugate_transpose(spec);
    Ok(&(&n.pow(l) * &m.pow(i)) * &n.pow(i - l))
}

/// `varpi_l = pi_(p-1)^(p-l)` for `1 <= l <= p`; projects onto the `l`-th
/// coordinate of every block of maximal size.
pub fn varpi(spec: &NilpotentSpec, l: usize) -> Result<ExactMatrix> {
    let p = spec.index();
    if p < 2 || l == 0 || l > p {
        return Err(Error::IndexOutOfRange(format!("varpi needs 1 <= l <= p = {p}, p >= 2 (l={l})")));
    }
    projection(spec, p - 1, p - l)
}

/// `E_p = 1 + sum_(i=2)^(p-1) sum_(l=0)^(i-1) pi_i^l`.
pub fn epsilon_matrix(spec: &NilpotentSpec) -> ExactMatrix {
    let p = spec.index();
    let n = powers(&jordan_matrix(spec), p);
    let m = powers(&conjugate_transpose(spec), p);
    let mut acc = ExactMatrix::identity(spec.dim());
    for i in 2..p {
        for l in 0..i {
            acc = &acc + &(&(&n[l] * &m[i]) * &n[i - l]);
        }
    }
    acc
}

/// Matrix sl2-triple built from `n` and its conjugate transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2MatrixTriple {
    pub n_bar: ExactMatrix,
    pub h_bar: ExactMatrix,
    pub m_bar: ExactMatrix,
    pub raw_m: ExactMatrix,
}

impl Sl2MatrixTriple {
    /// Names of the bracket relations that fail, empty when the triple is valid.
    pub fn bracket_failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if ExactMatrix::commutator(&self.m_bar, &self.n_bar) != self.h_bar {
            out.push("[m, n] = h");
        }
        if ExactMatrix::commutator(&self.h_bar, &self.n_bar) != self.n_bar.scale(&int(-2)) {
            out.push("[h, n] = -2n");
        }
        if ExactMatrix::commutator(&self.h_bar, &self.m_bar) != self.m_bar.scale(&int(2)) {
            out.push("[h, m] = 2m");
        }
        out
    }
}

/// Builds `m_bar = sum n^l m^i n^(i-l-1)` and `h_bar = sum [m^i, n^i]` and
/// verifies the triple before returning it.
pub fn build_sl2_triple(spec: &NilpotentSpec) -> Result<Sl2MatrixTriple> {
    let p = spec.index();
    if p < 2 {
        return Err(Error::DegenerateTriple(p));
    }
    let n_bar = jordan_matrix(spec);
    let raw_m = conjugate_transpose(spec);
    let n = powers(&n_bar, p);
    let m = powers(&raw_m, p);
    let dim = spec.dim();
    let mut m_bar = ExactMatrix::zeros(dim, dim);
    let mut h_bar = ExactMatrix::zeros(dim, dim);
    for i in 1..p {
        for l in 0..i {
            m_bar = &m_bar + &(&(&n[l] * &m[i]) * &n[i - l - 1]);
        }
        h_bar = &h_bar + &ExactMatrix::commutator(&m[i], &n[i]);
    }
    let triple = Sl2MatrixTriple { n_bar, h_bar, m_bar, raw_m };
    if let Some(name) = triple.bracket_failures().first() {
        return Err(Error::BracketFailure((*name).to_string()));
    }
    Ok(triple)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketCaseFailure {
    pub k: usize,
    pub i: usize,
    pub l: usize,
    pub case: char,
}

/// Checks the closed forms of `[[m^k, n^k], n^l m^i n^(i-l-1)]` for
/// `1 <= k <= p`, `1 <= i <= p`, `0 <= l < i`.
pub fn verify_bracket_cases(spec: &NilpotentSpec) -> std::result::Result<usize, BracketCaseFailure> {
    let p = spec.index();
    let top = 3 * p + 2;
    let n = powers(&jordan_matrix(spec), top);
    let m = powers(&conjugate_transpose(spec), top);
    let word = |a: usize, b: usize, c: usize| &(&n[a] * &m[b]) * &n[c];
    let mut checked = 0;
    for k in 1..=p {
        let hk = ExactMatrix::commutator(&m[k], &n[k]);
        for i in 1..=p {
            for l in 0..i {
                let r = i - l - 1;
                let lhs = ExactMatrix::commutator(&hk, &word(l, i, r));
                let case_b = || &word(k - 1, k + i - l - 1, r) - &word(k, k + i - l, r);
                let case_c = || &word(l, k + l, k - 1) - &word(l, k + l + 1, k);
                let (case, rhs) = if k <= l.min(r) {
                    ('a', ExactMatrix::zeros(spec.dim(), spec.dim()))
                } else if l < k && k <= r {
                    ('b', case_b())
                } else if r < k && k <= l {
                    ('c', case_c())
                } else {
                    ('d', &case_b() + &case_c())
                };
                checked += 1;
                if lhs != rhs {
                    return Err(BracketCaseFailure { k, i, l, case });
                }
            }
        }
    }
    Ok(checked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MReconstructionReport {
    pub p: usize,
    pub holds: bool,
    /// Whether the variant with an extra leading `M_bar` (on top of the
    /// `i = 1` summand, which already equals `M_bar`) also holds.
    pub duplicated_leading_term_holds: bool,
}

/// Series reconstructing `M` from the triple; the `i = 1` term equals `M_bar`.
fn m_reconstruction_series(triple: &Sl2MatrixTriple, p: usize) -> ExactMatrix {
    let nb = powers(&triple.n_bar, p);
    let mb = powers(&triple.m_bar, p);
    let dim = triple.n_bar.rows();
    let mut acc = ExactMatrix::zeros(dim, dim);
    for i in 1..p {
        let sign = sign_factor(i as i64 + 1);
        let fi = from_bigint(factorial(i as u64));
        for l in 1..=i {
            let (il, ii, ll) = (i as i64, i as i64, l as i64);
            let c = &sign * binom(il - 1, ll - 1) * binom(ii, ll - 1) / (&fi * &fi * int(ll));
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&(&nb[l - 1] * &mb[i]) * &nb[i - l]).scale(&c);
        }
    }
    acc
}

/// Checks `M = sum_(i=1)^(p-1) (-1)^(i+1) sum_(l=1)^i c_il N_bar^(l-1) M_bar^i N_bar^(i-l)`
/// with `c_il = C(i-1, l-1) C(i, l-1) / (i! i! l)` for one Jordan block of size `p`.
pub fn check_m_reconstruction(p: usize) -> Result<MReconstructionReport> {
    if !(2..=9).contains(&p) {
        return Err(Error::Precondition(format!("check_m_reconstruction needs 2 <= p <= 9 (p={p})")));
    }
    check_m_reconstruction_for(&NilpotentSpec::new(&[p])?)
}

/// Same identity for an arbitrary spec with `p >= 2`.
pub fn check_m_reconstruction_for(spec: &NilpotentSpec) -> Result<MReconstructionReport> {
    let triple = build_sl2_triple(spec)?;
    let p = spec.index();
    let series = m_reconstruction_series(&triple, p);
    let holds = series == triple.raw_m;
    let duplicated_leading_term_holds = &series + &triple.m_bar == triple.raw_m;
    Ok(MReconstructionReport { p, holds, duplicated_leading_term_holds })
}
