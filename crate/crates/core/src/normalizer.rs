//! Degree-by-degree normal forms in the `ker conn_m` style, style
//! membership checks and linear versal deformations.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_scalar, ExactMatrix};
use crate::nilpotent::{jordan_matrix, NilpotentSpec};
use crate::poly::{compose_truncated, invert_near_identity, mult_matrix, SliceBasis, VectorPoly};
use crate::sl2::{kernel_basis, SliceSplitter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Style {
    /// Complement `ker conn_m`.
    KerConnM,
    /// Complement `P_d ⊗ ker m`, checked to be a complement at every degree.
    KerMultM,
}

impl FromStr for Style {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ker-conn-m" => Ok(Style::KerConnM),
            "ker-mult-m" => Ok(Style::KerMultM),
            other => Err(format!("unknown style `{other}` (expected ker-conn-m or ker-mult-m)")),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::KerConnM => "ker-conn-m",
            Style::KerMultM => "ker-mult-m",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRecord {
    pub degree: usize,
    /// `dim im conn_n` on the slice.
    pub removed_dim: usize,
    /// Dimension of the complement the normal form lives in.
    pub kept_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormResult {
    pub style: Style,
    /// Normal form `generator^-1 ∘ f ∘ generator` truncated at `degree`.
    pub normal_form: VectorPoly,
    pub generator: VectorPoly,
    pub degree: usize,
    pub ledger: Vec<DegreeRecord>,
}

struct MultSplitter {
    basis: SliceBasis,
    conn_m: ExactMatrix,
    complement: ExactMatrix,
    system: ExactMatrix,
}

impl MultSplitter {
    fn new(spec: &NilpotentSpec, d: usize, inner: &SliceSplitter) -> Result<Self> {
        let basis = inner.basis.clone();
        let raw_m = crate::nilpotent::conjugate_transpose(spec);
        let cols = mult_matrix(&raw_m, basis.scalar_dim()).nullspace_basis();
        let complement = ExactMatrix::from_columns(basis.dim(), &cols);
        let conn_n = &inner.lifted.conn_n.matrix;
        if conn_n.rank() + complement.cols() != basis.dim() || conn_n.hstack(&complement)?.rank() != basis.dim() {
            return Err(Error::StyleNotComplement(d));
        }
        let conn_m = inner.lifted.conn_m.matrix.clone();
        let system = (conn_n * &conn_m).hstack(&complement)?;
        Ok(MultSplitter { basis, conn_m, complement, system })
    }

    fn split(&self, g: &VectorPoly) -> Result<(VectorPoly, VectorPoly)> {
        let x = self.system.solve(&g.to_coords(&self.basis))?;
        let dim = self.basis.dim();
        let kept = VectorPoly::from_coords(&self.basis, &self.complement.mul_vec(&x[dim..]));
        let pre = VectorPoly::from_coords(&self.basis, &self.conn_m.mul_vec(&x[..dim]));
        Ok((kept, pre))
    }
}

fn check_input(f: &VectorPoly, spec: &NilpotentSpec) -> Result<()> {
    if spec.index() < 2 {
        return Err(Error::DegenerateTriple(spec.index()));
    }
    if f.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: f.dim() });
    }
    if f.has_constant_term() {
        return Err(Error::ConstantTerm);
    }
    if f.linear_part() != jordan_matrix(spec) {
        return Err(Error::LinearPartMismatch);
    }
    Ok(())
}

/// Normal form of `f` up to degree `max_degree`.
///
/// At each degree `k` the slice `g_k` is split as `conn_n(psi') + fbar_k`
/// with `fbar_k` in the chosen complement and `psi'` in `im conn_m`; the map
/// is then conjugated by `x + psi_k` with `psi_k = -psi'`.
pub fn normalize(f: &VectorPoly, spec: &NilpotentSpec, max_degree: usize, style: Style) -> Result<NormalFormResult> {
    check_input(f, spec)?;
    if max_degree < 2 {
        return Err(Error::Precondition("normalization degree must be at least 2".into()));
    }
    let n = spec.dim();
    let id = VectorPoly::identity(n);
    let mut current = f.truncate(max_degree);
    let mut generator = id.clone();
    let mut ledger = Vec::new();
    for k in 2..=max_degree {
        let splitter = SliceSplitter::new(spec, k)?;
        let g = current.slice(k);
        let (kept, pre, kept_dim) = match style {
            Style::KerConnM => {
                let s = splitter.split(&g)?;
                (s.kernel_part, s.preimage, splitter.kernel.dim())
            }
            Style::KerMultM => {
                let ms = MultSplitter::new(spec, k, &splitter)?;
                let (kept, pre) = ms.split(&g)?;
                (kept, pre, ms.complement.cols())
            }
        };
        let basis_dim = splitter.basis.dim();
        ledger.push(DegreeRecord { degree: k, removed_dim: basis_dim - splitter.kernel.dim(), kept_dim });
        if pre.is_zero() {
            continue;
        }
        let step = id.sub(&pre);
        let inverse = invert_near_identity(&step, max_degree)?;
        current = compose_truncated(&inverse, &compose_truncated(&current, &step, max_degree)?, max_degree)?;
        generator = compose_truncated(&generator, &step, max_degree)?;
        debug_assert_eq!(current.slice(k), kept);
    }
    Ok(NormalFormResult { style, normal_form: current, generator, degree: max_degree, ledger })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StyleViolation {
    pub degree: usize,
    /// `conn_m` applied to the offending slice.
    pub residual: VectorPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StyleReport {
    pub checked_degrees: Vec<usize>,
    pub violation: Option<StyleViolation>,
}

impl StyleReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that every slice of degree `2..=max_degree` lies in `ker conn_m`.
pub fn check_style_membership(f: &VectorPoly, spec: &NilpotentSpec, max_degree: usize) -> Result<StyleReport> {
    let triple = crate::nilpotent::build_sl2_triple(spec)?;
    let mut checked_degrees = Vec::new();
    for d in f.degrees().into_iter().filter(|&d| d >= 2 && d <= max_degree) {
        checked_degrees.push(d);
        let basis = SliceBasis::new(spec.dim(), d);
        let lifted = crate::sl2::lift_unchecked(spec, &triple, &basis);
        let residual = lifted.conn_m.apply_in(&basis, &f.slice(d));
        if !residual.is_zero() {
            return Ok(StyleReport { checked_degrees, violation: Some(StyleViolation { degree: d, residual }) });
        }
    }
    Ok(StyleReport { checked_degrees, violation: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectSumReport {
    pub degree: usize,
    pub dim: usize,
    /// `dim (im conn_n ∩ ker conn_m)`; zero for a direct sum.
    pub im_n_cap_ker_m: usize,
    /// `dim (ker conn_n ∩ im conn_m)`; zero when `psi` in `im conn_m` is unique.
    pub ker_n_cap_im_m: usize,
    pub rank_n: usize,
    pub kernel_m_dim: usize,
}

impl DirectSumReport {
    pub fn passed(&self) -> bool {
        self.im_n_cap_ker_m == 0 && self.ker_n_cap_im_m == 0 && self.rank_n + self.kernel_m_dim == self.dim
    }
}

/// Rank tests for the two direct sums used by [`normalize`] on slice `d`.
pub fn check_direct_sum(spec: &NilpotentSpec, d: usize) -> Result<DirectSumReport> {
    let s = SliceSplitter::new(spec, d)?;
    let conn_n = &s.lifted.conn_n.matrix;
    let conn_m = &s.lifted.conn_m.matrix;
    let dim = s.basis.dim();
    let k_m = ExactMatrix::from_columns(dim, &conn_m.nullspace_basis());
    let k_n = ExactMatrix::from_columns(dim, &conn_n.nullspace_basis());
    Ok(DirectSumReport {
        degree: d,
        dim,
        im_n_cap_ker_m: crate::exact::column_space_intersection_dim(conn_n, &k_m),
        ker_n_cap_im_m: crate::exact::column_space_intersection_dim(&k_n, conn_m),
        rank_n: conn_n.rank(),
        kernel_m_dim: k_m.cols(),
    })
}

/// Linear versal deformation `N + sum_t a_t B_t` with `B_t` the canonical
/// basis of `ker conn_m` on linear maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VersalDeformation {
    pub base: ExactMatrix,
    pub parameters: Vec<ExactMatrix>,
}

impl VersalDeformation {
    /// Symbolic entries, parameters named `a1, a2, ...`.
    pub fn pattern(&self) -> Vec<Vec<String>> {
        let n = self.base.rows();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut parts = Vec::new();
                        let b = self.base.at(i, j);
                        if !b.is_zero() {
                            parts.push(format_scalar(&b));
                        }
                        for (t, p) in self.parameters.iter().enumerate() {
                            let c = p.at(i, j);
                            if c.is_zero() {
                                continue;
                            }
                            if c.is_one() {
                                parts.push(format!("a{}", t + 1));
                            } else {
                                parts.push(format!("{}*a{}", format_scalar(&c), t + 1));
                            }
                        }
                        if parts.is_empty() {
                            "0".to_string()
                        } else {
                            parts.join(" + ")
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn versal_deformation(spec: &NilpotentSpec) -> Result<VersalDeformation> {
    let k = kernel_basis(spec, 1)?;
    let parameters = k.vectors.iter().map(|v| v.element.linear_part()).collect();
    Ok(VersalDeformation { base: jordan_matrix(spec), parameters })
}

impl fmt::Display for VersalDeformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.pattern();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "[{}]", line.join("  "))?;
            if i + 1 < cells.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int, Scalar};
    use crate::poly::mono;

    fn s(b: &[usize]) -> NilpotentSpec {
        NilpotentSpec::new(b).unwrap()
    }

    fn planar(a: [Scalar; 3], b: [Scalar; 3]) -> VectorPoly {
        let mut f = VectorPoly::linear(&jordan_matrix(&s(&[2])));
        let two = int(2);
        f.add_term(mono(&[2, 0]), 0, a[0].clone());
        f.add_term(mono(&[1, 1]), 0, &two * &a[1]);
        f.add_term(mono(&[0, 2]), 0, a[2].clone());
        f.add_term(mono(&[2, 0]), 1, b[0].clone());
        f.add_term(mono(&[1, 1]), 1, &two * &b[1]);
        f.add_term(mono(&[0, 2]), 1, b[2].clone());
        f
    }

    #[test]
    fn already_normal() {
        let spec = s(&[2]);
        let f = VectorPoly::linear(&jordan_matrix(&spec)).add(&VectorPoly::unit(&[1, 1], 1));
        let r = normalize(&f, &spec, 3, Style::KerConnM).unwrap();
        assert_eq!(r.normal_form, f);
        assert_eq!(r.generator, VectorPoly::identity(2));
    }

    #[test]
    fn planar_quadratic_keeps_invariant_functional() {
        let spec = s(&[2]);
        let f = planar([int(1), int(2), int(3)], [int(4), int(5), int(6)]);
        let r = normalize(&f, &spec, 2, Style::KerConnM).unwrap();
        let half_sum = frac(1 + 6, 2);
        let mut expected = VectorPoly::linear(&jordan_matrix(&spec));
        expected.add_term(mono(&[2, 0]), 0, half_sum.clone());
        expected.add_term(mono(&[0, 2]), 1, half_sum);
        expected.add_term(mono(&[2, 0]), 1, int(4));
        expected.add_term(mono(&[1, 1]), 1, int(10));
        assert_eq!(r.normal_form, expected);
        assert!(check_style_membership(&r.normal_form, &spec, 2).unwrap().passed());
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = VectorPoly::identity(1);
        assert!(normalize(&f, &s(&[1]), 2, Style::KerConnM).is_err());
        let g = VectorPoly::identity(2);
        assert_eq!(normalize(&g, &s(&[2]), 2, Style::KerConnM), Err(Error::LinearPartMismatch));
    }

    #[test]
    fn style_membership() {
        let spec = s(&[2]);
        let lin = VectorPoly::linear(&jordan_matrix(&spec));
        let bad = lin.add(&VectorPoly::unit(&[0, 2], 0));
        let r = check_style_membership(&bad, &spec, 4).unwrap();
        assert_eq!(r.violation.map(|v| v.degree), Some(2));
        assert!(check_style_membership(&lin, &spec, 4).unwrap().passed());
    }

    #[test]
    fn versal_counts() {
        assert_eq!(versal_deformation(&s(&[2])).unwrap().parameters.len(), 2);
        assert_eq!(versal_deformation(&s(&[3])).unwrap().parameters.len(), 3);
        assert_eq!(versal_deformation(&s(&[2, 2])).unwrap().parameters.len(), 8);
        assert_eq!(versal_deformation(&s(&[2, 3])).unwrap().parameters.len(), 9);
    }

    #[test]
    fn mult_style_guard() {
        let spec = s(&[2, 3]);
        let f = VectorPoly::linear(&jordan_matrix(&spec)).add(&VectorPoly::unit(&[0, 0, 0, 0, 2], 1));
        let r = normalize(&f, &spec, 2, Style::KerMultM);
        assert_eq!(r, Err(Error::StyleNotComplement(2)));
        let spec = s(&[3]);
        let f = VectorPoly::linear(&jordan_matrix(&spec)).add(&VectorPoly::unit(&[0, 2, 0], 0));
        let a = normalize(&f, &spec, 3, Style::KerMultM).unwrap();
        let b = normalize(&f, &spec, 3, Style::KerConnM).unwrap();
        let dims = |r: &NormalFormResult| r.ledger.iter().map(|l| l.kept_dim).collect::<Vec<_>>();
        assert_eq!(dims(&a), dims(&b));
    }
}
