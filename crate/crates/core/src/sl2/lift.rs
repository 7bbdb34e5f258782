use crate::error::{Error, Result};
use crate::exact::{int, ExactMatrix};
use crate::nilpotent::{build_sl2_triple, powers, NilpotentSpec, Sl2MatrixTriple};
use crate::poly::{componentwise, mult_matrix, scalar_subs_matrix_on, GradedOperator, SliceBasis};

/// Substitution triple on the scalar slice `P_d`:
/// `n = subs_n`, `m = sum_(i,l) subs_n^l subs_m^i subs_n^(i-l-1)`,
/// `h = sum_i [subs_(m^i), subs_(n^i)]`.
///
/// On the constant slice `P_0` all three act as zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarredTriple {
    pub degree: usize,
    pub n: ExactMatrix,
    pub h: ExactMatrix,
    pub m: ExactMatrix,
}

impl StarredTriple {
    pub fn bracket_failures(&self) -> Vec<&'static str> {
        bracket_failures(&self.n, &self.h, &self.m)
    }
}

fn bracket_failures(n: &ExactMatrix, h: &ExactMatrix, m: &ExactMatrix) -> Vec<&'static str> {
    let mut out = Vec::new();
    if ExactMatrix::commutator(m, n) != *h {
        out.push("[m, n] = h");
    }
    if ExactMatrix::commutator(h, n) != n.scale(&int(-2)) {
        out.push("[h, n] = -2n");
    }
    if ExactMatrix::commutator(h, m) != m.scale(&int(2)) {
        out.push("[h, m] = 2m");
    }
    out
}

pub(crate) fn starred_on(spec: &NilpotentSpec, basis: &SliceBasis) -> StarredTriple {
    let s = basis.scalar_dim();
    let d = basis.degree();
    if d == 0 {
        let z = ExactMatrix::zeros(s, s);
        return StarredTriple { degree: 0, n: z.clone(), h: z.clone(), m: z };
    }
    let p = spec.index();
    let np = powers(&crate::nilpotent::jordan_matrix(spec), p);
    let mp = powers(&crate::nilpotent::conjugate_transpose(spec), p);
    let subs = |a: &ExactMatrix| scalar_subs_matrix_on(a, basis);
    let mut star_m = ExactMatrix::zeros(s, s);
    let mut star_h = ExactMatrix::zeros(s, s);
    for i in 1..p {
        for l in 0..i {
            // subs_A subs_B = subs_(BA)
            let word = &(&np[i - l - 1] * &mp[i]) * &np[l];
            star_m = &star_m + &subs(&word);
        }
        star_h = &star_h + &(&subs(&(&np[i] * &mp[i])) - &subs(&(&mp[i] * &np[i])));
    }
    StarredTriple { degree: d, n: subs(&np[1.min(p)]), h: star_h, m: star_m }
}

/// Starred triple on `P_d`, verified before returning.
pub fn starred_triple(spec: &NilpotentSpec, d: usize) -> Result<StarredTriple> {
    if spec.index() < 2 {
        return Err(Error::DegenerateTriple(spec.index()));
    }
    let t = starred_on(spec, &SliceBasis::new(spec.dim(), d));
    if let Some(name) = t.bracket_failures().first() {
        return Err(Error::BracketFailure(format!("starred {name} at degree {d}")));
    }
    Ok(t)
}

/// The conn-triple on one slice `P_d ⊗ R^n`:
/// `conn_n = mult_n - subs_n`, `conn_m = mult_m_bar - starred m`,
/// `cann_h = mult_h_bar + starred h`.
#[derive(Clone, Debug)]
pub struct LiftedTriple {
    pub spec: NilpotentSpec,
    pub degree: usize,
    pub conn_n: GradedOperator,
    pub conn_m: GradedOperator,
    pub cann_h: GradedOperator,
    pub starred: StarredTriple,
}

impl LiftedTriple {
    pub fn bracket_failures(&self) -> Vec<&'static str> {
        bracket_failures(&self.conn_n.matrix, &self.cann_h.matrix, &self.conn_m.matrix)
    }

    pub fn basis(&self) -> SliceBasis {
        self.conn_n.basis()
    }
}

pub(crate) fn lift_unchecked(spec: &NilpotentSpec, triple: &Sl2MatrixTriple, basis: &SliceBasis) -> LiftedTriple {
    let n = spec.dim();
    let s = basis.scalar_dim();
    let d = basis.degree();
    let starred = starred_on(spec, basis);
    let op = |matrix| GradedOperator { n, degree: d, matrix };
    let conn_n = op(&mult_matrix(&triple.n_bar, s) - &componentwise(n, &starred.n));
    let conn_m = op(&mult_matrix(&triple.m_bar, s) - &componentwise(n, &starred.m));
    let cann_h = op(&mult_matrix(&triple.h_bar, s) + &componentwise(n, &starred.h));
    LiftedTriple { spec: spec.clone(), degree: d, conn_n, conn_m, cann_h, starred }
}

/// Lifts the matrix triple to the slice of degree `d` and verifies the
/// bracket relations there. At `d = 0` only the multiplication parts act.
pub fn lift_triple(spec: &NilpotentSpec, d: usize) -> Result<LiftedTriple> {
    let triple = build_sl2_triple(spec)?;
    let lifted = lift_unchecked(spec, &triple, &SliceBasis::new(spec.dim(), d));
    if let Some(name) = lifted.starred.bracket_failures().first() {
        return Err(Error::BracketFailure(format!("starred {name} at degree {d}")));
    }
    if let Some(name) = lifted.bracket_failures().first() {
        return Err(Error::BracketFailure(format!("conn {name} at degree {d}")));
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Scalar;
    use crate::poly::{mono, VectorPoly};

    fn spec(b: &[usize]) -> NilpotentSpec {
        NilpotentSpec::new(b).unwrap()
    }

    fn sorted_diagonal(m: &ExactMatrix) -> Vec<Scalar> {
        let mut d = m.diagonal_entries();
        d.sort();
        d
    }

    #[test]
    fn linear_slice_weights() {
        let t = lift_triple(&spec(&[2]), 1).unwrap();
        assert_eq!(t.conn_n.matrix.rows(), 4);
        assert!(t.cann_h.matrix.is_diagonal());
        assert_eq!(sorted_diagonal(&t.cann_h.matrix), vec![int(-2), int(0), int(0), int(2)]);
    }

    #[test]
    fn quadratic_weights() {
        let t = lift_triple(&spec(&[2]), 2).unwrap();
        for (e, w) in [([2, 0], 2), ([1, 1], 1), ([0, 2], 0)] {
            let v = VectorPoly::unit(&e, 1);
            assert_eq!(t.cann_h.apply(&v), v.scale(&int(w)), "{:?}", e);
        }
        let _ = mono(&[1, 1]);
    }

    #[test]
    fn degenerate_spec() {
        assert!(matches!(lift_triple(&spec(&[1]), 2), Err(Error::DegenerateTriple(1))));
        assert!(starred_triple(&spec(&[1, 1]), 1).is_err());
    }

    #[test]
    fn brackets_small_specs() {
        for b in [&[2][..], &[3], &[2, 2], &[1, 3]] {
            for d in 0..=3 {
                assert!(lift_triple(&spec(b), d).is_ok(), "{b:?} d={d}");
            }
        }
    }
}
