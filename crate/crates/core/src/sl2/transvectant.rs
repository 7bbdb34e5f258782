use num_traits::{One, Zero};

use super::kernel::eigenvalue;
use super::lift::starred_on;
use crate::error::{Error, Result};
use crate::exact::{binom, factorial, from_bigint, sign_factor, ExactMatrix, Scalar};
use crate::nilpotent::{build_sl2_triple, NilpotentSpec};
use crate::poly::{Poly, SliceBasis, VectorPoly};

/// Weight of a top weight polynomial for the starred action.
pub fn polynomial_top_weight(spec: &NilpotentSpec, w: &Poly) -> Result<i64> {
    if w.is_zero() {
        return Err(Error::NotTopWeight("zero polynomial".into()));
    }
    if !w.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = w.max_degree().unwrap_or(0);
    let basis = SliceBasis::new(spec.dim(), d);
    let t = starred_on(spec, &basis);
    let coords = w.to_coords(&basis);
    if t.m.mul_vec(&coords).iter().any(|c| !c.is_zero()) {
        return Err(Error::NotTopWeight(format!("starred m does not annihilate {w}")));
    }
    eigenvalue(&t.h, &coords).ok_or_else(|| Error::NotTopWeight(format!("{w} is not a starred h eigenvector")))
}

/// Weight of a top weight vector for `(n_bar, h_bar, m_bar)` on `R^n`.
pub fn vector_top_weight(spec: &NilpotentSpec, v: &[Scalar]) -> Result<i64> {
    let t = build_sl2_triple(spec)?;
    if v.len() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: v.len() });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::NotTopWeight("zero vector".into()));
    }
    if t.m_bar.mul_vec(v).iter().any(|c| !c.is_zero()) {
        return Err(Error::NotTopWeight("m_bar does not annihilate the vector".into()));
    }
    eigenvalue(&t.h_bar, v).ok_or_else(|| Error::NotTopWeight("not an h_bar eigenvector".into()))
}

fn tensor(w: &Poly, v: &[Scalar]) -> VectorPoly {
    let mut out = VectorPoly::zero(v.len());
    for (m, c) in w.terms() {
        for (j, a) in v.iter().enumerate() {
            if !a.is_zero() {
                out.add_term(m.clone(), j, c * a);
            }
        }
    }
    out
}

/// `p`-th transvectant of a top weight polynomial `w` and a top weight vector `v`:
/// `sum_(i+j=p) C(p,i) / (C(wt w, j) C(wt v, i)) w^(j) ⊗ v^(i)` with
/// `w^(j) = subs_n^j w / j!` and `v^(i) = n^i v / i!`.
pub fn transvectant(spec: &NilpotentSpec, w: &Poly, v: &[Scalar], order: usize) -> Result<VectorPoly> {
    let ww = polynomial_top_weight(spec, w)?;
    let wv = vector_top_weight(spec, v)?;
    if order as i64 > ww.min(wv) {
        return Err(Error::TransvectantOrder { order, left: ww, right: wv });
    }
    Ok(transvectant_unchecked(&crate::nilpotent::jordan_matrix(spec), w, ww, v, wv, order))
}

pub(crate) fn transvectant_unchecked(
    n: &ExactMatrix,
    w: &Poly,
    ww: i64,
    v: &[Scalar],
    wv: i64,
    order: usize,
) -> VectorPoly {
    let mut w_chain = vec![w.clone()];
    let mut v_chain = vec![v.to_vec()];
    for k in 1..=order {
        let kk = Scalar::from_integer((k as i64).into());
        let next_w = w_chain[k - 1].substitute_linear(n).scale(&(Scalar::one() / &kk));
        let next_v: Vec<Scalar> = n.mul_vec(&v_chain[k - 1]).into_iter().map(|c| c / &kk).collect();
        w_chain.push(next_w);
        v_chain.push(next_v);
    }
    let p = order as i64;
    let mut out = VectorPoly::zero(v.len());
    for i in 0..=order {
        let j = order - i;
        let c = binom(p, i as i64) / (binom(ww, j as i64) * binom(wv, i as i64));
        out = out.add(&tensor(&w_chain[j], &v_chain[i]).scale(&c));
    }
    out
}

/// Clebsch-Gordan coefficient
/// `sum_(r+q=k) (-1)^r C(p, i-q) C(i, q) C(j, r) / (C(m, i-q) C(n, j-r))` for `i + j = k + p`.
///
/// Terms whose denominator vanishes are dropped.
pub fn cg_coefficient(m: usize, n: usize, p: usize, i: usize, j: usize, k: usize) -> Result<Scalar> {
    if i + j != k + p {
        return Err(Error::CgConstraint);
    }
    let (m, n, p, i, j, k) = (m as i64, n as i64, p as i64, i as i64, j as i64, k as i64);
    let mut acc = Scalar::zero();
    for q in 0..=k {
        let r = k - q;
        let den = binom(m, i - q) * binom(n, j - r);
        if den.is_zero() {
            continue;
        }
        acc += sign_factor(r) * binom(p, i - q) * binom(i, q) * binom(j, r) / den;
    }
    Ok(acc)
}

/// Coefficient of `conn_n^k ⋈_p / k!` in the expansion of `w^(j) ⊗ v^(i)`,
/// where `w` has weight `wn` and `v` has weight `wm`, `p + k = i + j`.
pub fn inversion_coefficient(wm: usize, wn: usize, p: usize, i: usize, j: usize) -> Result<Scalar> {
    if p > i + j {
        return Err(Error::CgConstraint);
    }
    let k = i + j - p;
    let cg = cg_coefficient(wm, wn, p, i, j, k)?;
    let (m, n, p, i, j, k) = (wm as i64, wn as i64, p as i64, i as i64, j as i64, k as i64);
    let num = binom(m, i) * binom(n, j) * binom(m, p) * binom(n, p);
    let den = binom(m + n - 2 * p, k) * binom(m + n - p + 1, p);
    if den.is_zero() {
        return Ok(Scalar::zero());
    }
    Ok(cg * num / den)
}

/// Closed projection coefficient `C(p, i) C(m, p) C(n, p) / C(m + n - p + 1, p)`, `p = i + j`.
pub fn projection_coefficient(wm: usize, wn: usize, i: usize, j: usize) -> Scalar {
    let p = (i + j) as i64;
    let (m, n) = (wm as i64, wn as i64);
    if p > m.min(n) {
        return Scalar::zero();
    }
    binom(p, i as i64) * binom(m, p) * binom(n, p) / binom(m + n - p + 1, p)
}

pub(crate) fn factorial_scalar(k: usize) -> Scalar {
    from_bigint(factorial(k as u64))
}

/// `(1/k!) conn_n^k` applied to `x`.
#[cfg(test)]
pub(crate) fn lower(spec: &NilpotentSpec, x: &VectorPoly, k: usize) -> VectorPoly {
    let n = crate::nilpotent::jordan_matrix(spec);
    let mut acc = x.clone();
    for _ in 0..k {
        acc = crate::poly::homological_op(&n, &acc).expect("dimensions agree");
    }
    acc.scale(&(Scalar::one() / factorial_scalar(k)))
}

pub(crate) fn unit_vector(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[k] = Scalar::one();
    v
}

pub(crate) fn jordan_only(spec: &NilpotentSpec) -> Result<()> {
    if spec.is_irreducible() && spec.is_jordan_frame() && spec.index() >= 2 {
        Ok(())
    } else {
        Err(Error::Precondition("irreducible Jordan-frame spec with n >= 2 required".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};
    use crate::poly::{mono, Monomial};

    fn s3() -> NilpotentSpec {
        NilpotentSpec::new(&[3]).unwrap()
    }

    fn x(e: &[u32]) -> Poly {
        Poly::monomial(Monomial::new(e.to_vec()), int(1))
    }

    #[test]
    fn first_transvectant_n3() {
        let t = transvectant(&s3(), &x(&[1, 1, 0]), &unit_vector(3, 2), 1).unwrap();
        let expected = VectorPoly::unit(&[0, 1, 1], 2).add(&VectorPoly::unit(&[1, 1, 0], 1).scale(&frac(1, 2)));
        assert_eq!(t, expected);
    }

    #[test]
    fn order_zero_is_tensor() {
        let w = x(&[2, 0, 1]);
        let t = transvectant(&s3(), &w, &unit_vector(3, 2), 0).unwrap();
        assert_eq!(t, VectorPoly::term(mono(&[2, 0, 1]), 2, int(1)));
    }

    #[test]
    fn second_transvectant_of_x1() {
        // x1 has weight 2, e3 has weight 2.
        let t = transvectant(&s3(), &x(&[1, 0, 0]), &unit_vector(3, 2), 2).unwrap();
        let mut expected = VectorPoly::zero(3);
        expected.add_term(mono(&[0, 0, 1]), 2, frac(1, 2));
        expected.add_term(mono(&[0, 1, 0]), 1, frac(1, 2));
        expected.add_term(mono(&[1, 0, 0]), 0, frac(1, 2));
        assert_eq!(t, expected);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            transvectant(&s3(), &x(&[1, 1, 0]), &unit_vector(3, 2), 2),
            Err(Error::TransvectantOrder { .. })
        ));
        assert!(matches!(transvectant(&s3(), &x(&[0, 1, 0]), &unit_vector(3, 2), 0), Err(Error::NotTopWeight(_))));
        assert!(matches!(transvectant(&s3(), &x(&[1, 0, 0]), &unit_vector(3, 1), 0), Err(Error::NotTopWeight(_))));
    }

    #[test]
    fn inversion_reconstructs_tensor_products() {
        let s = s3();
        let n = crate::nilpotent::jordan_matrix(&s);
        let top = unit_vector(3, 2);
        for a in 1..=2u32 {
            let w = x(&[a, 0, 0]);
            let ww = 2 * a as usize;
            let mut wj = w.clone();
            for j in 0..=ww {
                let mut vi = top.clone();
                for i in 0..=2 {
                    let lhs = tensor(&wj, &vi);
                    let mut rhs = VectorPoly::zero(3);
                    for p in 0..=(i + j).min(2).min(ww) {
                        let c = inversion_coefficient(2, ww, p, i, j).unwrap();
                        let t = transvectant_unchecked(&n, &w, ww as i64, &top, 2, p);
                        rhs = rhs.add(&lower(&s, &t, i + j - p).scale(&c));
                    }
                    assert_eq!(lhs, rhs, "a={a} i={i} j={j}");
                    vi = n.mul_vec(&vi).into_iter().map(|c| c / int(i as i64 + 1)).collect();
                }
                wj = wj.substitute_linear(&n).scale(&frac(1, j as i64 + 1));
            }
        }
    }

    #[test]
    fn cg_examples() {
        assert_eq!(cg_coefficient(1, 1, 1, 1, 0, 0).unwrap(), int(1));
        assert_eq!(cg_coefficient(1, 1, 0, 0, 0, 0).unwrap(), int(1));
        for (m, n, p, i) in [(3, 2, 2, 1), (4, 4, 3, 2), (2, 5, 1, 0)] {
            let j = p - i;
            let k0 = binom(p as i64, i as i64) / (binom(m as i64, i as i64) * binom(n as i64, j as i64));
            assert_eq!(cg_coefficient(m, n, p, i, j, 0).unwrap(), k0);
        }
        assert_eq!(cg_coefficient(1, 1, 1, 1, 1, 0), Err(Error::CgConstraint));
    }
}
