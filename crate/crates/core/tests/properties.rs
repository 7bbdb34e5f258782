use nilform::exact::{format_scalar, frac, int, kernels_agree, parse_scalar, ExactMatrix, Scalar};
use nilform::genfun::{summation_lemma_closed_form, summation_lemma_direct};
use nilform::nilpotent::{build_sl2_triple, jordan_matrix, NilpotentSpec};
use nilform::normalizer::{check_style_membership, normalize, Style};
use nilform::poly::{
    compose_truncated, homological_op, invert_near_identity, mult_op, operator_matrix, subs_op, LinearOp, Monomial,
    Poly, SliceBasis, VectorPoly,
};
use nilform::sl2::{
    kernel_basis, lift_triple, polynomial_top_weight, project_ker_fast, project_ker_generic, transvectant,
};
use num_traits::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn sparse_rational() -> impl Strategy<Value = Scalar> {
    prop_oneof![3 => Just(int(0)), 2 => rational()]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    proptest::collection::vec(proptest::collection::vec(sparse_rational(), cols), rows)
        .prop_map(|r| ExactMatrix::from_rows(r).unwrap())
}

fn any_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))
}

fn square(n: usize) -> impl Strategy<Value = ExactMatrix> {
    matrix(n, n)
}

fn homogeneous(n: usize, d: usize) -> impl Strategy<Value = VectorPoly> {
    let basis = SliceBasis::new(n, d);
    proptest::collection::vec(sparse_rational(), basis.dim()).prop_map(move |c| VectorPoly::from_coords(&basis, &c))
}

fn spec_strategy() -> impl Strategy<Value = NilpotentSpec> {
    prop_oneof![
        Just(vec![2]),
        Just(vec![3]),
        Just(vec![4]),
        Just(vec![2, 2]),
        Just(vec![2, 3]),
        Just(vec![3, 2]),
        Just(vec![1, 3]),
    ]
    .prop_map(|b| NilpotentSpec::new(&b).unwrap())
}

fn invertible(n: usize) -> impl Strategy<Value = ExactMatrix> {
    proptest::collection::vec(-2i64..=2, n * n).prop_filter_map("singular", move |e| {
        let mut m = ExactMatrix::from_fn(n, n, |i, j| int(e[i * n + j]));
        for i in 0..n {
            m.set(i, i, &m.at(i, i) + int(3));
        }
        m.is_invertible().then_some(m)
    })
}

fn near_identity(n: usize, max_degree: usize) -> impl Strategy<Value = VectorPoly> {
    let slices: Vec<_> = (2..=max_degree).map(|d| homogeneous(n, d)).collect();
    slices.prop_map(move |s| s.iter().fold(VectorPoly::identity(n), |acc, p| acc.add(p)))
}

/// `n x` plus the given nonlinear terms.
fn map_with(spec: &NilpotentSpec, nonlinear: &[VectorPoly]) -> VectorPoly {
    nonlinear.iter().fold(VectorPoly::linear(&jordan_matrix(spec)), |acc, p| acc.add(p))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn rref_is_idempotent(a in any_matrix()) {
        let r = a.rref();
        prop_assert_eq!(r.matrix.rref().matrix, r.matrix.clone());
        prop_assert_eq!(r.pivots.len(), a.rank());
    }

    #[test]
    fn rank_nullity(a in any_matrix()) {
        let kernel = a.nullspace_basis();
        prop_assert_eq!(a.rank() + kernel.len(), a.cols());
        for v in &kernel {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn solve_recovers_consistent_rhs(a in any_matrix(), seed in proptest::collection::vec(rational(), 7)) {
        let x0: Vec<Scalar> = seed[..a.cols()].to_vec();
        let b = a.mul_vec(&x0);
        let x = a.solve(&b).unwrap();
        prop_assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn inverse_round_trip(a in invertible(3)) {
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, ExactMatrix::identity(3));
    }

    #[test]
    fn rational_text_round_trip(q in rational()) {
        prop_assert_eq!(parse_scalar(&format_scalar(&q)).unwrap(), q);
    }

    #[test]
    fn mult_and_subs_commute(a in square(2), b in square(2), phi in homogeneous(2, 2)) {
        let lhs = mult_op(&a, &subs_op(&b, &phi).unwrap()).unwrap();
        let rhs = subs_op(&b, &mult_op(&a, &phi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_an_antihomomorphism(a in square(2), b in square(2), phi in homogeneous(2, 3)) {
        let lhs = subs_op(&a, &subs_op(&b, &phi).unwrap()).unwrap();
        let rhs = subs_op(&(&b * &a), &phi).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn structural_and_column_matrices_agree(a in square(2), b in square(2), d in 0usize..3) {
        let op = LinearOp::Sum(vec![
            LinearOp::Homological(a.clone()),
            LinearOp::Compose(vec![LinearOp::Mult(b.clone()), LinearOp::Subs(a)]),
        ]);
        let structural = operator_matrix(&op, 2, d);
        let columns = nilform::poly::operator_matrix_by_columns(&op, 2, d).unwrap();
        prop_assert_eq!(structural, columns);
    }

    #[test]
    fn commuting_matrices_give_commuting_homological_operators(
        spec in spec_strategy(),
        c in rational(),
        d in 1usize..3,
    ) {
        let a = jordan_matrix(&spec);
        let b = &(&a * &a) + &a.scale(&c);
        let la = operator_matrix(&LinearOp::Homological(a), spec.dim(), d).matrix;
        let lb = operator_matrix(&LinearOp::Homological(b), spec.dim(), d).matrix;
        prop_assert!(ExactMatrix::commutator(&la, &lb).is_zero());
    }

    #[test]
    fn near_identity_inverse(phi in near_identity(2, 4)) {
        let inv = invert_near_identity(&phi, 4).unwrap();
        let id = VectorPoly::identity(2);
        prop_assert_eq!(compose_truncated(&phi, &inv, 4).unwrap(), id.clone());
        prop_assert_eq!(compose_truncated(&inv, &phi, 4).unwrap(), id);
    }

    #[test]
    fn composition_is_associative(f in near_identity(2, 3), g in near_identity(2, 3), h in near_identity(2, 3)) {
        let left = compose_truncated(&compose_truncated(&f, &g, 3).unwrap(), &h, 3).unwrap();
        let right = compose_truncated(&f, &compose_truncated(&g, &h, 3).unwrap(), 3).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn summation_lemma(m1 in 0usize..6, len in 0usize..6) {
        let m2 = m1 + len;
        prop_assert_eq!(summation_lemma_closed_form(m1, m2).expand(16), summation_lemma_direct(m1, m2, 16));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn nilpotent_substitution_vanishes(spec in spec_strategy(), d in 1usize..4) {
        let n = jordan_matrix(&spec);
        let p = spec.index();
        let subs = operator_matrix(&LinearOp::Subs(n.clone()), spec.dim(), d).matrix;
        prop_assert!(subs.pow(p).is_zero());
        let conn = operator_matrix(&LinearOp::Homological(n), spec.dim(), d).matrix;
        prop_assert!(conn.pow(2 * p).is_zero());
    }

    #[test]
    fn conjugated_triples_satisfy_brackets(p in invertible(3), d in 0usize..3) {
        let spec = NilpotentSpec::with_conjugator(&[3], p).unwrap();
        let t = build_sl2_triple(&spec).unwrap();
        prop_assert!(t.bracket_failures().is_empty());
        prop_assert!(kernels_agree(&t.m_bar, &t.raw_m));
        let lifted = lift_triple(&spec, d).unwrap();
        prop_assert!(lifted.bracket_failures().is_empty());
        prop_assert!(kernel_basis(&spec, d).unwrap().dimension_identity_holds());
    }

    #[test]
    fn conjugated_two_block_triples(p in invertible(4)) {
        let spec = NilpotentSpec::with_conjugator(&[2, 2], p).unwrap();
        let lifted = lift_triple(&spec, 2).unwrap();
        prop_assert!(lifted.bracket_failures().is_empty());
        prop_assert!(kernel_basis(&spec, 2).unwrap().dimension_identity_holds());
    }

    #[test]
    fn kernel_vectors_are_weight_vectors(spec in spec_strategy(), d in 0usize..4) {
        let lifted = lift_triple(&spec, d).unwrap();
        let basis = lifted.basis();
        let k = kernel_basis(&spec, d).unwrap();
        prop_assert!(k.dimension_identity_holds());
        for v in &k.vectors {
            let coords = v.element.to_coords(&basis);
            prop_assert!(lifted.conn_m.matrix.mul_vec(&coords).iter().all(Zero::is_zero));
            let h = lifted.cann_h.matrix.mul_vec(&coords);
            prop_assert!(h.iter().zip(&coords).all(|(a, b)| *a == b * int(v.weight)));
        }
    }

    #[test]
    fn projections_agree_and_are_idempotent(phi in homogeneous(4, 2)) {
        let spec = NilpotentSpec::new(&[4]).unwrap();
        let fast = project_ker_fast(&phi, &spec).unwrap();
        prop_assert_eq!(&fast, &project_ker_generic(&phi, &spec).unwrap());
        prop_assert_eq!(project_ker_fast(&fast, &spec).unwrap(), fast.clone());
        let lifted = lift_triple(&spec, 2).unwrap();
        prop_assert!(lifted.conn_m.apply(&fast).is_zero());
    }

    #[test]
    fn transvectants_are_top_weight(n in 2usize..5, a in 1u32..3, order in 0usize..4) {
        let spec = NilpotentSpec::new(&[n]).unwrap();
        let mut e = vec![0u32; n];
        e[0] = a;
        let w = Poly::monomial(Monomial::new(e), int(1));
        let mut v = vec![int(0); n];
        v[n - 1] = int(1);
        let ww = polynomial_top_weight(&spec, &w).unwrap() as usize;
        prop_assume!(order <= ww.min(n - 1));
        let t = transvectant(&spec, &w, &v, order).unwrap();
        let lifted = lift_triple(&spec, a as usize).unwrap();
        prop_assert!(lifted.conn_m.apply(&t).is_zero());
        let weight = (ww + n - 1 - 2 * order) as i64;
        prop_assert_eq!(lifted.cann_h.apply(&t), t.scale(&int(weight)));
    }

    #[test]
    fn normal_forms_are_stable(
        spec in prop_oneof![Just(vec![2]), Just(vec![3]), Just(vec![2, 2])].prop_map(|b| NilpotentSpec::new(&b).unwrap()),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = spec.dim();
        let mut cubic = VectorPoly::zero(n);
        for d in 2..=3 {
            let basis = SliceBasis::new(n, d);
            for _ in 0..3 {
                let (m, j) = basis.element(rng.gen_range(0..basis.dim()));
                cubic.add_term(m.clone(), j, frac(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
            }
        }
        let f = map_with(&spec, &[cubic]);
        let r = normalize(&f, &spec, 3, Style::KerConnM).unwrap();
        prop_assert!(check_style_membership(&r.normal_form, &spec, 3).unwrap().passed());
        let inv = invert_near_identity(&r.generator, 3).unwrap();
        let conj = compose_truncated(&inv, &compose_truncated(&f, &r.generator, 3).unwrap(), 3).unwrap();
        prop_assert_eq!(&conj, &r.normal_form);
        let again = normalize(&r.normal_form, &spec, 3, Style::KerConnM).unwrap();
        prop_assert_eq!(&again.normal_form, &r.normal_form);
        prop_assert_eq!(again.generator, VectorPoly::identity(n));
    }
}

#[test]
fn substitution_is_not_additive() {
    let a = ExactMatrix::from_i64(&[&[1, 0], &[0, 0]]);
    let b = ExactMatrix::from_i64(&[&[0, 0], &[0, 1]]);
    let phi = VectorPoly::unit(&[1, 1], 0);
    let sum = subs_op(&(&a + &b), &phi).unwrap();
    let separate = subs_op(&a, &phi).unwrap().add(&subs_op(&b, &phi).unwrap());
    assert_eq!(sum, phi);
    assert!(separate.is_zero());
    assert_ne!(sum, separate);
    let la = homological_op(&(&a + &b), &phi).unwrap();
    let lsum = homological_op(&a, &phi).unwrap().add(&homological_op(&b, &phi).unwrap());
    assert_ne!(la, lsum);
}
