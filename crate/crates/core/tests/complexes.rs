use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use prolong_core::kostant::{
    build_v, g_action, koszul_complex, lie_algebra_cohomology, tensor_action, GlMatrix, Grade, GradedSl,
};
use prolong_core::linalg::{alternating_sum, rat, Rational};
use prolong_core::prolong::{
    build_partial, build_t, complex_cohomology, graded_diagonal_complex, injectivity_implication_check,
    key_isomorphism_check, DEFAULT_DIMENSION_CAP,
};
use prolong_core::Tensor;

#[test]
fn partial_squares_to_zero() {
    for n in 2usize..=4 {
        for ell in 1..=3 {
            for p in 0..n - 1 {
                let d0 = build_partial(n, ell, p).unwrap();
                let d1 = build_partial(n, ell, p + 1).unwrap();
                assert!(d1.mul(&d0).unwrap().is_zero(), "n={n} ell={ell} p={p}");
            }
        }
    }
}

#[test]
fn key_map_is_bijective() {
    for n in 2..=6 {
        let k = key_isomorphism_check(n);
        assert!(k.bijective(), "n={n}: {k:?}");
        assert_eq!(k.source_dim, n * n * (n - 1) / 2);
    }
}

#[test]
fn valence_one_cohomology() {
    let r = complex_cohomology(3, 1, DEFAULT_DIMENSION_CAP).unwrap();
    assert_eq!(r.computed(), vec![3, 6, 6, 3]);
    let diagrams: Vec<Vec<usize>> = r.entries.iter().map(|e| e.diagram.clone()).collect();
    assert_eq!(diagrams, vec![vec![1], vec![2], vec![2, 2], vec![2, 2, 1]]);
}

#[test]
fn prolongation_and_koszul_agree() {
    for n in 2..=3 {
        for ell in 1..=2 {
            let a = complex_cohomology(n, ell, DEFAULT_DIMENSION_CAP).unwrap();
            let b = lie_algebra_cohomology(n, ell, DEFAULT_DIMENSION_CAP).unwrap();
            assert_eq!(a.computed(), b.computed(), "n={n} ell={ell}");
            assert!(b.all_match());
            assert_eq!(alternating_sum(&b.computed()), 0);
        }
    }
}

#[test]
fn branching_matches_components() {
    for n in 2..=3 {
        for ell in 1..=2 {
            let mut graded = build_v(n, ell).unwrap().graded_dims();
            graded.reverse();
            assert_eq!(graded, build_t(n, ell).unwrap().component_dims(), "n={n} ell={ell}");
        }
    }
}

#[test]
fn graded_diagonals_are_exact_away_from_corners() {
    for ell in 1..=2 {
        let space = build_t(3, ell).unwrap();
        for d in 0..=3 + ell {
            let rep = graded_diagonal_complex(&space, d);
            assert!(rep.matches_boxes(), "ell={ell} d={d}: {rep:?}");
            assert_eq!(rep.euler(), alternating_sum(&rep.cohomology));
        }
    }
}

#[test]
fn injectivity_and_its_negative_control() {
    for n in 2..=3 {
        for ell in 1..=3 {
            let c = injectivity_implication_check(n, ell);
            assert_eq!(c.dim, 0, "n={n} ell={ell}");
            assert!(c.relaxed_dim > 0, "n={n} ell={ell}");
        }
    }
}

fn random_matrix(rng: &mut StdRng, m: usize) -> GlMatrix {
    GlMatrix::from_rows((0..m).map(|_| (0..m).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect())
}

#[test]
fn action_is_a_representation() {
    let mut rng = StdRng::seed_from_u64(7);
    let rep = build_v(2, 2).unwrap();
    for _ in 0..50 {
        let x = random_matrix(&mut rng, 3);
        let y = random_matrix(&mut rng, 3);
        let coeffs: Vec<Rational> = (0..rep.dim()).map(|_| rat(rng.gen_range(-2..=2))).collect();
        let v = Tensor::from_entries(
            3,
            4,
            rep.basis().combine(&coeffs).into_iter().map(|(f, c)| (prolong_core::tensor::unflat_index(3, 4, f), c)),
        )
        .unwrap();
        let xy = g_action(&rep, &x, &g_action(&rep, &y, &v).unwrap()).unwrap();
        let yx = g_action(&rep, &y, &g_action(&rep, &x, &v).unwrap()).unwrap();
        let bracket = g_action(&rep, &x.bracket(&y), &v).unwrap();
        assert_eq!(xy.add(&yx.scale(&rat(-1))).unwrap(), bracket);
    }
}

#[test]
fn minus_one_part_is_abelian() {
    let g = GradedSl::new(4);
    let basis = g.minus_basis();
    assert_eq!(basis.len(), 3);
    let rep = build_v(3, 1).unwrap();
    for x in &basis {
        for y in &basis {
            assert!(x.bracket(y).is_zero());
            for j in 0..rep.dim() {
                let v = rep.basis().tensor(j);
                assert_eq!(tensor_action(x, &tensor_action(y, &v)), tensor_action(y, &tensor_action(x, &v)));
            }
        }
    }
    assert_eq!(g.grade(2, 0), Grade::Minus);
    assert_eq!(g.grade(0, 3), Grade::Plus);
    assert_eq!(g.grade(1, 2), Grade::Zero);
}

#[test]
fn action_leaving_the_subspace_is_rejected() {
    let rep = build_v(2, 1).unwrap();
    let mut bad = Tensor::zeros(3, 2);
    bad.set(&[0, 1], rat(1));
    assert!(g_action(&rep, &GlMatrix::zeros(3), &bad).is_err());
    assert!(koszul_complex(2, 1, 5).is_err());
    let k = koszul_complex(2, 1, DEFAULT_DIMENSION_CAP).unwrap();
    for (p, m) in k.complex.maps().iter().enumerate() {
        assert!(m.triplets().all(|(_, _, v)| !v.is_zero()), "degree {p}");
    }
}
