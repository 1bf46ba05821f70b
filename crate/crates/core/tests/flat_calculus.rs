use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use prolong_core::flat::killing::{same_span, span_dim, CoeffSpace};
use prolong_core::flat::metric::{christoffel_closed_form, christoffel_homogeneous_dim, constant_curvature_form};
use prolong_core::flat::poly::monomials_up_to;
use prolong_core::flat::tractor::{prolongation_parallel, tractor_curvature_pointwise};
use prolong_core::flat::*;
use prolong_core::linalg::{rat, ratio, Rational};
use prolong_core::prolong::build_t;
use prolong_core::tensor::all_indices;
use prolong_core::Tensor;

fn random_poly(rng: &mut StdRng, n: usize, max_degree: u32, terms: usize) -> Poly {
    let monos = monomials_up_to(n, max_degree);
    let mut p = Poly::zero(n);
    for _ in 0..terms {
        let e = monos[rng.gen_range(0..monos.len())].clone();
        p.add_term(e, rat(rng.gen_range(-4..=4)));
    }
    p
}

fn random_field(rng: &mut StdRng, n: usize, arity: usize, max_degree: u32) -> PolyField {
    PolyField::from_fn(n, arity, |_| random_poly(rng, n, max_degree, 3))
}

fn random_symmetric(rng: &mut StdRng, n: usize, max_degree: u32) -> PolyField {
    random_field(rng, n, 2, max_degree).project(&[0, 1], false)
}

#[test]
fn second_derivatives_commute() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let f = random_field(&mut rng, n, 1, 4);
        let dd = f.derivative().derivative();
        assert_eq!(dd.permute_slots(&[1, 0, 2]), dd);
    }
}

#[test]
fn killing_operator_is_half_the_lie_derivative_of_delta() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..50 {
        let n = rng.gen_range(2..=3);
        let x = random_field(&mut rng, n, 1, 3);
        let lie = lie_derivative(&x, &delta(n)).unwrap();
        assert_eq!(lie, killing_operator(&x).unwrap().scale(&rat(2)));
    }
}

#[test]
fn higher_killing_operator_examples() {
    let mut rng = StdRng::seed_from_u64(3);
    let x = random_field(&mut rng, 3, 1, 3);
    assert_eq!(higher_killing_operator(&x).unwrap(), killing_operator(&x).unwrap());

    let x1 = Poly::var(2, 0);
    let xd = delta::<Poly>(2).mul_scalar(&x1);
    let out = higher_killing_operator(&xd).unwrap();
    assert_eq!(out.get(&[0, 0, 0]), &Poly::one(2));
    assert_eq!(out.get(&[0, 1, 1]), &Poly::constant(2, ratio(1, 3)));
    assert_eq!(out.get(&[1, 0, 1]), &Poly::constant(2, ratio(1, 3)));
    assert!(out.get(&[0, 0, 1]).is_zero() && out.get(&[1, 1, 1]).is_zero());

    let asym = PolyField::from_fn(2, 2, |i| if i == [0, 1] { x1.clone() } else { Poly::zero(2) });
    assert!(higher_killing_operator(&asym).is_err());
}

#[test]
fn killing_kernels_attain_the_prolongation_bound() {
    for n in 2..=3 {
        for ell in 1..=2 {
            let small = killing_kernel(n, ell, ell as u32).unwrap();
            let big = killing_kernel(n, ell, ell as u32 + 2).unwrap();
            assert_eq!(small.dim(), build_t(n, ell).unwrap().dim(), "n={n} ell={ell}");
            assert!(big.max_solution_degree() <= ell as u32);
            assert!(same_span(&big.space, &small.basis, &big.basis).unwrap());
        }
    }
}

#[test]
fn integrability_kills_the_image_of_the_killing_operator() {
    for n in 2..=3 {
        let source = CoeffSpace::new(n, 1, 5, false);
        for j in 0..source.dim() {
            let w = killing_operator(&source.basis_field(j)).unwrap();
            assert!(integrability_operator(&w).unwrap().is_zero());
        }
    }
}

#[test]
fn integrability_tensor_symmetries() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..20 {
        let w = random_symmetric(&mut rng, 3, 3);
        let nt = integrability_operator(&w).unwrap();
        assert_eq!(nt.permute_slots(&[1, 0, 2, 3]), nt.scale(&rat(-1)));
        assert_eq!(nt.permute_slots(&[0, 1, 3, 2]), nt.scale(&rat(-1)));
        assert_eq!(nt.permute_slots(&[2, 3, 0, 1]), nt);
        // cyclic sum over the last three slots
        let cyc = nt.add(&nt.permute_slots(&[0, 2, 3, 1])).unwrap().add(&nt.permute_slots(&[0, 3, 1, 2])).unwrap();
        assert!(cyc.is_zero());
    }
}

#[test]
fn potentials_round_trip() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let x = random_field(&mut rng, n, 1, 4);
        let w = killing_operator(&x).unwrap();
        match killing_potential_solve(&w).unwrap() {
            RangeResult::Potential(y) => assert_eq!(killing_operator(&y).unwrap(), w),
            RangeResult::Obstruction(nt) => panic!("image of the Killing operator obstructed: {nt:?}"),
        }
    }
}

#[test]
fn integrable_forms_have_potentials() {
    let n = 2;
    let space = CoeffSpace::new(n, 2, 4, true);
    let target = CoeffSpace::new(n, 4, 2, false);
    let m = space.operator_matrix(&target, integrability_operator).unwrap();
    let kernel = prolong_core::linalg::kernel_basis(&m);
    assert!(!kernel.is_empty());
    for v in &kernel {
        let w = space.to_field(v);
        let RangeResult::Potential(x) = killing_potential_solve(&w).unwrap() else { panic!("N(ω) = 0") };
        assert_eq!(killing_operator(&x).unwrap(), w);
    }
    let images: Vec<PolyField> = kernel.iter().map(|v| space.to_field(v)).collect();
    assert_eq!(span_dim(&space, &images).unwrap(), kernel.len());
}

#[test]
fn christoffel_matches_closed_form_on_random_jets() {
    let mut rng = StdRng::seed_from_u64(6);
    for n in 2..=5 {
        assert_eq!(christoffel_homogeneous_dim(n), 0);
    }
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let mut dg = Tensor::zeros(n, 3);
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    let v = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
                    dg.set(&[a, b, c], v.clone());
                    dg.set(&[a, c, b], v);
                }
            }
        }
        let solved = christoffel_solve(&dg).unwrap();
        let closed = christoffel_closed_form(&TensorField::<Poly>::constant(&dg));
        for idx in all_indices(n, 3) {
            assert_eq!(closed.get(&idx).as_constant(), Some(solved.get(&idx)));
        }
    }
}

/// A metric that is neither flat nor of constant curvature.
fn perturbed_metric() -> MetricField {
    let n = 2;
    let x = Poly::var(n, 0);
    let y = Poly::var(n, 1);
    let one = Poly::one(n);
    let g11 = one.add(&y.mul(&y));
    let g12 = x.mul(&y).scale(&ratio(1, 2));
    let g22 = one.add(&x.scale(&ratio(1, 3)));
    let g = PolyField::from_fn(n, 2, |i| match (i[0], i[1]) {
        (0, 0) => g11.clone(),
        (1, 1) => g22.clone(),
        _ => g12.clone(),
    });
    MetricField::custom(g.to_rational()).unwrap()
}

#[test]
fn metric_is_parallel_in_every_mode() {
    for m in [MetricField::flat(3), MetricField::stereographic(3, ratio(1, 2)), perturbed_metric()] {
        assert!(covariant_derivative(m.g(), &m).unwrap().is_zero(), "{:?}", m.mode());
    }
}

#[test]
fn torsion_free() {
    let m = perturbed_metric();
    let lc = LeviCivita::new(&m).unwrap();
    let f = RatField::from_fn(2, 0, |_| RatFn::from_poly(Poly::var(2, 0).pow(3).mul(&Poly::var(2, 1))));
    let grad = f.derivative();
    let hess = lc.covariant_derivative_lower(&grad).unwrap();
    assert_eq!(hess.permute_slots(&[1, 0]), hess);
}

#[test]
fn curvature_obeys_the_commutator_convention() {
    let mut rng = StdRng::seed_from_u64(8);
    let m = MetricField::stereographic(2, rat(1));
    let lc = LeviCivita::new(&m).unwrap();
    let r = lc.riemann();
    assert_eq!(r, constant_curvature_form(m.g(), &rat(1)));
    for _ in 0..20 {
        let x = random_field(&mut rng, 2, 1, 2).to_rational();
        let dx = lc.covariant_derivative(&x, &[true]).unwrap();
        let ddx = lc.covariant_derivative(&dx, &[false, true]).unwrap();
        let comm = ddx.sub(&ddx.permute_slots(&[1, 0, 2])).unwrap();
        let rx = RatField::from_fn(2, 3, |i| {
            (0..2).fold(RatFn::zero(2), |acc, d| acc.add(&r.get(&[i[0], i[1], i[2], d]).mul(x.get(&[d]))))
        });
        assert_eq!(comm, rx);
    }
}

#[test]
fn flat_prolongation_equivalence() {
    let flat = MetricField::flat(3);
    for x in &killing_kernel(3, 1, 3).unwrap().basis {
        assert!(prolongation_parallel(x, &flat).unwrap());
    }
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..10 {
        let x = random_field(&mut rng, 3, 1, 2);
        let killing = killing_operator(&x).unwrap().is_zero();
        assert_eq!(prolongation_parallel(&x, &flat).unwrap(), killing);
    }
}

#[test]
fn flat_tractor_parallel_sections_are_killing_tensors() {
    let t = FlatTractor::new(build_t(3, 2).unwrap());
    let kernel = killing_kernel(3, 2, 2).unwrap();
    assert_eq!(kernel.dim(), t.space().dim());
    for x in &kernel.basis {
        assert!(t.is_parallel(&t.lift(x).unwrap()).unwrap());
    }
    let mut rng = StdRng::seed_from_u64(10);
    let dims = t.space().component_dims();
    let random: Vec<Vec<Poly>> =
        dims.iter().map(|&d| (0..d).map(|_| random_poly(&mut rng, 3, 2, 2)).collect()).collect();
    assert!(!t.is_parallel(&random).unwrap());
}

fn eval_rat(f: &RatField, pt: &[Rational]) -> Tensor {
    f.eval(pt).expect("point in the domain")
}

#[test]
fn pointwise_tractor_curvature_matches_symbolic() {
    let m = perturbed_metric();
    let conn = TractorConnection::new(&m).unwrap();
    let r = conn.riemann();
    let dr = conn.levi_civita().covariant_derivative(r, &[false, false, true, false]).unwrap();
    assert!(!r.is_zero());
    let pt = [ratio(1, 2), ratio(-1, 3)];
    let (r0, dr0) = (eval_rat(r, &pt), eval_rat(&dr, &pt));
    let mut nonzero = false;
    for s in TractorSection::constant_basis(2) {
        let omega = conn.curvature_on(&s).unwrap();
        let (first, second) =
            tractor_curvature_pointwise(&r0, &dr0, &eval_rat(&s.x, &pt), &eval_rat(&s.k, &pt)).unwrap();
        assert_eq!(eval_rat(&omega.x, &pt), first);
        assert_eq!(eval_rat(&omega.k, &pt), second);
        assert!(first.is_zero());
        nonzero |= !second.is_zero();
    }
    assert!(nonzero, "a generic metric has a curved tractor connection");
}

#[test]
fn pointwise_constant_curvature_is_flat_and_random_curvature_is_not() {
    let mut rng = StdRng::seed_from_u64(11);
    let n = 3;
    let kappa = ratio(2, 3);
    let mut round = Tensor::zeros(n, 4);
    for i in all_indices(n, 4) {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        let v = if a == c && b == d { kappa.clone() } else { rat(0) }
            - if b == c && a == d { kappa.clone() } else { rat(0) };
        round.set(&i, v);
    }
    let mut h = Tensor::zeros(n, 2);
    for a in 0..n {
        for b in a..n {
            let v = rat(rng.gen_range(-3..=3));
            h.set(&[a, b], v.clone());
            h.set(&[b, a], v);
        }
    }
    // Kulkarni–Nomizu square of a random symmetric h: a random algebraic curvature tensor
    let mut random = Tensor::zeros(n, 4);
    for i in all_indices(n, 4) {
        let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
        random.set(&i, h.get(&[a, c]) * h.get(&[b, d]) - h.get(&[a, d]) * h.get(&[b, c]));
    }
    let mut jet = Tensor::zeros(n, 5);
    for i in all_indices(n, 5) {
        jet.set(&i, rat(rng.gen_range(-2..=2)));
    }
    let zero_jet = Tensor::zeros(n, 5);
    let mut nonzero = false;
    for trial in 0..5 {
        let x = Tensor::unflatten(n, 1, &(0..n).map(|_| rat(rng.gen_range(-3..=3))).collect::<Vec<_>>()).unwrap();
        let mut k = Tensor::zeros(n, 2);
        for a in 0..n {
            for b in a + 1..n {
                let v = rat(rng.gen_range(-3..=3) + trial);
                k.set(&[a, b], v.clone());
                k.set(&[b, a], -v);
            }
        }
        let (f, s) = tractor_curvature_pointwise(&round, &zero_jet, &x, &k).unwrap();
        assert!(f.is_zero() && s.is_zero());
        let (f, s) = tractor_curvature_pointwise(&random, &jet, &x, &k).unwrap();
        assert!(f.is_zero());
        nonzero |= !s.is_zero();
    }
    assert!(nonzero);
}

#[test]
fn tractor_flatness_on_model_spaces() {
    for m in [MetricField::flat(2), MetricField::flat(3), MetricField::stereographic(2, rat(1))] {
        assert!(tractor_curvature(&m).unwrap().iter().all(|s| s.is_zero()), "{:?}", m.mode());
    }
    assert!(tractor_curvature(&perturbed_metric()).is_err());
}
