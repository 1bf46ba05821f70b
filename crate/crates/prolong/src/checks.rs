//! One function per acceptance criterion. Each returns [`Check`]s whose
//! verdict is `computed == predicted`.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use prolong_core::flat::killing::{same_span, CoeffSpace};
use prolong_core::flat::metric::{christoffel_closed_form, christoffel_homogeneous_dim};
use prolong_core::flat::tractor::tractor_curvature_pointwise;
use prolong_core::flat::{
    christoffel_solve, integrability_operator, killing_kernel, killing_operator, killing_potential_solve,
    tractor_curvature, MetricField, Poly, PolyField, RangeResult, TensorField,
};
use prolong_core::kostant::{lie_algebra_cohomology_of, v_dimension};
use prolong_core::linalg::{alternating_sum, kernel_basis, rat, ratio};
use prolong_core::prolong::{
    binomial, complex_cohomology_of, graded_diagonal_complex, injectivity_implication_check, key_isomorphism_check,
};
use prolong_core::tensor::all_indices;
use prolong_core::{Result, Tensor};

use crate::cache::BasisCache;
use crate::format::format_rational;

/// Shared state for a run.
#[derive(Debug)]
pub struct Context {
    pub cache: BasisCache,
    pub dimension_cap: usize,
}

impl Context {
    pub fn new(cache: BasisCache, dimension_cap: usize) -> Self {
        Context { cache, dimension_cap }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub id: String,
    #[serde(skip)]
    pub criterion: u8,
    pub name: String,
    pub command: String,
    pub inputs: Value,
    pub computed: Value,
    pub predicted: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "key isomorphism"),
    (2, "partial squares to zero"),
    (3, "cohomology identification"),
    (4, "Kostant cross-check"),
    (5, "Killing kernel dimension"),
    (6, "degree bound"),
    (7, "range of the Killing operator"),
    (8, "tractor flatness"),
    (9, "injectivity implication"),
    (10, "graded exactness"),
    (11, "Christoffel uniqueness"),
];

pub fn criterion_name(c: u8) -> &'static str {
    CRITERIA.iter().find(|(k, _)| *k == c).map(|(_, s)| *s).unwrap_or("unknown")
}

/// Time `body` and wrap its `(computed, predicted)` pair.
fn timed<F>(criterion: u8, tag: String, command: String, inputs: Value, body: F) -> Check
where
    F: FnOnce() -> Result<(Value, Value)>,
{
    let start = Instant::now();
    let (computed, predicted) = match body() {
        Ok(pair) => pair,
        Err(e) => (json!({ "error": e.to_string() }), Value::Null),
    };
    Check {
        id: format!("A{criterion}{tag}"),
        criterion,
        name: criterion_name(criterion).to_string(),
        command,
        inputs,
        pass: computed == predicted,
        computed,
        predicted,
        wall_ms: Some(start.elapsed().as_millis() as u64),
    }
}

pub fn a1_key(n: usize) -> Check {
    timed(1, format!("[n={n}]"), format!("verify-key --n {n}"), json!({ "n": n }), || {
        let k = key_isomorphism_check(n);
        let expect = n * n * (n - 1) / 2;
        Ok((
            json!({ "source_dim": k.source_dim, "target_dim": k.target_dim, "rank": k.rank }),
            json!({ "source_dim": expect, "target_dim": expect, "rank": expect }),
        ))
    })
}

pub fn a2_partial_squared(ctx: &Context, n: usize, ell: usize) -> Check {
    timed(
        2,
        format!("[n={n},ell={ell}]"),
        format!("complex --n {n} --ell {ell}"),
        json!({ "n": n, "ell": ell }),
        || {
            let space = ctx.cache.prolongation_space(n, ell)?;
            let maps: Vec<_> = (0..n).map(|p| space.partial(p)).collect();
            let nnz = maps.windows(2).map(|w| w[1].mul(&w[0]).map(|m| m.nnz())).collect::<Result<Vec<_>>>()?;
            let zeros = vec![0usize; nnz.len()];
            Ok((json!({ "composite_nnz": nnz }), json!({ "composite_nnz": zeros })))
        },
    )
}

/// Diagrams of the cohomology for valence one, written out directly.
pub fn valence_one_pictures(n: usize) -> Vec<Vec<usize>> {
    (0..=n)
        .map(|p| match p {
            0 => vec![1],
            1 => vec![2],
            _ => [2, 2].into_iter().chain(std::iter::repeat_n(1, p - 2)).collect(),
        })
        .collect()
}

pub fn a3_cohomology(ctx: &Context, n: usize, ell: usize) -> Check {
    timed(
        3,
        format!("[n={n},ell={ell}]"),
        format!("complex --n {n} --ell {ell}"),
        json!({ "n": n, "ell": ell }),
        || {
            let space = ctx.cache.prolongation_space(n, ell)?;
            let r = complex_cohomology_of(&space, ctx.dimension_cap)?;
            let diagrams: Vec<Vec<usize>> = r.entries.iter().map(|e| e.diagram.clone()).collect();
            let mut computed = json!({ "dims": r.computed() });
            let mut predicted = json!({ "dims": r.predicted() });
            if ell == 1 {
                computed["diagrams"] = json!(diagrams);
                predicted["diagrams"] = json!(valence_one_pictures(n));
            }
            if (n, ell) == (3, 1) {
                computed["pinned"] = json!(r.computed());
                predicted["pinned"] = json!([3, 6, 6, 3]);
            }
            Ok((computed, predicted))
        },
    )
}

pub fn a4_kostant(ctx: &Context, n: usize, ell: usize) -> Check {
    timed(
        4,
        format!("[n={n},ell={ell}]"),
        format!("kostant --n {n} --ell {ell}"),
        json!({ "n": n, "ell": ell }),
        || {
            let rep = ctx.cache.representation(n, ell)?;
            let lie = lie_algebra_cohomology_of(&rep, ctx.dimension_cap)?;
            let space = ctx.cache.prolongation_space(n, ell)?;
            let alg = complex_cohomology_of(&space, ctx.dimension_cap)?;
            let weyl = lie.predicted();
            let labels: Vec<_> = lie.entries.iter().map(|e| e.dynkin_labels.clone()).collect();
            Ok((
                json!({
                    "koszul": lie.computed(),
                    "prolongation": alg.computed(),
                    "euler": alternating_sum(&lie.computed()),
                    "dim_v": rep.dim(),
                    "dynkin_labels": labels,
                }),
                json!({
                    "koszul": weyl,
                    "prolongation": weyl,
                    "euler": 0,
                    "dim_v": v_dimension(n, ell),
                    "dynkin_labels": labels,
                }),
            ))
        },
    )
}

pub fn a5_killing_dim(n: usize) -> Check {
    timed(
        5,
        format!("[n={n}]"),
        format!("killing --n {n} --ell 1 --max-degree 3"),
        json!({ "n": n, "max_degree": 3 }),
        || {
            let k = killing_kernel(n, 1, 3)?;
            Ok((json!({ "dim": k.dim() }), json!({ "dim": n * (n + 1) / 2 })))
        },
    )
}

pub fn a6_degree_bound(n: usize, ell: usize) -> Check {
    let inputs = json!({ "n": n, "ell": ell, "degrees": [ell, ell + 2] });
    timed(
        6,
        format!("[n={n},ell={ell}]"),
        format!("killing --n {n} --ell {ell} --max-degree {}", ell + 2),
        inputs,
        || {
            let low = killing_kernel(n, ell, ell as u32)?;
            let high = killing_kernel(n, ell, ell as u32 + 2)?;
            let same = same_span(&high.space, &low.basis, &high.basis)?;
            Ok((
                json!({ "dim": high.dim(), "same_span": same, "max_degree_attained": high.max_solution_degree() <= ell as u32 }),
                json!({ "dim": v_dimension(n, ell), "same_span": true, "max_degree_attained": true }),
            ))
        },
    )
}

/// `ω_11 = x_2²`, whose integrability tensor has `N_1212 = 2`.
pub fn witness_form() -> PolyField {
    let mut w = PolyField::zeros(2, 2);
    w.set(&[0, 0], Poly::var(2, 1).pow(2));
    w
}

pub fn a7_range(n: usize, composite_degree: u32, spanning_degree: u32) -> Check {
    let inputs = json!({ "n": n, "composite_degree": composite_degree, "spanning_degree": spanning_degree });
    timed(7, format!("[n={n}]"), format!("range-check --n {n}"), inputs, || {
        // integrability ∘ Killing on every covector of degree ≤ composite_degree
        let source = CoeffSpace::new(n, 1, composite_degree, false);
        let target = CoeffSpace::new(n, 4, composite_degree.saturating_sub(2), false);
        let composite = source.operator_matrix(&target, |x| integrability_operator(&killing_operator(x)?))?;

        // spanning set of the kernel of N among symmetric forms of degree ≤ spanning_degree
        let forms = CoeffSpace::new(n, 2, spanning_degree, true);
        let n_target = CoeffSpace::new(n, 4, spanning_degree.saturating_sub(2), false);
        let kernel = kernel_basis(&forms.operator_matrix(&n_target, integrability_operator)?);
        let mut failures = 0usize;
        for v in &kernel {
            let w = forms.to_field(v);
            match killing_potential_solve(&w)? {
                RangeResult::Potential(x) if killing_operator(&x)? == w => {}
                _ => failures += 1,
            }
        }
        // image of Killing on covectors one degree up, by rank-nullity
        let covectors = n * binomial(n + spanning_degree as usize + 1, n);
        let expected_kernel = covectors - n * (n + 1) / 2;

        let mut computed = json!({
            "composite_nnz": composite.nnz(),
            "kernel_dim": kernel.len(),
            "round_trip_failures": failures,
        });
        let mut predicted = json!({ "composite_nnz": 0, "kernel_dim": expected_kernel, "round_trip_failures": 0 });
        if n == 2 {
            computed["witness"] = match killing_potential_solve(&witness_form())? {
                RangeResult::Obstruction(nt) => {
                    json!({ "kind": "obstruction", "N_1212": format_rational(&nt.get(&[0, 1, 0, 1]).eval(&[rat(0), rat(0)])) })
                }
                RangeResult::Potential(_) => json!({ "kind": "potential" }),
            };
            predicted["witness"] = json!({ "kind": "obstruction", "N_1212": "2" });
        }
        Ok((computed, predicted))
    })
}

pub fn a8_tractor_flat(metric: MetricField, label: &str) -> Check {
    let n = metric.n();
    let inputs = json!({ "n": n, "metric": label });
    timed(8, format!("[{label},n={n}]"), format!("tractor_curvature({label}, n={n})"), inputs, || {
        let curv = tractor_curvature(&metric)?;
        let nonzero = curv.iter().filter(|s| !s.is_zero()).count();
        Ok((json!({ "nonzero_curvature_sections": nonzero }), json!({ "nonzero_curvature_sections": 0 })))
    })
}

/// Pointwise curvature from a random algebraic curvature tensor: must not vanish.
pub fn a8_negative_control(n: usize, seed: u64) -> Check {
    let inputs = json!({ "n": n, "seed": seed, "samples": 5 });
    timed(8, format!("[random-jet,n={n}]"), format!("tractor_curvature_pointwise(random, n={n})"), inputs, || {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut h = Tensor::zeros(n, 2);
        for a in 0..n {
            for b in a..n {
                let v = rat(rng.gen_range(-3..=3));
                h.set(&[a, b], v.clone());
                h.set(&[b, a], v);
            }
        }
        // Kulkarni–Nomizu square of h
        let mut r = Tensor::zeros(n, 4);
        for i in all_indices(n, 4) {
            let (a, b, c, d) = (i[0], i[1], i[2], i[3]);
            r.set(&i, h.get(&[a, c]) * h.get(&[b, d]) - h.get(&[a, d]) * h.get(&[b, c]));
        }
        let mut dr = Tensor::zeros(n, 5);
        for i in all_indices(n, 5) {
            dr.set(&i, rat(rng.gen_range(-2..=2)));
        }
        let mut first_nonzero = 0usize;
        let mut second_nonzero = 0usize;
        for _ in 0..5 {
            let x = Tensor::unflatten(n, 1, &(0..n).map(|_| rat(rng.gen_range(-3..=3))).collect::<Vec<_>>())?;
            let mut k = Tensor::zeros(n, 2);
            for a in 0..n {
                for b in a + 1..n {
                    let v = rat(rng.gen_range(-3..=3));
                    k.set(&[a, b], v.clone());
                    k.set(&[b, a], -v);
                }
            }
            let (f, s) = tractor_curvature_pointwise(&r, &dr, &x, &k)?;
            first_nonzero += usize::from(!f.is_zero());
            second_nonzero += usize::from(!s.is_zero());
        }
        Ok((
            json!({ "bianchi_part_nonzero": first_nonzero, "curvature_detected": second_nonzero > 0 }),
            json!({ "bianchi_part_nonzero": 0, "curvature_detected": true }),
        ))
    })
}

pub fn a9_injectivity(n: usize, ell: usize) -> Check {
    let inputs = json!({ "n": n, "ell": ell });
    timed(9, format!("[n={n},ell={ell}]"), format!("injectivity_implication_check(n={n}, ell={ell})"), inputs, || {
        let c = injectivity_implication_check(n, ell);
        Ok((
            json!({ "dim": c.dim, "relaxed_positive": c.relaxed_dim > 0 }),
            json!({ "dim": 0, "relaxed_positive": true }),
        ))
    })
}

pub fn a10_graded_exactness(ctx: &Context, n: usize, ell: usize) -> Check {
    let inputs = json!({ "n": n, "ell": ell });
    timed(10, format!("[n={n},ell={ell}]"), format!("graded_diagonal_complex(n={n}, ell={ell})"), inputs, || {
        let space = ctx.cache.prolongation_space(n, ell)?;
        let mut computed = Vec::new();
        let mut predicted = Vec::new();
        for d in 0..=n + ell {
            let rep = graded_diagonal_complex(&space, d);
            for (i, &(p, k, _)) in rep.positions.iter().enumerate() {
                if rep.cohomology[i] > 0 {
                    computed.push([p, k]);
                }
                if rep.boxed[i] {
                    predicted.push([p, k]);
                }
            }
        }
        Ok((json!({ "nonzero_at": computed }), json!({ "nonzero_at": predicted })))
    })
}

pub fn a11_christoffel(n: usize, samples: usize, seed: u64) -> Check {
    let inputs = json!({ "n": n, "samples": samples, "seed": seed });
    timed(11, format!("[n={n}]"), format!("christoffel_solve(n={n})"), inputs, || {
        let mut rng = StdRng::seed_from_u64(seed ^ n as u64);
        let mut mismatches = 0usize;
        for _ in 0..samples {
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
            let solved = christoffel_solve(&dg)?;
            let closed = christoffel_closed_form(&TensorField::<Poly>::constant(&dg));
            if all_indices(n, 3).any(|idx| closed.get(&idx).as_constant() != Some(solved.get(&idx))) {
                mismatches += 1;
            }
        }
        Ok((
            json!({ "homogeneous_dim": christoffel_homogeneous_dim(n), "mismatches": mismatches }),
            json!({ "homogeneous_dim": 0, "mismatches": 0 }),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use prolong_core::prolong::DEFAULT_DIMENSION_CAP;

    fn ctx() -> Context {
        Context::new(BasisCache::new(), DEFAULT_DIMENSION_CAP)
    }

    #[test]
    fn small_checks_pass() {
        assert!(a1_key(3).pass);
        assert!(a2_partial_squared(&ctx(), 2, 1).pass);
        assert!(a3_cohomology(&ctx(), 3, 1).pass);
        assert!(a9_injectivity(2, 1).pass);
    }

    #[test]
    fn errors_fail_the_check() {
        let c = a2_partial_squared(&ctx(), 1, 1);
        assert!(!c.pass);
        assert!(c.computed["error"].is_string());
    }

    #[test]
    fn pictures_for_valence_one() {
        assert_eq!(valence_one_pictures(4), vec![vec![1], vec![2], vec![2, 2], vec![2, 2, 1], vec![2, 2, 1, 1]]);
    }
}
