//! Metrics with rational-function entries, Levi-Civita connection, curvature.
//!
//! Curvature convention: `[∇_a, ∇_b] X^c = R_ab^c_d X^d`, stored with slot
//! order `(a, b, c, d)`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::field::{delta, RatField, TensorField};
use super::poly::Poly;
use super::ratfn::{RatFn, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, ratio, solve, ExactMatrix, Rational};
use crate::tensor::{all_indices, flat_index, Tensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricMode {
    Flat,
    /// `4 δ / (1 + κ|x|²)²`.
    Stereographic(Rational),
    Custom,
}

#[derive(Clone, Debug)]
pub struct MetricField {
    mode: MetricMode,
    g: RatField,
}

impl MetricField {
    pub fn flat(n: usize) -> Self {
        MetricField { mode: MetricMode::Flat, g: delta(n) }
    }

    pub fn stereographic(n: usize, kappa: Rational) -> Self {
        let q = (0..n).fold(Poly::one(n), |acc, i| acc.add(&Poly::var(n, i).pow(2).scale(&kappa)));
        let conf = RatFn::new(Poly::constant(n, Rational::from_integer(4.into())), &q.pow(2)).expect("nonzero");
        let g = delta::<RatFn>(n).mul_scalar(&conf);
        MetricField { mode: MetricMode::Stereographic(kappa), g }
    }

    pub fn custom(g: RatField) -> Result<Self> {
        if g.arity() != 2 || !g.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(MetricField { mode: MetricMode::Custom, g })
    }

    pub fn mode(&self) -> &MetricMode {
        &self.mode
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn g(&self) -> &RatField {
        &self.g
    }
}

/// Inverse of a square matrix field by Gauss–Jordan over rational functions.
pub fn inverse_matrix<S: Scalar>(g: &TensorField<S>) -> Result<TensorField<S>> {
    let n = g.n();
    let mut a: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| g.get(&[i, j]).clone()).collect()).collect();
    let mut inv: Vec<Vec<S>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { S::one_in(n) } else { S::zero_in(n) }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMetric)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv().ok_or(Error::SingularMetric)?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&p);
            inv[col][j] = inv[col][j].mul(&p);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = a[col][j].mul(&f);
                a[r][j] = a[r][j].sub(&t);
                let t = inv[col][j].mul(&f);
                inv[r][j] = inv[r][j].sub(&t);
            }
        }
    }
    Ok(TensorField::from_fn(n, 2, |idx| inv[idx[0]][idx[1]].clone()))
}

/// Levi-Civita data: `g`, `g⁻¹`, and `Γ_ab^c` in slot order `(a, b, c)`.
#[derive(Clone, Debug)]
pub struct LeviCivita {
    pub g: RatField,
    pub g_inv: RatField,
    pub gamma: RatField,
}

impl LeviCivita {
    pub fn new(metric: &MetricField) -> Result<Self> {
        let g = metric.g().clone();
        let n = g.n();
        let g_inv = inverse_matrix(&g)?;
        let dg = g.derivative();
        let lower = christoffel_closed_form(&dg);
        let gamma = RatField::from_fn(n, 3, |idx| {
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            (0..n).fold(RatFn::zero(n), |acc, d| acc.add(&g_inv.get(&[c, d]).mul(lower.get(&[a, b, d]))))
        });
        Ok(LeviCivita { g, g_inv, gamma })
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// `∇_a` on a tensor whose slots are upper where `upper[s]` is set.
    /// The derivative index is slot 0 of the result.
    pub fn covariant_derivative(&self, f: &RatField, upper: &[bool]) -> Result<RatField> {
        if upper.len() != f.arity() {
            return Err(Error::InvalidArgument(format!(
                "variance mask of length {} for arity {}",
                upper.len(),
                f.arity()
            )));
        }
        if f.n() != self.n() {
            return Err(Error::BaseDimension(f.n(), self.n()));
        }
        let n = self.n();
        let df = f.derivative();
        Ok(RatField::from_fn(n, f.arity() + 1, |idx| {
            let a = idx[0];
            let rest = &idx[1..];
            let mut acc = df.get(idx).clone();
            for (s, &up) in upper.iter().enumerate() {
                let mut src = rest.to_vec();
                for e in 0..n {
                    src[s] = e;
                    let term = if up {
                        // + Γ_ae^{i_s} f^{…e…}
                        self.gamma.get(&[a, e, rest[s]]).mul(f.get(&src))
                    } else {
                        // − Γ_{a i_s}^e f_{…e…}
                        self.gamma.get(&[a, rest[s], e]).mul(f.get(&src)).neg()
                    };
                    acc = acc.add(&term);
                }
            }
            acc
        }))
    }

    /// `∇_a` on an all-lower tensor.
    pub fn covariant_derivative_lower(&self, f: &RatField) -> Result<RatField> {
        self.covariant_derivative(f, &alloc::vec![false; f.arity()])
    }

    /// `R_ab^c_d = ∂_a Γ_bd^c − ∂_b Γ_ad^c + Γ_ae^c Γ_bd^e − Γ_be^c Γ_ad^e`.
    pub fn riemann(&self) -> RatField {
        let n = self.n();
        let dgamma = self.gamma.derivative();
        RatField::from_fn(n, 4, |idx| {
            let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
            let mut acc = dgamma.get(&[a, b, d, c]).sub(dgamma.get(&[b, a, d, c]));
            for e in 0..n {
                acc = acc.add(&self.gamma.get(&[a, e, c]).mul(self.gamma.get(&[b, d, e])));
                acc = acc.sub(&self.gamma.get(&[b, e, c]).mul(self.gamma.get(&[a, d, e])));
            }
            acc
        })
    }
}

pub fn covariant_derivative(f: &RatField, metric: &MetricField) -> Result<RatField> {
    LeviCivita::new(metric)?.covariant_derivative_lower(f)
}

pub fn riemann(metric: &MetricField) -> Result<RatField> {
    Ok(LeviCivita::new(metric)?.riemann())
}

/// `κ (δ_a^c g_bd − δ_b^c g_ad)`.
pub fn constant_curvature_form(g: &RatField, kappa: &Rational) -> RatField {
    let n = g.n();
    RatField::from_fn(n, 4, |idx| {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = RatFn::zero(n);
        if a == c {
            acc = acc.add(g.get(&[b, d]));
        }
        if b == c {
            acc = acc.sub(g.get(&[a, d]));
        }
        acc.scale(kappa)
    })
}

/// `Γ_abc = ½ (Dg_abc + Dg_bac − Dg_cab)`, all indices lowered.
pub fn christoffel_closed_form<S: Scalar>(dg: &TensorField<S>) -> TensorField<S> {
    let half = ratio(1, 2);
    TensorField::from_fn(dg.n(), 3, |idx| {
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        dg.get(&[a, b, c]).add(dg.get(&[b, a, c])).sub(dg.get(&[c, a, b])).scale(&half)
    })
}

/// The linear system `Γ_abc − Γ_bac = 0`, `Γ_abc + Γ_acb = Dg_abc` on `Γ ∈ ℝ^{n³}`.
pub fn christoffel_system(n: usize) -> ExactMatrix {
    let one = Rational::from_integer(1.into());
    let mut trip = Vec::new();
    let mut row = 0;
    for idx in all_indices(n, 3) {
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        trip.push((row, flat_index(n, &[a, b, c]), one.clone()));
        trip.push((row, flat_index(n, &[b, a, c]), -one.clone()));
        row += 1;
    }
    for idx in all_indices(n, 3) {
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        trip.push((row, flat_index(n, &[a, b, c]), one.clone()));
        trip.push((row, flat_index(n, &[a, c, b]), one.clone()));
        row += 1;
    }
    ExactMatrix::from_triplets(row, n * n * n, trip).expect("in range")
}

/// Dimension of the solution space of the homogeneous Christoffel system.
pub fn christoffel_homogeneous_dim(n: usize) -> usize {
    kernel_basis(&christoffel_system(n)).len()
}

/// The unique `Γ_abc` with `Γ_[ab]c = 0` and `Γ_a(bc) = ½ Dg_abc`, from
/// pointwise values `Dg_abc = D_a g_bc`.
pub fn christoffel_solve(dg: &Tensor) -> Result<Tensor> {
    if dg.arity() != 3 {
        return Err(Error::InvalidArgument(format!("expected a 3-tensor, got arity {}", dg.arity())));
    }
    let n = dg.n();
    for idx in all_indices(n, 3) {
        if dg.get(&idx) != dg.get(&[idx[0], idx[2], idx[1]]) {
            return Err(Error::NotSymmetric);
        }
    }
    let m = christoffel_system(n);
    let mut rhs = alloc::vec![Rational::zero(); n * n * n];
    rhs.extend(all_indices(n, 3).map(|idx| dg.get(&idx)));
    let x = solve(&m, &rhs).ok_or_else(|| Error::InvalidArgument("inconsistent Christoffel system".into()))?;
    Tensor::unflatten(n, 3, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn christoffel_unique_and_closed_form() {
        for n in 2..=4 {
            assert_eq!(christoffel_homogeneous_dim(n), 0);
        }
        let mut dg = Tensor::zeros(2, 3);
        dg.set(&[0, 1, 1], rat(2));
        let gamma = christoffel_solve(&dg).unwrap();
        let closed = christoffel_closed_form(&TensorField::<Poly>::constant(&dg));
        for idx in all_indices(2, 3) {
            assert_eq!(Some(gamma.get(&idx)), closed.get(&idx).as_constant());
        }
        assert_eq!(gamma.get(&[0, 1, 1]), rat(1));
        assert_eq!(gamma.get(&[1, 1, 0]), rat(-1));
        assert!(christoffel_solve(&Tensor::zeros(3, 3)).unwrap().is_zero());
    }

    #[test]
    fn asymmetric_jet_is_rejected() {
        let mut dg = Tensor::zeros(2, 3);
        dg.set(&[0, 0, 1], rat(1));
        assert_eq!(christoffel_solve(&dg).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let lc = LeviCivita::new(&MetricField::flat(3)).unwrap();
        assert!(lc.gamma.is_zero());
        assert!(lc.riemann().is_zero());
    }

    #[test]
    fn sphere_is_parallel_and_round() {
        let m = MetricField::stereographic(2, rat(1));
        let lc = LeviCivita::new(&m).unwrap();
        assert!(lc.covariant_derivative_lower(m.g()).unwrap().is_zero());
        assert_eq!(lc.riemann(), constant_curvature_form(m.g(), &rat(1)));
    }
}
