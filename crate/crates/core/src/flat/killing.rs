//! Killing-type operators on polynomial fields over flat `ℝ^n` with metric `δ`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::field::{PolyField, TensorField};
use super::poly::{monomials_up_to, Exponent, Poly};
use super::ratfn::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, solve, ExactMatrix, Rational};
use crate::tensor::all_indices;

/// Default bound on polynomial degree for coefficient-space solves.
pub const DEFAULT_DEGREE_CAP: u32 = 6;

/// Coordinates for polynomial fields of bounded degree.
///
/// A coordinate is a pair (index tuple, monomial). For symmetric spaces only
/// non-decreasing index tuples appear and the other entries are implied.
#[derive(Clone, Debug)]
pub struct CoeffSpace {
    n: usize,
    arity: usize,
    max_degree: u32,
    symmetric: bool,
    keys: Vec<(Vec<usize>, Exponent)>,
    lookup: BTreeMap<(Vec<usize>, Exponent), usize>,
}

impl CoeffSpace {
    pub fn new(n: usize, arity: usize, max_degree: u32, symmetric: bool) -> Self {
        let monos = monomials_up_to(n, max_degree);
        let mut keys = Vec::new();
        for idx in all_indices(n, arity) {
            if symmetric && idx.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            for m in &monos {
                keys.push((idx.clone(), m.clone()));
            }
        }
        let lookup = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        CoeffSpace { n, arity, max_degree, symmetric, keys, lookup }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn basis_field(&self, j: usize) -> PolyField {
        let (idx, exp) = &self.keys[j];
        let mono = Poly::monomial(self.n, exp.clone(), Rational::from_integer(1.into()));
        let mut f = PolyField::zeros(self.n, self.arity);
        if self.symmetric {
            for other in all_indices(self.n, self.arity) {
                if sorted(&other) == *idx {
                    f.set(&other, mono.clone());
                }
            }
        } else {
            f.set(idx, mono);
        }
        f
    }

    pub fn to_field(&self, v: &[Rational]) -> PolyField {
        let mut f = PolyField::zeros(self.n, self.arity);
        for idx in all_indices(self.n, self.arity) {
            let key = if self.symmetric { sorted(&idx) } else { idx.clone() };
            let mut p = Poly::zero(self.n);
            for (j, (kidx, exp)) in self.keys.iter().enumerate() {
                if *kidx == key && !v[j].is_zero() {
                    p.add_term(exp.clone(), v[j].clone());
                }
            }
            f.set(&idx, p);
        }
        f
    }

    /// Coefficient vector of `f`; fails if `f` leaves the space.
    pub fn to_vec(&self, f: &PolyField) -> Result<Vec<Rational>> {
        if f.n() != self.n || f.arity() != self.arity {
            return Err(Error::ShapeMismatch { left: (f.n(), f.arity()), right: (self.n, self.arity) });
        }
        if self.symmetric && !f.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let mut v = alloc::vec![Rational::zero(); self.dim()];
        for (idx, p) in f.entries() {
            if self.symmetric && idx.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            for (exp, c) in p.terms() {
                let j = self.lookup.get(&(idx.clone(), exp.clone())).ok_or_else(|| {
                    Error::InvalidArgument(format!("degree exceeds the coefficient space bound {}", self.max_degree))
                })?;
                v[*j] = c.clone();
            }
        }
        Ok(v)
    }

    /// Matrix of a linear operator `self → target` in coefficient coordinates.
    pub fn operator_matrix<F>(&self, target: &CoeffSpace, mut op: F) -> Result<ExactMatrix>
    where
        F: FnMut(&PolyField) -> Result<PolyField>,
    {
        let mut trip = Vec::new();
        for j in 0..self.dim() {
            let image = op(&self.basis_field(j))?;
            for (r, v) in target.to_vec(&image)?.into_iter().enumerate() {
                if !v.is_zero() {
                    trip.push((r, j, v));
                }
            }
        }
        ExactMatrix::from_triplets(target.dim(), self.dim(), trip)
    }
}

fn sorted(idx: &[usize]) -> Vec<usize> {
    let mut s = idx.to_vec();
    s.sort_unstable();
    s
}

/// `X_a ↦ ∇_(a X_b)`.
pub fn killing_operator(x: &PolyField) -> Result<PolyField> {
    if x.arity() != 1 {
        return Err(Error::InvalidArgument(format!(
            "Killing operator needs a covector field, got arity {}",
            x.arity()
        )));
    }
    Ok(x.derivative().project(&[0, 1], false))
}

/// `X_{b…d} ↦ ∇_(a X_{b…d})`.
pub fn higher_killing_operator(x: &PolyField) -> Result<PolyField> {
    if !x.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(x.derivative().symmetrize_all())
}

/// Lie derivative of a covariant 2-tensor along the vector field `X^a`:
/// `X^a ∂_a g_bc + g_ac ∂_b X^a + g_ba ∂_c X^a`.
pub fn lie_derivative<S: Scalar>(x: &TensorField<S>, g: &TensorField<S>) -> Result<TensorField<S>> {
    if x.arity() != 1 || g.arity() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a vector field and a 2-tensor, got arities {} and {}",
            x.arity(),
            g.arity()
        )));
    }
    if x.n() != g.n() {
        return Err(Error::BaseDimension(x.n(), g.n()));
    }
    let n = g.n();
    let dg = g.derivative();
    let dx = x.derivative();
    Ok(TensorField::from_fn(n, 2, |idx| {
        let (b, c) = (idx[0], idx[1]);
        let mut acc = S::zero_in(n);
        for a in 0..n {
            acc = acc.add(&x.get(&[a]).mul(dg.get(&[a, b, c])));
            acc = acc.add(&g.get(&[a, c]).mul(dx.get(&[b, a])));
            acc = acc.add(&g.get(&[b, a]).mul(dx.get(&[c, a])));
        }
        acc
    }))
}

/// `N_abcd = ∂_a∂_c ω_bd − ∂_b∂_c ω_ad − ∂_a∂_d ω_bc + ∂_b∂_d ω_ac`.
pub fn integrability_operator(omega: &PolyField) -> Result<PolyField> {
    if omega.arity() != 2 || !omega.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = omega.n();
    // dd[(c, a, b, d)] = ∂_c ∂_a ω_bd
    let dd = omega.derivative().derivative();
    Ok(PolyField::from_fn(n, 4, |idx| {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        dd.get(&[c, a, b, d]).sub(dd.get(&[c, b, a, d])).sub(dd.get(&[d, a, b, c])).add(dd.get(&[d, b, a, c]))
    }))
}

/// Basis of polynomial Killing tensors of valence `ell` with degree `≤ max_degree`.
#[derive(Clone, Debug)]
pub struct KillingKernel {
    pub space: CoeffSpace,
    pub basis: Vec<PolyField>,
}

impl KillingKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn max_solution_degree(&self) -> u32 {
        self.basis.iter().filter_map(|f| f.degree()).max().unwrap_or(0)
    }
}

pub fn killing_kernel(n: usize, ell: usize, max_degree: u32) -> Result<KillingKernel> {
    if (max_degree as usize) < ell {
        return Err(Error::InvalidArgument(format!("max_degree {max_degree} below valence {ell}")));
    }
    let source = CoeffSpace::new(n, ell, max_degree, true);
    let target = CoeffSpace::new(n, ell + 1, max_degree.saturating_sub(1), true);
    let m = source.operator_matrix(&target, higher_killing_operator)?;
    let basis = kernel_basis(&m).iter().map(|v| source.to_field(v)).collect();
    Ok(KillingKernel { space: source, basis })
}

/// Dimension of the span of `fields`, all fitting in `space`.
pub fn span_dim(space: &CoeffSpace, fields: &[PolyField]) -> Result<usize> {
    let rows = fields.iter().map(|f| space.to_vec(f)).collect::<Result<Vec<_>>>()?;
    Ok(rank(&ExactMatrix::from_rows(&rows)))
}

/// Whether two families span the same subspace of `space`.
pub fn same_span(space: &CoeffSpace, a: &[PolyField], b: &[PolyField]) -> Result<bool> {
    let ra = span_dim(space, a)?;
    let rb = span_dim(space, b)?;
    let both: Vec<PolyField> = a.iter().chain(b).cloned().collect();
    Ok(ra == rb && span_dim(space, &both)? == ra)
}

#[derive(Clone, Debug, PartialEq)]
pub enum RangeResult {
    /// A covector `X` with `∇_(a X_b) = ω`.
    Potential(PolyField),
    /// The nonzero integrability tensor `N(ω)`.
    Obstruction(PolyField),
}

/// Solve `∇_(a X_b) = ω` for polynomial `X`, or return `N(ω) ≠ 0`.
pub fn killing_potential_solve(omega: &PolyField) -> Result<RangeResult> {
    let n_field = integrability_operator(omega)?;
    if !n_field.is_zero() {
        return Ok(RangeResult::Obstruction(n_field));
    }
    let n = omega.n();
    let d = omega.degree().unwrap_or(0);
    let source = CoeffSpace::new(n, 1, d + 1, false);
    let target = CoeffSpace::new(n, 2, d, true);
    let m = source.operator_matrix(&target, killing_operator)?;
    let rhs = target.to_vec(omega)?;
    let x =
        solve(&m, &rhs).ok_or_else(|| Error::InvalidArgument("integrable ω without a polynomial potential".into()))?;
    Ok(RangeResult::Potential(source.to_field(&x)))
}
