//! The prolongation connection for Killing fields and Killing tensors.
//!
//! For `ℓ = 1` the bundle is `Λ¹ ⊕ Λ²` with
//! `∇_a (X_b, K_bc) = (∇_a X_b − K_ab, ∇_a K_bc − R_bc^d_a X_d)`.
//! Sections may carry leading form slots; derivatives prepend a new slot.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::field::{PolyField, RatField};
use super::metric::{LeviCivita, MetricField, MetricMode};
use super::poly::Poly;
use super::ratfn::RatFn;
use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::prolong::ProlongationSpace;
use crate::tensor::{all_indices, Tensor};

/// `(X_{f b}, K_{f bc})` with `r` leading form slots `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct TractorSection {
    pub x: RatField,
    pub k: RatField,
}

impl TractorSection {
    pub fn new(x: RatField, k: RatField) -> Result<Self> {
        if x.n() != k.n() {
            return Err(Error::BaseDimension(x.n(), k.n()));
        }
        if k.arity() != x.arity() + 1 || x.arity() == 0 {
            return Err(Error::InvalidArgument(format!(
                "component arities {} and {} do not form a section",
                x.arity(),
                k.arity()
            )));
        }
        let s = TractorSection { x, k };
        if !s.k.project(&[s.form_slots(), s.form_slots() + 1], false).is_zero() {
            return Err(Error::InvalidArgument("K part is not skew".into()));
        }
        Ok(s)
    }

    pub fn form_slots(&self) -> usize {
        self.x.arity() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.k.is_zero()
    }

    /// `(X, ∇_[b X_c])` induced by a covector field.
    pub fn from_covector(x: &PolyField) -> Result<Self> {
        if x.arity() != 1 {
            return Err(Error::InvalidArgument(format!("expected a covector field, got arity {}", x.arity())));
        }
        let k = x.derivative().project(&[0, 1], true);
        Self::new(x.to_rational(), k.to_rational())
    }

    /// Constant sections `(e_i, 0)` and `(0, e_i ∧ e_j)` spanning every fibre.
    pub fn constant_basis(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let one = RatFn::one(n);
        for i in 0..n {
            let mut x = RatField::zeros(n, 1);
            x.set(&[i], one.clone());
            out.push(TractorSection { x, k: RatField::zeros(n, 2) });
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut k = RatField::zeros(n, 2);
                k.set(&[i, j], one.clone());
                k.set(&[j, i], one.neg());
                out.push(TractorSection { x: RatField::zeros(n, 1), k });
            }
        }
        out
    }
}

/// The connection for a fixed metric, with `Γ` and `R` precomputed.
#[derive(Clone, Debug)]
pub struct TractorConnection {
    lc: LeviCivita,
    riemann: RatField,
}

impl TractorConnection {
    pub fn new(metric: &MetricField) -> Result<Self> {
        let lc = LeviCivita::new(metric)?;
        let riemann = lc.riemann();
        Ok(TractorConnection { lc, riemann })
    }

    pub fn levi_civita(&self) -> &LeviCivita {
        &self.lc
    }

    pub fn riemann(&self) -> &RatField {
        &self.riemann
    }

    pub fn derivative(&self, s: &TractorSection) -> Result<TractorSection> {
        let n = self.lc.n();
        if s.x.n() != n {
            return Err(Error::BaseDimension(s.x.n(), n));
        }
        let r = s.form_slots();
        let dx = self.lc.covariant_derivative_lower(&s.x)?;
        let dk = self.lc.covariant_derivative_lower(&s.k)?;
        // (a, f…, b)
        let x = RatField::from_fn(n, r + 2, |idx| {
            let (a, f, b) = (idx[0], &idx[1..=r], idx[r + 1]);
            let mut kidx = f.to_vec();
            kidx.extend([a, b]);
            dx.get(idx).sub(s.k.get(&kidx))
        });
        // (a, f…, b, c)
        let k = RatField::from_fn(n, r + 3, |idx| {
            let (a, f, b, c) = (idx[0], &idx[1..=r], idx[r + 1], idx[r + 2]);
            let mut acc = dk.get(idx).clone();
            let mut xidx = f.to_vec();
            xidx.push(0);
            for d in 0..n {
                xidx[r] = d;
                acc = acc.sub(&self.riemann.get(&[b, c, d, a]).mul(s.x.get(&xidx)));
            }
            acc
        });
        Ok(TractorSection { x, k })
    }

    /// `Ω_ab s = ∇_a ∇_b s − ∇_b ∇_a s`, slots `(a, b, …)`.
    pub fn curvature_on(&self, s: &TractorSection) -> Result<TractorSection> {
        let dd = self.derivative(&self.derivative(s)?)?;
        let swap = |f: &RatField| {
            let mut perm: Vec<usize> = (0..f.arity()).collect();
            perm.swap(0, 1);
            f.sub(&f.permute_slots(&perm))
        };
        Ok(TractorSection { x: swap(&dd.x)?, k: swap(&dd.k)? })
    }

    /// A section is parallel when its derivative vanishes identically.
    pub fn is_parallel(&self, s: &TractorSection) -> Result<bool> {
        Ok(self.derivative(s)?.is_zero())
    }
}

pub fn tractor_derivative(s: &TractorSection, metric: &MetricField) -> Result<TractorSection> {
    TractorConnection::new(metric)?.derivative(s)
}

/// Tractor curvature on the constant basis sections.
pub fn tractor_curvature(metric: &MetricField) -> Result<Vec<TractorSection>> {
    if *metric.mode() == MetricMode::Custom {
        return Err(Error::UnsupportedMode("tractor curvature needs a flat or stereographic metric"));
    }
    let conn = TractorConnection::new(metric)?;
    TractorSection::constant_basis(metric.n()).iter().map(|s| conn.curvature_on(s)).collect()
}

/// Pointwise values of `Ω_ab` on `(X, K)` from the curvature jet at a point:
/// `R` in slots `(a, b, c, d)` and `∇R` in slots `(e, a, b, c, d)`.
///
/// First part: `X_d (−R_ab^d_c + R_ac^d_b − R_bc^d_a)`, which vanishes by the
/// first Bianchi identity. Second part:
/// `[∇_a,∇_b] K_cd − (∇_a R_cd^e_b − ∇_b R_cd^e_a) X_e + R_cd^e_a K_be − R_cd^e_b K_ae`.
pub fn tractor_curvature_pointwise(r: &Tensor, dr: &Tensor, x: &Tensor, k: &Tensor) -> Result<(Tensor, Tensor)> {
    let n = r.n();
    if r.arity() != 4 || dr.arity() != 5 || x.arity() != 1 || k.arity() != 2 {
        return Err(Error::InvalidArgument("pointwise curvature jet has the wrong shape".into()));
    }
    let mut first = Tensor::zeros(n, 3);
    for idx in all_indices(n, 3) {
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        let mut acc = Rational::zero();
        for d in 0..n {
            let coeff = -r.get(&[a, b, d, c]) + r.get(&[a, c, d, b]) - r.get(&[b, c, d, a]);
            acc += coeff * x.get(&[d]);
        }
        first.set(&idx, acc);
    }
    let mut second = Tensor::zeros(n, 4);
    for idx in all_indices(n, 4) {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = Rational::zero();
        for e in 0..n {
            // [∇_a,∇_b] K_cd = −R_ab^e_c K_ed − R_ab^e_d K_ce
            acc -= r.get(&[a, b, e, c]) * k.get(&[e, d]);
            acc -= r.get(&[a, b, e, d]) * k.get(&[c, e]);
            acc -= (dr.get(&[a, c, d, e, b]) - dr.get(&[b, c, d, e, a])) * x.get(&[e]);
            acc += r.get(&[c, d, e, a]) * k.get(&[b, e]);
            acc -= r.get(&[c, d, e, b]) * k.get(&[a, e]);
        }
        second.set(&idx, acc);
    }
    Ok((first, second))
}

/// Flat prolongation connection for Killing tensors of valence `ℓ`:
/// `D_a σ_k = ∂_a σ_k − (σ_{k+1})(a, …)` on component coordinates.
#[derive(Clone, Debug)]
pub struct FlatTractor {
    space: ProlongationSpace,
}

/// Section of `𝕋^ℓ`: polynomial coordinates in each component basis.
pub type FlatSection = Vec<Vec<Poly>>;

impl FlatTractor {
    pub fn new(space: ProlongationSpace) -> Self {
        FlatTractor { space }
    }

    pub fn space(&self) -> &ProlongationSpace {
        &self.space
    }

    /// `D_a σ` for `a = 0..n`.
    pub fn derivative(&self, s: &FlatSection) -> Result<Vec<FlatSection>> {
        let n = self.space.n();
        let ell = self.space.ell();
        self.check(s)?;
        let mut out = Vec::with_capacity(n);
        for a in 0..n {
            let mut da = Vec::with_capacity(ell + 1);
            for k in 0..=ell {
                let mut comp: Vec<Poly> = s[k].iter().map(|p| p.diff(a)).collect();
                if k < ell {
                    for (r, c, v) in self.space.peel(k + 1, a).triplets() {
                        comp[r] = comp[r].sub(&s[k + 1][c].scale(v));
                    }
                }
                da.push(comp);
            }
            out.push(da);
        }
        Ok(out)
    }

    pub fn is_parallel(&self, s: &FlatSection) -> Result<bool> {
        Ok(self.derivative(s)?.iter().flatten().flatten().all(|p| p.is_zero()))
    }

    /// Component `k` as a tensor field.
    pub fn component_field(&self, s: &FlatSection, k: usize) -> PolyField {
        let n = self.space.n();
        let basis = &self.space.components()[k];
        let mut f = PolyField::zeros(n, basis.arity());
        for (j, coeff) in s[k].iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (flat, v) in basis.column(j) {
                let idx = crate::tensor::unflat_index(n, basis.arity(), *flat);
                let cur = f.get(&idx).add(&coeff.scale(v));
                f.set(&idx, cur);
            }
        }
        f
    }

    /// The section `(X, ∂X, ∂²X, …)` if every derivative lands in the
    /// next component, i.e. when `X` is a Killing tensor.
    pub fn lift(&self, x: &PolyField) -> Result<FlatSection> {
        let ell = self.space.ell();
        if x.arity() != ell || x.n() != self.space.n() {
            return Err(Error::ShapeMismatch { left: (x.n(), x.arity()), right: (self.space.n(), ell) });
        }
        let mut out: FlatSection = Vec::with_capacity(ell + 1);
        let mut f = x.clone();
        for k in 0..=ell {
            out.push(field_coordinates(&self.space.components()[k], &f)?);
            f = f.derivative();
        }
        Ok(out)
    }

    fn check(&self, s: &FlatSection) -> Result<()> {
        let dims = self.space.component_dims();
        if s.len() != dims.len() || s.iter().zip(&dims).any(|(c, d)| c.len() != *d) {
            return Err(Error::InvalidArgument("section does not match the component dimensions".into()));
        }
        Ok(())
    }
}

/// Polynomial coordinates of a field valued in a realised subspace.
fn field_coordinates(basis: &crate::young::SubspaceBasis, f: &PolyField) -> Result<Vec<Poly>> {
    let n = f.n();
    // group by monomial: each coefficient tensor must lie in the subspace
    let mut by_mono: alloc::collections::BTreeMap<Vec<u32>, Vec<(usize, Rational)>> = Default::default();
    for (idx, p) in f.entries() {
        let flat = crate::tensor::flat_index(n, &idx);
        for (e, c) in p.terms() {
            by_mono.entry(e.clone()).or_default().push((flat, c.clone()));
        }
    }
    let mut out = vec![Poly::zero(n); basis.dim()];
    for (e, sparse) in by_mono {
        let y = basis.coordinates(&sparse)?;
        for (j, v) in y.into_iter().enumerate() {
            out[j].add_term(e.clone(), v);
        }
    }
    Ok(out)
}

/// Whether `X` generates a parallel section of the `ℓ = 1` connection.
pub fn prolongation_parallel(x: &PolyField, metric: &MetricField) -> Result<bool> {
    TractorConnection::new(metric)?.is_parallel(&TractorSection::from_covector(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flat::field::linear_field;
    use crate::flat::killing::killing_kernel;
    use crate::linalg::rat;

    #[test]
    fn flat_rotation_is_parallel() {
        let rot = linear_field(2, &[vec![0, 1], vec![-1, 0]]);
        assert!(prolongation_parallel(&rot, &MetricField::flat(2)).unwrap());
    }

    #[test]
    fn square_is_not_parallel() {
        let mut x = PolyField::zeros(2, 1);
        x.set(&[0], Poly::var(2, 0).pow(2));
        let s = TractorSection::from_covector(&x).unwrap();
        let d = tractor_derivative(&s, &MetricField::flat(2)).unwrap();
        assert_eq!(d.x.get(&[0, 0]), &RatFn::from_poly(Poly::var(2, 0).scale(&rat(2))));
    }

    #[test]
    fn flat_and_round_connections_are_flat() {
        for s in tractor_curvature(&MetricField::flat(3)).unwrap() {
            assert!(s.is_zero());
        }
        for s in tractor_curvature(&MetricField::stereographic(2, rat(1))).unwrap() {
            assert!(s.is_zero());
        }
    }

    #[test]
    fn flat_general_valence_lifts_killing_tensors() {
        let space = ProlongationSpace::build(2, 2).unwrap();
        let t = FlatTractor::new(space);
        let k = killing_kernel(2, 2, 2).unwrap();
        for x in &k.basis {
            let s = t.lift(x).unwrap();
            assert!(t.is_parallel(&s).unwrap());
            assert_eq!(&t.component_field(&s, 0), x);
        }
        let mut bad = PolyField::zeros(2, 2);
        bad.set(&[0, 0], Poly::var(2, 0));
        assert!(t.lift(&bad).is_err());
    }
}
