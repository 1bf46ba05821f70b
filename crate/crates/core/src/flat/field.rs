use alloc::vec::Vec;

use super::poly::Poly;
use super::ratfn::{RatFn, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::tensor::{all_indices, factorial, flat_index, permutations_with_sign, unflat_index, Tensor};

/// Dense tensor field on `ℝ^n`: `n^k` scalar entries, indices 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField<S> {
    n: usize,
    arity: usize,
    entries: Vec<S>,
}

pub type PolyField = TensorField<Poly>;
pub type RatField = TensorField<RatFn>;

impl<S: Scalar> TensorField<S> {
    pub fn zeros(n: usize, arity: usize) -> Self {
        Self::from_fn(n, arity, |_| S::zero_in(n))
    }

    pub fn from_fn<F: FnMut(&[usize]) -> S>(n: usize, arity: usize, mut f: F) -> Self {
        let entries = all_indices(n, arity).map(|idx| f(&idx)).collect();
        TensorField { n, arity, entries }
    }

    /// Constant-coefficient field with the values of `t`.
    pub fn constant(t: &Tensor) -> Self {
        let n = t.n();
        Self::from_fn(n, t.arity(), |idx| S::constant_in(n, t.get(idx)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.entries[flat_index(self.n, idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: S) {
        let f = flat_index(self.n, idx);
        self.entries[f] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &S)> + '_ {
        self.entries.iter().enumerate().map(|(f, v)| (unflat_index(self.n, self.arity, f), v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    pub fn map<T, F: FnMut(&S) -> T>(&self, f: F) -> TensorField<T> {
        TensorField { n: self.n, arity: self.arity, entries: self.entries.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip(other, |a, b| a.add(b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip(other, |a, b| a.sub(b)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.map(|v| v.scale(s))
    }

    pub fn mul_scalar(&self, s: &S) -> Self {
        self.map(|v| v.mul(s))
    }

    /// Coordinate derivative; the new index is slot 0: `(a, I) ↦ ∂_a f_I`.
    pub fn derivative(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, self.arity + 1, |idx| self.get(&idx[1..]).diff(idx[0]))
    }

    /// Result slot `s` takes source slot `perm[s]`.
    pub fn permute_slots(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.arity);
        Self::from_fn(self.n, self.arity, |idx| {
            let mut src = alloc::vec![0; self.arity];
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.get(&src).clone()
        })
    }

    /// Average over all permutations of the given slots, optionally signed.
    pub fn project(&self, slots: &[usize], antisymmetric: bool) -> Self {
        let k = slots.len();
        let inv = Rational::new(1.into(), factorial(k).into());
        let perms = permutations_with_sign(k);
        Self::from_fn(self.n, self.arity, |idx| {
            let mut acc = S::zero_in(self.n);
            for (perm, sign) in &perms {
                let mut src = idx.to_vec();
                for (i, &p) in perm.iter().enumerate() {
                    src[slots[i]] = idx[slots[p]];
                }
                let v = self.get(&src);
                acc = if antisymmetric && *sign < 0 { acc.sub(v) } else { acc.add(v) };
            }
            acc.scale(&inv)
        })
    }

    pub fn symmetrize_all(&self) -> Self {
        let slots: Vec<usize> = (0..self.arity).collect();
        self.project(&slots, false)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.arity.saturating_sub(1)).all(|s| {
            let mut perm: Vec<usize> = (0..self.arity).collect();
            perm.swap(s, s + 1);
            self.permute_slots(&perm) == *self
        })
    }

    /// Sum over a pair of slots, removing both.
    pub fn contract(&self, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::SamePosition(i));
        }
        let bound = self.arity;
        if i >= bound || j >= bound {
            return Err(Error::IndexOutOfRange { index: i.max(j), bound });
        }
        Ok(Self::from_fn(self.n, self.arity - 2, |idx| {
            let mut acc = S::zero_in(self.n);
            for c in 0..self.n {
                let mut full = Vec::with_capacity(self.arity);
                let mut rest = idx.iter();
                for s in 0..self.arity {
                    if s == i || s == j {
                        full.push(c);
                    } else {
                        full.push(*rest.next().expect("arity"));
                    }
                }
                acc = acc.add(self.get(&full));
            }
            acc
        }))
    }

    /// Outer product, slots of `self` first.
    pub fn outer(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::BaseDimension(self.n, other.n));
        }
        let k = self.arity;
        Ok(Self::from_fn(self.n, k + other.arity, |idx| self.get(&idx[..k]).mul(other.get(&idx[k..]))))
    }

    fn zip<F: Fn(&S, &S) -> S>(&self, other: &Self, f: F) -> Self {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        TensorField { n: self.n, arity: self.arity, entries }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::BaseDimension(self.n, other.n));
        }
        if self.arity != other.arity {
            return Err(Error::ShapeMismatch { left: (self.n, self.arity), right: (other.n, other.arity) });
        }
        Ok(())
    }
}

impl PolyField {
    pub fn to_rational(&self) -> RatField {
        self.map(|p| RatFn::from_poly(p.clone()))
    }

    /// Maximum total degree over all entries; `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(|p| p.degree()).max()
    }

    pub fn eval(&self, point: &[Rational]) -> Tensor {
        let mut t = Tensor::zeros(self.n, self.arity);
        for (idx, p) in self.entries() {
            t.set(&idx, p.eval(point));
        }
        t
    }
}

impl RatField {
    /// The field as polynomials, if every entry has trivial denominator.
    pub fn to_poly(&self) -> Option<PolyField> {
        let entries = self.entries.iter().map(|r| r.as_poly().cloned()).collect::<Option<Vec<_>>>()?;
        Some(TensorField { n: self.n, arity: self.arity, entries })
    }

    pub fn eval(&self, point: &[Rational]) -> Option<Tensor> {
        let mut t = Tensor::zeros(self.n, self.arity);
        for (idx, r) in self.entries() {
            t.set(&idx, r.eval(point)?);
        }
        Some(t)
    }
}

/// Kronecker delta as a constant field.
pub fn delta<S: Scalar>(n: usize) -> TensorField<S> {
    TensorField::from_fn(n, 2, |idx| if idx[0] == idx[1] { S::one_in(n) } else { S::zero_in(n) })
}

/// Covector field with linear entries `X_a = Σ_j c_{aj} x_j`.
pub fn linear_field(n: usize, coeffs: &[Vec<i64>]) -> PolyField {
    TensorField::from_fn(n, 1, |idx| {
        coeffs[idx[0]]
            .iter()
            .enumerate()
            .fold(Poly::zero(n), |acc, (j, &c)| acc.add(&Poly::var(n, j).scale(&Rational::from_integer(c.into()))))
    })
}
