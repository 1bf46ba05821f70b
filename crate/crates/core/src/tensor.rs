//! Multi-index tensors over an n-dimensional base with exact entries.
//!
//! The base carries the flat metric δ, so upper and lower indices are not
//! distinguished. Indices are 0-based inside the crate; external formats
//! shift them to 1-based.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    n: usize,
    arity: usize,
    entries: BTreeMap<Vec<usize>, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    Symmetric,
    Antisymmetric,
}

/// A set of slots that are (anti)symmetrised together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexGroup {
    positions: Vec<usize>,
    kind: GroupKind,
}

impl IndexGroup {
    pub fn new(positions: Vec<usize>, kind: GroupKind) -> Result<Self> {
        if positions.is_empty() || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadIndexGroup);
        }
        Ok(IndexGroup { positions, kind })
    }

    pub fn symmetric(positions: Vec<usize>) -> Result<Self> {
        Self::new(positions, GroupKind::Symmetric)
    }

    pub fn antisymmetric(positions: Vec<usize>) -> Result<Self> {
        Self::new(positions, GroupKind::Antisymmetric)
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }
}

/// All permutations of `0..k` with their signs, in Heap's order.
pub fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1i8;
    out.push((perm.clone(), sign));
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Sort `idx` in place; returns the sign of the sorting permutation, or 0
/// when an index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> i8 {
    let mut sign = 1i8;
    // insertion sort counts transpositions directly
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// Lexicographic position of a multi-index in `{0..n}^k`.
pub fn flat_index(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

pub fn unflat_index(n: usize, k: usize, mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; k];
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    idx
}

/// Iterator over every multi-index of `{0..n}^k` in lexicographic order.
pub fn all_indices(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(move |f| unflat_index(n, k, f))
}

impl Tensor {
    pub fn zeros(n: usize, arity: usize) -> Self {
        Tensor { n, arity, entries: BTreeMap::new() }
    }

    pub fn scalar(v: Rational) -> Self {
        let mut t = Self::zeros(1, 0);
        t.set(&[], v);
        t
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Self::zeros(n, 2);
        for i in 0..n {
            t.set(&[i, i], Rational::one());
        }
        t
    }

    pub fn from_entries<I>(n: usize, arity: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        let mut t = Self::zeros(n, arity);
        for (idx, v) in entries {
            t.check_index(&idx)?;
            t.add_to(&idx, v);
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &Rational)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.arity {
            return Err(Error::IndexOutOfRange { index: idx.len(), bound: self.arity });
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange { index: bad, bound: self.n });
        }
        Ok(())
    }

    pub fn get(&self, idx: &[usize]) -> Rational {
        self.entries.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, idx: &[usize], v: Rational) {
        debug_assert!(self.check_index(idx).is_ok());
        if v.is_zero() {
            self.entries.remove(idx);
        } else {
            self.entries.insert(idx.to_vec(), v);
        }
    }

    pub fn add_to(&mut self, idx: &[usize], v: Rational) {
        if v.is_zero() {
            return;
        }
        match self.entries.get_mut(idx) {
            Some(slot) => {
                *slot += v;
                if slot.is_zero() {
                    self.entries.remove(idx);
                }
            }
            None => {
                self.entries.insert(idx.to_vec(), v);
            }
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (idx, v) in &other.entries {
            out.add_to(idx, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Tensor {
        if s.is_zero() {
            return Tensor::zeros(self.n, self.arity);
        }
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= s;
        }
        out
    }

    fn same_shape(&self, other: &Tensor) -> Result<()> {
        if self.n != other.n || self.arity != other.arity {
            return Err(Error::ShapeMismatch { left: (self.n, self.arity), right: (other.n, other.arity) });
        }
        Ok(())
    }

    fn check_group(&self, g: &IndexGroup) -> Result<()> {
        match g.positions.last() {
            Some(&last) if last >= self.arity => Err(Error::IndexOutOfRange { index: last, bound: self.arity }),
            _ => Ok(()),
        }
    }

    /// Average over all rearrangements of the group's slots, weighted by
    /// sign for an antisymmetric group.
    pub fn project(&self, g: &IndexGroup) -> Result<Tensor> {
        self.check_group(g)?;
        let k = g.positions.len();
        let perms = permutations_with_sign(k);
        let weight = Rational::from_integer(factorial(k).into());
        let mut out = Tensor::zeros(self.n, self.arity);
        for (idx, v) in &self.entries {
            let v = v / &weight;
            for (perm, sign) in &perms {
                let mut target = idx.clone();
                for (slot, &src) in perm.iter().enumerate() {
                    target[g.positions[slot]] = idx[g.positions[src]];
                }
                let contribution = match (g.kind, *sign) {
                    (GroupKind::Antisymmetric, -1) => -v.clone(),
                    _ => v.clone(),
                };
                out.add_to(&target, contribution);
            }
        }
        Ok(out)
    }

    /// Round-bracket symmetrisation over the group.
    pub fn symmetrize(&self, g: &IndexGroup) -> Result<Tensor> {
        let g = IndexGroup { positions: g.positions.clone(), kind: GroupKind::Symmetric };
        self.project(&g)
    }

    /// Square-bracket skewing over the group.
    pub fn antisymmetrize(&self, g: &IndexGroup) -> Result<Tensor> {
        let g = IndexGroup { positions: g.positions.clone(), kind: GroupKind::Antisymmetric };
        self.project(&g)
    }

    /// Trace over slots `i` and `j`; the remaining slots keep their order.
    pub fn contract(&self, i: usize, j: usize) -> Result<Tensor> {
        if i == j {
            return Err(Error::SamePosition(i));
        }
        let bad = i.max(j);
        if bad >= self.arity {
            return Err(Error::IndexOutOfRange { index: bad, bound: self.arity });
        }
        let mut out = Tensor::zeros(self.n, self.arity - 2);
        for (idx, v) in &self.entries {
            if idx[i] == idx[j] {
                let rest: Vec<usize> =
                    idx.iter().enumerate().filter(|(s, _)| *s != i && *s != j).map(|(_, &x)| x).collect();
                out.add_to(&rest, v.clone());
            }
        }
        Ok(out)
    }

    /// Apply a slot permutation: result slot `s` takes source slot `perm[s]`.
    pub fn permute_slots(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.arity);
        let mut out = Tensor::zeros(self.n, self.arity);
        for (idx, v) in &self.entries {
            let target: Vec<usize> = perm.iter().map(|&src| idx[src]).collect();
            out.set(&target, v.clone());
        }
        out
    }

    /// Coordinates in the lexicographic basis of the full `n^k` space.
    pub fn flatten(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n.pow(self.arity as u32)];
        for (idx, v) in &self.entries {
            out[flat_index(self.n, idx)] = v.clone();
        }
        out
    }

    pub fn unflatten(n: usize, arity: usize, v: &[Rational]) -> Result<Tensor> {
        let expected = n.pow(arity as u32);
        if v.len() != expected {
            return Err(Error::IndexOutOfRange { index: v.len(), bound: expected });
        }
        let mut t = Tensor::zeros(n, arity);
        for (f, x) in v.iter().enumerate() {
            if !x.is_zero() {
                t.entries.insert(unflat_index(n, arity, f), x.clone());
            }
        }
        Ok(t)
    }

    /// Sparse `(flat index, value)` pairs, sorted.
    pub fn flatten_sparse(&self) -> Vec<(usize, Rational)> {
        let mut out: Vec<(usize, Rational)> =
            self.entries.iter().map(|(idx, v)| (flat_index(self.n, idx), v.clone())).collect();
        out.sort_by_key(|(f, _)| *f);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn t2(n: usize, entries: &[([usize; 2], i64)]) -> Tensor {
        Tensor::from_entries(n, 2, entries.iter().map(|(i, v)| (i.to_vec(), rat(*v)))).unwrap()
    }

    #[test]
    fn symmetrize_examples() {
        let g = IndexGroup::symmetric(vec![0, 1]).unwrap();
        let t = t2(2, &[([0, 1], 1)]);
        let s = t.symmetrize(&g).unwrap();
        assert_eq!(s.get(&[0, 1]), ratio(1, 2));
        assert_eq!(s.get(&[1, 0]), ratio(1, 2));
        assert_eq!(s.symmetrize(&g).unwrap(), s);
        let skew = t2(2, &[([0, 1], 1), ([1, 0], -1)]);
        assert!(skew.symmetrize(&g).unwrap().is_zero());
    }

    #[test]
    fn antisymmetrize_matches_displayed_sixfold_formula() {
        let mut psi = Tensor::zeros(3, 4);
        psi.set(&[0, 1, 2, 0], rat(6));
        let g = IndexGroup::antisymmetric(vec![0, 1, 2]).unwrap();
        let out = psi.antisymmetrize(&g).unwrap();
        assert_eq!(out.nnz(), 6);
        for (perm, sign) in permutations_with_sign(3) {
            let idx = [perm[0], perm[1], perm[2], 0];
            assert_eq!(out.get(&idx), rat(sign as i64));
        }
        assert_eq!(out.antisymmetrize(&g).unwrap(), out);
    }

    #[test]
    fn skew_of_partially_symmetric_vanishes() {
        let mut t = Tensor::zeros(3, 3);
        t.set(&[0, 1, 2], rat(1));
        t.set(&[1, 0, 2], rat(1));
        let g = IndexGroup::antisymmetric(vec![0, 1, 2]).unwrap();
        assert!(t.antisymmetrize(&g).unwrap().is_zero());
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(Tensor::identity(3).contract(0, 1).unwrap().get(&[]), rat(3));
        let skew = t2(3, &[([0, 1], 1), ([1, 0], -1)]);
        assert!(skew.contract(0, 1).unwrap().is_zero());
        let t = t2(2, &[([0, 0], 1), ([0, 1], 2), ([1, 0], 2), ([1, 1], 4)]);
        assert_eq!(t.contract(0, 1).unwrap().get(&[]), rat(5));
        assert_eq!(t.contract(1, 1), Err(Error::SamePosition(1)));
    }

    #[test]
    fn flatten_conventions() {
        assert_eq!(Tensor::scalar(rat(7)).flatten(), vec![rat(7)]);
        let t = t2(2, &[([0, 0], 1), ([0, 1], 2), ([1, 0], 3), ([1, 1], 4)]);
        assert_eq!(t.flatten(), vec![rat(1), rat(2), rat(3), rat(4)]);
        let v = Tensor::from_entries(3, 1, [(vec![1], rat(5))]).unwrap();
        assert_eq!(v.flatten(), vec![rat(0), rat(5), rat(0)]);
        assert_eq!(Tensor::unflatten(2, 2, &t.flatten()).unwrap(), t);
    }

    #[test]
    fn out_of_range_group() {
        let g = IndexGroup::symmetric(vec![0, 2]).unwrap();
        assert!(Tensor::identity(2).symmetrize(&g).is_err());
        assert_eq!(IndexGroup::symmetric(vec![1, 0]), Err(Error::BadIndexGroup));
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations_with_sign(3);
        assert_eq!(perms.len(), 6);
        for (p, s) in perms {
            let mut q = p.clone();
            assert_eq!(sort_with_sign(&mut q), s);
        }
    }
}
