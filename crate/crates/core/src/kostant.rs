//! Lie algebra cohomology of the abelian nilradical `𝔤_{-1} ⊂ sl(n+1)`.
//!
//! `𝔤 = sl(m)`, `m = n + 1`, graded by the first row/column: `𝔤_{-1}` is
//! the lower-left column (elementary matrices `E_{r0}`, `r = 1..n`),
//! `𝔤_1` the upper-right row, `𝔤_0` the block diagonal. `𝕍` is the
//! two-row `(ℓ, ℓ)` irreducible realised on covariant `2ℓ`-tensors over
//! `ℝ^m`, on which a matrix `x` acts by `-xᵀ` in every slot.
//!
//! The Koszul differential on `Λ^p(𝔤_{-1})^*⊗𝕍` is
//! `∂(e^I⊗v) = Σ_i e^i∧e^I ⊗ E_i·v`; it squares to zero because `𝔤_{-1}`
//! is abelian.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{rank, ChainComplex, ExactMatrix, Rational};
use crate::prolong::{binomial, check_cap, wedge_basis, CohomologyEntry, CohomologyReport};
use crate::tensor::{unflat_index, Tensor};
use crate::young::{
    gl_dimension, realize_class, weyl_dimension, Convention, DynkinLabel, SubspaceBasis, SymmetryClass, YoungDiagram,
};

/// Grade of the `(i, j)` matrix entry of `sl(m)` under the `|1|`-grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    Minus,
    Zero,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSl {
    m: usize,
}

impl GradedSl {
    pub fn new(m: usize) -> Self {
        GradedSl { m }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grade(&self, i: usize, j: usize) -> Grade {
        match (i, j) {
            (i, 0) if i > 0 => Grade::Minus,
            (0, j) if j > 0 => Grade::Plus,
            _ => Grade::Zero,
        }
    }

    /// Basis of `𝔤_{-1}`, ordered by row: `E_{10}, …, E_{n0}`.
    pub fn minus_basis(&self) -> Vec<GlMatrix> {
        (1..self.m).map(|r| GlMatrix::elementary(self.m, r, 0)).collect()
    }
}

/// Dense square matrix acting on `ℝ^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlMatrix {
    m: usize,
    entries: Vec<Rational>,
}

impl GlMatrix {
    pub fn zeros(m: usize) -> Self {
        GlMatrix { m, entries: vec![Rational::zero(); m * m] }
    }

    pub fn elementary(m: usize, i: usize, j: usize) -> Self {
        let mut x = Self::zeros(m);
        x.set(i, j, Rational::from_integer(1.into()));
        x
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let m = rows.len();
        let entries: Vec<Rational> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), m * m);
        GlMatrix { m, entries }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.m + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    pub fn mul(&self, rhs: &GlMatrix) -> GlMatrix {
        let m = self.m;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for k in 0..m {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * m + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &GlMatrix) -> GlMatrix {
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        GlMatrix { m: self.m, entries }
    }

    pub fn bracket(&self, rhs: &GlMatrix) -> GlMatrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn trace(&self) -> Rational {
        (0..self.m).map(|i| self.get(i, i).clone()).sum()
    }
}

/// Action of `x` on a covariant tensor: `(x·T)_{i…} = -Σ_s Σ_j x_{j i_s} T_{…j…}`.
pub fn tensor_action(x: &GlMatrix, t: &Tensor) -> Tensor {
    let m = x.dim();
    let mut out = Tensor::zeros(m, t.arity());
    for (idx, v) in t.entries() {
        for s in 0..idx.len() {
            // T_{…j…} with j at slot s feeds output index with i_s where x_{j i_s} ≠ 0
            let j = idx[s];
            for i in 0..m {
                let c = x.get(j, i);
                if c.is_zero() {
                    continue;
                }
                let mut target = idx.to_vec();
                target[s] = i;
                out.add_to(&target, -(c * v));
            }
        }
    }
    out
}

/// `𝕍 = (ℓ, ℓ)` over `ℝ^{n+1}`.
#[derive(Clone, Debug)]
pub struct RepRealization {
    n: usize,
    ell: usize,
    basis: SubspaceBasis,
}

impl RepRealization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.n + 1
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Matrix of `x` on `𝕍` in basis coordinates; fails if `x` does not
    /// preserve the realised subspace.
    pub fn action_matrix(&self, x: &GlMatrix) -> Result<ExactMatrix> {
        let d = self.dim();
        let mut out = ExactMatrix::zeros(d, d);
        for j in 0..d {
            let image = tensor_action(x, &self.basis.tensor(j));
            let y = self.basis.tensor_coordinates(&image)?;
            for (r, v) in y.into_iter().enumerate() {
                out.set(r, j, v);
            }
        }
        Ok(out)
    }

    /// Dimensions of the pieces of `𝕍` with exactly `j` slots equal to the
    /// distinguished basis vector `e_0`, for `j = 0..=ℓ`. These are the
    /// eigenspaces of the grading element, so each is `𝕍 ∩ span` of the
    /// corresponding coordinates.
    pub fn graded_dims(&self) -> Vec<usize> {
        let m = self.m();
        let arity = self.basis.arity();
        let mut out = Vec::new();
        for zeros in 0..=arity {
            let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
            let mut trip = Vec::new();
            for (j, col) in self.basis.columns().iter().enumerate() {
                for (f, v) in col {
                    let idx = unflat_index(m, arity, *f);
                    if idx.iter().filter(|&&i| i == 0).count() == zeros {
                        let next = rows.len();
                        let r = *rows.entry(*f).or_insert(next);
                        trip.push((r, j, v.clone()));
                    }
                }
            }
            let proj = ExactMatrix::from_triplets(rows.len(), self.dim(), trip).expect("in range");
            out.push(rank(&proj));
        }
        while out.last() == Some(&0) && out.len() > self.ell + 1 {
            out.pop();
        }
        out
    }
}

pub fn build_v(n: usize, ell: usize) -> Result<RepRealization> {
    build_v_with(n, ell, |class, m| Ok(realize_class(class, m)))
}

pub fn build_v_with<F>(n: usize, ell: usize, mut realize: F) -> Result<RepRealization>
where
    F: FnMut(&SymmetryClass, usize) -> Result<SubspaceBasis>,
{
    if n < 2 || ell < 1 {
        return Err(Error::InvalidArgument(alloc::format!("need n ≥ 2 and ℓ ≥ 1, got n={n}, ℓ={ell}")));
    }
    let shape = YoungDiagram::new(vec![ell, ell])?;
    let basis = realize(&SymmetryClass::young(&shape, Convention::Rows), n + 1)?;
    Ok(RepRealization { n, ell, basis })
}

/// `x·v` for `v` in the realised subspace.
pub fn g_action(rep: &RepRealization, x: &GlMatrix, v: &Tensor) -> Result<Tensor> {
    rep.basis.tensor_coordinates(v)?;
    let out = tensor_action(x, v);
    rep.basis.tensor_coordinates(&out)?;
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub n: usize,
    pub ell: usize,
    pub complex: ChainComplex,
}

/// Sign of `e^i ∧ e^I` relative to `e^{I∪{i}}`.
fn wedge_left_sign(set: &[usize], i: usize) -> Option<i64> {
    if set.contains(&i) {
        return None;
    }
    let before = set.iter().filter(|&&x| x < i).count();
    Some(if before % 2 == 0 { 1 } else { -1 })
}

pub fn koszul_complex(n: usize, ell: usize, cap: usize) -> Result<KoszulComplex> {
    check_cap(&crate::prolong::cochain_dims_predicted(n, ell), cap)?;
    let rep = build_v(n, ell)?;
    koszul_complex_of(&rep, cap)
}

pub fn koszul_complex_of(rep: &RepRealization, cap: usize) -> Result<KoszulComplex> {
    let n = rep.n();
    let d = rep.dim();
    let dims: Vec<usize> = (0..=n).map(|p| binomial(n, p) * d).collect();
    check_cap(&dims, cap)?;
    let g = GradedSl::new(n + 1);
    let actions: Vec<ExactMatrix> = g.minus_basis().iter().map(|x| rep.action_matrix(x)).collect::<Result<_>>()?;
    let mut maps = Vec::with_capacity(n);
    for p in 0..n {
        let src = wedge_basis(n, p);
        let dst = wedge_basis(n, p + 1);
        let lookup: BTreeMap<&[usize], usize> = dst.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut m = ExactMatrix::zeros(dims[p + 1], dims[p]);
        for (ii, set) in src.iter().enumerate() {
            for (i, act) in actions.iter().enumerate() {
                let Some(sign) = wedge_left_sign(set, i) else { continue };
                let mut target = set.clone();
                let pos = target.partition_point(|&x| x < i);
                target.insert(pos, i);
                let jj = lookup[target.as_slice()];
                let sign = Rational::from_integer(sign.into());
                for (r, c, v) in act.triplets() {
                    m.add_to(jj * d + r, ii * d + c, &sign * v);
                }
            }
        }
        maps.push(m);
    }
    Ok(KoszulComplex { n, ell: rep.ell(), complex: ChainComplex::new(dims, maps)? })
}

/// Full `sl(n+1)` label of `H^p(𝔤_{-1}, 𝕍)`, crossed node first.
///
/// The uncrossed part is the `sl(n)` label of the predicted diagram
/// `(ℓ+1, ℓ+1, 1^{p-2})`; the crossed entry is `0`, `-2`, then `-ℓ-p-1`.
pub fn kostant_label(n: usize, ell: usize, p: usize) -> DynkinLabel {
    let (diagram, _) = crate::prolong::predicted_cohomology(n, ell, p);
    let crossed = match p {
        0 => 0,
        1 => -2,
        _ => -(ell as i64) - (p as i64) - 1,
    };
    let mut labels = vec![crossed];
    labels.extend(DynkinLabel::from_diagram(&diagram, n).0);
    DynkinLabel(labels)
}

/// Drop the crossed node, leaving an `sl(n)` label.
pub fn drop_crossed(lbl: &DynkinLabel) -> DynkinLabel {
    DynkinLabel(lbl.0[1..].to_vec())
}

/// Label of `𝕍` itself: `(0, ℓ, 0, …, 0)` on `sl(n+1)`.
pub fn v_label(n: usize, ell: usize) -> DynkinLabel {
    let mut l = vec![0i64; n];
    l[1] = ell as i64;
    DynkinLabel(l)
}

pub fn lie_algebra_cohomology(n: usize, ell: usize, cap: usize) -> Result<CohomologyReport> {
    check_cap(&crate::prolong::cochain_dims_predicted(n, ell), cap)?;
    lie_algebra_cohomology_of(&build_v(n, ell)?, cap)
}

pub fn lie_algebra_cohomology_of(rep: &RepRealization, cap: usize) -> Result<CohomologyReport> {
    let (n, ell) = (rep.n(), rep.ell());
    let k = koszul_complex_of(rep, cap)?;
    let computed = k.complex.cohomology_dims();
    let mut entries = Vec::with_capacity(n + 1);
    for (p, &c) in computed.iter().enumerate() {
        let label = kostant_label(n, ell, p);
        let predicted = weyl_dimension(&drop_crossed(&label))?;
        let (diagram, _) = crate::prolong::predicted_cohomology(n, ell, p);
        entries.push(CohomologyEntry {
            p,
            computed: c,
            diagram: diagram.rows().to_vec(),
            predicted,
            dynkin_labels: Some(label.0),
        });
    }
    Ok(CohomologyReport { n, ell, space_dims: k.complex.dims().to_vec(), entries })
}

/// `dim 𝕍` by hook-content, for cross-checks.
pub fn v_dimension(n: usize, ell: usize) -> u64 {
    gl_dimension(&YoungDiagram::new(vec![ell, ell]).expect("ok"), n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolong::DEFAULT_DIMENSION_CAP;

    #[test]
    fn v_dimensions() {
        assert_eq!(build_v(2, 1).unwrap().dim(), 3);
        assert_eq!(build_v(3, 1).unwrap().dim(), 6);
        assert_eq!(build_v(2, 2).unwrap().dim(), 6);
    }

    #[test]
    fn koszul_space_dims() {
        let k = koszul_complex(2, 1, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(k.complex.dims(), &[3, 6, 3]);
        let k = koszul_complex(3, 1, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(k.complex.dims(), &[6, 18, 18, 6]);
    }

    #[test]
    fn cohomology_small() {
        let r = lie_algebra_cohomology(2, 1, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(r.computed(), vec![2, 3, 1]);
        assert!(r.all_match());
        let r = lie_algebra_cohomology(3, 1, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(r.computed(), vec![3, 6, 6, 3]);
    }

    #[test]
    fn labels_follow_the_table() {
        assert_eq!(kostant_label(4, 2, 0).0, vec![0, 2, 0, 0]);
        assert_eq!(kostant_label(4, 2, 1).0, vec![-2, 3, 0, 0]);
        assert_eq!(kostant_label(4, 2, 2).0, vec![-5, 0, 3, 0]);
        assert_eq!(kostant_label(4, 2, 3).0, vec![-6, 0, 2, 1]);
        assert_eq!(kostant_label(4, 2, 4).0, vec![-7, 0, 2, 0]);
    }

    #[test]
    fn zero_acts_as_zero() {
        let rep = build_v(2, 1).unwrap();
        let v = rep.basis().tensor(0);
        assert!(g_action(&rep, &GlMatrix::zeros(3), &v).unwrap().is_zero());
    }

    #[test]
    fn branching_matches_prolongation_components() {
        let rep = build_v(3, 2).unwrap();
        let mut graded = rep.graded_dims();
        graded.reverse();
        let t = crate::prolong::build_t(3, 2).unwrap();
        assert_eq!(graded, t.component_dims());
    }
}
