//! The algebraic prolongation complex `(Λ^•⊗𝕋^ℓ, ∂)`.
//!
//! `𝕋^ℓ = 𝕋^ℓ_0 ⊕ … ⊕ 𝕋^ℓ_ℓ` where `𝕋^ℓ_k` holds tensors
//! `K_{p_1…p_k b_1…b_ℓ}` symmetric in the `p`s and in the `b`s with the
//! extra symmetrisation `K_{p…r(s b…e)}` vanishing. The map
//! `∂: 𝕋^ℓ → Λ^1⊗𝕋^ℓ` sends component `k` to component `k-1` by peeling
//! off the first `p` index as the form index, and `∂(ω⊗X) = ω∧∂X`.
//!
//! Bases: `Λ^p` uses strictly increasing index tuples in lexicographic
//! order; `e^I ∧ e^a` picks up `(-1)^{#{i∈I : i>a}}`. The cochain basis of
//! `Λ^p⊗𝕋^ℓ` is ordered by component `k`, then `I`, then the component's
//! own basis vector. With these conventions every entry of `∂` is an entry
//! of some basis tensor of `𝕋^ℓ_k`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{cohomology_from_ranks, rank, ChainComplex, ExactMatrix, Rational};
use crate::tensor::flat_index;
use crate::young::{gl_dimension, realize_class, SubspaceBasis, SymmetryClass, YoungDiagram};

/// Default bound on any single cochain space.
pub const DEFAULT_DIMENSION_CAP: usize = 20_000;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Strictly increasing `p`-subsets of `0..n`, lexicographic.
pub fn wedge_basis(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(n: usize, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, p, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, p, 0, &mut cur, &mut out);
    out
}

/// Sign of `e^I ∧ e^a` relative to `e^{I∪{a}}`, or `None` when `a ∈ I`.
pub fn wedge_right_sign(set: &[usize], a: usize) -> Option<i64> {
    if set.contains(&a) {
        return None;
    }
    let after = set.iter().filter(|&&i| i > a).count();
    Some(if after % 2 == 0 { 1 } else { -1 })
}

fn insert_sorted(set: &[usize], a: usize) -> Vec<usize> {
    let mut out = set.to_vec();
    let pos = out.partition_point(|&i| i < a);
    out.insert(pos, a);
    out
}

/// `𝕋^ℓ` over `ℝ^n` with its components realised explicitly.
#[derive(Clone, Debug)]
pub struct ProlongationSpace {
    n: usize,
    ell: usize,
    components: Vec<SubspaceBasis>,
    /// `peel[k][a]`: matrix of `t ↦ t(a, …)` from `𝕋_k` to `𝕋_{k-1}` (empty for k = 0).
    peel: Vec<Vec<ExactMatrix>>,
}

impl ProlongationSpace {
    pub fn build(n: usize, ell: usize) -> Result<Self> {
        Self::build_with(n, ell, |class, n| Ok(realize_class(class, n)))
    }

    /// Same as [`build`](Self::build) but with a caller-supplied realiser,
    /// e.g. one backed by a cache.
    pub fn build_with<F>(n: usize, ell: usize, mut realize: F) -> Result<Self>
    where
        F: FnMut(&SymmetryClass, usize) -> Result<SubspaceBasis>,
    {
        if n < 2 || ell < 1 {
            return Err(Error::InvalidArgument(alloc::format!("need n ≥ 2 and ℓ ≥ 1, got n={n}, ℓ={ell}")));
        }
        let mut components = Vec::with_capacity(ell + 1);
        for k in 0..=ell {
            let class = SymmetryClass::prolongation_component(ell, k);
            let b = realize(&class, n)?;
            if b.n() != n || b.arity() != k + ell {
                return Err(Error::InvalidArgument(alloc::format!("realiser returned wrong shape for component {k}")));
            }
            components.push(b);
        }
        let mut peel = vec![Vec::new()];
        for k in 1..=ell {
            let src = &components[k];
            let dst = &components[k - 1];
            let lower_arity = k - 1 + ell;
            let block = n.pow(lower_arity as u32);
            let mut maps = Vec::with_capacity(n);
            for a in 0..n {
                let mut m = ExactMatrix::zeros(dst.dim(), src.dim());
                for (j, col) in src.columns().iter().enumerate() {
                    // entries of t with first slot a, as flat indices of the lower arity
                    let lo = a * block;
                    let hi = lo + block;
                    let slice: BTreeMap<usize, &Rational> =
                        col.iter().filter(|(f, _)| *f >= lo && *f < hi).map(|(f, v)| (f - lo, v)).collect();
                    for (r, &row) in dst.coord_rows().iter().enumerate() {
                        if let Some(v) = slice.get(&row) {
                            m.set(r, j, (*v).clone());
                        }
                    }
                }
                maps.push(m);
            }
            peel.push(maps);
        }
        Ok(ProlongationSpace { n, ell, components, peel })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn components(&self) -> &[SubspaceBasis] {
        &self.components
    }

    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.component_dims().iter().sum()
    }

    /// `t ↦ t(a, …)` as a matrix `𝕋_k → 𝕋_{k-1}` in component coordinates.
    pub fn peel(&self, k: usize, a: usize) -> &ExactMatrix {
        &self.peel[k][a]
    }

    /// Dimension of `Λ^p ⊗ 𝕋^ℓ`.
    pub fn cochain_dim(&self, p: usize) -> usize {
        binomial(self.n, p) * self.dim()
    }

    /// Offset of block `(k, I-index)` inside `Λ^p⊗𝕋^ℓ`.
    pub fn block_offset(&self, p: usize, k: usize, i: usize) -> usize {
        let forms = binomial(self.n, p);
        let before: usize = self.components[..k].iter().map(|c| c.dim()).sum();
        forms * before + i * self.components[k].dim()
    }

    /// Range of the `Λ^p⊗𝕋^ℓ_k` block in the cochain basis.
    pub fn component_range(&self, p: usize, k: usize) -> core::ops::Range<usize> {
        let start = self.block_offset(p, k, 0);
        start..start + binomial(self.n, p) * self.components[k].dim()
    }

    /// Matrix of `∂: Λ^p⊗𝕋^ℓ → Λ^{p+1}⊗𝕋^ℓ`.
    pub fn partial(&self, p: usize) -> ExactMatrix {
        let n = self.n;
        let src_forms = wedge_basis(n, p);
        let dst_forms = wedge_basis(n, p + 1);
        let dst_lookup: BTreeMap<&[usize], usize> =
            dst_forms.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        let mut m = ExactMatrix::zeros(self.cochain_dim(p + 1), self.cochain_dim(p));
        if p >= n {
            return m;
        }
        for k in 1..=self.ell {
            let dk = self.components[k].dim();
            for (ii, set) in src_forms.iter().enumerate() {
                let col0 = self.block_offset(p, k, ii);
                for a in 0..n {
                    let Some(sign) = wedge_right_sign(set, a) else { continue };
                    let target = insert_sorted(set, a);
                    let jj = dst_lookup[target.as_slice()];
                    let row0 = self.block_offset(p + 1, k - 1, jj);
                    let sign = Rational::from_integer(sign.into());
                    for (r, c, v) in self.peel[k][a].triplets() {
                        debug_assert!(c < dk);
                        m.add_to(row0 + r, col0 + c, &sign * v);
                    }
                }
            }
        }
        m
    }

    pub fn complex(&self) -> Result<ChainComplex> {
        let dims = (0..=self.n).map(|p| self.cochain_dim(p)).collect();
        let maps = (0..self.n).map(|p| self.partial(p)).collect();
        ChainComplex::new(dims, maps)
    }
}

pub fn build_t(n: usize, ell: usize) -> Result<ProlongationSpace> {
    ProlongationSpace::build(n, ell)
}

pub fn build_partial(n: usize, ell: usize, p: usize) -> Result<ExactMatrix> {
    Ok(ProlongationSpace::build(n, ell)?.partial(p))
}

/// Outcome of the `Λ^1⊗Λ^2 → Λ^2⊗Λ^1`, `K_{abc} ↦ K_{[ab]c}` check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyCheck {
    pub n: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl KeyCheck {
    pub fn bijective(&self) -> bool {
        self.source_dim == self.target_dim && self.rank == self.source_dim
    }
}

/// Matrix of `K_{a[bc]} ↦ K_{[ab]c}`. Source coordinates `(a, b<c)` hold
/// `K_{abc}`; target coordinates `(a<b, c)` hold the skewed entry.
pub fn key_map(n: usize) -> ExactMatrix {
    let pairs = wedge_basis(n, 2);
    let src = |a: usize, bc: usize| a * pairs.len() + bc;
    let dst = |ab: usize, c: usize| ab * n + c;
    let pair_index = |i: usize, j: usize| -> Option<(usize, i64)> {
        if i == j {
            return None;
        }
        let (lo, hi, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        pairs.iter().position(|p| p[0] == lo && p[1] == hi).map(|ix| (ix, s))
    };
    let half = Rational::new(1.into(), 2.into());
    let mut m = ExactMatrix::zeros(pairs.len() * n, n * pairs.len());
    for (ab, pair) in pairs.iter().enumerate() {
        let (a, b) = (pair[0], pair[1]);
        for c in 0..n {
            // K_{[ab]c} = ½(K_{abc} − K_{bac}) with K_{xyz} read through K_{x[yz]}
            for (x, y, s0) in [(a, b, 1i64), (b, a, -1)] {
                if let Some((yz, s1)) = pair_index(y, c) {
                    m.add_to(dst(ab, c), src(x, yz), &half * Rational::from_integer((s0 * s1).into()));
                }
            }
        }
    }
    m
}

pub fn key_isomorphism_check(n: usize) -> KeyCheck {
    let m = key_map(n);
    KeyCheck { n, source_dim: m.cols(), target_dim: m.rows(), rank: rank(&m) }
}

/// Predicted `H^p` as a diagram over `ℝ^n`: a row of ℓ, a row of ℓ+1, then
/// two rows of ℓ+1 with the first column extended to length `p`.
pub fn predicted_diagram(ell: usize, p: usize) -> YoungDiagram {
    match p {
        0 => YoungDiagram::row(ell),
        1 => YoungDiagram::row(ell + 1),
        _ => {
            let mut rows = vec![ell + 1, ell + 1];
            rows.extend(core::iter::repeat_n(1, p - 2));
            YoungDiagram::new(rows).expect("well-formed")
        }
    }
}

pub fn predicted_cohomology(n: usize, ell: usize, p: usize) -> (YoungDiagram, u64) {
    let d = predicted_diagram(ell, p);
    let dim = gl_dimension(&d, n);
    (d, dim)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyEntry {
    pub p: usize,
    pub computed: usize,
    pub diagram: Vec<usize>,
    pub predicted: u64,
    /// Full `sl(n+1)` labels with the crossed node first, when known.
    pub dynkin_labels: Option<Vec<i64>>,
}

impl CohomologyEntry {
    pub fn matches(&self) -> bool {
        self.computed as u64 == self.predicted
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub n: usize,
    pub ell: usize,
    pub space_dims: Vec<usize>,
    pub entries: Vec<CohomologyEntry>,
}

impl CohomologyReport {
    pub fn computed(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.computed).collect()
    }

    pub fn predicted(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.predicted).collect()
    }

    pub fn all_match(&self) -> bool {
        self.entries.iter().all(|e| e.matches())
    }
}

/// Guard on the total dimension `Σ_p dims[p]` of a complex.
pub fn check_cap(dims: &[usize], cap: usize) -> Result<()> {
    let total: usize = dims.iter().sum();
    if total > cap {
        return Err(Error::DimensionCap { dim: total, cap });
    }
    Ok(())
}

/// Cochain dimensions without realising anything, for the cap guard.
pub fn cochain_dims_predicted(n: usize, ell: usize) -> Vec<usize> {
    let t = gl_dimension(&YoungDiagram::new(vec![ell, ell]).expect("ok"), n + 1) as usize;
    (0..=n).map(|p| binomial(n, p) * t).collect()
}

pub fn complex_cohomology(n: usize, ell: usize, cap: usize) -> Result<CohomologyReport> {
    check_cap(&cochain_dims_predicted(n, ell), cap)?;
    let space = ProlongationSpace::build(n, ell)?;
    complex_cohomology_of(&space, cap)
}

pub fn complex_cohomology_of(space: &ProlongationSpace, cap: usize) -> Result<CohomologyReport> {
    let n = space.n();
    let dims: Vec<usize> = (0..=n).map(|p| space.cochain_dim(p)).collect();
    check_cap(&dims, cap)?;
    let complex = space.complex()?;
    let computed = complex.cohomology_dims();
    let entries = computed
        .iter()
        .enumerate()
        .map(|(p, &c)| {
            let (d, predicted) = predicted_cohomology(n, space.ell(), p);
            CohomologyEntry { p, computed: c, diagram: d.rows().to_vec(), predicted, dynkin_labels: None }
        })
        .collect();
    Ok(CohomologyReport { n, ell: space.ell(), space_dims: dims, entries })
}

/// One diagonal `p + k = d` of the `(Λ^p⊗𝕋^ℓ_k)` array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalReport {
    pub d: usize,
    /// `(p, k, dim)` in complex order (increasing `p`).
    pub positions: Vec<(usize, usize, usize)>,
    pub ranks: Vec<usize>,
    pub cohomology: Vec<usize>,
    /// Whether each position is one of the boxed corners carrying cohomology.
    pub boxed: Vec<bool>,
}

impl DiagonalReport {
    pub fn is_exact(&self) -> bool {
        self.cohomology.iter().all(|&h| h == 0)
    }

    /// Cohomology is nonzero exactly at the boxed positions.
    pub fn matches_boxes(&self) -> bool {
        self.cohomology.iter().zip(&self.boxed).all(|(&h, &b)| (h > 0) == b)
    }

    pub fn euler(&self) -> i64 {
        let dims: Vec<usize> = self.positions.iter().map(|&(_, _, d)| d).collect();
        crate::linalg::alternating_sum(&dims)
    }
}

/// Where the cohomology should sit: `H^0` at `𝕋_0`, `H^1` at `Λ^1⊗𝕋_0`,
/// `H^p` (p ≥ 2) at `Λ^p⊗𝕋_ℓ`.
pub fn is_boxed(ell: usize, p: usize, k: usize) -> bool {
    match p {
        0 | 1 => k == 0,
        _ => k == ell,
    }
}

/// The sub-complex on a diagonal, with maps cut out of [`ProlongationSpace::partial`].
pub fn graded_diagonal_complex(space: &ProlongationSpace, d: usize) -> DiagonalReport {
    let n = space.n();
    let ell = space.ell();
    let mut positions = Vec::new();
    for p in 0..=n {
        if d >= p && d - p <= ell {
            let k = d - p;
            positions.push((p, k, binomial(n, p) * space.components()[k].dim()));
        }
    }
    let mut ranks = Vec::new();
    for w in positions.windows(2) {
        let (p, k, _) = w[0];
        let (p1, k1, _) = w[1];
        debug_assert_eq!((p1, k1), (p + 1, k - 1));
        let full = space.partial(p);
        let block = full.block(space.component_range(p + 1, k1), space.component_range(p, k));
        ranks.push(rank(&block));
    }
    let dims: Vec<usize> = positions.iter().map(|&(_, _, d)| d).collect();
    let cohomology = cohomology_from_ranks(&dims, &ranks);
    let boxed = positions.iter().map(|&(p, k, _)| is_boxed(ell, p, k)).collect();
    DiagonalReport { d, positions, ranks, cohomology, boxed }
}

/// Dimension of the space of `K_{a p…s b…e}` (2ℓ+1 slots) with
/// `K = K_{a(p…s)(b…e)}`, `K_{a p…r(s b…e)} = 0` and, unless relaxed,
/// `K_{[ap]q…} = 0`. Built as `Λ^1⊗𝕋^ℓ_ℓ` intersected with the kernel of
/// the skew constraint.
pub fn injectivity_intersection_dim(n: usize, ell: usize, relax_skew: bool) -> usize {
    let top = realize_class(&SymmetryClass::prolongation_component(ell, ell), n);
    let dim_top = top.dim();
    let cols = n * dim_top;
    if relax_skew {
        return cols;
    }
    let arity = 2 * ell + 1;
    // K_{a rest} = Σ_j y_{a,j} top_j(rest); constraint: K_{a p rest'} − K_{p a rest'} = 0
    let inner = n.pow((arity - 2) as u32);
    let mut rows: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for a in 0..n {
        for (j, col) in top.columns().iter().enumerate() {
            for (f, v) in col {
                // f indexes (p, rest') in the 2ℓ-slot component
                let p = f / inner;
                let rest = f % inner;
                if p == a {
                    continue;
                }
                // contributes +v to row (a,p,rest) and −v to row (p,a,rest)
                let plus = flat_index(n, &[a, p]) * inner + rest;
                let minus = flat_index(n, &[p, a]) * inner + rest;
                rows.entry(plus).or_default().push((a * dim_top + j, v.clone()));
                rows.entry(minus).or_default().push((a * dim_top + j, -v.clone()));
            }
        }
    }
    let mut m = ExactMatrix::zeros(rows.len(), cols);
    for (r, (_, entries)) in rows.into_iter().enumerate() {
        for (c, v) in entries {
            m.add_to(r, c, v);
        }
    }
    cols - rank(&m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityCheck {
    pub n: usize,
    pub ell: usize,
    pub dim: usize,
    pub relaxed_dim: usize,
}

pub fn injectivity_implication_check(n: usize, ell: usize) -> InjectivityCheck {
    InjectivityCheck {
        n,
        ell,
        dim: injectivity_intersection_dim(n, ell, false),
        relaxed_dim: injectivity_intersection_dim(n, ell, true),
    }
}

/// True when every entry of `v` is zero.
pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_dimensions() {
        assert_eq!(build_t(3, 1).unwrap().component_dims(), vec![3, 3]);
        assert_eq!(build_t(2, 2).unwrap().component_dims(), vec![3, 2, 1]);
        assert_eq!(build_t(2, 1).unwrap().component_dims(), vec![2, 1]);
    }

    #[test]
    fn partial_small_cases() {
        let s = build_t(2, 1).unwrap();
        let d0 = s.partial(0);
        assert_eq!((d0.rows(), d0.cols()), (6, 3));
        assert_eq!(rank(&d0), 1);
        let top = s.partial(2);
        assert_eq!((top.rows(), top.cols()), (0, 3));
    }

    #[test]
    fn key_block_is_bijective_for_n3() {
        let s = build_t(3, 1).unwrap();
        let full = s.partial(1);
        let block = full.block(s.component_range(2, 0), s.component_range(1, 1));
        assert_eq!((block.rows(), block.cols()), (9, 9));
        assert_eq!(rank(&block), 9);
    }

    #[test]
    fn key_map_witness() {
        let m = key_map(2);
        // source coordinates (a, bc): only (0, [01]) with K_{012}=1 i.e. K_{112}=1 in 1-based
        let mut v = vec![Rational::zero(); m.cols()];
        v[0] = Rational::from_integer(1.into());
        let out = m.mul_vec(&v);
        // target (ab=[12], c=1) and (ab=[12], c=2)
        assert_eq!(out[0], Rational::new((-1).into(), 2.into()));
        assert!(out[1].is_zero());
    }

    #[test]
    fn key_check_small() {
        let c = key_isomorphism_check(2);
        assert_eq!((c.source_dim, c.target_dim, c.rank), (2, 2, 2));
        assert!(key_isomorphism_check(3).bijective());
    }

    #[test]
    fn predicted_examples() {
        let (d, dim) = predicted_cohomology(3, 1, 3);
        assert_eq!(d.rows(), &[2, 2, 1]);
        assert_eq!(dim, 3);
        assert_eq!(predicted_cohomology(3, 1, 4).1, 0);
    }

    #[test]
    fn cohomology_small() {
        let r = complex_cohomology(2, 1, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(r.computed(), vec![2, 3, 1]);
        let r = complex_cohomology(3, 1, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(r.computed(), vec![3, 6, 6, 3]);
        assert!(r.all_match());
        let r = complex_cohomology(2, 2, DEFAULT_DIMENSION_CAP).unwrap();
        assert_eq!(r.computed()[0], 3);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(complex_cohomology(3, 1, 10).unwrap_err(), Error::DimensionCap { dim: 48, cap: 10 });
        assert_eq!(
            complex_cohomology(5, 4, DEFAULT_DIMENSION_CAP).unwrap_err(),
            Error::DimensionCap { dim: 56448, cap: DEFAULT_DIMENSION_CAP }
        );
    }

    #[test]
    fn injectivity_small() {
        let c = injectivity_implication_check(2, 1);
        assert_eq!(c.dim, 0);
        assert_eq!(c.relaxed_dim, 2);
    }
}
