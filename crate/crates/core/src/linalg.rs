//! Exact rational linear algebra.
//!
//! Matrices are stored as sparse triplets. Row reduction is fraction-free:
//! every working row is kept as a primitive integer vector, so eliminating a
//! leading entry costs one gcd and two scalings rather than a rational
//! normalisation per entry. Pivots are taken in row-major order (the first
//! nonzero of each row as it is processed), which makes every kernel basis
//! reproducible run to run.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The scalar field for everything in this crate.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse exact matrix. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange { index: r.max(c), bound: rows.max(cols) });
            }
            m.add_to(r, c, v);
        }
        Ok(m)
    }

    /// Dense row-major input, mostly for tests.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    /// Nonzero entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.entries.insert((c, r), v.clone());
        }
        t
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch { left: (self.rows, self.cols), right: (rhs.rows, rhs.cols) });
        }
        let rhs_rows = rhs.sparse_rows();
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for (&(r, k), a) in &self.entries {
            for (c, b) in &rhs_rows[k] {
                out.add_to(r, *c, a * b);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rows];
        for (&(r, cc), v) in &self.entries {
            if cc == c {
                out[r] = v.clone();
            }
        }
        out
    }

    /// Rows as sorted `(col, value)` lists.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    /// Columns as sorted `(row, value)` lists.
    pub fn sparse_columns(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r, v.clone()));
        }
        cols
    }

    /// Sub-block with the given row and column ranges.
    pub fn block(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (&(r, c), v) in self.entries.range((rows.start, 0)..(rows.end, 0)) {
            if cols.contains(&c) {
                out.entries.insert((r - rows.start, c - cols.start), v.clone());
            }
        }
        out
    }

    /// Stack `self` on top of `below`.
    pub fn vstack(&self, below: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != below.cols {
            return Err(Error::ShapeMismatch { left: (self.rows, self.cols), right: (below.rows, below.cols) });
        }
        let mut out = self.clone();
        out.rows += below.rows;
        for (&(r, c), v) in &below.entries {
            out.entries.insert((r + self.rows, c), v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= s;
        }
        out
    }
}

type IntRow = Vec<(usize, BigInt)>;

/// Scale a rational sparse row to a primitive integer row (positive leading entry).
fn integer_row(row: &[(usize, Rational)]) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let ints: IntRow =
        row.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect();
    make_primitive(ints)
}

fn make_primitive(mut row: IntRow) -> IntRow {
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

/// `a*row - b*pivot`, dropping zeros. Both inputs sorted by column.
fn combine(a: &BigInt, row: &[(usize, BigInt)], b: &BigInt, pivot: &[(usize, BigInt)]) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, a * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(b * &pivot[j].1)));
            j += 1;
        } else {
            let v = a * &row[i].1 - b * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form built incrementally, one row at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduce `row` against the current pivots; returns true if it was
    /// independent (and is now a pivot row).
    pub fn insert(&mut self, row: &[(usize, Rational)]) -> bool {
        let mut row = integer_row(row);
        while let Some((lead, v)) = row.first() {
            match self.pivots.get(lead) {
                None => {
                    let lead = *lead;
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(p) => {
                    let pv = &p[0].1;
                    let g = pv.gcd(v);
                    let a = pv / &g;
                    let b = v / &g;
                    row = make_primitive(combine(&a, &row[1..], &b, &p[1..]));
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Fully reduced echelon form over the rationals: each pivot row has a
    /// leading 1 and zeros in every other pivot column.
    pub fn reduce(&self) -> Rref {
        let mut reduced: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let lv = Rational::from_integer(row[0].1.clone());
            let mut acc: BTreeMap<usize, Rational> =
                row[1..].iter().map(|(c, v)| (*c, Rational::from_integer(v.clone()) / &lv)).collect();
            let pivot_hits: Vec<usize> = acc.keys().copied().filter(|c| reduced.contains_key(c)).collect();
            for pc in pivot_hits {
                let coef = match acc.remove(&pc) {
                    Some(c) => c,
                    None => continue,
                };
                for (c, v) in &reduced[&pc] {
                    let slot = acc.entry(*c).or_insert_with(Rational::zero);
                    *slot -= &coef * v;
                    if slot.is_zero() {
                        acc.remove(c);
                    }
                }
            }
            reduced.insert(lead, acc.into_iter().collect());
        }
        Rref { rows: reduced }
    }
}

/// Reduced row echelon form; each entry maps a pivot column to the
/// non-pivot tail of its row (the leading 1 is implicit).
#[derive(Clone, Debug)]
pub struct Rref {
    rows: BTreeMap<usize, Vec<(usize, Rational)>>,
}

impl Rref {
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    pub fn row_tail(&self, pivot: usize) -> Option<&[(usize, Rational)]> {
        self.rows.get(&pivot).map(|r| r.as_slice())
    }
}

pub fn echelon(m: &ExactMatrix) -> Echelon {
    let mut e = Echelon::new();
    for row in m.sparse_rows() {
        if !row.is_empty() {
            e.insert(&row);
        }
    }
    e
}

pub fn rref(m: &ExactMatrix) -> Rref {
    echelon(m).reduce()
}

/// Exact rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    echelon(m).rank()
}

/// Kernel basis, one vector per free column in increasing column order.
/// Each vector has a 1 at its own free column and 0 at every other free
/// column.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    let r = rref(m);
    kernel_from_rref(&r, m.cols())
}

pub fn kernel_from_rref(r: &Rref, cols: usize) -> Vec<Vec<Rational>> {
    // column -> list of (pivot, coefficient) so we can fill each vector directly
    let mut by_free: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
    for (&p, tail) in &r.rows {
        for (c, v) in tail {
            by_free.entry(*c).or_default().push((p, v));
        }
    }
    let mut out = Vec::new();
    for f in 0..cols {
        if r.is_pivot(f) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        if let Some(hits) = by_free.get(&f) {
            for (p, coef) in hits {
                v[*p] = -(*coef).clone();
            }
        }
        out.push(v);
    }
    out
}

/// Basis of the column space: the pivot columns of `m` itself.
pub fn image_basis(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    let pivots = echelon(&m.transpose()).pivot_columns();
    // pivots of the transpose are row indices of m^T, i.e. column indices of m
    pivots.into_iter().map(|c| m.column(c)).collect()
}

/// dim(span(ambient)) - dim(span(sub)), requiring span(sub) ⊆ span(ambient).
pub fn quotient_dim(ambient: &ExactMatrix, sub: &ExactMatrix) -> Result<usize> {
    let ra = rank(ambient);
    let rs = rank(sub);
    let joint = rank(&ambient.transpose().vstack(&sub.transpose())?);
    if joint != ra {
        return Err(Error::NotASubspace);
    }
    Ok(ra - rs)
}

/// Some solution of `m x = b`, with every free variable set to zero;
/// `None` when the system is inconsistent.
pub fn solve(m: &ExactMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows());
    // augment with b as the last column and check it is not a pivot
    let mut aug = ExactMatrix::zeros(m.rows(), m.cols() + 1);
    for (r, c, v) in m.triplets() {
        aug.set(r, c, v.clone());
    }
    for (r, v) in b.iter().enumerate() {
        aug.set(r, m.cols(), v.clone());
    }
    let red = rref(&aug);
    if red.is_pivot(m.cols()) {
        return None;
    }
    let mut x = vec![Rational::zero(); m.cols()];
    for (&p, tail) in &red.rows {
        for (c, v) in tail {
            if *c == m.cols() {
                x[p] = v.clone();
            }
        }
    }
    Some(x)
}

/// Finite cochain complex `0 → V_0 → V_1 → … → V_m → 0`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    maps: Vec<ExactMatrix>,
}

impl ChainComplex {
    /// Checks shapes and that consecutive maps compose to zero.
    pub fn new(dims: Vec<usize>, maps: Vec<ExactMatrix>) -> Result<Self> {
        if dims.is_empty() || maps.len() + 1 != dims.len() {
            return Err(Error::MalformedComplex("need exactly one map between consecutive spaces"));
        }
        for (p, d) in maps.iter().enumerate() {
            if d.cols() != dims[p] || d.rows() != dims[p + 1] {
                return Err(Error::ShapeMismatch { left: (d.rows(), d.cols()), right: (dims[p + 1], dims[p]) });
            }
        }
        for p in 0..maps.len().saturating_sub(1) {
            if !maps[p + 1].mul(&maps[p])?.is_zero() {
                return Err(Error::NotAComplex { degree: p });
            }
        }
        Ok(ChainComplex { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[ExactMatrix] {
        &self.maps
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(rank).collect()
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        cohomology_from_ranks(&self.dims, &self.ranks())
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.dims)
    }
}

/// `dim H^p = dim V_p - rank D_p - rank D_{p-1}`.
pub fn cohomology_from_ranks(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|p| {
            let out = if p < ranks.len() { ranks[p] } else { 0 };
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            dims[p] - out - inc
        })
        .collect()
}

pub fn alternating_sum(xs: &[usize]) -> i64 {
    xs.iter().enumerate().map(|(p, &d)| if p % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// Convenience wrapper matching the free-function form of the contract.
pub fn cohomology_dims(c: &ChainComplex) -> Vec<usize> {
    c.cohomology_dims()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank(&ExactMatrix::identity(2)), 2);
        assert_eq!(rank(&ExactMatrix::zeros(3, 5)), 0);
        assert_eq!(rank(&ExactMatrix::from_int_rows(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_small_cases() {
        assert!(kernel_basis(&ExactMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&ExactMatrix::zeros(2, 3)).len(), 3);
        let m = ExactMatrix::from_int_rows(&[&[1, 1, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            assert_eq!(&v[0] + &v[1], Rational::zero());
        }
        assert_eq!(rank(&ExactMatrix::from_columns(3, &k)), 2);
    }

    #[test]
    fn rational_entries_reduce_exactly() {
        let m = ExactMatrix::from_rows(&[vec![ratio(1, 2), ratio(1, 3)], vec![ratio(3, 2), rat(1)]]);
        assert_eq!(rank(&m), 1);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![ratio(-2, 3), rat(1)]]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = ExactMatrix::from_int_rows(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&m, &[rat(3), rat(6)]), Some(vec![rat(3), rat(0)]));
        assert_eq!(solve(&m, &[rat(3), rat(5)]), None);
    }

    #[test]
    fn cohomology_trivial_complexes() {
        let c = ChainComplex::new(vec![1], vec![]).unwrap();
        assert_eq!(c.cohomology_dims(), vec![1]);
        let c = ChainComplex::new(vec![1, 1], vec![ExactMatrix::identity(1)]).unwrap();
        assert_eq!(c.cohomology_dims(), vec![0, 0]);
    }

    #[test]
    fn rejects_non_complex() {
        let d = ExactMatrix::identity(1);
        let err = ChainComplex::new(vec![1, 1, 1], vec![d.clone(), d]).unwrap_err();
        assert_eq!(err, Error::NotAComplex { degree: 0 });
    }

    #[test]
    fn image_and_quotient() {
        let m = ExactMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(image_basis(&m).len(), 2);
        let sub = ExactMatrix::from_int_rows(&[&[1], &[2], &[0]]);
        assert_eq!(quotient_dim(&m, &sub).unwrap(), 1);
        let outside = ExactMatrix::from_int_rows(&[&[0], &[1], &[0]]);
        assert_eq!(quotient_dim(&m, &outside), Err(Error::NotASubspace));
    }
}
