//! Young diagrams, their GL(n) dimensions, and explicit realizations of the
//! corresponding irreducible tensor spaces.
//!
//! A realization is cut out of a tensor power by linear constraints. The
//! slots are split into groups that are all symmetric (one group per row)
//! or all antisymmetric (one group per column). On top of that, for each
//! pair of consecutive groups, absorbing one index of the shorter group
//! into the longer one and (anti)symmetrising must give zero. For the
//! prolongation components this is literally the "s.t. K_{p…r(sbc…de)} = 0"
//! condition; for a column layout it is the "K_{[abc]d} = 0" condition.
//! The constraints are solved in reduced coordinates (one unknown per
//! canonically ordered index tuple in each group), and the kernel is
//! expanded back to full tensors.
//!
//! Conventions: content of the cell in row `i`, column `j` is `j - i`;
//! hook length is `arm + leg + 1`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel_from_rref, rref, ExactMatrix, Rational};
use crate::tensor::{flat_index, permutations_with_sign, sort_with_sign, GroupKind, Tensor};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YoungDiagram(Vec<usize>);

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::BadDiagram(format!("{rows:?} has an empty row")));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadDiagram(format!("{rows:?} is not weakly decreasing")));
        }
        Ok(YoungDiagram(rows))
    }

    pub fn row(len: usize) -> Self {
        YoungDiagram(if len == 0 { vec![] } else { vec![len] })
    }

    pub fn rows(&self) -> &[usize] {
        &self.0
    }

    pub fn num_rows(&self) -> usize {
        self.0.len()
    }

    pub fn boxes(&self) -> usize {
        self.0.iter().sum()
    }

    /// Column lengths.
    pub fn conjugate(&self) -> YoungDiagram {
        let width = self.0.first().copied().unwrap_or(0);
        YoungDiagram((0..width).map(|j| self.0.iter().filter(|&&r| r > j).count()).collect())
    }

    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| j as i64 - i as i64))
    }

    pub fn hooks(&self) -> Vec<usize> {
        let cols = self.conjugate();
        let mut out = Vec::with_capacity(self.boxes());
        for (i, &len) in self.0.iter().enumerate() {
            for j in 0..len {
                let arm = len - j - 1;
                let leg = cols.0[j] - i - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }
}

/// GL(n) dimension by the hook-content formula; zero when the diagram has
/// more rows than `n`.
pub fn gl_dimension(d: &YoungDiagram, n: usize) -> u64 {
    if d.num_rows() > n {
        return 0;
    }
    let mut num = BigInt::one();
    for c in d.contents() {
        num *= BigInt::from(n as i64 + c);
    }
    let mut den = BigInt::one();
    for h in d.hooks() {
        den *= BigInt::from(h);
    }
    let q = Rational::new(num, den);
    debug_assert!(q.is_integer());
    q.to_integer().to_u64().expect("dimension fits in u64")
}

/// Labels of an `sl(m)` Dynkin diagram, one per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinLabel(pub Vec<i64>);

impl DynkinLabel {
    /// `a_i = λ_i - λ_{i+1}` for the `n - 1` nodes of `sl(n)`.
    pub fn from_diagram(d: &YoungDiagram, n: usize) -> Self {
        let row = |i: usize| d.rows().get(i).copied().unwrap_or(0) as i64;
        DynkinLabel((0..n.saturating_sub(1)).map(|i| row(i) - row(i + 1)).collect())
    }
}

/// Weyl dimension formula for `sl(r+1)` with `r = labels.len()`.
pub fn weyl_dimension(lbl: &DynkinLabel) -> Result<u64> {
    if let Some(bad) = lbl.0.iter().position(|&a| a < 0) {
        return Err(Error::NegativeLabel(bad));
    }
    let r = lbl.0.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..=r {
        for j in i + 1..=r {
            let s: i64 = lbl.0[i..j].iter().map(|a| a + 1).sum();
            num *= BigInt::from(s);
            den *= BigInt::from((j - i) as i64);
        }
    }
    Ok(Rational::new(num, den).to_integer().to_u64().expect("dimension fits in u64"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convention {
    /// One symmetric group per row.
    Rows,
    /// One antisymmetric group per column.
    Columns,
}

/// A symmetry type: consecutive slot groups of one kind, plus the
/// vanishing conditions `(from, into)` that absorb one index of group
/// `from` into group `into`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetryClass {
    kind: GroupKind,
    groups: Vec<usize>,
    raises: Vec<(usize, usize)>,
}

impl SymmetryClass {
    pub fn new(kind: GroupKind, groups: Vec<usize>, raises: Vec<(usize, usize)>) -> Result<Self> {
        for &(from, into) in &raises {
            if from >= groups.len() || into >= groups.len() || from == into {
                return Err(Error::InvalidArgument(format!("bad raise ({from}, {into})")));
            }
        }
        Ok(SymmetryClass { kind, groups, raises })
    }

    /// Rows (or columns) of `d` laid out in order, longest first.
    pub fn young(d: &YoungDiagram, convention: Convention) -> Self {
        let (kind, groups) = match convention {
            Convention::Rows => (GroupKind::Symmetric, d.rows().to_vec()),
            Convention::Columns => (GroupKind::Antisymmetric, d.conjugate().rows().to_vec()),
        };
        let raises = (1..groups.len()).map(|i| (i, i - 1)).collect();
        SymmetryClass { kind, groups, raises }
    }

    /// The k-th prolongation component of valence ℓ: slots `(p_1…p_k, b_1…b_ℓ)`,
    /// symmetric in each block, with `K_{p…r(s b…e)} = 0`.
    pub fn prolongation_component(ell: usize, k: usize) -> Self {
        let raises = if k > 0 { vec![(0, 1)] } else { vec![] };
        SymmetryClass { kind: GroupKind::Symmetric, groups: vec![k, ell], raises }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    pub fn raises(&self) -> &[(usize, usize)] {
        &self.raises
    }

    pub fn arity(&self) -> usize {
        self.groups.iter().sum()
    }

    fn group_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.groups
            .iter()
            .map(|g| {
                let o = acc;
                acc += g;
                o
            })
            .collect()
    }
}

/// Canonical tuples of length `len` over `0..n`: nondecreasing for a
/// symmetric group, strictly increasing for an antisymmetric one.
fn canonical_tuples(n: usize, len: usize, kind: GroupKind) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(n: usize, len: usize, strict: bool, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, len, strict, if strict { i + 1 } else { i }, cur, out);
            cur.pop();
        }
    }
    rec(n, len, kind == GroupKind::Antisymmetric, 0, &mut cur, &mut out);
    out
}

/// Distinct rearrangements of a canonical tuple with the sign each picks up.
fn arrangements(tuple: &[usize], kind: GroupKind) -> Vec<(Vec<usize>, i8)> {
    let mut seen: BTreeMap<Vec<usize>, i8> = BTreeMap::new();
    for (perm, sign) in permutations_with_sign(tuple.len()) {
        let arranged: Vec<usize> = perm.iter().map(|&p| tuple[p]).collect();
        let s = if kind == GroupKind::Antisymmetric { sign } else { 1 };
        seen.entry(arranged).or_insert(s);
    }
    seen.into_iter().collect()
}

/// Reduced coordinate system: one canonical tuple per group.
struct Reduced {
    kind: GroupKind,
    tuples: Vec<Vec<Vec<usize>>>,
    lookup: Vec<BTreeMap<Vec<usize>, usize>>,
    radix: Vec<usize>,
}

impl Reduced {
    fn new(n: usize, kind: GroupKind, groups: &[usize]) -> Self {
        let tuples: Vec<Vec<Vec<usize>>> = groups.iter().map(|&g| canonical_tuples(n, g, kind)).collect();
        let lookup = tuples.iter().map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
        let radix = tuples.iter().map(|t| t.len()).collect();
        Reduced { kind, tuples, lookup, radix }
    }

    fn size(&self) -> usize {
        self.radix.iter().product()
    }

    fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.radix).fold(0, |acc, (&d, &r)| acc * r + d)
    }

    fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut digits = vec![0; self.radix.len()];
        for (slot, &r) in digits.iter_mut().zip(&self.radix).rev() {
            *slot = code % r;
            code /= r;
        }
        digits
    }

    /// Canonicalise an arbitrary tuple for group `g`: (digit, sign), sign 0
    /// for a repeated index in an antisymmetric group.
    fn canon(&self, g: usize, tuple: &[usize]) -> (usize, i8) {
        let mut t = tuple.to_vec();
        let sign = match self.kind {
            GroupKind::Symmetric => {
                t.sort_unstable();
                1
            }
            GroupKind::Antisymmetric => sort_with_sign(&mut t),
        };
        if sign == 0 {
            return (0, 0);
        }
        (self.lookup[g][&t], sign)
    }
}

/// Constraint rows for "absorb one index of group `from` into group `into`".
fn raise_rows(n: usize, reduced: &Reduced, groups: &[usize], from: usize, into: usize) -> Vec<Vec<(usize, Rational)>> {
    if groups[from] == 0 {
        return Vec::new();
    }
    let kind = reduced.kind;
    let mut out_groups = groups.to_vec();
    out_groups[into] += 1;
    out_groups[from] -= 1;
    let target = Reduced::new(n, kind, &out_groups);
    let mut rows = Vec::with_capacity(target.size());
    for code in 0..target.size() {
        let digits = target.decode(code);
        let grown = &target.tuples[into][digits[into]];
        let shrunk = &target.tuples[from][digits[from]];
        let m = grown.len() - 1;
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for i in 0..grown.len() {
            let mut rest = grown.clone();
            let y = rest.remove(i);
            let mut moved = vec![y];
            moved.extend_from_slice(shrunk);
            let (d_into, s_into) = reduced.canon(into, &rest);
            let (d_from, s_from) = reduced.canon(from, &moved);
            let mut sign = (s_into * s_from) as i64;
            if sign == 0 {
                continue;
            }
            if kind == GroupKind::Antisymmetric && (m - i) % 2 == 1 {
                sign = -sign;
            }
            let mut src = digits.clone();
            src[into] = d_into;
            src[from] = d_from;
            *acc.entry(reduced.encode(&src)).or_insert(0) += sign;
        }
        let row: Vec<(usize, Rational)> =
            acc.into_iter().filter(|(_, v)| *v != 0).map(|(c, v)| (c, Rational::from_integer(v.into()))).collect();
        if !row.is_empty() {
            rows.push(row);
        }
    }
    rows
}

/// Explicit basis of a symmetry-constrained subspace of `(ℝ^n)^{⊗k}`.
///
/// Columns are flattened tensors in lexicographic order. For each basis
/// vector `j` there is a distinguished coordinate `coord_rows[j]` where
/// vector `j` is 1 and every other basis vector is 0, so the coordinates
/// of any element of the span can be read off directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    n: usize,
    arity: usize,
    columns: Vec<Vec<(usize, Rational)>>,
    coord_rows: Vec<usize>,
}

impl SubspaceBasis {
    pub fn from_parts(
        n: usize,
        arity: usize,
        columns: Vec<Vec<(usize, Rational)>>,
        coord_rows: Vec<usize>,
    ) -> Result<Self> {
        if columns.len() != coord_rows.len() {
            return Err(Error::InvalidArgument(format!(
                "{} columns but {} coordinate rows",
                columns.len(),
                coord_rows.len()
            )));
        }
        let b = SubspaceBasis { n, arity, columns, coord_rows };
        for (j, &r) in b.coord_rows.iter().enumerate() {
            for (i, col) in b.columns.iter().enumerate() {
                let v = lookup(col, r);
                let want = if i == j { Rational::one() } else { Rational::zero() };
                if v != want {
                    return Err(Error::InvalidArgument(format!("coordinate row {r} does not select basis vector {j}")));
                }
            }
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n.pow(self.arity as u32)
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(usize, Rational)>] {
        &self.columns
    }

    pub fn coord_rows(&self) -> &[usize] {
        &self.coord_rows
    }

    pub fn matrix(&self) -> ExactMatrix {
        let trip =
            self.columns.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |(r, v)| (*r, j, v.clone())));
        ExactMatrix::from_triplets(self.ambient_dim(), self.dim(), trip).expect("basis entries are in range")
    }

    pub fn tensor(&self, j: usize) -> Tensor {
        let entries =
            self.columns[j].iter().map(|(f, v)| (crate::tensor::unflat_index(self.n, self.arity, *f), v.clone()));
        Tensor::from_entries(self.n, self.arity, entries).expect("basis entries are in range")
    }

    /// Coordinates of a sparse flattened vector; fails unless it lies in the span.
    pub fn coordinates(&self, v: &[(usize, Rational)]) -> Result<Vec<Rational>> {
        let y: Vec<Rational> = self.coord_rows.iter().map(|&r| lookup(v, r)).collect();
        let mut rebuilt: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (r, b) in &self.columns[j] {
                *rebuilt.entry(*r).or_insert_with(Rational::zero) += yj * b;
            }
        }
        rebuilt.retain(|_, x| !x.is_zero());
        let mut given: Vec<(usize, Rational)> = v.iter().filter(|(_, x)| !x.is_zero()).cloned().collect();
        given.sort_by_key(|(r, _)| *r);
        if rebuilt.into_iter().collect::<Vec<_>>() != given {
            return Err(Error::NotInSubspace);
        }
        Ok(y)
    }

    pub fn tensor_coordinates(&self, t: &Tensor) -> Result<Vec<Rational>> {
        if t.n() != self.n || t.arity() != self.arity {
            return Err(Error::ShapeMismatch { left: (t.n(), t.arity()), right: (self.n, self.arity) });
        }
        self.coordinates(&t.flatten_sparse())
    }

    /// Sparse flattened element with the given coordinates.
    pub fn combine(&self, y: &[Rational]) -> Vec<(usize, Rational)> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (r, b) in &self.columns[j] {
                *acc.entry(*r).or_insert_with(Rational::zero) += yj * b;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

fn lookup(col: &[(usize, Rational)], r: usize) -> Rational {
    match col.binary_search_by_key(&r, |(i, _)| *i) {
        Ok(pos) => col[pos].1.clone(),
        Err(_) => Rational::zero(),
    }
}

/// Realise a symmetry class over `ℝ^n` as the kernel of its constraints.
pub fn realize_class(class: &SymmetryClass, n: usize) -> SubspaceBasis {
    let arity = class.arity();
    let reduced = Reduced::new(n, class.kind, &class.groups);
    let size = reduced.size();
    let mut rows = Vec::new();
    for &(from, into) in &class.raises {
        rows.extend(raise_rows(n, &reduced, &class.groups, from, into));
    }
    let nrows = rows.len();
    let trip = rows.into_iter().enumerate().flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v)));
    let constraints = ExactMatrix::from_triplets(nrows, size, trip).expect("in range");
    let red = rref(&constraints);
    let kernel = kernel_from_rref(&red, size);
    let free: Vec<usize> = (0..size).filter(|&c| !red.is_pivot(c)).collect();

    let arrangements_per_group: Vec<Arrangements> =
        reduced.tuples.iter().map(|ts| ts.iter().map(|t| arrangements(t, class.kind)).collect()).collect();

    let offsets = class.group_offsets();
    let mut columns = Vec::with_capacity(kernel.len());
    for vec in &kernel {
        let mut col: BTreeMap<usize, Rational> = BTreeMap::new();
        for (code, v) in vec.iter().enumerate() {
            if !v.is_zero() {
                let digits = reduced.decode(code);
                Expander { n, offsets: &offsets, digits: &digits, arr: &arrangements_per_group, v }
                    .run(arity, &mut col);
            }
        }
        columns.push(col.into_iter().filter(|(_, x)| !x.is_zero()).collect::<Vec<_>>());
    }
    // the canonical entry of a free reduced coordinate reads off that coordinate
    let coord_rows = free
        .iter()
        .map(|&code| {
            let digits = reduced.decode(code);
            let mut full = Vec::with_capacity(arity);
            for (g, &d) in digits.iter().enumerate() {
                full.extend_from_slice(&reduced.tuples[g][d]);
            }
            flat_index(n, &full)
        })
        .collect();
    SubspaceBasis { n, arity, columns, coord_rows }
}

/// Signed index arrangements of every canonical tuple, per group.
type Arrangements = Vec<Vec<(Vec<usize>, i8)>>;

/// Writes the full-tensor expansion of one reduced coordinate.
struct Expander<'a> {
    n: usize,
    offsets: &'a [usize],
    digits: &'a [usize],
    arr: &'a [Arrangements],
    v: &'a Rational,
}

impl Expander<'_> {
    fn run(&self, arity: usize, out: &mut BTreeMap<usize, Rational>) {
        let mut idx = vec![0usize; arity];
        self.rec(0, 1, &mut idx, out);
    }

    fn rec(&self, g: usize, sign: i8, idx: &mut [usize], out: &mut BTreeMap<usize, Rational>) {
        if g == self.digits.len() {
            let val = if sign < 0 { -self.v.clone() } else { self.v.clone() };
            *out.entry(flat_index(self.n, idx)).or_insert_with(Rational::zero) += val;
            return;
        }
        for (t, s) in &self.arr[g][self.digits[g]] {
            let o = self.offsets[g];
            idx[o..o + t.len()].copy_from_slice(t);
            self.rec(g + 1, sign * s, idx, out);
        }
    }
}

pub fn realize(d: &YoungDiagram, n: usize, convention: Convention) -> SubspaceBasis {
    realize_class(&SymmetryClass::young(d, convention), n)
}

/// Realise one of the shape families that occur here: a single row, a
/// two-row shape `(a, b)` with `a > b` (row layout, as for the
/// prolongation components), or `(a, a, 1, …, 1)` (column layout, as for
/// the higher cohomology).
pub fn realize_irreducible(d: &YoungDiagram, n: usize) -> Result<SubspaceBasis> {
    let r = d.rows();
    let convention = match r {
        [] | [_] => Convention::Rows,
        [a, b] if a > b => Convention::Rows,
        [a, b, tail @ ..] if a == b && tail.iter().all(|&x| x == 1) => Convention::Columns,
        _ => return Err(Error::UnsupportedShape(format!("{r:?}"))),
    };
    Ok(realize(d, n, convention))
}
