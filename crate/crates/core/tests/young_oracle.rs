//! Young-symmetrizer images computed by brute force, compared with the
//! symmetry-class realisations and with hook-content dimensions.

use proptest::prelude::*;

use prolong_core::linalg::{rank, rat, ExactMatrix};
use prolong_core::tensor::{all_indices, IndexGroup, Tensor};
use prolong_core::young::{gl_dimension, realize, realize_irreducible, Convention, YoungDiagram};

/// Row and column position groups of the row-reading standard tableau.
fn tableau_groups(d: &YoungDiagram) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut rows = Vec::new();
    let mut pos = 0;
    let mut cells = Vec::new();
    for &len in d.rows() {
        rows.push((pos..pos + len).collect::<Vec<_>>());
        cells.push((pos..pos + len).collect::<Vec<_>>());
        pos += len;
    }
    let width = d.rows()[0];
    let cols = (0..width).map(|c| cells.iter().filter(|r| r.len() > c).map(|r| r[c]).collect::<Vec<_>>()).collect();
    (rows, cols)
}

fn symmetrizer_image_dim(d: &YoungDiagram, n: usize) -> usize {
    let k = d.boxes();
    let (rows, cols) = tableau_groups(d);
    let mut images = Vec::new();
    for idx in all_indices(n, k) {
        let mut t = Tensor::zeros(n, k);
        t.set(&idx, rat(1));
        for r in rows.iter().filter(|r| r.len() > 1) {
            t = t.symmetrize(&IndexGroup::symmetric(r.clone()).unwrap()).unwrap();
        }
        for c in cols.iter().filter(|c| c.len() > 1) {
            t = t.antisymmetrize(&IndexGroup::antisymmetric(c.clone()).unwrap()).unwrap();
        }
        images.push(t.flatten());
    }
    rank(&ExactMatrix::from_rows(&images))
}

#[test]
fn realisations_match_symmetrizer_images() {
    let shapes: &[&[usize]] = &[&[1], &[2], &[3], &[1, 1], &[2, 1], &[2, 2], &[3, 1], &[1, 1, 1], &[2, 2, 1], &[3, 2]];
    for &rows in shapes {
        let d = YoungDiagram::new(rows.to_vec()).unwrap();
        for n in 2..=3 {
            if d.boxes() > 4 && n > 2 && rows != [2, 2, 1] {
                continue;
            }
            let oracle = symmetrizer_image_dim(&d, n);
            assert_eq!(oracle as u64, gl_dimension(&d, n), "hook-content for {rows:?} over {n}");
            assert_eq!(realize(&d, n, Convention::Rows).dim(), oracle, "rows layout {rows:?} over {n}");
            assert_eq!(realize(&d, n, Convention::Columns).dim(), oracle, "columns layout {rows:?} over {n}");
        }
    }
}

#[test]
fn unsupported_shapes_are_reported() {
    let d = YoungDiagram::new(vec![3, 2, 1]).unwrap();
    assert!(realize_irreducible(&d, 3).is_err());
    let d = YoungDiagram::new(vec![2, 2, 1]).unwrap();
    assert_eq!(realize_irreducible(&d, 3).unwrap().dim(), 3);
}

fn random_tensor(n: usize, k: usize) -> impl Strategy<Value = Tensor> {
    proptest::collection::vec(-3i64..=3, n.pow(k as u32))
        .prop_map(move |v| Tensor::unflatten(n, k, &v.into_iter().map(rat).collect::<Vec<_>>()).unwrap())
}

proptest! {
    #[test]
    fn projections_are_idempotent(t in random_tensor(3, 3)) {
        let g = IndexGroup::antisymmetric(vec![0, 2]).unwrap();
        let once = t.antisymmetrize(&g).unwrap();
        prop_assert_eq!(once.antisymmetrize(&g).unwrap(), once.clone());
        let s = IndexGroup::symmetric(vec![0, 1, 2]).unwrap();
        let sym = t.symmetrize(&s).unwrap();
        prop_assert_eq!(sym.symmetrize(&s).unwrap(), sym);
    }

    #[test]
    fn flatten_is_linear(a in random_tensor(2, 3), b in random_tensor(2, 3)) {
        let sum = a.add(&b).unwrap();
        let lhs = sum.flatten();
        let rhs: Vec<_> = a.flatten().iter().zip(b.flatten()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(Tensor::unflatten(2, 3, &sum.flatten()).unwrap(), sum);
    }

    #[test]
    fn realised_basis_round_trips(coeffs in proptest::collection::vec(-5i64..=5, 6)) {
        let d = YoungDiagram::new(vec![2, 2]).unwrap();
        let b = realize(&d, 3, Convention::Rows);
        let y: Vec<_> = coeffs.into_iter().map(rat).collect();
        let v = b.combine(&y);
        prop_assert_eq!(b.coordinates(&v).unwrap(), y);
    }
}
