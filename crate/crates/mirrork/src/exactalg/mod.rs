//! Exact integer linear algebra: Smith normal form, kernels, cokernels, and
//! presentations of finitely generated abelian groups.
//!
//! All arithmetic is arbitrary precision; nothing here rounds or reduces
//! modulo anything. Values are immutable after construction and safe to
//! share across threads.

mod abgroup;
mod int;
mod matrix;
mod snf;
pub mod sparse;

pub use abgroup::{
    group_from_presentation, presented_quotient, AbGroup, QuotientPresentation,
};
pub use int::Int;
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, smith_with, Smith, SnfOpts};

/// Basis of the integer kernel {v : M·v = 0}, as matrix columns. The kernel
/// of an integer matrix is automatically saturated (the quotient by it embeds
/// in the image lattice, hence is torsion-free).
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_with(
        m,
        SnfOpts {
            want_v: true,
            ..Default::default()
        },
    );
    let v = s.v.unwrap();
    v.submatrix_cols(s.rank..m.cols())
}

/// Integer rank.
pub fn rank(m: &IntMatrix) -> usize {
    smith_with(m, SnfOpts::default()).rank
}

/// Solve M·x = b over ℤ. Returns None when no integer solution exists.
pub fn solve(m: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(m.rows(), b.len());
    let s = smith_with(
        m,
        SnfOpts {
            want_u: true,
            want_v: true,
            ..Default::default()
        },
    );
    let u = s.u.as_ref().unwrap();
    let v = s.v.as_ref().unwrap();
    let ub = u.mul_vec(b);
    let mut y = vec![Int::zero(); m.cols()];
    for i in 0..m.rows() {
        if i < s.rank {
            let d = s.d.get(i, i);
            if !d.divides(&ub[i]) {
                return None;
            }
            y[i] = ub[i].div_exact(d);
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    Some(v.mul_vec(&y))
}

/// Columnwise solve: X with M·X = B.
pub fn solve_matrix(m: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(m.rows(), b.rows());
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        cols.push(solve(m, &b.column(j))?);
    }
    Some(IntMatrix::from_columns(m.cols(), &cols))
}

/// A basis (as columns) of the subgroup of ℤ^rows generated by the columns
/// of `m`. Unlike the kernel, this subgroup need not be saturated; the basis
/// spans exactly the integer column span.
pub fn column_span_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_with(
        m,
        SnfOpts {
            want_u_inv: true,
            ..Default::default()
        },
    );
    let u_inv = s.u_inv.as_ref().unwrap();
    // col span = U^{-1} · span(d_i e_i), so a basis is d_i · (col i of U^{-1}).
    let mut cols = Vec::with_capacity(s.rank);
    for i in 0..s.rank {
        let d = s.d.get(i, i);
        cols.push(
            u_inv
                .column(i)
                .into_iter()
                .map(|x| x.mul(d))
                .collect::<Vec<_>>(),
        );
    }
    IntMatrix::from_columns(m.rows(), &cols)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if !m.is_square() {
        return None;
    }
    let s = smith_with(m, SnfOpts::uv());
    if s.rank != m.rows() || (0..s.rank).any(|i| !s.d.get(i, i).is_one()) {
        return None;
    }
    // U M V = I  =>  M^{-1} = V U.
    Some(s.v.unwrap().mul(&s.u.unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(d: &IntMatrix) -> Vec<i64> {
        (0..d.rows().min(d.cols()))
            .map(|i| d.get(i, i).to_i64().unwrap())
            .collect()
    }

    /// Independent oracle for 2x2 Smith diagonals: d1 = gcd of entries,
    /// d1*d2 = |det|.
    fn smith_2x2_oracle(m: &IntMatrix) -> (i64, i64) {
        let mut g = Int::zero();
        for r in 0..2 {
            for c in 0..2 {
                g = g.gcd(m.get(r, c));
            }
        }
        let det = m.det().abs();
        let d1 = g.to_i64().unwrap();
        let d2 = if d1 == 0 {
            0
        } else {
            det.to_i64().unwrap() / d1
        };
        (d1, d2)
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(2);
        let (_, d, _) = smith_normal_form(&m);
        assert_eq!(diag_of(&d), vec![1, 1]);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zeros(2, 3);
        let (u, d, v) = smith_normal_form(&m);
        assert!(d.is_zero());
        assert_eq!(d.rows(), 2);
        assert_eq!(d.cols(), 3);
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
    }

    #[test]
    fn snf_2468() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let (u, d, v) = smith_normal_form(&m);
        // Hand oracle: d1 = gcd = 2, d1*d2 = |det| = 8.
        assert_eq!(smith_2x2_oracle(&m), (2, 4));
        assert_eq!(diag_of(&d), vec![2, 4]);
        assert_eq!(u.mul(&m).mul(&v), d);
    }

    #[test]
    fn snf_deterministic() {
        let m = IntMatrix::from_rows(&[vec![6, 4, 2], vec![4, 8, 6], vec![2, 6, 12]]);
        let (u1, d1, v1) = smith_normal_form(&m);
        let (u2, d2, v2) = smith_normal_form(&m);
        assert_eq!(u1, u2);
        assert_eq!(d1, d2);
        assert_eq!(v1, v2);
    }

    #[test]
    fn presentation_examples() {
        // 3 generators, no relations.
        let g = group_from_presentation(3, &IntMatrix::zeros(0, 3));
        assert_eq!(g, AbGroup::free(3));
        // 2 generators, relation (2, -2).
        let g = group_from_presentation(2, &IntMatrix::from_rows(&[vec![2, -2]]));
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), &[Int::from(2)]);
        // 1 generator killed by (1).
        let g = group_from_presentation(1, &IntMatrix::from_rows(&[vec![1]]));
        assert!(g.is_trivial());
    }

    #[test]
    fn presentation_invariance_under_row_permutation() {
        let rel = IntMatrix::from_rows(&[vec![2, 0, 4], vec![0, 3, 6], vec![1, 1, 1]]);
        let perm = IntMatrix::from_rows(&[vec![1, 1, 1], vec![2, 0, 4], vec![0, 3, 6]]);
        assert_eq!(
            group_from_presentation(3, &rel),
            group_from_presentation(3, &perm)
        );
    }

    #[test]
    fn kernel_examples() {
        // Identity: empty kernel.
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        // Zero 1x2: rank-2 kernel.
        assert_eq!(kernel_basis(&IntMatrix::zeros(1, 2)).cols(), 2);
        // [[1,1]]: kernel spanned by (1,-1).
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![1, 1]]));
        assert_eq!(k.cols(), 1);
        let a = k.get(0, 0).to_i64().unwrap();
        let b = k.get(1, 0).to_i64().unwrap();
        assert_eq!(a + b, 0);
        assert_eq!(a.abs(), 1, "kernel basis must be primitive");
    }

    #[test]
    fn solve_and_span() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(
            solve(&m, &[Int::from(4), Int::from(9)]),
            Some(vec![Int::from(2), Int::from(3)])
        );
        assert_eq!(solve(&m, &[Int::from(1), Int::from(0)]), None);

        let span = column_span_basis(&IntMatrix::from_rows(&[vec![2, 4], vec![0, 0]]));
        assert_eq!(span.cols(), 1);
        assert_eq!(span.get(0, 0).abs(), Int::from(2));
    }

    #[test]
    fn quotient_presentation_witnesses() {
        // Z^2 / <(2, -2)>: Z + Z/2 with usable coordinates.
        let q = presented_quotient(2, &IntMatrix::from_rows(&[vec![2, -2]]));
        assert_eq!(q.group.free_rank(), 1);
        assert_eq!(q.group.torsion(), &[Int::from(2)]);
        // The relation itself must map to zero coordinates.
        let z = q.coords(&[Int::from(2), Int::from(-2)]);
        assert!(z.iter().all(Int::is_zero));
        // Generator representatives must map to unit coordinate vectors.
        for j in 0..q.group.num_generators() {
            let rep = q.generator_reps.column(j);
            let coords = q.coords(&rep);
            for (i, c) in coords.iter().enumerate() {
                assert_eq!(c.is_one(), i == j);
                if i != j {
                    assert!(c.is_zero());
                }
            }
        }
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    prop_compose! {
        fn arb_matrix()(rows in 1usize..5, cols in 1usize..5)
                      (entries in proptest::collection::vec(-9i64..10, rows * cols),
                       rows in Just(rows), cols in Just(cols))
                      -> IntMatrix {
            IntMatrix::from_entries(rows, cols, entries.into_iter().map(Int::from).collect()).unwrap()
        }
    }

    proptest! {
        #[test]
        fn snf_factorization_holds(m in arb_matrix()) {
            let (u, d, v) = smith_normal_form(&m);
            prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
            prop_assert!(u.det().is_unit());
            prop_assert!(v.det().is_unit());
            // Diagonal with divisibility chain, zeros off-diagonal.
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    if r != c {
                        prop_assert!(d.get(r, c).is_zero());
                    }
                }
            }
            let diag: Vec<Int> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
            for w in diag.windows(2) {
                if !w[1].is_zero() {
                    prop_assert!(!w[0].is_zero());
                }
                if !w[0].is_zero() && !w[1].is_zero() {
                    prop_assert!(w[0].divides(&w[1]));
                }
            }
        }

        #[test]
        fn kernel_columns_annihilate(m in arb_matrix()) {
            let k = kernel_basis(&m);
            for j in 0..k.cols() {
                let col = k.column(j);
                prop_assert!(m.mul_vec(&col).iter().all(Int::is_zero));
            }
            // Appending any vector already in the kernel must not raise rank.
            if k.cols() > 0 {
                let mut doubled = k.column(0);
                for v in &mut doubled {
                    *v = v.mul(&Int::from(3));
                }
                let ext = k.hstack(&IntMatrix::from_columns(m.cols(), &[doubled]));
                prop_assert_eq!(rank(&ext), k.cols());
            }
        }

        #[test]
        fn presentation_invariant_under_unimodular_generator_change(m in arb_matrix()) {
            let g1 = group_from_presentation(m.cols(), &m);
            // A fixed unimodular change of generators.
            let mut t = IntMatrix::identity(m.cols());
            if m.cols() >= 2 {
                t.set(0, 1, Int::from(1));
            }
            let g2 = group_from_presentation(m.cols(), &m.mul(&t));
            prop_assert_eq!(g1, g2);
        }
    }
}
