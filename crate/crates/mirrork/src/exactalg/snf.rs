//! Smith normal form over ℤ.
//!
//! Pivot selection is the smallest nonzero absolute value in the trailing
//! submatrix, ties broken by lowest (row, col). That keeps coefficient
//! growth moderate at the sizes this crate works with and makes the output
//! deterministic for a fixed input.

use super::int::Int;
use super::matrix::IntMatrix;

/// Which transform matrices to accumulate. Skipping unused ones matters:
/// `U` for a matrix with many rows is large.
#[derive(Clone, Copy, Default)]
pub struct SnfOpts {
    pub want_u: bool,
    pub want_v: bool,
    pub want_u_inv: bool,
    pub want_v_inv: bool,
}

impl SnfOpts {
    pub fn all() -> Self {
        SnfOpts {
            want_u: true,
            want_v: true,
            want_u_inv: true,
            want_v_inv: true,
        }
    }

    pub fn uv() -> Self {
        SnfOpts {
            want_u: true,
            want_v: true,
            ..Default::default()
        }
    }
}

/// D = U·M·V with U, V unimodular and D diagonal with a divisibility chain.
/// Transform fields are identity-sized placeholders unless requested.
pub struct Smith {
    pub d: IntMatrix,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
    pub rank: usize,
}

impl Smith {
    /// Nontrivial invariant factors (those ≥ 2), in chain order.
    pub fn torsion_factors(&self) -> Vec<Int> {
        (0..self.rank)
            .map(|i| self.d.get(i, i).clone())
            .filter(|d| !d.is_one())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    m: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        swap_rows(&mut self.m, a, b);
        if let Some(u) = &mut self.u {
            swap_rows(u, a, b);
        }
        if let Some(ui) = &mut self.u_inv {
            swap_cols(ui, a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        swap_cols(&mut self.m, a, b);
        if let Some(v) = &mut self.v {
            swap_cols(v, a, b);
        }
        if let Some(vi) = &mut self.v_inv {
            swap_rows(vi, a, b);
        }
    }

    /// row a -= q * row b
    fn row_sub(&mut self, a: usize, q: &Int, b: usize) {
        row_sub(&mut self.m, a, q, b);
        if let Some(u) = &mut self.u {
            row_sub(u, a, q, b);
        }
        // inverse op on U^-1: col b += q * col a
        if let Some(ui) = &mut self.u_inv {
            col_add(ui, b, q, a);
        }
    }

    /// col a -= q * col b
    fn col_sub(&mut self, a: usize, q: &Int, b: usize) {
        col_sub(&mut self.m, a, q, b);
        if let Some(v) = &mut self.v {
            col_sub(v, a, q, b);
        }
        if let Some(vi) = &mut self.v_inv {
            row_add(vi, b, q, a);
        }
    }

    fn negate_row(&mut self, r: usize) {
        negate_row(&mut self.m, r);
        if let Some(u) = &mut self.u {
            negate_row(u, r);
        }
        if let Some(ui) = &mut self.u_inv {
            negate_col(ui, r);
        }
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    for c in 0..m.cols() {
        let va = m.get(a, c).clone();
        let vb = m.get(b, c).clone();
        m.set(a, c, vb);
        m.set(b, c, va);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for r in 0..m.rows() {
        let va = m.get(r, a).clone();
        let vb = m.get(r, b).clone();
        m.set(r, a, vb);
        m.set(r, b, va);
    }
}

fn row_sub(m: &mut IntMatrix, a: usize, q: &Int, b: usize) {
    for c in 0..m.cols() {
        let vb = m.get(b, c).clone();
        if vb.is_zero() {
            continue;
        }
        let va = m.get(a, c).sub_mul(q, &vb);
        m.set(a, c, va);
    }
}

fn col_sub(m: &mut IntMatrix, a: usize, q: &Int, b: usize) {
    for r in 0..m.rows() {
        let vb = m.get(r, b).clone();
        if vb.is_zero() {
            continue;
        }
        let va = m.get(r, a).sub_mul(q, &vb);
        m.set(r, a, va);
    }
}

fn row_add(m: &mut IntMatrix, a: usize, q: &Int, b: usize) {
    for c in 0..m.cols() {
        let vb = m.get(b, c).clone();
        if vb.is_zero() {
            continue;
        }
        let va = m.get(a, c).add(&q.mul(&vb));
        m.set(a, c, va);
    }
}

fn col_add(m: &mut IntMatrix, a: usize, q: &Int, b: usize) {
    for r in 0..m.rows() {
        let vb = m.get(r, b).clone();
        if vb.is_zero() {
            continue;
        }
        let va = m.get(r, a).add(&q.mul(&vb));
        m.set(r, a, va);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = m.get(r, c).checked_neg();
        m.set(r, c, v);
    }
}

fn negate_col(m: &mut IntMatrix, c: usize) {
    for r in 0..m.rows() {
        let v = m.get(r, c).checked_neg();
        m.set(r, c, v);
    }
}

/// Smallest nonzero |entry| in the trailing submatrix starting at (k, k),
/// ties broken by lowest (row, col).
fn select_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in k..m.rows() {
        for c in k..m.cols() {
            let v = m.get(r, c);
            if v.is_zero() {
                continue;
            }
            match best {
                None => best = Some((r, c)),
                Some((br, bc)) => {
                    if v.abs_cmp(m.get(br, bc)) == std::cmp::Ordering::Less {
                        best = Some((r, c));
                    }
                }
            }
            if m.get(best.unwrap().0, best.unwrap().1).is_unit() {
                // A unit pivot cannot be beaten except by tie-breaking order;
                // the scan order already visits lowest (row, col) first.
                return best;
            }
        }
    }
    best
}

pub fn smith_with(m: &IntMatrix, opts: SnfOpts) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = Work {
        m: m.clone(),
        u: opts.want_u.then(|| IntMatrix::identity(rows)),
        v: opts.want_v.then(|| IntMatrix::identity(cols)),
        u_inv: opts.want_u_inv.then(|| IntMatrix::identity(rows)),
        v_inv: opts.want_v_inv.then(|| IntMatrix::identity(cols)),
    };

    let mut k = 0;
    while k < rows && k < cols {
        let Some((pr, pc)) = select_pivot(&w.m, k) else {
            break;
        };
        w.swap_rows(k, pr);
        w.swap_cols(k, pc);

        // Clear row and column k; the pivot shrinks whenever a remainder
        // survives, so this terminates.
        loop {
            let mut dirty = false;
            for r in k + 1..rows {
                let v = w.m.get(r, k).clone();
                if v.is_zero() {
                    continue;
                }
                let q = v.div_floor(w.m.get(k, k));
                if !q.is_zero() {
                    w.row_sub(r, &q, k);
                }
                if !w.m.get(r, k).is_zero() {
                    // Remainder is strictly smaller than the pivot.
                    w.swap_rows(k, r);
                    dirty = true;
                }
            }
            for c in k + 1..cols {
                let v = w.m.get(k, c).clone();
                if v.is_zero() {
                    continue;
                }
                let q = v.div_floor(w.m.get(k, k));
                if !q.is_zero() {
                    w.col_sub(c, &q, k);
                }
                if !w.m.get(k, c).is_zero() {
                    w.swap_cols(k, c);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility sweep: the pivot must divide every remaining entry.
        let mut fixed = true;
        'scan: for r in k + 1..rows {
            for c in k + 1..cols {
                if !w.m.get(k, k).divides(w.m.get(r, c)) {
                    // Fold row r into row k and redo this position.
                    let one = Int::one().checked_neg();
                    w.row_sub(k, &one, r); // row k += row r
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue; // redo position k with the folded row
        }

        if w.m.get(k, k).is_negative() {
            w.negate_row(k);
        }
        k += 1;
    }

    let rank = k;
    Smith {
        d: w.m,
        u: w.u,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        rank,
    }
}

/// The spec-facing entry point: D = U·M·V.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_with(m, SnfOpts::uv());
    (s.u.unwrap(), s.d, s.v.unwrap())
}
