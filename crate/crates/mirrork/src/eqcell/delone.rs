//! Periodic Delaunay backend for general (non-monomial) actions, rank ≤ 3
//! (4 with a warning).
//!
//! The action is averaged to a G-invariant positive form Q = Σ_g ρ(g)ᵀρ(g);
//! the Delone subdivision of ℤⁿ with respect to Q is G-invariant. Cells are
//! found through their empty Q-spheres: every Delone cell incident to the
//! origin is cut out by a sphere through the origin and n more lattice
//! points, so candidate centers come from n-subsets of short window vectors
//! and are verified against the whole window. Completeness of the resulting
//! cell list modulo ℤⁿ is certified exactly: the cell volumes must add up to
//! the covolume 1. The polytopal cells are then barycentrically subdivided
//! (their quotient is almost never a regular CW complex), with a second
//! subdivision if some closed simplex still fails to embed.
//!
//! All geometry is exact rational arithmetic on small numbers.

use super::{Backend, BoundaryEntry, BuildOptions, Cell, Coord, EquivariantCellComplex, RawComplex};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::glattice::GLattice;
use std::collections::{BTreeMap, HashMap};

type Pt = Vec<Coord>;

fn rat(v: i64) -> Coord {
    Coord::from_integer(v)
}

fn dot_q(q: &[Vec<i64>], a: &[Coord], b: &[Coord]) -> Coord {
    let n = a.len();
    let mut acc = rat(0);
    for i in 0..n {
        for j in 0..n {
            if q[i][j] != 0 {
                acc += a[i] * b[j] * rat(q[i][j]);
            }
        }
    }
    acc
}

/// Solve A x = b by Gaussian elimination; None when singular.
fn solve_rational(a: &[Vec<Coord>], b: &[Coord]) -> Option<Vec<Coord>> {
    let n = b.len();
    let mut m: Vec<Vec<Coord>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(*rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != rat(0))?;
        m.swap(col, pivot);
        let p = m[col][col];
        for r in 0..n {
            if r != col && m[r][col] != rat(0) {
                let f = m[r][col] / p;
                for c in col..=n {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

fn det_rational(a: &[Vec<Coord>]) -> Coord {
    let n = a.len();
    let mut m: Vec<Vec<Coord>> = a.to_vec();
    let mut det = rat(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != rat(0)) else {
            return rat(0);
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            if m[r][col] != rat(0) {
                let f = m[r][col] / p;
                for c in col..n {
                    let v = m[col][c];
                    m[r][c] -= f * v;
                }
            }
        }
    }
    det
}

fn affine_rank(pts: &[Pt]) -> usize {
    if pts.is_empty() {
        return 0;
    }
    let n = pts[0].len();
    let mut rows: Vec<Pt> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    // Row reduce.
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != rat(0)) else {
            continue;
        };
        rows.swap(rank, pr);
        let p = rows[rank][col];
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != rat(0) {
                let f = rows[r][col] / p;
                for c in 0..n {
                    let v = rows[rank][c];
                    rows[r][c] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A polytope face: its vertex set (points in the frame of its top cell).
#[derive(Clone)]
struct Face {
    verts: Vec<Pt>,
    dim: usize,
}

/// All faces of a polytope of affine dimension `dim` with vertex set
/// `verts`, including the polytope itself, excluding nothing.
fn face_lattice(verts: &[Pt], dim: usize) -> Vec<Face> {
    let mut faces: Vec<Face> = vec![Face {
        verts: sorted_pts(verts),
        dim,
    }];
    let mut frontier = vec![faces[0].clone()];
    let mut seen: BTreeMap<Vec<(i64, i64, i64)>, ()> = BTreeMap::new();
    seen.insert(face_key_flat(&faces[0].verts), ());
    while let Some(face) = frontier.pop() {
        if face.dim == 0 {
            continue;
        }
        for sub in facets_of(&face.verts, face.dim) {
            let key = face_key_flat(&sub);
            if seen.insert(key, ()).is_none() {
                let f = Face {
                    verts: sub,
                    dim: face.dim - 1,
                };
                frontier.push(f.clone());
                faces.push(f);
            }
        }
    }
    faces
}

fn sorted_pts(pts: &[Pt]) -> Vec<Pt> {
    let mut v = pts.to_vec();
    v.sort();
    v
}

fn face_key_flat(pts: &[Pt]) -> Vec<(i64, i64, i64)> {
    pts.iter()
        .flat_map(|p| {
            p.iter()
                .enumerate()
                .map(|(i, c)| (i as i64, *c.numer(), *c.denom()))
        })
        .collect()
}

/// Facets (codimension-1 faces) of a polytope with vertex set `verts` of
/// affine dimension d, by exhaustive supporting-flat search.
fn facets_of(verts: &[Pt], d: usize) -> Vec<Vec<Pt>> {
    let n = verts[0].len();
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        // The two endpoints: extreme points along the direction.
        let dir: Pt = verts
            .last()
            .unwrap()
            .iter()
            .zip(&verts[0])
            .map(|(a, b)| a - b)
            .collect();
        let mut lo = &verts[0];
        let mut hi = &verts[0];
        let param = |p: &Pt| -> Coord {
            p.iter()
                .zip(&dir)
                .map(|(a, d)| *a * *d)
                .fold(rat(0), |x, y| x + y)
        };
        for v in verts {
            if param(v) < param(lo) {
                lo = v;
            }
            if param(v) > param(hi) {
                hi = v;
            }
        }
        return vec![vec![lo.clone()], vec![hi.clone()]];
    }

    // Complete the polytope's direction space to a basis of ℝⁿ with
    // standard unit vectors (the complement makes the functionals below
    // vanish exactly on affine flats inside the polytope's hull).
    let dirs: Vec<Pt> = verts[1..]
        .iter()
        .map(|p| p.iter().zip(&verts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut complement: Vec<Pt> = Vec::new();
    {
        let mut current: Vec<Pt> = dirs.clone();
        let mut rank = matrix_rank(&current);
        for j in 0..n {
            if rank == n {
                break;
            }
            let mut e = vec![rat(0); n];
            e[j] = rat(1);
            current.push(e.clone());
            let r2 = matrix_rank(&current);
            if r2 > rank {
                rank = r2;
                complement.push(e);
            } else {
                current.pop();
            }
        }
    }

    let mut out: Vec<Vec<Pt>> = Vec::new();
    let mut seen: BTreeMap<Vec<(i64, i64, i64)>, ()> = BTreeMap::new();
    let k = verts.len();
    let idx: Vec<usize> = (0..k).collect();
    for subset in combinations(&idx, d) {
        // λ(x) = det[x − t0, t1 − t0, …, t_{d−1} − t0, complement…]
        let t0 = &verts[subset[0]];
        let mut fixed_rows: Vec<Pt> = subset[1..]
            .iter()
            .map(|&i| verts[i].iter().zip(t0).map(|(a, b)| a - b).collect())
            .collect();
        fixed_rows.extend(complement.iter().cloned());
        if fixed_rows.len() + 1 != n {
            continue;
        }
        let lambda = |x: &Pt| -> Coord {
            let mut rows: Vec<Pt> =
                vec![x.iter().zip(t0).map(|(a, b)| a - b).collect::<Pt>()];
            rows.extend(fixed_rows.iter().cloned());
            det_rational(&rows)
        };
        let vals: Vec<Coord> = verts.iter().map(|v| lambda(v)).collect();
        if vals.iter().all(|v| *v == rat(0)) {
            continue; // degenerate subset
        }
        let has_pos = vals.iter().any(|v| *v > rat(0));
        let has_neg = vals.iter().any(|v| *v < rat(0));
        if has_pos && has_neg {
            continue; // not supporting
        }
        let face: Vec<Pt> = verts
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == rat(0))
            .map(|(p, _)| p.clone())
            .collect();
        if affine_rank(&face) != d - 1 {
            continue; // lower-dimensional touching set; found via recursion
        }
        let face = sorted_pts(&face);
        let key = face_key_flat(&face);
        if seen.insert(key, ()).is_none() {
            out.push(face);
        }
    }
    out
}

fn matrix_rank(rows: &[Pt]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let mut m = rows.to_vec();
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..m.len()).find(|&r| m[r][col] != rat(0)) else {
            continue;
        };
        m.swap(rank, pr);
        let p = m[rank][col];
        for r in 0..m.len() {
            if r != rank && m[r][col] != rat(0) {
                let f = m[r][col] / p;
                for c in 0..n {
                    let v = m[rank][c];
                    m[r][c] -= f * v;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// The Delone cells of (ℤⁿ, Q) incident to the origin: vertex sets of
/// maximal empty-sphere point sets through 0.
fn delone_cells_at_origin(
    n: usize,
    q: &[Vec<i64>],
    window: &[Vec<i64>],
    candidate_count: usize,
) -> Vec<Vec<Pt>> {
    // Candidates: shortest window vectors in the Q-norm.
    let mut by_norm: Vec<(i64, usize)> = window
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut norm = 0i64;
            for a in 0..n {
                for b in 0..n {
                    norm += q[a][b] * v[a] * v[b];
                }
            }
            (norm, i)
        })
        .collect();
    by_norm.sort_unstable();
    let cand: Vec<usize> = by_norm
        .iter()
        .take(candidate_count)
        .map(|&(_, i)| i)
        .collect();

    let window_pts: Vec<Pt> = window
        .iter()
        .map(|v| v.iter().map(|&x| rat(x)).collect())
        .collect();

    let mut cells: BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>> = BTreeMap::new();
    for subset in combinations(&cand, n) {
        // Sphere through 0 and the subset: 2 vᵀQ c = vᵀQ v.
        let rows: Vec<Pt> = subset
            .iter()
            .map(|&i| {
                (0..n)
                    .map(|col| {
                        let mut acc = 0i64;
                        for a in 0..n {
                            acc += window[i][a] * q[a][col];
                        }
                        rat(2 * acc)
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<Coord> = subset
            .iter()
            .map(|&i| {
                let mut acc = 0i64;
                for a in 0..n {
                    for b in 0..n {
                        acc += window[i][a] * q[a][b] * window[i][b];
                    }
                }
                rat(acc)
            })
            .collect();
        let Some(center) = solve_rational(&rows, &rhs) else {
            continue;
        };
        let r2 = dot_q(q, &center, &center);
        // Emptiness and on-sphere vertex collection over the whole window.
        let mut on_sphere: Vec<Pt> = vec![vec![rat(0); n]];
        let mut empty = true;
        for (wi, w) in window_pts.iter().enumerate() {
            let diff: Pt = w.iter().zip(&center).map(|(a, c)| *a - *c).collect();
            let d2 = dot_q(q, &diff, &diff);
            if d2 < r2 {
                empty = false;
                break;
            }
            if d2 == r2 {
                on_sphere.push(window_pts[wi].clone());
            }
        }
        if !empty {
            continue;
        }
        if affine_rank(&on_sphere) != n {
            continue; // not a full-dimensional cell
        }
        let cell = sorted_pts(&on_sphere);
        cells.entry(face_key_flat(&cell)).or_insert(cell);
    }
    cells.into_values().collect()
}

fn floor_coord(c: &Coord) -> i64 {
    c.floor().to_integer()
}

/// Canonicalize a point set by its barycenter: translate so the barycenter
/// lies in [0,1)ⁿ.
fn canonicalize(pts: &[Pt]) -> (Vec<Pt>, Vec<i64>) {
    let n = pts[0].len();
    let k = pts.len() as i64;
    let mut bary = vec![rat(0); n];
    for p in pts {
        for (b, x) in bary.iter_mut().zip(p) {
            *b += x;
        }
    }
    for b in bary.iter_mut() {
        *b /= rat(k);
    }
    let shift: Vec<i64> = bary.iter().map(floor_coord).collect();
    let moved: Vec<Pt> = pts
        .iter()
        .map(|p| p.iter().zip(&shift).map(|(x, s)| x - rat(*s)).collect())
        .collect();
    (sorted_pts(&moved), shift)
}

fn bary_of(pts: &[Pt]) -> Pt {
    let n = pts[0].len();
    let k = pts.len() as i64;
    let mut bary = vec![rat(0); n];
    for p in pts {
        for (b, x) in bary.iter_mut().zip(p) {
            *b += x;
        }
    }
    for b in bary.iter_mut() {
        *b /= rat(k);
    }
    bary
}

pub(crate) fn build(lat: &GLattice, opts: &BuildOptions) -> Result<EquivariantCellComplex> {
    let n = lat.rank();
    if n == 0 {
        return EquivariantCellComplex::finalize(
            lat,
            super::cubical::point_complex(lat),
            Backend::Delone,
            0,
        );
    }

    // G-invariant Gram matrix.
    let mut q = vec![vec![0i64; n]; n];
    for g in lat.group().elements() {
        let m = lat.matrix(g);
        let mt = m.transpose();
        let prod = mt.mul(m);
        for i in 0..n {
            for j in 0..n {
                q[i][j] += prod
                    .get(i, j)
                    .to_i64()
                    .ok_or_else(|| Error::unsupported("action entries too large for delone"))?;
            }
        }
    }

    // Sanity: Q must be G-invariant (ρᵀQρ = Q).
    {
        let qm = IntMatrix::from_rows(&q.iter().map(|r| r.clone()).collect::<Vec<_>>());
        for g in lat.group().elements() {
            let m = lat.matrix(g);
            if m.transpose().mul(&qm).mul(m) != qm {
                return Err(Error::internal("averaged form is not G-invariant"));
            }
        }
    }

    // Window: all lattice translates within max-norm 3.
    let mut window: Vec<Vec<i64>> = Vec::new();
    let mut cursor = vec![-3i64; n];
    loop {
        if cursor.iter().any(|&x| x != 0) {
            window.push(cursor.clone());
        }
        let mut i = 0;
        loop {
            cursor[i] += 1;
            if cursor[i] <= 3 {
                break;
            }
            cursor[i] = -3;
            i += 1;
            if i == n {
                break;
            }
        }
        if i == n {
            break;
        }
    }
    window.sort_unstable();

    // Find the Delone cells with a growing candidate set until the volume
    // certificate passes.
    let mut cells_mod_lambda: Vec<Vec<Pt>> = Vec::new();
    let mut ok = false;
    let mut k = 24.min(window.len());
    loop {
        let at_origin = delone_cells_at_origin(n, &q, &window, k);
        // Deduplicate modulo ℤⁿ.
        let mut seen: BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>> = BTreeMap::new();
        for cell in &at_origin {
            let (canon, _) = canonicalize(cell);
            seen.entry(face_key_flat(&canon)).or_insert(canon);
        }
        let cells: Vec<Vec<Pt>> = seen.into_values().collect();
        // Volume certificate: cells modulo ℤⁿ tile the torus exactly once.
        let mut vol = rat(0);
        for cell in &cells {
            vol += polytope_volume(cell, n);
        }
        if vol == rat(1) {
            cells_mod_lambda = cells;
            ok = true;
            break;
        }
        if k >= window.len() {
            break;
        }
        k = (k * 2).min(window.len());
    }
    if !ok {
        return Err(Error::internal(
            "delone cell enumeration did not tile the torus (window too small?)",
        ));
    }

    // First barycentric subdivision: chains in each cell's face lattice.
    let mut simplices: Vec<BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>>> =
        (0..=n).map(|_| BTreeMap::new()).collect();
    for cell in &cells_mod_lambda {
        let faces = face_lattice(cell, n);
        // Chains under vertex-set inclusion.
        let msets: Vec<(Vec<Pt>, usize)> =
            faces.iter().map(|f| (f.verts.clone(), f.dim)).collect();
        let is_subset = |a: &Vec<Pt>, b: &Vec<Pt>| a.iter().all(|p| b.binary_search(p).is_ok());
        // DFS over strictly decreasing chains.
        fn chains_rec(
            msets: &[(Vec<Pt>, usize)],
            is_subset: &dyn Fn(&Vec<Pt>, &Vec<Pt>) -> bool,
            current: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            out.push(current.clone());
            let last = *current.last().unwrap();
            for i in 0..msets.len() {
                if msets[i].1 < msets[last].1 && is_subset(&msets[i].0, &msets[last].0) {
                    current.push(i);
                    chains_rec(msets, is_subset, current, out);
                    current.pop();
                }
            }
        }
        let mut all_chains: Vec<Vec<usize>> = Vec::new();
        for start in 0..msets.len() {
            let mut cur = vec![start];
            chains_rec(&msets, &is_subset, &mut cur, &mut all_chains);
        }
        for chain in all_chains {
            let pts: Vec<Pt> = chain.iter().map(|&i| bary_of(&msets[i].0)).collect();
            let deg = pts.len() - 1;
            let (canon, _) = canonicalize(&pts);
            simplices[deg]
                .entry(face_key_flat(&canon))
                .or_insert(canon);
        }
    }

    // Assemble, subdividing once more if a closed simplex fails to embed.
    for round in 0..2 {
        match assemble(lat, n, &simplices, round as u32 + 1, opts) {
            Ok(complex) => return Ok(complex),
            Err(AssembleError::NotEmbedded) => {
                simplices = subdivide_simplices(n, &simplices);
            }
            Err(AssembleError::Other(e)) => return Err(e),
        }
    }
    Err(Error::internal(
        "delone complex still not embedded after two subdivisions",
    ))
}

/// Exact volume via the barycentric flags of the polytope.
fn polytope_volume(cell: &[Pt], n: usize) -> Coord {
    let faces = face_lattice(cell, n);
    // Full flags F_0 ⊂ F_1 ⊂ … ⊂ F_n with dim F_i = i.
    let by_dim: Vec<Vec<&Face>> = (0..=n)
        .map(|d| faces.iter().filter(|f| f.dim == d).collect())
        .collect();
    let mut total = rat(0);
    // Recursive flag walk accumulating simplex volumes.
    fn walk(
        by_dim: &[Vec<&Face>],
        dim: usize,
        upper: &Face,
        flag: &mut Vec<Pt>,
        total: &mut Coord,
        n: usize,
    ) {
        if dim == 0 {
            // flag has barycenters of dims n..1; add each vertex of upper.
            for f in &by_dim[0] {
                if f.verts
                    .iter()
                    .all(|p| upper.verts.binary_search(p).is_ok())
                {
                    let mut pts = flag.clone();
                    pts.push(f.verts[0].clone());
                    // Simplex volume.
                    let rows: Vec<Pt> = pts[1..]
                        .iter()
                        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
                        .collect();
                    let mut v = det_rational(&rows);
                    if v < rat(0) {
                        v = -v;
                    }
                    let mut fact = rat(1);
                    for i in 1..=n as i64 {
                        fact *= rat(i);
                    }
                    *total += v / fact;
                }
            }
            return;
        }
        for f in &by_dim[dim] {
            if f.dim < upper.dim
                && f.verts
                    .iter()
                    .all(|p| upper.verts.binary_search(p).is_ok())
            {
                flag.push(bary_of(&f.verts));
                walk(by_dim, dim - 1, f, flag, total, n);
                flag.pop();
            }
        }
    }
    for top in &by_dim[n] {
        let mut flag = vec![bary_of(&top.verts)];
        walk(&by_dim, n - 1, top, &mut flag, &mut total, n);
    }
    total
}

/// Barycentric subdivision of a simplex soup: chains of nonempty subsets.
fn subdivide_simplices(
    n: usize,
    simplices: &[BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>>],
) -> Vec<BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>>> {
    let mut out: Vec<BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>>> =
        (0..=n).map(|_| BTreeMap::new()).collect();
    for layer in simplices.iter() {
        for pts in layer.values() {
            let k = pts.len();
            // Chains of strictly nested nonempty subsets of the k points.
            let subsets: Vec<u32> = (1..(1u32 << k)).collect();
            fn rec(
                subsets: &[u32],
                pts: &[Pt],
                current: &mut Vec<u32>,
                out: &mut Vec<BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>>>,
            ) {
                let chain_pts: Vec<Pt> = current
                    .iter()
                    .map(|&mask| {
                        let members: Vec<Pt> = (0..pts.len())
                            .filter(|&i| mask >> i & 1 == 1)
                            .map(|i| pts[i].clone())
                            .collect();
                        bary_of(&members)
                    })
                    .collect();
                let deg = chain_pts.len() - 1;
                let (canon, _) = canonicalize(&chain_pts);
                out[deg].entry(face_key_flat(&canon)).or_insert(canon);
                let last = *current.last().unwrap();
                for &s in subsets {
                    if s != last && s & last == s {
                        current.push(s);
                        rec(subsets, pts, current, out);
                        current.pop();
                    }
                }
            }
            // Only chains whose top is the full simplex generate everything,
            // but shared faces between simplices need their own chains too;
            // enumerate chains starting from every subset.
            for &s in &subsets {
                let mut cur = vec![s];
                rec(&subsets, pts, &mut cur, &mut out);
            }
        }
    }
    out
}

enum AssembleError {
    NotEmbedded,
    Other(Error),
}

impl From<Error> for AssembleError {
    fn from(e: Error) -> Self {
        AssembleError::Other(e)
    }
}

fn assemble(
    lat: &GLattice,
    n: usize,
    simplices: &[BTreeMap<Vec<(i64, i64, i64)>, Vec<Pt>>],
    subdivisions: u32,
    opts: &BuildOptions,
) -> std::result::Result<EquivariantCellComplex, AssembleError> {
    let total: usize = simplices.iter().map(BTreeMap::len).sum();
    if total > opts.max_cells {
        return Err(AssembleError::Other(Error::unsupported(format!(
            "delone complex needs {total} cells (cap {})",
            opts.max_cells
        ))));
    }

    // Vertex table: canonical representative of each point class.
    let canon_pt = |p: &Pt| -> Pt {
        p.iter()
            .map(|c| c - rat(floor_coord(c)))
            .collect()
    };
    let mut vertex_set: BTreeMap<Vec<(i64, i64, i64)>, Pt> = BTreeMap::new();
    for pts in simplices[0].values() {
        let c = canon_pt(&pts[0]);
        vertex_set.entry(face_key_flat(std::slice::from_ref(&c))).or_insert(c);
    }
    let vertex_coords: Vec<Pt> = vertex_set.into_values().collect();
    let vertex_id: HashMap<Vec<(i64, i64, i64)>, u32> = vertex_coords
        .iter()
        .enumerate()
        .map(|(i, p)| (face_key_flat(std::slice::from_ref(p)), i as u32))
        .collect();

    // Degree-0 cells must align with vertex ids: both are the same sorted
    // canonical point list.
    let mut layers: Vec<Vec<Vec<Pt>>> = Vec::with_capacity(n + 1);
    let mut index: Vec<HashMap<Vec<(i64, i64, i64)>, u32>> = Vec::with_capacity(n + 1);
    for deg in 0..=n {
        let layer: Vec<Vec<Pt>> = simplices[deg].values().cloned().collect();
        let idx: HashMap<Vec<(i64, i64, i64)>, u32> = layer
            .iter()
            .enumerate()
            .map(|(i, pts)| (face_key_flat(pts), i as u32))
            .collect();
        layers.push(layer);
        index.push(idx);
    }

    // Build cells.
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(n + 1);
    for deg in 0..=n {
        let mut layer = Vec::with_capacity(layers[deg].len());
        for pts in &layers[deg] {
            // Vertex ids, checking embedding.
            let mut with_ids: Vec<(u32, &Pt)> = Vec::with_capacity(pts.len());
            for p in pts {
                let c = canon_pt(p);
                let id = *vertex_id
                    .get(&face_key_flat(std::slice::from_ref(&c)))
                    .ok_or_else(|| Error::internal("delone vertex missing"))?;
                with_ids.push((id, p));
            }
            with_ids.sort_by_key(|&(id, _)| id);
            if with_ids.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(AssembleError::NotEmbedded);
            }
            let vertices: Vec<u32> = with_ids.iter().map(|&(id, _)| id).collect();

            let mut boundary = Vec::with_capacity(pts.len());
            if deg > 0 {
                for drop in 0..with_ids.len() {
                    let sub: Vec<Pt> = with_ids
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != drop)
                        .map(|(_, &(_, p))| p.clone())
                        .collect();
                    let (canon, shift) = canonicalize(&sub);
                    let face = *index[deg - 1]
                        .get(&face_key_flat(&canon))
                        .ok_or_else(|| Error::internal("delone face missing"))?;
                    boundary.push(BoundaryEntry {
                        face,
                        sign: if drop % 2 == 0 { 1 } else { -1 },
                        shift: shift.iter().map(|&s| s as i32).collect(),
                    });
                }
            }

            let barycenter = bary_of(pts);
            layer.push(Cell {
                vertices,
                boundary,
                stabilizer: vec![],
                barycenter,
            });
        }
        cells.push(layer);
    }

    // Action.
    let group = lat.group();
    let mut action: Vec<Vec<Vec<(u32, i8)>>> = Vec::with_capacity(group.order());
    for g in group.elements() {
        let m = lat.matrix(g);
        let apply = |p: &Pt| -> Pt {
            (0..n)
                .map(|r| {
                    let mut acc = rat(0);
                    for c in 0..n {
                        let e = m.get(r, c).to_i64().expect("small action entries");
                        if e != 0 {
                            acc += rat(e) * p[c];
                        }
                    }
                    acc
                })
                .collect()
        };
        let mut per_deg = Vec::with_capacity(n + 1);
        for deg in 0..=n {
            let mut layer = Vec::with_capacity(layers[deg].len());
            for pts in &layers[deg] {
                // Map points in the source's sorted-vertex-id order to
                // compute the orientation parity.
                let mut with_ids: Vec<(u32, &Pt)> = pts
                    .iter()
                    .map(|p| {
                        let c = canon_pt(p);
                        (
                            *vertex_id
                                .get(&face_key_flat(std::slice::from_ref(&c)))
                                .expect("vertex exists"),
                            p,
                        )
                    })
                    .collect();
                with_ids.sort_by_key(|&(id, _)| id);
                let mapped: Vec<Pt> = with_ids.iter().map(|&(_, p)| apply(p)).collect();
                let (canon, _) = canonicalize(&mapped);
                let img = *index[deg]
                    .get(&face_key_flat(&canon))
                    .ok_or_else(|| Error::internal("delone action image missing"))?;
                // Parity of the image ids of the (sorted-source-order) map.
                let image_ids: Vec<u32> = mapped
                    .iter()
                    .map(|p| {
                        let c = canon_pt(p);
                        *vertex_id
                            .get(&face_key_flat(std::slice::from_ref(&c)))
                            .expect("vertex exists")
                    })
                    .collect();
                let sign = sort_parity_u32(&image_ids);
                layer.push((img, sign));
            }
            per_deg.push(layer);
        }
        action.push(per_deg);
    }

    let raw = RawComplex {
        vertex_coords,
        cells,
        action,
    };
    EquivariantCellComplex::finalize(lat, raw, Backend::Delone, subdivisions)
        .map_err(AssembleError::Other)
}

fn sort_parity_u32(vals: &[u32]) -> i8 {
    let mut inv = 0usize;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            if vals[i] > vals[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_complex, fixed_subcomplex, Backend, BuildOptions};
    use crate::exactalg::{AbGroup, IntMatrix};
    use crate::glattice::{norm_one_lattice, FiniteGroup, GLattice, Subgroup};

    fn opts() -> BuildOptions {
        BuildOptions {
            backend: Backend::Delone,
            ..Default::default()
        }
    }

    #[test]
    fn split1_delone_circle() {
        let lat = GLattice::new(1, FiniteGroup::trivial(), vec![IntMatrix::identity(1)]).unwrap();
        let x = build_complex(&lat, &opts()).unwrap();
        assert_eq!(x.cells(0).len(), 2);
        assert_eq!(x.cells(1).len(), 2);
        assert_eq!(
            x.underlying_homology(),
            vec![AbGroup::free(1), AbGroup::free(1)]
        );
    }

    #[test]
    fn split2_delone_square_grid() {
        let lat = GLattice::new(2, FiniteGroup::trivial(), vec![IntMatrix::identity(2)]).unwrap();
        let x = build_complex(&lat, &opts()).unwrap();
        assert_eq!(
            x.underlying_homology(),
            vec![AbGroup::free(1), AbGroup::free(2), AbGroup::free(1)]
        );
    }

    #[test]
    fn hexagonal_cubic_norm_one() {
        let lat = norm_one_lattice(&FiniteGroup::cyclic(3));
        let x = build_complex(&lat, &opts()).unwrap();
        // Hexagonal Delone subdivision: 1 vertex class, 3 edges, 2 triangles;
        // after subdivision 6 vertices, 18 edges, 12 triangles.
        assert_eq!(x.cells(0).len(), 6);
        assert_eq!(x.cells(1).len(), 18);
        assert_eq!(x.cells(2).len(), 12);
        assert_eq!(x.euler_characteristic(), 0);
        assert_eq!(
            x.underlying_homology(),
            vec![AbGroup::free(1), AbGroup::free(2), AbGroup::free(1)]
        );
        // Exactly 3 fixed vertices, each its own component.
        let fixed = fixed_subcomplex(&x, &Subgroup::full(lat.group())).unwrap();
        assert_eq!(fixed.component_count, 3);
        assert!(fixed.components.iter().all(|&(_, d)| d == 0));
        // Away from those the action is free.
        for p in 0..=2 {
            for (ci, cell) in x.cells(p).iter().enumerate() {
                if cell.stabilizer.len() > 1 {
                    assert_eq!(p, 0, "only vertices may be fixed, got cell ({p},{ci})");
                }
            }
        }
    }

    #[test]
    fn sign_lattice_delone_matches_reflection() {
        let lat = GLattice::new(
            1,
            FiniteGroup::cyclic(2),
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let x = build_complex(&lat, &opts()).unwrap();
        let fixed = fixed_subcomplex(&x, &Subgroup::full(lat.group())).unwrap();
        assert_eq!(fixed.component_count, 2);
    }

    #[test]
    fn quartic_norm_one_rank3() {
        let lat = norm_one_lattice(&FiniteGroup::cyclic(4));
        let x = build_complex(&lat, &opts()).unwrap();
        assert_eq!(x.euler_characteristic(), 0);
        let h = x.underlying_homology();
        assert_eq!(
            h,
            vec![
                AbGroup::free(1),
                AbGroup::free(3),
                AbGroup::free(3),
                AbGroup::free(1)
            ]
        );
    }
}
