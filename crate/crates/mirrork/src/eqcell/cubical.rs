//! Cubical backend for monomial (signed permutation) actions.
//!
//! The half-integer grid (½ℤ)ⁿ/ℤⁿ is preserved by signed permutations and
//! embeds every closed cell, so it is a regular CW structure; vertices sit at
//! the sign-action fixed points 0 and ½. When the induced action fails G-CW
//! regularity the complex is refined: plain permutation actions get the
//! staircase (coordinate-order) triangulation on the same vertex set, which
//! they preserve; anything else falls back to one barycentric subdivision.

use super::{subdivide, Backend, BoundaryEntry, BuildOptions, Cell, Coord, EquivariantCellComplex, RawComplex};
use crate::error::{Error, Result};
use crate::glattice::GLattice;
use std::collections::HashMap;

pub(crate) fn build(lat: &GLattice, opts: &BuildOptions) -> Result<EquivariantCellComplex> {
    let n = lat.rank();
    if n == 0 {
        return EquivariantCellComplex::finalize(lat, point_complex(lat), Backend::Cubical, 0);
    }
    if n > 16 {
        return Err(Error::unsupported("cubical backend supports rank <= 16"));
    }
    let total: usize = 4usize.pow(n as u32);
    if total > opts.max_cells {
        return Err(Error::unsupported(format!(
            "cubical complex needs {total} cells (cap {})",
            opts.max_cells
        )));
    }

    let raw = build_cubes(lat);
    if raw.is_g_regular(lat.group()) {
        return EquivariantCellComplex::finalize(lat, raw, Backend::Cubical, 0);
    }
    if lat.is_permutation() {
        let stair = build_staircase(lat, opts)?;
        if !stair.is_g_regular(lat.group()) {
            return Err(Error::internal(
                "staircase triangulation failed regularity for a permutation action",
            ));
        }
        return EquivariantCellComplex::finalize(lat, stair, Backend::Cubical, 0);
    }
    // Signed case: one barycentric subdivision always regularizes a cellular
    // action (subdivision vertices are cell barycenters).
    let sub = subdivide::barycentric(&raw, n, opts.max_cells)?;
    EquivariantCellComplex::finalize(lat, sub, Backend::Cubical, 1)
}

/// The one-point complex of a rank-0 lattice.
pub(crate) fn point_complex(lat: &GLattice) -> RawComplex {
    let order = lat.group().order();
    RawComplex {
        vertex_coords: vec![vec![]],
        cells: vec![vec![Cell {
            vertices: vec![0],
            boundary: vec![],
            stabilizer: vec![],
            barycenter: vec![],
        }]],
        action: vec![vec![vec![(0, 1)]]; order],
    }
}

fn half(num: i64) -> Coord {
    Coord::new(num, 2)
}

/// Signed permutation data per group element: column c maps to
/// (row(c), sign(c)).
fn monomial_data(lat: &GLattice) -> Vec<Vec<(usize, i8)>> {
    let n = lat.rank();
    lat.group()
        .elements()
        .map(|g| {
            let m = lat.matrix(g);
            (0..n)
                .map(|c| {
                    for r in 0..n {
                        let v = m.get(r, c);
                        if !v.is_zero() {
                            return (r, v.signum() as i8);
                        }
                    }
                    unreachable!("monomial matrix column has a nonzero entry")
                })
                .collect()
        })
        .collect()
}

fn sorted_masks(n: usize, p: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..(1u32 << n)).filter(|m| m.count_ones() as usize == p).collect();
    v.sort_unstable();
    v
}

/// Parity of the permutation sorting `vals` ascending.
fn sort_parity<T: Ord>(vals: &[T]) -> i8 {
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

/// The half-grid cube complex: cells are (anchor bits, free-axis mask).
fn build_cubes(lat: &GLattice) -> RawComplex {
    let n = lat.rank();
    let verts = 1usize << n;

    let vertex_coords: Vec<Vec<Coord>> = (0..verts)
        .map(|v| (0..n).map(|d| half(((v >> d) & 1) as i64)).collect())
        .collect();

    // index: per degree, (mask position, anchor) -> mask_pos * 2^n + anchor
    let masks_by_degree: Vec<Vec<u32>> = (0..=n).map(|p| sorted_masks(n, p)).collect();
    let mask_pos: Vec<HashMap<u32, usize>> = masks_by_degree
        .iter()
        .map(|ms| ms.iter().enumerate().map(|(i, &m)| (m, i)).collect())
        .collect();
    let cell_index =
        |p: usize, mask: u32, anchor: u32| (mask_pos[p][&mask] * verts + anchor as usize) as u32;

    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(n + 1);
    for p in 0..=n {
        let mut layer = Vec::with_capacity(masks_by_degree[p].len() * verts);
        for &mask in &masks_by_degree[p] {
            for anchor in 0..verts as u32 {
                // Vertices: anchor with any subset of mask bits flipped.
                let mut vs: Vec<u32> = Vec::with_capacity(1 << p);
                let mut sub = mask;
                loop {
                    vs.push(anchor ^ sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & mask;
                }
                vs.sort_unstable();

                // Boundary: per free axis, upper minus lower with
                // alternating signs.
                let mut boundary = Vec::with_capacity(2 * p);
                if p > 0 {
                    let mut axes: Vec<usize> = (0..n).filter(|d| mask >> d & 1 == 1).collect();
                    axes.sort_unstable();
                    for (j, &d) in axes.iter().enumerate() {
                        let sign = if j % 2 == 0 { 1i8 } else { -1i8 };
                        let fmask = mask & !(1u32 << d);
                        let lower = cell_index(p - 1, fmask, anchor);
                        let upper_anchor = anchor ^ (1u32 << d);
                        let upper = cell_index(p - 1, fmask, upper_anchor);
                        let mut upper_shift = vec![0i32; n];
                        if anchor >> d & 1 == 1 {
                            // The face at coordinate 1 is the translate of the
                            // face at coordinate 0.
                            upper_shift[d] = 1;
                        }
                        boundary.push(BoundaryEntry {
                            face: upper,
                            sign,
                            shift: upper_shift,
                        });
                        boundary.push(BoundaryEntry {
                            face: lower,
                            sign: -sign,
                            shift: vec![0i32; n],
                        });
                    }
                }

                let barycenter: Vec<Coord> = (0..n)
                    .map(|d| {
                        let base = half(((anchor >> d) & 1) as i64);
                        if mask >> d & 1 == 1 {
                            base + Coord::new(1, 4)
                        } else {
                            base
                        }
                    })
                    .collect();

                layer.push(Cell {
                    vertices: vs,
                    boundary,
                    stabilizer: vec![],
                    barycenter,
                });
            }
        }
        cells.push(layer);
    }

    // Action.
    let mono = monomial_data(lat);
    let mut action = Vec::with_capacity(lat.group().order());
    for g in lat.group().elements() {
        let data = &mono[g as usize];
        let mut per_deg = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let mut layer = Vec::with_capacity(cells[p].len());
            for &mask in &masks_by_degree[p] {
                for anchor in 0..verts as u32 {
                    let mut new_mask = 0u32;
                    let mut new_anchor = 0u32;
                    let mut sign = 1i8;
                    let mut image_axes = Vec::with_capacity(p);
                    for c in 0..n {
                        let (r, s) = data[c];
                        let bit = (anchor >> c) & 1;
                        if mask >> c & 1 == 1 {
                            new_mask |= 1 << r;
                            image_axes.push(r);
                            if s < 0 {
                                sign = -sign;
                                new_anchor |= (1 - bit) << r;
                            } else {
                                new_anchor |= bit << r;
                            }
                        } else {
                            // Vertex coordinates 0 and ½ are fixed by negation.
                            new_anchor |= bit << r;
                        }
                    }
                    sign *= sort_parity(&image_axes);
                    layer.push((cell_index(p, new_mask, new_anchor), sign));
                }
            }
            per_deg.push(layer);
        }
        action.push(per_deg);
    }

    RawComplex {
        vertex_coords,
        cells,
        action,
    }
}

/// The staircase triangulation of the half grid: within each grid cube, the
/// simplices of the coordinate-order (Freudenthal) subdivision. Vertices are
/// the grid vertices; a k-simplex is a base vertex plus a strictly nested
/// chain of k step sets. Coordinate permutations preserve the subdivision.
fn build_staircase(lat: &GLattice, opts: &BuildOptions) -> Result<RawComplex> {
    let n = lat.rank();
    if n > 8 {
        return Err(Error::unsupported("staircase triangulation supports rank <= 8"));
    }
    let verts = 1usize << n;
    let full = (1u32 << n) - 1;

    // Projected size: 2^n * sum over nonempty B of ordered-chain counts; just
    // enumerate chain skeletons first and check the cap.
    let mut chains_by_len: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n + 1];
    chains_by_len[0].push(vec![]);
    fn extend_chains(
        full: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        let last = *prefix.last().unwrap();
        let mut next = last + 1;
        while next <= full {
            // strict superset of `last`
            if next & last == last && next != last {
                prefix.push(next);
                out[prefix.len()].push(prefix.clone());
                extend_chains(full, prefix, out);
                prefix.pop();
            }
            next += 1;
        }
    }
    for first in 1..=full {
        let mut prefix = vec![first];
        chains_by_len[1].push(prefix.clone());
        extend_chains(full, &mut prefix, &mut chains_by_len);
    }
    for layer in chains_by_len.iter_mut() {
        layer.sort_unstable();
    }
    let total: usize = chains_by_len.iter().map(|l| l.len() * verts).sum();
    if total > opts.max_cells {
        return Err(Error::unsupported(format!(
            "staircase triangulation needs {total} cells (cap {}; set MIRRORK_MAX_CELLS to raise)",
            opts.max_cells
        )));
    }

    let vertex_coords: Vec<Vec<Coord>> = (0..verts)
        .map(|v| (0..n).map(|d| half(((v >> d) & 1) as i64)).collect())
        .collect();

    // Pack a cell key: base byte then chain mask bytes.
    let pack = |base: u32, chain: &[u32]| -> u128 {
        let mut k = base as u128;
        for (i, &m) in chain.iter().enumerate() {
            k |= (m as u128) << (8 * (i + 1));
        }
        k | ((chain.len() as u128) << 120)
    };

    // Cell enumeration: degree p, ordered by (chain, base).
    let mut index: Vec<HashMap<u128, u32>> = vec![HashMap::new(); n + 1];
    let mut layout: Vec<Vec<(u32, Vec<u32>)>> = vec![Vec::new(); n + 1];
    for p in 0..=n {
        for chain in &chains_by_len[p] {
            for base in 0..verts as u32 {
                let id = layout[p].len() as u32;
                index[p].insert(pack(base, chain), id);
                layout[p].push((base, chain.clone()));
            }
        }
    }

    // Degree 0 must align cell index with vertex id: chains_by_len[0] has the
    // single empty chain, so the id of (base, []) is `base` itself.

    let vertex_ids = |base: u32, chain: &[u32]| -> Vec<u32> {
        let mut ids = Vec::with_capacity(chain.len() + 1);
        ids.push(base);
        for &m in chain {
            ids.push(base ^ m);
        }
        ids
    };

    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(n + 1);
    for p in 0..=n {
        let mut layer = Vec::with_capacity(layout[p].len());
        for (base, chain) in &layout[p] {
            let raw_ids = vertex_ids(*base, chain);
            let mut vs = raw_ids.clone();
            vs.sort_unstable();

            let mut boundary = Vec::with_capacity(p + 1);
            if p > 0 {
                // position of each chain point in the sorted id order
                for drop in 0..=p {
                    let dropped_id = raw_ids[drop];
                    let pos = vs.binary_search(&dropped_id).unwrap();
                    let sign = if pos % 2 == 0 { 1i8 } else { -1i8 };
                    let (fbase, fchain, shift) = if drop == 0 {
                        let s1 = chain[0];
                        let nb = base ^ s1;
                        let nc: Vec<u32> = chain[1..].iter().map(|m| m & !s1).collect();
                        let mut sh = vec![0i32; n];
                        let wrap = base & s1;
                        for d in 0..n {
                            if wrap >> d & 1 == 1 {
                                sh[d] = 1;
                            }
                        }
                        (nb, nc, sh)
                    } else {
                        let nc: Vec<u32> = chain
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != drop - 1)
                            .map(|(_, &m)| m)
                            .collect();
                        (*base, nc, vec![0i32; n])
                    };
                    let face = *index[p - 1]
                        .get(&pack(fbase, &fchain))
                        .ok_or_else(|| Error::internal("staircase face missing"))?;
                    boundary.push(BoundaryEntry {
                        face,
                        sign,
                        shift,
                    });
                }
            }

            let barycenter: Vec<Coord> = (0..n)
                .map(|d| {
                    let hits = chain.iter().filter(|&&m| m >> d & 1 == 1).count() as i64;
                    half(((base >> d) & 1) as i64) + Coord::new(hits, 2 * (p as i64 + 1))
                })
                .collect();

            layer.push(Cell {
                vertices: vs,
                boundary,
                stabilizer: vec![],
                barycenter,
            });
        }
        cells.push(layer);
    }

    // Action: plain permutations only.
    let mono = monomial_data(lat);
    let permute_bits = |bits: u32, data: &[(usize, i8)]| -> u32 {
        let mut out = 0u32;
        for (c, &(r, _)) in data.iter().enumerate() {
            out |= ((bits >> c) & 1) << r;
        }
        out
    };
    let mut action = Vec::with_capacity(lat.group().order());
    for g in lat.group().elements() {
        let data = &mono[g as usize];
        let mut per_deg = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let mut layer = Vec::with_capacity(layout[p].len());
            for (base, chain) in &layout[p] {
                let nb = permute_bits(*base, data);
                let nc: Vec<u32> = chain.iter().map(|&m| permute_bits(m, data)).collect();
                let img = *index[p]
                    .get(&pack(nb, &nc))
                    .ok_or_else(|| Error::internal("staircase action image missing"))?;
                // Orientation: parity of the sorted-vertex correspondence.
                let src = {
                    let mut v = vertex_ids(*base, chain);
                    v.sort_unstable();
                    v
                };
                let mapped: Vec<u32> = src.iter().map(|&v| permute_bits(v, data)).collect();
                layer.push((img, sort_parity(&mapped)));
            }
            per_deg.push(layer);
        }
        action.push(per_deg);
    }

    Ok(RawComplex {
        vertex_coords,
        cells,
        action,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{build_complex, fixed_subcomplex, Backend, BuildOptions};
    use crate::exactalg::{AbGroup, IntMatrix};
    use crate::glattice::{
        induced_lattice, norm_one_lattice, regular_lattice, FiniteGroup, GLattice, Subgroup,
    };

    fn sign_lattice() -> GLattice {
        GLattice::new(
            1,
            FiniteGroup::cyclic(2),
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap()
    }

    fn split(n: usize) -> GLattice {
        GLattice::new(n, FiniteGroup::trivial(), vec![IntMatrix::identity(n)]).unwrap()
    }

    fn opts(backend: Backend) -> BuildOptions {
        BuildOptions {
            backend,
            ..Default::default()
        }
    }

    #[test]
    fn sign_complex_matches_reflection_circle() {
        let x = build_complex(&sign_lattice(), &opts(Backend::Cubical)).unwrap();
        // Two fixed vertices at 0 and ½, two edges swapped by the action.
        assert_eq!(x.cells(0).len(), 2);
        assert_eq!(x.cells(1).len(), 2);
        assert_eq!(x.subdivisions(), 0);
        assert_eq!(x.cells(0)[0].stabilizer.len(), 2);
        assert_eq!(x.cells(0)[1].stabilizer.len(), 2);
        assert_eq!(x.cells(1)[0].stabilizer.len(), 1);
        let (img, _) = x.action(1, 1, 0);
        assert_eq!(img, 1, "the reflection swaps the two edges");
    }

    #[test]
    fn split1_half_grid_circle() {
        let x = build_complex(&split(1), &opts(Backend::Cubical)).unwrap();
        assert_eq!(x.cells(0).len(), 2);
        assert_eq!(x.cells(1).len(), 2);
        let h = x.underlying_homology();
        assert_eq!(h, vec![AbGroup::free(1), AbGroup::free(1)]);
    }

    #[test]
    fn split_n_underlying_homology_is_binomial() {
        for n in 1..=3 {
            let x = build_complex(&split(n), &opts(Backend::Cubical)).unwrap();
            let h = x.underlying_homology();
            for (p, hp) in h.iter().enumerate() {
                let mut binom = 1usize;
                for i in 0..p {
                    binom = binom * (n - i) / (i + 1);
                }
                assert_eq!(hp, &AbGroup::free(binom), "H_{p} of the {n}-torus");
            }
        }
    }

    #[test]
    fn swap_lattice_needs_staircase_and_has_diagonal_fixed_circle() {
        let lat = regular_lattice(&FiniteGroup::cyclic(2));
        let x = build_complex(&lat, &opts(Backend::Cubical)).unwrap();
        // 4 vertices, 12 edges, 8 triangles.
        assert_eq!(x.cells(0).len(), 4);
        assert_eq!(x.cells(1).len(), 12);
        assert_eq!(x.cells(2).len(), 8);
        let h = x.underlying_homology();
        assert_eq!(
            h,
            vec![AbGroup::free(1), AbGroup::free(2), AbGroup::free(1)]
        );
        // Fixed subcomplex of the swap: the diagonal circle, one component.
        let full = Subgroup::full(lat.group());
        let fixed = fixed_subcomplex(&x, &full).unwrap();
        assert_eq!(fixed.component_count, 1);
        assert_eq!(fixed.components[0].1, 1, "diagonal circle has dimension 1");
    }

    #[test]
    fn sign_plus_sign_is_regular_unsubdivided() {
        let s = sign_lattice();
        let lat = s.direct_sum(&s).unwrap();
        let x = build_complex(&lat, &opts(Backend::Cubical)).unwrap();
        assert_eq!(x.num_cells(), 16);
        // Four isolated fixed vertices under -I.
        let fixed = fixed_subcomplex(&x, &Subgroup::full(lat.group())).unwrap();
        assert_eq!(fixed.component_count, 4);
        assert!(fixed.components.iter().all(|&(_, d)| d == 0));
    }

    #[test]
    fn s3_coset_lattice_staircase() {
        let g = FiniteGroup::symmetric(3);
        let classes = crate::glattice::enumerate_subgroups(&g).unwrap();
        let lat = induced_lattice(&g, &classes[1].representative).unwrap();
        let x = build_complex(&lat, &opts(Backend::Cubical)).unwrap();
        // Rank-3 staircase: 8 bases x 26 chains (1 empty, 7 singleton,
        // 12 doubled, 6 full).
        assert_eq!(x.num_cells(), 208);
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

    #[test]
    fn cubical_rejects_non_monomial() {
        let lat = norm_one_lattice(&FiniteGroup::cyclic(3));
        let err = build_complex(&lat, &opts(Backend::Cubical)).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn rank_zero_is_a_point() {
        let g = FiniteGroup::cyclic(2);
        let lat = GLattice::new(0, g, vec![IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)]).unwrap();
        let x = build_complex(&lat, &opts(Backend::Cubical)).unwrap();
        assert_eq!(x.num_cells(), 1);
        assert_eq!(x.underlying_homology(), vec![AbGroup::free(1)]);
    }
}
