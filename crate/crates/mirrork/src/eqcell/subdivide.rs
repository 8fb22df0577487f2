//! Barycentric subdivision of a (CW-regular) complex.
//!
//! New cells are the chains σ₀ ⊂ σ₁ ⊂ … in the full face poset (dimension
//! gaps allowed); new vertices are the barycenters of the old cells. Exact
//! positions are tracked through the boundary translation data, so the
//! subdivision has correct geometry even for cells straddling the
//! fundamental domain.

use super::{BoundaryEntry, Cell, Coord, RawComplex};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Full face closure of each cell: (degree, index, shift into this cell's
/// frame), deduplicated.
fn face_closures(raw: &RawComplex) -> Vec<Vec<Vec<(usize, u32, Vec<i32>)>>> {
    let n_deg = raw.cells.len();
    let mut closures: Vec<Vec<Vec<(usize, u32, Vec<i32>)>>> = Vec::with_capacity(n_deg);
    for p in 0..n_deg {
        let mut layer = Vec::with_capacity(raw.cells[p].len());
        for cell in &raw.cells[p] {
            let mut acc: HashMap<(usize, u32), Vec<i32>> = HashMap::new();
            for b in &cell.boundary {
                acc.entry((p - 1, b.face)).or_insert_with(|| b.shift.clone());
                // Faces of faces, translated into our frame.
                for (fd, fi, fs) in &closures[p - 1][b.face as usize] {
                    let total: Vec<i32> = fs.iter().zip(&b.shift).map(|(a, c)| a + c).collect();
                    acc.entry((*fd, *fi)).or_insert(total);
                }
            }
            let mut v: Vec<(usize, u32, Vec<i32>)> =
                acc.into_iter().map(|((d, i), s)| (d, i, s)).collect();
            v.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
            layer.push(v);
        }
        closures.push(layer);
    }
    closures
}

pub(crate) fn barycentric(raw: &RawComplex, dim: usize, max_cells: usize) -> Result<RawComplex> {
    let n_deg = raw.cells.len();
    let closures = face_closures(raw);

    // Size guard: chains ending at each cell.
    let mut count: Vec<Vec<u64>> = Vec::with_capacity(n_deg);
    let mut total: u64 = 0;
    for p in 0..n_deg {
        let mut layer = vec![0u64; raw.cells[p].len()];
        for ci in 0..raw.cells[p].len() {
            let mut c = 1u64;
            for (fd, fi, _) in &closures[p][ci] {
                c = c.saturating_add(count[*fd][*fi as usize]);
            }
            layer[ci] = c;
            total = total.saturating_add(c);
        }
        count.push(layer);
    }
    if total as usize > max_cells {
        return Err(Error::unsupported(format!(
            "barycentric subdivision would need {total} cells (cap {max_cells}; set MIRRORK_MAX_CELLS to raise)"
        )));
    }

    // Flat ids for parent cells, degree-major; these are the new vertex ids.
    let mut offset = vec![0u32; n_deg + 1];
    for p in 0..n_deg {
        offset[p + 1] = offset[p] + raw.cells[p].len() as u32;
    }
    let flat = |p: usize, c: u32| offset[p] + c;

    let mut vertex_coords = Vec::with_capacity(offset[n_deg] as usize);
    for layer in &raw.cells {
        for cell in layer {
            vertex_coords.push(cell.barycenter.clone());
        }
    }

    // Chains descending from each top cell through the face closure. Each
    // chain is recorded with exact member positions in the top's frame.
    struct NewCell {
        chain: Vec<(usize, u32)>,
        positions: Vec<Vec<Coord>>,
    }
    let mut new_cells: Vec<Vec<NewCell>> = (0..n_deg).map(|_| Vec::new()).collect();
    let mut index: Vec<HashMap<Vec<u32>, u32>> = (0..n_deg).map(|_| HashMap::new()).collect();
    let mut canon_shift: Vec<Vec<Vec<i64>>> = (0..n_deg).map(|_| Vec::new()).collect();

    let zero = vec![0i32; dim];
    for p in 0..n_deg {
        for ci in 0..raw.cells[p].len() as u32 {
            // Stack entries: (chain so far descending, last member's closure pos)
            let mut chain: Vec<(usize, u32, Vec<i32>)> = vec![(p, ci, zero.clone())];
            emit_chains(raw, &closures, &mut chain, &mut |chain| {
                let deg = chain.len() - 1;
                // Ascending order: reverse the descending chain.
                let members: Vec<(usize, u32)> =
                    chain.iter().rev().map(|&(d, i, _)| (d, i)).collect();
                let positions: Vec<Vec<Coord>> = chain
                    .iter()
                    .rev()
                    .map(|(d, i, s)| {
                        raw.cells[*d][*i as usize]
                            .barycenter
                            .iter()
                            .zip(s)
                            .map(|(b, sh)| b + Coord::from_integer(*sh as i64))
                            .collect()
                    })
                    .collect();
                let key: Vec<u32> = members.iter().map(|&(d, i)| flat(d, i)).collect();
                let id = new_cells[deg].len() as u32;
                index[deg].insert(key, id);
                new_cells[deg].push(NewCell {
                    chain: members,
                    positions,
                });
            });
        }
    }

    // Assemble cells: barycenters and canonicalization shifts.
    let mut cells: Vec<Vec<Cell>> = Vec::with_capacity(n_deg);
    for deg in 0..n_deg {
        let mut layer = Vec::with_capacity(new_cells[deg].len());
        let mut shifts_layer = Vec::with_capacity(new_cells[deg].len());
        for nc in &new_cells[deg] {
            let k = nc.chain.len() as i64;
            let mut avg = vec![Coord::from_integer(0); dim];
            for pos in &nc.positions {
                for (a, x) in avg.iter_mut().zip(pos) {
                    *a += x;
                }
            }
            for a in avg.iter_mut() {
                *a /= Coord::from_integer(k);
            }
            let shift: Vec<i64> = avg.iter().map(|a| a.floor().to_integer()).collect();
            let barycenter: Vec<Coord> = avg
                .iter()
                .zip(&shift)
                .map(|(a, s)| a - Coord::from_integer(*s))
                .collect();
            let vertices: Vec<u32> = nc.chain.iter().map(|&(d, i)| flat(d, i)).collect();
            debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
            layer.push(Cell {
                vertices,
                boundary: Vec::new(),
                stabilizer: Vec::new(),
                barycenter,
            });
            shifts_layer.push(shift);
        }
        canon_shift[deg] = shifts_layer;
        cells.push(layer);
    }

    // Boundaries: drop one chain member; sign by position.
    for deg in 1..n_deg {
        for i in 0..new_cells[deg].len() {
            let chain = &new_cells[deg][i].chain;
            let positions = &new_cells[deg][i].positions;
            let own_shift = &canon_shift[deg][i];
            let mut boundary = Vec::with_capacity(chain.len());
            for drop in 0..chain.len() {
                let sub_key: Vec<u32> = chain
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != drop)
                    .map(|(_, &(d, c))| flat(d, c))
                    .collect();
                let face_deg = deg - 1;
                let face_id = *index[face_deg]
                    .get(&sub_key)
                    .ok_or_else(|| Error::internal("subdivision face missing"))?;
                // Face barycenter in OUR raw frame.
                let mut favg = vec![Coord::from_integer(0); dim];
                for (j, pos) in positions.iter().enumerate() {
                    if j != drop {
                        for (a, x) in favg.iter_mut().zip(pos) {
                            *a += x;
                        }
                    }
                }
                for a in favg.iter_mut() {
                    *a /= Coord::from_integer((chain.len() - 1) as i64);
                }
                let face_bary = &cells[face_deg][face_id as usize].barycenter;
                let shift: Vec<i32> = favg
                    .iter()
                    .zip(face_bary)
                    .zip(own_shift)
                    .map(|((a, b), own)| {
                        let d = a - b - Coord::from_integer(*own);
                        debug_assert!(d.is_integer(), "face frame offset must be integral");
                        d.to_integer() as i32
                    })
                    .collect();
                boundary.push(BoundaryEntry {
                    face: face_id,
                    sign: if drop % 2 == 0 { 1 } else { -1 },
                    shift,
                });
            }
            cells[deg][i].boundary = boundary;
        }
    }

    // Action: chains map memberwise; degree order is preserved so the
    // orientation sign is +1 throughout.
    let n_elems = raw.action.len();
    let mut action: Vec<Vec<Vec<(u32, i8)>>> = Vec::with_capacity(n_elems);
    for g in 0..n_elems {
        let mut per_deg = Vec::with_capacity(n_deg);
        for deg in 0..n_deg {
            let mut layer = Vec::with_capacity(new_cells[deg].len());
            for nc in &new_cells[deg] {
                let key: Vec<u32> = nc
                    .chain
                    .iter()
                    .map(|&(dp, dc)| flat(dp, raw.action[g][dp][dc as usize].0))
                    .collect();
                let img = *index[deg]
                    .get(&key)
                    .ok_or_else(|| Error::internal("subdivision action image missing"))?;
                layer.push((img, 1i8));
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

/// Emit every descending chain starting at the stack's current contents
/// (the last entry is the current bottom). Shifts are relative to the chain
/// top's frame.
fn emit_chains(
    raw: &RawComplex,
    closures: &[Vec<Vec<(usize, u32, Vec<i32>)>>],
    chain: &mut Vec<(usize, u32, Vec<i32>)>,
    out: &mut impl FnMut(&[(usize, u32, Vec<i32>)]),
) {
    out(chain);
    let (bd, bi, bshift) = chain.last().cloned().unwrap();
    for (fd, fi, fs) in &closures[bd][bi as usize] {
        let total: Vec<i32> = fs.iter().zip(&bshift).map(|(a, b)| a + b).collect();
        chain.push((*fd, *fi, total));
        emit_chains(raw, closures, chain, out);
        chain.pop();
    }
}
