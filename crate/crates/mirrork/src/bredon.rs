//! Bredon homology of equivariant cell complexes with covariant orbit
//! coefficients, and two independent presentations of the degree-zero group:
//! the coend presentation from fixed-point components and the
//! Merkurjev–Panin presentation from first cohomology. All three computations
//! of `H₀` land in the same group and cross-check each other.
//!
//! The chain group in degree p is the direct sum of the coefficient objects
//! at the stabilizer classes of the p-cell orbits. A face τ of an orbit
//! representative σ contributes its incidence sign, the conjugation by the
//! deterministic transporter carrying τ to its own orbit representative, and
//! the transfer along the stabilizer inclusion.

use crate::eqcell::{fixed_subcomplex, EquivariantCellComplex};
use crate::error::{Error, Result};
use crate::exactalg::sparse::{sparse_smith, SparseMat};
use crate::exactalg::{
    column_span_basis, group_from_presentation, kernel_basis, solve_matrix, AbGroup, Int,
    IntMatrix,
};
use crate::glattice::{Elem, FiniteGroup, GLattice, Subgroup};
use crate::groupcoh::H1Cache;
use std::collections::HashMap;

/// A covariant coefficient system on the orbit category, evaluated on the
/// subgroup conjugacy classes of a fixed group (in `enumerate_subgroups`
/// order).
pub trait OrbitCoefficients {
    fn objects(&self) -> &[AbGroup];

    /// The value of the functor on the orbit-category morphism
    /// `G/H_from → G/H_to` sending the base coset to `g·H_to`
    /// (requires `g⁻¹ H_from g ⊆ H_to`). Rows index the target object's
    /// generators.
    fn morphism(&self, from: usize, to: usize, g: Elem) -> Result<IntMatrix>;
}

/// The constant Mackey functor ℤ̲, covariant part: every object is ℤ and the
/// projection `G/K → G/H` maps to multiplication by the index `[H:K]`.
pub struct ConstantZ {
    objects: Vec<AbGroup>,
    orders: Vec<usize>,
}

/// Constant coefficients for the given group.
pub fn constant_z(group: &FiniteGroup) -> Result<ConstantZ> {
    let classes = crate::glattice::enumerate_subgroups(group)?;
    Ok(ConstantZ {
        objects: vec![AbGroup::free(1); classes.len()],
        orders: classes.iter().map(|c| c.representative.order()).collect(),
    })
}

impl OrbitCoefficients for ConstantZ {
    fn objects(&self) -> &[AbGroup] {
        &self.objects
    }

    fn morphism(&self, from: usize, to: usize, _g: Elem) -> Result<IntMatrix> {
        if self.orders[to] % self.orders[from] != 0 {
            return Err(Error::internal(
                "no orbit morphism: source stabilizer larger than target",
            ));
        }
        let index = (self.orders[to] / self.orders[from]) as i64;
        Ok(IntMatrix::from_rows(&[vec![index]]))
    }
}

/// The chains of a complex with covariant coefficients, as presented groups
/// with lifted boundary matrices. Boundaries are held sparsely; complexes
/// get big while the matrices stay mostly empty.
pub struct BredonChainComplex {
    /// Per degree: (orbit representative cell, stabilizer class index).
    pub generators: Vec<Vec<(u32, usize)>>,
    /// Per degree: offset of each orbit block in the coordinate vector.
    pub offsets: Vec<Vec<usize>>,
    /// Per degree: total generator coordinates.
    pub dims: Vec<usize>,
    /// Per degree: relation columns (torsion generators scaled by their
    /// invariant factor).
    pub relations: Vec<IntMatrix>,
    /// boundaries[p−1]: C_p → C_{p−1} as sorted (row, col, value) triplets.
    pub boundaries: Vec<Vec<(u32, u32, Int)>>,
    all_free: bool,
}

impl BredonChainComplex {
    pub fn boundary_sparse(&self, p: usize) -> SparseMat {
        let mut m = SparseMat::new(self.dims[p - 1], self.dims[p]);
        for (r, c, v) in &self.boundaries[p - 1] {
            m.add_entry(*r as usize, *c as usize, v.clone());
        }
        m
    }

    /// Dense view for the presented (torsion-coefficient) path; those runs
    /// stay small, and the guard keeps an oversized request from thrashing.
    pub fn boundary_dense(&self, p: usize) -> Result<IntMatrix> {
        let (rows, cols) = (self.dims[p - 1], self.dims[p]);
        if rows.saturating_mul(cols) > 25_000_000 {
            return Err(Error::unsupported(
                "chain groups too large for the dense presented-homology path",
            ));
        }
        let mut m = IntMatrix::zeros(rows, cols);
        for (r, c, v) in &self.boundaries[p - 1] {
            m.set(*r as usize, *c as usize, v.clone());
        }
        Ok(m)
    }
}

/// Assemble the Bredon chain complex of a regular complex.
pub fn chain_complex(
    x: &EquivariantCellComplex,
    coeffs: &dyn OrbitCoefficients,
) -> Result<BredonChainComplex> {
    let n_deg = x.dimension() + 1;
    let objects = coeffs.objects();
    if objects.len() != x.classes().len() {
        return Err(Error::validation(
            "coefficient system does not cover the subgroup classes of the complex",
        ));
    }
    let group = x.lattice().group();

    let mut generators = Vec::with_capacity(n_deg);
    let mut offsets = Vec::with_capacity(n_deg);
    let mut dims = Vec::with_capacity(n_deg);
    let mut relations = Vec::with_capacity(n_deg);
    // map: rep cell -> block position, per degree
    let mut block_of: Vec<HashMap<u32, usize>> = Vec::with_capacity(n_deg);

    for p in 0..n_deg {
        let reps = x.orbit_reps(p);
        let mut gens = Vec::with_capacity(reps.len());
        let mut offs = Vec::with_capacity(reps.len());
        let mut dim = 0usize;
        let mut rel_cols: Vec<Vec<Int>> = Vec::new();
        let mut map = HashMap::new();
        for (bi, &rep) in reps.iter().enumerate() {
            let class = x.class_of_cell(p, rep as usize);
            gens.push((rep, class));
            offs.push(dim);
            map.insert(rep, bi);
            let obj = &objects[class];
            for (k, d) in obj.torsion().iter().enumerate() {
                let mut col = vec![Int::zero(); 0];
                // fill later once dim is final; record (position, factor)
                col.push(Int::from(dim as i64 + k as i64)); // placeholder
                col.push(d.clone());
                rel_cols.push(col);
            }
            dim += obj.num_generators();
        }
        let mut rel = IntMatrix::zeros(dim, rel_cols.len());
        for (j, col) in rel_cols.iter().enumerate() {
            let pos = col[0].to_i64().unwrap() as usize;
            rel.set(pos, j, col[1].clone());
        }
        generators.push(gens);
        offsets.push(offs);
        dims.push(dim);
        relations.push(rel);
        block_of.push(map);
    }

    let mut boundaries = Vec::with_capacity(n_deg);
    for p in 1..n_deg {
        let mut acc: HashMap<(u32, u32), Int> = HashMap::new();
        for (bi, &(rep, class_i)) in generators[p].iter().enumerate() {
            let col_off = offsets[p][bi];
            let cell = &x.cells(p)[rep as usize];
            for b in &cell.boundary {
                let oi = x.orbit(p - 1, b.face as usize);
                let target_block = block_of[p - 1][&oi.rep];
                let class_j = generators[p - 1][target_block].1;
                let row_off = offsets[p - 1][target_block];
                let a_inv = group.inv(oi.transporter);
                let m = coeffs.morphism(class_i, class_j, a_inv)?;
                let scale = Int::from((b.sign as i64) * (oi.sign as i64));
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let v = m.get(r, c);
                        if v.is_zero() {
                            continue;
                        }
                        let key = ((row_off + r) as u32, (col_off + c) as u32);
                        let cur = acc.remove(&key).unwrap_or_else(Int::zero);
                        let nv = cur.add(&v.mul(&scale));
                        if !nv.is_zero() {
                            acc.insert(key, nv);
                        }
                    }
                }
            }
        }
        let mut triplets: Vec<(u32, u32, Int)> =
            acc.into_iter().map(|((r, c), v)| (r, c, v)).collect();
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        boundaries.push(triplets);
    }

    let all_free = objects.iter().all(|o| o.torsion().is_empty());
    Ok(BredonChainComplex {
        generators,
        offsets,
        dims,
        relations,
        boundaries,
        all_free,
    })
}

/// Homology of the presented chain complex, degree by degree.
pub fn homology(c: &BredonChainComplex) -> Result<Vec<AbGroup>> {
    if c.all_free {
        return Ok(homology_free(c));
    }
    homology_presented(c)
}

/// Degree zero only: the cokernel of the first boundary map. This is the
/// K₀ route and avoids reducing the large higher boundary matrices.
pub fn homology_h0(c: &BredonChainComplex) -> Result<AbGroup> {
    if c.all_free {
        if c.dims.len() == 1 {
            return Ok(AbGroup::free(c.dims[0]));
        }
        let s = sparse_smith(c.boundary_sparse(1));
        return Ok(AbGroup::new(c.dims[0] - s.rank, s.torsion).expect("smith chain"));
    }
    Ok(homology_presented(c)?[0].clone())
}

/// Free chain groups: ranks and torsion come straight from Smith reductions
/// of the boundary matrices, sparsely.
fn homology_free(c: &BredonChainComplex) -> Vec<AbGroup> {
    let n_deg = c.dims.len();
    let mut ranks = vec![0usize; n_deg + 1];
    let mut torsions: Vec<Vec<Int>> = vec![vec![]; n_deg + 1];
    for p in 1..n_deg {
        let s = sparse_smith(c.boundary_sparse(p));
        ranks[p] = s.rank;
        torsions[p] = s.torsion;
    }
    (0..n_deg)
        .map(|p| {
            let free = c.dims[p] - ranks[p] - ranks[p + 1];
            AbGroup::new(free, torsions[p + 1].clone()).expect("smith chain")
        })
        .collect()
}

/// General case: chain groups are presented; kernels are computed on free
/// lifts and the homology is presented on a basis of the lifted cycles.
fn homology_presented(c: &BredonChainComplex) -> Result<Vec<AbGroup>> {
    let n_deg = c.dims.len();
    (0..n_deg)
        .map(|p| {
            let n_p = c.dims[p];
            // Lifted cycles: x with D_p·x in the span of the (p−1)-relations.
            let cycle_basis = if p == 0 {
                IntMatrix::identity(n_p)
            } else {
                let stacked = c.boundary_dense(p)?.hstack(&c.relations[p - 1]);
                let ker = kernel_basis(&stacked);
                let top = ker.submatrix_rows(0..n_p);
                column_span_basis(&top)
            };
            // Image: boundaries from above plus this degree's relations.
            let img = if p + 1 < n_deg {
                c.boundary_dense(p + 1)?.hstack(&c.relations[p])
            } else {
                IntMatrix::zeros(n_p, 0).hstack(&c.relations[p])
            };
            let coords = solve_matrix(&cycle_basis, &img)
                .expect("boundaries and relations are cycles");
            Ok(group_from_presentation(
                cycle_basis.cols(),
                &coords.transpose(),
            ))
        })
        .collect()
}

/// A group given with an explicit generator/relation presentation, kept for
/// printing next to the normal form.
pub struct K0Presentation {
    pub group: AbGroup,
    pub generator_labels: Vec<String>,
    /// Rows are relations over the labelled generators.
    pub relations: IntMatrix,
}

/// The coend presentation of `H₀`: one generator per fixed-point component
/// of each subgroup class, transfer relations along subgroup inclusions and
/// Weyl-conjugation identifications.
pub fn coend_h0(x: &EquivariantCellComplex, lat: &GLattice) -> Result<K0Presentation> {
    if lat.group() != x.lattice().group() || lat.rank() != x.lattice().rank() {
        return Err(Error::validation("complex was not built from this lattice"));
    }
    let group = lat.group();
    let classes = x.classes();

    // Fixed subcomplex data per class.
    let fixed: Vec<_> = classes
        .iter()
        .map(|cl| fixed_subcomplex(x, &cl.representative))
        .collect::<Result<Vec<_>>>()?;

    // Generators: per class, components ordered by smallest vertex id.
    let mut offsets = Vec::with_capacity(classes.len());
    let mut labels = Vec::new();
    let mut total = 0usize;
    for (i, f) in fixed.iter().enumerate() {
        offsets.push(total);
        for (ci, &(minv, _)) in f.components.iter().enumerate() {
            labels.push(format!("[H{i}·c{ci}@v{minv}]"));
        }
        total += f.components.len();
    }

    let mut relations: Vec<Vec<Int>> = Vec::new();
    let mut push_relation = |v: Vec<Int>| {
        if v.iter().any(|x| !x.is_zero()) {
            relations.push(v);
        }
    };

    // Transfer relations along every proper subgroup of each representative.
    for (i, class) in classes.iter().enumerate() {
        let h = &class.representative;
        for k_elems in subgroups_of(group, h) {
            if k_elems.len() == h.order() {
                continue;
            }
            let k = Subgroup::from_sorted_unchecked(k_elems);
            // Class of K and its canonical transporter to the class rep.
            let (j, a) = classify(group, classes, &k)?;
            let index = (h.order() / k.order()) as i64;
            for (ci, &(minv, _)) in fixed[i].components.iter().enumerate() {
                // Component of the image vertex in X^{rep_j}: transport by a.
                let moved = x.action(a, 0, minv as usize).0;
                let target_comp = *fixed[j]
                    .component_of_vertex
                    .get(&moved)
                    .ok_or_else(|| Error::internal("transported vertex not fixed"))?;
                let mut rel = vec![Int::zero(); total];
                rel[offsets[i] + ci] = rel[offsets[i] + ci].add(&Int::from(index));
                rel[offsets[j] + target_comp] =
                    rel[offsets[j] + target_comp].sub(&Int::one());
                push_relation(rel);
            }
        }
    }

    // Weyl identifications: the normalizer permutes the components.
    for (i, class) in classes.iter().enumerate() {
        for &w in class.normalizer.elements() {
            for (ci, &(minv, _)) in fixed[i].components.iter().enumerate() {
                let moved = x.action(w, 0, minv as usize).0;
                let target = *fixed[i]
                    .component_of_vertex
                    .get(&moved)
                    .ok_or_else(|| Error::internal("normalizer moved vertex off X^H"))?;
                if target != ci {
                    let mut rel = vec![Int::zero(); total];
                    rel[offsets[i] + ci] = Int::one();
                    rel[offsets[i] + target] = Int::from(-1);
                    push_relation(rel);
                }
            }
        }
    }

    let rel_matrix = rows_to_matrix(total, &relations);
    Ok(K0Presentation {
        group: group_from_presentation(total, &rel_matrix),
        generator_labels: labels,
        relations: rel_matrix,
    })
}

/// The Merkurjev–Panin presentation of `K₀` of the torus: generators are the
/// elements of `H¹(H, Λ)` over each subgroup class (line bundles over each
/// intermediate field), relations are index-weighted restrictions and Weyl
/// identifications. No cell complex is involved.
pub fn mp_k0(lat: &GLattice) -> Result<K0Presentation> {
    let group = lat.group();
    let classes = crate::glattice::enumerate_subgroups(group)?;
    let mut cache = H1Cache::new(lat);

    // Element lists per class.
    let mut elements: Vec<Vec<Vec<Int>>> = Vec::with_capacity(classes.len());
    let mut elem_index: Vec<HashMap<Vec<i64>, usize>> = Vec::with_capacity(classes.len());
    for class in &classes {
        let res = cache.get(&class.representative)?;
        if !res.group.is_finite() {
            return Err(Error::internal("H¹ of a finite group must be finite"));
        }
        let elems = res.group.elements()?;
        let idx = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (int_vec_small(e), i))
            .collect();
        elements.push(elems);
        elem_index.push(idx);
    }

    let mut offsets = Vec::with_capacity(classes.len());
    let mut labels = Vec::new();
    let mut total = 0usize;
    for (i, elems) in elements.iter().enumerate() {
        offsets.push(total);
        for (k, e) in elems.iter().enumerate() {
            let coords: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            let _ = k;
            labels.push(format!("[H{i}·L({})]", coords.join(",")));
        }
        total += elems.len();
    }

    let mut relations: Vec<Vec<Int>> = Vec::new();
    let mut push_relation = |v: Vec<Int>| {
        if v.iter().any(|x| !x.is_zero()) {
            relations.push(v);
        }
    };

    for (i, class) in classes.iter().enumerate() {
        let h = &class.representative;
        let h_res = cache.get(h)?;
        for k_elems in subgroups_of(group, h) {
            if k_elems.len() == h.order() {
                continue;
            }
            let k = Subgroup::from_sorted_unchecked(k_elems);
            let (j, a) = classify(group, &classes, &k)?;
            // res: H¹(H) → H¹(K), then conjugate K onto its class rep.
            let res = cache.restriction(&k, h)?;
            let (target_sub, conj) = cache.conjugation(&k, a)?;
            debug_assert_eq!(
                target_sub.elements(),
                classes[j].representative.elements()
            );
            let map = conj.mul(&res);
            let target_group = cache.get(&classes[j].representative)?.group.clone();
            let index = (h.order() / k.order()) as i64;
            for (li, l) in elements[i].iter().enumerate() {
                let image = target_group.reduce(&map.mul_vec(l));
                let ti = *elem_index[j]
                    .get(&int_vec_small(&image))
                    .ok_or_else(|| Error::internal("restricted class not found"))?;
                let mut rel = vec![Int::zero(); total];
                rel[offsets[i] + li] = Int::from(index);
                rel[offsets[j] + ti] = rel[offsets[j] + ti].sub(&Int::one());
                push_relation(rel);
            }
        }
        let _ = h_res;
    }

    // Weyl identifications on each class.
    for (i, class) in classes.iter().enumerate() {
        let h = &class.representative;
        let h_group = cache.get(h)?.group.clone();
        for &w in class.normalizer.elements() {
            let (target_sub, conj) = cache.conjugation(h, w)?;
            debug_assert_eq!(target_sub.elements(), h.elements());
            for (li, l) in elements[i].iter().enumerate() {
                let image = h_group.reduce(&conj.mul_vec(l));
                let ti = *elem_index[i]
                    .get(&int_vec_small(&image))
                    .ok_or_else(|| Error::internal("conjugated class not found"))?;
                if ti != li {
                    let mut rel = vec![Int::zero(); total];
                    rel[offsets[i] + li] = Int::one();
                    rel[offsets[i] + ti] = Int::from(-1);
                    push_relation(rel);
                }
            }
        }
    }

    let rel_matrix = rows_to_matrix(total, &relations);
    Ok(K0Presentation {
        group: group_from_presentation(total, &rel_matrix),
        generator_labels: labels,
        relations: rel_matrix,
    })
}

/// Chain route, coend route and cohomological route to `K₀` with an
/// agreement verdict.
pub struct K0Report {
    pub chain_h0: AbGroup,
    pub coend: K0Presentation,
    pub merkurjev_panin: K0Presentation,
    pub agree: bool,
}

pub fn k0_report(x: &EquivariantCellComplex, lat: &GLattice) -> Result<K0Report> {
    let coeffs = constant_z(lat.group())?;
    let chains = chain_complex(x, &coeffs)?;
    let chain_h0 = homology_h0(&chains)?;
    let coend = coend_h0(x, lat)?;
    let mp = mp_k0(lat)?;
    let agree = chain_h0 == coend.group && coend.group == mp.group;
    Ok(K0Report {
        chain_h0,
        coend,
        merkurjev_panin: mp,
        agree,
    })
}

fn int_vec_small(v: &[Int]) -> Vec<i64> {
    v.iter()
        .map(|x| x.to_i64().expect("coordinates fit i64"))
        .collect()
}

fn rows_to_matrix(cols: usize, rows: &[Vec<Int>]) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    m
}

/// All subgroups of `h` (as sorted element vectors): the subgroups of the
/// ambient group contained in `h`.
fn subgroups_of(group: &FiniteGroup, h: &Subgroup) -> Vec<Vec<Elem>> {
    // Enumerate subgroups of the ambient group once and filter; the ambient
    // enumeration is cached per process run by the caller's usage pattern.
    let classes = crate::glattice::enumerate_subgroups(group).expect("within cap");
    let mut out = Vec::new();
    for class in &classes {
        for conj in &class.conjugates {
            if conj.is_subgroup_of(h) {
                out.push(conj.elements().to_vec());
            }
        }
    }
    out.sort();
    out
}

/// The conjugacy class index of a subgroup and the smallest transporter onto
/// the class representative.
fn classify(
    group: &FiniteGroup,
    classes: &[crate::glattice::SubgroupClass],
    k: &Subgroup,
) -> Result<(usize, Elem)> {
    for (j, class) in classes.iter().enumerate() {
        if class.conjugates.iter().any(|c| c == k) {
            let rep = &class.representative;
            let a = group
                .elements()
                .find(|&a| &k.conjugate(group, a) == rep)
                .ok_or_else(|| Error::internal("conjugate without transporter"))?;
            return Ok((j, a));
        }
    }
    Err(Error::internal("subgroup not found in any class"))
}
