//! Mackey coefficient data for the K-theory of intermediate fields, the
//! Atiyah–Hirzebruch E² page, lacunary collapse certification, the
//! finite-field preset, and the independent rank-1 oracle after Swan.
//!
//! Mackey data here is restricted to abelian Galois groups: every subgroup
//! is its own conjugacy class representative, so restriction and transfer
//! live on honest subgroup pairs and conjugation is the Weyl action. That
//! covers every preset (finite fields have cyclic Galois groups); general
//! nonabelian coefficient data would need fusion bookkeeping the pipeline
//! never exercises.

use crate::bredon::{chain_complex, constant_z, homology, OrbitCoefficients};
use crate::eqcell::EquivariantCellComplex;
use crate::error::{Error, Result};
use crate::exactalg::{
    column_span_basis, group_from_presentation, kernel_basis, solve_matrix, AbGroup, Int,
    IntMatrix,
};
use crate::glattice::{enumerate_subgroups, Elem, FiniteGroup, SubgroupClass};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Mackey-functor data over an abelian group: one object per subgroup,
/// restriction and transfer on nested pairs, Weyl conjugation per element.
pub struct MackeyData {
    group: FiniteGroup,
    classes: Vec<SubgroupClass>,
    objects: Vec<AbGroup>,
    /// (sub, sup) -> matrix M(G/H_sup) → M(G/H_sub)
    res: HashMap<(usize, usize), IntMatrix>,
    /// (sub, sup) -> matrix M(G/H_sub) → M(G/H_sup)
    tr: HashMap<(usize, usize), IntMatrix>,
    /// conj[g][class]: the action of g on the object (abelian Weyl action)
    conj: Vec<Vec<IntMatrix>>,
}

fn is_valid_map(src: &AbGroup, dst: &AbGroup, m: &IntMatrix) -> bool {
    if m.rows() != dst.num_generators() || m.cols() != src.num_generators() {
        return false;
    }
    // Source torsion must die in the target.
    for (j, d) in src.torsion().iter().enumerate() {
        let col: Vec<Int> = m.column(j).iter().map(|x| x.mul(d)).collect();
        let reduced = dst.reduce(&col);
        if reduced.iter().any(|x| !x.is_zero()) {
            return false;
        }
    }
    true
}

/// Equality of two maps into a presented group (entrywise mod the target).
fn maps_equal(dst: &AbGroup, a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    for j in 0..a.cols() {
        let diff: Vec<Int> = a
            .column(j)
            .iter()
            .zip(b.column(j))
            .map(|(x, y)| x.sub(&y))
            .collect();
        if dst.reduce(&diff).iter().any(|x| !x.is_zero()) {
            return false;
        }
    }
    true
}

impl MackeyData {
    pub fn new(
        group: &FiniteGroup,
        objects: Vec<AbGroup>,
        res: HashMap<(usize, usize), IntMatrix>,
        tr: HashMap<(usize, usize), IntMatrix>,
        conj: Vec<Vec<IntMatrix>>,
    ) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::unsupported(
                "Mackey coefficient data is supported for abelian Galois groups only",
            ));
        }
        let classes = enumerate_subgroups(group)?;
        if objects.len() != classes.len() {
            return Err(Error::validation("one object required per subgroup class"));
        }
        let data = MackeyData {
            group: group.clone(),
            classes,
            objects,
            res,
            tr,
            conj,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn objects(&self) -> &[AbGroup] {
        &self.objects
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in 0..self.classes.len() {
            for j in 0..self.classes.len() {
                if i != j
                    && self.classes[i]
                        .representative
                        .is_subgroup_of(&self.classes[j].representative)
                {
                    v.push((i, j));
                }
            }
        }
        v
    }

    fn res_of(&self, sub: usize, sup: usize) -> Result<IntMatrix> {
        if sub == sup {
            return Ok(IntMatrix::identity(self.objects[sub].num_generators()));
        }
        self.res
            .get(&(sub, sup))
            .cloned()
            .ok_or_else(|| Error::validation(format!("missing restriction {sup} → {sub}")))
    }

    fn tr_of(&self, sub: usize, sup: usize) -> Result<IntMatrix> {
        if sub == sup {
            return Ok(IntMatrix::identity(self.objects[sub].num_generators()));
        }
        self.tr
            .get(&(sub, sup))
            .cloned()
            .ok_or_else(|| Error::validation(format!("missing transfer {sub} → {sup}")))
    }

    fn validate(&self) -> Result<()> {
        let pairs = self.comparable_pairs();
        for &(i, j) in &pairs {
            let r = self.res_of(i, j)?;
            if !is_valid_map(&self.objects[j], &self.objects[i], &r) {
                return Err(Error::validation(format!(
                    "restriction {j} → {i} is not a homomorphism of the given objects"
                )));
            }
            let t = self.tr_of(i, j)?;
            if !is_valid_map(&self.objects[i], &self.objects[j], &t) {
                return Err(Error::validation(format!(
                    "transfer {i} → {j} is not a homomorphism of the given objects"
                )));
            }
        }
        // Functoriality on nested triples.
        for &(i, j) in &pairs {
            for &(j2, k) in &pairs {
                if j2 != j {
                    continue;
                }
                let t_ij = self.tr_of(i, j)?;
                let t_jk = self.tr_of(j, k)?;
                let t_ik = self.tr_of(i, k)?;
                if !maps_equal(&self.objects[k], &t_jk.mul(&t_ij), &t_ik) {
                    return Err(Error::validation(format!(
                        "transfers not functorial on chain {i} ⊆ {j} ⊆ {k}"
                    )));
                }
                let r_ij = self.res_of(i, j)?;
                let r_jk = self.res_of(j, k)?;
                let r_ik = self.res_of(i, k)?;
                if !maps_equal(&self.objects[i], &r_ij.mul(&r_jk), &r_ik) {
                    return Err(Error::validation(format!(
                        "restrictions not functorial on chain {i} ⊆ {j} ⊆ {k}"
                    )));
                }
            }
        }
        // Conjugations: shape, identity at e, homomorphism, isomorphism,
        // naturality with respect to res and tr.
        if self.conj.len() != self.group.order() {
            return Err(Error::validation("one conjugation list per group element"));
        }
        for (g, per_class) in self.conj.iter().enumerate() {
            if per_class.len() != self.classes.len() {
                return Err(Error::validation("conjugation list has wrong shape"));
            }
            for (c, m) in per_class.iter().enumerate() {
                if !is_valid_map(&self.objects[c], &self.objects[c], m) {
                    return Err(Error::validation(format!(
                        "conjugation by {g} on class {c} is not an endomorphism"
                    )));
                }
            }
        }
        for c in 0..self.classes.len() {
            let id = IntMatrix::identity(self.objects[c].num_generators());
            if !maps_equal(&self.objects[c], &self.conj[0][c], &id) {
                return Err(Error::validation("conjugation by identity must be identity"));
            }
        }
        for a in self.group.elements() {
            for b in self.group.elements() {
                let ab = self.group.mul(a, b);
                for c in 0..self.classes.len() {
                    let lhs = self.conj[a as usize][c].mul(&self.conj[b as usize][c]);
                    if !maps_equal(&self.objects[c], &lhs, &self.conj[ab as usize][c]) {
                        return Err(Error::validation(format!(
                            "conjugations are not multiplicative at ({a},{b}) on class {c}"
                        )));
                    }
                }
            }
        }
        for &(i, j) in &pairs {
            let r = self.res_of(i, j)?;
            let t = self.tr_of(i, j)?;
            for g in self.group.elements() {
                let cg_i = &self.conj[g as usize][i];
                let cg_j = &self.conj[g as usize][j];
                if !maps_equal(&self.objects[i], &cg_i.mul(&r), &r.mul(cg_j)) {
                    return Err(Error::validation(format!(
                        "conjugation by {g} not natural for restriction {j} → {i}"
                    )));
                }
                if !maps_equal(&self.objects[j], &cg_j.mul(&t), &t.mul(cg_i)) {
                    return Err(Error::validation(format!(
                        "conjugation by {g} not natural for transfer {i} → {j}"
                    )));
                }
            }
        }
        // tr ∘ res = ×[H:K] is not imposed by the theory the pipeline rests
        // on; report violations without failing.
        for &(i, j) in &pairs {
            let r = self.res_of(i, j)?;
            let t = self.tr_of(i, j)?;
            let index = (self.classes[j].representative.order()
                / self.classes[i].representative.order()) as i64;
            let want = IntMatrix::identity(self.objects[j].num_generators())
                .scale(&Int::from(index));
            if !maps_equal(&self.objects[j], &t.mul(&r), &want) {
                eprintln!(
                    "warning: tr∘res ≠ ×[H:K] on classes {i} ⊆ {j}; continuing"
                );
            }
        }
        Ok(())
    }
}

/// The covariant (transfer) part of Mackey data, as Bredon coefficients.
pub struct MackeyCovariant<'a>(pub &'a MackeyData);

impl OrbitCoefficients for MackeyCovariant<'_> {
    fn objects(&self) -> &[AbGroup] {
        self.0.objects()
    }

    fn morphism(&self, from: usize, to: usize, g: Elem) -> Result<IntMatrix> {
        // Abelian group: the morphism G/H_from → G/H_to over coset g factors
        // as the Weyl action of g⁻¹ followed by the transfer.
        let g_inv = self.0.group.inv(g);
        let t = self.0.tr_of(from, to)?;
        Ok(t.mul(&self.0.conj[g_inv as usize][from]))
    }
}

/// Quillen's K-groups of finite fields as Mackey data for
/// Gal(F_{q^d}/F_q) ≅ C_d in degree n: K_n(F_{q^e}) for each e | d, with
/// base-change restrictions, norm transfers, and Frobenius conjugation
/// acting on K_{2i−1} by multiplication by q^i.
pub fn finite_field_mackey(
    q: u64,
    d: usize,
    degree: usize,
    group: &FiniteGroup,
) -> Result<MackeyData> {
    if group.order() != d {
        return Err(Error::validation(format!(
            "preset ff:{q},{d} needs a Galois group of order {d}, got {}",
            group.order()
        )));
    }
    let generator = group
        .cyclic_generator()
        .ok_or_else(|| Error::validation("finite-field preset needs a cyclic Galois group"))?;
    if !is_prime_power(q) {
        return Err(Error::validation(format!("{q} is not a prime power")));
    }
    let classes = enumerate_subgroups(group)?;

    // K_n(F_{q^e}) where e = [G:H] for the subgroup class H.
    let ext_degree: Vec<usize> = classes.iter().map(|c| d / c.representative.order()).collect();
    let k_group = |e: usize| -> Result<AbGroup> {
        match degree {
            0 => Ok(AbGroup::free(1)),
            n if n % 2 == 1 => {
                let i = (n + 1) / 2;
                let m = checked_qpow(q, e * i)?;
                Ok(AbGroup::cyclic((m - 1) as i64))
            }
            _ => Ok(AbGroup::trivial()),
        }
    };
    let objects: Vec<AbGroup> = ext_degree
        .iter()
        .map(|&e| k_group(e))
        .collect::<Result<_>>()?;

    let mut res = HashMap::new();
    let mut tr = HashMap::new();
    for i in 0..classes.len() {
        for j in 0..classes.len() {
            if i == j
                || !classes[i]
                    .representative
                    .is_subgroup_of(&classes[j].representative)
            {
                continue;
            }
            // H_i ⊆ H_j: fields F_{q^{e_j}} ⊆ F_{q^{e_i}}.
            let (e_sub, e_sup) = (ext_degree[i], ext_degree[j]);
            let (r, t) = match degree {
                0 => (
                    IntMatrix::identity(1),
                    IntMatrix::from_rows(&[vec![(e_sub / e_sup) as i64]]),
                ),
                n if n % 2 == 1 => {
                    let i_half = (n + 1) / 2;
                    let big = checked_qpow(q, e_sub * i_half)? - 1;
                    let small = checked_qpow(q, e_sup * i_half)? - 1;
                    // Base change embeds the small cyclic group; the norm is
                    // the canonical surjection.
                    (
                        IntMatrix::from_rows(&[vec![(big / small) as i64]]),
                        IntMatrix::from_rows(&[vec![1]]),
                    )
                }
                _ => (IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)),
            };
            res.insert((i, j), r);
            tr.insert((i, j), t);
        }
    }

    // Frobenius conjugation: write each element as generator^k.
    let mut power_of = vec![0usize; d];
    let mut x: Elem = 0;
    for k in 0..d {
        power_of[x as usize] = k;
        x = group.mul(x, generator);
    }
    let mut conj = Vec::with_capacity(d);
    for g in group.elements() {
        let k = power_of[g as usize];
        let per_class: Vec<IntMatrix> = (0..classes.len())
            .map(|c| match degree {
                0 => IntMatrix::identity(1),
                n if n % 2 == 1 => {
                    let i_half = (n + 1) / 2;
                    let modulus = checked_qpow(q, ext_degree[c] * i_half).unwrap() - 1;
                    let factor = mod_pow(q % modulus.max(1), (i_half * k) as u64, modulus.max(1));
                    IntMatrix::from_rows(&[vec![factor as i64]])
                }
                _ => IntMatrix::zeros(0, 0),
            })
            .collect();
        conj.push(per_class);
    }

    MackeyData::new(group, objects, res, tr, conj)
}

fn checked_qpow(q: u64, e: usize) -> Result<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc
            .checked_mul(q)
            .ok_or_else(|| Error::unsupported("finite-field K-group order exceeds u64"))?;
    }
    Ok(acc)
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus <= 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut n = q;
    let mut p = 0u64;
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            p = f;
            while n % f == 0 {
                n /= f;
            }
            break;
        }
        f += 1;
    }
    if p == 0 {
        return true; // prime
    }
    n == 1
}

/// The E² page: E²_{p,q} = H_p of the complex with the covariant part of the
/// degree-q coefficients; the q = 0 row uses the constant functor ℤ̲ (the
/// rank map identifies π₀ of the K-theory coefficients with it).
pub struct E2Page {
    pub rank: usize,
    pub q_max: usize,
    /// entries[q][p], 0 ≤ p ≤ rank, 0 ≤ q ≤ q_max
    pub entries: Vec<Vec<AbGroup>>,
}

impl E2Page {
    pub fn entry(&self, p: usize, q: usize) -> &AbGroup {
        &self.entries[q][p]
    }
}

/// Assemble the page from per-degree Mackey rows; `rows[q]` supplies the
/// coefficients for row q ≥ 1, and rows[0] is present for shape but the
/// degree-0 row is always computed with ℤ̲.
pub fn e2_page(x: &EquivariantCellComplex, rows: &[MackeyData]) -> Result<E2Page> {
    if rows.is_empty() {
        return Err(Error::validation("need at least the q = 0 row"));
    }
    let rank = x.dimension();
    let mut entries = Vec::with_capacity(rows.len());
    let z = constant_z(x.lattice().group())?;
    entries.push(homology(&chain_complex(x, &z)?)?);
    for m in &rows[1..] {
        if m.group() != x.lattice().group() {
            return Err(Error::validation(
                "Mackey data group does not match the lattice",
            ));
        }
        let cov = MackeyCovariant(m);
        entries.push(homology(&chain_complex(x, &cov)?)?);
    }
    Ok(E2Page {
        rank,
        q_max: rows.len() - 1,
        entries,
    })
}

/// One associated-graded piece list for a total degree.
pub struct GradedLine {
    pub total_degree: usize,
    /// (p, E²_{p, n−p}) for p in 0..=rank, nonzero entries only.
    pub pieces: Vec<(usize, AbGroup)>,
    pub extension_ambiguous: bool,
}

pub struct CollapseCertificate {
    pub certified: bool,
    pub reason: String,
    /// Present when certified: the associated graded of K_n per total degree
    /// n ≤ q_max.
    pub graded: Option<Vec<GradedLine>>,
}

/// Certify degeneration at E² by lacunarity: for rank ≤ 1 no differential
/// d_r (r ≥ 2) fits inside the two-column strip, so the page collapses.
pub fn collapse_by_lacunarity(page: &E2Page) -> CollapseCertificate {
    if page.rank > 1 {
        return CollapseCertificate {
            certified: false,
            reason: format!(
                "rank {} strip admits d_2: E²_{{2,q}} → E²_{{0,q+1}}",
                page.rank
            ),
            graded: None,
        };
    }
    let mut graded = Vec::new();
    for n in 0..=page.q_max {
        let mut pieces = Vec::new();
        for p in 0..=page.rank.min(n) {
            let q = n - p;
            let e = page.entry(p, q);
            if !e.is_trivial() {
                pieces.push((p, e.clone()));
            }
        }
        let ambiguous = pieces.len() > 1;
        graded.push(GradedLine {
            total_degree: n,
            pieces,
            extension_ambiguous: ambiguous,
        });
    }
    CollapseCertificate {
        certified: true,
        reason: format!(
            "all differentials leave the strip 0 ≤ p ≤ {}",
            page.rank
        ),
        graded: Some(graded),
    }
}

/// One degree of the rank-1 answer: K_n(T_a) = K_n(F) ⊕ C_n with C_n an
/// extension of ker(res_{n−1}) by coker(res_n).
pub struct SwanDegree {
    pub field_part: AbGroup,
    pub coker: AbGroup,
    pub ker_below: AbGroup,
    /// Set when both extension pieces are nonzero; the direct-sum answer is
    /// then only the associated graded.
    pub extension_ambiguous: bool,
}

impl SwanDegree {
    /// The graded pieces in the spectral-sequence layout:
    /// (filtration 0, filtration 1).
    pub fn graded_pieces(&self) -> (AbGroup, AbGroup) {
        (
            self.field_part.direct_sum(&self.coker),
            self.ker_below.clone(),
        )
    }
}

/// The rank-1 computation via the two-cell cofiber sequence: `kf` and `ke`
/// are the K-groups of the base field and its quadratic extension through
/// some degree, `res` the restriction-of-scalars maps `ke[n] → kf[n]`.
pub fn swan_rank1(
    kf: &[AbGroup],
    ke: &[AbGroup],
    res: &[IntMatrix],
) -> Result<Vec<SwanDegree>> {
    if kf.len() != ke.len() || res.len() != kf.len() {
        return Err(Error::validation(
            "swan oracle needs K_F, K_E and res of equal lengths",
        ));
    }
    for n in 0..kf.len() {
        if !is_valid_map(&ke[n], &kf[n], &res[n]) {
            return Err(Error::validation(format!(
                "res[{n}] is not a homomorphism ke[{n}] → kf[{n}]"
            )));
        }
    }
    let mut out = Vec::with_capacity(kf.len());
    for n in 0..kf.len() {
        let coker = map_cokernel(&res[n], &ke[n], &kf[n]);
        let ker_below = if n == 0 {
            AbGroup::trivial()
        } else {
            map_kernel(&res[n - 1], &ke[n - 1], &kf[n - 1])
        };
        let extension_ambiguous = !coker.is_trivial() && !ker_below.is_trivial();
        out.push(SwanDegree {
            field_part: kf[n].clone(),
            coker,
            ker_below,
            extension_ambiguous,
        });
    }
    Ok(out)
}

/// Cokernel of a map of presented groups.
pub fn map_cokernel(m: &IntMatrix, _src: &AbGroup, dst: &AbGroup) -> AbGroup {
    let gens = dst.num_generators();
    let mut rel_rows: Vec<Vec<Int>> = Vec::new();
    for j in 0..m.cols() {
        rel_rows.push(m.column(j));
    }
    for (i, d) in dst.torsion().iter().enumerate() {
        let mut row = vec![Int::zero(); gens];
        row[i] = d.clone();
        rel_rows.push(row);
    }
    let mut rel = IntMatrix::zeros(rel_rows.len(), gens);
    for (r, row) in rel_rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            rel.set(r, c, v.clone());
        }
    }
    group_from_presentation(gens, &rel)
}

/// Kernel of a map of presented groups.
pub fn map_kernel(m: &IntMatrix, src: &AbGroup, dst: &AbGroup) -> AbGroup {
    let src_gens = src.num_generators();
    // Lifts x with m·x in the relation span of dst.
    let mut dst_rel = IntMatrix::zeros(dst.num_generators(), dst.torsion().len());
    for (i, d) in dst.torsion().iter().enumerate() {
        dst_rel.set(i, i, d.clone());
    }
    let stacked = m.hstack(&dst_rel);
    let ker = kernel_basis(&stacked);
    let top = ker.submatrix_rows(0..src_gens);
    let basis = column_span_basis(&top);
    // Quotient by the source relations (which are lifted kernel elements).
    let mut src_rel = IntMatrix::zeros(src_gens, src.torsion().len());
    for (i, d) in src.torsion().iter().enumerate() {
        src_rel.set(i, i, d.clone());
    }
    let coords = solve_matrix(&basis, &src_rel).expect("source relations are in the kernel");
    group_from_presentation(basis.cols(), &coords.transpose())
}

/// Quillen K-groups of F_{q^e} through a degree bound, plus the
/// restriction-of-scalars maps K_n(F_{q^{2e}}) → K_n(F_{q^e}) used by the
/// rank-1 oracle over the quadratic extension.
pub fn quillen_k_groups(q: u64, e: usize, n_max: usize) -> Result<Vec<AbGroup>> {
    (0..=n_max)
        .map(|n| match n {
            0 => Ok(AbGroup::free(1)),
            n if n % 2 == 1 => {
                let i = (n + 1) / 2;
                let m = checked_qpow(q, e * i)?;
                Ok(AbGroup::cyclic((m - 1) as i64))
            }
            _ => Ok(AbGroup::trivial()),
        })
        .collect()
}

/// Restriction-of-scalars maps along F_{q²}/F_q in Quillen coordinates:
/// ×2 on K₀, the canonical surjection (norm) on odd degrees, zero in even
/// degrees.
pub fn quillen_restriction_maps(n_max: usize) -> Vec<IntMatrix> {
    (0..=n_max)
        .map(|n| match n {
            0 => IntMatrix::from_rows(&[vec![2]]),
            n if n % 2 == 1 => IntMatrix::from_rows(&[vec![1]]),
            _ => IntMatrix::zeros(0, 0),
        })
        .collect()
}

/// "mackey/1" JSON schema.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MackeyFile {
    pub version: String,
    /// Element lists of the subgroup class representatives, in the canonical
    /// enumeration order of the group.
    pub classes: Vec<Vec<u16>>,
    /// [free_rank, [torsion...]] per class.
    pub objects: Vec<(usize, Vec<i64>)>,
    pub restrictions: Vec<MapSpec>,
    pub transfers: Vec<MapSpec>,
    #[serde(default)]
    pub conjugations: Vec<ConjSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub sub: usize,
    pub sup: usize,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjSpec {
    pub element: u16,
    pub class: usize,
    pub matrix: Vec<Vec<i64>>,
}

pub const MACKEY_SCHEMA_VERSION: &str = "mackey/1";

pub fn mackey_from_json(group: &FiniteGroup, json: &str) -> Result<MackeyData> {
    let file: MackeyFile = serde_json::from_str(json)?;
    if file.version != MACKEY_SCHEMA_VERSION {
        return Err(Error::validation(format!(
            "unknown schema version {:?}, expected {MACKEY_SCHEMA_VERSION:?}",
            file.version
        )));
    }
    let classes = enumerate_subgroups(group)?;
    if file.classes.len() != classes.len()
        || file
            .classes
            .iter()
            .zip(&classes)
            .any(|(a, b)| a.as_slice() != b.representative.elements())
    {
        return Err(Error::validation(
            "class list does not match the group's canonical subgroup classes",
        ));
    }
    let objects: Vec<AbGroup> = file
        .objects
        .iter()
        .map(|(f, t)| AbGroup::from_schema(*f, t))
        .collect::<Result<_>>()?;
    let to_matrix = |rows: &Vec<Vec<i64>>, r: usize, c: usize, what: &str| -> Result<IntMatrix> {
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return Err(Error::validation(format!(
                "{what} matrix must be {r}x{c} in invariant-factor coordinates"
            )));
        }
        Ok(IntMatrix::from_rows(rows))
    };
    let mut res = HashMap::new();
    for spec in &file.restrictions {
        let m = to_matrix(
            &spec.matrix,
            objects[spec.sub].num_generators(),
            objects[spec.sup].num_generators(),
            "restriction",
        )?;
        res.insert((spec.sub, spec.sup), m);
    }
    let mut tr = HashMap::new();
    for spec in &file.transfers {
        let m = to_matrix(
            &spec.matrix,
            objects[spec.sup].num_generators(),
            objects[spec.sub].num_generators(),
            "transfer",
        )?;
        tr.insert((spec.sub, spec.sup), m);
    }
    let mut conj: Vec<Vec<IntMatrix>> = group
        .elements()
        .map(|_| {
            objects
                .iter()
                .map(|o| IntMatrix::identity(o.num_generators()))
                .collect()
        })
        .collect();
    for spec in &file.conjugations {
        if spec.element as usize >= group.order() || spec.class >= objects.len() {
            return Err(Error::validation("conjugation indices out of range"));
        }
        let n = objects[spec.class].num_generators();
        conj[spec.element as usize][spec.class] = to_matrix(&spec.matrix, n, n, "conjugation")?;
    }
    MackeyData::new(group, objects, res, tr, conj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqcell::{build_complex, BuildOptions};
    use crate::glattice::GLattice;

    fn sign_lattice() -> GLattice {
        GLattice::new(
            1,
            FiniteGroup::cyclic(2),
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap()
    }

    #[test]
    fn ff_preset_q3_d2_degree1() {
        let g = FiniteGroup::cyclic(2);
        let m = finite_field_mackey(3, 2, 1, &g).unwrap();
        // Objects: K₁(F₉) = Z/8 at the trivial class, K₁(F₃) = Z/2 at C₂.
        assert_eq!(m.objects()[0], AbGroup::cyclic(8));
        assert_eq!(m.objects()[1], AbGroup::cyclic(2));
        // res: Z/2 → Z/8 is ×4; tr: the canonical surjection.
        assert_eq!(m.res_of(0, 1).unwrap(), IntMatrix::from_rows(&[vec![4]]));
        assert_eq!(m.tr_of(0, 1).unwrap(), IntMatrix::from_rows(&[vec![1]]));
    }

    #[test]
    fn ff_preset_even_degrees_vanish() {
        let g = FiniteGroup::cyclic(2);
        let m = finite_field_mackey(3, 2, 2, &g).unwrap();
        assert!(m.objects().iter().all(AbGroup::is_trivial));
    }

    #[test]
    fn ff_preset_d1_is_single_object() {
        let g = FiniteGroup::trivial();
        let m = finite_field_mackey(5, 1, 3, &g).unwrap();
        assert_eq!(m.objects().len(), 1);
        assert_eq!(m.objects()[0], AbGroup::cyclic(24));
    }

    #[test]
    fn ff_preset_rejects_non_prime_power() {
        let g = FiniteGroup::cyclic(2);
        assert!(finite_field_mackey(6, 2, 1, &g).is_err());
    }

    #[test]
    fn e2_page_sign_over_f3() {
        let lat = sign_lattice();
        let x = build_complex(&lat, &BuildOptions::default()).unwrap();
        let rows: Vec<MackeyData> = (0..=3)
            .map(|n| finite_field_mackey(3, 2, n, lat.group()).unwrap())
            .collect();
        let page = e2_page(&x, &rows).unwrap();
        // E²_{0,0} = Z ⊕ Z/2, E²_{1,0} = 0.
        assert_eq!(page.entry(0, 0).free_rank(), 1);
        assert_eq!(page.entry(0, 0).torsion(), &[Int::from(2)]);
        assert!(page.entry(1, 0).is_trivial());
        // E²_{0,1} = Z/2, E²_{1,1} = Z/4.
        assert_eq!(page.entry(0, 1), &AbGroup::cyclic(2));
        assert_eq!(page.entry(1, 1), &AbGroup::cyclic(4));
        // Even K-groups of finite fields vanish.
        assert!(page.entry(0, 2).is_trivial());
        assert!(page.entry(1, 2).is_trivial());

        let cert = collapse_by_lacunarity(&page);
        assert!(cert.certified);
        let graded = cert.graded.unwrap();
        // gr K₂ = {Z/4} at (p,q) = (1,1).
        assert_eq!(graded[2].pieces.len(), 1);
        assert_eq!(graded[2].pieces[0].1, AbGroup::cyclic(4));
        assert!(!graded[2].extension_ambiguous);
    }

    #[test]
    fn split_page_is_binomial_shift() {
        // Rank 1, trivial group: two columns, both equal to K_q(F).
        let lat = GLattice::new(1, FiniteGroup::trivial(), vec![IntMatrix::identity(1)]).unwrap();
        let x = build_complex(&lat, &BuildOptions::default()).unwrap();
        let rows: Vec<MackeyData> = (0..=4)
            .map(|n| finite_field_mackey(3, 1, n, lat.group()).unwrap())
            .collect();
        let page = e2_page(&x, &rows).unwrap();
        let k: Vec<AbGroup> = quillen_k_groups(3, 1, 4).unwrap();
        for q in 1..=4 {
            assert_eq!(page.entry(0, q), &k[q]);
            assert_eq!(page.entry(1, q), &k[q]);
        }
        // q = 0 row uses ℤ̲, matching K₀ = Z of the field.
        assert_eq!(page.entry(0, 0), &AbGroup::free(1));
        assert_eq!(page.entry(1, 0), &AbGroup::free(1));
    }

    #[test]
    fn rank0_page_single_column() {
        let g = FiniteGroup::trivial();
        let lat = GLattice::new(0, g, vec![IntMatrix::zeros(0, 0)]).unwrap();
        let x = build_complex(&lat, &BuildOptions::default()).unwrap();
        let rows: Vec<MackeyData> = (0..=2)
            .map(|n| finite_field_mackey(3, 1, n, lat.group()).unwrap())
            .collect();
        let page = e2_page(&x, &rows).unwrap();
        assert_eq!(page.rank, 0);
        assert_eq!(page.entry(0, 1), &AbGroup::cyclic(2));
        let cert = collapse_by_lacunarity(&page);
        assert!(cert.certified);
    }

    #[test]
    fn rank2_page_not_certified() {
        let lat = GLattice::new(2, FiniteGroup::trivial(), vec![IntMatrix::identity(2)]).unwrap();
        let x = build_complex(&lat, &BuildOptions::default()).unwrap();
        let rows = vec![finite_field_mackey(3, 1, 0, lat.group()).unwrap()];
        let page = e2_page(&x, &rows).unwrap();
        assert!(!collapse_by_lacunarity(&page).certified);
    }

    #[test]
    fn swan_f3_low_degrees() {
        let kf = quillen_k_groups(3, 1, 2).unwrap();
        let ke = quillen_k_groups(3, 2, 2).unwrap();
        let res = quillen_restriction_maps(2);
        let sw = swan_rank1(&kf, &ke, &res).unwrap();
        // K₀(T_a) = Z ⊕ Z/2: coker(×2 on Z) = Z/2.
        assert_eq!(sw[0].field_part, AbGroup::free(1));
        assert_eq!(sw[0].coker, AbGroup::cyclic(2));
        assert!(sw[0].ker_below.is_trivial());
        // K₁ = Z/2: norm Z/8 → Z/2 surjective, ker(×2: Z → Z) = 0.
        assert!(sw[1].coker.is_trivial());
        assert!(sw[1].ker_below.is_trivial());
        assert_eq!(sw[1].field_part, AbGroup::cyclic(2));
        // K₂ = Z/4 = ker(norm: Z/8 → Z/2).
        assert!(sw[2].field_part.is_trivial());
        assert!(sw[2].coker.is_trivial());
        assert_eq!(sw[2].ker_below, AbGroup::cyclic(4));
    }

    #[test]
    fn swan_matches_collapsed_page_for_q3() {
        let lat = sign_lattice();
        let x = build_complex(&lat, &BuildOptions::default()).unwrap();
        let n_max = 6;
        let rows: Vec<MackeyData> = (0..=n_max)
            .map(|n| finite_field_mackey(3, 2, n, lat.group()).unwrap())
            .collect();
        let page = e2_page(&x, &rows).unwrap();
        let kf = quillen_k_groups(3, 1, n_max).unwrap();
        let ke = quillen_k_groups(3, 2, n_max).unwrap();
        let sw = swan_rank1(&kf, &ke, &quillen_restriction_maps(n_max)).unwrap();
        for n in 0..=n_max {
            let (piece0, piece1) = sw[n].graded_pieces();
            assert_eq!(page.entry(0, n), &piece0, "E²_{{0,{n}}}");
            if n >= 1 {
                assert_eq!(page.entry(1, n - 1), &piece1, "E²_{{1,{}}}", n - 1);
            }
        }
    }

    #[test]
    fn mackey_json_roundtrip_and_validation() {
        let g = FiniteGroup::cyclic(2);
        let json = r#"{
            "version": "mackey/1",
            "classes": [[0], [0, 1]],
            "objects": [[0, [8]], [0, [2]]],
            "restrictions": [{"sub": 0, "sup": 1, "matrix": [[4]]}],
            "transfers": [{"sub": 0, "sup": 1, "matrix": [[1]]}],
            "conjugations": [{"element": 1, "class": 0, "matrix": [[3]]}]
        }"#;
        let m = mackey_from_json(&g, json).unwrap();
        assert_eq!(m.objects()[0], AbGroup::cyclic(8));
        // Missing transfer must be rejected.
        let bad = r#"{
            "version": "mackey/1",
            "classes": [[0], [0, 1]],
            "objects": [[0, [8]], [0, [2]]],
            "restrictions": [{"sub": 0, "sup": 1, "matrix": [[4]]}],
            "transfers": []
        }"#;
        assert!(mackey_from_json(&g, bad).is_err());
    }
}
