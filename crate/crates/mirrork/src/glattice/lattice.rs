//! Integral lattices with an action of a finite group, and the standard
//! constructions on them: induction from a subgroup, the norm-one quotient,
//! the Weil resolution, character orbits and fixed sublattices.

use super::group::{Elem, FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::exactalg::{
    kernel_basis, smith_with, Int, IntMatrix, SnfOpts,
};
use std::collections::BTreeMap;

/// A free abelian group ℤ^rank with a group acting by unimodular matrices.
#[derive(Clone)]
pub struct GLattice {
    rank: usize,
    group: FiniteGroup,
    /// action[g] = matrix of g, one per group element
    action: Vec<IntMatrix>,
}

impl GLattice {
    pub fn new(rank: usize, group: FiniteGroup, action: Vec<IntMatrix>) -> Result<Self> {
        let lat = GLattice {
            rank,
            group,
            action,
        };
        lat.validate_action()?;
        Ok(lat)
    }

    /// Build from matrices on a generating set; the rest of the action is
    /// derived through the homomorphism property and validated.
    pub fn from_generators(
        rank: usize,
        group: FiniteGroup,
        gens: &BTreeMap<Elem, IntMatrix>,
    ) -> Result<Self> {
        let n = group.order();
        let mut action: Vec<Option<IntMatrix>> = vec![None; n];
        action[0] = Some(IntMatrix::identity(rank));
        for (&g, m) in gens {
            if g as usize >= n {
                return Err(Error::validation("action key out of range"));
            }
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::validation(format!(
                    "action matrix for element {g} must be {rank}x{rank}"
                )));
            }
            if g == 0 {
                if *m != IntMatrix::identity(rank) {
                    return Err(Error::validation("action of the identity must be I"));
                }
                continue;
            }
            action[g as usize] = Some(m.clone());
        }
        // Derive products until stable.
        loop {
            let mut progressed = false;
            for a in 0..n {
                if action[a].is_none() {
                    continue;
                }
                for b in 0..n {
                    if action[b].is_none() {
                        continue;
                    }
                    let ab = group.mul(a as Elem, b as Elem) as usize;
                    if action[ab].is_none() {
                        let m = action[a].as_ref().unwrap().mul(action[b].as_ref().unwrap());
                        action[ab] = Some(m);
                        progressed = true;
                    }
                }
            }
            if !progressed {
                break;
            }
        }
        if action.iter().any(Option::is_none) {
            return Err(Error::validation(
                "supplied action matrices do not generate the whole group",
            ));
        }
        GLattice::new(
            rank,
            group,
            action.into_iter().map(Option::unwrap).collect(),
        )
    }

    pub fn validate_action(&self) -> Result<()> {
        let n = self.group.order();
        if self.action.len() != n {
            return Err(Error::validation("one action matrix required per element"));
        }
        for m in &self.action {
            if m.rows() != self.rank || m.cols() != self.rank {
                return Err(Error::validation("action matrix has wrong shape"));
            }
            if !m.det().is_unit() {
                return Err(Error::validation("action matrices must be unimodular"));
            }
        }
        if self.action[0] != IntMatrix::identity(self.rank) {
            return Err(Error::validation("identity must act as I"));
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.group.mul(a as Elem, b as Elem) as usize;
                if self.action[a].mul(&self.action[b]) != self.action[ab] {
                    return Err(Error::validation(format!(
                        "action is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, g: Elem) -> &IntMatrix {
        &self.action[g as usize]
    }

    /// ρ(g)⁻¹, available for free as ρ(g⁻¹).
    pub fn matrix_inv(&self, g: Elem) -> &IntMatrix {
        &self.action[self.group.inv(g) as usize]
    }

    pub fn apply(&self, g: Elem, v: &[Int]) -> Vec<Int> {
        self.matrix(g).mul_vec(v)
    }

    /// The kernel of the action: elements acting as the identity.
    pub fn action_kernel(&self) -> Vec<Elem> {
        let id = IntMatrix::identity(self.rank);
        self.group
            .elements()
            .filter(|&g| self.action[g as usize] == id)
            .collect()
    }

    /// Is every action matrix a signed permutation matrix?
    pub fn is_monomial(&self) -> bool {
        self.action.iter().all(is_signed_permutation)
    }

    /// Is every action matrix a plain permutation matrix?
    pub fn is_permutation(&self) -> bool {
        self.action.iter().all(|m| {
            is_signed_permutation(m)
                && (0..m.rows()).all(|r| (0..m.cols()).all(|c| !m.get(r, c).is_negative()))
        })
    }

    /// Direct sum with another lattice over the same group.
    pub fn direct_sum(&self, other: &GLattice) -> Result<GLattice> {
        if self.group != other.group {
            return Err(Error::validation("direct sum requires the same group"));
        }
        let rank = self.rank + other.rank;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = IntMatrix::zeros(rank, rank);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c).clone());
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(self.rank + r, self.rank + c, b.get(r, c).clone());
                    }
                }
                m
            })
            .collect();
        GLattice::new(rank, self.group.clone(), action)
    }
}

impl std::fmt::Debug for GLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GLattice(rank={}, |G|={})",
            self.rank,
            self.group.order()
        )
    }
}

fn is_signed_permutation(m: &IntMatrix) -> bool {
    for r in 0..m.rows() {
        let mut nonzero = 0;
        for c in 0..m.cols() {
            let v = m.get(r, c);
            if !v.is_zero() {
                if !v.is_unit() {
                    return false;
                }
                nonzero += 1;
            }
        }
        if nonzero != 1 {
            return false;
        }
    }
    // Unimodularity (validated at construction) plus one entry per row
    // forces one entry per column.
    true
}

/// The induced lattice ℤ[G/H]: rank [G:H], G permuting the left cosets.
/// Coset order is deterministic (by minimal element).
pub fn induced_lattice(group: &FiniteGroup, h: &Subgroup) -> Result<GLattice> {
    h.validate(group)?;
    let cosets = h.left_cosets(group);
    let k = cosets.len();
    // coset index by membership
    let mut coset_of = vec![0usize; group.order()];
    for (i, coset) in cosets.iter().enumerate() {
        for &x in coset {
            coset_of[x as usize] = i;
        }
    }
    let mut action = Vec::with_capacity(group.order());
    for g in group.elements() {
        let mut m = IntMatrix::zeros(k, k);
        for (i, coset) in cosets.iter().enumerate() {
            let image = coset_of[group.mul(g, coset[0]) as usize];
            m.set(image, i, Int::one());
        }
        action.push(m);
    }
    GLattice::new(k, group.clone(), action)
}

/// The regular lattice ℤ[G].
pub fn regular_lattice(group: &FiniteGroup) -> GLattice {
    induced_lattice(group, &Subgroup::trivial()).expect("trivial subgroup is valid")
}

/// Character lattice of the norm-one torus: the quotient of ℤ[G] by the
/// norm element Σ_g g, with the induced action in a canonical basis coming
/// from the Smith change of basis.
pub fn norm_one_lattice(group: &FiniteGroup) -> GLattice {
    let n = group.order();
    let reg = regular_lattice(group);
    // Norm column vector.
    let mut norm = IntMatrix::zeros(n, 1);
    for i in 0..n {
        norm.set(i, 0, Int::one());
    }
    let s = smith_with(
        &norm,
        SnfOpts {
            want_u: true,
            want_u_inv: true,
            ..Default::default()
        },
    );
    debug_assert_eq!(s.rank, 1);
    debug_assert!(s.d.get(0, 0).is_one(), "norm vector is primitive");
    let u = s.u.as_ref().unwrap();
    let u_inv = s.u_inv.as_ref().unwrap();
    // Quotient coordinates are rows 1.. of U; a section is columns 1.. of U^-1.
    let proj = u.submatrix_rows(1..n);
    let sect = u_inv.submatrix_cols(1..n);
    let action = group
        .elements()
        .map(|g| proj.mul(reg.matrix(g)).mul(&sect))
        .collect();
    GLattice::new(n - 1, group.clone(), action).expect("norm-one action is valid")
}

/// The Weil resolution of a lattice: a split-injective equivariant embedding
/// into an induced lattice with torsion-free quotient.
#[derive(Clone)]
pub struct WeilResolutionData {
    /// rank(Λ) columns, rank(big) rows; the embedding matrix.
    pub inclusion: IntMatrix,
    /// ℤ[Ḡ]^r with the block permutation action (Ḡ = G modulo the kernel of
    /// the action on Λ).
    pub big: GLattice,
    /// The quotient big/Λ, torsion-free with induced action.
    pub quotient: GLattice,
    /// rank(quotient) rows, rank(big) columns; projection ∘ inclusion = 0.
    pub projection: IntMatrix,
}

/// Build the Weil resolution over Ḡ = G/ker(action). The embedding is
/// λ ↦ Σ_ḡ ḡ ⊗ ρ(ḡ)⁻¹λ into ℤ[Ḡ] ⊗ ℤ^r, where the group translates the
/// ℤ[Ḡ] factor; all invariants are verified before returning.
pub fn weil_resolution(lat: &GLattice) -> Result<WeilResolutionData> {
    let group = lat.group();
    let r = lat.rank();
    let kernel = lat.action_kernel();
    let kernel_sub = Subgroup::from_sorted_unchecked(kernel);
    // Cosets of the action kernel play the role of Ḡ; ℤ[Ḡ] ⊗ ℤ^r is the
    // induced lattice with r-fold multiplicity, as a G-lattice.
    let cosets = kernel_sub.left_cosets(group);
    let k = cosets.len();
    let big_rank = k * r;
    let mut coset_of = vec![0usize; group.order()];
    for (i, coset) in cosets.iter().enumerate() {
        for &x in coset {
            coset_of[x as usize] = i;
        }
    }

    // Block permutation action on ℤ[Ḡ]^r (coset-major index c*r + j).
    let mut big_action = Vec::with_capacity(group.order());
    for g in group.elements() {
        let mut m = IntMatrix::zeros(big_rank, big_rank);
        for (i, coset) in cosets.iter().enumerate() {
            let image = coset_of[group.mul(g, coset[0]) as usize];
            for j in 0..r {
                m.set(image * r + j, i * r + j, Int::one());
            }
        }
        big_action.push(m);
    }
    let big = GLattice::new(big_rank, group.clone(), big_action)?;

    // inclusion: block at coset ḡ is ρ(ḡ)⁻¹ (well defined modulo the kernel).
    let mut inclusion = IntMatrix::zeros(big_rank, r);
    for (i, coset) in cosets.iter().enumerate() {
        let rep = coset[0];
        let inv = lat.matrix_inv(rep);
        for rr in 0..r {
            for cc in 0..r {
                inclusion.set(i * r + rr, cc, inv.get(rr, cc).clone());
            }
        }
    }

    // Equivariance: ρ_big(g)·inclusion = inclusion·ρ(g).
    for g in group.elements() {
        if big.matrix(g).mul(&inclusion) != inclusion.mul(lat.matrix(g)) {
            return Err(Error::internal(format!(
                "Weil inclusion is not equivariant at element {g}"
            )));
        }
    }

    // Split injectivity: all invariant factors 1.
    let s = smith_with(
        &inclusion,
        SnfOpts {
            want_u: true,
            want_u_inv: true,
            ..Default::default()
        },
    );
    if s.rank != r || (0..s.rank).any(|i| !s.d.get(i, i).is_one()) {
        return Err(Error::internal(
            "Weil inclusion must be split-injective (unit invariant factors)",
        ));
    }

    // Quotient coordinates: rows r.. of U; section: columns r.. of U^-1.
    let u = s.u.as_ref().unwrap();
    let u_inv = s.u_inv.as_ref().unwrap();
    let projection = u.submatrix_rows(r..big_rank);
    let section = u_inv.submatrix_cols(r..big_rank);
    let quot_action: Vec<IntMatrix> = group
        .elements()
        .map(|g| projection.mul(big.matrix(g)).mul(&section))
        .collect();
    let quotient = GLattice::new(big_rank - r, group.clone(), quot_action)?;

    if !projection.mul(&inclusion).is_zero() {
        return Err(Error::internal("projection ∘ inclusion must vanish"));
    }
    if big.rank() != lat.rank() + quotient.rank() {
        return Err(Error::internal("Weil resolution rank additivity failed"));
    }

    Ok(WeilResolutionData {
        inclusion,
        big,
        quotient,
        projection,
    })
}

/// One orbit of lattice vectors: lexicographically smallest representative,
/// the stabilizer of that representative, and the full orbit size.
#[derive(Clone, Debug)]
pub struct CharacterOrbit {
    pub representative: Vec<Int>,
    pub stabilizer: Subgroup,
    pub orbit_size: usize,
}

/// Decompose the vectors of max-norm ≤ bound into G-orbits. Orbits may leave
/// the box; representatives and sizes refer to the full orbit.
pub fn character_orbits(lat: &GLattice, norm_bound: u32) -> Vec<CharacterOrbit> {
    let r = lat.rank();
    let b = norm_bound as i64;
    let mut seen: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
    let mut orbits = Vec::new();

    if r == 0 {
        // Rank zero: the single zero vector, full stabilizer.
        return vec![CharacterOrbit {
            representative: vec![],
            stabilizer: Subgroup::full(lat.group()),
            orbit_size: 1,
        }];
    }

    let mut cursor = vec![-b; r];
    let mut done = false;
    loop {
        if done {
            break;
        }
        let v: Vec<i64> = cursor.clone();
        if !seen.contains(&v) {
            // Full orbit of v.
            let vi: Vec<Int> = v.iter().map(|&x| Int::from(x)).collect();
            let mut orbit: std::collections::BTreeSet<Vec<Int>> = std::collections::BTreeSet::new();
            for g in lat.group().elements() {
                orbit.insert(lat.apply(g, &vi));
            }
            let rep = orbit.iter().next().unwrap().clone();
            let stab_elems: Vec<Elem> = lat
                .group()
                .elements()
                .filter(|&g| lat.apply(g, &rep) == rep)
                .collect();
            // Mark in-box orbit members as seen.
            for w in &orbit {
                if let Some(wi) = w
                    .iter()
                    .map(|x| x.to_i64())
                    .collect::<Option<Vec<i64>>>()
                {
                    if wi.iter().all(|x| x.abs() <= b) {
                        seen.insert(wi);
                    }
                }
            }
            orbits.push(CharacterOrbit {
                representative: rep,
                stabilizer: Subgroup::from_sorted_unchecked(stab_elems),
                orbit_size: orbit.len(),
            });
        }
        // Advance the odometer.
        let mut i = 0;
        loop {
            cursor[i] += 1;
            if cursor[i] <= b {
                break;
            }
            cursor[i] = -b;
            i += 1;
            if i == r {
                done = true;
                break;
            }
        }
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    orbits
}

/// Saturated basis (as columns) of the sublattice fixed by H.
pub fn fixed_sublattice(lat: &GLattice, h: &Subgroup) -> Result<IntMatrix> {
    h.validate(lat.group())?;
    // Stack (ρ(h) - I) for every h in H; the kernel is Λ^H.
    let r = lat.rank();
    let mut stacked = IntMatrix::zeros(0, r);
    for &g in h.elements() {
        if g == 0 {
            continue;
        }
        let d = lat.matrix(g).sub(&IntMatrix::identity(r));
        stacked = stacked.vstack(&d);
    }
    if stacked.rows() == 0 {
        return Ok(IntMatrix::identity(r));
    }
    Ok(kernel_basis(&stacked))
}

#[cfg(test)]
mod tests {
    use super::super::group::enumerate_subgroups;
    use super::*;

    #[test]
    fn induced_c2_trivial_is_swap() {
        let g = FiniteGroup::cyclic(2);
        let lat = induced_lattice(&g, &Subgroup::trivial()).unwrap();
        assert_eq!(lat.rank(), 2);
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(lat.matrix(1), &swap);
    }

    #[test]
    fn induced_full_is_trivial_rank_one() {
        let g = FiniteGroup::cyclic(3);
        let lat = induced_lattice(&g, &Subgroup::full(&g)).unwrap();
        assert_eq!(lat.rank(), 1);
        for e in g.elements() {
            assert_eq!(lat.matrix(e), &IntMatrix::identity(1));
        }
    }

    #[test]
    fn induced_s3_c2_is_rank3_permutation() {
        let g = FiniteGroup::symmetric(3);
        let classes = enumerate_subgroups(&g).unwrap();
        let c2 = &classes[1].representative;
        let lat = induced_lattice(&g, c2).unwrap();
        assert_eq!(lat.rank(), 3);
        assert!(lat.is_permutation());
        // Coset enumeration oracle: three cosets, action transitive.
        let orbits = character_orbits(&lat, 1);
        // e1 = (1,0,0) should be in one orbit of size 3.
        let e1 = orbits
            .iter()
            .find(|o| o.representative == vec![Int::zero(), Int::zero(), Int::one()] ||
                      o.representative == vec![Int::one(), Int::zero(), Int::zero()])
            .or_else(|| orbits.iter().find(|o| o.orbit_size == 3 && o.representative.iter().filter(|x| x.is_one()).count() == 1));
        assert!(e1.is_some());
        assert_eq!(e1.unwrap().orbit_size, 3);
    }

    #[test]
    fn norm_one_c2_is_sign() {
        let g = FiniteGroup::cyclic(2);
        let lat = norm_one_lattice(&g);
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.matrix(1), &IntMatrix::from_rows(&[vec![-1]]));
    }

    #[test]
    fn norm_one_c3_has_order_three_action() {
        let g = FiniteGroup::cyclic(3);
        let lat = norm_one_lattice(&g);
        assert_eq!(lat.rank(), 2);
        let rho = lat.matrix(1);
        // ρ³ = I and ρ² + ρ + I = 0.
        assert_eq!(rho.mul(rho).mul(rho), IntMatrix::identity(2));
        let sum = rho.mul(rho).add(rho).add(&IntMatrix::identity(2));
        assert!(sum.is_zero());
    }

    #[test]
    fn norm_one_trivial_group_rank_zero() {
        let g = FiniteGroup::trivial();
        let lat = norm_one_lattice(&g);
        assert_eq!(lat.rank(), 0);
    }

    fn sign_lattice() -> GLattice {
        GLattice::new(
            1,
            FiniteGroup::cyclic(2),
            vec![
                IntMatrix::identity(1),
                IntMatrix::from_rows(&[vec![-1]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn weil_resolution_of_sign() {
        let lat = sign_lattice();
        let w = weil_resolution(&lat).unwrap();
        assert_eq!(w.big.rank(), 2);
        assert_eq!(w.quotient.rank(), 1);
        // Inclusion 1 ↦ (1, -1) in the coset basis.
        assert_eq!(w.inclusion.get(0, 0), &Int::one());
        assert_eq!(w.inclusion.get(1, 0), &Int::from(-1));
        // big is the swap lattice.
        assert_eq!(
            w.big.matrix(1),
            &IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])
        );
        // Quotient has trivial action.
        assert_eq!(w.quotient.matrix(1), &IntMatrix::identity(1));
    }

    #[test]
    fn weil_resolution_of_trivial_action() {
        let g = FiniteGroup::cyclic(2);
        let lat = GLattice::new(
            2,
            g,
            vec![IntMatrix::identity(2), IntMatrix::identity(2)],
        )
        .unwrap();
        let w = weil_resolution(&lat).unwrap();
        // Ḡ is trivial: inclusion is the identity, quotient rank 0.
        assert_eq!(w.big.rank(), 2);
        assert_eq!(w.quotient.rank(), 0);
        assert_eq!(w.inclusion, IntMatrix::identity(2));
    }

    #[test]
    fn weil_resolution_of_cubic_norm_one() {
        let lat = norm_one_lattice(&FiniteGroup::cyclic(3));
        let w = weil_resolution(&lat).unwrap();
        assert_eq!(w.big.rank(), 6);
        assert_eq!(w.quotient.rank(), 4);
        assert_eq!(lat.rank() + w.quotient.rank(), w.big.rank());
    }

    #[test]
    fn character_orbits_of_sign() {
        let lat = sign_lattice();
        let orbits = character_orbits(&lat, 2);
        // {0} stab C2, {±1} stab e, {±2} stab e.
        assert_eq!(orbits.len(), 3);
        let zero = orbits
            .iter()
            .find(|o| o.representative == vec![Int::zero()])
            .unwrap();
        assert_eq!(zero.stabilizer.order(), 2);
        assert_eq!(zero.orbit_size, 1);
        for o in &orbits {
            if o.representative != vec![Int::zero()] {
                assert_eq!(o.orbit_size, 2);
                assert_eq!(o.stabilizer.order(), 1);
            }
            // Orbit-stabilizer.
            assert_eq!(o.orbit_size * o.stabilizer.order(), 2);
        }
    }

    #[test]
    fn character_orbits_trivial_action() {
        let g = FiniteGroup::cyclic(2);
        let lat = GLattice::new(1, g, vec![IntMatrix::identity(1), IntMatrix::identity(1)]).unwrap();
        let orbits = character_orbits(&lat, 1);
        assert_eq!(orbits.len(), 3);
        assert!(orbits.iter().all(|o| o.stabilizer.order() == 2 && o.orbit_size == 1));
    }

    #[test]
    fn character_orbits_cubic_norm_one() {
        let lat = norm_one_lattice(&FiniteGroup::cyclic(3));
        let orbits = character_orbits(&lat, 1);
        // 9 vectors in the box: zero plus free orbits covering 8 vectors.
        let zero = orbits
            .iter()
            .find(|o| o.representative.iter().all(Int::is_zero))
            .unwrap();
        assert_eq!(zero.stabilizer.order(), 3);
        let nonzero: Vec<_> = orbits
            .iter()
            .filter(|o| !o.representative.iter().all(Int::is_zero))
            .collect();
        for o in &nonzero {
            assert_eq!(o.orbit_size, 3);
            assert_eq!(o.stabilizer.order(), 1);
        }
    }

    #[test]
    fn fixed_sublattice_examples() {
        let lat = sign_lattice();
        let full = Subgroup::full(lat.group());
        assert_eq!(fixed_sublattice(&lat, &full).unwrap().cols(), 0);
        assert_eq!(
            fixed_sublattice(&lat, &Subgroup::trivial()).unwrap(),
            IntMatrix::identity(1)
        );

        let reg = regular_lattice(&FiniteGroup::cyclic(2));
        let fixed = fixed_sublattice(&reg, &Subgroup::full(reg.group())).unwrap();
        assert_eq!(fixed.cols(), 1);
        // Basis vector (1, 1) up to sign.
        assert_eq!(fixed.get(0, 0), fixed.get(1, 0));
        assert!(fixed.get(0, 0).is_unit());
    }

    #[test]
    fn induced_contains_trivial_summand_on_restriction() {
        // fixed rank of ℤ[G/H] under H ≥ number of H-orbits on cosets.
        let g = FiniteGroup::symmetric(3);
        let classes = enumerate_subgroups(&g).unwrap();
        for class in &classes {
            let lat = induced_lattice(&g, &class.representative).unwrap();
            for class2 in &classes {
                let h = &class2.representative;
                let fixed = fixed_sublattice(&lat, h).unwrap();
                // Count H-orbits on the coset basis.
                let cosets = class.representative.left_cosets(&g);
                let mut coset_of = vec![0usize; g.order()];
                for (i, coset) in cosets.iter().enumerate() {
                    for &x in coset {
                        coset_of[x as usize] = i;
                    }
                }
                let mut orbit_reps = std::collections::BTreeSet::new();
                for (i, coset) in cosets.iter().enumerate() {
                    let orbit_min = h
                        .elements()
                        .iter()
                        .map(|&x| coset_of[g.mul(x, coset[0]) as usize])
                        .min()
                        .unwrap()
                        .min(i);
                    orbit_reps.insert(orbit_min);
                }
                assert!(fixed.cols() >= orbit_reps.len());
            }
        }
    }
}
