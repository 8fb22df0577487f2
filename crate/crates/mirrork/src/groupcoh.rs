//! Group cohomology in degrees 0 and 1 with lattice coefficients.
//!
//! `H¹(H, Λ)` is computed from the full cocycle equation system
//! `φ(gh) = φ(g) + ρ(g)φ(h)` over all pairs, modulo principal cocycles
//! `λ ↦ ρ(h)λ − λ`. Degree 1 is all the K-theory pipeline needs: it carries
//! `Pic` of the torus over each intermediate field and the component group
//! `π₀` of the fixed-point torus.

use crate::error::{Error, Result};
use crate::exactalg::{
    kernel_basis, presented_quotient, solve, solve_matrix, AbGroup, Int, IntMatrix,
    QuotientPresentation,
};
use crate::glattice::{Elem, GLattice, Subgroup};
use std::collections::HashMap;
use std::rc::Rc;

/// `H¹(H, Λ)` together with enough data to express any cocycle in the
/// canonical coordinates of the answer.
pub struct CohomologyResult {
    pub group: AbGroup,
    /// Columns: a representative cocycle for each canonical generator, as a
    /// stacked vector (φ(h₀), φ(h₁), …) over the subgroup's sorted elements.
    pub cocycle_basis: IntMatrix,
    subgroup: Subgroup,
    rank: usize,
    z1_basis: IntMatrix,
    quotient: QuotientPresentation,
}

impl CohomologyResult {
    /// Coordinates of an arbitrary cocycle (stacked as above) in the
    /// canonical generators of `H¹`.
    pub fn cocycle_coords(&self, cocycle: &[Int]) -> Result<Vec<Int>> {
        let x = solve(&self.z1_basis, cocycle).ok_or_else(|| {
            Error::internal("vector is not a cocycle for this subgroup".to_string())
        })?;
        Ok(self.quotient.coords(&x))
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Position of a subgroup element in the stacked cocycle vector.
    fn block_of(&self, e: Elem) -> usize {
        self.subgroup
            .elements()
            .binary_search(&e)
            .expect("element of subgroup")
    }

    pub fn lattice_rank(&self) -> usize {
        self.rank
    }
}

/// First cohomology of a subgroup acting on the lattice.
pub fn h1(lat: &GLattice, h: &Subgroup) -> Result<CohomologyResult> {
    h.validate(lat.group())?;
    let r = lat.rank();
    let elems = h.elements();
    let m = elems.len();
    let unknowns = m * r;

    // Cocycle equations for every pair (a, b):
    //   φ(ab) − φ(a) − ρ(a)·φ(b) = 0.
    let mut eqs = IntMatrix::zeros(m * m * r, unknowns);
    let block_of = |e: Elem| elems.binary_search(&e).unwrap();
    let mut row = 0;
    for &a in elems {
        let rho_a = lat.matrix(a);
        let a_block = block_of(a);
        for &b in elems {
            let ab_block = block_of(lat.group().mul(a, b));
            let b_block = block_of(b);
            for i in 0..r {
                let cur = eqs.get(row + i, ab_block * r + i).add(&Int::one());
                eqs.set(row + i, ab_block * r + i, cur);
                let cur = eqs.get(row + i, a_block * r + i).sub(&Int::one());
                eqs.set(row + i, a_block * r + i, cur);
                for j in 0..r {
                    let v = rho_a.get(i, j);
                    if !v.is_zero() {
                        let cur = eqs.get(row + i, b_block * r + j).sub(v);
                        eqs.set(row + i, b_block * r + j, cur);
                    }
                }
            }
            row += r;
        }
    }

    let z1 = kernel_basis(&eqs);

    // Principal cocycles λ ↦ ρ(h)λ − λ, one column per lattice basis vector.
    let mut principal = IntMatrix::zeros(unknowns, r);
    for (k, &e) in elems.iter().enumerate() {
        let d = lat.matrix(e).sub(&IntMatrix::identity(r));
        for i in 0..r {
            for j in 0..r {
                principal.set(k * r + i, j, d.get(i, j).clone());
            }
        }
    }
    let coords = solve_matrix(&z1, &principal)
        .ok_or_else(|| Error::internal("principal cocycles must be cocycles"))?;
    let quotient = presented_quotient(z1.cols(), &coords.transpose());
    let cocycle_basis = z1.mul(&quotient.generator_reps);

    Ok(CohomologyResult {
        group: quotient.group.clone(),
        cocycle_basis,
        subgroup: h.clone(),
        rank: r,
        z1_basis: z1,
        quotient,
    })
}

/// The restriction map `H¹(H, Λ) → H¹(K, Λ)` for `K ≤ H`, as a matrix in the
/// canonical coordinates of both groups (rows: target generators).
pub fn h1_restriction(
    lat: &GLattice,
    k_result: &CohomologyResult,
    h_result: &CohomologyResult,
) -> Result<IntMatrix> {
    let k = &k_result.subgroup;
    let h = &h_result.subgroup;
    if !k.is_subgroup_of(h) {
        return Err(Error::validation(
            "restriction requires K to be contained in H",
        ));
    }
    let r = lat.rank();
    let mut cols = Vec::new();
    for j in 0..h_result.group.num_generators() {
        let cocycle = h_result.cocycle_basis.column(j);
        let mut restricted = Vec::with_capacity(k.order() * r);
        for &e in k.elements() {
            let hb = h_result.block_of(e);
            restricted.extend_from_slice(&cocycle[hb * r..(hb + 1) * r]);
        }
        cols.push(k_result.cocycle_coords(&restricted)?);
    }
    Ok(IntMatrix::from_columns(
        k_result.group.num_generators(),
        &cols,
    ))
}

/// The conjugation isomorphism `c_a: H¹(H, Λ) → H¹(aHa⁻¹, Λ)` given by
/// `(c_a φ)(h') = ρ(a)·φ(a⁻¹ h' a)`.
pub fn h1_conjugation(
    lat: &GLattice,
    from: &CohomologyResult,
    to: &CohomologyResult,
    a: Elem,
) -> Result<IntMatrix> {
    let g = lat.group();
    let conj = from.subgroup.conjugate(g, a);
    if conj != to.subgroup {
        return Err(Error::validation(
            "conjugation target subgroup does not match",
        ));
    }
    let r = lat.rank();
    let rho_a = lat.matrix(a);
    let a_inv = g.inv(a);
    let mut cols = Vec::new();
    for j in 0..from.group.num_generators() {
        let phi = from.cocycle_basis.column(j);
        let mut psi = Vec::with_capacity(to.subgroup.order() * r);
        for &hp in to.subgroup.elements() {
            let pre = g.mul(g.mul(a_inv, hp), a);
            let hb = from.block_of(pre);
            let val = rho_a.mul_vec(&phi[hb * r..(hb + 1) * r]);
            psi.extend(val);
        }
        cols.push(to.cocycle_coords(&psi)?);
    }
    Ok(IntMatrix::from_columns(to.group.num_generators(), &cols))
}

/// Components and identity-component dimension of the fixed-point torus:
/// `π₀(𝕋^H) ≅ H¹(H, Λ)`, identity component the torus of `Λ^H`.
pub fn pi0_fixed_points(lat: &GLattice, h: &Subgroup) -> Result<(AbGroup, usize)> {
    let coh = h1(lat, h)?;
    let fixed = crate::glattice::fixed_sublattice(lat, h)?;
    Ok((coh.group, fixed.cols()))
}

/// Read-mostly cache of `h1` results per subgroup, for one lattice. Repeated
/// population is idempotent.
pub struct H1Cache<'a> {
    lat: &'a GLattice,
    results: HashMap<Vec<Elem>, Rc<CohomologyResult>>,
}

impl<'a> H1Cache<'a> {
    pub fn new(lat: &'a GLattice) -> Self {
        H1Cache {
            lat,
            results: HashMap::new(),
        }
    }

    pub fn lattice(&self) -> &'a GLattice {
        self.lat
    }

    pub fn get(&mut self, h: &Subgroup) -> Result<Rc<CohomologyResult>> {
        if let Some(r) = self.results.get(h.elements()) {
            return Ok(Rc::clone(r));
        }
        let r = Rc::new(h1(self.lat, h)?);
        self.results.insert(h.elements().to_vec(), Rc::clone(&r));
        Ok(r)
    }

    pub fn restriction(&mut self, k: &Subgroup, h: &Subgroup) -> Result<IntMatrix> {
        let kr = self.get(k)?;
        let hr = self.get(h)?;
        h1_restriction(self.lat, &kr, &hr)
    }

    pub fn conjugation(&mut self, h: &Subgroup, a: Elem) -> Result<(Subgroup, IntMatrix)> {
        let target = h.conjugate(self.lat.group(), a);
        let from = self.get(h)?;
        let to = self.get(&target)?;
        let m = h1_conjugation(self.lat, &from, &to, a)?;
        Ok((target, m))
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Independent check for cyclic subgroups: H¹ = ker(Norm)/im(σ − 1).

    use super::*;

    pub fn h1_cyclic(lat: &GLattice, h: &Subgroup) -> AbGroup {
        let g = lat.group();
        if h.order() == 1 {
            return AbGroup::trivial();
        }
        let gen = h
            .elements()
            .iter()
            .copied()
            .find(|&x| x != 0 && g.element_order(x) == h.order())
            .expect("subgroup must be cyclic for the oracle");
        let r = lat.rank();
        let mut norm = IntMatrix::zeros(r, r);
        let mut x = 0 as Elem;
        for _ in 0..h.order() {
            norm = norm.add(lat.matrix(x));
            x = g.mul(x, gen);
        }
        let ker = kernel_basis(&norm);
        let delta = lat.matrix(gen).sub(&IntMatrix::identity(r));
        let coords = solve_matrix(&ker, &delta).expect("im(σ-1) lies in ker(norm)");
        presented_quotient(ker.cols(), &coords.transpose()).group
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::h1_cyclic;
    use super::*;
    use crate::glattice::{norm_one_lattice, regular_lattice, FiniteGroup};

    fn sign_lattice() -> GLattice {
        GLattice::new(
            1,
            FiniteGroup::cyclic(2),
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap()
    }

    #[test]
    fn h1_sign_is_z2() {
        let lat = sign_lattice();
        let full = Subgroup::full(lat.group());
        let res = h1(&lat, &full).unwrap();
        assert_eq!(res.group, AbGroup::cyclic(2));
        assert_eq!(h1_cyclic(&lat, &full), AbGroup::cyclic(2));
    }

    #[test]
    fn h1_trivial_action_vanishes() {
        let g = FiniteGroup::cyclic(4);
        let lat = GLattice::new(2, g, vec![IntMatrix::identity(2); 4]).unwrap();
        let full = Subgroup::full(lat.group());
        assert!(h1(&lat, &full).unwrap().group.is_trivial());
    }

    #[test]
    fn h1_cubic_norm_one_is_z3() {
        let lat = norm_one_lattice(&FiniteGroup::cyclic(3));
        let full = Subgroup::full(lat.group());
        let res = h1(&lat, &full).unwrap();
        assert_eq!(res.group, AbGroup::cyclic(3));
        assert_eq!(h1_cyclic(&lat, &full), AbGroup::cyclic(3));
    }

    #[test]
    fn h1_killed_by_subgroup_order() {
        for lat in [
            sign_lattice(),
            norm_one_lattice(&FiniteGroup::cyclic(3)),
            norm_one_lattice(&FiniteGroup::cyclic(4)),
            regular_lattice(&FiniteGroup::cyclic(2)),
        ] {
            for class in crate::glattice::enumerate_subgroups(lat.group()).unwrap() {
                let h = &class.representative;
                let res = h1(&lat, h).unwrap();
                for d in res.group.torsion() {
                    assert!(
                        d.divides(&Int::from(h.order() as i64)),
                        "factor {d} must divide |H| = {}",
                        h.order()
                    );
                }
                assert_eq!(res.group.free_rank(), 0, "H¹ is finite");
            }
        }
    }

    #[test]
    fn restriction_identity_and_zero_target() {
        let lat = sign_lattice();
        let full = Subgroup::full(lat.group());
        let trivial = Subgroup::trivial();
        let hres = h1(&lat, &full).unwrap();
        let kres = h1(&lat, &trivial).unwrap();
        let id = h1_restriction(&lat, &hres, &hres).unwrap();
        assert_eq!(id, IntMatrix::identity(1));
        let z = h1_restriction(&lat, &kres, &hres).unwrap();
        assert_eq!(z.rows(), 0);
        assert_eq!(z.cols(), 1);
    }

    #[test]
    fn restriction_on_direct_sum_lattice() {
        // ℤ[C2] ⊕ sign: H¹(C2) = 0 ⊕ ℤ/2; restriction to e is the zero map.
        let g = FiniteGroup::cyclic(2);
        let reg = regular_lattice(&g);
        let lat = reg.direct_sum(&sign_lattice()).unwrap();
        let full = Subgroup::full(lat.group());
        let res = h1(&lat, &full).unwrap();
        assert_eq!(res.group, AbGroup::cyclic(2));
        let e = h1(&lat, &Subgroup::trivial()).unwrap();
        assert!(e.group.is_trivial());
        let m = h1_restriction(&lat, &e, &res).unwrap();
        assert_eq!(m.rows(), 0);
    }

    #[test]
    fn restriction_functoriality_on_c4() {
        let lat = norm_one_lattice(&FiniteGroup::cyclic(4));
        let classes = crate::glattice::enumerate_subgroups(lat.group()).unwrap();
        assert_eq!(classes.len(), 3);
        let e = h1(&lat, &classes[0].representative).unwrap();
        let c2 = h1(&lat, &classes[1].representative).unwrap();
        let c4 = h1(&lat, &classes[2].representative).unwrap();
        let r_e_c2 = h1_restriction(&lat, &e, &c2).unwrap();
        let r_c2_c4 = h1_restriction(&lat, &c2, &c4).unwrap();
        let r_e_c4 = h1_restriction(&lat, &e, &c4).unwrap();
        let composite = r_e_c2.mul(&r_c2_c4);
        for j in 0..composite.cols() {
            let got = e.group.reduce(&composite.column(j));
            let want = e.group.reduce(&r_e_c4.column(j));
            assert_eq!(got, want);
        }
    }

    #[test]
    fn pi0_examples() {
        let lat = sign_lattice();
        let (components, rank) = pi0_fixed_points(&lat, &Subgroup::full(lat.group())).unwrap();
        assert_eq!(components, AbGroup::cyclic(2));
        assert_eq!(rank, 0);

        let g = FiniteGroup::trivial();
        let split = GLattice::new(2, g, vec![IntMatrix::identity(2)]).unwrap();
        let (components, rank) = pi0_fixed_points(&split, &Subgroup::trivial()).unwrap();
        assert!(components.is_trivial());
        assert_eq!(rank, 2);

        let cubic = norm_one_lattice(&FiniteGroup::cyclic(3));
        let (components, rank) =
            pi0_fixed_points(&cubic, &Subgroup::full(cubic.group())).unwrap();
        assert_eq!(components, AbGroup::cyclic(3));
        assert_eq!(rank, 0);
    }

    #[test]
    fn cyclic_oracle_cross_check_on_small_lattices() {
        let lats = vec![
            sign_lattice(),
            norm_one_lattice(&FiniteGroup::cyclic(2)),
            norm_one_lattice(&FiniteGroup::cyclic(3)),
            norm_one_lattice(&FiniteGroup::cyclic(4)),
            regular_lattice(&FiniteGroup::cyclic(2)),
            regular_lattice(&FiniteGroup::cyclic(3)),
        ];
        for lat in &lats {
            for class in crate::glattice::enumerate_subgroups(lat.group()).unwrap() {
                let h = &class.representative;
                let got = h1(lat, h).unwrap().group;
                let want = h1_cyclic(lat, h);
                assert_eq!(got, want, "H¹ mismatch on subgroup {:?}", h);
            }
        }
    }

    #[test]
    fn conjugation_is_isomorphism_on_s3_lattice() {
        // The three C2 subgroups of S3 acting on ℤ[S3/C2].
        let g = FiniteGroup::symmetric(3);
        let classes = crate::glattice::enumerate_subgroups(&g).unwrap();
        let c2 = classes[1].representative.clone();
        let lat = crate::glattice::induced_lattice(&g, &c2).unwrap();
        let from = h1(&lat, &c2).unwrap();
        for a in g.elements() {
            let target = c2.conjugate(&g, a);
            let to = h1(&lat, &target).unwrap();
            let m = h1_conjugation(&lat, &from, &to, a).unwrap();
            assert_eq!(m.rows(), to.group.num_generators());
            assert_eq!(m.cols(), from.group.num_generators());
            assert_eq!(from.group, to.group, "conjugate subgroups give equal H¹");
        }
    }
}
