//! Cross-module integration checks over the catalog: backend independence,
//! subdivision invariance, the Weil resolution contract, orbit counting, and
//! the fixed-point component law on the small entries. The acceptance suite
//! runs the full-scale versions; these stay quick enough for every test run.

use mirrork::bredon::{chain_complex, constant_z, homology};
use mirrork::catalog;
use mirrork::eqcell::{build_complex, fixed_subcomplex, Backend, BuildOptions};
use mirrork::exactalg::{rank, smith_normal_form, AbGroup, Int};
use mirrork::glattice::{character_orbits, enumerate_subgroups, weil_resolution, Subgroup};
use mirrork::groupcoh::h1;

fn opts(backend: Backend) -> BuildOptions {
    BuildOptions {
        backend,
        ..Default::default()
    }
}

fn bredon_homology(x: &mirrork::eqcell::EquivariantCellComplex) -> Vec<AbGroup> {
    let z = constant_z(x.lattice().group()).unwrap();
    homology(&chain_complex(x, &z).unwrap()).unwrap()
}

/// Small entries where both backends apply (monomial and rank ≤ 3).
fn both_backend_entries() -> Vec<&'static str> {
    vec![
        "split1",
        "split2",
        "split3",
        "sign",
        "norm_one_cyclic2",
        "regular_c2",
        "regular_c3",
        "induced_s3_c2",
        "sign_plus_sign",
    ]
}

#[test]
fn backend_independence_of_bredon_homology() {
    for name in both_backend_entries() {
        let entry = catalog::get(name).unwrap();
        let cubical = build_complex(&entry.lattice, &opts(Backend::Cubical)).unwrap();
        let delone = build_complex(&entry.lattice, &opts(Backend::Delone)).unwrap();
        let hc = bredon_homology(&cubical);
        let hd = bredon_homology(&delone);
        assert_eq!(hc, hd, "backend mismatch on {name}");
    }
}

#[test]
fn subdivision_invariance_of_homology() {
    for name in ["sign", "split2", "norm_one_cyclic3", "regular_c2"] {
        let entry = catalog::get(name).unwrap();
        let x = build_complex(&entry.lattice, &BuildOptions::default()).unwrap();
        let sub = x.barycentric_subdivide(2_000_000).unwrap();
        assert_eq!(
            x.underlying_homology(),
            sub.underlying_homology(),
            "underlying homology changed under subdivision of {name}"
        );
        assert_eq!(
            bredon_homology(&x),
            bredon_homology(&sub),
            "Bredon homology changed under subdivision of {name}"
        );
    }
}

#[test]
fn weil_resolution_contract_over_catalog() {
    for entry in catalog::all().unwrap() {
        let w = weil_resolution(&entry.lattice).unwrap();
        // Rank additivity.
        assert_eq!(
            w.big.rank(),
            entry.lattice.rank() + w.quotient.rank(),
            "{}",
            entry.name
        );
        // Split injectivity: all invariant factors of the inclusion are 1.
        let (_, d, _) = smith_normal_form(&w.inclusion);
        for i in 0..entry.lattice.rank() {
            assert!(d.get(i, i).is_one(), "{} inclusion factor", entry.name);
        }
        // Equivariance.
        for g in entry.lattice.group().elements() {
            assert_eq!(
                w.big.matrix(g).mul(&w.inclusion),
                w.inclusion.mul(entry.lattice.matrix(g)),
                "{} equivariance at {g}",
                entry.name
            );
        }
        // projection ∘ inclusion = 0 and the projection is onto a free
        // quotient of full rank.
        assert!(w.projection.mul(&w.inclusion).is_zero());
        assert_eq!(rank(&w.projection), w.quotient.rank());
    }
}

#[test]
fn character_orbit_stabilizer_relation() {
    for entry in catalog::all().unwrap() {
        if entry.lattice.rank() > 3 {
            continue; // box enumeration grows as 3^rank
        }
        let orbits = character_orbits(&entry.lattice, 1);
        let order = entry.lattice.group().order();
        let mut covered = 0usize;
        for o in &orbits {
            assert_eq!(
                o.orbit_size * o.stabilizer.order(),
                order,
                "{}: orbit-stabilizer",
                entry.name
            );
            covered += 1;
            // Representative is fixed exactly by its stabilizer.
            for &g in o.stabilizer.elements() {
                assert_eq!(entry.lattice.apply(g, &o.representative), o.representative);
            }
        }
        assert!(covered >= 1);
    }
}

#[test]
fn fixed_point_law_small_entries() {
    for name in [
        "sign",
        "split2",
        "norm_one_cyclic3",
        "norm_one_cyclic4",
        "regular_c2",
        "induced_s3_c2",
        "sign_plus_sign",
    ] {
        let entry = catalog::get(name).unwrap();
        let x = build_complex(&entry.lattice, &BuildOptions::default()).unwrap();
        for class in enumerate_subgroups(entry.lattice.group()).unwrap() {
            let h = &class.representative;
            let fixed = fixed_subcomplex(&x, h).unwrap();
            let coh = h1(&entry.lattice, h).unwrap();
            let count = coh
                .group
                .order()
                .and_then(|o| o.to_i64())
                .expect("H¹ is finite");
            assert_eq!(
                fixed.component_count as i64, count,
                "{name}: |π₀(X^H)| vs |H¹| for |H| = {}",
                h.order()
            );
            let fixed_rank = mirrork::glattice::fixed_sublattice(&entry.lattice, h)
                .unwrap()
                .cols();
            for &(v, dim) in &fixed.components {
                assert_eq!(
                    dim, fixed_rank,
                    "{name}: component at vertex {v} has wrong dimension"
                );
            }
        }
    }
}

#[test]
fn builds_are_deterministic() {
    for name in ["sign", "norm_one_cyclic3", "induced_s3_c2"] {
        let entry = catalog::get(name).unwrap();
        let a = build_complex(&entry.lattice, &BuildOptions::default()).unwrap();
        let b = build_complex(&entry.lattice, &BuildOptions::default()).unwrap();
        assert_eq!(a.num_cells(), b.num_cells());
        for p in 0..=a.dimension() {
            for (ca, cb) in a.cells(p).iter().zip(b.cells(p)) {
                assert_eq!(ca.vertices, cb.vertices);
                assert_eq!(ca.stabilizer, cb.stabilizer);
                assert_eq!(ca.barycenter, cb.barycenter);
            }
            assert_eq!(a.orbit_reps(p), b.orbit_reps(p));
        }
    }
}

#[test]
fn h1_annihilated_by_group_order_over_catalog() {
    for entry in catalog::all().unwrap() {
        for class in enumerate_subgroups(entry.lattice.group()).unwrap() {
            let h = &class.representative;
            let res = h1(&entry.lattice, h).unwrap();
            assert!(res.group.is_finite());
            for d in res.group.torsion() {
                assert!(
                    d.divides(&Int::from(h.order() as i64)),
                    "{}: invariant factor {d} exceeds |H| = {}",
                    entry.name,
                    h.order()
                );
            }
        }
    }
}
