//! Built-in example lattices with frozen expected values.
//!
//! Every expected value carries the identity of the independent oracle that
//! produced it: trivial cases are marked as such, rank-1 K-groups come from
//! the cofiber-sequence oracle, cyclic cohomology from the norm-kernel
//! oracle, induced-module cohomology from the induction isomorphism, and the
//! remaining K₀ values from the presentation routes that the pipeline
//! cross-checks cellularly.

use crate::error::{Error, Result};
use crate::exactalg::{AbGroup, IntMatrix};
use crate::glattice::{
    enumerate_subgroups, induced_lattice, norm_one_lattice, regular_lattice, FiniteGroup,
    GLattice,
};

#[derive(Clone)]
pub struct Expected {
    /// What is pinned: "k0" or "h1_full".
    pub quantity: &'static str,
    pub value: AbGroup,
    /// Which independent computation produced the frozen value.
    pub oracle: &'static str,
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub lattice: GLattice,
    pub note: &'static str,
    pub expected: Vec<Expected>,
}

pub const NAMES: &[&str] = &[
    "split1",
    "split2",
    "split3",
    "sign",
    "norm_one_cyclic2",
    "norm_one_cyclic3",
    "norm_one_cyclic4",
    "regular_c2",
    "regular_c3",
    "regular_s3",
    "induced_s3_c2",
    "sign_plus_sign",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

fn ab(free: usize, torsion: &[i64]) -> AbGroup {
    AbGroup::from_schema(free, torsion).expect("catalog torsion chains")
}

fn sign_lattice() -> GLattice {
    GLattice::new(
        1,
        FiniteGroup::cyclic(2),
        vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
    )
    .expect("sign lattice is valid")
}

fn split(n: usize) -> GLattice {
    GLattice::new(n, FiniteGroup::trivial(), vec![IntMatrix::identity(n)])
        .expect("split lattice is valid")
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    let entry = match name {
        "split1" | "split2" | "split3" => {
            let n = name.as_bytes()[5] - b'0';
            CatalogEntry {
                name: match n {
                    1 => "split1",
                    2 => "split2",
                    _ => "split3",
                },
                lattice: split(n as usize),
                note: "split torus: trivial Galois action on a free lattice",
                expected: vec![
                    Expected {
                        quantity: "k0",
                        value: ab(1, &[]),
                        oracle: "trivial (K0 of a split torus)",
                    },
                    Expected {
                        quantity: "h1_full",
                        value: ab(0, &[]),
                        oracle: "trivial (no action)",
                    },
                ],
            }
        }
        "sign" => CatalogEntry {
            name: "sign",
            lattice: sign_lattice(),
            note: "rank-1 norm-one torus of a quadratic extension; the \
                   generator reflects the circle",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[2]),
                    oracle: "swan-rank1 cofiber (coker of x2 on K0)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[2]),
                    oracle: "cyclic norm-kernel oracle",
                },
            ],
        },
        "norm_one_cyclic2" => CatalogEntry {
            name: "norm_one_cyclic2",
            lattice: norm_one_lattice(&FiniteGroup::cyclic(2)),
            note: "norm-one construction over C2; isomorphic to the sign lattice",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[2]),
                    oracle: "swan-rank1 cofiber (via the sign model)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[2]),
                    oracle: "cyclic norm-kernel oracle",
                },
            ],
        },
        "norm_one_cyclic3" => CatalogEntry {
            name: "norm_one_cyclic3",
            lattice: norm_one_lattice(&FiniteGroup::cyclic(3)),
            note: "norm-one torus of a cyclic cubic extension; hexagonal \
                   symmetry on the plane",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[3, 3]),
                    oracle: "presentation SNF (4 generators, relations 3c_i = *)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[3]),
                    oracle: "cyclic norm-kernel oracle",
                },
            ],
        },
        "norm_one_cyclic4" => CatalogEntry {
            name: "norm_one_cyclic4",
            lattice: norm_one_lattice(&FiniteGroup::cyclic(4)),
            note: "norm-one torus of a cyclic quartic extension, rank 3, \
                   non-monomial action",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[2, 2, 4]),
                    oracle: "presentation SNF over the subgroup chain e < C2 < C4",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[4]),
                    oracle: "cyclic norm-kernel oracle",
                },
            ],
        },
        "regular_c2" => CatalogEntry {
            name: "regular_c2",
            lattice: regular_lattice(&FiniteGroup::cyclic(2)),
            note: "restriction of scalars of a split torus along a quadratic \
                   extension; coordinate swap on the square torus",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[]),
                    oracle: "induced-module cohomology vanishes (induction isomorphism)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[]),
                    oracle: "cyclic norm-kernel oracle",
                },
            ],
        },
        "regular_c3" => CatalogEntry {
            name: "regular_c3",
            lattice: regular_lattice(&FiniteGroup::cyclic(3)),
            note: "restriction of scalars along a cubic extension; 3-cycle \
                   on the coordinates of the 3-torus",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[]),
                    oracle: "induced-module cohomology vanishes (induction isomorphism)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[]),
                    oracle: "cyclic norm-kernel oracle",
                },
            ],
        },
        "regular_s3" => CatalogEntry {
            name: "regular_s3",
            lattice: regular_lattice(&FiniteGroup::symmetric(3)),
            note: "restriction of scalars along a degree-6 extension with \
                   group S3; rank 6, left translation on coordinates",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[]),
                    oracle: "induced-module cohomology vanishes (induction isomorphism)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[]),
                    oracle: "induced-module cohomology vanishes (induction isomorphism)",
                },
            ],
        },
        "induced_s3_c2" => CatalogEntry {
            name: "induced_s3_c2",
            lattice: {
                let g = FiniteGroup::symmetric(3);
                let classes = enumerate_subgroups(&g)?;
                induced_lattice(&g, &classes[1].representative)?
            },
            note: "coset lattice of an order-2 subgroup of S3: the standard \
                   rank-3 permutation action",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[]),
                    oracle: "induced-module cohomology vanishes (induction isomorphism)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[]),
                    oracle: "induced-module cohomology vanishes (induction isomorphism)",
                },
            ],
        },
        "sign_plus_sign" => CatalogEntry {
            name: "sign_plus_sign",
            lattice: {
                let s = sign_lattice();
                s.direct_sum(&s)?
            },
            note: "rank-2 torus with the diagonal C2 acting by -1 on both \
                   coordinates; four isolated fixed points",
            expected: vec![
                Expected {
                    quantity: "k0",
                    value: ab(1, &[2, 2, 2]),
                    oracle: "presentation SNF (4+1 generators, relations 2c_i = *)",
                },
                Expected {
                    quantity: "h1_full",
                    value: ab(0, &[2, 2]),
                    oracle: "cyclic norm-kernel oracle (summandwise)",
                },
            ],
        },
        other => {
            return Err(Error::validation(format!(
                "unknown catalog entry {other:?} (see `catalog list`)"
            )))
        }
    };
    Ok(entry)
}

pub fn all() -> Result<Vec<CatalogEntry>> {
    NAMES.iter().map(|n| get(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glattice::Subgroup;

    #[test]
    fn every_entry_validates() {
        for entry in all().unwrap() {
            entry.lattice.validate_action().unwrap();
        }
    }

    #[test]
    fn get_unknown_fails() {
        assert!(get("no_such_lattice").is_err());
    }

    #[test]
    fn sign_entry_shape() {
        let e = get("sign").unwrap();
        assert_eq!(e.lattice.rank(), 1);
        assert_eq!(
            e.lattice.matrix(1),
            &IntMatrix::from_rows(&[vec![-1]])
        );
    }

    #[test]
    fn norm_one_cyclic3_entry() {
        let e = get("norm_one_cyclic3").unwrap();
        assert_eq!(e.lattice.rank(), 2);
        let rho = e.lattice.matrix(1);
        assert_eq!(rho.mul(rho).mul(rho), IntMatrix::identity(2));
    }

    #[test]
    fn frozen_h1_values_match_recomputation() {
        for entry in all().unwrap() {
            let full = Subgroup::full(entry.lattice.group());
            let h1 = crate::groupcoh::h1(&entry.lattice, &full).unwrap().group;
            for exp in &entry.expected {
                if exp.quantity == "h1_full" {
                    assert_eq!(h1, exp.value, "{}: frozen H¹ drifted", entry.name);
                }
            }
        }
    }

    #[test]
    fn frozen_k0_values_match_mp_route() {
        for entry in all().unwrap() {
            let mp = crate::bredon::mp_k0(&entry.lattice).unwrap().group;
            for exp in &entry.expected {
                if exp.quantity == "k0" {
                    assert_eq!(mp, exp.value, "{}: frozen K₀ drifted", entry.name);
                }
            }
        }
    }

    #[test]
    fn norm_one_c2_isomorphic_to_sign_by_small_conjugation() {
        // Search unimodular 1x1 conjugations (±1) carrying one action to
        // the other.
        let a = get("sign").unwrap().lattice;
        let b = get("norm_one_cyclic2").unwrap().lattice;
        let mut found = false;
        for p in [-1i64, 1] {
            let pm = IntMatrix::from_rows(&[vec![p]]);
            let pinv = IntMatrix::from_rows(&[vec![p]]); // self-inverse
            let conjugated = pm.mul(a.matrix(1)).mul(&pinv);
            if &conjugated == b.matrix(1) {
                found = true;
            }
        }
        assert!(found);
    }
}
