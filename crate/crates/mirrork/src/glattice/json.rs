//! The "glattice/1" JSON schema: a group given by Cayley table or
//! permutation generators, plus an action given on a generating set.

use super::group::{Elem, FiniteGroup};
use super::lattice::GLattice;
use crate::error::{Error, Result};
use crate::exactalg::{Int, IntMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: &str = "glattice/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GLatticeFile {
    pub version: String,
    pub group: GroupSpec,
    pub lattice: LatticeSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<u16>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perm_generators: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub rank: usize,
    /// element index (as a string key) -> rank x rank matrix
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
}

pub fn parse(json: &str) -> Result<GLattice> {
    let file: GLatticeFile = serde_json::from_str(json)?;
    from_file(&file)
}

pub fn from_file(file: &GLatticeFile) -> Result<GLattice> {
    if file.version != SCHEMA_VERSION {
        return Err(Error::validation(format!(
            "unknown schema version {:?}, expected {:?}",
            file.version, SCHEMA_VERSION
        )));
    }
    let group = match (&file.group.table, &file.group.perm_generators) {
        (Some(table), None) => {
            let g = FiniteGroup::from_table(table.clone(), None)?;
            if let Some(o) = file.group.order {
                if o != g.order() {
                    return Err(Error::validation("declared order does not match table"));
                }
            }
            g
        }
        (None, Some(gens)) => {
            let g = FiniteGroup::from_permutations(gens)?;
            if let Some(o) = file.group.order {
                if o != g.order() {
                    return Err(Error::validation(
                        "declared order does not match generated group",
                    ));
                }
            }
            g
        }
        _ => {
            return Err(Error::validation(
                "group must have exactly one of: table, perm_generators",
            ))
        }
    };

    let mut gens: BTreeMap<Elem, IntMatrix> = BTreeMap::new();
    for (key, rows) in &file.lattice.action {
        let idx: Elem = key
            .parse()
            .map_err(|_| Error::validation(format!("bad element index key {key:?}")))?;
        if rows.len() != file.lattice.rank
            || rows.iter().any(|r| r.len() != file.lattice.rank)
        {
            return Err(Error::validation(format!(
                "action matrix for element {idx} must be rank x rank"
            )));
        }
        gens.insert(idx, IntMatrix::from_rows(rows));
    }
    GLattice::from_generators(file.lattice.rank, group, &gens)
}

pub fn to_file(lat: &GLattice) -> GLatticeFile {
    let table = lat.group().table().clone();
    let mut action = BTreeMap::new();
    // Export the full action; readers may supply any generating subset.
    for g in lat.group().elements() {
        if g == 0 {
            continue;
        }
        let m = lat.matrix(g);
        let rows: Vec<Vec<i64>> = (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| m.get(r, c).to_i64().expect("action entries fit i64"))
                    .collect()
            })
            .collect();
        action.insert(g.to_string(), rows);
    }
    GLatticeFile {
        version: SCHEMA_VERSION.to_string(),
        group: GroupSpec {
            order: Some(lat.group().order()),
            table: Some(table),
            perm_generators: None,
        },
        lattice: LatticeSpec {
            rank: lat.rank(),
            action,
        },
    }
}

pub fn to_json(lat: &GLattice) -> String {
    serde_json::to_string_pretty(&to_file(lat)).expect("schema serializes")
}

/// Used by matrix export paths that require i64-range entries.
pub fn matrix_to_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    m.get(r, c)
                        .to_i64()
                        .ok_or_else(|| Error::unsupported("matrix entry exceeds i64 in export"))
                })
                .collect()
        })
        .collect()
}

pub fn int_vec_to_i64(v: &[Int]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::unsupported("integer exceeds i64 in export"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_sign_lattice_from_table() {
        let json = r#"{
            "version": "glattice/1",
            "group": {"order": 2, "table": [[0, 1], [1, 0]]},
            "lattice": {"rank": 1, "action": {"1": [[-1]]}}
        }"#;
        let lat = parse(json).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.matrix(1), &IntMatrix::from_rows(&[vec![-1]]));
    }

    #[test]
    fn parse_from_permutation_generators() {
        let json = r#"{
            "version": "glattice/1",
            "group": {"perm_generators": [[1, 0]]},
            "lattice": {"rank": 2, "action": {"1": [[0, 1], [1, 0]]}}
        }"#;
        let lat = parse(json).unwrap();
        assert_eq!(lat.group().order(), 2);
        assert_eq!(lat.rank(), 2);
    }

    #[test]
    fn reject_unknown_version_and_fields() {
        let bad_version = r#"{
            "version": "glattice/2",
            "group": {"order": 1, "table": [[0]]},
            "lattice": {"rank": 1, "action": {}}
        }"#;
        assert!(parse(bad_version).is_err());
        let unknown_field = r#"{
            "version": "glattice/1",
            "group": {"order": 1, "table": [[0]]},
            "lattice": {"rank": 1, "action": {}},
            "extra": 1
        }"#;
        assert!(parse(unknown_field).is_err());
    }

    #[test]
    fn reject_non_generating_action() {
        // C4 with the action specified only on the square of the generator.
        let json = r#"{
            "version": "glattice/1",
            "group": {"order": 4, "table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]},
            "lattice": {"rank": 1, "action": {"2": [[1]]}}
        }"#;
        assert!(parse(json).is_err());
    }

    #[test]
    fn roundtrip() {
        let lat = super::super::lattice::norm_one_lattice(&FiniteGroup::cyclic(3));
        let json = to_json(&lat);
        let back = parse(&json).unwrap();
        assert_eq!(back.rank(), lat.rank());
        for g in lat.group().elements() {
            assert_eq!(back.matrix(g), lat.matrix(g));
        }
    }
}
