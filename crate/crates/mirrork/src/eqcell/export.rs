//! The "eqcw/1" JSON export of a built complex: exact vertex coordinates,
//! boundary lists, stabilizers, and the action permutations. Used by
//! golden-file tests and for inspection.

use super::EquivariantCellComplex;
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "eqcw/1";

#[derive(Serialize)]
pub struct ComplexFile {
    pub version: String,
    pub rank: usize,
    /// Exact rational coordinates as "p/q" strings, one list per vertex.
    pub vertices: Vec<Vec<String>>,
    /// cells[p] lists each degree-p cell.
    pub cells: Vec<Vec<CellOut>>,
    /// action[g][p][cell] = [image, sign]
    pub action: Vec<Vec<Vec<(u32, i8)>>>,
}

#[derive(Serialize)]
pub struct CellOut {
    pub vertices: Vec<u32>,
    /// [face index, incidence sign]
    pub boundary: Vec<(u32, i8)>,
    pub stabilizer: Vec<u16>,
}

pub fn to_file(x: &EquivariantCellComplex) -> ComplexFile {
    let vertices = x
        .vertex_coords()
        .iter()
        .map(|coords| {
            coords
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect()
        })
        .collect();
    let cells = (0..=x.dimension())
        .map(|p| {
            x.cells(p)
                .iter()
                .map(|c| CellOut {
                    vertices: c.vertices.clone(),
                    boundary: c.boundary.iter().map(|b| (b.face, b.sign)).collect(),
                    stabilizer: c.stabilizer.clone(),
                })
                .collect()
        })
        .collect();
    let action = x
        .lattice()
        .group()
        .elements()
        .map(|g| {
            (0..=x.dimension())
                .map(|p| {
                    (0..x.cells(p).len())
                        .map(|c| x.action(g, p, c))
                        .collect()
                })
                .collect()
        })
        .collect();
    ComplexFile {
        version: SCHEMA_VERSION.to_string(),
        rank: x.dimension(),
        vertices,
        cells,
        action,
    }
}

pub fn to_json(x: &EquivariantCellComplex) -> String {
    serde_json::to_string_pretty(&to_file(x)).expect("complex serializes")
}

#[cfg(test)]
mod tests {
    use super::super::{build_complex, Backend, BuildOptions};
    use crate::exactalg::IntMatrix;
    use crate::glattice::{FiniteGroup, GLattice};

    #[test]
    fn sign_complex_golden_json() {
        let lat = GLattice::new(
            1,
            FiniteGroup::cyclic(2),
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let x = build_complex(
            &lat,
            &BuildOptions {
                backend: Backend::Cubical,
                ..Default::default()
            },
        )
        .unwrap();
        let json = super::to_json(&x);
        let expected = r#"{
  "version": "eqcw/1",
  "rank": 1,
  "vertices": [
    [
      "0/1"
    ],
    [
      "1/2"
    ]
  ],
  "cells": [
    [
      {
        "vertices": [
          0
        ],
        "boundary": [],
        "stabilizer": [
          0,
          1
        ]
      },
      {
        "vertices": [
          1
        ],
        "boundary": [],
        "stabilizer": [
          0,
          1
        ]
      }
    ],
    [
      {
        "vertices": [
          0,
          1
        ],
        "boundary": [
          [
            1,
            1
          ],
          [
            0,
            -1
          ]
        ],
        "stabilizer": [
          0
        ]
      },
      {
        "vertices": [
          0,
          1
        ],
        "boundary": [
          [
            0,
            1
          ],
          [
            1,
            -1
          ]
        ],
        "stabilizer": [
          0
        ]
      }
    ]
  ],
  "action": [
    [
      [
        [
          0,
          1
        ],
        [
          1,
          1
        ]
      ],
      [
        [
          0,
          1
        ],
        [
          1,
          1
        ]
      ]
    ],
    [
      [
        [
          0,
          1
        ],
        [
          1,
          1
        ]
      ],
      [
        [
          1,
          -1
        ],
        [
          0,
          -1
        ]
      ]
    ]
  ]
}"#;
        assert_eq!(json, expected);
    }
}
