//! Regular equivariant cell structures on the torus Λ_ℝ/Λ.
//!
//! Two backends build the complex: a cubical one for monomial (signed
//! permutation) actions and a periodic-Delaunay one for general actions of
//! low rank. Both produce the same flat structure: cells with sorted vertex
//! lists, signed boundary incidences, per-cell stabilizers and a full action
//! table. Geometry is exact; vertex coordinates and barycenters are
//! rationals, and boundary incidences carry the integer translation relating
//! the face's fundamental-domain representative to its position inside the
//! cell (cells may straddle the domain boundary).
//!
//! Regularity here means the G-CW condition: every group element mapping a
//! cell to itself fixes it pointwise. Bredon chains are only formed over
//! regular complexes. Complexes that come out irregular are regularized by
//! subdivision: a staircase (coordinate-order) triangulation for plain
//! permutation actions, barycentric subdivision otherwise.

mod cubical;
mod delone;
pub mod export;
mod subdivide;

use crate::error::{Error, Result};
use crate::exactalg::sparse::{sparse_smith, SparseMat};
use crate::exactalg::{AbGroup, Int};
use crate::glattice::{enumerate_subgroups, Elem, GLattice, Subgroup, SubgroupClass};
use num_rational::Rational64;
use std::collections::HashMap;

pub type Coord = Rational64;

#[derive(Clone, Debug)]
pub struct BoundaryEntry {
    pub face: u32,
    pub sign: i8,
    /// Integer translation: face position inside this cell's frame minus the
    /// face's own fundamental-domain frame.
    pub shift: Vec<i32>,
}

#[derive(Clone)]
pub struct Cell {
    /// Sorted ids of the distinct vertices of the closed cell.
    pub vertices: Vec<u32>,
    pub boundary: Vec<BoundaryEntry>,
    /// Sorted element indices fixing this cell in the quotient.
    pub stabilizer: Vec<Elem>,
    /// Exact barycenter, canonical in [0,1)^n.
    pub barycenter: Vec<Coord>,
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitInfo {
    /// Cell index of this cell's orbit representative.
    pub rep: u32,
    /// Smallest group element carrying this cell onto the representative.
    pub transporter: Elem,
    /// Orientation sign of that transporter on this cell.
    pub sign: i8,
}

/// Backend selection for `build_complex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Auto,
    Cubical,
    Delone,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Backend::Auto),
            "cubical" => Ok(Backend::Cubical),
            "delone" => Ok(Backend::Delone),
            other => Err(Error::validation(format!("unknown backend {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub backend: Backend,
    /// Hard cap on total cell count; bigger builds abort as unsupported.
    pub max_cells: usize,
    /// Delaunay backend rank cap (3 by default; 4 allowed, with a warning).
    pub delone_max_rank: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            backend: Backend::Auto,
            max_cells: max_cells_default(),
            delone_max_rank: 3,
        }
    }
}

pub fn max_cells_default() -> usize {
    std::env::var("MIRRORK_MAX_CELLS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1_500_000)
}

/// Builder output before stabilizers, orbits and verification.
pub(crate) struct RawComplex {
    pub vertex_coords: Vec<Vec<Coord>>,
    pub cells: Vec<Vec<Cell>>, // stabilizer fields left empty
    pub action: Vec<Vec<Vec<(u32, i8)>>>,
}

impl RawComplex {
    /// G-CW regularity: stabilizing elements preserve orientation and fix
    /// every vertex.
    pub fn is_g_regular(&self, group: &crate::glattice::FiniteGroup) -> bool {
        for p in 0..self.cells.len() {
            for (ci, cell) in self.cells[p].iter().enumerate() {
                for g in group.elements() {
                    let (img, s) = self.action[g as usize][p][ci];
                    if img as usize != ci {
                        continue;
                    }
                    if s != 1 {
                        return false;
                    }
                    for &v in &cell.vertices {
                        if self.action[g as usize][0][v as usize].0 != v {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for EquivariantCellComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "EquivariantCellComplex(dim={}, cells={:?})",
            self.dimension(),
            self.cells.iter().map(Vec::len).collect::<Vec<_>>()
        )
    }
}

pub struct EquivariantCellComplex {
    lattice: GLattice,
    classes: Vec<SubgroupClass>,
    vertex_coords: Vec<Vec<Coord>>,
    cells: Vec<Vec<Cell>>,
    /// action[g][p][cell] = (image cell, orientation sign)
    action: Vec<Vec<Vec<(u32, i8)>>>,
    orbits: Vec<Vec<OrbitInfo>>,
    orbit_reps: Vec<Vec<u32>>,
    class_of_cell: Vec<Vec<u16>>,
    backend_used: Backend,
    subdivisions: u32,
}

/// Build a regular equivariant cell structure on the torus of the lattice.
pub fn build_complex(lat: &GLattice, opts: &BuildOptions) -> Result<EquivariantCellComplex> {
    let backend = match opts.backend {
        Backend::Auto => {
            if lat.is_monomial() {
                Backend::Cubical
            } else {
                Backend::Delone
            }
        }
        b => b,
    };
    match backend {
        Backend::Cubical => {
            if !lat.is_monomial() {
                return Err(Error::unsupported(
                    "cubical backend requires a signed permutation action",
                ));
            }
            cubical::build(lat, opts)
        }
        Backend::Delone => {
            if lat.rank() > opts.delone_max_rank.min(4) {
                return Err(Error::unsupported(format!(
                    "delone backend supports rank <= {} (rank {} requested)",
                    opts.delone_max_rank.min(4),
                    lat.rank()
                )));
            }
            if lat.rank() > 3 {
                eprintln!(
                    "warning: delone backend at rank {} is slow and lightly tested",
                    lat.rank()
                );
            }
            delone::build(lat, opts)
        }
        Backend::Auto => unreachable!(),
    }
}

impl EquivariantCellComplex {
    pub(crate) fn finalize(
        lat: &GLattice,
        raw: RawComplex,
        backend: Backend,
        subdivisions: u32,
    ) -> Result<Self> {
        let classes = enumerate_subgroups(lat.group())?;
        let mut cells = raw.cells;
        let action = raw.action;
        let n_degrees = cells.len();
        let group = lat.group();

        // Stabilizers from the action table.
        for p in 0..n_degrees {
            for c in 0..cells[p].len() {
                let stab: Vec<Elem> = group
                    .elements()
                    .filter(|&g| action[g as usize][p][c].0 == c as u32)
                    .collect();
                cells[p][c].stabilizer = stab;
            }
        }

        // Conjugacy class index of each cell's stabilizer.
        let mut class_lookup: HashMap<Vec<Elem>, u16> = HashMap::new();
        for (i, class) in classes.iter().enumerate() {
            for conj in &class.conjugates {
                class_lookup.insert(conj.elements().to_vec(), i as u16);
            }
        }
        let mut class_of_cell = Vec::with_capacity(n_degrees);
        for cell_layer in cells.iter() {
            let layer: Vec<u16> = cell_layer
                .iter()
                .map(|c| {
                    *class_lookup
                        .get(&c.stabilizer)
                        .expect("stabilizer must be a subgroup")
                })
                .collect();
            class_of_cell.push(layer);
        }

        // Orbits with deterministic representatives: the smallest cell index
        // whose stabilizer is exactly the class representative subgroup.
        let mut orbits: Vec<Vec<OrbitInfo>> = Vec::with_capacity(n_degrees);
        let mut orbit_reps: Vec<Vec<u32>> = Vec::with_capacity(n_degrees);
        for p in 0..n_degrees {
            let m = cells[p].len();
            let mut info = vec![
                OrbitInfo {
                    rep: u32::MAX,
                    transporter: 0,
                    sign: 1
                };
                m
            ];
            let mut reps = Vec::new();
            let mut assigned = vec![false; m];
            for c in 0..m {
                if assigned[c] {
                    continue;
                }
                let mut members: Vec<u32> = group
                    .elements()
                    .map(|g| action[g as usize][p][c].0)
                    .collect();
                members.sort_unstable();
                members.dedup();
                let class_idx = class_of_cell[p][c] as usize;
                let rep_elems = classes[class_idx].representative.elements();
                let rep = members
                    .iter()
                    .copied()
                    .find(|&x| cells[p][x as usize].stabilizer == rep_elems)
                    .ok_or_else(|| {
                        Error::internal("orbit has no cell with representative stabilizer")
                    })?;
                reps.push(rep);
                for &x in &members {
                    let g = group
                        .elements()
                        .find(|&g| action[g as usize][p][x as usize].0 == rep)
                        .expect("orbit member must reach representative");
                    info[x as usize] = OrbitInfo {
                        rep,
                        transporter: g,
                        sign: action[g as usize][p][x as usize].1,
                    };
                    assigned[x as usize] = true;
                }
            }
            reps.sort_unstable();
            orbits.push(info);
            orbit_reps.push(reps);
        }

        let complex = EquivariantCellComplex {
            lattice: lat.clone(),
            classes,
            vertex_coords: raw.vertex_coords,
            cells,
            action,
            orbits,
            orbit_reps,
            class_of_cell,
            backend_used: backend,
            subdivisions,
        };
        complex.verify()?;
        Ok(complex)
    }

    pub fn lattice(&self) -> &GLattice {
        &self.lattice
    }

    pub fn dimension(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn cells(&self, p: usize) -> &[Cell] {
        &self.cells[p]
    }

    pub fn num_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn vertex_coords(&self) -> &[Vec<Coord>] {
        &self.vertex_coords
    }

    pub fn action(&self, g: Elem, p: usize, cell: usize) -> (u32, i8) {
        self.action[g as usize][p][cell]
    }

    pub fn orbit(&self, p: usize, cell: usize) -> OrbitInfo {
        self.orbits[p][cell]
    }

    pub fn orbit_reps(&self, p: usize) -> &[u32] {
        &self.orbit_reps[p]
    }

    pub fn class_of_cell(&self, p: usize, cell: usize) -> usize {
        self.class_of_cell[p][cell] as usize
    }

    pub fn backend_used(&self) -> Backend {
        self.backend_used
    }

    pub fn subdivisions(&self) -> u32 {
        self.subdivisions
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(p, layer)| {
                let n = layer.len() as i64;
                if p % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Full structural verification: boundaries square to zero, the action
    /// is a signed cell permutation commuting with boundaries, the G-CW
    /// regularity condition holds, the Euler characteristic vanishes, and
    /// faces nest. Run on every build.
    pub fn verify(&self) -> Result<()> {
        let group = self.lattice.group();
        let n_deg = self.cells.len();

        for p in 0..n_deg {
            for (ci, cell) in self.cells[p].iter().enumerate() {
                if cell.vertices.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::internal(format!(
                        "cell ({p},{ci}) has unsorted or repeated vertices"
                    )));
                }
                if p == 0 && (cell.vertices.len() != 1 || cell.vertices[0] != ci as u32) {
                    return Err(Error::internal("degree-0 cells must be their vertex"));
                }
                let mut seen = std::collections::HashSet::new();
                for b in &cell.boundary {
                    if p == 0 || b.face as usize >= self.cells[p - 1].len() {
                        return Err(Error::internal("boundary index out of range"));
                    }
                    if !seen.insert(b.face) {
                        return Err(Error::internal(format!(
                            "cell ({p},{ci}) lists face {} twice",
                            b.face
                        )));
                    }
                    let face = &self.cells[p - 1][b.face as usize];
                    if !face
                        .vertices
                        .iter()
                        .all(|v| cell.vertices.binary_search(v).is_ok())
                    {
                        return Err(Error::internal(format!(
                            "face vertices of ({p},{ci}) not contained in cell"
                        )));
                    }
                }
            }
        }

        // ∂∘∂ = 0.
        let mut scratch: Vec<(u32, i64)> = Vec::with_capacity(64);
        for p in 2..n_deg {
            for (ci, cell) in self.cells[p].iter().enumerate() {
                scratch.clear();
                for b in &cell.boundary {
                    let face = &self.cells[p - 1][b.face as usize];
                    for bb in &face.boundary {
                        scratch.push((bb.face, (b.sign as i64) * (bb.sign as i64)));
                    }
                }
                if !signed_sum_is_zero(&mut scratch) {
                    return Err(Error::internal(format!(
                        "boundary of boundary nonzero at cell ({p},{ci})"
                    )));
                }
            }
        }

        // Action tables: signed permutations forming a homomorphism.
        for g in group.elements() {
            for p in 0..n_deg {
                let layer = &self.action[g as usize][p];
                if layer.len() != self.cells[p].len() {
                    return Err(Error::internal("action table has wrong shape"));
                }
                let mut hit = vec![false; layer.len()];
                for &(img, s) in layer {
                    if img as usize >= layer.len() || (s != 1 && s != -1) {
                        return Err(Error::internal("bad action entry"));
                    }
                    if hit[img as usize] {
                        return Err(Error::internal("action is not a permutation"));
                    }
                    hit[img as usize] = true;
                }
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                for p in 0..n_deg {
                    for c in 0..self.cells[p].len() {
                        let (ib, sb) = self.action[b as usize][p][c];
                        let (iab1, sa) = self.action[a as usize][p][ib as usize];
                        let (iab2, sab) = self.action[ab as usize][p][c];
                        if iab1 != iab2 || (sa as i16) * (sb as i16) != sab as i16 {
                            return Err(Error::internal(format!(
                                "action not a homomorphism at ({a},{b}) deg {p} cell {c}"
                            )));
                        }
                    }
                }
            }
        }

        // Equivariance: ∂(g·σ) = g·(∂σ).
        for g in group.elements() {
            for p in 1..n_deg {
                for (ci, cell) in self.cells[p].iter().enumerate() {
                    let (img, s) = self.action[g as usize][p][ci];
                    let image_cell = &self.cells[p][img as usize];
                    scratch.clear();
                    for b in &image_cell.boundary {
                        scratch.push((b.face, (s as i64) * (b.sign as i64)));
                    }
                    for b in &cell.boundary {
                        let (fb, fs) = self.action[g as usize][p - 1][b.face as usize];
                        scratch.push((fb, -(b.sign as i64) * (fs as i64)));
                    }
                    if !signed_sum_is_zero(&mut scratch) {
                        return Err(Error::internal(format!(
                            "equivariance fails at g={g} deg {p} cell {ci}"
                        )));
                    }
                }
            }
        }

        // Regularity.
        for p in 0..n_deg {
            for (ci, cell) in self.cells[p].iter().enumerate() {
                for &g in &cell.stabilizer {
                    let (img, s) = self.action[g as usize][p][ci];
                    debug_assert_eq!(img as usize, ci);
                    if s != 1 {
                        return Err(Error::internal(format!(
                            "stabilizer reverses orientation at deg {p} cell {ci}"
                        )));
                    }
                    for &v in &cell.vertices {
                        if self.action[g as usize][0][v as usize].0 != v {
                            return Err(Error::internal(format!(
                                "regularity fails: {g} stabilizes cell ({p},{ci}) but moves vertex {v}"
                            )));
                        }
                    }
                }
            }
        }

        // χ(T^n) = 0 for n ≥ 1; the rank-0 torus is a point with χ = 1.
        let expected_chi = if self.dimension() == 0 { 1 } else { 0 };
        if self.euler_characteristic() != expected_chi {
            return Err(Error::internal(format!(
                "Euler characteristic {} (expected {expected_chi})",
                self.euler_characteristic()
            )));
        }
        Ok(())
    }

    /// Integer boundary matrix ∂_p of the underlying complex, for callers
    /// that reduce it themselves.
    pub fn boundary_sparse_public(&self, p: usize) -> SparseMat {
        self.boundary_sparse(p)
    }

    /// Integer boundary matrix ∂_p: C_p → C_{p-1} of the underlying complex.
    pub(crate) fn boundary_sparse(&self, p: usize) -> SparseMat {
        let rows = self.cells[p - 1].len();
        let cols = self.cells[p].len();
        let mut m = SparseMat::new(rows, cols);
        for (ci, cell) in self.cells[p].iter().enumerate() {
            for b in &cell.boundary {
                m.add_entry(b.face as usize, ci, Int::from(b.sign as i64));
            }
        }
        m
    }

    /// Ordinary cellular homology of the underlying space, forgetting G.
    pub fn underlying_homology(&self) -> Vec<AbGroup> {
        let n_deg = self.cells.len();
        let mut ranks = vec![0usize; n_deg + 1];
        let mut torsions: Vec<Vec<Int>> = vec![vec![]; n_deg + 1];
        for p in 1..n_deg {
            let s = sparse_smith(self.boundary_sparse(p));
            ranks[p] = s.rank;
            torsions[p] = s.torsion;
        }
        (0..n_deg)
            .map(|p| {
                let n_p = self.cells[p].len();
                let free = n_p - ranks[p] - ranks[p + 1];
                AbGroup::new(free, torsions[p + 1].clone()).expect("smith factors form a chain")
            })
            .collect()
    }

    pub(crate) fn to_raw(&self) -> RawComplex {
        RawComplex {
            vertex_coords: self.vertex_coords.clone(),
            cells: self.cells.clone(),
            action: self.action.clone(),
        }
    }

    /// One barycentric subdivision: cells are chains in the face poset,
    /// vertices are barycenters. The result is again equivariant and exact.
    pub fn barycentric_subdivide(&self, max_cells: usize) -> Result<EquivariantCellComplex> {
        let raw = subdivide::barycentric(&self.to_raw(), self.dimension(), max_cells)?;
        EquivariantCellComplex::finalize(
            &self.lattice,
            raw,
            self.backend_used,
            self.subdivisions + 1,
        )
    }
}

/// Sum signed contributions keyed by id and test for total cancellation.
fn signed_sum_is_zero(entries: &mut Vec<(u32, i64)>) -> bool {
    entries.sort_unstable_by_key(|&(k, _)| k);
    let mut i = 0;
    while i < entries.len() {
        let key = entries[i].0;
        let mut acc = 0i64;
        while i < entries.len() && entries[i].0 == key {
            acc += entries[i].1;
            i += 1;
        }
        if acc != 0 {
            return false;
        }
    }
    true
}

/// A fixed subcomplex with its connected components.
pub struct FixedSubcomplex {
    /// Per degree: indices of cells fixed pointwise by the subgroup.
    pub cells: Vec<Vec<u32>>,
    pub component_count: usize,
    /// Per component, ordered by smallest contained vertex id: that vertex
    /// and the maximal dimension of a cell in the component.
    pub components: Vec<(u32, usize)>,
    /// Component index per fixed vertex id.
    pub component_of_vertex: HashMap<u32, usize>,
}

/// Cells pointwise fixed by every element of H, with components computed by
/// union-find on the fixed 1-skeleton.
pub fn fixed_subcomplex(x: &EquivariantCellComplex, h: &Subgroup) -> Result<FixedSubcomplex> {
    h.validate(x.lattice().group())?;
    let n_deg = x.cells.len();
    let mut fixed: Vec<Vec<u32>> = Vec::with_capacity(n_deg);
    for p in 0..n_deg {
        let layer: Vec<u32> = (0..x.cells[p].len() as u32)
            .filter(|&c| {
                h.elements().iter().all(|&g| {
                    let (img, s) = x.action(g, p, c as usize);
                    img == c
                        && s == 1
                        && x.cells[p][c as usize]
                            .vertices
                            .iter()
                            .all(|&v| x.action(g, 0, v as usize).0 == v)
                })
            })
            .collect();
        fixed.push(layer);
    }

    fn find(parent: &mut HashMap<u32, u32>, v: u32) -> u32 {
        let mut root = v;
        while parent[&root] != root {
            root = parent[&root];
        }
        let mut cur = v;
        while parent[&cur] != root {
            let next = parent[&cur];
            parent.insert(cur, root);
            cur = next;
        }
        root
    }

    let mut parent: HashMap<u32, u32> = fixed[0].iter().map(|&v| (v, v)).collect();
    if n_deg > 1 {
        for &e in &fixed[1] {
            let vs = &x.cells[1][e as usize].vertices;
            if vs.len() == 2 {
                let a = find(&mut parent, vs[0]);
                let b = find(&mut parent, vs[1]);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent.insert(hi, lo);
                }
            }
        }
    }

    let vertices: Vec<u32> = fixed[0].clone();
    let mut comp_min: HashMap<u32, u32> = HashMap::new();
    for &v in &vertices {
        let r = find(&mut parent, v);
        let e = comp_min.entry(r).or_insert(v);
        if v < *e {
            *e = v;
        }
    }
    let mut comps: Vec<(u32, u32)> = comp_min.iter().map(|(&r, &m)| (m, r)).collect();
    comps.sort_unstable();
    let comp_index: HashMap<u32, usize> = comps
        .iter()
        .enumerate()
        .map(|(i, &(_, r))| (r, i))
        .collect();
    let mut component_of_vertex = HashMap::new();
    for &v in &vertices {
        let r = find(&mut parent, v);
        component_of_vertex.insert(v, comp_index[&r]);
    }

    let mut comp_dim = vec![0usize; comps.len()];
    for p in 0..n_deg {
        for &c in &fixed[p] {
            let v0 = x.cells[p][c as usize].vertices[0];
            let r = find(&mut parent, v0);
            let idx = comp_index[&r];
            comp_dim[idx] = comp_dim[idx].max(p);
        }
    }

    let components: Vec<(u32, usize)> = comps
        .iter()
        .zip(&comp_dim)
        .map(|(&(m, _), &d)| (m, d))
        .collect();

    Ok(FixedSubcomplex {
        cells: fixed,
        component_count: comps.len(),
        components,
        component_of_vertex,
    })
}
