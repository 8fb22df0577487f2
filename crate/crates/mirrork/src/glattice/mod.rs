//! Finite groups, their subgroup structure, and integral lattices with a
//! group action: the character lattices of algebraic tori.

mod group;
pub mod json;
mod lattice;

pub use group::{
    enumerate_subgroups, max_group_order, Elem, FiniteGroup, Subgroup, SubgroupClass,
    DEFAULT_MAX_GROUP_ORDER,
};
pub use lattice::{
    character_orbits, fixed_sublattice, induced_lattice, norm_one_lattice, regular_lattice,
    weil_resolution, CharacterOrbit, GLattice, WeilResolutionData,
};
