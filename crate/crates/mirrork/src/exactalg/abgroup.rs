//! Finitely generated abelian groups in invariant-factor normal form.

use super::int::Int;
use super::matrix::IntMatrix;
use super::snf::{smith_with, SnfOpts};
use crate::error::{Error, Result};
use std::fmt;

/// A finitely generated abelian group ℤ^free ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/dₖ with
/// d₁ | d₂ | … and every dᵢ ≥ 2. The representation is unique for a given
/// isomorphism class, so equality is isomorphism.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbGroup {
    free_rank: usize,
    torsion: Vec<Int>,
}

impl AbGroup {
    pub fn trivial() -> Self {
        AbGroup {
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn free(rank: usize) -> Self {
        AbGroup {
            free_rank: rank,
            torsion: vec![],
        }
    }

    pub fn cyclic(d: i64) -> Self {
        assert!(d >= 0);
        match d {
            0 => AbGroup::free(1),
            1 => AbGroup::trivial(),
            _ => AbGroup {
                free_rank: 0,
                torsion: vec![Int::from(d)],
            },
        }
    }

    pub fn new(free_rank: usize, torsion: Vec<Int>) -> Result<Self> {
        for w in torsion.windows(2) {
            if !w[0].divides(&w[1]) {
                return Err(Error::validation(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if torsion
            .iter()
            .any(|d| d.is_negative() || d.abs_cmp(&Int::from(2i64)) == std::cmp::Ordering::Less)
        {
            return Err(Error::validation(
                "invariant factors must be at least 2".to_string(),
            ));
        }
        Ok(AbGroup { free_rank, torsion })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Total number of generators in the canonical presentation
    /// (torsion generators first, then free generators).
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of the group if finite.
    pub fn order(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        let mut o = Int::one();
        for d in &self.torsion {
            o = o.mul(d);
        }
        Some(o)
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        // Invariant factors of a direct sum: merge by prime powers. Cheapest
        // correct route at this scale: diagonal relation matrix, one SNF.
        let gens = self.num_generators() + other.num_generators();
        let mut rel = IntMatrix::zeros(self.torsion.len() + other.torsion.len(), gens);
        for (i, d) in self.torsion.iter().enumerate() {
            rel.set(i, i, d.clone());
        }
        for (i, d) in other.torsion.iter().enumerate() {
            rel.set(self.torsion.len() + i, self.num_generators() + i, d.clone());
        }
        group_from_presentation(gens, &rel)
    }

    /// All elements, as coordinate vectors over the torsion generators.
    /// Only valid for finite groups.
    pub fn elements(&self) -> Result<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return Err(Error::unsupported(
                "cannot enumerate an infinite group".to_string(),
            ));
        }
        let mut out = vec![vec![]];
        for d in &self.torsion {
            let dv = d
                .to_i64()
                .ok_or_else(|| Error::unsupported("torsion factor too large to enumerate"))?;
            let mut next = Vec::with_capacity(out.len() * dv as usize);
            for prefix in &out {
                for x in 0..dv {
                    let mut p = prefix.clone();
                    p.push(Int::from(x));
                    next.push(p);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Reduce a coordinate vector into canonical range: torsion coordinates
    /// mod their factor, free coordinates untouched.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.num_generators());
        let mut out = Vec::with_capacity(v.len());
        for (i, x) in v.iter().enumerate() {
            if i < self.torsion.len() {
                let d = &self.torsion[i];
                let q = x.div_floor(d);
                out.push(x.sub_mul(&q, d));
            } else {
                out.push(x.clone());
            }
        }
        out
    }

    /// Spec-schema shape: [free_rank, [torsion...]].
    pub fn to_schema(&self) -> (usize, Vec<i64>) {
        (
            self.free_rank,
            self.torsion
                .iter()
                .map(|d| d.to_i64().expect("torsion factor exceeds i64"))
                .collect(),
        )
    }

    pub fn from_schema(free_rank: usize, torsion: &[i64]) -> Result<Self> {
        AbGroup::new(free_rank, torsion.iter().map(|&d| Int::from(d)).collect())
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cokernel of a relation matrix: the group on `generators` generators
/// modulo the row span of `relations`.
pub fn group_from_presentation(generators: usize, relations: &IntMatrix) -> AbGroup {
    assert_eq!(
        relations.cols(),
        generators,
        "relation matrix must have one column per generator"
    );
    let s = smith_with(relations, SnfOpts::default());
    let torsion = s.torsion_factors();
    AbGroup {
        free_rank: generators - s.rank,
        torsion,
    }
}

/// A presented quotient ℤ^g / (row span), with enough change-of-basis data
/// to map arbitrary vectors into canonical coordinates and to lift canonical
/// generators back to representatives.
pub struct QuotientPresentation {
    pub group: AbGroup,
    /// Rows: one per canonical generator (torsion first, then free); applied
    /// to a column vector in ℤ^g it yields raw canonical coordinates.
    pub coord_rows: IntMatrix,
    /// Columns: representative in ℤ^g of each canonical generator.
    pub generator_reps: IntMatrix,
}

impl QuotientPresentation {
    pub fn coords(&self, v: &[Int]) -> Vec<Int> {
        let raw = self.coord_rows.mul_vec(v);
        self.group.reduce(&raw)
    }
}

/// Quotient of ℤ^g by the subgroup generated by the rows of `relations`,
/// with coordinate witnesses.
pub fn presented_quotient(generators: usize, relations: &IntMatrix) -> QuotientPresentation {
    assert_eq!(relations.cols(), generators);
    // Work with columns: the subgroup is the column span of relationsᵀ.
    let rt = relations.transpose();
    let s = smith_with(
        &rt,
        SnfOpts {
            want_u: true,
            want_u_inv: true,
            ..Default::default()
        },
    );
    let u = s.u.as_ref().unwrap();
    let u_inv = s.u_inv.as_ref().unwrap();

    // In coordinates y = U x the subgroup is spanned by dᵢ·eᵢ, i < rank.
    let mut torsion_rows = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..s.rank {
        let d = s.d.get(i, i);
        if !d.is_one() {
            torsion_rows.push(i);
            torsion.push(d.clone());
        }
    }
    let free_rows: Vec<usize> = (s.rank..generators).collect();

    let keep: Vec<usize> = torsion_rows.iter().chain(free_rows.iter()).copied().collect();
    let mut coord_rows = IntMatrix::zeros(keep.len(), generators);
    for (out_r, &r) in keep.iter().enumerate() {
        for c in 0..generators {
            coord_rows.set(out_r, c, u.get(r, c).clone());
        }
    }
    let mut generator_reps = IntMatrix::zeros(generators, keep.len());
    for (out_c, &c) in keep.iter().enumerate() {
        for r in 0..generators {
            generator_reps.set(r, out_c, u_inv.get(r, c).clone());
        }
    }

    QuotientPresentation {
        group: AbGroup {
            free_rank: generators - s.rank,
            torsion,
        },
        coord_rows,
        generator_reps,
    }
}
