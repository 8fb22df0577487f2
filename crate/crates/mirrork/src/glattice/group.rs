//! Finite groups as validated Cayley tables, and their subgroups.

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

pub type Elem = u16;

/// A finite group given by its multiplication table over element indices
/// 0..order-1, with index 0 the identity. Construction validates identity,
/// inverses and associativity (O(n³), fine for the sizes this tool targets).
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// table[a][b] = a·b
    table: Vec<Vec<Elem>>,
    inverse: Vec<Elem>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<Elem>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::validation("group must have at least the identity"));
        }
        if table.iter().any(|row| row.len() != order) {
            return Err(Error::validation("Cayley table must be square"));
        }
        let n = order as usize;
        for a in 0..n {
            for b in 0..n {
                if (table[a][b] as usize) >= n {
                    return Err(Error::validation("Cayley table entry out of range"));
                }
            }
        }
        for a in 0..n {
            if table[0][a] as usize != a || table[a][0] as usize != a {
                return Err(Error::validation("index 0 must be a two-sided identity"));
            }
        }
        // Latin square + inverses.
        let mut inverse = vec![None; n];
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                let rb = table[a][b] as usize;
                let cb = table[b][a] as usize;
                if seen_row[rb] || seen_col[cb] {
                    return Err(Error::validation("Cayley table rows/columns must be permutations"));
                }
                seen_row[rb] = true;
                seen_col[cb] = true;
                if rb == 0 {
                    if table[b][a] != 0 {
                        return Err(Error::validation("left and right inverses differ"));
                    }
                    inverse[a] = Some(b as Elem);
                }
            }
        }
        let inverse: Vec<Elem> = inverse
            .into_iter()
            .map(|i| i.ok_or_else(|| Error::validation("element without inverse")))
            .collect::<Result<_>>()?;
        // Associativity on all triples.
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    let bc = table[b][c] as usize;
                    if table[ab][c] != table[a][bc] {
                        return Err(Error::validation(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::validation("label count must match group order"));
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            inverse,
            labels,
        })
    }

    /// Expand a set of permutation generators (each a bijection of
    /// {0..m-1}) into a full Cayley table. Elements are ordered
    /// lexicographically as permutation words, which puts the identity first.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::validation("need at least one permutation generator"));
        }
        let m = gens[0].len();
        for g in gens {
            if g.len() != m {
                return Err(Error::validation("permutation generators must share a domain"));
            }
            let mut seen = vec![false; m];
            for &x in g {
                if x >= m || seen[x] {
                    return Err(Error::validation("generator is not a permutation"));
                }
                seen[x] = true;
            }
        }
        let identity: Vec<usize> = (0..m).collect();
        let mut elems: BTreeSet<Vec<usize>> = BTreeSet::new();
        elems.insert(identity.clone());
        let mut queue: Vec<Vec<usize>> = vec![identity];
        while let Some(p) = queue.pop() {
            for g in gens {
                // compose: (g after p)(x) = g[p[x]]
                let q: Vec<usize> = (0..m).map(|x| g[p[x]]).collect();
                if elems.insert(q.clone()) {
                    if elems.len() > 4096 {
                        return Err(Error::unsupported(
                            "permutation group too large to expand",
                        ));
                    }
                    queue.push(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = elems.into_iter().collect();
        // Lexicographic order puts the identity permutation first.
        debug_assert_eq!(elems[0], (0..m).collect::<Vec<_>>());
        let index = |p: &Vec<usize>| elems.binary_search(p).unwrap() as Elem;
        let n = elems.len();
        let mut table = vec![vec![0 as Elem; n]; n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let ab: Vec<usize> = (0..m).map(|x| a[b[x]]).collect();
                table[i][j] = index(&ab);
            }
        }
        FiniteGroup::from_table(table, None)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let table = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n) as Elem).collect())
            .collect();
        FiniteGroup::from_table(table, None).expect("cyclic table is valid")
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!((1..=5).contains(&n), "symmetric(n) supported for n <= 5");
        if n == 1 {
            return FiniteGroup::trivial();
        }
        let mut gens = Vec::new();
        // adjacent transpositions generate S_n
        for i in 0..n - 1 {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(i, i + 1);
            gens.push(p);
        }
        FiniteGroup::from_permutations(&gens).expect("symmetric group expands")
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_table(vec![vec![0]], None).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order as Elem).into_iter()
    }

    pub fn table(&self) -> &Vec<Vec<Elem>> {
        &self.table
    }

    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(l) => l[e as usize].clone(),
            None => format!("g{e}"),
        }
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        for a in self.elements() {
            for b in self.elements() {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// A generator when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<Elem> {
        self.elements().find(|&g| self.element_order(g) == self.order)
    }

    /// Closure of a set of elements under multiplication.
    pub fn closure(&self, seed: &[Elem]) -> BTreeSet<Elem> {
        let mut set: BTreeSet<Elem> = seed.iter().copied().collect();
        set.insert(0);
        let mut queue: Vec<Elem> = set.iter().copied().collect();
        while let Some(a) = queue.pop() {
            let snapshot: Vec<Elem> = set.iter().copied().collect();
            for b in snapshot {
                for c in [self.mul(a, b), self.mul(b, a), self.inv(a)] {
                    if set.insert(c) {
                        queue.push(c);
                    }
                }
            }
        }
        set
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

/// A subgroup, stored as the sorted element set of a parent group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<Elem>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, elements: Vec<Elem>) -> Result<Self> {
        let mut sorted = elements;
        sorted.sort_unstable();
        sorted.dedup();
        let sub = Subgroup { elements: sorted };
        sub.validate(group)?;
        Ok(sub)
    }

    pub fn from_sorted_unchecked(elements: Vec<Elem>) -> Self {
        Subgroup { elements }
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    pub fn full(group: &FiniteGroup) -> Self {
        Subgroup {
            elements: group.elements().collect(),
        }
    }

    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        if self.elements.first() != Some(&0) {
            return Err(Error::validation("subgroup must contain the identity"));
        }
        for &a in &self.elements {
            if a as usize >= group.order() {
                return Err(Error::validation("subgroup element out of range"));
            }
            if !self.contains(group.inv(a)) {
                return Err(Error::validation("subgroup not closed under inverse"));
            }
            for &b in &self.elements {
                if !self.contains(group.mul(a, b)) {
                    return Err(Error::validation("subgroup not closed under product"));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn conjugate(&self, group: &FiniteGroup, g: Elem) -> Subgroup {
        let gi = group.inv(g);
        let mut elems: Vec<Elem> = self
            .elements
            .iter()
            .map(|&h| group.mul(group.mul(g, h), gi))
            .collect();
        elems.sort_unstable();
        Subgroup { elements: elems }
    }

    /// Left cosets, each sorted, ordered by their minimal element.
    pub fn left_cosets(&self, group: &FiniteGroup) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; group.order()];
        let mut cosets = Vec::new();
        for g in group.elements() {
            if seen[g as usize] {
                continue;
            }
            let mut coset: Vec<Elem> = self.elements.iter().map(|&h| group.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x as usize] = true;
            }
            cosets.push(coset);
        }
        // Scanning g in index order already yields cosets ordered by their
        // minimal element, since each coset is first seen at its minimum.
        cosets
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

/// One conjugacy class of subgroups: a deterministic representative, the
/// full conjugate list, and the normalizer of the representative.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub conjugates: Vec<Subgroup>,
    pub normalizer: Subgroup,
}

/// Default cap on the group order for subgroup enumeration; override with
/// MIRRORK_MAX_GROUP_ORDER.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 64;

pub fn max_group_order() -> usize {
    std::env::var("MIRRORK_MAX_GROUP_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}

/// All subgroups up to conjugacy. Representatives are ordered by size, then
/// lexicographically by element set; each class carries its conjugates and
/// the representative's normalizer.
pub fn enumerate_subgroups(group: &FiniteGroup) -> Result<Vec<SubgroupClass>> {
    let cap = max_group_order();
    if group.order() > cap {
        return Err(Error::unsupported(format!(
            "group order {} exceeds subgroup-enumeration cap {} (set MIRRORK_MAX_GROUP_ORDER to raise)",
            group.order(),
            cap
        )));
    }

    // Every subgroup is a join of cyclic subgroups: close the set of cyclic
    // subgroups under pairwise joins with each cyclic generator.
    let mut cyclics: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for g in group.elements() {
        let cyc: BTreeSet<Elem> = {
            let mut s = BTreeSet::new();
            let mut x = g;
            s.insert(0);
            while x != 0 {
                s.insert(x);
                x = group.mul(x, g);
            }
            s
        };
        cyclics.insert(cyc.into_iter().collect());
    }

    let mut all: BTreeSet<Vec<Elem>> = cyclics.clone();
    let mut queue: Vec<Vec<Elem>> = all.iter().cloned().collect();
    while let Some(h) = queue.pop() {
        for c in &cyclics {
            let mut seed: Vec<Elem> = h.clone();
            seed.extend_from_slice(c);
            let joined: Vec<Elem> = group.closure(&seed).into_iter().collect();
            if !all.contains(&joined) {
                all.insert(joined.clone());
                queue.push(joined);
            }
        }
    }

    // Group into conjugacy classes.
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let mut assigned: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut sorted: Vec<Vec<Elem>> = all.into_iter().collect();
    sorted.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    for elems in sorted {
        if assigned.contains(&elems) {
            continue;
        }
        let sub = Subgroup::from_sorted_unchecked(elems.clone());
        let mut conjugates: BTreeSet<Subgroup> = BTreeSet::new();
        let mut normalizer_elems = Vec::new();
        for g in group.elements() {
            let conj = sub.conjugate(group, g);
            if conj == sub {
                normalizer_elems.push(g);
            }
            conjugates.insert(conj);
        }
        for c in &conjugates {
            assigned.insert(c.elements.clone());
        }
        classes.push(SubgroupClass {
            representative: sub,
            conjugates: conjugates.into_iter().collect(),
            normalizer: Subgroup::from_sorted_unchecked(normalizer_elems),
        });
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: every subset that happens to be a subgroup.
    fn subgroups_brute(group: &FiniteGroup) -> BTreeSet<Vec<Elem>> {
        let n = group.order();
        assert!(n <= 8, "oracle is exponential");
        let mut found = BTreeSet::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let subset: Vec<Elem> = (0..n as Elem).filter(|&e| mask >> e & 1 == 1).collect();
            let closed = subset.iter().all(|&a| {
                subset.contains(&group.inv(a))
                    && subset.iter().all(|&b| subset.contains(&group.mul(a, b)))
            });
            if closed {
                found.insert(subset);
            }
        }
        found
    }

    #[test]
    fn c2_classes() {
        let g = FiniteGroup::cyclic(2);
        let classes = enumerate_subgroups(&g).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].representative.elements(), &[0]);
        assert_eq!(classes[1].representative.elements(), &[0, 1]);
    }

    #[test]
    fn s3_classes_match_brute_force() {
        let g = FiniteGroup::symmetric(3);
        assert_eq!(g.order(), 6);
        let classes = enumerate_subgroups(&g).unwrap();
        // e, C2, C3, S3.
        assert_eq!(classes.len(), 4);
        let sizes: Vec<usize> = classes.iter().map(|c| c.representative.order()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 6]);
        // The C2 class has three conjugates; everything else is normal.
        let counts: Vec<usize> = classes.iter().map(|c| c.conjugates.len()).collect();
        assert_eq!(counts, vec![1, 3, 1, 1]);

        // Against the exhaustive oracle: same total subgroup count.
        let brute = subgroups_brute(&g);
        let total: usize = classes.iter().map(|c| c.conjugates.len()).sum();
        assert_eq!(total, brute.len());
    }

    #[test]
    fn c6_one_subgroup_per_divisor() {
        let g = FiniteGroup::cyclic(6);
        let classes = enumerate_subgroups(&g).unwrap();
        assert_eq!(classes.len(), 4);
        let sizes: Vec<usize> = classes.iter().map(|c| c.representative.order()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 6]);
        let brute = subgroups_brute(&g);
        assert_eq!(brute.len(), 4);
    }

    #[test]
    fn normalizer_of_c2_in_s3_is_itself() {
        let g = FiniteGroup::symmetric(3);
        let classes = enumerate_subgroups(&g).unwrap();
        let c2 = &classes[1];
        assert_eq!(c2.normalizer.order(), 2);
        assert_eq!(c2.normalizer, c2.representative);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], None).is_err());
    }

    #[test]
    fn cosets_of_c2_in_s3() {
        let g = FiniteGroup::symmetric(3);
        let classes = enumerate_subgroups(&g).unwrap();
        let h = &classes[1].representative;
        let cosets = h.left_cosets(&g);
        assert_eq!(cosets.len(), 3);
        assert_eq!(cosets[0][0], 0);
        // Cosets partition the group.
        let mut all: Vec<Elem> = cosets.concat();
        all.sort_unstable();
        assert_eq!(all, (0..6).collect::<Vec<Elem>>());
    }
}
