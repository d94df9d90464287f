//! Finite groups as validated Cayley tables.
//!
//! Elements are dense indices `0..order`. Groups built from permutations
//! keep the permutations only as labels for reporting and input lookup.

mod automorphism;
mod subgroup;
mod twisted;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use automorphism::{
    automorphism_from_generator_images, enumerate_automorphisms,
    enumerate_automorphisms_with_cap, inner_automorphism, Automorphism,
};
pub use subgroup::{
    center, derived_subgroup, is_normal, quotient, subgroup_closure, Quotient, Subgroup,
};
pub use twisted::{
    conjugacy_classes, shift_class_identity_check, twisted_classes, TwistedPartition, UnionFind,
};

/// Default bound on the number of elements produced by closure.
pub const DEFAULT_ELEMENT_CAP: usize = 2000;
/// Default bound on the group order accepted by automorphism enumeration.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 200;

const FULL_ASSOCIATIVITY_LIMIT: usize = 256;
const SPOT_CHECKS: usize = 20_000;

/// A permutation of `0..degree`, stored as its image list.
///
/// Products compose left to right: `(a * b)(i) = b(a(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// Validates zero-based images.
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            let x = x as usize;
            if x >= degree {
                return Err(Error::InvalidPermutation {
                    degree,
                    detail: format!("image {} out of range", x + 1),
                });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation {
                    degree,
                    detail: format!("image {} repeated", x + 1),
                });
            }
        }
        Ok(Permutation(images))
    }

    /// Validates one-based images against `degree`.
    pub fn from_one_based(degree: usize, images: &[u32]) -> Result<Self> {
        if images.len() != degree {
            return Err(Error::InvalidPermutation {
                degree,
                detail: format!("expected {degree} images, got {}", images.len()),
            });
        }
        if let Some(&bad) = images.iter().find(|&&x| x == 0 || x as usize > degree) {
            return Err(Error::InvalidPermutation {
                degree,
                detail: format!("image {bad} out of range"),
            });
        }
        Self::new(images.iter().map(|&x| x - 1).collect())
    }

    /// Builds a permutation from disjoint cycles written one-based.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a as usize > degree || b == 0 || b as usize > degree {
                    return Err(Error::InvalidPermutation {
                        degree,
                        detail: format!("cycle entry out of range in {cycle:?}"),
                    });
                }
                images[a as usize - 1] = b - 1;
            }
        }
        Self::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<u32> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, one-based; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut wrote = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.0[i] as usize;
            }
            write!(f, "({})", cycle.join(" "))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    labels: Option<Vec<Permutation>>,
}

/// Plain serializable form of a group, used for caching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyData {
    pub order: usize,
    pub table: Vec<usize>,
    pub generators: Vec<usize>,
    pub labels: Option<Vec<Permutation>>,
}

impl FiniteGroup {
    /// The subgroup of the symmetric group generated by `gens`, using the
    /// default element cap.
    pub fn from_permutation_generators(degree: usize, gens: &[Permutation]) -> Result<Self> {
        Self::from_permutation_generators_with_cap(degree, gens, DEFAULT_ELEMENT_CAP)
    }

    /// Breadth-first closure from the identity, applying generators in input
    /// order on the right. Element indices follow discovery order.
    pub fn from_permutation_generators_with_cap(
        degree: usize,
        gens: &[Permutation],
        cap: usize,
    ) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation {
                degree,
                detail: format!("generator has degree {}", bad.degree()),
            });
        }
        let mut elements = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        // parent[x] = (p, j) with x = p * gens[j]
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        let mut right_gen: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (j, g) in gens.iter().enumerate() {
                let y = elements[x].then(g);
                let idx = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len();
                        if i >= cap {
                            return Err(Error::CapExceeded {
                                what: "group closure",
                                cap,
                            });
                        }
                        index.insert(y.clone(), i);
                        elements.push(y);
                        parent.push(Some((x, j)));
                        queue.push_back(i);
                        i
                    }
                };
                row.push(idx);
            }
            if right_gen.len() <= x {
                right_gen.resize(x + 1, Vec::new());
            }
            right_gen[x] = row;
        }

        let n = elements.len();
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            table[a * n] = a;
            // BFS order guarantees parents precede children.
            for b in 1..n {
                let (p, j) = parent[b].expect("non-identity element has a parent");
                table[a * n + b] = right_gen[table[a * n + p]][j];
            }
        }
        let mut generators: Vec<usize> = gens.iter().map(|g| index[g]).collect();
        generators.dedup();
        Self::validated(n, table, Some(generators), Some(elements))
    }

    /// Builds a group from a flat row-major table, validating the group
    /// axioms. A generating set is chosen greedily.
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self> {
        Self::validated(order, table, None, None)
    }

    pub fn from_cayley_data(data: CayleyData) -> Result<Self> {
        let gens = if data.generators.is_empty() && data.order > 1 {
            None
        } else {
            Some(data.generators)
        };
        Self::validated(data.order, data.table, gens, data.labels)
    }

    pub fn to_cayley_data(&self) -> CayleyData {
        CayleyData {
            order: self.order,
            table: self.table.clone(),
            generators: self.generators.clone(),
            labels: self.labels.clone(),
        }
    }

    fn validated(
        n: usize,
        table: Vec<usize>,
        generators: Option<Vec<usize>>,
        labels: Option<Vec<Permutation>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        if table.len() != n * n {
            return Err(Error::InvalidTable(format!(
                "expected {} entries, found {}",
                n * n,
                table.len()
            )));
        }
        if table.iter().any(|&x| x >= n) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::InvalidTable("label count differs from order".into()));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a * n + b] == identity && table[b * n + a] == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {a} has no inverse")))?;
            inverse[a] = inv;
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        let assoc = |a: usize, b: usize, c: usize| mul(mul(a, b), c) == mul(a, mul(b, c));
        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = mul(a, b);
                    for c in 0..n {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(Error::InvalidTable(format!(
                                "not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca11);
            for _ in 0..SPOT_CHECKS {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidTable(format!(
                        "not associative at ({a}, {b}, {c})"
                    )));
                }
            }
        }

        let mut group = FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
            generators: Vec::new(),
            labels,
        };
        group.generators = match generators {
            Some(gens) => {
                if gens.iter().any(|&g| g >= n) {
                    return Err(Error::InvalidTable("generator out of range".into()));
                }
                if subgroup_closure(&group, &gens).len() != n {
                    return Err(Error::InvalidTable("generators do not generate".into()));
                }
                gens
            }
            None => group.greedy_generators(),
        };
        Ok(group)
    }

    /// Repeatedly adds the element of largest order (lowest index on ties)
    /// outside the current subgroup.
    fn greedy_generators(&self) -> Vec<usize> {
        let orders: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        let mut gens = Vec::new();
        let mut inside = subgroup_closure(self, &gens);
        while inside.len() < self.order {
            let mut member = vec![false; self.order];
            for &x in &inside {
                member[x] = true;
            }
            let next = (0..self.order)
                .filter(|&x| !member[x])
                .max_by(|&a, &b| orders[a].cmp(&orders[b]).then(b.cmp(&a)))
                .expect("some element lies outside a proper subgroup");
            gens.push(next);
            inside = subgroup_closure(self, &gens);
        }
        gens
    }

    pub fn trivial() -> Self {
        Self::from_table(1, vec![0]).expect("trivial table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g * x * g^-1`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn labels(&self) -> Option<&[Permutation]> {
        self.labels.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Index of the element carrying this permutation label, if any.
    pub fn index_of_label(&self, p: &Permutation) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|q| q == p)
    }

    /// Human-readable name of an element: its cycle form when labelled.
    pub fn element_name(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].to_string(),
            None => format!("#{x}"),
        }
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|x| self.element_order(x))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// SHA-256 over the canonical JSON form of the table, as lowercase hex.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_vec(&(self.order, &self.table)).expect("table serializes");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    pub(crate) fn s3() -> FiniteGroup {
        FiniteGroup::from_permutation_generators(3, &[perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])])
            .unwrap()
    }

    #[test]
    fn closure_of_s3() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity(), 0);
        assert!(!g.is_abelian());
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn trivial_closure() {
        let g = FiniteGroup::from_permutation_generators(1, &[]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.generators().is_empty());
    }

    #[test]
    fn cyclic_closure() {
        let g = FiniteGroup::from_permutation_generators(5, &[perm(5, &[&[1, 2, 3, 4, 5]])])
            .unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.is_abelian());
        assert_eq!(g.element_order(1), 5);
    }

    #[test]
    fn closure_cap_is_an_error() {
        let gens = [perm(5, &[&[1, 2]]), perm(5, &[&[1, 2, 3, 4, 5]])];
        let err = FiniteGroup::from_permutation_generators_with_cap(5, &gens, 100).unwrap_err();
        assert!(err.is_cap_exceeded());
    }

    #[test]
    fn bad_permutations_rejected() {
        assert!(Permutation::from_one_based(3, &[2, 2, 1]).is_err());
        assert!(Permutation::from_one_based(3, &[1, 2, 4]).is_err());
        assert!(Permutation::from_one_based(3, &[1, 2]).is_err());
    }

    #[test]
    fn table_validation_catches_non_groups() {
        // Left projection a*b = a has no identity.
        let n = 2;
        let table = vec![0, 0, 1, 1];
        assert!(FiniteGroup::from_table(n, table).is_err());
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn cayley_data_round_trip() {
        let g = s3();
        let back = FiniteGroup::from_cayley_data(g.to_cayley_data()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.content_hash(), g.content_hash());
    }

    #[test]
    fn permutation_display() {
        assert_eq!(perm(4, &[&[1, 3], &[2, 4]]).to_string(), "(1 3)(2 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn greedy_generators_generate() {
        let g = s3();
        let h = FiniteGroup::from_table(g.order(), g.table().to_vec()).unwrap();
        assert_eq!(subgroup_closure(&h, h.generators()).len(), 6);
    }
}
