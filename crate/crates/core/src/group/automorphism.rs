use serde::Serialize;

use super::{FiniteGroup, DEFAULT_AUTOMORPHISM_CAP};
use crate::error::{Error, Result};

/// A validated automorphism of a [`FiniteGroup`], stored as an index table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Automorphism {
    map: Vec<usize>,
}

impl Automorphism {
    /// Validates bijectivity and full multiplicativity.
    pub fn new(g: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let n = g.order();
        if map.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: map.len(),
            });
        }
        let mut hit = vec![false; n];
        for &y in &map {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return Err(Error::NotBijective);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if map[g.mul(a, b)] != g.mul(map[a], map[b]) {
                    return Err(Error::NotHomomorphism);
                }
            }
        }
        Ok(Automorphism { map })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Automorphism {
            map: g.elements().collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self . other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut map = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            map[y] = x;
        }
        Automorphism { map }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Automorphism {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Automorphism {
            map: (0..self.map.len()).collect(),
        };
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc);
        }
        acc
    }

    /// Least `m >= 1` with `self^m = id`, searching at most `bound` steps.
    pub fn order_within(&self, bound: usize) -> Result<usize> {
        let mut acc = self.clone();
        for m in 1..=bound {
            if acc.is_identity() {
                return Ok(m);
            }
            acc = self.compose(&acc);
        }
        Err(Error::OrderNotFound(bound))
    }

    /// Images of the group's generators.
    pub fn generator_images(&self, g: &FiniteGroup) -> Vec<usize> {
        g.generators().iter().map(|&x| self.map[x]).collect()
    }
}

/// Conjugation `x -> g x g^-1`.
pub fn inner_automorphism(group: &FiniteGroup, g: usize) -> Automorphism {
    Automorphism {
        map: group.elements().map(|x| group.conjugate(g, x)).collect(),
    }
}

/// Extends the partial assignment `generator[j] -> images[j]` (for the first
/// `images.len()` generators) along right multiplication. Returns `None` on
/// a conflict, which means no homomorphism has these images.
fn extend_along_generators(g: &FiniteGroup, images: &[usize]) -> Option<Vec<Option<usize>>> {
    let gens = &g.generators()[..images.len()];
    let mut map = vec![None; g.order()];
    map[g.identity()] = Some(g.identity());
    let mut queue = std::collections::VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].expect("queued elements are mapped");
        for (&s, &img) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = g.mul(fx, img);
            match map[y] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(map)
}

fn injective_on_domain(map: &[Option<usize>], n: usize) -> bool {
    let mut hit = vec![false; n];
    map.iter()
        .flatten()
        .all(|&y| !std::mem::replace(&mut hit[y], true))
}

/// The automorphism sending each generator of `g` to the matching entry of
/// `images`, if one exists.
pub fn automorphism_from_generator_images(g: &FiniteGroup, images: &[usize]) -> Result<Automorphism> {
    if images.len() != g.generators().len() {
        return Err(Error::ImageCount {
            expected: g.generators().len(),
            found: images.len(),
        });
    }
    if let Some(&bad) = images.iter().find(|&&x| x >= g.order()) {
        return Err(Error::InvalidElement(format!("index {bad}")));
    }
    let map = extend_along_generators(g, images).ok_or(Error::NotHomomorphism)?;
    let map: Vec<usize> = map
        .into_iter()
        .map(|y| y.expect("generators reach every element"))
        .collect();
    Automorphism::new(g, map)
}

/// All automorphisms of `g`, in lexicographic order of generator images.
pub fn enumerate_automorphisms(g: &FiniteGroup) -> Result<Vec<Automorphism>> {
    enumerate_automorphisms_with_cap(g, DEFAULT_AUTOMORPHISM_CAP)
}

/// Backtracking over generator images. Candidates must match the order of
/// the generator, and every partial assignment must extend to an injective
/// homomorphism on the subgroup generated so far.
pub fn enumerate_automorphisms_with_cap(g: &FiniteGroup, cap: usize) -> Result<Vec<Automorphism>> {
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: "group order for automorphism enumeration",
            cap,
        });
    }
    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = g
        .generators()
        .iter()
        .map(|&s| g.elements().filter(|&x| orders[x] == orders[s]).collect())
        .collect();

    let mut found = Vec::new();
    let mut images = Vec::with_capacity(candidates.len());
    backtrack(g, &candidates, &mut images, &mut found)?;
    Ok(found)
}

fn backtrack(
    g: &FiniteGroup,
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    found: &mut Vec<Automorphism>,
) -> Result<()> {
    let level = images.len();
    if level == candidates.len() {
        let map = extend_along_generators(g, images).expect("checked at the previous level");
        let map: Vec<usize> = map.into_iter().map(|y| y.expect("total map")).collect();
        found.push(Automorphism::new(g, map)?);
        return Ok(());
    }
    for &c in &candidates[level] {
        images.push(c);
        if let Some(partial) = extend_along_generators(g, images) {
            if injective_on_domain(&partial, g.order()) {
                backtrack(g, candidates, images, found)?;
            }
        }
        images.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::super::tests::{perm, s3};
    use super::*;

    fn z5() -> FiniteGroup {
        FiniteGroup::from_permutation_generators(5, &[perm(5, &[&[1, 2, 3, 4, 5]])]).unwrap()
    }

    /// Every bijection that respects the table, by exhaustive search over
    /// all permutations of the elements. Only usable for tiny groups.
    fn brute_force_automorphisms(g: &FiniteGroup) -> HashSet<Vec<usize>> {
        fn rec(g: &FiniteGroup, map: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut HashSet<Vec<usize>>) {
            if map.len() == g.order() {
                let ok = (0..g.order())
                    .all(|a| (0..g.order()).all(|b| map[g.mul(a, b)] == g.mul(map[a], map[b])));
                if ok {
                    out.insert(map.clone());
                }
                return;
            }
            for y in 0..g.order() {
                if !used[y] {
                    used[y] = true;
                    map.push(y);
                    rec(g, map, used, out);
                    map.pop();
                    used[y] = false;
                }
            }
        }
        let mut out = HashSet::new();
        rec(g, &mut Vec::new(), &mut vec![false; g.order()], &mut out);
        out
    }

    #[test]
    fn identity_images_give_identity() {
        let g = s3();
        let phi = automorphism_from_generator_images(&g, g.generators()).unwrap();
        assert!(phi.is_identity());
    }

    #[test]
    fn squaring_on_z5() {
        let g = z5();
        let phi = automorphism_from_generator_images(&g, &[g.mul(1, 1)]).unwrap();
        for x in g.elements() {
            assert_eq!(phi.apply(x), g.mul(x, x));
        }
        assert_eq!(phi.order_within(100).unwrap(), 4);
    }

    #[test]
    fn order_obstruction_rejected() {
        let g = s3();
        let transposition = g.index_of_label(&perm(3, &[&[1, 2]])).unwrap();
        let three_cycle = g.index_of_label(&perm(3, &[&[1, 2, 3]])).unwrap();
        let mut images = g.generators().to_vec();
        let slot = images.iter().position(|&x| x == transposition).unwrap();
        images[slot] = three_cycle;
        assert!(automorphism_from_generator_images(&g, &images).is_err());
    }

    #[test]
    fn non_bijective_rejected() {
        let g = z5();
        assert_eq!(
            automorphism_from_generator_images(&g, &[g.identity()]).unwrap_err(),
            Error::NotBijective
        );
        assert!(automorphism_from_generator_images(&g, &[]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_automorphisms(&FiniteGroup::trivial()).unwrap().len(), 1);
        assert_eq!(enumerate_automorphisms(&z5()).unwrap().len(), 4);
        let g = s3();
        let auts = enumerate_automorphisms(&g).unwrap();
        assert_eq!(auts.len(), 6);
        let inner: HashSet<_> = g.elements().map(|x| inner_automorphism(&g, x)).collect();
        assert!(auts.iter().all(|a| inner.contains(a)));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for g in [s3(), z5()] {
            let fast: HashSet<Vec<usize>> = enumerate_automorphisms(&g)
                .unwrap()
                .into_iter()
                .map(|a| a.map().to_vec())
                .collect();
            assert_eq!(fast, brute_force_automorphisms(&g));
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = s3();
        let auts = enumerate_automorphisms(&g).unwrap();
        let keys: Vec<Vec<usize>> = auts.iter().map(|a| a.generator_images(&g)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn enumeration_cap() {
        assert!(enumerate_automorphisms_with_cap(&s3(), 5).unwrap_err().is_cap_exceeded());
    }

    #[test]
    fn inner_automorphisms_of_abelian_group_are_trivial() {
        let g = z5();
        assert!(g.elements().all(|x| inner_automorphism(&g, x).is_identity()));
    }

    #[test]
    fn pow_and_inverse() {
        let g = z5();
        let phi = automorphism_from_generator_images(&g, &[g.mul(1, 1)]).unwrap();
        assert_eq!(phi.pow(4), Automorphism::identity(&g));
        assert_eq!(phi.pow(-1), phi.inverse());
        assert_eq!(phi.compose(&phi.inverse()), Automorphism::identity(&g));
    }
}
