//! The mapping torus `G x|_phi Z` of an automorphism of a finite group, and
//! its finite quotients `G x|_phi Z/(mk)`.
//!
//! The torus is infinite, so it is never tabulated. Elements are pairs
//! `(g, n)` standing for `g t^n`, with `t g t^-1 = phi(g)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{
    conjugacy_classes, twisted_classes, Automorphism, FiniteGroup, TwistedPartition,
    DEFAULT_ELEMENT_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorusElement {
    pub g: usize,
    pub n: i64,
}

#[derive(Clone, Debug)]
pub struct MappingTorus {
    base: FiniteGroup,
    phi: Automorphism,
    /// `powers[i]` is `phi^i` for `0 <= i < phi_order`.
    powers: Vec<Automorphism>,
}

impl MappingTorus {
    /// Fails if `phi^m = id` has no solution with `m <= |G|^2`.
    pub fn new(base: FiniteGroup, phi: Automorphism) -> Result<Self> {
        let bound = base.order() * base.order();
        let m = phi.order_within(bound.max(1))?;
        let mut powers = Vec::with_capacity(m);
        let mut acc = Automorphism::identity(&base);
        for _ in 0..m {
            powers.push(acc.clone());
            acc = phi.compose(&acc);
        }
        Ok(MappingTorus { base, phi, powers })
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn phi(&self) -> &Automorphism {
        &self.phi
    }

    pub fn phi_order(&self) -> usize {
        self.powers.len()
    }

    /// `phi^n`, for any integer `n`.
    pub fn phi_power(&self, n: i64) -> &Automorphism {
        &self.powers[n.rem_euclid(self.powers.len() as i64) as usize]
    }

    pub fn identity(&self) -> TorusElement {
        TorusElement {
            g: self.base.identity(),
            n: 0,
        }
    }

    /// `t`, the generator of the `Z` factor.
    pub fn stable_letter(&self) -> TorusElement {
        TorusElement {
            g: self.base.identity(),
            n: 1,
        }
    }

    pub fn multiply(&self, a: TorusElement, b: TorusElement) -> TorusElement {
        TorusElement {
            g: self.base.mul(a.g, self.phi_power(a.n).apply(b.g)),
            n: a.n + b.n,
        }
    }

    /// `(phi^-n(g^-1), -n)`.
    pub fn inverse(&self, a: TorusElement) -> TorusElement {
        TorusElement {
            g: self.phi_power(-a.n).apply(self.base.inv(a.g)),
            n: -a.n,
        }
    }

    /// `b a b^-1`.
    pub fn conjugate(&self, b: TorusElement, a: TorusElement) -> TorusElement {
        self.multiply(self.multiply(b, a), self.inverse(b))
    }

    /// Whether `x t` and `y t` are conjugate in the torus: some `g` and
    /// `0 <= n < ord(phi)` satisfy `g phi^n(x) = y phi(g)`.
    pub fn coset_conjugate_test(&self, x: usize, y: usize) -> bool {
        let g = &self.base;
        self.powers.iter().any(|pn| {
            let px = pn.apply(x);
            g.elements()
                .any(|h| g.mul(h, px) == g.mul(y, self.phi.apply(h)))
        })
    }

    /// The partition of `G` by conjugacy of `x t` in the torus.
    pub fn coset_partition(&self) -> TwistedPartition {
        let g = &self.base;
        let mut label = vec![usize::MAX; g.order()];
        for x in g.elements() {
            if label[x] != usize::MAX {
                continue;
            }
            for pn in &self.powers {
                let px = pn.apply(x);
                for h in g.elements() {
                    // (h, n) (x, 1) (h, n)^-1 = (h phi^n(x) phi(h)^-1, 1)
                    let y = g.mul(g.mul(h, px), g.inv(self.phi.apply(h)));
                    if label[y] == usize::MAX {
                        label[y] = x;
                    }
                }
            }
        }
        TwistedPartition::from_labels(&label)
    }

    /// Whether conjugacy in the coset `G t` reproduces the twisted classes
    /// of `phi` exactly.
    pub fn verify_bijection(&self) -> bool {
        let torus = self.coset_partition();
        let twisted = twisted_classes(&self.base, &self.phi);
        if torus != twisted {
            return false;
        }
        // The search-based test must agree with the orbit partition.
        self.base.elements().all(|x| {
            self.base
                .elements()
                .all(|y| self.coset_conjugate_test(x, y) == torus.same_class(x, y))
        })
    }

    /// `G x|_phi Z/(m k)` where `m = ord(phi)`. Element `(g, n)` has index
    /// `n |G| + g`.
    pub fn finite_quotient(&self, multiple: usize) -> Result<TorusQuotient> {
        self.finite_quotient_with_cap(multiple, DEFAULT_ELEMENT_CAP)
    }

    pub fn finite_quotient_with_cap(&self, multiple: usize, cap: usize) -> Result<TorusQuotient> {
        if multiple == 0 {
            return Err(Error::InvalidElement("multiple must be at least 1".into()));
        }
        let base_order = self.base.order();
        let cycle = self.phi_order() * multiple;
        let order = base_order
            .checked_mul(cycle)
            .filter(|&n| n <= cap)
            .ok_or(Error::CapExceeded {
                what: "order of the finite torus quotient",
                cap,
            })?;
        let index = |g: usize, n: usize| n * base_order + g;
        let mut table = Vec::with_capacity(order * order);
        for n1 in 0..cycle {
            for g1 in self.base.elements() {
                let pn = self.phi_power(n1 as i64);
                for n2 in 0..cycle {
                    for g2 in self.base.elements() {
                        let g = self.base.mul(g1, pn.apply(g2));
                        table.push(index(g, (n1 + n2) % cycle));
                    }
                }
            }
        }
        let group = FiniteGroup::from_table(order, table)?;
        let embedding = self.base.elements().map(|g| index(g, 0)).collect();
        Ok(TorusQuotient {
            group,
            embedding,
            base_order,
            cycle,
        })
    }

    /// Checks, inside `G x|_phi Z/(mk)`, that whenever two classes of the
    /// coset `G t` are separated by the quotient, the corresponding twisted
    /// classes of `G` are separated by the restricted map: their images in
    /// the embedded copy of `G` stay non-conjugate under the twist by the
    /// image of `t`.
    pub fn restriction_separates(&self, multiple: usize) -> Result<SeparationReport> {
        let q = self.finite_quotient(multiple)?;
        let classes = twisted_classes(&self.base, &self.phi);
        let reps = classes.representatives().to_vec();

        let quotient_classes = conjugacy_classes(&q.group);
        let t = q.index(self.base.identity(), 1);
        let t_inv = q.group.inv(t);
        // Twisted classes of the embedded copy under conjugation by t,
        // computed from the quotient's table alone.
        let sub_order = self.base.order();
        let mut restricted = crate::group::UnionFind::new(sub_order);
        for h in 0..sub_order {
            let eh = q.embedding[h];
            let twisted_h = q.group.mul(q.group.mul(t, eh), t_inv);
            let twisted_h_inv = q.group.inv(twisted_h);
            for x in 0..sub_order {
                let image = q.group.mul(q.group.mul(eh, q.embedding[x]), twisted_h_inv);
                let y = q
                    .position_in_base(image)
                    .ok_or_else(|| Error::InvalidTable("embedded copy is not closed".into()))?;
                restricted.union(x, y);
            }
        }

        let mut total_pairs = 0;
        let mut separated_pairs = 0;
        let mut violations = Vec::new();
        for (i, &x) in reps.iter().enumerate() {
            for &y in &reps[i + 1..] {
                total_pairs += 1;
                let xt = q.index(x, 1);
                let yt = q.index(y, 1);
                if quotient_classes.same_class(xt, yt) {
                    continue;
                }
                separated_pairs += 1;
                if restricted.find(x) == restricted.find(y) {
                    violations.push((x, y));
                }
            }
        }
        Ok(SeparationReport {
            class_count: reps.len(),
            total_pairs,
            separated_pairs,
            holds: violations.is_empty(),
            violations,
        })
    }
}

/// A finite quotient of the torus with the embedding `g -> (g, 0)`.
#[derive(Clone, Debug)]
pub struct TorusQuotient {
    pub group: FiniteGroup,
    pub embedding: Vec<usize>,
    base_order: usize,
    cycle: usize,
}

impl TorusQuotient {
    /// Index of `(g, n mod mk)`.
    pub fn index(&self, g: usize, n: i64) -> usize {
        n.rem_euclid(self.cycle as i64) as usize * self.base_order + g
    }

    /// `(g, n)` for an element index.
    pub fn decompose(&self, x: usize) -> (usize, usize) {
        (x % self.base_order, x / self.base_order)
    }

    /// Length `mk` of the cyclic factor.
    pub fn cycle_length(&self) -> usize {
        self.cycle
    }

    fn position_in_base(&self, x: usize) -> Option<usize> {
        let (g, n) = self.decompose(x);
        (n == 0).then_some(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub class_count: usize,
    pub total_pairs: usize,
    pub separated_pairs: usize,
    pub holds: bool,
    pub violations: Vec<(usize, usize)>,
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::group::{
        automorphism_from_generator_images, enumerate_automorphisms, is_normal, quotient,
        Permutation,
    };

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    fn z5_squaring() -> MappingTorus {
        let g = FiniteGroup::from_permutation_generators(5, &[perm(5, &[&[1, 2, 3, 4, 5]])]).unwrap();
        let phi = automorphism_from_generator_images(&g, &[g.mul(1, 1)]).unwrap();
        MappingTorus::new(g, phi).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutation_generators(3, &[perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])])
            .unwrap()
    }

    fn s3_identity() -> MappingTorus {
        let g = s3();
        let id = Automorphism::identity(&g);
        MappingTorus::new(g, id).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let t = z5_squaring();
        assert_eq!(t.phi_order(), 4);
        let g = t.base().clone();
        // Element 1 is the generator x, so x + 2x = 3x.
        let x = 1;
        let a = TorusElement { g: x, n: 1 };
        let prod = t.multiply(a, a);
        assert_eq!(prod.n, 2);
        assert_eq!(prod.g, g.pow(x, 3));
        for y in g.elements() {
            let e = TorusElement { g: y, n: 3 };
            assert_eq!(t.multiply(t.identity(), e), e);
            let relation = t.multiply(
                t.multiply(t.stable_letter(), TorusElement { g: y, n: 0 }),
                TorusElement { g: g.identity(), n: -1 },
            );
            assert_eq!(relation, TorusElement { g: t.phi().apply(y), n: 0 });
        }
    }

    #[test]
    fn group_axioms_on_random_triples() {
        let t = z5_squaring();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let mut draw = || TorusElement {
                g: rng.gen_range(0..5),
                n: rng.gen_range(-9..=9),
            };
            let (a, b, c) = (draw(), draw(), draw());
            assert_eq!(
                t.multiply(t.multiply(a, b), c),
                t.multiply(a, t.multiply(b, c))
            );
            assert_eq!(t.multiply(a, t.inverse(a)), t.identity());
            assert_eq!(t.conjugate(b, a).n, a.n);
        }
    }

    #[test]
    fn coset_conjugacy_examples() {
        let t = z5_squaring();
        for x in 0..5 {
            for y in 0..5 {
                assert!(t.coset_conjugate_test(x, y));
            }
        }
        let s = s3_identity();
        let g = s.base().clone();
        let transposition = g.index_of_label(&perm(3, &[&[1, 2]])).unwrap();
        assert!(s.coset_conjugate_test(transposition, transposition));
        assert!(!s.coset_conjugate_test(g.identity(), transposition));
    }

    #[test]
    fn bijection_holds() {
        let s = s3_identity();
        assert!(s.verify_bijection());
        assert_eq!(s.coset_partition().class_count(), 3);
        let trivial = FiniteGroup::trivial();
        let id = Automorphism::identity(&trivial);
        assert!(MappingTorus::new(trivial, id).unwrap().verify_bijection());
        let g = s3();
        for phi in enumerate_automorphisms(&g).unwrap() {
            assert!(MappingTorus::new(g.clone(), phi).unwrap().verify_bijection());
        }
    }

    #[test]
    fn finite_quotient_examples() {
        let trivial = FiniteGroup::trivial();
        let id = Automorphism::identity(&trivial);
        let t = MappingTorus::new(trivial, id).unwrap();
        let q = t.finite_quotient(5).unwrap();
        assert_eq!(q.group.order(), 5);
        assert!(q.group.is_abelian());
        assert_eq!(q.group.exponent(), 5);

        let q = z5_squaring().finite_quotient(1).unwrap();
        assert_eq!(q.group.order(), 20);
        assert!(!q.group.is_abelian());

        let s = s3_identity();
        let q = s.finite_quotient(1).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(!q.group.is_abelian());
    }

    #[test]
    fn embedded_base_is_normal_with_cyclic_quotient() {
        let t = z5_squaring();
        for k in 1..=3 {
            let q = t.finite_quotient(k).unwrap();
            assert!(is_normal(&q.group, &q.embedding).unwrap());
            let quo = quotient(&q.group, &q.embedding).unwrap();
            assert_eq!(quo.group.order(), 4 * k);
            assert_eq!(quo.group.exponent(), 4 * k);
            assert!(quo.group.is_abelian());
        }
    }

    #[test]
    fn finite_quotient_cap() {
        let t = z5_squaring();
        assert!(t.finite_quotient_with_cap(3, 50).unwrap_err().is_cap_exceeded());
        assert!(t.finite_quotient(0).is_err());
    }

    #[test]
    fn separation_examples() {
        let trivial = FiniteGroup::trivial();
        let id = Automorphism::identity(&trivial);
        let r = MappingTorus::new(trivial, id).unwrap().restriction_separates(1).unwrap();
        assert!(r.holds);
        assert_eq!(r.total_pairs, 0);

        let r = z5_squaring().restriction_separates(1).unwrap();
        assert!(r.holds);
        assert_eq!(r.class_count, 1);

        let r = s3_identity().restriction_separates(1).unwrap();
        assert!(r.holds);
        assert_eq!((r.total_pairs, r.separated_pairs), (3, 3));
    }
}
