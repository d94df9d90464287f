//! Automorphisms of extensions `H -> G -> G/H` with `phi(H) = H`, and the
//! inequalities relating twisted class counts and fixed points of `phi`,
//! its restriction `phi'` to `H` and the induced map `phi_bar` on `G/H`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{
    is_normal, quotient, subgroup_closure, twisted_classes, Automorphism, FiniteGroup, Subgroup,
};

/// A normal subgroup together with its quotient.
#[derive(Clone, Debug)]
pub struct GroupExtension {
    pub total: FiniteGroup,
    pub subgroup: Subgroup,
    pub quotient: FiniteGroup,
    /// `projection[x]` is the image of `x` in the quotient.
    pub projection: Vec<usize>,
}

impl GroupExtension {
    pub fn new(total: &FiniteGroup, normal: &[usize]) -> Result<Self> {
        let closure = subgroup_closure(total, normal);
        let mut sorted = normal.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if closure != sorted {
            return Err(Error::NotSubgroup);
        }
        if !is_normal(total, &sorted)? {
            return Err(Error::NotNormal);
        }
        let subgroup = Subgroup::new(total, &sorted)?;
        let q = quotient(total, &sorted)?;
        Ok(GroupExtension {
            total: total.clone(),
            subgroup,
            quotient: q.group,
            projection: q.projection,
        })
    }

    /// Elements of `H` in the parent's indexing, ascending.
    pub fn subgroup_indices(&self) -> Vec<usize> {
        let mut v = self.subgroup.inclusion.clone();
        v.sort_unstable();
        v
    }

    pub fn is_invariant(&self, phi: &Automorphism) -> bool {
        self.subgroup
            .inclusion
            .iter()
            .all(|&h| self.subgroup.contains(phi.apply(h)))
    }
}

/// The restriction `phi'` and the induced quotient map `phi_bar`.
#[derive(Clone, Debug)]
pub struct InducedPair {
    pub phi_sub: Automorphism,
    pub phi_quot: Automorphism,
}

/// Restricts `phi` to `H` and pushes it to `G/H`, checking both squares
/// element by element.
pub fn induce(ext: &GroupExtension, phi: &Automorphism) -> Result<InducedPair> {
    if !ext.is_invariant(phi) {
        return Err(Error::NotInvariant);
    }
    let sub = &ext.subgroup;
    let sub_map: Vec<usize> = sub
        .inclusion
        .iter()
        .map(|&h| sub.position(phi.apply(h)).expect("invariance checked"))
        .collect();
    let phi_sub = Automorphism::new(&sub.group, sub_map)?;

    let mut quot_map = vec![usize::MAX; ext.quotient.order()];
    for x in ext.total.elements() {
        let c = ext.projection[x];
        let image = ext.projection[phi.apply(x)];
        if quot_map[c] == usize::MAX {
            quot_map[c] = image;
        } else if quot_map[c] != image {
            return Err(Error::IllDefinedEndomorphism(
                "phi does not respect the cosets of H".into(),
            ));
        }
    }
    let phi_quot = Automorphism::new(&ext.quotient, quot_map)?;

    for i in sub.group.elements() {
        if sub.inclusion[phi_sub.apply(i)] != phi.apply(sub.inclusion[i]) {
            return Err(Error::InvalidTable("restriction square does not commute".into()));
        }
    }
    for x in ext.total.elements() {
        if ext.projection[phi.apply(x)] != phi_quot.apply(ext.projection[x]) {
            return Err(Error::InvalidTable("quotient square does not commute".into()));
        }
    }
    Ok(InducedPair { phi_sub, phi_quot })
}

fn fixed_points(phi: &Automorphism) -> usize {
    phi.map().iter().enumerate().filter(|(i, &x)| *i == x).count()
}

/// Whether the projection carries every `phi`-class into a single
/// `phi_bar`-class and hits every `phi_bar`-class.
pub fn check_class_epimorphism(ext: &GroupExtension, phi: &Automorphism) -> Result<bool> {
    let pair = induce(ext, phi)?;
    let upstairs = twisted_classes(&ext.total, phi);
    let downstairs = twisted_classes(&ext.quotient, &pair.phi_quot);
    let mut image_of_class = vec![None; upstairs.class_count()];
    let mut covered = vec![false; downstairs.class_count()];
    for x in ext.total.elements() {
        let target = downstairs.class_of(ext.projection[x]);
        covered[target] = true;
        match image_of_class[upstairs.class_of(x)] {
            None => image_of_class[upstairs.class_of(x)] = Some(target),
            Some(t) if t != target => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(covered.into_iter().all(|c| c))
}

/// Both sides of an inequality `lhs <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: u64, rhs: u64) -> Self {
        BoundCheck {
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }
}

/// `R(phi') <= k (R(phi) - R(phi_bar) + 1)` with `k = #Fix(phi_bar)`.
pub fn check_bound_nonabelian(ext: &GroupExtension, phi: &Automorphism) -> Result<BoundCheck> {
    let pair = induce(ext, phi)?;
    let r_sub = twisted_classes(&ext.subgroup.group, &pair.phi_sub).class_count() as u64;
    let r = twisted_classes(&ext.total, phi).class_count() as u64;
    let r_quot = twisted_classes(&ext.quotient, &pair.phi_quot).class_count() as u64;
    let k = fixed_points(&pair.phi_quot) as u64;
    Ok(BoundCheck::new(r_sub, k * (r + 1 - r_quot)))
}

/// For abelian `G/H`: `sum_i R(tau_{g_i} . phi') <= k R(phi)`, where the
/// `g_i` are the least preimages of the `phi_bar`-class representatives.
pub fn check_bound_abelian_quotient(
    ext: &GroupExtension,
    phi: &Automorphism,
) -> Result<BoundCheck> {
    if !ext.quotient.is_abelian() {
        return Err(Error::NotAbelian("quotient"));
    }
    let pair = induce(ext, phi)?;
    let downstairs = twisted_classes(&ext.quotient, &pair.phi_quot);
    let sub = &ext.subgroup;
    let mut lhs = 0u64;
    for &rep in downstairs.representatives() {
        let g = ext
            .total
            .elements()
            .find(|&x| ext.projection[x] == rep)
            .expect("projection is onto");
        let map: Vec<usize> = sub
            .inclusion
            .iter()
            .map(|&h| {
                let image = ext.total.conjugate(g, phi.apply(h));
                sub.position(image).expect("H is normal and invariant")
            })
            .collect();
        let twisted = Automorphism::new(&sub.group, map)?;
        lhs += twisted_classes(&sub.group, &twisted).class_count() as u64;
    }
    let k = fixed_points(&pair.phi_quot) as u64;
    let r = twisted_classes(&ext.total, phi).class_count() as u64;
    Ok(BoundCheck::new(lhs, k * r))
}

/// For abelian `H`: `#Fix(phi) <= #Fix(phi') #Fix(phi_bar)`.
pub fn check_fix_bound(ext: &GroupExtension, phi: &Automorphism) -> Result<BoundCheck> {
    if !ext.subgroup.group.is_abelian() {
        return Err(Error::NotAbelian("subgroup"));
    }
    let pair = induce(ext, phi)?;
    let lhs = fixed_points(phi) as u64;
    let rhs = (fixed_points(&pair.phi_sub) * fixed_points(&pair.phi_quot)) as u64;
    Ok(BoundCheck::new(lhs, rhs))
}

/// Every applicable check for one extension and automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub subgroup_order: usize,
    pub quotient_order: usize,
    pub class_epimorphism: bool,
    pub nonabelian_bound: BoundCheck,
    pub abelian_quotient_bound: Option<BoundCheck>,
    pub fix_bound: Option<BoundCheck>,
}

impl ExtensionReport {
    pub fn holds(&self) -> bool {
        self.class_epimorphism
            && self.nonabelian_bound.holds
            && self.abelian_quotient_bound.is_none_or(|b| b.holds)
            && self.fix_bound.is_none_or(|b| b.holds)
    }
}

pub fn check_extension(ext: &GroupExtension, phi: &Automorphism) -> Result<ExtensionReport> {
    Ok(ExtensionReport {
        subgroup_order: ext.subgroup.group.order(),
        quotient_order: ext.quotient.order(),
        class_epimorphism: check_class_epimorphism(ext, phi)?,
        nonabelian_bound: check_bound_nonabelian(ext, phi)?,
        abelian_quotient_bound: if ext.quotient.is_abelian() {
            Some(check_bound_abelian_quotient(ext, phi)?)
        } else {
            None
        },
        fix_bound: if ext.subgroup.group.is_abelian() {
            Some(check_fix_bound(ext, phi)?)
        } else {
            None
        },
    })
}

/// Normal subgroups generated by at most three elements, ordered by size
/// and then by element list.
pub fn normal_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut consider = |gens: &[usize]| {
        let sub = subgroup_closure(g, gens);
        if seen.insert(sub.clone()) && is_normal(g, &sub).expect("valid indices") {
            found.insert((sub.len(), sub));
        }
    };
    consider(&[]);
    for a in 0..n {
        consider(&[a]);
        for b in a + 1..n {
            consider(&[a, b]);
            for c in b + 1..n {
                consider(&[a, b, c]);
            }
        }
    }
    found.into_iter().map(|(_, s)| s).collect()
}

/// Extensions of `g` by each harvested normal subgroup.
pub fn extensions_of(g: &FiniteGroup) -> Result<Vec<GroupExtension>> {
    normal_subgroups(g)
        .iter()
        .map(|h| GroupExtension::new(g, h))
        .collect()
}

/// The harvested extensions whose subgroup is `phi`-invariant.
pub fn invariant_extensions(g: &FiniteGroup, phi: &Automorphism) -> Result<Vec<GroupExtension>> {
    Ok(extensions_of(g)?
        .into_iter()
        .filter(|e| e.is_invariant(phi))
        .collect())
}
