use std::collections::VecDeque;

use super::FiniteGroup;
use crate::error::{Error, Result};

/// The subgroup generated by `gens`, as a sorted list of element indices.
pub fn subgroup_closure(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.order()];
    member[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                queue.push_back(y);
            }
        }
    }
    (0..g.order()).filter(|&x| member[x]).collect()
}

fn membership(g: &FiniteGroup, elements: &[usize]) -> Result<Vec<bool>> {
    let mut member = vec![false; g.order()];
    for &x in elements {
        if x >= g.order() {
            return Err(Error::InvalidElement(format!("index {x}")));
        }
        member[x] = true;
    }
    Ok(member)
}

/// A subgroup presented both as a subset of its parent and as a group of
/// its own. Element `i` of `group` is `inclusion[i]` in the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub inclusion: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl Subgroup {
    /// Validates closure under multiplication and builds the induced table.
    pub fn new(parent: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let member = membership(parent, elements)?;
        let mut inclusion: Vec<usize> = (0..parent.order()).filter(|&x| member[x]).collect();
        if inclusion.is_empty() || !member[parent.identity()] {
            return Err(Error::NotSubgroup);
        }
        // Identity first keeps it at index 0 of the subgroup.
        inclusion.retain(|&x| x != parent.identity());
        inclusion.insert(0, parent.identity());
        let mut position = vec![None; parent.order()];
        for (i, &x) in inclusion.iter().enumerate() {
            position[x] = Some(i);
        }
        let n = inclusion.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &inclusion {
            for &b in &inclusion {
                table.push(position[parent.mul(a, b)].ok_or(Error::NotSubgroup)?);
            }
        }
        let group = FiniteGroup::from_table(n, table)?;
        Ok(Subgroup {
            group,
            inclusion,
            position,
        })
    }

    /// Index inside the subgroup of a parent element, if it belongs.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.position[x]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.position[x].is_some()
    }
}

pub fn is_normal(g: &FiniteGroup, elements: &[usize]) -> Result<bool> {
    let member = membership(g, elements)?;
    Ok(elements
        .iter()
        .all(|&h| g.generators().iter().all(|&s| member[g.conjugate(s, h)])))
}

/// The commutator subgroup.
pub fn derived_subgroup(g: &FiniteGroup) -> Vec<usize> {
    let mut commutators: Vec<usize> = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            let c = g.mul(g.mul(a, b), g.inv(g.mul(b, a)));
            commutators.push(c);
        }
    }
    commutators.sort_unstable();
    commutators.dedup();
    subgroup_closure(g, &commutators)
}

pub fn center(g: &FiniteGroup) -> Vec<usize> {
    g.elements()
        .filter(|&z| g.generators().iter().all(|&s| g.mul(z, s) == g.mul(s, z)))
        .collect()
}

/// A quotient group together with the projection from the parent.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `projection[x]` is the coset of `x`.
    pub projection: Vec<usize>,
}

/// `G / N` for a normal subgroup `N`. Cosets are indexed in order of their
/// least element, so the identity coset is index 0.
pub fn quotient(g: &FiniteGroup, normal: &[usize]) -> Result<Quotient> {
    let member = membership(g, normal)?;
    if !member[g.identity()] || subgroup_closure(g, normal).len() != normal_len(&member) {
        return Err(Error::NotSubgroup);
    }
    if !is_normal(g, normal)? {
        return Err(Error::NotNormal);
    }
    let subset: Vec<usize> = (0..g.order()).filter(|&x| member[x]).collect();
    let mut projection = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &h in &subset {
            projection[g.mul(x, h)] = id;
        }
    }
    let k = reps.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            table.push(projection[g.mul(a, b)]);
        }
    }
    let group = FiniteGroup::from_table(k, table)?;
    Ok(Quotient { group, projection })
}

fn normal_len(member: &[bool]) -> usize {
    member.iter().filter(|&&m| m).count()
}
