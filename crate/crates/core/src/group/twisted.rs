use serde::Serialize;

use super::{inner_automorphism, Automorphism, FiniteGroup};

/// Disjoint sets with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns `true` if the two sets were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// A partition of the elements of a group into twisted conjugacy classes.
///
/// Class ids are numbered by the least element of each class, so class `i`
/// has representative `representatives[i]`, its minimal index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedPartition {
    class_of: Vec<usize>,
    representatives: Vec<usize>,
}

impl TwistedPartition {
    /// Canonical partition from arbitrary labels: two elements share a class
    /// iff their labels are equal.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        let mut representatives = Vec::new();
        for (x, label) in labels.iter().enumerate() {
            let id = *ids.entry(label.clone()).or_insert_with(|| {
                representatives.push(x);
                representatives.len() - 1
            });
            class_of.push(id);
        }
        TwistedPartition {
            class_of,
            representatives,
        }
    }

    fn from_union_find(uf: &mut UnionFind) -> Self {
        let roots: Vec<usize> = (0..uf.len()).map(|x| uf.find(x)).collect();
        Self::from_labels(&roots)
    }

    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_of
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.class_count()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }

    /// Elements of class `c` in increasing order.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.class_of.len())
            .filter(|&x| self.class_of[x] == c)
            .collect()
    }
}

/// Orbits of the action `h . x = h x phi(h)^-1`, by a union-find sweep over
/// all pairs `(h, x)`. The class count is the Reidemeister number.
pub fn twisted_classes(g: &FiniteGroup, phi: &Automorphism) -> TwistedPartition {
    let mut uf = UnionFind::new(g.order());
    for h in g.elements() {
        let twist = g.inv(phi.apply(h));
        for x in g.elements() {
            uf.union(x, g.mul(g.mul(h, x), twist));
        }
    }
    TwistedPartition::from_union_find(&mut uf)
}

/// Ordinary conjugacy classes.
pub fn conjugacy_classes(g: &FiniteGroup) -> TwistedPartition {
    twisted_classes(g, &Automorphism::identity(g))
}

/// Checks that right translation by `k` carries the `phi`-classes exactly
/// onto the classes of `tau_{k^-1} . phi`.
pub fn shift_class_identity_check(g: &FiniteGroup, phi: &Automorphism, k: usize) -> bool {
    let classes = twisted_classes(g, phi);
    let mut shifted = vec![0usize; g.order()];
    for x in g.elements() {
        shifted[g.mul(x, k)] = classes.class_of(x);
    }
    let translated = TwistedPartition::from_labels(&shifted);
    let twisted = inner_automorphism(g, g.inv(k)).compose(phi);
    translated == twisted_classes(g, &twisted)
}
