//! Finitely generated abelian groups `Z^r + Z/d_1 + ... + Z/d_s` and their
//! automorphisms.
//!
//! An endomorphism is stored in block form acting on column vectors
//! `(free; torsion)`:
//!
//! ```text
//! [ F  0 ]    F: free -> free      (r x r)
//! [ B  C ]    B: free -> torsion   (s x r), C: torsion -> torsion (s x s)
//! ```
//!
//! The torsion-to-free block is always zero because torsion maps to torsion.
//! Every abelian computation reduces to the integer lattice obtained by
//! lifting to `Z^(r+s)` and adding the relation lattice `d_j e_(r+j)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    cokernel_order, is_unit, lattice_member, reduce_mod, smith_normal_form, stack_relations,
    ExtendedCount, IntMatrix, JsonInts, SmithForm,
};

/// Upper bound on the torsion order for exhaustive enumeration.
pub const TORSION_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Strict constructor: `torsion` must already be an invariant-factor
    /// chain of integers `>= 2`.
    pub fn new<T: Into<BigInt> + Clone>(free_rank: usize, torsion: &[T]) -> Result<Self> {
        let torsion: Vec<BigInt> = torsion.iter().cloned().map(Into::into).collect();
        let chain_ok = torsion.iter().all(|d| *d >= BigInt::from(2))
            && torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        if !chain_ok {
            return Err(Error::InvariantFactorChain(
                torsion.iter().map(ToString::to_string).collect(),
            ));
        }
        Ok(FgAbelianGroup { free_rank, torsion })
    }

    /// Normalizing constructor: `Z^r + Z/n_1 + ... + Z/n_k` for arbitrary
    /// cyclic orders, brought into invariant-factor form. An order of `0`
    /// contributes a free summand and an order of `1` vanishes.
    pub fn from_cyclic_factors(free_rank: usize, orders: &[u64]) -> Self {
        let snf = smith_normal_form(&IntMatrix::diagonal(orders));
        let extra_free = orders.len() - snf.rank();
        let torsion = snf
            .invariant_factors
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        FgAbelianGroup {
            free_rank: free_rank + extra_free,
            torsion,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of cyclic summands, `r + s`.
    pub fn dimension(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn order(&self) -> ExtendedCount {
        if self.is_finite() {
            ExtendedCount::Finite(self.torsion_order().to_biguint().expect("positive"))
        } else {
            ExtendedCount::Infinite
        }
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// Builds an element, reducing torsion coordinates.
    pub fn element<T: Into<BigInt> + Clone>(&self, free: &[T], torsion: &[T]) -> Result<AbelianElement> {
        let x = AbelianElement {
            free: free.iter().cloned().map(Into::into).collect(),
            torsion: torsion.iter().cloned().map(Into::into).collect(),
        };
        self.check(&x)?;
        Ok(self.reduce(x.to_vector()))
    }

    /// The `j`-th standard generator (free generators first).
    pub fn generator(&self, j: usize) -> AbelianElement {
        let mut v = vec![BigInt::zero(); self.dimension()];
        v[j] = BigInt::one();
        self.reduce(v)
    }

    fn check(&self, x: &AbelianElement) -> Result<()> {
        if x.free.len() != self.free_rank || x.torsion.len() != self.torsion.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} free and {} torsion coordinates, got {} and {}",
                self.free_rank,
                self.torsion.len(),
                x.free.len(),
                x.torsion.len()
            )));
        }
        Ok(())
    }

    /// Splits a lifted vector of length `r + s` into an element, reducing
    /// the torsion coordinates.
    pub fn reduce(&self, v: Vec<BigInt>) -> AbelianElement {
        let mut free = v;
        let torsion = free
            .split_off(self.free_rank)
            .iter()
            .zip(&self.torsion)
            .map(|(x, d)| reduce_mod(x, d))
            .collect();
        AbelianElement { free, torsion }
    }

    /// All elements of the torsion subgroup in lexicographic order of
    /// residues (free coordinates zero).
    pub fn torsion_elements(&self) -> Result<Vec<AbelianElement>> {
        let orders: Vec<usize> = self
            .torsion
            .iter()
            .map(|d| d.to_usize().unwrap_or(usize::MAX))
            .collect();
        let total = orders
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= TORSION_ENUMERATION_CAP)
            .ok_or(Error::CapExceeded {
                what: "torsion subgroup order",
                cap: TORSION_ENUMERATION_CAP,
            })?;
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; orders.len()];
        for _ in 0..total {
            out.push(AbelianElement {
                free: vec![BigInt::zero(); self.free_rank],
                torsion: digits.iter().map(|&x| BigInt::from(x)).collect(),
            });
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < orders[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        Ok(out)
    }

    /// Relation lattice generators, one per torsion coordinate.
    pub fn relations(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn add(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        let v = x
            .to_vector()
            .iter()
            .zip(y.to_vector())
            .map(|(a, b)| a + b)
            .collect();
        self.reduce(v)
    }

    pub fn neg(&self, x: &AbelianElement) -> AbelianElement {
        self.reduce(x.to_vector().iter().map(|a| -a).collect())
    }

    pub fn sub(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        self.add(x, &self.neg(y))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FgAbelianGroup", 3)?;
        s.serialize_field("kind", "fg_abelian")?;
        s.serialize_field("free_rank", &self.free_rank)?;
        s.serialize_field("torsion", &JsonInts(&self.torsion))?;
        s.end()
    }
}

/// An element `(free; torsion)` with torsion coordinates reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl AbelianElement {
    /// Concatenated coordinates, free part first.
    pub fn to_vector(&self) -> Vec<BigInt> {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }
}

impl fmt::Display for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        let tors: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        write!(f, "({} | {})", free.join(", "), tors.join(", "))
    }
}

impl Serialize for AbelianElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AbelianElement", 2)?;
        s.serialize_field("free", &JsonInts(&self.free))?;
        s.serialize_field("torsion", &JsonInts(&self.torsion))?;
        s.end()
    }
}

/// An endomorphism in block form; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianEndo {
    free: IntMatrix,
    mixed: IntMatrix,
    torsion: IntMatrix,
}

impl AbelianEndo {
    /// Validates shapes and the well-definedness congruences
    /// `C[i][j] * d_j = 0 (mod d_i)`, then reduces `B` and `C` row-wise.
    pub fn new(
        group: &FgAbelianGroup,
        free: IntMatrix,
        mixed: IntMatrix,
        torsion: IntMatrix,
    ) -> Result<Self> {
        let (r, s) = (group.free_rank, group.torsion.len());
        let shape_ok = free.rows() == r
            && free.cols() == r
            && mixed.rows() == s
            && mixed.cols() == r
            && torsion.rows() == s
            && torsion.cols() == s;
        if !shape_ok {
            return Err(Error::IllDefinedEndomorphism(format!(
                "blocks must be F {r}x{r}, B {s}x{r}, C {s}x{s}; got F {}x{}, B {}x{}, C {}x{}",
                free.rows(),
                free.cols(),
                mixed.rows(),
                mixed.cols(),
                torsion.rows(),
                torsion.cols()
            )));
        }
        let d = &group.torsion;
        for i in 0..s {
            for j in 0..s {
                if !(&torsion[(i, j)] * &d[j]).is_multiple_of(&d[i]) {
                    return Err(Error::IllDefinedEndomorphism(format!(
                        "C[{i}][{j}] * {} is not divisible by {}",
                        d[j], d[i]
                    )));
                }
            }
        }
        let mut endo = AbelianEndo {
            free,
            mixed,
            torsion,
        };
        endo.reduce_rows(group);
        Ok(endo)
    }

    /// Endomorphism of a torsion-free group given by a single matrix.
    pub fn from_free_matrix(group: &FgAbelianGroup, free: IntMatrix) -> Result<Self> {
        let s = group.torsion.len();
        Self::new(
            group,
            free,
            IntMatrix::zeros(s, group.free_rank),
            IntMatrix::zeros(s, s),
        )
    }

    /// Endomorphism of a finite group given by its torsion block.
    pub fn from_torsion_matrix(group: &FgAbelianGroup, torsion: IntMatrix) -> Result<Self> {
        let s = group.torsion.len();
        Self::new(
            group,
            IntMatrix::zeros(group.free_rank, group.free_rank),
            IntMatrix::zeros(s, group.free_rank),
            torsion,
        )
    }

    pub fn identity(group: &FgAbelianGroup) -> Self {
        Self::scalar(group, 1)
    }

    /// `x -> -x`
    pub fn negation(group: &FgAbelianGroup) -> Self {
        Self::scalar(group, -1)
    }

    fn scalar(group: &FgAbelianGroup, c: i64) -> Self {
        let (r, s) = (group.free_rank, group.torsion.len());
        let mut endo = AbelianEndo {
            free: IntMatrix::diagonal(&vec![c; r]),
            mixed: IntMatrix::zeros(s, r),
            torsion: IntMatrix::diagonal(&vec![c; s]),
        };
        endo.reduce_rows(group);
        endo
    }

    fn reduce_rows(&mut self, group: &FgAbelianGroup) {
        for (i, d) in group.torsion.iter().enumerate() {
            for j in 0..self.mixed.cols() {
                self.mixed[(i, j)] = reduce_mod(&self.mixed[(i, j)], d);
            }
            for j in 0..self.torsion.cols() {
                self.torsion[(i, j)] = reduce_mod(&self.torsion[(i, j)], d);
            }
        }
    }

    pub fn free_block(&self) -> &IntMatrix {
        &self.free
    }

    pub fn mixed_block(&self) -> &IntMatrix {
        &self.mixed
    }

    pub fn torsion_block(&self) -> &IntMatrix {
        &self.torsion
    }

    /// The full `(r+s) x (r+s)` integer matrix `[[F, 0], [B, C]]`.
    pub fn lift(&self) -> IntMatrix {
        let (r, s) = (self.free.rows(), self.torsion.rows());
        let mut m = IntMatrix::zeros(r + s, r + s);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] = self.free[(i, j)].clone();
            }
        }
        for i in 0..s {
            for j in 0..r {
                m[(r + i, j)] = self.mixed[(i, j)].clone();
            }
            for j in 0..s {
                m[(r + i, r + j)] = self.torsion[(i, j)].clone();
            }
        }
        m
    }

    fn from_lift(group: &FgAbelianGroup, m: &IntMatrix) -> Self {
        let (r, s) = (group.free_rank, group.torsion.len());
        let mut free = IntMatrix::zeros(r, r);
        let mut mixed = IntMatrix::zeros(s, r);
        let mut torsion = IntMatrix::zeros(s, s);
        for i in 0..r {
            for j in 0..r {
                free[(i, j)] = m[(i, j)].clone();
            }
        }
        for i in 0..s {
            for j in 0..r {
                mixed[(i, j)] = m[(r + i, j)].clone();
            }
            for j in 0..s {
                torsion[(i, j)] = m[(r + i, r + j)].clone();
            }
        }
        let mut endo = AbelianEndo {
            free,
            mixed,
            torsion,
        };
        endo.reduce_rows(group);
        endo
    }

    pub fn apply(&self, group: &FgAbelianGroup, x: &AbelianElement) -> AbelianElement {
        let v = self.lift().apply(&x.to_vector()).expect("shapes agree");
        group.reduce(v)
    }

    /// `self . other`
    pub fn compose(&self, group: &FgAbelianGroup, other: &AbelianEndo) -> AbelianEndo {
        Self::from_lift(group, &(&self.lift() * &other.lift()))
    }

    /// `n`-th power, `n >= 0`.
    pub fn pow(&self, group: &FgAbelianGroup, n: u32) -> AbelianEndo {
        let mut acc = Self::identity(group);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(group, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(group, &base);
            }
        }
        acc
    }

    /// Lift of `self - Id`.
    pub fn minus_identity(&self) -> IntMatrix {
        let m = self.lift();
        &m - &IntMatrix::identity(m.rows())
    }
}

impl Serialize for AbelianEndo {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AbelianEndo", 3)?;
        s.serialize_field("F", &self.free)?;
        s.serialize_field("B", &self.mixed)?;
        s.serialize_field("C", &self.torsion)?;
        s.end()
    }
}

fn check_shape(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<()> {
    if psi.free.rows() != group.free_rank || psi.torsion.rows() != group.torsion.len() {
        return Err(Error::DimensionMismatch {
            expected: group.dimension(),
            found: psi.free.rows() + psi.torsion.rows(),
        });
    }
    Ok(())
}

/// Bijectivity test: `|det F| = 1` and the restriction to the torsion
/// subgroup is injective (checked by enumerating images).
pub fn is_automorphism(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<bool> {
    check_shape(group, psi)?;
    if !is_unit(&psi.free.determinant()?) {
        return Ok(false);
    }
    let torsion = group.torsion_elements()?;
    let mut images: Vec<AbelianElement> = torsion.iter().map(|x| psi.apply(group, x)).collect();
    images.sort();
    images.dedup();
    Ok(images.len() == torsion.len())
}

fn require_automorphism(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<()> {
    if !is_automorphism(group, psi)? {
        return Err(Error::NotAutomorphism(
            "endomorphism is not bijective".into(),
        ));
    }
    Ok(())
}

/// `[psi - Id | relations]`, whose column lattice is the preimage of
/// `Im(psi - Id)` in `Z^(r+s)`.
fn twisted_image_lattice(group: &FgAbelianGroup, psi: &AbelianEndo) -> IntMatrix {
    stack_relations(&psi.minus_identity(), group.relations()).expect("shapes agree")
}

/// `R(psi) = #Coker(psi - Id)`.
pub fn reidemeister_number(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<ExtendedCount> {
    require_automorphism(group, psi)?;
    cokernel_order(&psi.minus_identity(), group.relations())
}

/// Order of the fixed subgroup `ker(psi - Id)`.
///
/// A fixed point has free part in `ker(F - I)`, so the kernel is infinite
/// exactly when `det(F - I) = 0`. Otherwise the fixed points lie in the
/// torsion subgroup `T`, and for an endomorphism of a finite group the
/// kernel and cokernel have equal order, so `#Fix = #Coker(C - I on T)`.
pub fn fixed_subgroup_size(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<ExtendedCount> {
    require_automorphism(group, psi)?;
    let r = group.free_rank;
    let f_minus_i = &psi.free - &IntMatrix::identity(r);
    if f_minus_i.determinant()?.is_zero() {
        return Ok(ExtendedCount::Infinite);
    }
    let s = group.torsion.len();
    let c_minus_i = &psi.torsion - &IntMatrix::identity(s);
    cokernel_order(&c_minus_i, group.relations())
}

/// Whether `x - y` lies in `Im(psi - Id)`.
pub fn same_twisted_class(
    group: &FgAbelianGroup,
    psi: &AbelianEndo,
    x: &AbelianElement,
    y: &AbelianElement,
) -> Result<bool> {
    check_shape(group, psi)?;
    group.check(x)?;
    group.check(y)?;
    let diff: Vec<BigInt> = x
        .to_vector()
        .iter()
        .zip(y.to_vector())
        .map(|(a, b)| a - b)
        .collect();
    lattice_member(&twisted_image_lattice(group, psi), &diff)
}

/// Smith data of the twisted image lattice with the positions of the
/// nontrivial cyclic factors of the cokernel.
struct CokernelCoordinates {
    snf: SmithForm,
    /// `(row index, order)` for each cokernel factor of order > 1.
    factors: Vec<(usize, BigInt)>,
}

fn cokernel_coordinates(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<CokernelCoordinates> {
    require_automorphism(group, psi)?;
    let snf = smith_normal_form(&twisted_image_lattice(group, psi));
    let n = group.dimension();
    if snf.rank() < n {
        return Err(Error::InfiniteReidemeister);
    }
    let factors = snf
        .invariant_factors
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(i, d)| (i, d.clone()))
        .collect();
    Ok(CokernelCoordinates { snf, factors })
}

impl CokernelCoordinates {
    /// Coordinates of `x` in the cokernel, each reduced modulo its factor.
    fn project(&self, x: &AbelianElement) -> Vec<BigInt> {
        let y = self.snf.u.apply(&x.to_vector()).expect("shapes agree");
        self.factors
            .iter()
            .map(|(i, d)| reduce_mod(&y[*i], d))
            .collect()
    }

    /// Preimage in `A` of a cokernel coordinate tuple.
    fn lift(&self, group: &FgAbelianGroup, coords: &[BigInt]) -> AbelianElement {
        let mut y = vec![BigInt::zero(); group.dimension()];
        for ((i, _), c) in self.factors.iter().zip(coords) {
            y[*i] = c.clone();
        }
        group.reduce(self.snf.u_inv.apply(&y).expect("shapes agree"))
    }

    fn order(&self) -> BigInt {
        self.factors.iter().map(|(_, d)| d).product()
    }
}

/// One representative per twisted class. Classes are enumerated by their
/// cokernel coordinates in lexicographic order of least non-negative
/// residues; each representative is the pullback of that tuple through the
/// Smith change of basis.
pub fn class_representatives(
    group: &FgAbelianGroup,
    psi: &AbelianEndo,
) -> Result<Vec<AbelianElement>> {
    let coords = cokernel_coordinates(group, psi)?;
    let orders: Vec<usize> = coords
        .factors
        .iter()
        .map(|(_, d)| d.to_usize().unwrap_or(usize::MAX))
        .collect();
    let total = orders
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&t| t <= TORSION_ENUMERATION_CAP)
        .ok_or(Error::CapExceeded {
            what: "Reidemeister number for representative listing",
            cap: TORSION_ENUMERATION_CAP,
        })?;
    let mut reps = Vec::with_capacity(total);
    let mut digits = vec![0usize; orders.len()];
    for _ in 0..total {
        let tuple: Vec<BigInt> = digits.iter().map(|&x| BigInt::from(x)).collect();
        reps.push(coords.lift(group, &tuple));
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < orders[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(reps)
}

/// A finite quotient `F: A -> K` through which the twisted classes factor.
#[derive(Clone, Debug, Serialize)]
pub struct RpWitness {
    /// `K = A / Im(psi - Id)`.
    pub quotient: FgAbelianGroup,
    /// Rows give the `K`-coordinates of a lifted element of `A`, before
    /// reduction modulo the invariant factors of `K`.
    pub projection: IntMatrix,
    /// The automorphism of `K` induced by `psi`.
    pub induced: AbelianEndo,
}

impl RpWitness {
    pub fn project(&self, x: &AbelianElement) -> AbelianElement {
        let y = self.projection.apply(&x.to_vector()).expect("shapes agree");
        self.quotient.reduce(y)
    }

    /// Checks the witness against `psi`: `|K| = R(psi)`, the square
    /// `F . psi = phi_K . F` on every generator of `A`, and that `F` maps
    /// the class representatives bijectively onto `K`.
    pub fn verify(&self, group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<bool> {
        let r = reidemeister_number(group, psi)?;
        if r != self.quotient.order() {
            return Ok(false);
        }
        for j in 0..group.dimension() {
            let e = group.generator(j);
            let left = self.project(&psi.apply(group, &e));
            let right = self.induced.apply(&self.quotient, &self.project(&e));
            if left != right {
                return Ok(false);
            }
        }
        let reps = class_representatives(group, psi)?;
        let mut images: Vec<AbelianElement> = reps.iter().map(|x| self.project(x)).collect();
        images.sort();
        images.dedup();
        if images.len() != reps.len() {
            return Ok(false);
        }
        // Each class is a full fibre: moving a representative by a
        // generator of Im(psi - Id) must not change its image.
        for x in &reps {
            for j in 0..group.dimension() {
                let e = group.generator(j);
                let shifted = group.add(x, &group.sub(&psi.apply(group, &e), &e));
                if self.project(&shifted) != self.project(x) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The canonical witness `K = A / Im(psi - Id)` for a finite Reidemeister
/// number.
pub fn rp_witness(group: &FgAbelianGroup, psi: &AbelianEndo) -> Result<RpWitness> {
    let coords = cokernel_coordinates(group, psi)?;
    let torsion: Vec<BigInt> = coords.factors.iter().map(|(_, d)| d.clone()).collect();
    let quotient = FgAbelianGroup::new(0, &torsion)?;
    let n = group.dimension();
    let k = coords.factors.len();
    let mut projection = IntMatrix::zeros(k, n);
    for (row, (i, _)) in coords.factors.iter().enumerate() {
        for j in 0..n {
            projection[(row, j)] = coords.snf.u[(*i, j)].clone();
        }
    }
    debug_assert_eq!(coords.order(), quotient.torsion_order());

    let mut induced = IntMatrix::zeros(k, k);
    for col in 0..k {
        let mut unit = vec![BigInt::zero(); k];
        unit[col] = BigInt::one();
        let preimage = coords.lift(group, &unit);
        let image = coords.project(&psi.apply(group, &preimage));
        for (row, v) in image.into_iter().enumerate() {
            induced[(row, col)] = v;
        }
    }
    let induced = AbelianEndo::from_torsion_matrix(&quotient, induced)?;
    Ok(RpWitness {
        quotient,
        projection,
        induced,
    })
}

/// Every automorphism of a finite abelian group, in lexicographic order of
/// the torsion block entries.
pub fn enumerate_automorphisms(group: &FgAbelianGroup) -> Result<Vec<AbelianEndo>> {
    if !group.is_finite() {
        return Err(Error::InvalidElement(
            "automorphism enumeration needs a finite group".into(),
        ));
    }
    let s = group.torsion.len();
    let d = &group.torsion;
    // Admissible values per entry: c in [0, d_i) with c * d_j = 0 mod d_i.
    let choices: Vec<Vec<BigInt>> = (0..s * s)
        .map(|k| {
            let (i, j) = (k / s, k % s);
            let di = d[i].to_u64().unwrap_or(u64::MAX);
            (0..di)
                .map(BigInt::from)
                .filter(|c| (c * &d[j]).is_multiple_of(&d[i]))
                .collect()
        })
        .collect();
    let total = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .filter(|&t| t <= TORSION_ENUMERATION_CAP)
        .ok_or(Error::CapExceeded {
            what: "endomorphism count",
            cap: TORSION_ENUMERATION_CAP,
        })?;
    let mut out = Vec::new();
    let mut digits = vec![0usize; s * s];
    for _ in 0..total {
        let entries = digits
            .iter()
            .enumerate()
            .map(|(k, &x)| choices[k][x].clone())
            .collect();
        let c = IntMatrix::from_entries(s, s, entries)?;
        let psi = AbelianEndo::from_torsion_matrix(group, c)?;
        if is_automorphism(group, &psi)? {
            out.push(psi);
        }
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < choices[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbelianGroup {
        FgAbelianGroup::new::<u32>(1, &[]).unwrap()
    }

    fn z2() -> FgAbelianGroup {
        FgAbelianGroup::new::<u32>(2, &[]).unwrap()
    }

    fn zn(n: u32) -> FgAbelianGroup {
        FgAbelianGroup::new(0, &[n]).unwrap()
    }

    fn free_endo(g: &FgAbelianGroup, rows: &[&[i64]]) -> AbelianEndo {
        AbelianEndo::from_free_matrix(g, IntMatrix::square(rows)).unwrap()
    }

    fn fin(n: u32) -> ExtendedCount {
        ExtendedCount::finite(n)
    }

    /// Orbits of `g -> h + g - psi(h)` on a finite group.
    fn orbit_count(g: &FgAbelianGroup, psi: &AbelianEndo) -> usize {
        let elems = g.torsion_elements().unwrap();
        let index = |x: &AbelianElement| elems.iter().position(|y| y == x).unwrap();
        let mut label: Vec<usize> = (0..elems.len()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for h in &elems {
                let shift = g.sub(h, &psi.apply(g, h));
                for (i, x) in elems.iter().enumerate() {
                    let j = index(&g.add(x, &shift));
                    let m = label[i].min(label[j]);
                    if label[i] != label[j] {
                        let (a, b) = (label[i], label[j]);
                        label.iter_mut().filter(|l| **l == a || **l == b).for_each(|l| *l = m);
                        changed = true;
                    }
                }
            }
        }
        label.sort();
        label.dedup();
        label.len()
    }

    #[test]
    fn strict_constructor_checks_chain() {
        assert!(FgAbelianGroup::new(0, &[2u32, 4]).is_ok());
        assert!(FgAbelianGroup::new(0, &[4u32, 2]).is_err());
        assert!(FgAbelianGroup::new(0, &[1u32]).is_err());
    }

    #[test]
    fn normalizing_constructor() {
        let g = FgAbelianGroup::from_cyclic_factors(1, &[6, 4, 1, 0]);
        assert_eq!(g.free_rank(), 2);
        assert_eq!(g.torsion(), &[BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/12");
    }

    #[test]
    fn automorphism_examples() {
        let g = zn(5);
        assert!(is_automorphism(&g, &AbelianEndo::identity(&g)).unwrap());
        assert!(!is_automorphism(&z(), &free_endo(&z(), &[&[2]])).unwrap());
        let sq = AbelianEndo::from_torsion_matrix(&g, IntMatrix::square(&[&[2]])).unwrap();
        assert!(is_automorphism(&g, &sq).unwrap());
        let zero = AbelianEndo::from_torsion_matrix(&g, IntMatrix::square(&[&[0]])).unwrap();
        assert!(!is_automorphism(&g, &zero).unwrap());
    }

    #[test]
    fn ill_defined_endomorphism_rejected() {
        // Z/2 + Z/4 -> sending the Z/2 generator to 1 in Z/4 is not defined.
        let g = FgAbelianGroup::new(0, &[2u32, 4]).unwrap();
        let c = IntMatrix::square(&[&[1, 0], &[1, 1]]);
        assert!(matches!(
            AbelianEndo::from_torsion_matrix(&g, c),
            Err(Error::IllDefinedEndomorphism(_))
        ));
    }

    #[test]
    fn reidemeister_examples() {
        for n in 2..=7 {
            let g = zn(n);
            assert_eq!(reidemeister_number(&g, &AbelianEndo::identity(&g)).unwrap(), fin(n));
        }
        assert_eq!(
            reidemeister_number(&z2(), &free_endo(&z2(), &[&[0, -1], &[1, 0]])).unwrap(),
            fin(2)
        );
        assert_eq!(
            reidemeister_number(&z(), &AbelianEndo::identity(&z())).unwrap(),
            ExtendedCount::Infinite
        );
        assert_eq!(
            reidemeister_number(&z2(), &free_endo(&z2(), &[&[2, 1], &[1, 1]])).unwrap(),
            fin(1)
        );
    }

    #[test]
    fn non_automorphism_is_an_error() {
        assert!(matches!(
            reidemeister_number(&z(), &free_endo(&z(), &[&[2]])),
            Err(Error::NotAutomorphism(_))
        ));
    }

    #[test]
    fn fixed_subgroup_examples() {
        let g = zn(6);
        assert_eq!(fixed_subgroup_size(&g, &AbelianEndo::identity(&g)).unwrap(), fin(6));
        assert_eq!(fixed_subgroup_size(&z(), &AbelianEndo::negation(&z())).unwrap(), fin(1));
        assert_eq!(
            fixed_subgroup_size(&z2(), &free_endo(&z2(), &[&[0, -1], &[1, 0]])).unwrap(),
            fin(1)
        );
        assert_eq!(
            fixed_subgroup_size(&z(), &AbelianEndo::identity(&z())).unwrap(),
            ExtendedCount::Infinite
        );
        // x -> -x on Z + Z/4 fixes (0, 0) and (0, 2).
        let h = FgAbelianGroup::new(1, &[4u32]).unwrap();
        assert_eq!(fixed_subgroup_size(&h, &AbelianEndo::negation(&h)).unwrap(), fin(2));
    }

    #[test]
    fn fixed_subgroup_matches_enumeration_on_finite_groups() {
        let g = FgAbelianGroup::new(0, &[2u32, 4]).unwrap();
        for psi in enumerate_automorphisms(&g).unwrap() {
            let count = g
                .torsion_elements()
                .unwrap()
                .iter()
                .filter(|x| psi.apply(&g, x) == **x)
                .count();
            assert_eq!(
                fixed_subgroup_size(&g, &psi).unwrap(),
                fin(count as u32)
            );
        }
    }

    #[test]
    fn same_class_examples() {
        let g = z();
        let neg = AbelianEndo::negation(&g);
        let e = |v: i64| g.element(&[v], &[]).unwrap();
        assert!(same_twisted_class(&g, &neg, &e(3), &e(3)).unwrap());
        assert!(!same_twisted_class(&g, &neg, &e(0), &e(1)).unwrap());
        assert!(same_twisted_class(&g, &neg, &e(0), &e(4)).unwrap());
        let bad = AbelianElement {
            free: vec![],
            torsion: vec![],
        };
        assert!(same_twisted_class(&g, &neg, &bad, &e(0)).is_err());
    }

    #[test]
    fn representatives_examples() {
        let g = zn(3);
        let reps = class_representatives(&g, &AbelianEndo::identity(&g)).unwrap();
        let tors: Vec<BigInt> = reps.iter().map(|x| x.torsion[0].clone()).collect();
        assert_eq!(tors, vec![BigInt::from(0), BigInt::from(1), BigInt::from(2)]);

        let neg = AbelianEndo::negation(&z());
        let reps = class_representatives(&z(), &neg).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(!same_twisted_class(&z(), &neg, &reps[0], &reps[1]).unwrap());

        let cat = free_endo(&z2(), &[&[2, 1], &[1, 1]]);
        assert_eq!(class_representatives(&z2(), &cat).unwrap(), vec![z2().zero()]);

        assert_eq!(
            class_representatives(&z(), &AbelianEndo::identity(&z())).unwrap_err(),
            Error::InfiniteReidemeister
        );
    }

    #[test]
    fn witness_examples() {
        let neg = AbelianEndo::negation(&z());
        let w = rp_witness(&z(), &neg).unwrap();
        assert_eq!(w.quotient, zn(2));
        assert_eq!(w.induced, AbelianEndo::identity(&zn(2)));
        assert!(w.verify(&z(), &neg).unwrap());

        let rot = free_endo(&z2(), &[&[0, -1], &[1, 0]]);
        let w = rp_witness(&z2(), &rot).unwrap();
        assert_eq!(w.quotient.order(), fin(2));
        assert!(w.verify(&z2(), &rot).unwrap());

        let g = zn(6);
        let w = rp_witness(&g, &AbelianEndo::identity(&g)).unwrap();
        assert_eq!(w.quotient, g);
        for x in g.torsion_elements().unwrap() {
            assert_eq!(w.project(&x), x);
        }
    }

    #[test]
    fn cokernel_formula_matches_orbits() {
        for torsion in [vec![2u32], vec![6], vec![2, 2], vec![2, 4], vec![3, 3]] {
            let g = FgAbelianGroup::new(0, &torsion).unwrap();
            for psi in enumerate_automorphisms(&g).unwrap() {
                let r = reidemeister_number(&g, &psi).unwrap();
                assert_eq!(r, fin(orbit_count(&g, &psi) as u32));
                assert_eq!(class_representatives(&g, &psi).unwrap().len() as u32, orbit_count(&g, &psi) as u32);
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        let count = |t: &[u32]| enumerate_automorphisms(&FgAbelianGroup::new(0, t).unwrap()).unwrap().len();
        assert_eq!(count(&[5]), 4);
        assert_eq!(count(&[12]), 4);
        assert_eq!(count(&[2, 2]), 6);
        assert_eq!(count(&[2, 4]), 8);
    }

    #[test]
    fn powers_compose() {
        let cat = free_endo(&z2(), &[&[2, 1], &[1, 1]]);
        let cube = cat.pow(&z2(), 3);
        assert_eq!(cube, cat.compose(&z2(), &cat.compose(&z2(), &cat)));
        let g = zn(7);
        let dbl = AbelianEndo::from_torsion_matrix(&g, IntMatrix::square(&[&[2]])).unwrap();
        assert_eq!(dbl.pow(&g, 3), AbelianEndo::identity(&g));
    }
}
