//! Character tables over a prime field, and the action of an automorphism
//! on irreducible characters.
//!
//! Tables are computed by Dixon's method: the class-multiplication matrices
//! are simultaneously diagonalised modulo a prime `p` with
//! `p = 1 (mod exp G)`, `p` coprime to `|G|` and `p > 2 floor(sqrt |G|)`.
//! Under these conditions every character value lies in `F_p`, the degrees
//! are recovered exactly, and distinct irreducible characters have distinct
//! rows modulo `p`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, twisted_classes, Automorphism, FiniteGroup};

/// Primes are searched below this bound.
pub const PRIME_SEARCH_LIMIT: u64 = 1 << 31;

const SPLIT_SEED: u64 = 0xd1c5_0a11;
const MAX_SPLIT_ATTEMPTS: usize = 200;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b % p, p)
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest prime `p = 1 (mod exponent)` with `p` not dividing `order` and
/// `p > 2 floor(sqrt(order))`.
pub fn choose_prime(order: u64, exponent: u64) -> Result<u64> {
    let floor = 2 * isqrt(order);
    let mut p = 1 + exponent;
    while p < PRIME_SEARCH_LIMIT {
        if p > floor && !order.is_multiple_of(p) && is_prime(p) {
            return Ok(p);
        }
        p += exponent;
    }
    Err(Error::NoSuitablePrime(PRIME_SEARCH_LIMIT))
}

/// Irreducible characters modulo a prime. Rows are characters, columns are
/// conjugacy classes; column 0 is the identity class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTableModP {
    prime: u64,
    degrees: Vec<u64>,
    rows: Vec<Vec<u64>>,
    class_sizes: Vec<usize>,
    class_representatives: Vec<usize>,
    /// Column index of each group element.
    class_of: Vec<usize>,
    /// Column of the inverse class.
    inverse_class: Vec<usize>,
    order: usize,
    group_hash: String,
}

/// Serialized form of a table, as stored in caches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredTable {
    pub prime: u64,
    pub degrees: Vec<u64>,
    pub rows: Vec<Vec<u64>>,
    pub class_reps: Vec<usize>,
    pub group_hash: String,
}

struct ClassData {
    sizes: Vec<usize>,
    reps: Vec<usize>,
    class_of: Vec<usize>,
    inverse_class: Vec<usize>,
}

/// Conjugacy classes with the identity class first, then by least element.
fn class_data(g: &FiniteGroup) -> ClassData {
    let partition = conjugacy_classes(g);
    let mut order: Vec<usize> = (0..partition.class_count()).collect();
    let id_class = partition.class_of(g.identity());
    order.sort_by_key(|&c| (c != id_class, partition.representatives()[c]));
    let mut column = vec![0; partition.class_count()];
    for (col, &c) in order.iter().enumerate() {
        column[c] = col;
    }
    let class_of: Vec<usize> = g.elements().map(|x| column[partition.class_of(x)]).collect();
    let sizes_by_id = partition.class_sizes();
    let sizes = order.iter().map(|&c| sizes_by_id[c]).collect();
    let reps: Vec<usize> = order.iter().map(|&c| partition.representatives()[c]).collect();
    let inverse_class = reps.iter().map(|&x| class_of[g.inv(x)]).collect();
    ClassData {
        sizes,
        reps,
        class_of,
        inverse_class,
    }
}

/// Structure constants as matrices: `mats[j][r][s]` counts `x` in class `j`
/// with `x^-1 z_s` in class `r`, for a fixed `z_s` in class `s`.
fn class_matrices(g: &FiniteGroup, classes: &ClassData, p: u64) -> Vec<Vec<Vec<u64>>> {
    let k = classes.reps.len();
    let mut members = vec![Vec::new(); k];
    for x in g.elements() {
        members[classes.class_of[x]].push(x);
    }
    let mut mats = vec![vec![vec![0u64; k]; k]; k];
    for (j, mat) in mats.iter_mut().enumerate() {
        for (s, &z) in classes.reps.iter().enumerate() {
            for &x in &members[j] {
                let r = classes.class_of[g.mul(g.inv(x), z)];
                mat[r][s] = add_mod(mat[r][s], 1, p);
            }
        }
    }
    mats
}

/// Row-reduces `vectors` to reduced echelon form, dropping zero rows.
/// Returns the reduced rows and their pivot columns.
fn rref(mut vectors: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let cols = vectors.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(sel) = (row..vectors.len()).find(|&i| vectors[i][col] != 0) else {
            continue;
        };
        vectors.swap(row, sel);
        let inv = inv_mod(vectors[row][col], p);
        for x in vectors[row].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = vectors[row].clone();
        for (i, vector) in vectors.iter_mut().enumerate() {
            if i != row && vector[col] != 0 {
                let f = vector[col];
                for (x, &y) in vector.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == vectors.len() {
            break;
        }
    }
    vectors.truncate(row);
    (vectors, pivots)
}

/// Basis of the null space of the square matrix `a`.
fn null_space(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let (reduced, pivots) = rref(a.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = sub_mod(0, row[f], p);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(xI - a)` via Hessenberg reduction,
/// coefficients from the constant term up.
fn char_poly(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = inv_mod(h[m][m - 1], p);
        for i in m + 1..n {
            let u = mul_mod(h[i][m - 1], inv, p);
            if u == 0 {
                continue;
            }
            let pivot_row = h[m].clone();
            for (x, &y) in h[i].iter_mut().zip(&pivot_row) {
                *x = sub_mod(*x, mul_mod(u, y, p), p);
            }
            for row in h.iter_mut() {
                let v = mul_mod(u, row[i], p);
                row[m] = add_mod(row[m], v, p);
            }
        }
    }
    // polys[m] = char poly of the leading m x m block.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let mut next = vec![0u64; m + 1];
        let prev = &polys[m - 1];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = add_mod(next[d + 1], c, p);
            next[d] = sub_mod(next[d], mul_mod(h[m - 1][m - 1], c, p), p);
        }
        let mut t = 1u64;
        for i in (1..m).rev() {
            t = mul_mod(t, h[i][i - 1], p);
            let coef = mul_mod(t, h[i - 1][m - 1], p);
            for (d, &c) in polys[i - 1].iter().enumerate() {
                next[d] = sub_mod(next[d], mul_mod(coef, c, p), p);
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| poly.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p)) == 0)
        .collect()
}

fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, p), p))
        })
        .collect()
}

/// Splits `F_p^k` into the one-dimensional common eigenspaces of the class
/// matrices and returns one eigenvector per space.
fn common_eigenvectors(mats: &[Vec<Vec<u64>>], p: u64) -> Result<Vec<Vec<u64>>> {
    let k = mats.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let identity: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut work = vec![identity];
    let mut done = Vec::new();
    while let Some(space) = work.pop() {
        if space.len() == 1 {
            done.push(space.into_iter().next().expect("one vector"));
            continue;
        }
        let mut split = None;
        for _ in 0..MAX_SPLIT_ATTEMPTS {
            let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            let mut comb = vec![vec![0u64; k]; k];
            for (c, m) in coeffs.iter().zip(mats) {
                for r in 0..k {
                    for s in 0..k {
                        comb[r][s] = add_mod(comb[r][s], mul_mod(*c, m[r][s], p), p);
                    }
                }
            }
            let parts = split_space(&comb, &space, p)?;
            if parts.len() > 1 {
                split = Some(parts);
                break;
            }
        }
        match split {
            Some(parts) => work.extend(parts),
            None => {
                return Err(Error::CharacterTable(
                    "class matrices did not split a common eigenspace".into(),
                ))
            }
        }
    }
    Ok(done)
}

/// Eigenspaces of `m` restricted to the invariant subspace spanned by the
/// rows of `space` (given in reduced echelon form).
fn split_space(m: &[Vec<u64>], space: &[Vec<u64>], p: u64) -> Result<Vec<Vec<Vec<u64>>>> {
    let (basis, pivots) = rref(space.to_vec(), p);
    let d = basis.len();
    // restricted[i][j]: coordinate i of m * basis_j.
    let images: Vec<Vec<u64>> = basis.iter().map(|b| mat_vec(m, b, p)).collect();
    let restricted: Vec<Vec<u64>> = (0..d)
        .map(|i| images.iter().map(|img| img[pivots[i]]).collect())
        .collect();
    let mut parts = Vec::new();
    let mut total = 0;
    for lambda in roots(&char_poly(&restricted, p), p) {
        let shifted: Vec<Vec<u64>> = restricted
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| if i == j { sub_mod(x, lambda, p) } else { x })
                    .collect()
            })
            .collect();
        let kernel = null_space(&shifted, p);
        total += kernel.len();
        let vectors: Vec<Vec<u64>> = kernel
            .iter()
            .map(|coords| {
                let mut v = vec![0u64; m.len()];
                for (c, b) in coords.iter().zip(&basis) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = add_mod(*x, mul_mod(*c, *y, p), p);
                    }
                }
                v
            })
            .collect();
        parts.push(rref(vectors, p).0);
    }
    if total != d {
        return Err(Error::CharacterTable(
            "restricted class matrix is not diagonalisable".into(),
        ));
    }
    Ok(parts)
}

impl CharacterTableModP {
    /// Computes the character table of `g` and verifies it.
    pub fn compute(g: &FiniteGroup) -> Result<Self> {
        let n = g.order() as u64;
        let p = choose_prime(n, g.exponent() as u64)?;
        let classes = class_data(g);
        let k = classes.reps.len();
        let mats = class_matrices(g, &classes, p);
        let eigenvectors = common_eigenvectors(&mats, p)?;

        let sqrt_n = isqrt(n);
        let mut rows = Vec::with_capacity(k);
        let mut degrees = Vec::with_capacity(k);
        for v in eigenvectors {
            if v[0] == 0 {
                return Err(Error::CharacterTable(
                    "eigenvector vanishes on the identity class".into(),
                ));
            }
            let scale = inv_mod(v[0], p);
            let omega: Vec<u64> = v.iter().map(|&x| mul_mod(x, scale, p)).collect();
            // sum_r omega_r omega_{r'} / |C_r| = |G| / chi(1)^2
            let t = (0..k).fold(0, |acc, r| {
                let term = mul_mod(
                    mul_mod(omega[r], omega[classes.inverse_class[r]], p),
                    inv_mod(classes.sizes[r] as u64 % p, p),
                    p,
                );
                add_mod(acc, term, p)
            });
            if t == 0 {
                return Err(Error::CharacterTable("degenerate norm".into()));
            }
            let d_squared = mul_mod(n % p, inv_mod(t, p), p);
            let degree = (1..=sqrt_n)
                .find(|d| (d * d) % p == d_squared)
                .ok_or_else(|| Error::CharacterTable("no degree matches".into()))?;
            let row: Vec<u64> = (0..k)
                .map(|r| {
                    mul_mod(
                        mul_mod(omega[r], degree % p, p),
                        inv_mod(classes.sizes[r] as u64 % p, p),
                        p,
                    )
                })
                .collect();
            rows.push(row);
            degrees.push(degree);
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| (degrees[a], &rows[a]).cmp(&(degrees[b], &rows[b])));
        let table = CharacterTableModP {
            prime: p,
            degrees: order.iter().map(|&i| degrees[i]).collect(),
            rows: order.iter().map(|&i| rows[i].clone()).collect(),
            class_sizes: classes.sizes,
            class_representatives: classes.reps,
            class_of: classes.class_of,
            inverse_class: classes.inverse_class,
            order: g.order(),
            group_hash: g.content_hash(),
        };
        table.verify()?;
        Ok(table)
    }

    /// Rebuilds a table from its stored form, re-deriving the class data
    /// from `g` and re-verifying every invariant.
    pub fn from_stored(g: &FiniteGroup, stored: StoredTable) -> Result<Self> {
        if stored.group_hash != g.content_hash() {
            return Err(Error::CharacterTable("table belongs to another group".into()));
        }
        let classes = class_data(g);
        if classes.reps != stored.class_reps {
            return Err(Error::CharacterTable("class representatives differ".into()));
        }
        let k = classes.reps.len();
        let well_formed = is_prime(stored.prime)
            && stored.degrees.len() == k
            && stored.rows.len() == k
            && stored.rows.iter().all(|r| r.len() == k && r.iter().all(|&x| x < stored.prime));
        if !well_formed {
            return Err(Error::CharacterTable("stored table is malformed".into()));
        }
        let table = CharacterTableModP {
            prime: stored.prime,
            degrees: stored.degrees,
            rows: stored.rows,
            class_sizes: classes.sizes,
            class_representatives: classes.reps,
            class_of: classes.class_of,
            inverse_class: classes.inverse_class,
            order: g.order(),
            group_hash: stored.group_hash,
        };
        table.verify()?;
        Ok(table)
    }

    pub fn to_stored(&self) -> StoredTable {
        StoredTable {
            prime: self.prime,
            degrees: self.degrees.clone(),
            rows: self.rows.clone(),
            class_reps: self.class_representatives.clone(),
            group_hash: self.group_hash.clone(),
        }
    }

    /// Checks orthogonality of rows and columns, the degree sum, degree
    /// divisibility and distinctness of rows.
    pub fn verify(&self) -> Result<()> {
        let p = self.prime;
        let k = self.class_count();
        let n = self.order as u64;
        if self.degrees.iter().map(|d| d * d).sum::<u64>() != n {
            return Err(Error::CharacterTable("sum of squared degrees differs from |G|".into()));
        }
        if self.degrees.iter().any(|&d| !n.is_multiple_of(d)) {
            return Err(Error::CharacterTable("a degree does not divide |G|".into()));
        }
        for (row, &d) in self.rows.iter().zip(&self.degrees) {
            if row[0] != d % p {
                return Err(Error::CharacterTable("identity column differs from degree".into()));
            }
        }
        let inv_n = inv_mod(n % p, p);
        for i in 0..k {
            for j in 0..k {
                let s = (0..k).fold(0, |acc, c| {
                    let term = mul_mod(
                        self.class_sizes[c] as u64 % p,
                        mul_mod(self.rows[i][c], self.rows[j][self.inverse_class[c]], p),
                        p,
                    );
                    add_mod(acc, term, p)
                });
                if mul_mod(s, inv_n, p) != u64::from(i == j) {
                    return Err(Error::CharacterTable(format!(
                        "rows {i} and {j} are not orthonormal"
                    )));
                }
            }
        }
        for r in 0..k {
            for s in 0..k {
                let sum = (0..k).fold(0, |acc, i| {
                    add_mod(
                        acc,
                        mul_mod(self.rows[i][r], self.rows[i][self.inverse_class[s]], p),
                        p,
                    )
                });
                let expected = if r == s {
                    (n / self.class_sizes[r] as u64) % p
                } else {
                    0
                };
                if sum != expected {
                    return Err(Error::CharacterTable(format!(
                        "columns {r} and {s} are not orthogonal"
                    )));
                }
            }
        }
        let mut sorted = self.rows.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != k {
            return Err(Error::CharacterTable("rows are not distinct".into()));
        }
        Ok(())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn class_count(&self) -> usize {
        self.class_representatives.len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_representatives(&self) -> &[usize] {
        &self.class_representatives
    }

    pub fn group_hash(&self) -> &str {
        &self.group_hash
    }

    /// Column holding the class of element `x`.
    pub fn class_column(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Column of the class containing the inverses of class `c`.
    pub fn inverse_column(&self, c: usize) -> usize {
        self.inverse_class[c]
    }
}

/// The permutation `chi -> chi . phi` of irreducible characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualAction {
    pub permutation: Vec<usize>,
    pub fixed_count: usize,
}

/// Locates `chi_i . phi` in the table for every row `i`.
pub fn dual_action(
    g: &FiniteGroup,
    table: &CharacterTableModP,
    phi: &Automorphism,
) -> Result<DualAction> {
    if table.group_hash != g.content_hash() {
        return Err(Error::CharacterTable("table belongs to another group".into()));
    }
    let column_image: Vec<usize> = table
        .class_representatives
        .iter()
        .map(|&x| table.class_of[phi.apply(x)])
        .collect();
    let lookup: HashMap<&[u64], usize> = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();
    let mut permutation = Vec::with_capacity(table.class_count());
    for row in &table.rows {
        let twisted: Vec<u64> = column_image.iter().map(|&c| row[c]).collect();
        let j = lookup.get(twisted.as_slice()).ok_or_else(|| {
            Error::CharacterTable("twisted character is not a row of the table".into())
        })?;
        permutation.push(*j);
    }
    let fixed_count = permutation.iter().enumerate().filter(|(i, &j)| *i == j).count();
    Ok(DualAction {
        permutation,
        fixed_count,
    })
}

/// Reidemeister number against the number of characters fixed by `phi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BurnsideCheck {
    pub reidemeister: usize,
    pub fixed_characters: usize,
    pub equal: bool,
}

/// Counts twisted classes and fixed characters by independent routes.
pub fn verify_twisted_burnside(g: &FiniteGroup, phi: &Automorphism) -> Result<BurnsideCheck> {
    let table = CharacterTableModP::compute(g)?;
    verify_twisted_burnside_with(g, &table, phi)
}

/// As [`verify_twisted_burnside`], reusing a precomputed table.
pub fn verify_twisted_burnside_with(
    g: &FiniteGroup,
    table: &CharacterTableModP,
    phi: &Automorphism,
) -> Result<BurnsideCheck> {
    let reidemeister = twisted_classes(g, phi).class_count();
    let fixed_characters = dual_action(g, table, phi)?.fixed_count;
    Ok(BurnsideCheck {
        reidemeister,
        fixed_characters,
        equal: reidemeister == fixed_characters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{
        automorphism_from_generator_images, enumerate_automorphisms, inner_automorphism,
        Permutation,
    };

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    fn cyclic(n: usize) -> FiniteGroup {
        let cycle: Vec<u32> = (1..=n as u32).collect();
        FiniteGroup::from_permutation_generators(n, &[perm(n, &[&cycle])]).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutation_generators(3, &[perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])])
            .unwrap()
    }

    #[test]
    fn prime_choice() {
        assert_eq!(choose_prime(1, 1).unwrap(), 3);
        assert_eq!(choose_prime(3, 3).unwrap(), 7);
        assert_eq!(choose_prime(6, 6).unwrap(), 7);
        assert_eq!(choose_prime(24, 12).unwrap(), 13);
    }

    #[test]
    fn char_poly_of_small_matrix() {
        // [[1, 2], [3, 4]] has char poly x^2 - 5x - 2.
        let p = 101;
        let poly = char_poly(&[vec![1, 2], vec![3, 4]], p);
        assert_eq!(poly, vec![p - 2, p - 5, 1]);
        let poly = char_poly(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]], p);
        assert_eq!(poly, vec![p - 1, 0, 0, 1]);
    }

    #[test]
    fn trivial_group_table() {
        let t = CharacterTableModP::compute(&FiniteGroup::trivial()).unwrap();
        assert_eq!(t.degrees(), &[1]);
        assert_eq!(t.rows(), &[vec![1]]);
    }

    #[test]
    fn z3_table_holds_cube_roots_of_unity() {
        let t = CharacterTableModP::compute(&cyclic(3)).unwrap();
        assert_eq!(t.prime(), 7);
        assert_eq!(t.degrees(), &[1, 1, 1]);
        // Cube roots of unity mod 7 are 1, 2, 4.
        for row in t.rows() {
            for &x in row {
                assert_eq!(pow_mod(x, 3, 7), 1);
            }
        }
        let mut second_column: Vec<u64> = t.rows().iter().map(|r| r[1]).collect();
        second_column.sort();
        assert_eq!(second_column, vec![1, 2, 4]);
    }

    #[test]
    fn s3_degrees() {
        let t = CharacterTableModP::compute(&s3()).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2]);
        assert_eq!(t.rows()[0], vec![1, 1, 1]);
    }

    #[test]
    fn dual_action_examples() {
        let g = s3();
        let t = CharacterTableModP::compute(&g).unwrap();
        let id = dual_action(&g, &t, &Automorphism::identity(&g)).unwrap();
        assert_eq!(id.permutation, vec![0, 1, 2]);
        assert_eq!(id.fixed_count, 3);
        for x in g.elements() {
            let a = dual_action(&g, &t, &inner_automorphism(&g, x)).unwrap();
            assert_eq!(a.permutation, vec![0, 1, 2]);
        }

        let z5 = cyclic(5);
        let t5 = CharacterTableModP::compute(&z5).unwrap();
        let sq = automorphism_from_generator_images(&z5, &[z5.mul(1, 1)]).unwrap();
        assert_eq!(dual_action(&z5, &t5, &sq).unwrap().fixed_count, 1);
    }

    #[test]
    fn dual_action_rejects_foreign_table() {
        let t = CharacterTableModP::compute(&cyclic(3)).unwrap();
        let g = s3();
        assert!(dual_action(&g, &t, &Automorphism::identity(&g)).is_err());
    }

    #[test]
    fn burnside_examples() {
        let g = s3();
        let check = verify_twisted_burnside(&g, &Automorphism::identity(&g)).unwrap();
        assert_eq!((check.reidemeister, check.fixed_characters, check.equal), (3, 3, true));
        let z5 = cyclic(5);
        let sq = automorphism_from_generator_images(&z5, &[z5.mul(1, 1)]).unwrap();
        let check = verify_twisted_burnside(&z5, &sq).unwrap();
        assert_eq!((check.reidemeister, check.fixed_characters), (1, 1));
        for n in 1..=8 {
            let z = cyclic(n);
            let check = verify_twisted_burnside(&z, &Automorphism::identity(&z)).unwrap();
            assert_eq!((check.reidemeister, check.fixed_characters), (n, n));
        }
    }

    #[test]
    fn dual_action_is_contravariant() {
        let g = s3();
        let t = CharacterTableModP::compute(&g).unwrap();
        let auts = enumerate_automorphisms(&g).unwrap();
        for phi in &auts {
            for psi in &auts {
                let p_phi = dual_action(&g, &t, phi).unwrap().permutation;
                let p_psi = dual_action(&g, &t, psi).unwrap().permutation;
                let composed = dual_action(&g, &t, &phi.compose(psi)).unwrap().permutation;
                let expected: Vec<usize> = (0..t.class_count()).map(|i| p_psi[p_phi[i]]).collect();
                assert_eq!(composed, expected);
            }
        }
    }

    #[test]
    fn stored_round_trip_and_tamper_detection() {
        let g = s3();
        let t = CharacterTableModP::compute(&g).unwrap();
        let back = CharacterTableModP::from_stored(&g, t.to_stored()).unwrap();
        assert_eq!(back, t);
        let mut bad = t.to_stored();
        bad.rows[1][1] = (bad.rows[1][1] + 1) % bad.prime;
        assert!(CharacterTableModP::from_stored(&g, bad).is_err());
    }
}
