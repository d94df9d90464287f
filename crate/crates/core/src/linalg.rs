//! Exact integer matrices, Smith and Hermite normal forms, cokernel orders
//! and lattice membership.
//!
//! Everything here works over arbitrary-precision integers. Matrices are
//! small (a few dozen rows at most in practice), so the algorithms favour
//! determinism and transparency over asymptotic speed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A dense, row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows. `cols` is needed to give zero-row
    /// matrices a width.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Square matrix from small integer rows; panics on ragged input.
    /// Intended for literals in tests and the built-in corpus.
    pub fn square(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(n, &owned).expect("square literal must not be ragged")
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix product; errors when the inner dimensions disagree.
    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Places `self` and `other` side by side.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    /// Integer matrix power for square matrices.
    pub fn pow(&self, mut exp: u32) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * factor;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * factor;
            self.entries[i * self.cols + dst] += v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.entries[i * self.cols + j]);
            self.entries[i * self.cols + j] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.entries[i * self.cols + j]);
            self.entries[i * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    /// Panics on a dimension mismatch; use [`IntMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serializes an integer as a JSON number when it fits in 64 bits and as a
/// decimal string otherwise.
pub struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => serializer.serialize_i64(x),
            None => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

/// Sequence counterpart of [`JsonInt`].
pub struct JsonInts<'a>(pub &'a [BigInt]);

impl Serialize for JsonInts<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(JsonInt))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq((0..self.rows).map(|i| JsonInts(self.row(i))))
    }
}

/// A Smith decomposition `U·M·V = S` of an integer matrix `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    /// Inverse of `u`, accumulated alongside it.
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `s`, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Computes the Smith normal form with accumulated unimodular transforms.
///
/// Pivots are chosen as the entry of least absolute value in the remaining
/// block, lowest row then lowest column on ties.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&s, t) else {
            break;
        };
        row_swap(&mut s, &mut u, &mut u_inv, t, pi);
        col_swap(&mut s, &mut v, t, pj);

        loop {
            // Clear column t below the pivot and row t right of it. Any
            // nonzero remainder becomes a smaller pivot candidate.
            let mut dirty = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_add(&mut s, &mut u, &mut u_inv, i, t, &-q);
                dirty |= !s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                col_add(&mut s, &mut v, j, t, &-q);
                dirty |= !s[(t, j)].is_zero();
            }
            if dirty {
                let (pi, pj) = min_abs_in_cross(&s, t);
                row_swap(&mut s, &mut u, &mut u_inv, t, pi);
                col_swap(&mut s, &mut v, t, pj);
                continue;
            }
            // Divisibility of the remaining block by the pivot.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&s[(t, t)]));
            match offender {
                Some((i, _)) => row_add(&mut s, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }

    let invariant_factors = (0..rows.min(cols))
        .map(|i| s[(i, i)].clone())
        .take_while(|d| !d.is_zero())
        .collect();
    SmithForm {
        u,
        u_inv,
        s,
        v,
        invariant_factors,
    }
}

fn min_abs_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => x.abs() < s[b].abs(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Least nonzero entry among the pivot, its column and its row.
fn min_abs_in_cross(s: &IntMatrix, t: usize) -> (usize, usize) {
    let candidates = (t..s.rows)
        .map(|i| (i, t))
        .chain((t + 1..s.cols).map(|j| (t, j)));
    let mut best = (t, t);
    let mut best_abs: Option<BigInt> = None;
    for (i, j) in candidates {
        let x = &s[(i, j)];
        if x.is_zero() {
            continue;
        }
        let a = x.abs();
        let replace = match &best_abs {
            None => true,
            Some(b) => match a.cmp(b) {
                Ordering::Less => true,
                Ordering::Equal => (i, j) < best,
                Ordering::Greater => false,
            },
        };
        if replace {
            best = (i, j);
            best_abs = Some(a);
        }
    }
    best
}

fn row_swap(s: &mut IntMatrix, u: &mut IntMatrix, u_inv: &mut IntMatrix, a: usize, b: usize) {
    s.swap_rows(a, b);
    u.swap_rows(a, b);
    u_inv.swap_cols(a, b);
}

fn col_swap(s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    s.swap_cols(a, b);
    v.swap_cols(a, b);
}

/// row[dst] += q * row[src], mirrored on U and its inverse.
fn row_add(
    s: &mut IntMatrix,
    u: &mut IntMatrix,
    u_inv: &mut IntMatrix,
    dst: usize,
    src: usize,
    q: &BigInt,
) {
    s.add_row_multiple(dst, src, q);
    u.add_row_multiple(dst, src, q);
    // (E·U)^-1 = U^-1·E^-1, and E^-1 subtracts instead of adds.
    u_inv.add_col_multiple(src, dst, &-q);
}

fn col_add(s: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    s.add_col_multiple(dst, src, q);
    v.add_col_multiple(dst, src, q);
}

/// A count that may be infinite. `Infinite` orders above every finite value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedCount {
    Finite(BigUint),
    Infinite,
}

impl ExtendedCount {
    pub fn finite<T: Into<BigUint>>(n: T) -> Self {
        ExtendedCount::Finite(n.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedCount::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            ExtendedCount::Finite(n) => Some(n),
            ExtendedCount::Infinite => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.as_finite().and_then(ToPrimitive::to_u64)
    }
}

impl fmt::Display for ExtendedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedCount::Finite(n) => write!(f, "{n}"),
            ExtendedCount::Infinite => f.write_str("Infinite"),
        }
    }
}

/// Finite values serialize as JSON numbers when they fit in 64 bits and as
/// decimal strings otherwise; infinity is the string `"Infinite"`.
impl Serialize for ExtendedCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedCount::Finite(n) => match n.to_u64() {
                Some(x) => serializer.serialize_u64(x),
                None => serializer.serialize_str(&n.to_string()),
            },
            ExtendedCount::Infinite => serializer.serialize_str("Infinite"),
        }
    }
}

/// Builds the stacked matrix `[M | D]` where `D` puts `relations[j]` on row
/// `rows - relations.len() + j`, i.e. the relations sit on the trailing rows.
pub fn stack_relations(m: &IntMatrix, relations: &[BigInt]) -> Result<IntMatrix> {
    if relations.len() > m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: relations.len(),
        });
    }
    let offset = m.rows - relations.len();
    let mut d = IntMatrix::zeros(m.rows, relations.len());
    for (j, r) in relations.iter().enumerate() {
        d[(offset + j, j)] = r.clone();
    }
    m.hstack(&d)
}

/// Order of `Z^rows / (column lattice of M + relation lattice)`.
///
/// `relations` gives the orders of the trailing coordinates (the torsion
/// block); it may be empty.
pub fn cokernel_order(m: &IntMatrix, relations: &[BigInt]) -> Result<ExtendedCount> {
    let stacked = stack_relations(m, relations)?;
    let snf = smith_normal_form(&stacked);
    if snf.rank() < stacked.rows {
        return Ok(ExtendedCount::Infinite);
    }
    let order = snf
        .invariant_factors
        .iter()
        .fold(BigInt::one(), |acc, d| acc * d);
    Ok(ExtendedCount::Finite(
        order.to_biguint().expect("invariant factors are positive"),
    ))
}

/// Row-style Hermite normal form: `H = W·A` with `W` unimodular, `H` in row
/// echelon form with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped, so the rows of the result are a
/// basis of the row lattice of `A`.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        // Euclid on the column below pivot_row.
        loop {
            let best = (pivot_row..h.rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()).then(x.cmp(&y)));
            let Some(best) = best else { break };
            h.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..h.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                h.add_row_multiple(i, pivot_row, &-q);
                done &= h[(i, col)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
            h.add_row_multiple(i, pivot_row, &-q);
        }
        pivots.push(col);
        pivot_row += 1;
    }
    let entries = h.entries[..pivot_row * h.cols].to_vec();
    IntMatrix {
        rows: pivot_row,
        cols: h.cols,
        entries,
    }
}

/// Whether `b` lies in the integer span of the columns of `m`.
pub fn lattice_member(m: &IntMatrix, b: &[BigInt]) -> Result<bool> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: b.len(),
        });
    }
    let basis = hermite_normal_form(&m.transpose());
    let mut rest = b.to_vec();
    for k in 0..basis.rows() {
        let row = basis.row(k);
        let col = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("hermite rows are nonzero");
        if rest[..col].iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
        let (q, r) = rest[col].div_rem(&row[col]);
        if !r.is_zero() {
            return Ok(false);
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    Ok(rest.iter().all(Zero::is_zero))
}

/// Reduces `x` into `[0, m)` for positive `m`.
pub(crate) fn reduce_mod(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

pub(crate) fn is_unit(x: &BigInt) -> bool {
    x.sign() != Sign::NoSign && x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::square(rows)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(a: &IntMatrix, snf: &SmithForm) {
        assert_eq!(&(&snf.u * a) * &snf.v, snf.s);
        assert_eq!(&snf.u * &snf.u_inv, IntMatrix::identity(a.rows()));
        assert!(is_unit(&snf.u.determinant().unwrap()));
        assert!(is_unit(&snf.v.determinant().unwrap()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(snf.s[(i, j)].is_zero());
                }
            }
        }
        for w in snf.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(snf.invariant_factors.iter().all(|d| d.is_positive()));
        for i in snf.rank()..a.rows().min(a.cols()) {
            assert!(snf.s[(i, i)].is_zero());
        }
    }

    #[test]
    fn smith_of_identity() {
        let a = IntMatrix::identity(3);
        let snf = smith_normal_form(&a);
        check_smith(&a, &snf);
        assert_eq!(snf.s, a);
        assert_eq!(snf.invariant_factors, ints(&[1, 1, 1]));
    }

    #[test]
    fn smith_of_zero() {
        let a = IntMatrix::zeros(2, 2);
        let snf = smith_normal_form(&a);
        check_smith(&a, &snf);
        assert!(snf.s.is_zero());
        assert!(snf.invariant_factors.is_empty());
    }

    #[test]
    fn smith_of_diag_2_3() {
        let a = IntMatrix::diagonal(&[2, 3]);
        let snf = smith_normal_form(&a);
        check_smith(&a, &snf);
        assert_eq!(snf.invariant_factors, ints(&[1, 6]));
    }

    #[test]
    fn smith_of_rectangular() {
        let a = IntMatrix::from_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12]]).unwrap();
        let snf = smith_normal_form(&a);
        check_smith(&a, &snf);
        assert_eq!(snf.invariant_factors, ints(&[2, 6]));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel_order(&m(&[&[-2]]), &[]).unwrap(),
            ExtendedCount::finite(2u32)
        );
        assert_eq!(
            cokernel_order(&m(&[&[0]]), &[]).unwrap(),
            ExtendedCount::Infinite
        );
        assert_eq!(
            cokernel_order(&m(&[&[1, 1], &[1, 0]]), &[]).unwrap(),
            ExtendedCount::finite(1u32)
        );
        // Z/4 with the zero map: coker is Z/4.
        assert_eq!(
            cokernel_order(&m(&[&[0]]), &ints(&[4])).unwrap(),
            ExtendedCount::finite(4u32)
        );
    }

    #[test]
    fn cokernel_rejects_too_many_relations() {
        assert!(cokernel_order(&m(&[&[1]]), &ints(&[2, 3])).is_err());
    }

    #[test]
    fn membership_examples() {
        let a = m(&[&[-2]]);
        assert!(lattice_member(&a, &ints(&[0])).unwrap());
        assert!(!lattice_member(&a, &ints(&[3])).unwrap());
        assert!(lattice_member(&a, &ints(&[4])).unwrap());
        assert!(lattice_member(&IntMatrix::zeros(2, 0), &ints(&[0, 0])).unwrap());
        assert!(!lattice_member(&IntMatrix::zeros(2, 0), &ints(&[0, 1])).unwrap());
    }

    #[test]
    fn membership_dimension_mismatch() {
        assert!(matches!(
            lattice_member(&m(&[&[1]]), &ints(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn determinant_matches_known_values() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant().unwrap(), BigInt::from(1));
        assert_eq!(
            m(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]).determinant().unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), BigInt::from(1));
    }

    #[test]
    fn hermite_form_is_echelon() {
        let a = IntMatrix::from_rows(3, &[vec![4, 6, 2], vec![2, 3, 5], vec![6, 9, 7]]).unwrap();
        let h = hermite_normal_form(&a);
        assert_eq!(h.rows(), 2);
        assert_eq!(h.row(0), ints(&[2, 3, 5]).as_slice());
        assert_eq!(h.row(1), ints(&[0, 0, 8]).as_slice());
    }
}
