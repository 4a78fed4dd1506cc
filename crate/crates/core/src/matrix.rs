//! Exact integer matrices and Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense row-major integer matrix with arbitrary precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
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
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            entries.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Matrix with an explicit shape, so that `0 x k` is representable.
    pub fn with_shape(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        IntMatrix {
            rows,
            cols,
            entries,
        }
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Square sub-block `[from.., from..]`.
    pub fn trailing_block(&self, from: usize) -> IntMatrix {
        let n = self.rows - from;
        let m = self.cols - from;
        let mut out = IntMatrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                out[(i, j)] = self[(from + i, from + j)].clone();
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
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

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Serializes an integer as a JSON number when it fits in `i64`, else as a
/// decimal string.
pub(crate) struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => serializer.serialize_i64(v),
            None => serializer.collect_str(self.0),
        }
    }
}

pub(crate) fn serialize_bigints<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&JsonInt(x))?;
    }
    seq.end()
}

struct JsonRow<'a>(&'a [BigInt]);

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_bigints(self.0, serializer)
    }
}

impl Serialize for IntMatrix {
    /// Row-major nested integer arrays. A `0 x k` matrix loses its column
    /// count in this encoding.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&JsonRow(self.row(i)))?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawInt {
    Num(i64),
    Str(String),
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<Vec<RawInt>> = Vec::deserialize(deserializer)?;
        let cols = raw.first().map_or(0, Vec::len);
        if raw.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let mut entries = Vec::with_capacity(raw.len() * cols);
        for v in raw.iter().flatten() {
            entries.push(match v {
                RawInt::Num(n) => BigInt::from(*n),
                RawInt::Str(s) => s.parse().map_err(serde::de::Error::custom)?,
            });
        }
        Ok(IntMatrix::with_shape(raw.len(), cols, entries))
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, non-negative,
/// with each diagonal entry dividing the next. `v_inv` is `V^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Number of non-zero diagonal entries.
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Reducer {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_row(dst, src, q);
        self.u.add_row(dst, src, q);
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_col(dst, src, q);
        self.v.add_col(dst, src, q);
        // V <- V E with E = I + q e_src e_dst^T, so V^-1 <- E^-1 V^-1.
        self.v_inv.add_row(src, dst, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
    }

    /// Smallest non-zero |entry| in the trailing block, first in row-major order.
    fn min_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let a = self.d[(i, j)].abs();
                if !a.is_zero() && best.as_ref().is_none_or(|(_, b)| a < *b) {
                    best = Some(((i, j), a));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Smallest non-zero |entry| in row t / column t beyond the pivot.
    fn min_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let cells = (t..self.d.rows())
            .map(|i| (i, t))
            .chain((t + 1..self.d.cols()).map(|j| (t, j)));
        let mut best: Option<((usize, usize), BigInt)> = None;
        for (i, j) in cells {
            let a = self.d[(i, j)].abs();
            if !a.is_zero() && best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
        best.map(|(p, _)| p)
    }

    fn move_to_pivot(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    /// Clears row t and column t by Euclidean steps. Returns once only the
    /// pivot remains non-zero in the cross.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let pivot = self.d[(t, t)].clone();
            for i in t + 1..self.d.rows() {
                if !self.d[(i, t)].is_zero() {
                    let q = self.d[(i, t)].div_floor(&pivot);
                    self.add_row(i, t, &-q);
                }
            }
            for j in t + 1..self.d.cols() {
                if !self.d[(t, j)].is_zero() {
                    let q = self.d[(t, j)].div_floor(&pivot);
                    self.add_col(j, t, &-q);
                }
            }
            let p = self.min_in_cross(t).expect("pivot is non-zero");
            if p == (t, t) {
                return;
            }
            self.move_to_pivot(t, p);
        }
    }

    fn run(mut self) -> SmithForm {
        let diag = self.d.rows().min(self.d.cols());
        for t in 0..diag {
            let Some(p) = self.min_in_block(t) else {
                break;
            };
            self.move_to_pivot(t, p);
            loop {
                self.clear_cross(t);
                let pivot = self.d[(t, t)].clone();
                let bad = (t + 1..self.d.rows()).find(|&i| {
                    (t + 1..self.d.cols()).any(|j| !self.d[(i, j)].is_multiple_of(&pivot))
                });
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
        SmithForm {
            d: self.d,
            u: self.u,
            v: self.v,
            v_inv: self.v_inv,
        }
    }
}

/// Deterministic Smith normal form over the integers.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    Reducer {
        d: m.clone(),
        u: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
        v_inv: IntMatrix::identity(m.cols()),
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn assert_valid(input: &IntMatrix, s: &SmithForm) {
        assert_eq!(s.u.mul(input).mul(&s.v), s.d, "U M V != D for {input}");
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(input.cols()));
        let diag = s.d.diagonal();
        for x in &diag {
            assert!(!x.is_negative());
        }
        for pair in diag.windows(2) {
            if pair[0].is_zero() {
                assert!(pair[1].is_zero());
            } else {
                assert!(pair[1].is_multiple_of(&pair[0]));
            }
        }
    }

    /// Independent oracle: the k-th determinantal divisor (gcd of all k x k
    /// minors) equals d_1 * ... * d_k.
    fn determinantal_divisors(a: &IntMatrix) -> Vec<BigInt> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let mut out = Vec::new();
        for k in 1..=a.rows().min(a.cols()) {
            let mut g = BigInt::zero();
            for rs in subsets(a.rows(), k) {
                for cs in subsets(a.cols(), k) {
                    let minor = IntMatrix::from_rows(
                        &rs.iter()
                            .map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect())
                            .collect::<Vec<Vec<BigInt>>>(),
                    );
                    g = g.gcd(&minor.determinant());
                }
            }
            out.push(g);
        }
        out
    }

    #[test]
    fn examples() {
        let s = smith_normal_form(&m(&[&[2]]));
        assert_eq!(s.d, m(&[&[2]]));

        let input = m(&[&[-1, 1], &[1, -1]]);
        let s = smith_normal_form(&input);
        assert_eq!(s.d, m(&[&[1, 0], &[0, 0]]));
        assert_valid(&input, &s);
        assert_eq!(
            determinantal_divisors(&input),
            vec![BigInt::from(1), BigInt::from(0)]
        );

        let zero = IntMatrix::zeros(2, 2);
        assert_eq!(smith_normal_form(&zero).d, zero);
    }

    #[test]
    fn divisibility_fix_up() {
        let input = m(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&input);
        assert_eq!(s.d, m(&[&[1, 0], &[0, 6]]));
        assert_valid(&input, &s);
    }

    #[test]
    fn empty_shapes() {
        let input = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&input);
        assert_eq!(s.d.rows(), 0);
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(
            m(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 5]]).determinant(),
            BigInt::from(-9)
        );
    }

    #[test]
    fn big_entries_do_not_overflow() {
        let big: BigInt = BigInt::from(i64::MAX) * BigInt::from(1_000_003);
        let input = IntMatrix::from_rows(&[vec![big.clone(), BigInt::from(0)], vec![BigInt::from(0), big.clone() * 2]]);
        let s = smith_normal_form(&input);
        assert_valid(&input, &s);
        assert_eq!(s.d[(1, 1)], big * 2);
    }

    proptest! {
        #[test]
        fn smith_invariants(rows in 1usize..4, cols in 1usize..4, seed in prop::collection::vec(-6i64..7, 16)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let input = IntMatrix::from_rows(&data);
            let s = smith_normal_form(&input);
            assert_valid(&input, &s);
            let mut prod = BigInt::one();
            for (k, dk) in determinantal_divisors(&input).into_iter().enumerate() {
                prod *= &s.d[(k, k)];
                prop_assert_eq!(prod.clone(), dk);
            }
            prop_assert_eq!(smith_normal_form(&input), s);
        }
    }
}
