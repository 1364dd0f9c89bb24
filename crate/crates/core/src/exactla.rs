//! Dense exact linear algebra over the rationals and the integers.
//!
//! All routines are deterministic: pivots are chosen by fixed scan order, so
//! identical inputs produce identical reduced forms, kernel bases, and Smith
//! transforms. Nothing here is floating point.

// Elimination inner loops index rows and columns directly; iterator rewrites
// obscure the pivot arithmetic.
#![allow(clippy::needless_range_loop)]

use crate::error::Error;
use crate::Result;
use num::bigint::BigInt;

use num::traits::Signed;
use num::{BigRational, One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// Exact rational scalar. Always kept in lowest terms with positive
/// denominator (maintained by the underlying type).
pub type Q = BigRational;

/// Shorthand for an integer rational.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for n/d.
pub fn qr(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// x^e for any integer e; negative exponents invert (x must be nonzero then).
pub fn q_pow(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num::pow::pow(x.clone(), e as usize)
    } else {
        num::pow::pow(x.clone(), (-e) as usize).recip()
    }
}

/// Exact n-th root of a rational, if one exists in Q.
///
/// For even n the argument must be a non-negative perfect power; the
/// non-negative root is returned. For odd n the sign is preserved.
pub fn q_nth_root(x: &Q, n: u32) -> Option<Q> {
    assert!(n >= 1, "root order must be positive");
    if n == 1 {
        return Some(x.clone());
    }
    if x.is_zero() {
        return Some(Q::zero());
    }
    if n.is_multiple_of(2) && x.is_negative() {
        return None;
    }
    let int_root = |v: &BigInt| -> Option<BigInt> {
        let a = v.abs();
        let r = a.nth_root(n);
        if num::pow::pow(r.clone(), n as usize) == a {
            Some(if v.is_negative() { -r } else { r })
        } else {
            None
        }
    };
    let num_root = int_root(x.numer())?;
    let den_root = int_root(x.denom())?;
    Some(BigRational::new(num_root, den_root))
}

/// Serialize a rational as its canonical string ("-7/2", "3").
pub fn q_to_string(x: &Q) -> String {
    x.to_string()
}

/// A dense matrix over Q, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Q>>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![vec![Q::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<Q>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        for r in &data {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    /// Build from integer entries, row-major.
    pub fn from_i64_rows(data: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Q>> = data
            .iter()
            .map(|r| r.iter().map(|&v| qi(v)).collect())
            .collect();
        Self::from_rows(rows).expect("literal rows are rectangular")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, columns: &[Vec<Q>]) -> Result<Self> {
        for c in columns {
            if c.len() != ambient {
                return Err(Error::DimensionMismatch {
                    context: "column length",
                    expected: ambient,
                    got: c.len(),
                });
            }
        }
        let mut m = Self::zero(ambient, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.data[i][j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|v| v.is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product inner dimension",
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other.data[k][j].is_zero() {
                        continue;
                    }
                    let add = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += add;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix difference shape",
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] -= &other.data[i][j];
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form plus rank, pivot columns, kernel and image.
    ///
    /// Pivot choice: within each column, the first nonzero entry scanning top
    /// to bottom (rows already processed are skipped). Exact arithmetic makes
    /// any nonzero pivot equally good; first-hit keeps the result canonical.
    pub fn row_reduce(&self) -> RowReduced {
        let mut m = self.data.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let mut pivot_row = None;
            for i in r..self.rows {
                if !m[i][c].is_zero() {
                    pivot_row = Some(i);
                    break;
                }
            }
            let Some(p) = pivot_row else { continue };
            m.swap(r, p);
            let inv = m[r][c].clone().recip();
            for v in m[r][c..].iter_mut() {
                *v *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..self.cols {
                        let t = &m[r][j] * &f;
                        m[i][j] -= t;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let rank = pivot_cols.len();

        // Kernel: one basis vector per free column.
        let mut kernel_vectors = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivot_cols.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Q::zero(); self.cols];
            vec[free] = Q::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                vec[pc] = -m[row][free].clone();
            }
            kernel_vectors.push(vec);
        }

        // Image: original columns at the pivot positions span the column space.
        let image_vectors: Vec<Vec<Q>> = pivot_cols.iter().map(|&c| self.column(c)).collect();

        RowReduced {
            rref: RationalMatrix {
                rows: self.rows,
                cols: self.cols,
                data: m,
            },
            rank,
            pivot_cols,
            kernel: SubspaceBasis {
                ambient: self.cols,
                vectors: kernel_vectors,
            },
            image: SubspaceBasis {
                ambient: self.rows,
                vectors: image_vectors,
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Solve self * x = b exactly.
    ///
    /// `Ok(None)` means the system is inconsistent. A shape mismatch is a
    /// usage error and reported as `Err`, never as "no solution".
    pub fn solve(&self, b: &[Q]) -> Result<Option<LinearSolution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side length",
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Self::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let red = aug.row_reduce();
        if red.pivot_cols.contains(&self.cols) {
            return Ok(None);
        }
        let mut particular = vec![Q::zero(); self.cols];
        for (row, &c) in red.pivot_cols.iter().enumerate() {
            particular[c] = red.rref.data[row][self.cols].clone();
        }
        let kernel = self.row_reduce().kernel;
        Ok(Some(LinearSolution { particular, kernel }))
    }

    /// Exact determinant by fraction-free-ish Gaussian elimination.
    pub fn determinant(&self) -> Result<Q> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                context: "determinant needs a square matrix",
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = Q::one();
        for c in 0..n {
            let mut pivot = None;
            for i in c..n {
                if !m[i][c].is_zero() {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(p) = pivot else {
                return Ok(Q::zero());
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            let inv = m[c][c].clone().recip();
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let t = &m[c][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i].iter().map(|v| v.to_string()).collect();
            writeln!(f, "[ {} ]", row.join("  "))?;
        }
        Ok(())
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RationalMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let entries: Vec<Vec<String>> = self
            .data
            .iter()
            .map(|r| r.iter().map(q_to_string).collect())
            .collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Result of `row_reduce`.
#[derive(Clone, Debug)]
pub struct RowReduced {
    pub rref: RationalMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub kernel: SubspaceBasis,
    pub image: SubspaceBasis,
}

/// Result of `solve`: one particular solution plus the kernel of the matrix.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Vec<Q>,
    pub kernel: SubspaceBasis,
}

/// A list of linearly independent vectors in a fixed ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<Vec<Q>>,
}

impl SubspaceBasis {
    pub fn new(ambient: usize, vectors: Vec<Vec<Q>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    context: "basis vector length",
                    expected: ambient,
                    got: v.len(),
                });
            }
        }
        Ok(SubspaceBasis { ambient, vectors })
    }

    pub fn empty(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Q>] {
        &self.vectors
    }

    /// Whether v lies in the span.
    pub fn contains(&self, v: &[Q]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                context: "membership test vector length",
                expected: self.ambient,
                got: v.len(),
            });
        }
        if v.iter().all(|x| x.is_zero()) {
            return Ok(true);
        }
        let m = RationalMatrix::from_columns(self.ambient, &self.vectors)?;
        Ok(m.solve(v)?.is_some())
    }

    /// Whether the two spans are equal subspaces.
    pub fn same_span(&self, other: &SubspaceBasis) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                context: "subspace comparison ambient dimension",
                expected: self.ambient,
                got: other.ambient,
            });
        }
        for v in &other.vectors {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        for v in &self.vectors {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A dense matrix over Z, used for exponent lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<BigInt>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        for r in &data {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "integer matrix row length",
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(IntegerMatrix { rows, cols, data })
    }

    pub fn from_i64_rows(data: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> = data
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_rows(rows).expect("literal rows are rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "integer matrix product inner dimension",
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += add;
                }
            }
        }
        Ok(out)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect()
            })
            .collect();
        RationalMatrix::from_rows(data).expect("shape preserved")
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i].iter().map(|v| v.to_string()).collect();
            writeln!(f, "[ {} ]", row.join("  "))?;
        }
        Ok(())
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IntegerMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let entries: Vec<Vec<String>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Smith normal form: U * A * V = diag(d), with U, V unimodular,
/// d_1 | d_2 | ... and every d_i >= 0 (zeros trail).
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

/// Compute the Smith normal form of an integer matrix.
///
/// Pivot selection: the submatrix entry of minimal nonzero absolute value,
/// ties broken by smallest (row, col). Row and column operations are
/// accumulated into U and V so that U * A * V is exactly the diagonal.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithNormalForm {
    let rows = a.rows;
    let cols = a.cols;
    let mut m = a.data.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let limit = rows.min(cols);

    // Invariant through every op: u * a * v == m.
    let row_sub = |m: &mut Vec<Vec<BigInt>>, u: &mut IntegerMatrix, dst: usize, src: usize, f: &BigInt| {
        for j in 0..cols {
            let t = f * &m[src][j];
            m[dst][j] -= t;
        }
        for j in 0..rows {
            let t = f * &u.data[src][j];
            u.data[dst][j] -= t;
        }
    };
    let col_sub = |m: &mut Vec<Vec<BigInt>>, v: &mut IntegerMatrix, dst: usize, src: usize, f: &BigInt| {
        for row in m.iter_mut() {
            let t = f * &row[src];
            row[dst] -= t;
        }
        for row in v.data.iter_mut() {
            let t = f * &row[src];
            row[dst] -= t;
        }
    };

    let mut t = 0;
    while t < limit {
        // Select pivot: minimal |entry| over the working submatrix.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if m[i][j].abs() < m[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        if pi != t {
            m.swap(pi, t);
            u.data.swap(pi, t);
        }
        if pj != t {
            for row in m.iter_mut() {
                row.swap(pj, t);
            }
            for row in v.data.iter_mut() {
                row.swap(pj, t);
            }
        }

        // Clear row t and column t; restart pivot selection whenever a
        // remainder strictly smaller than the pivot appears.
        let mut clean = true;
        for i in t + 1..rows {
            if !m[i][t].is_zero() {
                let f = &m[i][t] / &m[t][t];
                row_sub(&mut m, &mut u, i, t, &f);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !m[t][j].is_zero() {
                let f = &m[t][j] / &m[t][t];
                col_sub(&mut m, &mut v, j, t, &f);
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }

        // Divisibility: d_t must divide the rest of the submatrix.
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&m[i][j] % &m[t][t]).is_zero() {
                    // Fold row i into row t so the offending entry enters
                    // the working row; next pass shrinks the pivot.
                    let minus_one = -BigInt::one();
                    row_sub(&mut m, &mut u, t, i, &minus_one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }

        if m[t][t].is_negative() {
            for j in 0..cols {
                m[t][j] = -m[t][j].clone();
            }
            for j in 0..rows {
                u.data[t][j] = -u.data[t][j].clone();
            }
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..limit).map(|i| m[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SmithNormalForm {
        diagonal,
        rank,
        u,
        v,
    }
}
