//! Exact integer and rational linear algebra.
//!
//! Everything here works on arbitrary-precision integers. Matrices are stored
//! row-major; a vector multiplied from the left is a row vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntVec = Vec<BigInt>;

/// Dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: Vec<IntVec>,
    ncols: usize,
}

impl IntMat {
    pub fn new(rows: Vec<IntVec>, ncols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {} columns",
                bad.len(),
                ncols
            )));
        }
        Ok(IntMat { rows, ncols })
    }

    /// Builds a matrix from rows that are known to share a length.
    pub fn from_rows(rows: Vec<IntVec>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        IntMat { rows, ncols }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| ivec(r)).collect())
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMat {
            rows: vec![vec![BigInt::zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zero(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.rows[i][i] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn rows(&self) -> &[IntVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &IntVec {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<IntVec> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> IntVec {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        IntMat {
            rows: (0..self.ncols).map(|j| self.column(j)).collect(),
            ncols: self.nrows(),
        }
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.ncols != other.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| row_times(r, other))
            .collect::<Vec<_>>();
        Ok(IntMat {
            rows,
            ncols: other.ncols,
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            r.swap(a, b);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        let src = self.rows[source].clone();
        for (t, s) in self.rows[target].iter_mut().zip(src.iter()) {
            *t -= factor * s;
        }
    }

    /// col[target] -= factor * col[source]
    fn sub_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in &mut self.rows {
            let s = r[source].clone();
            r[target] -= factor * s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.rows[i] {
            *x = -&*x;
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_vec(r))?;
        }
        write!(f, "]")
    }
}

pub fn ivec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row vector times matrix.
pub fn row_times(v: &[BigInt], m: &IntMat) -> IntVec {
    debug_assert_eq!(v.len(), m.nrows());
    let mut out = vec![BigInt::zero(); m.ncols()];
    for (c, row) in v.iter().zip(m.rows()) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

pub fn add_vec(a: &[BigInt], b: &[BigInt]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[BigInt], b: &[BigInt]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &BigInt, v: &[BigInt]) -> IntVec {
    v.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// gcd of all entries, zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn make_primitive(v: &[BigInt]) -> IntVec {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Signed determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMat) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.rows.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(rows: &[IntVec]) -> usize {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut a: Vec<IntVec> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[r][c].clone(), a[i][c].clone());
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x = &*x * &f - y * &g;
            }
            a[i] = make_primitive(&a[i]);
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(rows: &[IntVec]) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    let mut basis: Vec<IntVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        basis.push(r.clone());
        if rank(&basis) == basis.len() {
            picked.push(i);
        } else {
            basis.pop();
        }
    }
    picked
}

/// Adjugate `adj` with `m * adj = det(m) * I`.
pub fn adjugate(m: &IntMat) -> Result<IntMat> {
    let det = determinant(m)?;
    let n = m.nrows();
    if det.is_zero() {
        // cofactor expansion; only reached for singular input
        let mut out = IntMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = IntMat::from_rows(
                    (0..n)
                        .filter(|&r| r != j)
                        .map(|r| {
                            (0..n)
                                .filter(|&c| c != i)
                                .map(|c| m.rows[r][c].clone())
                                .collect()
                        })
                        .collect(),
                );
                let d = determinant(&minor)?;
                out.rows[i][j] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        return Ok(out);
    }
    let inv = inverse_rational(m)?;
    let det_r = BigRational::from_integer(det);
    let rows = inv
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    let y = x * &det_r;
                    debug_assert!(y.is_integer());
                    y.to_integer()
                })
                .collect()
        })
        .collect();
    Ok(IntMat { rows, ncols: n })
}

fn inverse_rational(m: &IntMat) -> Result<Vec<Vec<BigRational>>> {
    let n = m.nrows();
    let mut a: Vec<Vec<BigRational>> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> =
                r.iter().cloned().map(BigRational::from_integer).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or(Error::Singular)?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in &mut a[c] {
            *x /= &piv;
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Exact solution of `a * x = b` for square nonsingular `a`.
pub fn solve_rational(a: &IntMat, b: &[BigInt]) -> Result<Vec<BigRational>> {
    if !a.is_square() || a.nrows() != b.len() {
        return Err(Error::Dimension(format!(
            "system {}x{} with right-hand side of length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let inv = inverse_rational(a)?;
    Ok(inv
        .iter()
        .map(|row| {
            row.iter()
                .zip(b)
                .map(|(x, y)| x * BigRational::from_integer(y.clone()))
                .sum()
        })
        .collect())
}

/// Smith normal form `u * m * v = diag(d)`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Elementary divisors, nonnegative, each dividing the next; length `min(nrows, ncols)`.
    pub d: Vec<BigInt>,
    pub u: IntMat,
    pub v: IntMat,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().take_while(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMat) -> SnfResult {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut u = IntMat::identity(nr);
    let mut v = IntMat::identity(nc);
    let steps = nr.min(nc);
    'outer: for t in 0..steps {
        loop {
            // smallest nonzero pivot in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    let x = &a.rows[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a.rows[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a.rows[t][t].clone();
            let mut clean = true;
            for i in t + 1..nr {
                let q = a.rows[i][t].div_floor(&pivot);
                a.sub_row_multiple(i, t, &q);
                u.sub_row_multiple(i, t, &q);
                clean &= a.rows[i][t].is_zero();
            }
            for j in t + 1..nc {
                let q = a.rows[t][j].div_floor(&pivot);
                a.sub_col_multiple(j, t, &q);
                v.sub_col_multiple(j, t, &q);
                clean &= a.rows[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..nr).find(|&i| {
                (t + 1..nc).any(|j| !a.rows[i][j].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    // row t += row i, then reduce again
                    let minus_one = -BigInt::one();
                    a.sub_row_multiple(t, i, &minus_one);
                    u.sub_row_multiple(t, i, &minus_one);
                }
                None => break,
            }
        }
        if a.rows[t][t].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    let d = (0..steps).map(|i| a.rows[i][i].clone()).collect();
    SnfResult { d, u, v }
}

/// Basis of the integer kernel `{x in Z^n : m x = 0}`; the basis is saturated.
pub fn kernel_basis(m: &IntMat) -> Vec<IntVec> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.ncols()).map(|j| snf.v.column(j)).collect()
}
