//! Exact integer linear algebra: dense matrices, determinants, Smith normal
//! form, column Hermite normal form and full-rank lattices in `Z^r`.
//!
//! Matrices here are tiny (at most 4x4 in practice) but their entries are not:
//! 30th powers of 2x2 matrices already have 24-digit entries. Everything is
//! exact and generic over [`IntScalar`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// Dense row-major matrix over an exact integer ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::lit(v)).collect()).collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in rank {rows}",
                    c.len()
                )));
            }
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn scalar(v: T) -> Self {
        Matrix {
            rows: 1,
            cols: 1,
            data: vec![v],
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).clone() + a.clone() * rhs.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone()))
            .collect())
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Exact `n`-th power; `A^0` is the identity.
    pub fn pow(&self, n: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.to_rows();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                    m[i][j] = num / prev.clone();
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// Classical adjugate, so that `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut adj = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let c = minor.det()?;
                let c = if (i + j) % 2 == 0 { c } else { -c };
                adj.set(j, i, c);
            }
        }
        Ok(adj)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let data = (0..self.rows)
            .filter(|&i| i != skip_row)
            .flat_map(|i| (0..self.cols).filter(move |&j| j != skip_col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    /// Inverse over the integers of a matrix with determinant `±1`.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let d = self.det()?;
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular(d.to_string()));
        }
        Ok(self.adjugate()?.scale(&d))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &T) {
        for j in 0..self.cols {
            let v = self.get(dst, j).clone() + k.clone() * self.get(src, j).clone();
            self.set(dst, j, v);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &T) {
        for i in 0..self.rows {
            let v = self.get(i, dst).clone() + k.clone() * self.get(i, src).clone();
            self.set(i, dst, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        write!(f, "{rows:?}")
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    /// Row-major bracketed form, e.g. `[[-2,2],[1,2]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<T: IntScalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }
}

impl<T: IntScalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        self.checked_add(rhs).expect("matrix sum dimensions")
    }
}

impl<T: IntScalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        self.checked_sub(rhs).expect("matrix difference dimensions")
    }
}

impl<T: IntScalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    /// Diagonal of `D`: `d_1 | d_2 | ...`, nonnegative, zeros trailing.
    pub factors: Vec<T>,
}

impl<T: IntScalar> SnfDecomposition<T> {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.factors.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Product of the nonzero invariant factors.
    pub fn torsion_order(&self) -> T {
        self.factors
            .iter()
            .filter(|d| !d.is_zero())
            .fold(T::one(), |acc, d| acc * d.clone())
    }
}

/// Smith normal form with transforms.
///
/// Pivoting picks the smallest nonzero entry of the trailing block, clears its
/// row and column by Euclidean steps and repairs divisibility by folding a
/// row into the pivot row. Pivot signs are fixed with column negations so that
/// `U` stays the identity on 1x1 inputs.
pub fn snf<T: IntScalar>(a: &Matrix<T>) -> SnfDecomposition<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);

    'outer: for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(d.get(t, t));
                if !q.is_zero() {
                    let k = -q;
                    d.add_row_multiple(i, t, &k);
                    u.add_row_multiple(i, t, &k);
                }
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = d.get(t, j).div_floor(d.get(t, t));
                if !q.is_zero() {
                    let k = -q;
                    d.add_col_multiple(j, t, &k);
                    v.add_col_multiple(j, t, &k);
                }
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            let p = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_col(t);
            v.negate_col(t);
        }
    }

    let factors = (0..m.min(n)).map(|i| d.get(i, i).clone()).collect();
    SnfDecomposition { u, d, v, factors }
}

/// Integer kernel basis (as columns) of `a`.
pub fn kernel_basis<T: IntScalar>(a: &Matrix<T>) -> Matrix<T> {
    let s = snf(a);
    let r = s.rank();
    s.v.submatrix(0, a.cols(), r, a.cols())
}

/// All integer solutions of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution<T> {
    pub particular: Vec<T>,
    /// Kernel lattice basis as columns (possibly zero columns wide).
    pub kernel: Matrix<T>,
}

/// Solves `A x = b` over the integers; `None` when no integer solution exists.
pub fn solve_linear<T: IntScalar>(a: &Matrix<T>, b: &[T]) -> Result<Option<LinearSolution<T>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let s = snf(a);
    let c = s.u.mul_vec(b)?;
    let k = a.rows().min(a.cols());
    let mut y = vec![T::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < k { s.factors[i].clone() } else { T::zero() };
        if di.is_zero() {
            if !ci.is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = ci.div_rem(&di);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let particular = s.v.mul_vec(&y)?;
    let r = s.rank();
    let kernel = s.v.submatrix(0, a.cols(), r, a.cols());
    Ok(Some(LinearSolution { particular, kernel }))
}

/// Column Hermite normal form of the span of `gens`: lower-triangular pivot
/// columns with positive pivots and entries left of each pivot reduced into
/// `[0, pivot)`. Returns the nonzero columns only.
pub fn column_hnf<T: IntScalar>(gens: &Matrix<T>) -> Matrix<T> {
    let r = gens.rows();
    let k = gens.cols();
    let mut h = gens.clone();
    let mut c = 0;
    for i in 0..r {
        if c == k {
            break;
        }
        loop {
            let best = (c..k)
                .filter(|&j| !h.get(i, j).is_zero())
                .min_by(|&x, &y| h.get(i, x).abs().cmp(&h.get(i, y).abs()));
            let Some(p) = best else { break };
            h.swap_cols(c, p);
            let mut done = true;
            for j in c + 1..k {
                let q = h.get(i, j).div_floor(h.get(i, c));
                if !q.is_zero() {
                    h.add_col_multiple(j, c, &-q);
                }
                done &= h.get(i, j).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(i, c).is_zero() {
            continue;
        }
        if h.get(i, c).is_negative() {
            h.negate_col(c);
        }
        let p = h.get(i, c).clone();
        for j in 0..c {
            let q = h.get(i, j).div_floor(&p);
            if !q.is_zero() {
                h.add_col_multiple(j, c, &-q);
            }
        }
        c += 1;
    }
    h.submatrix(0, r, 0, c)
}

/// A full-rank sublattice of `Z^r`, held by its canonical column HNF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice<T> {
    ambient: usize,
    basis: Matrix<T>,
}

impl<T: fmt::Debug> fmt::Debug for Lattice<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(rank {}, basis {:?})", self.ambient, self.basis)
    }
}

impl<T: IntScalar> Lattice<T> {
    /// HNF of the column span of `cols`; the span must have full rank.
    pub fn from_columns(cols: &Matrix<T>, ambient_rank: usize) -> Result<Self> {
        if cols.rows() != ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "generators have {} rows, ambient rank is {ambient_rank}",
                cols.rows()
            )));
        }
        let basis = column_hnf(cols);
        if basis.cols() < ambient_rank {
            return Err(Error::RankDeficient {
                rank: basis.cols(),
                ambient: ambient_rank,
            });
        }
        Ok(Lattice {
            ambient: ambient_rank,
            basis,
        })
    }

    pub fn full(ambient_rank: usize) -> Self {
        Lattice {
            ambient: ambient_rank,
            basis: Matrix::identity(ambient_rank),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    /// `[Z^r : L] = |det(basis)|`.
    pub fn index(&self) -> T {
        (0..self.ambient).fold(T::one(), |acc, i| acc * self.basis.get(i, i).clone())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let r = self.ambient;
        let stacked = self.basis.hstack(&-&other.basis)?;
        let kernel = kernel_basis(&stacked);
        let coeffs = kernel.submatrix(0, r, 0, kernel.cols());
        let gens = self.basis.checked_mul(&coeffs)?;
        Lattice::from_columns(&gens, r)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Lattice::from_columns(&self.basis.hstack(&other.basis)?, self.ambient)
    }

    /// Membership by forward substitution through the triangular basis.
    pub fn contains(&self, v: &[T]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut x: Vec<T> = Vec::with_capacity(self.ambient);
        for (i, vi) in v.iter().enumerate() {
            let mut rhs = vi.clone();
            for (j, xj) in x.iter().enumerate() {
                rhs = rhs - self.basis.get(i, j).clone() * xj.clone();
            }
            let (q, rem) = rhs.div_rem(self.basis.get(i, i));
            if !rem.is_zero() {
                return false;
            }
            x.push(q);
        }
        true
    }

    pub fn is_sublattice_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && (0..self.ambient).all(|j| other.contains(&self.basis.column(j)))
    }
}

/// Free-function forms of the lattice operations.
pub fn lattice_from_columns<T: IntScalar>(cols: &Matrix<T>, ambient_rank: usize) -> Result<Lattice<T>> {
    Lattice::from_columns(cols, ambient_rank)
}

pub fn lattice_intersect<T: IntScalar>(l1: &Lattice<T>, l2: &Lattice<T>) -> Result<Lattice<T>> {
    l1.intersect(l2)
}

pub fn lattice_index<T: IntScalar>(l: &Lattice<T>) -> T {
    l.index()
}
