use std::fmt;

use crate::ffield::{Fp2, Series};

use super::DError;

/// Coefficient rings for module matrices: F_{p^2} and truncated series.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// The absolute Frobenius, x -> x^p on coefficients and on u, v.
    fn frobenius(&self) -> Self;
    fn is_unit(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for Fp2 {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field().from_int(n)
    }
    fn is_zero(&self) -> bool {
        Fp2::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        *self + *o
    }
    fn minus(&self, o: &Self) -> Self {
        *self - *o
    }
    fn times(&self, o: &Self) -> Self {
        *self * *o
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn frobenius(&self) -> Self {
        Fp2::frobenius(self)
    }
    fn is_unit(&self) -> bool {
        !Fp2::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        Fp2::inverse(self)
    }
}

impl Coefficient for Series {
    fn zero_like(&self) -> Self {
        Series::zero(self.field(), self.truncation())
    }
    fn one_like(&self) -> Self {
        Series::one(self.field(), self.truncation())
    }
    fn int_like(&self, n: i64) -> Self {
        Series::constant(self.field().from_int(n), self.truncation())
    }
    fn is_zero(&self) -> bool {
        Series::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn frobenius(&self) -> Self {
        Series::frobenius(self, 1)
    }
    fn is_unit(&self) -> bool {
        Series::is_unit(self)
    }
    fn inverse(&self) -> Option<Self> {
        Series::inverse(self)
    }
}

/// Dense matrix. For a map, column j holds the image of basis vector j.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Coefficient> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize, like: &R) -> Matrix<R> {
        Matrix {
            rows,
            cols,
            data: vec![like.zero_like(); rows * cols],
        }
    }

    pub fn identity(n: usize, like: &R) -> Matrix<R> {
        let mut m = Matrix::zeros(n, n, like);
        for i in 0..n {
            m.set(i, i, like.one_like());
        }
        m
    }

    /// Integer entries given as (row, col, value).
    pub fn from_entries(rows: usize, cols: usize, like: &R, entries: &[(usize, usize, i64)]) -> Matrix<R> {
        let mut m = Matrix::zeros(rows, cols, like);
        for &(i, j, x) in entries {
            m.set(i, j, like.int_like(x));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Matrix<R>, DError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(DError::DimensionMismatch);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: &[Vec<R>]) -> Result<Matrix<R>, DError> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(DError::DimensionMismatch);
        }
        let data = (0..r)
            .flat_map(|i| cols.iter().map(move |col| col[i].clone()))
            .collect();
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: R) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn map<S, F: Fn(&R) -> S>(&self, f: F) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<R> {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn try_mul(&self, o: &Matrix<R>) -> Result<Matrix<R>, DError> {
        if self.cols != o.rows {
            return Err(DError::DimensionMismatch);
        }
        let like = self.data.first().or(o.data.first()).ok_or(DError::DimensionMismatch)?;
        let mut out = Matrix::zeros(self.rows, o.cols, like);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let x = out.get(i, j).plus(&a.times(b));
                        out.set(i, j, x);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Matrix<R>) -> Matrix<R> {
        self.try_mul(o).expect("matrix dimensions agree")
    }

    pub fn plus(&self, o: &Matrix<R>) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn negated(&self) -> Matrix<R> {
        self.map(R::negated)
    }

    pub fn scale(&self, c: &R) -> Matrix<R> {
        self.map(|x| c.times(x))
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.plus(&a.times(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Entrywise Frobenius: the matrix of the twisted map.
    pub fn twist(&self) -> Matrix<R> {
        self.map(R::frobenius)
    }

    pub fn twist_by(&self, e: u32) -> Matrix<R> {
        (0..e).fold(self.clone(), |m, _| m.twist())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<R> {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }
}

impl<R: Coefficient> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

pub fn twist_vector<R: Coefficient>(v: &[R]) -> Vec<R> {
    v.iter().map(R::frobenius).collect()
}

/// Reduced row echelon form by elimination on unit pivots; returns the pivot
/// columns. Over a field every nonzero entry is a unit, so this is exact.
fn row_reduce<R: Coefficient>(m: &mut Matrix<R>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| m.get(i, c).is_unit()) else {
            continue;
        };
        for j in 0..m.cols {
            let a = m.get(r, j).clone();
            let b = m.get(pr, j).clone();
            m.set(r, j, b);
            m.set(pr, j, a);
        }
        let inv = m.get(r, c).inverse().expect("unit pivot");
        for j in 0..m.cols {
            let x = m.get(r, j).times(&inv);
            m.set(r, j, x);
        }
        for i in 0..m.rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in 0..m.cols {
                let x = m.get(i, j).minus(&f.times(m.get(r, j)));
                m.set(i, j, x);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<R: Coefficient>(m: &Matrix<R>) -> usize {
    let mut a = m.clone();
    row_reduce(&mut a).len()
}

/// Basis of the null space {x : m x = 0}.
pub fn kernel<R: Coefficient>(m: &Matrix<R>, like: &R) -> Vec<Vec<R>> {
    let mut a = m.clone();
    let pivots = row_reduce(&mut a);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![like.zero_like(); m.cols];
            x[fc] = like.one_like();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = a.get(r, fc).negated();
            }
            x
        })
        .collect()
}

/// Dimension of the span of a family of vectors.
pub fn span_rank<R: Coefficient>(vs: &[Vec<R>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    rank(&Matrix::from_columns(vs).expect("equal lengths"))
}

/// Basis of span(a) intersected with span(b).
pub fn intersect<R: Coefficient>(a: &[Vec<R>], b: &[Vec<R>], like: &R) -> Vec<Vec<R>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vec<R>> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(R::negated).collect()));
    let m = Matrix::from_columns(&cols).expect("equal lengths");
    let ka = Matrix::from_columns(a).expect("equal lengths");
    let vecs: Vec<Vec<R>> = kernel(&m, like)
        .into_iter()
        .map(|k| ka.apply(&k[..a.len()]))
        .collect();
    // keep an independent subfamily
    let mut out: Vec<Vec<R>> = Vec::new();
    for v in vecs {
        let mut trial = out.clone();
        trial.push(v.clone());
        if span_rank(&trial) > out.len() {
            out.push(v);
        }
    }
    out
}

pub fn same_span<R: Coefficient>(a: &[Vec<R>], b: &[Vec<R>]) -> bool {
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    let r = span_rank(&both);
    r == span_rank(a) && r == span_rank(b)
}

/// A linear map D^(p^source) -> D^(p^target) between Frobenius twists.
#[derive(Clone, PartialEq, Debug)]
pub struct TwistedMap<R> {
    matrix: Matrix<R>,
    source: i32,
    target: i32,
}

impl<R: Coefficient> TwistedMap<R> {
    pub fn new(matrix: Matrix<R>, source: i32, target: i32) -> TwistedMap<R> {
        TwistedMap {
            matrix,
            source,
            target,
        }
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    pub fn source(&self) -> i32 {
        self.source
    }

    pub fn target(&self) -> i32 {
        self.target
    }

    /// The base change along Frobenius: entrywise p-th powers, levels + 1.
    pub fn twist(&self) -> TwistedMap<R> {
        TwistedMap {
            matrix: self.matrix.twist(),
            source: self.source + 1,
            target: self.target + 1,
        }
    }

    /// self after inner.
    pub fn compose(&self, inner: &TwistedMap<R>) -> Result<TwistedMap<R>, DError> {
        if inner.target != self.source {
            return Err(DError::TwistMismatch {
                expected: self.source,
                got: inner.target,
            });
        }
        Ok(TwistedMap {
            matrix: self.matrix.try_mul(&inner.matrix)?,
            source: inner.source,
            target: self.target,
        })
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        self.matrix.apply(v)
    }

    pub fn map_entries<S: Coefficient, F: Fn(&R) -> S>(&self, f: F) -> TwistedMap<S> {
        TwistedMap {
            matrix: self.matrix.map(f),
            source: self.source,
            target: self.target,
        }
    }
}
