use std::fmt;

use super::field::{NfElem, NumberField, Scalar, Q};
use super::FieldError;

/// Dense row-major matrix over an exact scalar type.
#[derive(Clone, PartialEq)]
pub struct Matrix<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
    zero: S,
}

/// Reduced row echelon form together with its pivot columns.
pub struct Rref<S: Scalar> {
    pub matrix: Matrix<S>,
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize, proto: &S) -> Self {
        let zero = proto.zero_like();
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }

    pub fn identity(n: usize, proto: &S) -> Self {
        let mut m = Self::zeros(n, n, proto);
        for i in 0..n {
            m.data[i * n + i] = proto.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>, proto: &S) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data, zero: proto.zero_like() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<S>], nrows: usize, proto: &S) -> Self {
        let mut m = Self::zeros(nrows, cols.len(), proto);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, proto: &S, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data, zero: proto.zero_like() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn proto(&self) -> &S {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows, &self.zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.zero, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(), zero: self.zero.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(), zero: self.zero.clone() }
    }

    pub fn scale(&self, a: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul(a)).collect(), zero: self.zero.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul: {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols);
        let mut out = Self::zeros(self.rows, o.cols, &self.zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.zero.clone();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "row mismatch in hstack");
        Self::from_fn(self.rows, self.cols + o.cols, &self.zero, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data, zero: self.zero.clone() }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols, &self.zero);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, o);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, &self.zero, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), &self.zero, |i, j| self.get(i, idx[j]).clone())
    }

    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, &self.zero, |i, j| {
            self.get(i / o.rows, j / o.cols).mul(o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn rref(&self) -> Rref<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if !rv.is_zero() {
                        let v = m.get(i, j).sub(&f.mul(rv));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns form a basis of the kernel; free variables are set to unit vectors in increasing order.
    pub fn kernel(&self) -> Self {
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len(), &self.zero);
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, self.zero.one_like());
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, r.get(i, fc).neg());
            }
        }
        k
    }

    /// Solves self · X = B; returns None when inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows, "row mismatch in solve");
        let aug = self.hstack(b);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.cols, &self.zero);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, b: &[S]) -> Option<Vec<S>> {
        let bm = Self::from_cols(&[b.to_vec()], self.rows, &self.zero);
        self.solve(&bm).map(|x| x.col(0))
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        if !self.is_square() {
            return Err(FieldError::Singular);
        }
        if self.rank() < self.rows {
            return Err(FieldError::Singular);
        }
        Ok(self.solve(&Self::identity(self.rows, &self.zero)).expect("full rank square system is solvable"))
    }

    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.zero.one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return self.zero.clone() };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn map<T: Scalar>(&self, proto: &T, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), zero: proto.zero_like() }
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

pub type QMatrix = Matrix<Q>;
pub type KMatrix = Matrix<NfElem>;

/// Reads a k-linear map as a Q-linear map in the power basis.
/// Block (i, j) is the multiplication matrix of M[i, j].
pub fn restrict_scalars(k: &NumberField, m: &KMatrix) -> QMatrix {
    let d = k.degree();
    let zero = Q::from_integer(0.into());
    let mut out = QMatrix::zeros(d * m.rows(), d * m.cols(), &zero);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            let mm = e.mult_matrix();
            for a in 0..d {
                for b in 0..d {
                    out.set(d * i + a, d * j + b, mm[a][b].clone());
                }
            }
        }
    }
    out
}

/// Rational matrix viewed over k.
pub fn extend_scalars(k: &NumberField, m: &QMatrix) -> KMatrix {
    m.map(&k.zero(), |x| k.from_q(x))
}

/// Coefficients of the power-basis expansion of a k-vector, flattened.
pub fn flatten_vec(v: &[NfElem]) -> Vec<Q> {
    v.iter().flat_map(|x| x.coeffs().iter().cloned()).collect()
}
