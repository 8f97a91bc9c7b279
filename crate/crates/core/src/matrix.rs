//! Dense matrices over a small ring abstraction, shared by the exact and the
//! floating point layers.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactpoly::{Poly, RatExpr, Rational};

pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn rzero() -> Self;
    fn rone() -> Self;
    fn is_rzero(&self) -> bool;
    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn rneg(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;
}

impl Ring for Rational {
    fn rzero() -> Self {
        Zero::zero()
    }
    fn rone() -> Self {
        One::one()
    }
    fn is_rzero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Ring for Poly {
    fn rzero() -> Self {
        Poly::zero()
    }
    fn rone() -> Self {
        Poly::one()
    }
    fn is_rzero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        Poly::constant(r.clone())
    }
}

impl Ring for RatExpr {
    fn rzero() -> Self {
        RatExpr::zero()
    }
    fn rone() -> Self {
        RatExpr::one()
    }
    fn is_rzero(&self) -> bool {
        RatExpr::is_zero(self)
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        RatExpr::constant(r.clone())
    }
}

impl Ring for Complex64 {
    fn rzero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn rone() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_rzero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::rzero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::rone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Ring, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_rzero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.radd(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.rsub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.rneg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.rmul(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_rzero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_rzero() {
                        out[(i, j)] = out[(i, j)].radd(&a.rmul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::rzero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_rzero() && !b.is_rzero() {
                        acc = acc.radd(&a.rmul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// `self * o - o * self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> T {
        let mut acc = T::rzero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.radd(&self[(i, i)]);
        }
        acc
    }

    /// Determinant by cofactor expansion; meant for small matrices.
    pub fn det_small(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        match n {
            0 => T::rone(),
            1 => self[(0, 0)].clone(),
            2 => self[(0, 0)]
                .rmul(&self[(1, 1)])
                .rsub(&self[(0, 1)].rmul(&self[(1, 0)])),
            _ => {
                let mut acc = T::rzero();
                for j in 0..n {
                    if self[(0, j)].is_rzero() {
                        continue;
                    }
                    let minor = self.minor(0, j).det_small();
                    let t = self[(0, j)].rmul(&minor);
                    acc = if j % 2 == 0 { acc.radd(&t) } else { acc.rsub(&t) };
                }
                acc
            }
        }
    }

    pub fn minor(&self, r: usize, c: usize) -> Self {
        Self::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            self[(if i < r { i } else { i + 1 }, if j < c { j } else { j + 1 })].clone()
        })
    }

    /// Adjugate matrix, so that `adj * self = det * I`.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            let m = self.minor(j, i).det_small();
            if (i + j) % 2 == 0 {
                m
            } else {
                m.rneg()
            }
        })
    }

    /// Coefficients `c_0..c_N` of `det(mu I - self) = sum c_k mu^k`, by the
    /// Faddeev-LeVerrier recursion. Needs division by integers, so `T` must
    /// contain the rationals.
    pub fn char_poly(&self) -> Vec<T> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![T::rzero(); n + 1];
        coeffs[n] = T::rone();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = X M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] = next[(i, i)].radd(&coeffs[n - k + 1]);
            }
            m = next;
            let tr = self.mul(&m).trace();
            let inv = T::from_rational(&Rational::new((-1).into(), (k as i64).into()));
            coeffs[n - k] = tr.rmul(&inv);
        }
        coeffs
    }
}

impl Matrix<Rational> {
    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !Zero::is_zero(&a[(r, col)]))?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] / &p;
                inv[(col, j)] = &inv[(col, j)] / &p;
            }
            for r in 0..n {
                if r != col && !Zero::is_zero(&a[(r, col)]) {
                    let f = a[(r, col)].clone();
                    for j in 0..n {
                        let x = &a[(col, j)] * &f;
                        a[(r, j)] = &a[(r, j)] - &x;
                        let y = &inv[(col, j)] * &f;
                        inv[(r, j)] = &inv[(r, j)] - &y;
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(piv) = (rank..a.rows).find(|&r| !Zero::is_zero(&a[(r, col)])) else {
                continue;
            };
            a.swap_rows(rank, piv);
            let p = a[(rank, col)].clone();
            for r in rank + 1..a.rows {
                if !Zero::is_zero(&a[(r, col)]) {
                    let f = &a[(r, col)] / &p;
                    for j in col..a.cols {
                        let x = &a[(rank, j)] * &f;
                        a[(r, j)] = &a[(r, j)] - &x;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let mut a = self.clone();
        let n = a.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !Zero::is_zero(&a[(r, col)])) else {
                return Rational::zero();
            };
            if piv != col {
                a.swap_rows(col, piv);
                det = -det;
            }
            let p = a[(col, col)].clone();
            det *= &p;
            for r in col + 1..n {
                if !Zero::is_zero(&a[(r, col)]) {
                    let f = &a[(r, col)] / &p;
                    for j in col..n {
                        let x = &a[(col, j)] * &f;
                        a[(r, j)] = &a[(r, j)] - &x;
                    }
                }
            }
        }
        det
    }

    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl<T> Matrix<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.rows {
            l.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        l.finish()
    }
}

impl Matrix<RatExpr> {
    /// Rows of canonical text.
    pub fn to_text(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.to_text()).collect())
            .collect()
    }
}
