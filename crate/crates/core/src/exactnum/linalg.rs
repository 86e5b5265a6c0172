use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::GaussianRational;

/// Determinant by Gaussian elimination over Q(i).
pub fn determinant(mut rows: Vec<Vec<GaussianRational>>) -> GaussianRational {
    let n = rows.len();
    let mut det = GaussianRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return GaussianRational::zero();
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let inv = rows[col][col].inv().expect("nonzero pivot");
        det = &det * &rows[col][col];
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &rows[col][c];
                rows[r][c] -= &delta;
            }
        }
    }
    det
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(rows: &mut [Vec<GaussianRational>]) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n_rows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for j in 0..n_cols {
                let delta = &factor * &rows[r][j];
                rows[i][j] -= &delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<GaussianRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the right null space.
pub fn nullspace(rows: &[Vec<GaussianRational>]) -> Vec<Vec<GaussianRational>> {
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n_cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussianRational::zero(); n_cols];
            v[f] = GaussianRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[row][f];
            }
            v
        })
        .collect()
}

/// Column space basis, taken from the pivot columns of the original matrix.
pub fn column_space(rows: &[Vec<GaussianRational>]) -> Vec<Vec<GaussianRational>> {
    let mut m = rows.to_vec();
    rref(&mut m)
        .into_iter()
        .map(|c| rows.iter().map(|row| row[c].clone()).collect())
        .collect()
}

/// Scalars usable as entries of [`Mat3`].
pub trait Scalar: Clone + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(&self) -> Self;
    fn from_f64(x: f64) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn from_f64(x: f64) -> Self {
        GaussianRational::from_complex64(Complex64::new(x, 0.0)).expect("finite float")
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// Dense 3x3 matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

pub type CVec3<T> = [T; 3];

/// Sesquilinear-free dot product sum_k a_k b_k.
fn dot<T: Scalar>(a: impl Iterator<Item = T>, b: impl Iterator<Item = T>) -> T {
    a.zip(b).fold(T::zero(), |acc, (x, y)| acc.plus(&x.times(&y)))
}

impl<T: Scalar> Mat3<T> {
    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: [T; 3]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    /// diag(1, 1, -1)
    pub fn form_j() -> Self {
        let minus_one = T::zero().minus(&T::one());
        Self::diag([T::one(), T::one(), minus_one])
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.0[i][j]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat3<U> {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(&self.0[i][j]))))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(|i, j| c.times(&self.0[i][j]))
    }

    pub fn trace(&self) -> T {
        self.0[0][0].plus(&self.0[1][1]).plus(&self.0[2][2])
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            m[1][a].times(&m[2][b]).minus(&m[1][c].times(&m[2][d]))
        };
        let t0 = m[0][0].times(&minor(1, 2, 2, 1));
        let t1 = m[0][1].times(&minor(0, 2, 2, 0));
        let t2 = m[0][2].times(&minor(0, 1, 1, 0));
        t0.minus(&t1).plus(&t2)
    }

    /// (det, sum of principal 2x2 minors, trace): the characteristic polynomial
    /// is λ^3 - trace λ^2 + minors λ - det.
    pub fn char_poly_invariants(&self) -> (T, T, T) {
        let m = &self.0;
        let pm = |a: usize, b: usize| m[a][a].times(&m[b][b]).minus(&m[a][b].times(&m[b][a]));
        let c1 = pm(0, 1).plus(&pm(0, 2)).plus(&pm(1, 2));
        (self.det(), c1, self.trace())
    }

    /// Adjugate, so that `A * adj(A) = det(A) I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.0;
        let cof = |i: usize, j: usize| {
            let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
            let v = m[rows[0]][cols[0]]
                .times(&m[rows[1]][cols[1]])
                .minus(&m[rows[0]][cols[1]].times(&m[rows[1]][cols[0]]));
            if (i + j) % 2 == 0 {
                v
            } else {
                T::zero().minus(&v)
            }
        };
        Self::from_fn(|i, j| cof(j, i))
    }

    pub fn mul_vec(&self, v: &CVec3<T>) -> CVec3<T> {
        std::array::from_fn(|i| dot(self.0[i].iter().cloned(), v.iter().cloned()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| &acc * self)
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.0.iter().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> CVec3<T> {
        std::array::from_fn(|i| self.0[i][j].clone())
    }
}

impl<T: Scalar> Mul for &Mat3<T> {
    type Output = Mat3<T>;
    fn mul(self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| dot((0..3).map(|k| self.0[i][k].clone()), (0..3).map(|k| rhs.0[k][j].clone())))
    }
}

impl<T: Scalar> Add for &Mat3<T> {
    type Output = Mat3<T>;
    fn add(self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i][j].plus(&rhs.0[i][j]))
    }
}

impl<T: Scalar> Sub for &Mat3<T> {
    type Output = Mat3<T>;
    fn sub(self, rhs: &Mat3<T>) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i][j].minus(&rhs.0[i][j]))
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Mat3<GaussianRational> {
    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(GaussianRational::is_zero)
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows())
    }

    pub fn to_complex(&self) -> Mat3<Complex64> {
        self.map(GaussianRational::to_complex64)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        let inv = d.inv().ok()?;
        Some(self.adjugate().scale(&inv))
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> Self {
        Self::from_fn(|i, j| rows[i][j].into())
    }
}

impl Mat3<Complex64> {
    /// Max entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        Some(self.adjugate().scale(&(Complex64::new(1.0, 0.0) / d)))
    }
}
