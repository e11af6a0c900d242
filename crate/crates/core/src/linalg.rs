//! Closed-form 2x2 matrix algebra.
//!
//! Everything the two-field theory needs (eigenvalues, square roots, inverse
//! square roots of symmetric 2x2 matrices) has an exact spectral form, so no
//! iterative solver is involved anywhere.

use std::ops::{Add, Mul};

/// Dense 2x2 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(a00: f64, a01: f64, a10: f64, a11: f64) -> Self {
        Mat2([[a00, a01], [a10, a11]])
    }

    pub fn symmetric(diag0: f64, off: f64, diag1: f64) -> Self {
        Mat2([[diag0, off], [off, diag1]])
    }

    pub fn diag(d0: f64, d1: f64) -> Self {
        Mat2([[d0, 0.0], [0.0, d1]])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn scale(&self, s: f64) -> Self {
        let a = self.0;
        Mat2([[s * a[0][0], s * a[0][1]], [s * a[1][0], s * a[1][1]]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn transpose(&self) -> Self {
        let a = self.0;
        Mat2([[a[0][0], a[1][0]], [a[0][1], a[1][1]]])
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        m
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.0[0][1] - self.0[1][0]).abs() <= tol * self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// `D A D` for a diagonal `D = diag(d)`; keeps symmetric inputs exactly
    /// symmetric.
    pub fn congruence_diag(&self, d: [f64; 2]) -> Self {
        let a = self.0;
        let off = d[0] * a[0][1] * d[1];
        Mat2([
            [d[0] * a[0][0] * d[0], off],
            [d[1] * a[1][0] * d[0], d[1] * a[1][1] * d[1]],
        ])
    }

    /// Spectral decomposition of the symmetric part. The off-diagonal used is
    /// the average of the two stored entries.
    pub fn sym_eigen(&self) -> SymEigen2 {
        SymEigen2::new(self.0[0][0], 0.5 * (self.0[0][1] + self.0[1][0]), self.0[1][1])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

/// Eigen-decomposition `A = hi * u u^T + lo * v v^T` of a symmetric 2x2
/// matrix `[[a, b], [b, c]]`, with `hi >= lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymEigen2 {
    pub hi: f64,
    pub lo: f64,
    /// Unit eigenvector of `hi`; the `lo` eigenvector is its rotation by 90 degrees.
    pub u: [f64; 2],
}

impl SymEigen2 {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        let mean = 0.5 * (a + c);
        let half_diff = 0.5 * (a - c);
        let r = half_diff.hypot(b);
        let det = a * c - b * b;
        // The eigenvalue of smaller magnitude goes through det / (larger one)
        // to avoid cancellation.
        let (hi, lo) = if mean >= 0.0 {
            let hi = mean + r;
            (hi, if hi != 0.0 { det / hi } else { mean - r })
        } else {
            let lo = mean - r;
            (det / lo, lo)
        };
        let theta = 0.5 * (2.0 * b).atan2(a - c);
        SymEigen2 {
            hi,
            lo,
            u: [theta.cos(), theta.sin()],
        }
    }

    pub fn v(&self) -> [f64; 2] {
        [-self.u[1], self.u[0]]
    }

    pub fn is_degenerate(&self) -> bool {
        (self.hi - self.lo).abs() <= 4.0 * f64::EPSILON * self.hi.abs().max(self.lo.abs())
    }

    /// `f(A)` through the spectral form. Degenerate spectra use `f(mu) I`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Mat2 {
        if self.is_degenerate() {
            let mu = 0.5 * (self.hi + self.lo);
            return Mat2::IDENTITY.scale(f(mu));
        }
        let (fh, fl) = (f(self.hi), f(self.lo));
        let (u, v) = (self.u, self.v());
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = fh * u[i] * u[j] + fl * v[i] * v[j];
            }
        }
        Mat2(out)
    }

    /// Principal square root; `None` unless positive semidefinite.
    pub fn sqrt(&self) -> Option<Mat2> {
        (self.lo >= 0.0).then(|| self.apply(f64::sqrt))
    }

    /// Inverse principal square root; `None` unless positive definite.
    pub fn inv_sqrt(&self) -> Option<Mat2> {
        (self.lo > 0.0).then(|| self.apply(|x| 1.0 / x.sqrt()))
    }
}
