//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e[i]` couples rows `i` and `i+1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    pub d: Vec<T>,
    pub e: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(d: Vec<T>, e: Vec<T>) -> Result<Self> {
        if d.is_empty() || e.len() + 1 != d.len() {
            return Err(Error::InvalidGrid(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                d.len(),
                e.len()
            )));
        }
        Ok(Self { d, e })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.d.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r = r + self.e[i - 1].abs();
            }
            if i + 1 < n {
                r = r + self.e[i].abs();
            }
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    fn norm(&self) -> T {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(T::min_positive_value())
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: T) -> usize {
        let pivmin = T::epsilon() * self.norm();
        let mut count = 0;
        let mut q = self.d[0] - lambda;
        for i in 0..self.d.len() {
            if i > 0 {
                q = self.d[i] - lambda - self.e[i - 1] * self.e[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalue `j` (ascending, from 0) to absolute width `tol`.
    pub fn eigenvalue(&self, j: usize, tol: T) -> Result<T> {
        let (lo, hi) = self.gershgorin();
        let pad = T::epsilon() * self.norm() * T::lit(4.0);
        self.bisect(j, lo - pad, hi + pad, tol)
    }

    fn bisect(&self, j: usize, mut lo: T, mut hi: T, tol: T) -> Result<T> {
        if j >= self.len() {
            return Err(Error::Domain(format!("eigenvalue {j} requested from a {}x{} matrix", self.len(), self.len())));
        }
        if self.sturm_count(lo) > j || self.sturm_count(hi) <= j {
            return Err(Error::ConvergenceFailure(format!("bisection bracket for eigenvalue {j}")));
        }
        while hi - lo > tol {
            let mid = lo + (hi - lo) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo + (hi - lo) / T::lit(2.0))
    }

    /// The `k` smallest eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, k: usize, tol: T) -> Result<Vec<T>> {
        let (lo, hi) = self.gershgorin();
        let pad = T::epsilon() * self.norm() * T::lit(4.0);
        let (lo, hi) = (lo - pad, hi + pad);
        let mut out: Vec<T> = Vec::with_capacity(k);
        for j in 0..k {
            let start = out.last().map_or(lo, |&p| (p - tol).max(lo));
            out.push(self.bisect(j, start, hi, tol)?);
        }
        Ok(out)
    }

    /// Solves `(A − σI) x = b` by Gaussian elimination with partial pivoting.
    /// Exactly zero pivots are replaced by a tiny multiple of the matrix norm,
    /// which is what inverse iteration needs.
    pub fn solve_shifted(&self, sigma: T, b: &[T]) -> Vec<T> {
        let n = self.len();
        let tiny = T::epsilon() * self.norm();
        let mut d: Vec<T> = self.d.iter().map(|&v| v - sigma).collect();
        let dl = self.e.clone();
        let mut du = self.e.clone();
        let mut du2 = vec![T::zero(); n.saturating_sub(2)];
        let mut x = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == T::zero() {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                d[i + 1] = d[i + 1] - fact * du[i];
                x[i + 1] = x[i + 1] - fact * x[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du2[i];
                }
                du[i] = temp;
                let tb = x[i];
                x[i] = x[i + 1];
                x[i + 1] = tb - fact * x[i + 1];
            }
        }
        if d[n - 1] == T::zero() {
            d[n - 1] = tiny;
        }
        x[n - 1] = x[n - 1] / d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    /// Eigenvector for a converged eigenvalue, scaled to unit peak magnitude.
    pub fn eigenvector(&self, lambda: T) -> Vec<T> {
        let n = self.len();
        let sigma = lambda + T::lit(1e-10) * (T::one() + lambda.abs());
        // non-symmetric start avoids orthogonality to the target by accident
        let mut v: Vec<T> = (0..n)
            .map(|i| T::one() + T::lit(0.1) * T::lit((i % 7) as f64))
            .collect();
        for _ in 0..4 {
            v = self.solve_shifted(sigma, &v);
            let peak = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
            if peak > T::zero() && peak.is_finite() {
                v.iter_mut().for_each(|x| *x = *x / peak);
            }
        }
        v
    }
}
