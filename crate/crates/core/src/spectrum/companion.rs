//! Polynomial roots as eigenvalues of the companion matrix.
//!
//! The companion matrix of a monic polynomial is already upper Hessenberg, so
//! after diagonal balancing it goes straight into the Francis double-shift QR
//! iteration.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Real;

const MAX_ITERATIONS: usize = 60;

/// A root as `(re, im)`.
pub type ComplexRoot<T> = (T, T);

/// Square matrix stored 1-indexed (row 0 / column 0 unused).
struct Hessenberg<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Real> Hessenberg<T> {
    fn at(&self, i: usize, j: usize) -> T {
        self.a[i * (self.n + 1) + j]
    }

    fn set(&mut self, i: usize, j: usize, v: T) {
        self.a[i * (self.n + 1) + j] = v;
    }

    fn companion(poly: &Polynomial<T>) -> Self {
        let monic = poly.monic();
        let c = monic.coeffs();
        let n = c.len() - 1;
        let mut h = Self {
            n,
            a: vec![T::zero(); (n + 1) * (n + 1)],
        };
        for k in 1..=n {
            h.set(1, k, -c[n - k]);
        }
        for j in 2..=n {
            h.set(j, j - 1, T::one());
        }
        h
    }

    /// Similarity scaling by powers of two so rows and columns have
    /// comparable norms.
    fn balance(&mut self) {
        let radix = T::lit(2.0);
        let sqrdx = radix * radix;
        let n = self.n;
        let mut done = false;
        while !done {
            done = true;
            for i in 1..=n {
                let mut r = T::zero();
                let mut c = T::zero();
                for j in 1..=n {
                    if j != i {
                        c = c + self.at(j, i).abs();
                        r = r + self.at(i, j).abs();
                    }
                }
                if c != T::zero() && r != T::zero() {
                    let mut g = r / radix;
                    let mut f = T::one();
                    let s = c + r;
                    while c < g {
                        f = f * radix;
                        c = c * sqrdx;
                    }
                    g = r * radix;
                    while c > g {
                        f = f / radix;
                        c = c / sqrdx;
                    }
                    if (c + r) / f < T::lit(0.95) * s {
                        done = false;
                        let g = f.recip();
                        for j in 1..=n {
                            let v = self.at(i, j) * g;
                            self.set(i, j, v);
                        }
                        for j in 1..=n {
                            let v = self.at(j, i) * f;
                            self.set(j, i, v);
                        }
                    }
                }
            }
        }
    }

    /// Eigenvalues of an upper Hessenberg matrix by shifted QR.
    #[allow(clippy::many_single_char_names, unused_assignments)]
    fn eigenvalues(mut self) -> Result<Vec<ComplexRoot<T>>> {
        let n = self.n;
        let mut wr = vec![T::zero(); n + 1];
        let mut wi = vec![T::zero(); n + 1];
        let mut anorm = T::zero();
        for i in 1..=n {
            for j in i.saturating_sub(1).max(1)..=n {
                anorm = anorm + self.at(i, j).abs();
            }
        }
        let mut nn = n;
        let mut t = T::zero();
        let (mut p, mut q, mut r) = (T::zero(), T::zero(), T::zero());
        let (mut x, mut y, mut z, mut w);
        while nn >= 1 {
            let mut its = 0;
            loop {
                // look for a single small subdiagonal element
                let mut l = nn;
                while l >= 2 {
                    let mut s = self.at(l - 1, l - 1).abs() + self.at(l, l).abs();
                    if s == T::zero() {
                        s = anorm;
                    }
                    if self.at(l, l - 1).abs() + s == s {
                        self.set(l, l - 1, T::zero());
                        break;
                    }
                    l -= 1;
                }
                x = self.at(nn, nn);
                if l == nn {
                    wr[nn] = x + t;
                    wi[nn] = T::zero();
                    nn -= 1;
                    break;
                }
                y = self.at(nn - 1, nn - 1);
                w = self.at(nn, nn - 1) * self.at(nn - 1, nn);
                if l == nn - 1 {
                    p = T::lit(0.5) * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x = x + t;
                    if q >= T::zero() {
                        z = p + z.copysign(p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != T::zero() {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = T::zero();
                        wi[nn] = T::zero();
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                    break;
                }
                if its == MAX_ITERATIONS {
                    return Err(Error::ConvergenceFailure("companion-matrix QR iteration".into()));
                }
                if its == 10 || its == 20 {
                    // exceptional shift
                    t = t + x;
                    for i in 1..=nn {
                        let v = self.at(i, i) - x;
                        self.set(i, i, v);
                    }
                    let s = self.at(nn, nn - 1).abs() + self.at(nn - 1, nn - 2).abs();
                    x = T::lit(0.75) * s;
                    y = x;
                    w = T::lit(-0.4375) * s * s;
                }
                its += 1;
                let mut m = nn - 2;
                loop {
                    z = self.at(m, m);
                    r = x - z;
                    let s = y - z;
                    p = (r * s - w) / self.at(m + 1, m) + self.at(m, m + 1);
                    q = self.at(m + 1, m + 1) - z - r - s;
                    r = self.at(m + 2, m + 1);
                    let s = p.abs() + q.abs() + r.abs();
                    p = p / s;
                    q = q / s;
                    r = r / s;
                    if m == l {
                        break;
                    }
                    let u = self.at(m, m - 1).abs() * (q.abs() + r.abs());
                    let v = p.abs() * (self.at(m - 1, m - 1).abs() + z.abs() + self.at(m + 1, m + 1).abs());
                    if u + v == v {
                        break;
                    }
                    m -= 1;
                }
                for i in m + 2..=nn {
                    self.set(i, i - 2, T::zero());
                    if i != m + 2 {
                        self.set(i, i - 3, T::zero());
                    }
                }
                let mut k = m;
                while k < nn {
                    if k != m {
                        p = self.at(k, k - 1);
                        q = self.at(k + 1, k - 1);
                        r = T::zero();
                        if k != nn - 1 {
                            r = self.at(k + 2, k - 1);
                        }
                        x = p.abs() + q.abs() + r.abs();
                        if x != T::zero() {
                            p = p / x;
                            q = q / x;
                            r = r / x;
                        }
                    }
                    let s = (p * p + q * q + r * r).sqrt().copysign(p);
                    if s != T::zero() {
                        if k == m {
                            if l != m {
                                let v = -self.at(k, k - 1);
                                self.set(k, k - 1, v);
                            }
                        } else {
                            self.set(k, k - 1, -s * x);
                        }
                        p = p + s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q = q / p;
                        r = r / p;
                        for j in k..=nn {
                            p = self.at(k, j) + q * self.at(k + 1, j);
                            if k != nn - 1 {
                                p = p + r * self.at(k + 2, j);
                                let v = self.at(k + 2, j) - p * z;
                                self.set(k + 2, j, v);
                            }
                            let v = self.at(k + 1, j) - p * y;
                            self.set(k + 1, j, v);
                            let v = self.at(k, j) - p * x;
                            self.set(k, j, v);
                        }
                        let mmin = nn.min(k + 3);
                        for i in l..=mmin {
                            p = x * self.at(i, k) + y * self.at(i, k + 1);
                            if k != nn - 1 {
                                p = p + z * self.at(i, k + 2);
                                let v = self.at(i, k + 2) - p * r;
                                self.set(i, k + 2, v);
                            }
                            let v = self.at(i, k + 1) - p * q;
                            self.set(i, k + 1, v);
                            let v = self.at(i, k) - p;
                            self.set(i, k, v);
                        }
                    }
                    k += 1;
                }
                if l + 1 >= nn {
                    break;
                }
            }
        }
        Ok((1..=n).map(|i| (wr[i], wi[i])).collect())
    }
}

/// All complex roots of a polynomial of degree ≥ 1.
pub fn companion_roots<T: Real>(poly: &Polynomial<T>) -> Result<Vec<ComplexRoot<T>>> {
    match poly.degree() {
        None | Some(0) => Err(Error::Domain("polynomial has no roots".into())),
        Some(_) => {
            let mut h = Hessenberg::companion(poly);
            h.balance();
            h.eigenvalues()
        }
    }
}

/// Newton iterations on a real root; a step is kept only while it reduces
/// `|p(x)|`, and iteration stops once `|p(x)|` is at its rounding floor.
pub fn newton_polish<T: Real>(poly: &Polynomial<T>, mut x: T) -> T {
    let floor = T::lit(4.0) * T::epsilon();
    let (mut v, mut d) = poly.eval_with_derivative(x);
    for _ in 0..8 {
        if d == T::zero() || v.abs() <= floor * poly.eval_magnitude(x) {
            break;
        }
        let trial = x - v / d;
        let (tv, td) = poly.eval_with_derivative(trial);
        if !(tv.abs() < v.abs()) {
            break;
        }
        x = trial;
        v = tv;
        d = td;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_real(mut roots: Vec<ComplexRoot<f64>>) -> Vec<f64> {
        roots.sort_by(|a, b| a.0.total_cmp(&b.0));
        roots.into_iter().map(|r| r.0).collect()
    }

    #[test]
    fn linear_and_quadratic() {
        let r = companion_roots(&Polynomial::new(vec![-3.0, 1.0])).unwrap();
        assert_eq!(r, vec![(3.0, 0.0)]);
        let r = sorted_real(companion_roots(&Polynomial::new(vec![-2.0, 0.0, 1.0])).unwrap());
        assert!((r[0] + 2f64.sqrt()).abs() < 1e-15 && (r[1] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn complex_pair() {
        let mut r = companion_roots(&Polynomial::new(vec![1.0f64, 0.0, 1.0])).unwrap();
        r.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert!(r[0].0.abs() < 1e-15 && (r[0].1 + 1.0).abs() < 1e-15);
        assert!((r[1].1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wilkinson_like_product() {
        let mut p = Polynomial::constant(1.0);
        for k in 1..=10 {
            p = &p * &Polynomial::new(vec![-(k as f64), 1.0]);
        }
        let roots = sorted_real(companion_roots(&p).unwrap());
        for (k, r) in roots.iter().enumerate() {
            let polished = newton_polish(&p, *r);
            assert!((polished - (k + 1) as f64).abs() < 1e-8, "{k}: {r} -> {polished}");
        }
    }

    #[test]
    fn zero_root_and_degree_zero() {
        let r = sorted_real(companion_roots(&Polynomial::new(vec![0.0, -4.0, 0.0, 1.0])).unwrap());
        assert!((r[0] + 2.0).abs() < 1e-14 && r[1].abs() < 1e-14 && (r[2] - 2.0).abs() < 1e-14);
        assert!(companion_roots(&Polynomial::constant(2.0)).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let r = companion_roots(&Polynomial::new(vec![6.0f32, -5.0, 1.0])).unwrap();
        let mut re: Vec<f32> = r.into_iter().map(|x| x.0).collect();
        re.sort_by(|a, b| a.total_cmp(b));
        assert!((re[0] - 2.0).abs() < 1e-5 && (re[1] - 3.0).abs() < 1e-5);
    }
}
