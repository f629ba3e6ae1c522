//! Physicists' Hermite polynomials, `H_n'' − 2t H_n' + 2n H_n = 0`.

use crate::scalar::Real;

/// `H_n(t)` from `H_{k+1} = 2t H_k − 2k H_{k−1}`.
pub fn hermite_eval<T: Real>(n: usize, t: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let two = T::lit(2.0);
    let mut cur = two * t;
    for k in 1..n {
        let next = two * t * cur - two * T::lit(k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[H_0(t), …, H_{n_max}(t)]`.
pub fn hermite_all<T: Real>(n_max: usize, t: T) -> Vec<T> {
    let two = T::lit(2.0);
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(T::one());
    if n_max >= 1 {
        h.push(two * t);
    }
    for k in 1..n_max {
        let next = two * t * h[k] - two * T::lit(k as f64) * h[k - 1];
        h.push(next);
    }
    h
}

/// `H_n` evaluated from its explicit power sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplicitHermite<T> {
    pub value: T,
    pub derivative: T,
    /// The sum with every term replaced by its magnitude; bounds the
    /// rounding error of `value`.
    pub magnitude: T,
    /// Same bound for `derivative`.
    pub derivative_magnitude: T,
}

/// Largest degree whose explicit coefficients fit in `i128`.
pub const EXPLICIT_MAX_DEGREE: usize = 40;

/// `H_n(t) = Σ_m (−1)^m n!/(m!(n−2m)!) (2t)^{n−2m}`, with exact integer
/// coefficients.
pub fn hermite_explicit<T: Real>(n: usize, t: T) -> ExplicitHermite<T> {
    assert!(n <= EXPLICIT_MAX_DEGREE, "explicit Hermite sum limited to degree {EXPLICIT_MAX_DEGREE}");
    let mut out = ExplicitHermite {
        value: T::zero(),
        derivative: T::zero(),
        magnitude: T::zero(),
        derivative_magnitude: T::zero(),
    };
    let at = t.abs();
    // coefficient of t^{n−2m}, starting from 2^n
    let mut c: i128 = 1 << n;
    for m in 0..=n / 2 {
        let p = n - 2 * m;
        let cf = T::lit(c as f64);
        out.value = out.value + cf * t.powi(p as i32);
        out.magnitude = out.magnitude + cf.abs() * at.powi(p as i32);
        if p > 0 {
            let dp = cf * T::lit(p as f64);
            out.derivative = out.derivative + dp * t.powi(p as i32 - 1);
            out.derivative_magnitude = out.derivative_magnitude + dp.abs() * at.powi(p as i32 - 1);
        }
        if p >= 2 {
            c = -c * (p as i128) * (p as i128 - 1) / (4 * (m as i128 + 1));
        }
    }
    out
}

/// Relative residuals of the two identities used to derive the coefficient
/// recurrence (here with `α₀ = 0`, and `s₀` cancelled).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteResiduals<T> {
    /// `H_n' = 2n H_{n−1}`.
    pub derivative: T,
    /// `t H_n = n H_{n−1} + H_{n+1}/2`.
    pub three_term: T,
    /// Recurrence value against the explicit sum.
    pub evaluation: T,
}

impl<T: Real> HermiteResiduals<T> {
    pub fn max(&self) -> T {
        self.derivative.max(self.three_term).max(self.evaluation)
    }
}

/// Checks the Hermite identities at `(n, t)` for `n ≥ 1`.
///
/// Values come from [`hermite_eval`], the derivative from the explicit sum,
/// and each residual is scaled by the magnitude sums so it measures the
/// defect in units of the attainable rounding error.
pub fn hermite_identity_check<T: Real>(n: usize, t: T) -> HermiteResiduals<T> {
    assert!(n >= 1, "identity check needs n >= 1");
    let nf = T::lit(n as f64);
    let two = T::lit(2.0);
    let e_prev = hermite_explicit(n - 1, t);
    let e_cur = hermite_explicit(n, t);
    let e_next = hermite_explicit(n + 1, t);
    let (h_prev, h_cur, h_next) = (hermite_eval(n - 1, t), hermite_eval(n, t), hermite_eval(n + 1, t));

    let ratio = |num: T, den: T| if den == T::zero() { num.abs() } else { num.abs() / den };

    let derivative = ratio(
        e_cur.derivative - two * nf * h_prev,
        e_cur.derivative_magnitude + two * nf * e_prev.magnitude,
    );
    let three_term = ratio(
        t * h_cur - nf * h_prev - h_next / two,
        t.abs() * e_cur.magnitude + nf * e_prev.magnitude + e_next.magnitude / two,
    );
    let evaluation = ratio(h_cur - e_cur.value, e_cur.magnitude);
    HermiteResiduals {
        derivative,
        three_term,
        evaluation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_degrees() {
        assert_eq!(hermite_eval(0, 0.3f64), 1.0);
        assert_eq!(hermite_eval(1, 0.3f64), 0.6);
        assert_eq!(hermite_eval(2, 3.0f64), 34.0);
        assert_eq!(hermite_eval(3, 2.0f64), 8.0 * 8.0 - 12.0 * 2.0);
        assert_eq!(hermite_all(3, 2.0f64), vec![1.0, 4.0, 14.0, 40.0]);
        assert_eq!(hermite_all(0, 2.0f64), vec![1.0]);
    }

    #[test]
    fn explicit_matches_recurrence() {
        for n in 0..=20 {
            for t in [-4.5f64, -1.0, 0.0, 0.3, 2.2] {
                let e = hermite_explicit(n, t);
                assert!((e.value - hermite_eval(n, t)).abs() <= 1e-14 * e.magnitude.max(1.0));
            }
        }
        assert_eq!(hermite_explicit(4, 1.0f64).value, 16.0 - 48.0 + 12.0);
    }

    #[test]
    fn derivative_by_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=10);
            let t: f64 = rng.gen_range(-5.0..5.0);
            let h = 1e-5;
            let fd = (hermite_eval(n, t + h) - hermite_eval(n, t - h)) / (2.0 * h);
            let exact = 2.0 * n as f64 * hermite_eval(n - 1, t);
            let scale = hermite_explicit(n, t).derivative_magnitude;
            assert!((fd - exact).abs() <= 1e-6 * scale, "n={n} t={t}");
        }
    }

    #[test]
    fn identity_examples() {
        for t in [-2.0f64, 0.0, 0.5, 3.0] {
            assert_eq!(hermite_identity_check(1, t).max(), 0.0);
        }
        assert!(hermite_identity_check(5, 0.7f64).max() <= 1e-12);
        assert!(hermite_identity_check(9, -3.2f64).max() <= 1e-10);
    }

    #[test]
    fn explicit_top_degree_does_not_overflow() {
        let e = hermite_explicit(EXPLICIT_MAX_DEGREE, 0.9f64);
        assert!((e.value - hermite_eval(EXPLICIT_MAX_DEGREE, 0.9)).abs() <= 1e-13 * e.magnitude);
    }
}
