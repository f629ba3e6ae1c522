//! Three-term recurrence for the Hermite-expansion coefficients of the
//! bi-confluent Heun function and the termination polynomial in `q`.
//!
//! The Heun solution is expanded as `Σ c_n H_{α₀+n}(s₀(z+z₀))` with
//! `s₀ = ±(−ε/2)^{1/2}` and `z₀ = δ/ε`. The coefficients obey
//!
//! ```text
//! 0 = R_n c_n + Q_{n−1} c_{n−1} + P_{n−2} c_{n−2}
//! R_n = (−2/ε)^{1/2} (α₀+n) [α + (α₀+n−γ) ε]
//! Q_n = ∓(1/ε) [αδ + (q + (α₀+n) δ) ε]
//! P_n = (−2ε)^{−1/2} [α + (α₀+n) ε]
//! ```
//!
//! Writing `c_n = D_n(q) / (R_1 ⋯ R_n)` turns the recurrence into
//! `D_n = −Q_{n−1} D_{n−1} − (P_{n−2} R_{n−1}) D_{n−2}` with `D_0 = 1`. The
//! product `P_{n−2} R_{n−1}` is free of square roots, so `D_{N+1}` has
//! coefficients that are rational in `(γ, δ, ε, α)` and the construction
//! runs exactly over [`num_rational::BigRational`].
//!
//! For `δ = 0` the matrix behind this determinant has a zero diagonal and
//! positive off-diagonal products whenever `γ > 0` and `ε < 0`, so the roots
//! are real, simple and symmetric about zero.

use crate::error::{Error, Result};
use crate::params::{qes_order, BheParams};
use crate::poly::Polynomial;
use crate::scalar::{Real, Scalar};

/// Sign choice `s₀ = ±(−ε/2)^{1/2}`; the upper sign gives `Q_n = −q` in
/// the reduced case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Upper,
    Lower,
}

impl Branch {
    fn sign<T: Scalar>(self) -> T {
        match self {
            Branch::Upper => T::one(),
            Branch::Lower => -T::one(),
        }
    }
}

/// Shape of the Hermite expansion: index offset `α₀`, branch of `s₀` and
/// argument shift `z₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionConfig<T> {
    pub alpha0: T,
    pub branch: Branch,
    pub z0: T,
}

impl<T: Scalar> ExpansionConfig<T> {
    /// `α₀ = 0`, upper branch, `z₀ = 0`: the reduced sextic pipeline.
    pub fn reduced() -> Self {
        Self {
            alpha0: T::zero(),
            branch: Branch::Upper,
            z0: T::zero(),
        }
    }

    /// `α₀ = 0` with `z₀ = δ/ε` taken from the parameters.
    pub fn for_params(p: &BheParams<T>, branch: Branch) -> Result<Self> {
        p.require_confining()?;
        Ok(Self {
            alpha0: T::zero(),
            branch,
            z0: p.delta.clone() / p.epsilon.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceCoeffs<T> {
    pub r: T,
    pub q: T,
    pub p: T,
}

/// `R_n`, `Q_n`, `P_n` for the general expansion.
pub fn recurrence_coeffs<T: Real>(
    n: usize,
    p: &BheParams<T>,
    q: T,
    cfg: &ExpansionConfig<T>,
) -> Result<RecurrenceCoeffs<T>> {
    p.require_confining()?;
    let eps = p.epsilon;
    let k = cfg.alpha0 + T::lit(n as f64);
    let r = (-T::lit(2.0) / eps).sqrt() * k * (p.alpha + (k - p.gamma) * eps);
    let q_n = -cfg.branch.sign::<T>() / eps * (p.alpha * p.delta + (q + k * p.delta) * eps);
    let p_n = (-T::lit(2.0) * eps).sqrt().recip() * (p.alpha + k * eps);
    Ok(RecurrenceCoeffs { r, q: q_n, p: p_n })
}

/// Closed forms valid for `δ = 0`, `α₀ = 0`, `α = −Mε`:
/// `R_n = (−2ε)^{1/2} n(M−n+γ)`, `Q_n = ∓q`, `P_n = (−ε/2)^{1/2}(M−n)`.
pub fn reduced_recurrence_coeffs<T: Real>(
    n: usize,
    gamma: T,
    epsilon: T,
    order: u32,
    q: T,
    branch: Branch,
) -> RecurrenceCoeffs<T> {
    let n_ = T::lit(n as f64);
    let m = T::lit(f64::from(order));
    RecurrenceCoeffs {
        r: (-T::lit(2.0) * epsilon).sqrt() * n_ * (m - n_ + gamma),
        q: -branch.sign::<T>() * q,
        p: (-epsilon / T::lit(2.0)).sqrt() * (m - n_),
    }
}

/// Solves the recurrence forward from `c_0 = 1`, returning `c_0 … c_N`.
pub fn coefficient_sequence<T: Real>(
    p: &BheParams<T>,
    q: T,
    cfg: &ExpansionConfig<T>,
    n_max: usize,
) -> Result<Vec<T>> {
    p.require_confining()?;
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(T::one());
    let mut prev = recurrence_coeffs(0, p, q, cfg)?;
    let mut prev2: Option<RecurrenceCoeffs<T>> = None;
    for n in 1..=n_max {
        let cur = recurrence_coeffs(n, p, q, cfg)?;
        let scale = (-T::lit(2.0) / p.epsilon).sqrt()
            * (cfg.alpha0 + T::lit(n as f64)).abs()
            * (p.alpha.abs() + (cfg.alpha0 + T::lit(n as f64) - p.gamma).abs() * p.epsilon.abs());
        if cur.r.abs() <= T::lit(64.0) * T::epsilon() * scale || cur.r == T::zero() {
            return Err(Error::SingularRecurrence { n });
        }
        let mut rhs = prev.q * c[n - 1];
        if let Some(pp) = prev2 {
            rhs = rhs + pp.p * c[n - 2];
        }
        c.push(-rhs / cur.r);
        prev2 = Some(prev);
        prev = cur;
    }
    Ok(c)
}

/// Residual `R_n c_n + Q_{n−1} c_{n−1} + P_{n−2} c_{n−2}` at every
/// `1 ≤ n < c.len()`, relative to the magnitude of the three terms.
pub fn recurrence_residuals<T: Real>(
    p: &BheParams<T>,
    q: T,
    cfg: &ExpansionConfig<T>,
    c: &[T],
) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for n in 1..c.len() {
        let rn = recurrence_coeffs(n, p, q, cfg)?;
        let rm1 = recurrence_coeffs(n - 1, p, q, cfg)?;
        let mut terms = vec![rn.r * c[n], rm1.q * c[n - 1]];
        if n >= 2 {
            terms.push(recurrence_coeffs(n - 2, p, q, cfg)?.p * c[n - 2]);
        }
        let sum = terms.iter().fold(T::zero(), |a, t| a + *t);
        let mag = terms.iter().fold(T::zero(), |a, t| a + t.abs());
        out.push(if mag == T::zero() { T::zero() } else { sum.abs() / mag });
    }
    Ok(out)
}

/// `P_{n−2} R_{n−1}` for `α₀ = 0`, free of square roots.
fn off_diagonal_product<T: Scalar>(n: usize, p: &BheParams<T>) -> T {
    let eps = p.epsilon.clone();
    let a = p.alpha.clone() + T::int(n as i64 - 2) * eps.clone();
    let b = T::int(n as i64 - 1) * (p.alpha.clone() + (T::int(n as i64 - 1) - p.gamma.clone()) * eps.clone());
    -(a * b) / eps
}

/// The determinant `D_{N+1}(q)` whose roots are exactly the `q` values with
/// `c_{N+1} = 0`, for any `δ` (with `α₀ = 0`).
///
/// For `δ ≠ 0` this is the unvalidated general engine; [`termination_polynomial`]
/// only admits the reduced case.
pub fn termination_determinant<T: Scalar>(
    last: usize,
    p: &BheParams<T>,
    cfg: &ExpansionConfig<T>,
) -> Result<Polynomial<T>> {
    p.require_confining()?;
    if cfg.alpha0 != T::zero() {
        return Err(Error::Unsupported(
            "termination from below is only implemented for alpha0 = 0".into(),
        ));
    }
    let sign = cfg.branch.sign::<T>();
    // −Q_{n−1} = ±(q + (n−1)δ + αδ/ε)
    let shift = p.alpha.clone() * p.delta.clone() / p.epsilon.clone();
    let minus_q = |n: usize| {
        let c0 = sign.clone() * (T::int(n as i64) * p.delta.clone() + shift.clone());
        Polynomial::new(vec![c0, sign.clone()])
    };
    let mut d_prev = Polynomial::zero();
    let mut d = Polynomial::constant(T::one());
    for n in 1..=last {
        let next = &(&minus_q(n - 1) * &d) - &d_prev.scale(&off_diagonal_product(n, p));
        d_prev = d;
        d = next;
    }
    Ok(d)
}

/// The termination polynomial for QES order `M`, normalised to be monic.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminationPolynomial<T> {
    pub order: u32,
    pub gamma: T,
    pub epsilon: T,
    pub poly: Polynomial<T>,
}

impl<T: Scalar> TerminationPolynomial<T> {
    pub fn degree(&self) -> usize {
        self.order as usize + 1
    }

    /// Coefficients of `q⁰ … q^{M+1}`.
    pub fn coefficients(&self) -> &[T] {
        self.poly.coeffs()
    }

    pub fn eval(&self, q: &T) -> T {
        self.poly.eval(q)
    }
}

/// Builds the monic `(M+1)`-degree polynomial in `q` that forces `c_{M+1} = 0`.
///
/// Requires `δ = 0`, `α₀ = 0` and `α = −Mε`; the last condition makes
/// `P_M = 0`, so the series stays terminated beyond `c_{M+1}`.
pub fn termination_polynomial<T: Scalar>(
    order: u32,
    p: &BheParams<T>,
    cfg: &ExpansionConfig<T>,
) -> Result<TerminationPolynomial<T>> {
    p.require_confining()?;
    if p.delta != T::zero() {
        return Err(Error::Unsupported(
            "termination polynomial is only validated for delta = 0".into(),
        ));
    }
    let ratio = -(p.alpha.clone() / p.epsilon.clone());
    let implied = qes_order(&ratio)?;
    if implied != order {
        return Err(Error::NotQes(format!(
            "alpha = {} implies M = {implied}, requested M = {order}",
            p.alpha.approx()
        )));
    }
    let poly = termination_determinant(order as usize + 1, p, cfg)?.monic();
    Ok(TerminationPolynomial {
        order,
        gamma: p.gamma.clone(),
        epsilon: p.epsilon.clone(),
        poly,
    })
}
