//! Parametrizations of the sextic oscillator and the potentials generated by
//! the bi-confluent Heun equation.
//!
//! Two coordinate systems describe the same problem:
//!
//! * [`BheParams`]: the Heun parameters `(γ, δ, ε, α)`, with the accessory
//!   parameter `q` kept separately as [`AccessoryParam`];
//! * [`QesParams`]: the quasi-exactly solvable form `(a, b, s, M)` with
//!   `V(x) = (2s−½)(2s−3/2)x⁻² + [b² − 2a(2s+1+2M)]x² + 2ab x⁴ + a²x⁶`.
//!
//! They are related by `γ = 2s`, `δ = −4b`, `ε = −16a`, `α = 16aM`.
//! Units are `2m = ħ = 1` throughout.
//!
//! # Centrifugal coefficient
//!
//! Substituting `z = x²/4` into the Heun potential gives the inverse-square
//! coefficient `(γ−½)(γ−3/2)`. A form with `(γ−½)(γ−5/2)` is sometimes
//! quoted for the same reduction; it is off by one in the second factor and
//! does not satisfy the Schrödinger equation with the Heun wavefunctions.
//! [`CentrifugalForm::Shifted`] reproduces it for negative-control testing
//! only.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Absolute tolerance for recognising `−α/ε` as a non-negative integer.
pub const QES_INTEGER_TOL: f64 = 1e-9;

/// Bi-confluent Heun parameters `(γ, δ, ε, α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BheParams<T> {
    pub gamma: T,
    pub delta: T,
    pub epsilon: T,
    pub alpha: T,
}

impl<T: Scalar> BheParams<T> {
    pub fn new(gamma: T, delta: T, epsilon: T, alpha: T) -> Self {
        Self {
            gamma,
            delta,
            epsilon,
            alpha,
        }
    }

    /// `ε < 0`: the exponential prefactor decays and `s₀` is real.
    pub fn require_confining(&self) -> Result<()> {
        if self.epsilon < T::zero() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "epsilon must be negative, got {}",
                self.epsilon.approx()
            )))
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.delta == T::zero()
    }
}

/// The accessory parameter `q` of the Heun equation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AccessoryParam<T>(pub T);

/// Quasi-exactly solvable parametrization `(a, b, s, M)`.
///
/// `M + 1` is the number of levels obtainable in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct QesParams<T> {
    pub a: T,
    pub b: T,
    pub s: T,
    pub m: u32,
}

impl<T: Scalar> QesParams<T> {
    pub fn new(a: T, b: T, s: T, m: u32) -> Result<Self> {
        let p = Self { a, b, s, m };
        p.validate()?;
        Ok(p)
    }

    /// The reduced `b = 0` oscillator.
    pub fn reduced(a: T, s: T, m: u32) -> Result<Self> {
        Self::new(a, T::zero(), s, m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a > T::zero() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "a must be positive, got {}",
                self.a.approx()
            )))
        }
    }
}

/// Coefficients of `V(x) = v_m2 x⁻² + v_2 x² + v_4 x⁴ + v_6 x⁶`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialCoeffs<T> {
    pub v_m2: T,
    pub v_2: T,
    pub v_4: T,
    pub v_6: T,
}

impl<T: Scalar> PotentialCoeffs<T> {
    pub fn new(v_m2: T, v_2: T, v_4: T, v_6: T) -> Self {
        Self { v_m2, v_2, v_4, v_6 }
    }

    pub fn eval(&self, x: T) -> Result<T> {
        potential_eval(self, x)
    }

    /// Drops the inverse-square term, leaving the part regular at the origin.
    pub fn regular_part(&self, x: T) -> T {
        self.regular_part_from_square(x.clone() * x)
    }

    fn regular_part_from_square(&self, x2: T) -> T {
        ((self.v_6.clone() * x2.clone() + self.v_4.clone()) * x2.clone() + self.v_2.clone()) * x2
    }
}

/// The exponent `m` in `dz/dx = z^m / σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformExponent {
    MinusOne,
    MinusHalf,
    Zero,
    Half,
    One,
}

impl TransformExponent {
    pub const ALL: [TransformExponent; 5] = [
        TransformExponent::MinusOne,
        TransformExponent::MinusHalf,
        TransformExponent::Zero,
        TransformExponent::Half,
        TransformExponent::One,
    ];

    pub fn as_ratio(self) -> Ratio<i32> {
        match self {
            TransformExponent::MinusOne => Ratio::from_integer(-1),
            TransformExponent::MinusHalf => Ratio::new(-1, 2),
            TransformExponent::Zero => Ratio::from_integer(0),
            TransformExponent::Half => Ratio::new(1, 2),
            TransformExponent::One => Ratio::from_integer(1),
        }
    }

    /// Parses `-1`, `-1/2`, `0`, `1/2`, `1` (decimal forms accepted too).
    pub fn parse(s: &str) -> Result<Self> {
        let normalized = s.trim();
        let m = match normalized {
            "-1" | "-1.0" => TransformExponent::MinusOne,
            "-1/2" | "-0.5" => TransformExponent::MinusHalf,
            "0" | "0.0" => TransformExponent::Zero,
            "1/2" | "0.5" => TransformExponent::Half,
            "1" | "1.0" => TransformExponent::One,
            _ => {
                return Err(Error::Domain(format!(
                    "transform exponent must be one of -1, -1/2, 0, 1/2, 1; got {normalized:?}"
                )))
            }
        };
        Ok(m)
    }

    pub fn label(self) -> &'static str {
        match self {
            TransformExponent::MinusOne => "-1",
            TransformExponent::MinusHalf => "-1/2",
            TransformExponent::Zero => "0",
            TransformExponent::Half => "1/2",
            TransformExponent::One => "1",
        }
    }
}

/// Variable transformation `dz/dx = z^m/σ` with integration shift `x₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformCase<T> {
    pub m: TransformExponent,
    pub sigma: T,
    pub x0: T,
}

impl<T: Scalar> TransformCase<T> {
    /// `σ = 1`, `x₀ = 0`.
    pub fn new(m: TransformExponent) -> Self {
        Self {
            m,
            sigma: T::one(),
            x0: T::zero(),
        }
    }

    pub fn with_sigma(mut self, sigma: T) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_shift(mut self, x0: T) -> Self {
        self.x0 = x0;
        self
    }
}

/// Which inverse-square coefficient to use when reducing Heun parameters to
/// the sextic coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CentrifugalForm {
    /// `(γ−½)(γ−3/2)`, consistent with the Hermite-expansion wavefunctions.
    #[default]
    Standard,
    /// `(γ−½)(γ−5/2)`; wrong, kept as a negative control.
    Shifted,
}

/// `(a, b, s, M) ↦ (γ, δ, ε, α) = (2s, −4b, −16a, 16aM)`.
pub fn qes_to_bhe<T: Scalar>(p: &QesParams<T>) -> Result<BheParams<T>> {
    p.validate()?;
    let m = T::int(i64::from(p.m));
    Ok(BheParams {
        gamma: T::int(2) * p.s.clone(),
        // 0 − 4b keeps δ = +0 for b = 0
        delta: T::zero() - T::int(4) * p.b.clone(),
        epsilon: -(T::int(16) * p.a.clone()),
        alpha: T::int(16) * p.a.clone() * m,
    })
}

/// Inverse of [`qes_to_bhe`]. Requires `ε < 0` and `−α/ε` within
/// [`QES_INTEGER_TOL`] of a non-negative integer.
pub fn bhe_to_qes<T: Scalar>(p: &BheParams<T>) -> Result<QesParams<T>> {
    p.require_confining()?;
    let order = -(p.alpha.clone() / p.epsilon.clone());
    let m = qes_order(&order)?;
    Ok(QesParams {
        a: -(p.epsilon.clone() / T::int(16)),
        b: T::zero() - p.delta.clone() / T::int(4),
        s: p.gamma.clone() / T::int(2),
        m,
    })
}

/// Rounds `−α/ε` to the QES order `M`, or explains why it is not one.
pub(crate) fn qes_order<T: Scalar>(ratio: &T) -> Result<u32> {
    let approx = ratio.approx();
    if !approx.is_finite() {
        return Err(Error::NotQes(format!("-alpha/epsilon = {approx} is not finite")));
    }
    let rounded = approx.round();
    if rounded < 0.0 || rounded > f64::from(u32::MAX) {
        return Err(Error::NotQes(format!(
            "-alpha/epsilon = {approx} is not a non-negative integer"
        )));
    }
    let deviation = (ratio.clone() - T::int(rounded as i64)).magnitude();
    if deviation > T::real(QES_INTEGER_TOL) {
        return Err(Error::NotQes(format!(
            "-alpha/epsilon = {approx} deviates from {rounded} by {:e}",
            deviation.approx()
        )));
    }
    Ok(rounded as u32)
}

/// Sextic coefficients of the QES parametrization.
pub fn qes_sextic_coeffs<T: Scalar>(p: &QesParams<T>) -> PotentialCoeffs<T> {
    let two = T::int(2);
    let two_s = two.clone() * p.s.clone();
    let v_m2 = (two_s.clone() - T::real(0.5)) * (two_s.clone() - T::real(1.5));
    let v_2 = p.b.clone() * p.b.clone()
        - two.clone() * p.a.clone() * (two_s + T::one() + two.clone() * T::int(i64::from(p.m)));
    let v_4 = two * p.a.clone() * p.b.clone();
    let v_6 = p.a.clone() * p.a.clone();
    PotentialCoeffs { v_m2, v_2, v_4, v_6 }
}

/// Sextic coefficients read directly off the Heun parameters for the
/// `m = ½, σ = 1, x₀ = 0` reduction `z = x²/4`.
pub fn sextic_coeffs_from_bhe<T: Scalar>(p: &BheParams<T>, form: CentrifugalForm) -> PotentialCoeffs<T> {
    let g = p.gamma.clone();
    let second = match form {
        CentrifugalForm::Standard => g.clone() - T::real(1.5),
        CentrifugalForm::Shifted => g.clone() - T::real(2.5),
    };
    let v_m2 = (g.clone() - T::real(0.5)) * second;
    let v_2 = p.delta.clone() * p.delta.clone() / T::int(16) - p.alpha.clone() / T::int(4)
        + p.epsilon.clone() * (g + T::one()) / T::int(8);
    let v_4 = p.delta.clone() * p.epsilon.clone() / T::int(32);
    let v_6 = p.epsilon.clone() * p.epsilon.clone() / T::int(256);
    PotentialCoeffs { v_m2, v_2, v_4, v_6 }
}

/// `V(x)`; fails at `x = 0` when the inverse-square coefficient is nonzero.
pub fn potential_eval<T: Scalar>(c: &PotentialCoeffs<T>, x: T) -> Result<T> {
    if x == T::zero() {
        if c.v_m2 != T::zero() {
            return Err(Error::Domain(
                "potential diverges at x = 0 with a nonzero x^-2 term".into(),
            ));
        }
        return Ok(T::zero());
    }
    let x2 = x.clone() * x;
    Ok(c.v_m2.clone() / x2.clone() + c.regular_part_from_square(x2))
}

/// How a generated potential term depends on `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum TermShape {
    /// `(x + x₀)^p`.
    Power(Ratio<i32>),
    /// `exp(k (x + x₀)/σ)`.
    Exponential(i32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTerm<T> {
    pub shape: TermShape,
    pub coefficient: T,
}

/// A member of the five-potential family produced by `dz/dx = z^m/σ`.
///
/// The constant term of `E − V` is the energy, so it is reported separately
/// in `energy`; `terms` holds the remaining `x`-dependent pieces of `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedPotential<T> {
    pub case: TransformCase<T>,
    pub energy: T,
    pub terms: Vec<PotentialTerm<T>>,
}

/// Coefficients of `z^{2m−2} … z^{2m+2}` inside the bracket of `E − V`.
///
/// The first entry already includes the Schwartzian contribution of the
/// transformation.
pub fn bracket_coefficients<T: Scalar>(
    p: &BheParams<T>,
    q: &AccessoryParam<T>,
    m: TransformExponent,
) -> [T; 5] {
    let m_ = ratio_to_scalar::<T>(m.as_ratio());
    let two = T::int(2);
    let g = p.gamma.clone();
    let half_gd = g.clone() * p.delta.clone() / two.clone();
    [
        -((g.clone() - m_.clone()) / two.clone()
            * ((g.clone() + m_) / two.clone() - T::one())),
        -(q.0.clone() + half_gd),
        p.alpha.clone()
            - p.epsilon.clone() / two.clone()
            - p.delta.clone() * p.delta.clone() / T::int(4)
            - g * p.epsilon.clone() / two.clone(),
        -(p.delta.clone() * p.epsilon.clone() / two),
        -(p.epsilon.clone() * p.epsilon.clone() / T::int(4)),
    ]
}

fn ratio_to_scalar<T: Scalar>(r: Ratio<i32>) -> T {
    T::int(i64::from(*r.numer())) / T::int(i64::from(*r.denom()))
}

/// Generates the potential for transformation `case` from Heun parameters.
///
/// For `m ≠ 1`, `z(x) = [(1−m)(x+x₀)/σ]^{1/(1−m)}`; for `m = 1`,
/// `z(x) = exp((x+x₀)/σ)`. With `m = ½, σ = 1, x₀ = 0` the result coincides
/// with [`sextic_coeffs_from_bhe`] (standard centrifugal form).
pub fn potential_from_bhe<T: Real>(
    p: &BheParams<T>,
    q: &AccessoryParam<T>,
    case: &TransformCase<T>,
) -> Result<GeneratedPotential<T>> {
    if !(case.sigma > T::zero()) {
        return Err(Error::Domain(format!("sigma must be positive, got {}", case.sigma)));
    }
    let bracket = bracket_coefficients(p, q, case.m);
    let m = case.m.as_ratio();
    let inv_sigma2 = (case.sigma * case.sigma).recip();
    let mut energy = T::zero();
    let mut terms = Vec::with_capacity(4);
    for (i, c) in bracket.into_iter().enumerate() {
        // z-exponent 2m - 2 + i
        let j = m * 2 - 2 + Ratio::from_integer(i as i32);
        if j == Ratio::from_integer(0) {
            energy = c * inv_sigma2;
            continue;
        }
        let (shape, scale) = if case.m == TransformExponent::One {
            (TermShape::Exponential(j.to_integer()), T::one())
        } else {
            let one_minus_m = Ratio::from_integer(1) - m;
            let power = j / one_minus_m;
            let base = ratio_to_scalar::<T>(one_minus_m) / case.sigma;
            let exponent = T::lit(f64::from(*power.numer()) / f64::from(*power.denom()));
            (TermShape::Power(power), base.powf(exponent))
        };
        terms.push(PotentialTerm {
            shape,
            coefficient: -(c * inv_sigma2 * scale),
        });
    }
    Ok(GeneratedPotential {
        case: case.clone(),
        energy,
        terms,
    })
}

impl<T: Real> GeneratedPotential<T> {
    pub fn eval(&self, x: T) -> Result<T> {
        let u = x + self.case.x0;
        let mut v = T::zero();
        for term in &self.terms {
            let f = match &term.shape {
                TermShape::Power(p) => {
                    if p.is_integer() {
                        let k = p.to_integer();
                        if u == T::zero() && k < 0 {
                            return Err(Error::Domain("potential term diverges at x + x0 = 0".into()));
                        }
                        u.powi(k)
                    } else {
                        if !(u > T::zero()) {
                            return Err(Error::Domain(
                                "fractional power requires x + x0 > 0".into(),
                            ));
                        }
                        u.powf(T::lit(f64::from(*p.numer()) / f64::from(*p.denom())))
                    }
                }
                TermShape::Exponential(k) => (T::lit(f64::from(*k)) * u / self.case.sigma).exp(),
            };
            v = v + term.coefficient * f;
        }
        Ok(v)
    }

    /// Collapses an `m = ½, x₀ = 0` potential onto the four sextic slots.
    pub fn as_sextic(&self) -> Option<PotentialCoeffs<T>> {
        if self.case.m != TransformExponent::Half || self.case.x0 != T::zero() {
            return None;
        }
        let mut c = PotentialCoeffs::new(T::zero(), T::zero(), T::zero(), T::zero());
        for term in &self.terms {
            let TermShape::Power(p) = &term.shape else {
                return None;
            };
            let slot = match (p.is_integer(), p.to_integer()) {
                (true, -2) => &mut c.v_m2,
                (true, 2) => &mut c.v_2,
                (true, 4) => &mut c.v_4,
                (true, 6) => &mut c.v_6,
                _ => return None,
            };
            *slot = *slot + term.coefficient;
        }
        Some(c)
    }
}
