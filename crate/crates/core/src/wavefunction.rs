//! Bound-state wavefunctions of the reduced sextic oscillator.
//!
//! A level of order `M` is
//!
//! ```text
//! ψ(x) = (x²)^{γ/2−1/4} exp(εx⁴/64 + δx²/8) Σ_{n≤M} c_n H_n(s₀(x²/4 + z₀))
//! ```
//!
//! with `s₀ = (−ε/2)^{1/2}`. For `δ = 0` the Hermite argument is
//! `(−ε/32)^{1/2} x²`. Derivatives are analytic, so the Schrödinger residual
//! is limited only by rounding.

mod hermite;

pub use hermite::{
    hermite_all, hermite_eval, hermite_explicit, hermite_identity_check, ExplicitHermite, HermiteResiduals,
    EXPLICIT_MAX_DEGREE,
};

use crate::error::{Error, Result};
use crate::params::{potential_eval, BheParams, PotentialCoeffs, QesParams};
use crate::poly::Polynomial;
use crate::scalar::Real;
use crate::spectrum::{closed_form_energies, EigenLevel};

/// Default pointwise tolerance of [`proportionality_check`].
pub const PROPORTIONALITY_TOL: f64 = 1e-8;
/// Samples below this fraction of the peak are excluded from ratio fits.
pub const NODE_EXCLUSION: f64 = 1e-3;
/// Maximum number of midpoint refinements in [`count_nodes`].
pub const MAX_REFINEMENTS: usize = 5;

/// Anything that can be sampled as a real function of `x`.
pub trait Evaluate<T> {
    fn value(&self, x: T) -> Result<T>;
}

/// Where the wavefunction lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveDomain {
    /// `x > 0`.
    Radial,
    /// The whole line, for `γ − ½ ∈ {0, 1}`, where `x^{γ−½}` is a polynomial
    /// and ψ has definite parity.
    FullLine,
}

/// Parity of a full-line solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionExpansion<T> {
    pub gamma: T,
    pub delta: T,
    pub epsilon: T,
    pub s0: T,
    pub z0: T,
    /// `c_0 … c_M`.
    pub coefficients: Vec<T>,
    pub energy: T,
    pub domain: WaveDomain,
}

/// `(ψ, ψ', ψ'')` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Real> WavefunctionExpansion<T> {
    /// Exponent `γ − ½` of the small-`x` prefactor.
    pub fn origin_exponent(&self) -> T {
        self.gamma - T::lit(0.5)
    }

    /// Switches to full-line evaluation; only the parity cases qualify.
    pub fn full_line(mut self) -> Result<Self> {
        self.parity()?;
        self.domain = WaveDomain::FullLine;
        Ok(self)
    }

    /// Parity of the full-line extension.
    pub fn parity(&self) -> Result<Parity> {
        let k = self.origin_exponent();
        let tol = T::lit(1e-12);
        if k.abs() <= tol {
            Ok(Parity::Even)
        } else if (k - T::one()).abs() <= tol {
            Ok(Parity::Odd)
        } else {
            Err(Error::Domain(format!(
                "full-line extension needs gamma = 1/2 or 3/2, got {}",
                self.gamma
            )))
        }
    }

    fn check_domain(&self, x: T) -> Result<()> {
        if self.domain == WaveDomain::Radial && !(x > T::zero()) {
            return Err(Error::Domain(format!("radial wavefunction evaluated at x = {x}")));
        }
        Ok(())
    }

    /// Hermite argument `t(x) = s₀(x²/4 + z₀)`.
    pub fn hermite_argument(&self, x: T) -> T {
        self.s0 * (x * x / T::lit(4.0) + self.z0)
    }

    /// `Σ c_n H_n(t)` and its first two `t`-derivatives.
    fn series(&self, t: T) -> (T, T, T) {
        let m = self.coefficients.len().saturating_sub(1);
        let h = hermite_all(m, t);
        let (mut s, mut st, mut stt) = (T::zero(), T::zero(), T::zero());
        for (n, &c) in self.coefficients.iter().enumerate() {
            let nf = T::lit(n as f64);
            s = s + c * h[n];
            if n >= 1 {
                st = st + c * T::lit(2.0) * nf * h[n - 1];
            }
            if n >= 2 {
                stt = stt + c * T::lit(4.0) * nf * (nf - T::one()) * h[n - 2];
            }
        }
        (s, st, stt)
    }

    /// `x^e`, with integer powers on the full line.
    fn power(&self, x: T, e: T) -> T {
        match self.domain {
            WaveDomain::Radial => x.powf(e),
            WaveDomain::FullLine => x.powi(e.round().to_i32().expect("small exponent")),
        }
    }

    /// Value and analytic first and second derivatives.
    pub fn jet(&self, x: T) -> Result<Jet<T>> {
        self.check_domain(x)?;
        let k = self.origin_exponent();
        let x2 = x * x;
        // Gaussian-quartic factor A = exp(g)
        let mut g = self.epsilon * x2 * x2 / T::lit(64.0);
        if self.delta != T::zero() {
            g = g + self.delta * x2 / T::lit(8.0);
        }
        let g1 = self.epsilon * x2 * x / T::lit(16.0) + self.delta * x / T::lit(4.0);
        let g2 = T::lit(3.0) * self.epsilon * x2 / T::lit(16.0) + self.delta / T::lit(4.0);
        let a = g.exp();
        if a == T::zero() {
            // the Gaussian-quartic factor underflowed: ψ and its derivatives are below the
            // smallest representable magnitude, and the polynomial parts may overflow
            return Ok(Jet {
                value: T::zero(),
                d1: T::zero(),
                d2: T::zero(),
            });
        }
        let a1 = g1 * a;
        let a2 = (g2 + g1 * g1) * a;
        // P = x^k A
        let xk = self.power(x, k);
        let p = xk * a;
        let mut p1 = xk * a1;
        let mut p2 = xk * a2;
        if k != T::zero() {
            let xk1 = self.power(x, k - T::one());
            p1 = p1 + k * xk1 * a;
            p2 = p2 + T::lit(2.0) * k * xk1 * a1;
            if k != T::one() {
                p2 = p2 + k * (k - T::one()) * self.power(x, k - T::lit(2.0)) * a;
            }
        }
        let (s, st, stt) = self.series(self.hermite_argument(x));
        let t1 = self.s0 * x / T::lit(2.0);
        let t2 = self.s0 / T::lit(2.0);
        let s1 = st * t1;
        let s2 = stt * t1 * t1 + st * t2;
        Ok(Jet {
            value: p * s,
            d1: p1 * s + p * s1,
            d2: p2 * s + T::lit(2.0) * p1 * s1 + p * s2,
        })
    }
}

impl<T: Real> Evaluate<T> for WavefunctionExpansion<T> {
    fn value(&self, x: T) -> Result<T> {
        eval_wavefunction(self, x)
    }
}

/// Packages a spectrum level of the reduced problem.
pub fn build_wavefunction<T: Real>(level: &EigenLevel<T>, p: &BheParams<T>) -> Result<WavefunctionExpansion<T>> {
    p.require_confining()?;
    if p.delta != T::zero() {
        return Err(Error::Unsupported("wavefunctions are only built for delta = 0".into()));
    }
    if level.coefficients.is_empty() {
        return Err(Error::Domain("level has no expansion coefficients".into()));
    }
    Ok(WavefunctionExpansion {
        gamma: p.gamma,
        delta: p.delta,
        epsilon: p.epsilon,
        s0: (-p.epsilon / T::lit(2.0)).sqrt(),
        z0: T::zero(),
        coefficients: level.coefficients.clone(),
        energy: level.energy,
        domain: WaveDomain::Radial,
    })
}

pub fn eval_wavefunction<T: Real>(w: &WavefunctionExpansion<T>, x: T) -> Result<T> {
    Ok(w.jet(x)?.value)
}

pub fn eval_wavefunction_d1<T: Real>(w: &WavefunctionExpansion<T>, x: T) -> Result<T> {
    Ok(w.jet(x)?.d1)
}

pub fn eval_wavefunction_d2<T: Real>(w: &WavefunctionExpansion<T>, x: T) -> Result<T> {
    Ok(w.jet(x)?.d2)
}

/// Samples of a function on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    x: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(x: Vec<T>, values: Vec<T>) -> Result<Self> {
        if x.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} abscissae but {} values",
                x.len(),
                values.len()
            )));
        }
        validate_grid(&x)?;
        Ok(Self { x, values })
    }

    pub fn sample(f: &impl Evaluate<T>, grid: &[T]) -> Result<Self> {
        validate_grid(grid)?;
        let values = grid.iter().map(|&x| f.value(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            x: grid.to_vec(),
            values,
        })
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Trapezoidal `∫ f²`.
    pub fn norm_squared(&self) -> T {
        self.x
            .windows(2)
            .zip(self.values.windows(2))
            .fold(T::zero(), |acc, (x, v)| {
                acc + (x[1] - x[0]) * (v[0] * v[0] + v[1] * v[1]) / T::lit(2.0)
            })
    }
}

fn validate_grid<T: Real>(x: &[T]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid("non-finite abscissa".into()));
    }
    if let Some(i) = x.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!("abscissae not strictly increasing at index {i}")));
    }
    Ok(())
}

/// `n ≥ 2` equally spaced points from `a` to `b` inclusive.
pub fn uniform_grid<T: Real>(a: T, b: T, n: usize) -> Result<Vec<T>> {
    if n < 2 || !(b > a) {
        return Err(Error::InvalidGrid(format!("need n >= 2 and a < b, got n = {n}, [{a}, {b}]")));
    }
    let h = (b - a) / T::lit((n - 1) as f64);
    let mut g: Vec<T> = (0..n).map(|i| a + h * T::lit(i as f64)).collect();
    g[n - 1] = b;
    Ok(g)
}

/// Largest `|ψ'' − (V−E)ψ| / (|V−E| + 1)` over the grid, with ψ first scaled
/// to unit peak magnitude on the grid.
pub fn schrodinger_residual<T: Real>(
    w: &WavefunctionExpansion<T>,
    coeffs: &PotentialCoeffs<T>,
    grid: &[T],
) -> Result<T> {
    validate_grid(grid)?;
    let jets = grid.iter().map(|&x| w.jet(x)).collect::<Result<Vec<_>>>()?;
    let peak = jets.iter().fold(T::zero(), |m, j| m.max(j.value.abs()));
    if peak == T::zero() {
        return Err(Error::InvalidGrid("wavefunction vanishes on the whole grid".into()));
    }
    let mut worst = T::zero();
    for (&x, j) in grid.iter().zip(&jets) {
        let vme = potential_eval(coeffs, x)? - w.energy;
        let defect = (j.d2 - vme * j.value).abs() / peak;
        worst = worst.max(defect / (vme.abs() + T::one()));
    }
    Ok(worst)
}

/// Sign changes of a sample sequence; exact zeros are skipped.
fn sign_changes<T: Real>(values: &[T]) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for v in values {
        if *v == T::zero() || !v.is_finite() {
            continue;
        }
        let pos = *v > T::zero();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

/// Interior sign changes of ψ, refining by midpoint insertion until the count
/// is unchanged over two consecutive refinements.
pub fn count_nodes<T: Real>(f: &impl Evaluate<T>, grid: &[T]) -> Result<usize> {
    validate_grid(grid)?;
    let mut xs = grid.to_vec();
    let mut vals = xs.iter().map(|&x| f.value(x)).collect::<Result<Vec<_>>>()?;
    let mut counts = vec![sign_changes(&vals)];
    for _ in 0..MAX_REFINEMENTS {
        let mut nx = Vec::with_capacity(2 * xs.len());
        let mut nv = Vec::with_capacity(2 * xs.len());
        for i in 0..xs.len() {
            nx.push(xs[i]);
            nv.push(vals[i]);
            if i + 1 < xs.len() {
                let mid = (xs[i] + xs[i + 1]) / T::lit(2.0);
                nx.push(mid);
                nv.push(f.value(mid)?);
            }
        }
        xs = nx;
        vals = nv;
        counts.push(sign_changes(&vals));
        let k = counts.len();
        if k >= 3 && counts[k - 1] == counts[k - 2] && counts[k - 2] == counts[k - 3] {
            return Ok(counts[k - 1]);
        }
    }
    Err(Error::UnresolvedNodes { counts })
}

/// Grid on which the quartic exponent falls to −200: `x ∈ (0, (12800/−ε)^{1/4}]`.
pub fn default_node_grid<T: Real>(w: &WavefunctionExpansion<T>, n: usize) -> Result<Vec<T>> {
    let x_max = (T::lit(12800.0) / -w.epsilon).powf(T::lit(0.25));
    uniform_grid(x_max * T::lit(1e-4), x_max, n)
}

/// `(x²)^{s−1/4} exp(−ax⁴/4) F(x²)` with the tabulated polynomial `F` of the
/// reduced oscillator for `M ≤ 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormWavefunction<T> {
    pub a: T,
    pub s: T,
    pub energy: T,
    /// `F` in powers of `y = x²`.
    pub polynomial: Polynomial<T>,
}

impl<T: Real> Evaluate<T> for ClosedFormWavefunction<T> {
    fn value(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Err(Error::Domain(format!("radial wavefunction evaluated at x = {x}")));
        }
        let y = x * x;
        let pre = y.powf(self.s - T::lit(0.25)) * (-self.a * y * y / T::lit(4.0)).exp();
        Ok(pre * self.polynomial.eval(&y))
    }
}

/// Closed-form level `n` (ascending energy) of the reduced oscillator.
pub fn closed_form_wavefunction<T: Real>(p: &QesParams<T>, n: usize) -> Result<ClosedFormWavefunction<T>> {
    if p.m > 3 {
        return Err(Error::Unsupported(format!(
            "closed-form wavefunctions are only available for M <= 3, got {}",
            p.m
        )));
    }
    let energies = closed_form_energies(p)?;
    let e = *energies
        .get(n)
        .ok_or_else(|| Error::Domain(format!("level {n} does not exist for M = {}", p.m)))?;
    let (a, s) = (p.a, p.s);
    let l = T::lit;
    let coeffs = match p.m {
        0 => vec![T::one()],
        1 => vec![-e / l(4.0), a],
        2 => vec![e * e / (l(32.0) * a) - l(2.0) * s - T::one(), -e / l(4.0), a],
        _ => vec![
            -e * e * e / (l(384.0) * a) + (l(7.0) * s + l(5.0)) * e / l(12.0),
            (e * e - l(96.0) * a * (s + T::one())) / l(32.0),
            -a * e / l(4.0),
            a * a,
        ],
    };
    Ok(ClosedFormWavefunction {
        a,
        s,
        energy: e,
        polynomial: Polynomial::new(coeffs),
    })
}

/// Fitted ratio `A/B` and the largest relative deviation from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportionality<T> {
    pub ratio: T,
    pub deviation: T,
    /// Samples that entered the fit.
    pub used: usize,
}

/// Tests `A ∝ B` on samples where both exceed [`NODE_EXCLUSION`] of their
/// peaks; fails with `IncompatibleShapes` when the deviation exceeds `tol`.
pub fn proportionality_check<T: Real>(
    a: &GridFunction<T>,
    b: &GridFunction<T>,
    tol: T,
) -> Result<Proportionality<T>> {
    if a.x != b.x {
        return Err(Error::InvalidGrid("functions sampled on different grids".into()));
    }
    let (pa, pb) = (a.max_abs(), b.max_abs());
    if pa == T::zero() || pb == T::zero() {
        return Err(Error::IncompatibleShapes { deviation: f64::INFINITY });
    }
    let cut = T::lit(NODE_EXCLUSION);
    let mut ratios = Vec::new();
    let mut reference = None;
    for (&va, &vb) in a.values.iter().zip(&b.values) {
        if va.abs() >= cut * pa && vb.abs() >= cut * pb {
            let r = va / vb;
            if vb.abs() == pb {
                reference = Some(r);
            }
            ratios.push(r);
        }
    }
    let Some(ratio) = reference.or_else(|| ratios.first().copied()) else {
        return Err(Error::IncompatibleShapes { deviation: f64::INFINITY });
    };
    let deviation = ratios
        .iter()
        .fold(T::zero(), |m, r| m.max(((*r - ratio) / ratio).abs()));
    if !(deviation <= tol) {
        return Err(Error::IncompatibleShapes {
            deviation: deviation.approx(),
        });
    }
    Ok(Proportionality {
        ratio,
        deviation,
        used: ratios.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{qes_sextic_coeffs, qes_to_bhe, sextic_coeffs_from_bhe, CentrifugalForm};
    use crate::spectrum::solve_spectrum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn levels_of(p: &QesParams<f64>) -> (BheParams<f64>, Vec<WavefunctionExpansion<f64>>) {
        let b = qes_to_bhe(p).unwrap();
        let sp = solve_spectrum(&b, p.m).unwrap();
        let ws = sp.levels.iter().map(|l| build_wavefunction(l, &b).unwrap()).collect();
        (b, ws)
    }

    fn reference_set() -> (BheParams<f64>, Vec<WavefunctionExpansion<f64>>) {
        levels_of(&QesParams::reduced(1.0, 1.0, 3).unwrap())
    }

    #[test]
    fn hermite_argument_is_scaled_square() {
        let (b, ws) = reference_set();
        for x in [0.1, 0.7, 2.0] {
            let t = (-b.epsilon / 32.0f64).sqrt() * x * x;
            assert!((ws[0].hermite_argument(x) - t).abs() < 1e-15);
        }
    }

    #[test]
    fn order_zero_is_pure_prefactor() {
        let p = QesParams::reduced(1.3, 0.8, 0).unwrap();
        let (_, ws) = levels_of(&p);
        for x in [0.2f64, 1.0, 1.7] {
            let expected = (x * x).powf(0.8 - 0.25) * (-1.3 * x.powi(4) / 4.0).exp();
            assert!((ws[0].value(x).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn order_one_ground_state_shape() {
        let p = QesParams::reduced(1.0, 1.0, 1).unwrap();
        let (_, ws) = levels_of(&p);
        let e0 = -(32.0f64).sqrt();
        let ratio = |x: f64| ws[0].value(x).unwrap() / ((x * x).powf(0.75) * (-x.powi(4) / 4.0).exp() * (x * x - e0 / 4.0));
        let r0 = ratio(0.3);
        for x in [0.5, 1.1, 2.4] {
            assert!(((ratio(x) - r0) / r0).abs() < 1e-12);
        }
        assert_eq!(count_nodes(&ws[0], &default_node_grid(&ws[0], 400).unwrap()).unwrap(), 0);
    }

    #[test]
    fn reference_node_counts() {
        let (_, ws) = reference_set();
        let counts: Vec<usize> = ws
            .iter()
            .map(|w| count_nodes(w, &default_node_grid(w, 400).unwrap()).unwrap())
            .collect();
        assert_eq!(counts, vec![0, 1, 2, 3]);
    }

    #[test]
    fn order_two_middle_level_has_one_node() {
        let (_, ws) = levels_of(&QesParams::reduced(0.7, 1.4, 2).unwrap());
        assert!(ws[1].energy.abs() < 1e-12);
        assert_eq!(count_nodes(&ws[1], &default_node_grid(&ws[1], 400).unwrap()).unwrap(), 1);
    }

    #[test]
    fn decays_far_out_and_vanishes_at_origin() {
        let (b, ws) = reference_set();
        let far = 10.0 * (-64.0 / b.epsilon).powf(0.25);
        for w in &ws {
            assert!(w.value(far).unwrap().abs() < 1e-100);
            for x in [1e3, 1e80, 1e200] {
                let j = w.jet(x).unwrap();
                assert_eq!((j.value, j.d1, j.d2), (0.0, 0.0, 0.0));
            }
            assert!(w.value(1e-8).unwrap().abs() < 1e-10);
            assert!(w.value(0.0).is_err());
            assert!(eval_wavefunction_d2(w, -1.0).is_err());
        }
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a = rng.gen_range(0.5..2.0);
            let s = rng.gen_range(0.25..3.0);
            let m = rng.gen_range(0..=4);
            let (_, ws) = levels_of(&QesParams::reduced(a, s, m).unwrap());
            let w = &ws[rng.gen_range(0..ws.len())];
            let x: f64 = rng.gen_range(0.2..2.5);
            let h = 1e-4;
            let f = |x: f64| w.value(x).unwrap();
            let fd = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            let d2 = eval_wavefunction_d2(w, x).unwrap();
            let fd1 = (f(x + h) - f(x - h)) / (2.0 * h);
            let d1 = eval_wavefunction_d1(w, x).unwrap();
            let peak = (0..=50).fold(0.0f64, |acc, i| {
                let x = 0.2 + 2.3 * i as f64 / 50.0;
                let j = w.jet(x).unwrap();
                acc.max(j.value.abs()).max(j.d1.abs()).max(j.d2.abs())
            });
            assert!((fd - d2).abs() <= 1e-5 * peak, "a={a} s={s} m={m} x={x}: {fd} vs {d2}");
            assert!((fd1 - d1).abs() <= 1e-5 * peak);
        }
    }

    #[test]
    fn single_term_second_derivative() {
        // γ = 1/2, M = 0: ψ = exp(εx⁴/64)
        let w = WavefunctionExpansion {
            gamma: 0.5,
            delta: 0.0,
            epsilon: -8.0,
            s0: 2.0,
            z0: 0.0,
            coefficients: vec![1.0],
            energy: 0.0,
            domain: WaveDomain::Radial,
        };
        let x = 0.9f64;
        let e = -8.0;
        let u = e * x.powi(3) / 16.0;
        let expected = (3.0 * e * x * x / 16.0 + u * u) * (e * x.powi(4) / 64.0).exp();
        assert!((eval_wavefunction_d2(&w, x).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn reference_levels_solve_the_equation() {
        let p = QesParams::reduced(1.0, 1.0, 3).unwrap();
        let (b, ws) = levels_of(&p);
        let v = qes_sextic_coeffs(&p);
        let grid = uniform_grid(0.05, 4.0, 1000).unwrap();
        for w in &ws {
            assert!(schrodinger_residual(w, &v, &grid).unwrap() <= 1e-8);
        }
        let shifted = sextic_coeffs_from_bhe(&b, CentrifugalForm::Shifted);
        for w in &ws {
            assert!(schrodinger_residual(w, &shifted, &grid).unwrap() > 1e-3);
        }
    }

    #[test]
    fn perturbed_energy_raises_residual() {
        let p = QesParams::reduced(1.0, 1.0, 3).unwrap();
        let (_, ws) = levels_of(&p);
        let v = qes_sextic_coeffs(&p);
        let grid = uniform_grid(0.05, 4.0, 400).unwrap();
        let mut w = ws[1].clone();
        w.energy += 1e-3;
        let r1 = schrodinger_residual(&w, &v, &grid).unwrap();
        w.energy += 1e-3;
        let r2 = schrodinger_residual(&w, &v, &grid).unwrap();
        assert!(r1 > 1e-6 && (r2 / r1 - 2.0).abs() < 0.1);
    }

    #[test]
    fn matches_closed_forms() {
        let grid = uniform_grid(0.02, 3.5, 600).unwrap();
        for m in 0..=3 {
            let p = QesParams::reduced(1.2, 0.9, m).unwrap();
            let (_, ws) = levels_of(&p);
            for (n, w) in ws.iter().enumerate() {
                let cf = closed_form_wavefunction(&p, n).unwrap();
                let ga = GridFunction::sample(w, &grid).unwrap();
                let gb = GridFunction::sample(&cf, &grid).unwrap();
                proportionality_check(&ga, &gb, PROPORTIONALITY_TOL).unwrap();
            }
        }
    }

    #[test]
    fn proportionality_controls() {
        let p = QesParams::reduced(1.0, 1.0, 3).unwrap();
        let (_, ws) = levels_of(&p);
        let grid = uniform_grid(0.05, 3.0, 300).unwrap();
        let g0 = GridFunction::sample(&ws[0], &grid).unwrap();
        let g1 = GridFunction::sample(&ws[1], &grid).unwrap();
        let same = proportionality_check(&g0, &g0, 1e-8).unwrap();
        assert_eq!((same.ratio, same.deviation), (1.0, 0.0));
        assert!(matches!(
            proportionality_check(&g0, &g1, 1e-8),
            Err(Error::IncompatibleShapes { .. })
        ));
        assert!(closed_form_wavefunction(&QesParams::reduced(1.0, 1.0, 4).unwrap(), 0).is_err());
        assert!(closed_form_wavefunction(&p, 4).is_err());
    }

    #[test]
    fn closed_form_polynomials() {
        let p = QesParams::reduced(2.0, 1.5, 0).unwrap();
        assert_eq!(closed_form_wavefunction(&p, 0).unwrap().polynomial, Polynomial::constant(1.0));
        let p = QesParams::reduced(2.0, 1.5, 2).unwrap();
        let cf = closed_form_wavefunction(&p, 2).unwrap();
        let e = cf.energy;
        assert_eq!(cf.polynomial.coeffs(), &[e * e / 64.0 - 4.0, -e / 4.0, 2.0]);
    }

    #[test]
    fn parity_extensions() {
        for (s, parity) in [(0.25, Parity::Even), (0.75, Parity::Odd)] {
            let (_, ws) = levels_of(&QesParams::reduced(1.0, s, 2).unwrap());
            for w in ws {
                let w = w.full_line().unwrap();
                assert_eq!(w.parity().unwrap(), parity);
                for x in [0.3, 1.1, 2.0] {
                    let (l, r) = (w.value(-x).unwrap(), w.value(x).unwrap());
                    match parity {
                        Parity::Even => assert!((l - r).abs() <= 1e-14 * r.abs().max(1.0)),
                        Parity::Odd => assert!((l + r).abs() <= 1e-14 * r.abs().max(1.0)),
                    }
                }
                match parity {
                    Parity::Even => assert!(eval_wavefunction_d1(&w, 0.0).unwrap().abs() <= 1e-8),
                    Parity::Odd => assert_eq!(w.value(0.0).unwrap(), 0.0),
                }
            }
        }
        let (_, ws) = reference_set();
        assert!(ws[0].clone().full_line().is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(GridFunction::new(vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(uniform_grid(1.0, 0.0, 10).is_err());
        let g = uniform_grid(0.0f64, 1.0, 11).unwrap();
        assert_eq!((g[0], g[10], g.len()), (0.0, 1.0, 11));
        let f = GridFunction::new(g.clone(), g.iter().map(|_| 1.0).collect()).unwrap();
        assert!((f.norm_squared() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unresolved_nodes_are_reported() {
        struct Wild;
        impl Evaluate<f64> for Wild {
            fn value(&self, x: f64) -> Result<f64> {
                let h = x.to_bits().wrapping_mul(0x9E37_79B9_7F4A_7C15);
                Ok(if h >> 63 == 0 { 1.0 } else { -1.0 })
            }
        }
        assert!(matches!(
            count_nodes(&Wild, &uniform_grid(0.0, 1.0, 10).unwrap()),
            Err(Error::UnresolvedNodes { .. })
        ));
    }
}
