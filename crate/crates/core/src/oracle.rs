//! Finite-difference eigensolver for `−ψ'' + V(x)ψ = Eψ` on a truncated
//! half-line, independent of the Heun machinery.
//!
//! Two inner boundary treatments are available:
//!
//! * `Dirichlet`: `ψ(x_min) = 0` with the three-point second difference on a
//!   uniform interior grid.
//! * `Frobenius`: with `V = v₋₂/x² + W(x)` the substitution `ψ = x^λ φ`,
//!   `λ(λ−1) = v₋₂`, removes the singular term and leaves the Sturm–Liouville
//!   problem `−(x^{2λ}φ')' + x^{2λ}Wφ = E x^{2λ}φ`. It is discretized by
//!   cell-centred finite volumes on `[0, x_max]` with exact cell weights and
//!   zero flux through the origin. The branch of `λ` selects which of the two
//!   local solutions `x^{λ±}` the eigenfunctions follow.
//!
//! Both produce a symmetric tridiagonal matrix whose lowest eigenvalues are
//! found by Sturm-count bisection and then Richardson-extrapolated from
//! step `h` to `h/2`.

mod tridiag;

pub use tridiag::SymTridiagonal;

use crate::error::{Error, Result};
use crate::params::PotentialCoeffs;
use crate::scalar::Real;

/// Absolute bisection width on each eigenvalue.
pub const BISECTION_TOL: f64 = 1e-12;
pub const MIN_POINTS: usize = 100;
pub const DEFAULT_POINTS: usize = 4000;
/// `V(x_max) − E_k` chosen by [`auto_box`].
pub const DECAY_MARGIN: f64 = 40.0;
/// `∫ (V−E)^{1/2} dx` beyond the outer turning point chosen by [`auto_box`].
pub const WKB_DECAY: f64 = 25.0;
/// Edge amplitude, relative to the peak, above which truncation is reported.
pub const TRUNCATION_TOL: f64 = 1e-6;

/// Which root of `λ(λ−1) = v₋₂` the eigenfunctions follow near the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OriginBranch {
    /// `λ = ½ + (¼ + v₋₂)^{1/2}`.
    #[default]
    Upper,
    /// `λ = ½ − (¼ + v₋₂)^{1/2}`; square integrable only while `v₋₂ < ¾`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerBoundary {
    Dirichlet,
    Frobenius(OriginBranch),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discretization<T> {
    pub x_min: T,
    pub x_max: T,
    /// Interior points (Dirichlet) or cells (Frobenius) of the coarse grid.
    pub n_points: usize,
    pub inner: InnerBoundary,
}

impl<T: Real> Discretization<T> {
    pub fn new(x_min: T, x_max: T, n_points: usize, inner: InnerBoundary) -> Result<Self> {
        let d = Self {
            x_min,
            x_max,
            n_points,
            inner,
        };
        d.validate()?;
        Ok(d)
    }

    /// Dirichlet at both ends.
    pub fn dirichlet(x_min: T, x_max: T, n_points: usize) -> Result<Self> {
        Self::new(x_min, x_max, n_points, InnerBoundary::Dirichlet)
    }

    /// Frobenius inner boundary on `[0, x_max]`.
    pub fn frobenius(x_max: T, n_points: usize, branch: OriginBranch) -> Result<Self> {
        Self::new(T::zero(), x_max, n_points, InnerBoundary::Frobenius(branch))
    }

    pub fn with_inner(mut self, inner: InnerBoundary) -> Result<Self> {
        if matches!(inner, InnerBoundary::Frobenius(_)) {
            self.x_min = T::zero();
        }
        self.inner = inner;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_min >= T::zero()) || !(self.x_max > self.x_min) || !self.x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need 0 <= x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.n_points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {}",
                self.n_points
            )));
        }
        if matches!(self.inner, InnerBoundary::Frobenius(_)) && self.x_min != T::zero() {
            return Err(Error::InvalidGrid("the Frobenius treatment starts at x = 0".into()));
        }
        Ok(())
    }

    /// Grid spacing.
    pub fn step(&self) -> T {
        match self.inner {
            InnerBoundary::Dirichlet => (self.x_max - self.x_min) / T::lit((self.n_points + 1) as f64),
            InnerBoundary::Frobenius(_) => self.x_max / T::lit(self.n_points as f64),
        }
    }

    /// The same box at half the spacing.
    pub fn refined(&self) -> Self {
        let n_points = match self.inner {
            InnerBoundary::Dirichlet => 2 * self.n_points + 1,
            InnerBoundary::Frobenius(_) => 2 * self.n_points,
        };
        Self {
            n_points,
            ..self.clone()
        }
    }
}

/// Near-origin exponent `λ` of the chosen branch.
pub fn origin_exponent<T: Real>(v_m2: T, branch: OriginBranch) -> Result<T> {
    let disc = T::lit(0.25) + v_m2;
    if disc < T::zero() {
        return Err(Error::Domain(format!(
            "inverse-square coefficient {v_m2} is below -1/4; the spectrum is unbounded"
        )));
    }
    let r = disc.sqrt();
    match branch {
        OriginBranch::Upper => Ok(T::lit(0.5) + r),
        OriginBranch::Lower if r < T::one() => Ok(T::lit(0.5) - r),
        OriginBranch::Lower => Err(Error::Domain(format!(
            "lower origin branch is not square integrable for inverse-square coefficient {v_m2}"
        ))),
    }
}

/// Discretized operator: eigenvector component `i` times `psi_scale[i]` is
/// `ψ(x[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembled<T> {
    pub matrix: SymTridiagonal<T>,
    pub x: Vec<T>,
    pub psi_scale: Vec<T>,
}

/// Builds the symmetric tridiagonal matrix for one grid.
pub fn assemble<T: Real>(coeffs: &PotentialCoeffs<T>, d: &Discretization<T>) -> Result<Assembled<T>> {
    d.validate()?;
    let n = d.n_points;
    let h = d.step();
    match d.inner {
        InnerBoundary::Dirichlet => {
            if d.x_min == T::zero() && coeffs.v_m2 != T::zero() {
                return Err(Error::Domain(
                    "Dirichlet box must start at x_min > 0 when an inverse-square term is present".into(),
                ));
            }
            let inv_h2 = (h * h).recip();
            let x: Vec<T> = (1..=n).map(|i| d.x_min + h * T::lit(i as f64)).collect();
            let mut diag = Vec::with_capacity(n);
            for &xi in &x {
                diag.push(T::lit(2.0) * inv_h2 + coeffs.eval(xi)?);
            }
            Ok(Assembled {
                matrix: SymTridiagonal::new(diag, vec![-inv_h2; n - 1])?,
                psi_scale: vec![T::one(); n],
                x,
            })
        }
        InnerBoundary::Frobenius(branch) => {
            let lambda = origin_exponent(coeffs.v_m2, branch)?;
            let two_l = T::lit(2.0) * lambda;
            let face = |j: usize| (h * T::lit(j as f64)).powf(two_l);
            let mass = |i: usize| {
                let p = two_l + T::one();
                let (a, b) = (h * T::lit(i as f64), h * T::lit((i + 1) as f64));
                (b.powf(p) - a.powf(p)) / p
            };
            let x: Vec<T> = (0..n).map(|i| h * (T::lit(i as f64) + T::lit(0.5))).collect();
            let m: Vec<T> = (0..n).map(mass).collect();
            let mut diag = Vec::with_capacity(n);
            let mut off = Vec::with_capacity(n - 1);
            for i in 0..n {
                let left = if i == 0 { T::zero() } else { face(i) };
                // the last cell sees the wall at half a step
                let right = if i + 1 == n { T::lit(2.0) * face(n) } else { face(i + 1) };
                diag.push(((left + right) / h + m[i] * coeffs.regular_part(x[i])) / m[i]);
                if i + 1 < n {
                    off.push(-face(i + 1) / h / (m[i] * m[i + 1]).sqrt());
                }
            }
            let psi_scale = x.iter().zip(&m).map(|(&xi, &mi)| xi.powf(lambda) / mi.sqrt()).collect();
            Ok(Assembled {
                matrix: SymTridiagonal::new(diag, off)?,
                x,
                psi_scale,
            })
        }
    }
}

/// One eigenvalue on both grids and its extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleLevel<T> {
    pub coarse: T,
    pub fine: T,
    pub extrapolated: T,
    /// `|E_h − E_{h/2}|/3`, floored at the bisection width.
    pub error_bar: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleWarning {
    /// The eigenfunction of `level` has not decayed at the outer wall.
    BoxTruncation { level: usize, edge_amplitude: f64 },
}

impl std::fmt::Display for OracleWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleWarning::BoxTruncation { level, edge_amplitude } => write!(
                f,
                "level {level} not decayed at the outer wall (edge amplitude {edge_amplitude:.3e} of peak)"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<T> {
    /// Extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<T>,
    pub levels: Vec<OracleLevel<T>>,
    pub discretization: Discretization<T>,
    pub warnings: Vec<OracleWarning>,
}

/// Lowest `k` eigenvalues from grids `h` and `h/2`.
pub fn fd_eigenvalues<T: Real>(coeffs: &PotentialCoeffs<T>, d: &Discretization<T>, k: usize) -> Result<OracleResult<T>> {
    if k == 0 || k > d.n_points / 4 {
        return Err(Error::Domain(format!(
            "requested {k} eigenvalues from {} points; need 1 <= k <= n_points/4",
            d.n_points
        )));
    }
    let tol = T::lit(BISECTION_TOL);
    let coarse = assemble(coeffs, d)?;
    let fine = assemble(coeffs, &d.refined())?;
    let ec = coarse.matrix.lowest_eigenvalues(k, tol)?;
    let ef = fine.matrix.lowest_eigenvalues(k, tol)?;
    let levels: Vec<OracleLevel<T>> = ec
        .iter()
        .zip(&ef)
        .map(|(&c, &f)| OracleLevel {
            coarse: c,
            fine: f,
            extrapolated: (T::lit(4.0) * f - c) / T::lit(3.0),
            error_bar: ((f - c).abs() / T::lit(3.0)).max(tol),
        })
        .collect();

    let mut warnings = Vec::new();
    let top = k - 1;
    let v = fine.matrix.eigenvector(ef[top]);
    let psi: Vec<T> = v.iter().zip(&fine.psi_scale).map(|(&y, &s)| y * s).collect();
    let peak = psi.iter().fold(T::zero(), |m, p| m.max(p.abs()));
    let edge = (psi[psi.len() - 1].abs() / peak).approx();
    if !(edge <= TRUNCATION_TOL) {
        warnings.push(OracleWarning::BoxTruncation {
            level: top,
            edge_amplitude: edge,
        });
    }

    Ok(OracleResult {
        eigenvalues: levels.iter().map(|l| l.extrapolated).collect(),
        levels,
        discretization: d.clone(),
        warnings,
    })
}

/// Picks a box for the lowest `k` levels.
///
/// A coarse solve estimates `E_{k−1}`; `x_max` is then the first point past
/// the outer turning point where both `V(x_max) ≥ E_{k−1} + DECAY_MARGIN`
/// and the WKB exponent `∫ (V−E)^{1/2}` reaches `WKB_DECAY`. The inner
/// boundary is `Frobenius(Upper)`.
pub fn auto_box<T: Real>(coeffs: &PotentialCoeffs<T>, k: usize) -> Result<Discretization<T>> {
    if !(coeffs.v_6 > T::zero()) {
        return Err(Error::Domain(format!("need v_6 > 0 for a confining box, got {}", coeffs.v_6)));
    }
    if k == 0 || k > DEFAULT_POINTS / 4 {
        return Err(Error::Domain(format!("cannot size a box for {k} levels")));
    }
    let inner = InnerBoundary::Frobenius(OriginBranch::Upper);
    let v6 = coeffs.v_6;
    let mut l = T::one()
        .max((coeffs.v_2.abs() / v6).powf(T::lit(0.25)))
        .max((coeffs.v_4.abs() / v6).sqrt())
        * T::lit(2.0);
    let coarse_points = 400.max(8 * k);
    for _ in 0..30 {
        let d = Discretization::new(T::zero(), l, coarse_points, inner)?;
        let e = assemble(coeffs, &d)?.matrix.eigenvalue(k - 1, T::lit(1e-9))?;
        let need = decay_point(coeffs, e, l)?;
        if need <= l {
            return Discretization::new(T::zero(), need, DEFAULT_POINTS, inner);
        }
        l = need * T::lit(1.5);
    }
    Err(Error::ConvergenceFailure("box sizing".into()))
}

/// First `x` past the outer turning point of energy `e` meeting both decay
/// criteria of [`auto_box`].
fn decay_point<T: Real>(c: &PotentialCoeffs<T>, e: T, start: T) -> Result<T> {
    let margin = T::lit(DECAY_MARGIN);
    let mut far = start;
    while c.eval(far)? < e + margin {
        far = far * T::lit(2.0);
    }
    let steps = 8000;
    let dx = far / T::lit(steps as f64);
    // outermost classically allowed point
    let mut turn = T::zero();
    for i in (1..=steps).rev() {
        let x = dx * T::lit(i as f64);
        if c.eval(x)? <= e {
            turn = x;
            break;
        }
    }
    let mut x = turn.max(dx);
    let mut action = T::zero();
    let mut prev = (c.eval(x)? - e).max(T::zero()).sqrt();
    loop {
        let next = x + dx;
        let cur = (c.eval(next)? - e).max(T::zero()).sqrt();
        action = action + (prev + cur) * dx / T::lit(2.0);
        x = next;
        prev = cur;
        if c.eval(x)? >= e + margin && action >= T::lit(WKB_DECAY) {
            return Ok(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> PotentialCoeffs<f64> {
        PotentialCoeffs::new(0.75, -18.0, 0.0, 1.0)
    }

    /// Reduced order-3 energies for `a = s = 1`, written out directly.
    fn reference_exact() -> [f64; 4] {
        let h = 1.5f64;
        let d = (25.0 * h * h - 18.0f64).sqrt();
        let r = 32f64.sqrt();
        let lo = r * (5.0 * h - d).sqrt();
        let hi = r * (5.0 * h + d).sqrt();
        [-hi, -lo, lo, hi]
    }

    #[test]
    fn harmonic_radial_levels() {
        let v = PotentialCoeffs::new(0.0, 1.0, 0.0, 0.0);
        for d in [
            Discretization::dirichlet(0.0, 12.0, 4000).unwrap(),
            Discretization::frobenius(12.0, 4000, OriginBranch::Upper).unwrap(),
        ] {
            let r = fd_eigenvalues(&v, &d, 3).unwrap();
            for (e, exact) in r.eigenvalues.iter().zip([3.0f64, 7.0, 11.0]) {
                assert!((e - exact).abs() < 1e-4, "{:?}: {e}", d.inner);
            }
            assert!(r.warnings.is_empty());
        }
        // the even branch gives the other half of the oscillator
        let d = Discretization::frobenius(12.0, 4000, OriginBranch::Lower).unwrap();
        let r = fd_eigenvalues(&v, &d, 3).unwrap();
        for (e, exact) in r.eigenvalues.iter().zip([1.0f64, 5.0, 9.0]) {
            assert!((e - exact).abs() < 1e-4, "{e}");
        }
    }

    #[test]
    fn reference_levels() {
        let d = auto_box(&reference(), 4).unwrap();
        assert!(d.x_max > 3.2 && d.x_max < 4.5, "{}", d.x_max);
        let r = fd_eigenvalues(&reference(), &d, 4).unwrap();
        for (e, p) in r.eigenvalues.iter().zip([-20.926, -6.488, 6.488, 20.926]) {
            assert!((e - p).abs() < 1e-3, "{e}");
        }
        for (e, x) in r.eigenvalues.iter().zip(reference_exact()) {
            assert!((e - x).abs() < 1e-6, "{e} vs {x}");
        }
        for l in &r.levels {
            assert!(l.error_bar > 0.0);
        }
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn dirichlet_wall_bias_is_invisible_to_the_error_bar() {
        let d = Discretization::dirichlet(1e-3, 4.0, 4000).unwrap();
        let r = fd_eigenvalues(&reference(), &d, 4).unwrap();
        for (e, x) in r.eigenvalues.iter().zip(reference_exact()) {
            assert!((e - x).abs() < 1e-4, "{e} vs {x}");
        }
        // a wall at 1e-2 shifts the top level by ~8e-3 while h-refinement
        // barely moves it
        let d = Discretization::dirichlet(1e-2, 4.0, 4000).unwrap();
        let top = fd_eigenvalues(&reference(), &d, 4).unwrap().levels[3];
        assert!((top.extrapolated - reference_exact()[3]).abs() > 100.0 * top.error_bar);
    }

    #[test]
    fn order_one_levels_and_beyond() {
        // a = s = 1, order 1
        let v = PotentialCoeffs::new(0.75, -10.0, 0.0, 1.0);
        let d = auto_box(&v, 3).unwrap();
        let r = fd_eigenvalues(&v, &d, 3).unwrap();
        let e = 32f64.sqrt();
        assert!((r.eigenvalues[0] + e).abs() < 1e-3 && (r.eigenvalues[1] - e).abs() < 1e-3);
        assert!(r.eigenvalues[2] > e + 1.0);
    }

    #[test]
    fn second_order_convergence() {
        let exact = reference_exact();
        let base = Discretization::frobenius(4.0, 250, OriginBranch::Upper).unwrap();
        let mut errs = Vec::new();
        for n in [250, 500, 1000] {
            let d = Discretization { n_points: n, ..base.clone() };
            let e = assemble(&reference(), &d).unwrap().matrix.lowest_eigenvalues(4, 1e-13).unwrap();
            errs.push((e[3] - exact[3]).abs());
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..4.5).contains(&ratio), "{errs:?}");
        }
    }

    #[test]
    fn sturm_count_monotone_on_assembled_matrix() {
        let a = assemble(&reference(), &Discretization::frobenius(4.0, 200, OriginBranch::Upper).unwrap()).unwrap();
        let mut last = 0;
        for i in 0..200 {
            let c = a.matrix.sturm_count(-40.0 + i as f64);
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn truncated_box_is_flagged() {
        let v = PotentialCoeffs::new(0.0, -30.0, 0.0, 1.0);
        let d = Discretization::frobenius(1.2, 400, OriginBranch::Upper).unwrap();
        let r = fd_eigenvalues(&v, &d, 2).unwrap();
        assert!(matches!(r.warnings[..], [OracleWarning::BoxTruncation { level: 1, .. }]));
        assert!(auto_box(&v, 2).unwrap().x_max > 3.0);
    }

    #[test]
    fn pure_sextic_box_is_modest() {
        let d = auto_box(&PotentialCoeffs::new(0.0, 0.0, 0.0, 1.0), 1).unwrap();
        assert!(d.x_max > 2.0 && d.x_max < 4.0, "{}", d.x_max);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Discretization::dirichlet(1.0, 0.5, 200).is_err());
        assert!(Discretization::dirichlet(0.0, 1.0, 50).is_err());
        let d = Discretization::dirichlet(0.0, 4.0, 400).unwrap();
        assert!(fd_eigenvalues(&reference(), &d, 2).is_err());
        assert!(fd_eigenvalues(&PotentialCoeffs::new(0.0, 1.0, 0.0, 0.0), &d, 101).is_err());
        assert!(origin_exponent(-0.3f64, OriginBranch::Upper).is_err());
        assert!(origin_exponent(0.75f64, OriginBranch::Lower).is_err());
        assert!(auto_box(&PotentialCoeffs::new(0.0, 1.0, 0.0, 0.0), 1).is_err());
    }

    #[test]
    fn origin_exponents() {
        assert_eq!(origin_exponent(0.75f64, OriginBranch::Upper).unwrap(), 1.5);
        assert_eq!(origin_exponent(0.0f64, OriginBranch::Lower).unwrap(), 0.0);
        assert_eq!(origin_exponent(0.0f64, OriginBranch::Upper).unwrap(), 1.0);
        // s = 0.4: V₋₂ = 0.3·(−0.7); the QES exponent γ − ½ = 0.3 is the lower root
        let v = (0.8f64 - 0.5) * (0.8 - 1.5);
        assert!((origin_exponent(v, OriginBranch::Lower).unwrap() - 0.3).abs() < 1e-15);
    }
}
