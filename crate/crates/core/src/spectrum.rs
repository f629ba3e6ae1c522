//! Energy levels from the roots of the termination polynomial, plus the
//! closed-form energies for `M ≤ 3` used as independent references.

mod companion;

pub use companion::{companion_roots, newton_polish, ComplexRoot};

use crate::error::{Error, Result};
use crate::params::{BheParams, QesParams};
use crate::recurrence::{coefficient_sequence, termination_polynomial, ExpansionConfig};
use crate::scalar::Real;

/// Imaginary parts up to `IMAG_TOL · (1 + |root|)` are treated as rounding noise.
pub const IMAG_TOL: f64 = 1e-8;
/// Roots closer than this (relative) are reported as a multiple root.
pub const MULTIPLE_ROOT_TOL: f64 = 1e-8;
/// Relative pairing tolerance of [`verify_symmetry`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// One exactly solvable bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenLevel<T> {
    /// Position in ascending energy order, from 0.
    pub n: usize,
    pub energy: T,
    pub q_root: T,
    /// Hermite-expansion coefficients `c_0 = 1, c_1, …, c_M`.
    pub coefficients: Vec<T>,
}

/// The `M + 1` quasi-exactly solvable levels for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub params: BheParams<T>,
    pub order: u32,
    pub levels: Vec<EigenLevel<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn energies(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// Solves the reduced (`δ = 0`) problem of order `M`.
///
/// Requires `ε < 0`, `γ ≥ ½` and `α = −Mε`.
pub fn solve_spectrum<T: Real>(p: &BheParams<T>, order: u32) -> Result<Spectrum<T>> {
    p.require_confining()?;
    if p.delta != T::zero() {
        return Err(Error::Unsupported("spectrum extraction requires delta = 0".into()));
    }
    if p.gamma < T::lit(0.5) {
        return Err(Error::Domain(format!(
            "gamma must be at least 1/2 for wavefunctions regular at the origin, got {}",
            p.gamma
        )));
    }
    let cfg = ExpansionConfig::reduced();
    let tp = termination_polynomial(order, p, &cfg)?;
    let expected = tp.degree();

    let roots = companion_roots(&tp.poly)?;
    let mut real: Vec<T> = roots
        .iter()
        .filter(|(re, im)| im.abs() <= T::lit(IMAG_TOL) * (T::one() + re.abs()))
        .map(|(re, _)| newton_polish(&tp.poly, *re))
        .collect();
    if real.len() < expected {
        return Err(Error::ComplexRoots {
            found: real.len(),
            expected,
        });
    }
    real.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    let scale = real.iter().fold(T::one(), |m, r| m.max(r.abs()));
    for (i, w) in real.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if gap <= T::lit(MULTIPLE_ROOT_TOL) * scale {
            return Err(Error::MultipleRoots {
                index: i,
                separation: gap.approx(),
            });
        }
    }

    // E = −q − γδ/2 with δ = 0; ascending energy is descending q.
    let mut levels = Vec::with_capacity(expected);
    for (n, &q) in real.iter().rev().enumerate() {
        let coefficients = coefficient_sequence(p, q, &cfg, order as usize)?;
        levels.push(EigenLevel {
            n,
            energy: -q - p.gamma * p.delta / T::lit(2.0),
            q_root: q,
            coefficients,
        });
    }
    Ok(Spectrum {
        params: p.clone(),
        order,
        levels,
    })
}

/// Closed-form energies of the reduced oscillator for `M ≤ 3`, ascending.
pub fn closed_form_energies<T: Real>(p: &QesParams<T>) -> Result<Vec<T>> {
    p.validate()?;
    if p.b != T::zero() {
        return Err(Error::Unsupported("closed-form energies require b = 0".into()));
    }
    if p.s < T::lit(0.25) {
        return Err(Error::Domain(format!("s must be at least 1/4, got {}", p.s)));
    }
    let (a, s) = (p.a, p.s);
    let root32a = (T::lit(32.0) * a).sqrt();
    let mut e: Vec<T> = match p.m {
        0 => vec![T::zero()],
        1 => (0..2)
            .map(|n| sign_pow::<T>(n + 1) * (T::lit(32.0) * a * s).sqrt())
            .collect(),
        2 => (0..3)
            .map(|n| T::lit(n as f64 - 1.0) * (T::lit(32.0) * a * (T::lit(4.0) * s + T::one())).sqrt())
            .collect(),
        3 => {
            let h = s + T::lit(0.5);
            let disc = (T::lit(25.0) * h * h - T::lit(9.0) * s * (s + T::one())).sqrt();
            (0..4)
                .map(|n| {
                    sign_pow::<T>(n / 2 + 1) * root32a * (T::lit(5.0) * h + sign_pow::<T>(n.div_ceil(2)) * disc).sqrt()
                })
                .collect()
        }
        m => {
            return Err(Error::Unsupported(format!(
                "closed-form energies are only available for M <= 3, got {m}"
            )))
        }
    };
    e.sort_by(|x, y| x.partial_cmp(y).expect("finite energies"));
    Ok(e)
}

fn sign_pow<T: Real>(k: usize) -> T {
    if k.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

/// Outcome of pairing every level with its mirror image `−E`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport<T> {
    pub passed: bool,
    /// Largest `|E_i + E_{K−1−i}|` over all pairs.
    pub worst_mismatch: T,
    pub tolerance: T,
    /// `(i, j)` with level `j` the partner of level `i`; a middle level pairs
    /// with itself.
    pub pairs: Vec<(usize, usize)>,
}

/// Checks that the δ = 0 spectrum is symmetric under `E → −E`.
pub fn verify_symmetry<T: Real>(sp: &Spectrum<T>) -> SymmetryReport<T> {
    let mut e = sp.energies();
    e.sort_by(|x, y| x.partial_cmp(y).expect("finite energies"));
    let k = e.len();
    let scale = e.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let tolerance = T::lit(SYMMETRY_TOL) * scale.max(T::min_positive_value());
    let mut worst = T::zero();
    let mut pairs = Vec::with_capacity(k);
    for i in 0..k {
        let j = k - 1 - i;
        worst = worst.max((e[i] + e[j]).abs());
        pairs.push((i, j));
    }
    SymmetryReport {
        passed: worst <= tolerance,
        worst_mismatch: worst,
        tolerance,
        pairs,
    }
}
