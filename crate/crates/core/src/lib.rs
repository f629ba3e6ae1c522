//! Quasi-exactly solvable spectrum of the sextic oscillator from the
//! Hermite expansion of the bi-confluent Heun function.
//!
//! The pipeline runs
//! [`params`] → [`recurrence`] (termination polynomial in `q`) →
//! [`spectrum`] (roots, `E = −q`) → [`wavefunction`], with [`oracle`]
//! providing an independent finite-difference eigensolver for validation.
//!
//! Everything is generic over the scalar type. The exact parts (parameter
//! maps, potential coefficients, the termination polynomial) accept any
//! [`Scalar`], including [`num_rational::BigRational`]; the rest accepts
//! [`Real`] (`f32` or `f64`). The aliases below fix the common choices.

pub mod error;
pub mod oracle;
pub mod params;
pub mod poly;
pub mod recurrence;
pub mod scalar;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use params::{
    bhe_to_qes, potential_eval, potential_from_bhe, qes_sextic_coeffs, qes_to_bhe, sextic_coeffs_from_bhe,
    AccessoryParam, CentrifugalForm, GeneratedPotential, TransformCase, TransformExponent,
};
pub use poly::Polynomial;
pub use recurrence::{coefficient_sequence, recurrence_coeffs, termination_polynomial, Branch, ExpansionConfig};
pub use scalar::{Real, Scalar};
pub use spectrum::{closed_form_energies, solve_spectrum, verify_symmetry, EigenLevel};
pub use wavefunction::{
    build_wavefunction, closed_form_wavefunction, count_nodes, eval_wavefunction, eval_wavefunction_d2,
    hermite_eval, hermite_identity_check, proportionality_check, schrodinger_residual, uniform_grid, Evaluate,
    GridFunction,
};
pub use oracle::{auto_box, fd_eigenvalues, InnerBoundary, OriginBranch};

use num_rational::BigRational;

pub type BheParams = params::BheParams<f64>;
pub type BheParams32 = params::BheParams<f32>;
pub type ExactBheParams = params::BheParams<BigRational>;

pub type QesParams = params::QesParams<f64>;
pub type ExactQesParams = params::QesParams<BigRational>;

pub type PotentialCoeffs = params::PotentialCoeffs<f64>;
pub type ExactPotentialCoeffs = params::PotentialCoeffs<BigRational>;

pub type TerminationPolynomial = recurrence::TerminationPolynomial<f64>;
pub type ExactTerminationPolynomial = recurrence::TerminationPolynomial<BigRational>;

pub type Spectrum = spectrum::Spectrum<f64>;
pub type Level = spectrum::EigenLevel<f64>;

pub type Wavefunction = wavefunction::WavefunctionExpansion<f64>;
pub type ClosedFormWavefunction = wavefunction::ClosedFormWavefunction<f64>;

pub type Discretization = oracle::Discretization<f64>;
pub type OracleResult = oracle::OracleResult<f64>;
