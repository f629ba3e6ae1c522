//! Machine-readable report types. Every type round-trips through JSON.

use serde::{Deserialize, Serialize};

use crate::input::Problem;

/// Both parametrizations of the problem that was solved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamReport {
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub order: u32,
}

impl From<&Problem> for ParamReport {
    fn from(p: &Problem) -> Self {
        Self {
            gamma: p.bhe.gamma,
            delta: p.bhe.delta,
            epsilon: p.bhe.epsilon,
            alpha: p.bhe.alpha,
            a: p.qes.a,
            b: p.qes.b,
            s: p.qes.s,
            order: p.qes.m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub n: usize,
    pub energy: f64,
    pub q_root: f64,
    /// Closed-form energy, present for `M ≤ 3`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_diff: Option<f64>,
    /// Oracle fields, present with `--verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_error_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_diff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    /// A level passes when `|E − E_oracle| ≤ max(tolerance, 5·error_bar)`.
    pub tolerance: f64,
    pub passed: bool,
    pub x_max: f64,
    pub n_points: usize,
    /// `"frobenius-upper"`, `"frobenius-lower"` or `"dirichlet"`.
    pub inner_boundary: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: ParamReport,
    pub levels: Vec<LevelReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

/// Contents of `nodes.json` written next to the wavefunction tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeReport {
    pub params: ParamReport,
    pub grid: GridReport,
    pub levels: Vec<NodeLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeLevel {
    pub n: usize,
    pub energy: f64,
    /// Sign changes of ψ on `x > 0`, stable under grid refinement.
    pub nodes: usize,
    /// File name relative to the output directory.
    pub file: String,
    /// Trapezoid `∫ψ² dx` over the grid, present with `--normalize`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_squared: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermReport {
    /// `"power"` for `(x+x₀)^exponent`, `"exponential"` for
    /// `exp(exponent·(x+x₀)/σ)`.
    pub shape: String,
    /// Rational exponent as `"p"` or `"p/q"`.
    pub exponent: String,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialReport {
    /// Transformation exponent label, e.g. `"1/2"`.
    pub m: String,
    pub sigma: f64,
    pub x0: f64,
    pub q: f64,
    /// Constant term of `E − V`, i.e. the energy for this `q`.
    pub energy: f64,
    pub terms: Vec<TermReport>,
    /// Set for `m ≠ 1/2`: no bound states are computed for these cases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    /// Pass threshold for `worst` (upper bound unless `lower_bound`).
    pub threshold: f64,
    #[serde(default)]
    pub lower_bound: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub tolerance: f64,
    pub seed: u64,
    pub centrifugal_form: String,
    pub checks: Vec<CheckReport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn arbitrary_floats_round_trip_through_json() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let x = f64::from_bits(rng.gen());
            if !x.is_finite() {
                continue;
            }
            let g = GridReport {
                x_min: x,
                x_max: rng.gen::<f64>() * 1e-300,
                points: rng.gen(),
            };
            let back: GridReport = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
            assert_eq!(back.x_min.to_bits(), g.x_min.to_bits());
            assert_eq!(back, g);
        }
    }
}
