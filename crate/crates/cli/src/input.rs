//! Turns the parameter flags into solver inputs.

use heun_sextic::params::{bhe_to_qes, qes_to_bhe};
use heun_sextic::{BheParams, QesParams};

use crate::args::ParamArgs;
use crate::{Failure, Stage};

/// A parameter set in both parametrizations.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub bhe: BheParams,
    pub qes: QesParams,
}

impl Problem {
    pub fn order(&self) -> u32 {
        self.qes.m
    }

    pub fn from_qes(qes: QesParams) -> Result<Self, Failure> {
        let bhe = qes_to_bhe(&qes).stage("parameters")?;
        Ok(Self { bhe, qes })
    }
}

impl ParamArgs {
    fn has_bhe(&self) -> bool {
        self.gamma.is_some() || self.delta.is_some() || self.epsilon.is_some() || self.alpha.is_some()
    }

    fn has_qes(&self) -> bool {
        self.a.is_some() || self.b.is_some() || self.s.is_some()
    }

    fn check_exclusive(&self) -> Result<(), Failure> {
        match (self.has_bhe(), self.has_qes()) {
            (true, true) => Err(Failure::Usage(
                "give either --gamma/--delta/--epsilon/--alpha or -a/-b/-s, not both".into(),
            )),
            (false, false) => Err(Failure::Usage(
                "no parameters: give --gamma --epsilon [--delta] [--alpha] or -a -s [-b] with -M".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Heun parameters without requiring a QES order.
    pub fn bhe(&self) -> Result<BheParams, Failure> {
        self.check_exclusive()?;
        if self.has_qes() {
            let a = required(self.a, "-a")?;
            let s = required(self.s, "-s")?;
            // the potential does not involve M beyond α, so default it to 0
            let qes = QesParams::new(a, self.b.unwrap_or(0.0), s, self.order.unwrap_or(0)).stage("parameters")?;
            return qes_to_bhe(&qes).stage("parameters");
        }
        let gamma = required(self.gamma, "--gamma")?;
        let epsilon = required(self.epsilon, "--epsilon")?;
        let alpha = match (self.alpha, self.order) {
            (Some(alpha), _) => alpha,
            (None, Some(m)) => -f64::from(m) * epsilon,
            (None, None) => return Err(Failure::Usage("give --alpha or -M".into())),
        };
        let p = BheParams::new(gamma, self.delta.unwrap_or(0.0), epsilon, alpha);
        for (name, v) in [("gamma", p.gamma), ("delta", p.delta), ("epsilon", p.epsilon), ("alpha", p.alpha)] {
            if !v.is_finite() {
                return Err(Failure::Usage(format!("--{name} must be finite")));
            }
        }
        Ok(p)
    }

    /// A quasi-exactly solvable parameter set with its order.
    pub fn problem(&self) -> Result<Problem, Failure> {
        self.check_exclusive()?;
        if self.has_qes() {
            let a = required(self.a, "-a")?;
            let s = required(self.s, "-s")?;
            let m = self.order.ok_or_else(|| Failure::Usage("-M is required with -a/-s".into()))?;
            let qes = QesParams::new(a, self.b.unwrap_or(0.0), s, m).stage("parameters")?;
            return Problem::from_qes(qes);
        }
        let bhe = self.bhe()?;
        let qes = bhe_to_qes(&bhe).stage("parameters")?;
        if let Some(m) = self.order {
            if m != qes.m {
                return Err(Failure::Usage(format!(
                    "-M {m} contradicts -alpha/epsilon = {}",
                    -bhe.alpha / bhe.epsilon
                )));
            }
        }
        Ok(Problem { bhe, qes })
    }
}

fn required(v: Option<f64>, flag: &str) -> Result<f64, Failure> {
    match v {
        Some(x) if x.is_finite() => Ok(x),
        Some(_) => Err(Failure::Usage(format!("{flag} must be finite"))),
        None => Err(Failure::Usage(format!("{flag} is required"))),
    }
}
