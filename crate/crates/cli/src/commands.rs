//! The `spectrum`, `wavefunction`, `potential` and `figures` commands.

use std::path::Path;

use heun_sextic::oracle::{auto_box, fd_eigenvalues, Discretization, InnerBoundary, OriginBranch};
use heun_sextic::params::{potential_from_bhe, qes_sextic_coeffs, AccessoryParam, TermShape, TransformCase, TransformExponent};
use heun_sextic::wavefunction::{build_wavefunction, count_nodes, default_node_grid, uniform_grid, GridFunction};
use heun_sextic::{closed_form_energies, solve_spectrum, QesParams, Spectrum};

use crate::args::{Format, PotentialArgs, SpectrumArgs, WavefunctionArgs};
use crate::input::Problem;
use crate::output::{self, float, optional, Table};
use crate::report::{
    GridReport, LevelReport, NodeLevel, NodeReport, OracleSummary, ParamReport, PotentialReport, SpectrumReport,
    TermReport,
};
use crate::{Failure, Stage};

/// Nodes are counted on this many points, refined until stable.
const NODE_GRID_POINTS: usize = 400;

/// Oracle settings for `spectrum --verify`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub tolerance: f64,
    pub points: usize,
    pub x_max: Option<f64>,
}

pub fn solve(problem: &Problem) -> Result<Spectrum, Failure> {
    solve_spectrum(&problem.bhe, problem.order()).stage("spectrum")
}

/// The exact levels carry `x^{2s−½}` at the origin, the lower Frobenius root
/// when `s < ½`.
pub fn origin_branch(qes: &QesParams) -> OriginBranch {
    if qes.s < 0.5 {
        OriginBranch::Lower
    } else {
        OriginBranch::Upper
    }
}

fn inner_label(inner: InnerBoundary) -> &'static str {
    match inner {
        InnerBoundary::Dirichlet => "dirichlet",
        InnerBoundary::Frobenius(OriginBranch::Upper) => "frobenius-upper",
        InnerBoundary::Frobenius(OriginBranch::Lower) => "frobenius-lower",
    }
}

pub fn spectrum_report(problem: &Problem, oracle: Option<OracleOptions>) -> Result<SpectrumReport, Failure> {
    let sp = solve(problem)?;
    let closed = if problem.order() <= 3 {
        Some(closed_form_energies(&problem.qes).stage("closed-form energies")?)
    } else {
        None
    };
    let mut levels: Vec<LevelReport> = sp
        .levels
        .iter()
        .map(|l| {
            let cf = closed.as_ref().map(|c| c[l.n]);
            LevelReport {
                n: l.n,
                energy: l.energy,
                q_root: l.q_root,
                closed_form: cf,
                closed_form_diff: cf.map(|c| l.energy - c),
                oracle: None,
                oracle_error_bar: None,
                oracle_diff: None,
                oracle_pass: None,
            }
        })
        .collect();
    let summary = match oracle {
        None => None,
        Some(opts) => {
            let coeffs = qes_sextic_coeffs(&problem.qes);
            let k = levels.len();
            let inner = InnerBoundary::Frobenius(origin_branch(&problem.qes));
            let x_max = match opts.x_max {
                Some(x) => x,
                None => auto_box(&coeffs, k).stage("oracle box")?.x_max,
            };
            let d = Discretization::new(0.0, x_max, opts.points, inner).stage("oracle grid")?;
            let r = fd_eigenvalues(&coeffs, &d, k).stage("oracle")?;
            let mut passed = true;
            for (lvl, o) in levels.iter_mut().zip(&r.levels) {
                let diff = lvl.energy - o.extrapolated;
                let ok = diff.abs() <= opts.tolerance.max(5.0 * o.error_bar);
                passed &= ok;
                lvl.oracle = Some(o.extrapolated);
                lvl.oracle_error_bar = Some(o.error_bar);
                lvl.oracle_diff = Some(diff);
                lvl.oracle_pass = Some(ok);
            }
            Some(OracleSummary {
                tolerance: opts.tolerance,
                passed,
                x_max: d.x_max,
                n_points: d.n_points,
                inner_boundary: inner_label(d.inner).into(),
                warnings: r.warnings.iter().map(ToString::to_string).collect(),
            })
        }
    };
    Ok(SpectrumReport {
        params: ParamReport::from(problem),
        levels,
        oracle: summary,
    })
}

pub fn spectrum_csv(r: &SpectrumReport) -> String {
    let closed = r.levels.iter().any(|l| l.closed_form.is_some());
    let oracle = r.oracle.is_some();
    let mut header = vec!["n", "energy", "q_root"];
    if closed {
        header.extend(["closed_form", "closed_form_diff"]);
    }
    if oracle {
        header.extend(["oracle", "oracle_error_bar", "oracle_diff", "oracle_pass"]);
    }
    let mut t = Table::new(&header);
    for l in &r.levels {
        let mut row = vec![l.n.to_string(), float(l.energy), float(l.q_root)];
        if closed {
            row.extend([optional(l.closed_form), optional(l.closed_form_diff)]);
        }
        if oracle {
            row.extend([
                optional(l.oracle),
                optional(l.oracle_error_bar),
                optional(l.oracle_diff),
                l.oracle_pass.map(|b| b.to_string()).unwrap_or_default(),
            ]);
        }
        t.row(&row);
    }
    t.finish()
}

pub fn run_spectrum(args: &SpectrumArgs, tolerance: f64) -> Result<(), Failure> {
    let problem = args.params.problem()?;
    let oracle = args.verify.then_some(OracleOptions {
        tolerance,
        points: args.points,
        x_max: args.x_max,
    });
    let report = spectrum_report(&problem, oracle)?;
    let text = match args.out.format {
        Format::Csv => spectrum_csv(&report),
        Format::Json => output::json(&report),
    };
    output::emit(&text, args.out.output.as_deref())?;
    if let Some(o) = &report.oracle {
        for w in &o.warnings {
            eprintln!("warning: {w}");
        }
        if !o.passed {
            return Err(Failure::Verification(
                "oracle disagrees with the exact energies beyond tolerance".into(),
            ));
        }
    }
    Ok(())
}

/// Requested wavefunction grid; `None` edges take the defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRequest {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub points: usize,
}

impl GridRequest {
    fn resolve(&self, epsilon: f64) -> (f64, f64) {
        // εx⁴/64 = −200
        let x_max = self.x_max.unwrap_or_else(|| (12800.0 / -epsilon).powf(0.25));
        (self.x_min.unwrap_or(1e-3 * x_max), x_max)
    }
}

/// Writes `<prefix><n>.csv` for each level and returns the node summary.
pub fn write_wavefunctions(
    problem: &Problem,
    grid: GridRequest,
    normalize: bool,
    dir: &Path,
    prefix: &str,
) -> Result<NodeReport, Failure> {
    let sp = solve(problem)?;
    let (x_min, x_max) = grid.resolve(problem.bhe.epsilon);
    if !(x_min > 0.0) {
        return Err(Failure::Usage(format!("--x-min must be positive, got {x_min}")));
    }
    let xs = uniform_grid(x_min, x_max, grid.points).stage("wavefunction grid")?;
    output::create_dir(dir)?;
    let mut levels = Vec::with_capacity(sp.levels.len());
    for level in &sp.levels {
        let w = build_wavefunction(level, &problem.bhe).stage("wavefunction")?;
        let f = GridFunction::sample(&w, &xs).stage("wavefunction evaluation")?;
        if let Some(x) = f.x().iter().zip(f.values()).find(|(_, v)| !v.is_finite()).map(|(x, _)| x) {
            return Err(Failure::Numerical(format!(
                "wavefunction evaluation: psi_{} is not finite at x = {x:e}",
                level.n
            )));
        }
        let nodes = count_nodes(&w, &default_node_grid(&w, NODE_GRID_POINTS).stage("node grid")?)
            .stage("node count")?;
        let norm_squared = normalize.then(|| f.norm_squared());
        let mut header = vec!["x", "psi"];
        if normalize {
            header.push("psi_normalized");
        }
        let mut t = Table::new(&header);
        let scale = norm_squared.map(|n| n.sqrt().recip());
        for (x, v) in f.x().iter().zip(f.values()) {
            let mut row = vec![float(*x), float(*v)];
            if let Some(c) = scale {
                row.push(float(v * c));
            }
            t.row(&row);
        }
        let file = format!("{prefix}{}.csv", level.n);
        output::write_file(&dir.join(&file), &t.finish())?;
        levels.push(NodeLevel {
            n: level.n,
            energy: level.energy,
            nodes,
            file,
            norm_squared,
        });
    }
    Ok(NodeReport {
        params: ParamReport::from(problem),
        grid: GridReport {
            x_min,
            x_max,
            points: grid.points,
        },
        levels,
    })
}

pub fn run_wavefunction(args: &WavefunctionArgs) -> Result<(), Failure> {
    let problem = args.params.problem()?;
    let grid = GridRequest {
        x_min: args.x_min,
        x_max: args.x_max,
        points: args.points,
    };
    let report = write_wavefunctions(&problem, grid, args.normalize, &args.output_dir, "psi_")?;
    output::write_file(&args.output_dir.join("nodes.json"), &output::json(&report))
}

pub fn potential_report(args: &PotentialArgs) -> Result<PotentialReport, Failure> {
    let p = args.params.bhe()?;
    let m = TransformExponent::parse(&args.m).stage("transform exponent")?;
    let case = TransformCase::new(m).with_sigma(args.sigma).with_shift(args.x0);
    let gen = potential_from_bhe(&p, &AccessoryParam(args.q), &case).stage("potential")?;
    let x = uniform_grid(args.x_min, args.x_max, args.points).stage("potential grid")?;
    let v = x
        .iter()
        .map(|&x| gen.eval(x))
        .collect::<heun_sextic::Result<Vec<f64>>>()
        .stage("potential evaluation")?;
    let terms = gen
        .terms
        .iter()
        .map(|t| match &t.shape {
            TermShape::Power(r) => TermReport {
                shape: "power".into(),
                exponent: r.to_string(),
                coefficient: t.coefficient,
            },
            TermShape::Exponential(k) => TermReport {
                shape: "exponential".into(),
                exponent: k.to_string(),
                coefficient: t.coefficient,
            },
        })
        .collect();
    let note = (m != TransformExponent::Half).then(|| {
        format!(
            "transform exponent m = {}: potential terms only, no bound states are computed",
            m.label()
        )
    });
    Ok(PotentialReport {
        m: m.label().into(),
        sigma: args.sigma,
        x0: args.x0,
        q: args.q,
        energy: gen.energy,
        terms,
        note,
        x,
        v,
    })
}

pub fn potential_csv(r: &PotentialReport) -> String {
    let mut t = Table::new(&["x", "v"]);
    if let Some(note) = &r.note {
        t.comment(note);
        t.comment(&format!("energy {}", float(r.energy)));
        for term in &r.terms {
            let base = if term.shape == "power" {
                format!("(x+x0)^({})", term.exponent)
            } else {
                format!("exp({}(x+x0)/sigma)", term.exponent)
            };
            t.comment(&format!("term {} * {base}", float(term.coefficient)));
        }
    }
    for (x, v) in r.x.iter().zip(&r.v) {
        t.row(&[float(*x), float(*v)]);
    }
    t.finish()
}

pub fn run_potential(args: &PotentialArgs) -> Result<(), Failure> {
    let report = potential_report(args)?;
    let text = match args.out.format {
        Format::Csv => potential_csv(&report),
        Format::Json => output::json(&report),
    };
    output::emit(&text, args.out.output.as_deref())
}

/// The reference problem: `a = s = 1`, `M = 3`.
pub fn reference_problem() -> Result<Problem, Failure> {
    Problem::from_qes(QesParams::reduced(1.0, 1.0, 3).stage("parameters")?)
}

/// Writes the spectrum, potential and wavefunction data for the reference
/// problem into `dir`.
pub fn run_figures(dir: &Path) -> Result<(), Failure> {
    let problem = reference_problem()?;
    output::create_dir(dir)?;
    let spectrum = spectrum_report(&problem, None)?;
    output::write_file(&dir.join("reference_spectrum.csv"), &spectrum_csv(&spectrum))?;
    output::write_file(&dir.join("reference_spectrum.json"), &output::json(&spectrum))?;
    let potential = PotentialArgs {
        params: crate::args::ParamArgs {
            a: Some(problem.qes.a),
            s: Some(problem.qes.s),
            order: Some(problem.order()),
            ..Default::default()
        },
        out: Default::default(),
        m: "1/2".into(),
        sigma: 1.0,
        x0: 0.0,
        q: 0.0,
        x_min: 0.05,
        x_max: 3.0,
        points: 500,
    };
    output::write_file(&dir.join("reference_potential.csv"), &potential_csv(&potential_report(&potential)?))?;
    let grid = GridRequest {
        x_min: Some(0.003),
        x_max: Some(3.0),
        points: 1000,
    };
    let nodes = write_wavefunctions(&problem, grid, false, dir, "reference_psi_")?;
    output::write_file(&dir.join("reference_nodes.json"), &output::json(&nodes))
}
