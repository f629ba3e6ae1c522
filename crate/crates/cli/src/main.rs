use std::process::ExitCode;

use clap::Parser;

use heun_sextic::params::CentrifugalForm;
use heun_sextic_cli::args::{Cli, Command};
use heun_sextic_cli::verify::{self, VerifyOptions};
use heun_sextic_cli::{commands, output, resolve_tolerance, Failure, TOL_ENV};

fn tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    let env = std::env::var(TOL_ENV).ok();
    resolve_tolerance(flag, env.as_deref())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum(args) => commands::run_spectrum(&args, tolerance(args.tol)?),
        Command::Wavefunction(args) => commands::run_wavefunction(&args),
        Command::Potential(args) => commands::run_potential(&args),
        Command::Figures(args) => commands::run_figures(&args.output_dir),
        Command::Verify(args) => {
            let opts = VerifyOptions {
                tolerance: tolerance(args.tol)?,
                seed: args.seed,
                centrifugal: if args.inject_shifted {
                    CentrifugalForm::Shifted
                } else {
                    CentrifugalForm::Standard
                },
            };
            let report = verify::run(&opts);
            let text = output::json(&report);
            if let Some(path) = &args.output {
                output::write_file(path, &text)?;
            }
            output::emit(&text, None)?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
