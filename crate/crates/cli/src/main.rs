mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hamnve", version, about = "Quartic NVE classification of two-degree-of-freedom potentials")]
struct Cli {
    /// Print the JSON schema of every subcommand's report and exit.
    #[arg(long)]
    help_schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conditions on (alpha, phi) for a degree-d polynomial NVE coefficient.
    Conditions {
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Whether a potential belongs to the quartic-NVE family.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        #[command(flatten)]
        out: Output,
    },
    /// The specialized equations for a quartic alpha.
    DeriveOdes {
        #[arg(long, value_delimiter = ',', default_value = "L,NL,L2,NL2")]
        emit: Vec<commands::Equation>,
        #[command(flatten)]
        out: Output,
    },
    /// Rational solution basis of the centered linear equation on one branch.
    Kernel {
        #[arg(long, default_value = "generic")]
        case: String,
        #[arg(long, default_value_t = 8)]
        degree_bound: u32,
        /// Use the tabulated basis instead of solving for one.
        #[arg(long)]
        tabulated: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Certify that phi' = 0 is forced on every branch.
    VerifyQuartic {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the certificate here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "derived")]
        nonlinear: commands::Source,
        /// Scale the 72*e*x coefficient of the quadratic equation to 71*e*x.
        #[arg(long)]
        mutate: bool,
        #[arg(long, default_value_t = 8)]
        degree_bound: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Integrate Hamilton's equations with fixed-step RK4.
    Simulate {
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        /// x1,y1,x2,y2
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long = "T", default_value_t = 10.0)]
        t_end: f64,
        /// CSV destination (t,x1,y1,x2,y2,H).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also test a(t) for polynomial degree at most d.
        #[arg(long)]
        degree_test: Option<usize>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Test whether a(t) along a curve in the invariant plane is a polynomial of degree at most d.
    DegreeTest {
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// x1,y1
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long = "T", default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        stride: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.help_schema {
        println!("{}", serde_json::to_string_pretty(&report::schemas()).expect("static schema"));
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(2);
    };
    let (outcome, format) = match command {
        Command::Conditions { degree, out } => (commands::conditions(degree), out.format),
        Command::Classify { potential, out } => (commands::classify(&potential), out.format),
        Command::DeriveOdes { emit, out } => (commands::derive_odes(&emit), out.format),
        Command::Kernel {
            case,
            degree_bound,
            tabulated,
            out,
        } => (commands::kernel(&case, degree_bound, tabulated), out.format),
        Command::VerifyQuartic {
            trials,
            seed,
            json,
            nonlinear,
            mutate,
            degree_bound,
            out,
        } => (
            commands::verify(commands::VerifyArgs {
                trials,
                seed,
                json,
                nonlinear,
                mutate,
                degree_bound,
            }),
            out.format,
        ),
        Command::Simulate {
            potential,
            init,
            dt,
            t_end,
            out,
            degree_test,
            tol,
            output,
        } => (
            commands::simulate(commands::SimulateArgs {
                potential,
                init,
                dt,
                t_end,
                out,
                degree_test,
                tol,
            }),
            output.format,
        ),
        Command::DegreeTest {
            potential,
            degree,
            init,
            dt,
            t_end,
            tol,
            stride,
            out,
        } => (
            commands::degree_test(commands::DegreeArgs {
                potential,
                degree,
                init,
                dt,
                t_end,
                tol,
                stride,
            }),
            out.format,
        ),
    };
    match outcome {
        Ok((report, text)) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable report") + "\n",
                Format::Text => text,
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
