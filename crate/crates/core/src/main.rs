use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use stackyrr::cli::{self, input, Command, EulerTarget, Format, JobSpec, Options};
use stackyrr::eulerlab::EulerVariant;
use stackyrr::Result;

/// Exact Euler characteristics, inertia and Riemann–Roch for finite quotient
/// stacks and orbifold curves.
///
/// Inputs are JSON files or the names of embedded fixtures.
#[derive(Parser)]
#[command(name = "stackyrr", version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// Include independent oracle checks; any disagreement exits with status 4.
    #[arg(long, global = true)]
    oracle: bool,

    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Top,
    Orb,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugacy classes of a group.
    Classes {
        #[arg(long)]
        group: String,
    },
    /// The m-th iterated inertia of a G-set.
    Inertia {
        #[arg(long)]
        gset: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Euler characteristics and the ladder check.
    #[command(group(ArgGroup::new("target").required(true).args(["gset", "curve"])))]
    Euler {
        #[arg(long)]
        gset: Option<String>,
        #[arg(long)]
        curve: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
    },
    /// The series chi_0, chi_1, ..., chi_max.
    Series {
        #[arg(long)]
        gset: String,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
    },
    /// Riemann–Roch for a divisor on an orbifold curve.
    Rr {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        divisor: String,
    },
    /// The devissage matrix, and phi and the pushforward of a bundle.
    #[command(group(ArgGroup::new("input").required(true).args(["gset", "bundle"])))]
    Devissage {
        #[arg(long)]
        gset: Option<String>,
        #[arg(long)]
        bundle: Option<String>,
    },
    /// Weighted Euler characteristics and Euler determinants.
    Weighted {
        #[arg(long)]
        strata: String,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
    },
    /// Reports for embedded fixtures (all of them by default).
    Report {
        #[arg(long = "fixture")]
        fixtures: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
    },
}

fn job(args: &Args) -> Result<JobSpec> {
    let mut m_max = 3;
    let command = match &args.command {
        Cmd::Classes { group } => Command::Classes { group: Arc::new(input::group(group)?) },
        Cmd::Inertia { gset, m } => Command::Inertia { gset: Arc::new(input::gset(gset)?), m: *m },
        Cmd::Euler { gset, curve, max_m } => {
            m_max = *max_m;
            let target = match (gset, curve) {
                (Some(g), _) => EulerTarget::GSet(Arc::new(input::gset(g)?)),
                (None, Some(c)) => EulerTarget::Curve(input::curve(c)?),
                (None, None) => unreachable!("clap requires one"),
            };
            Command::Euler { target }
        }
        Cmd::Series { gset, max_m } => {
            m_max = *max_m;
            Command::Series { gset: Arc::new(input::gset(gset)?) }
        }
        Cmd::Rr { curve, divisor } => {
            let c = input::curve(curve)?;
            Command::Rr { divisor: input::divisor(divisor, &c)? }
        }
        Cmd::Devissage { gset, bundle } => match (gset, bundle) {
            (_, Some(b)) => {
                let b = input::bundle(b)?;
                Command::Devissage { gset: b.base().clone(), bundle: Some(b) }
            }
            (Some(g), None) => Command::Devissage { gset: Arc::new(input::gset(g)?), bundle: None },
            (None, None) => unreachable!("clap requires one"),
        },
        Cmd::Weighted { strata, variant } => Command::Weighted {
            strata: input::strata(strata)?,
            variant: variant.map(|v| match v {
                Variant::Top => EulerVariant::Top,
                Variant::Orb => EulerVariant::Orb,
            }),
        },
        Cmd::Report { fixtures, max_m } => {
            m_max = *max_m;
            Command::Report { fixtures: fixtures.clone() }
        }
    };
    Ok(JobSpec {
        command,
        options: Options {
            m_max,
            oracle: args.oracle,
            format: match args.format {
                OutFormat::Json => Format::Json,
                OutFormat::Table => Format::Table,
            },
            output_path: args.output.clone(),
        },
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = cli::apply_env_caps().and_then(|()| job(&args)).and_then(|spec| {
        let outcome = cli::run(&spec)?;
        let text = outcome.render(spec.options.format);
        match &spec.options.output_path {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| stackyrr::Error::Parse(format!("cannot write {p}: {e}")))?,
            None => print!("{text}"),
        }
        Ok(outcome.status)
    });
    match outcome {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("stackyrr: {e}");
            ExitCode::from(e.exit_status() as u8)
        }
    }
}
