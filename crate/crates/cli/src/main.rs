use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hhgap_cli::{run, Command, Format, JobSpec, Kind, DEFAULT_MAX_DEGREE};
use hhgap_core::criteria::Directions;
use hhgap_core::hochschild::Strategy;

#[derive(Parser)]
#[command(name = "hhgap", version, about = "Hochschild (co)homology and smoothness gap criteria")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args, Clone)]
struct Common {
    /// Presentation file, or corpus:NAME
    #[arg(long)]
    algebra: String,
    /// Coefficient module file, or S
    #[arg(long)]
    module: Option<String>,
    #[arg(long, visible_alias = "cutoff", default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    #[arg(long, default_value = "auto")]
    strategy: Strategy,
    #[arg(long, value_enum, default_value_t = Fmt::Text)]
    format: Fmt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Homology,
    Cohomology,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ResolveKind {
    Koszul,
    Tate,
    Minimal,
}

#[derive(Subcommand)]
enum Sub {
    /// Koszul complex, Tate stage two, or minimal free resolution
    Resolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ResolveKind::Minimal)]
        kind: ResolveKind,
    },
    /// Hochschild homology table
    Hh {
        #[command(flatten)]
        common: Common,
        /// Also evaluate the comparison maps from differential forms
        #[arg(long)]
        hkr: bool,
    },
    /// Hochschild cohomology table
    Hcoh {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        hkr: bool,
    },
    /// Deviations of the declared surjection, or of the diagonal
    Deviations {
        #[command(flatten)]
        common: Common,
    },
    /// p-closedness certificates
    Closed {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        p: Vec<u8>,
    },
    /// Gap criteria for smoothness
    SmoothCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Dir::Both)]
        direction: Dir,
        /// Experimental interval length; never certifies
        #[arg(long)]
        interval_override: Option<usize>,
    },
    /// Dimensions from the normalized bar complex
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Dir::Both)]
        direction: Dir,
    },
    /// Bundled presentations and their expected-result digests
    Corpus {
        /// Recompute every expectation
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Fmt::Text)]
        format: Fmt,
    },
}

fn directions(d: Dir) -> Directions {
    match d {
        Dir::Homology => Directions::Homology,
        Dir::Cohomology => Directions::Cohomology,
        Dir::Both => Directions::Both,
    }
}

fn format(f: Fmt) -> Format {
    match f {
        Fmt::Text => Format::Text,
        Fmt::Json => Format::Json,
    }
}

fn job(command: Command, c: Common) -> JobSpec {
    JobSpec {
        command,
        algebra: Some(c.algebra),
        module: c.module,
        max_degree: c.max_degree,
        strategy: c.strategy,
        format: format(c.format),
        interval_override: None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match cli.command {
        Sub::Resolve { common, kind } => {
            let kind = match kind {
                ResolveKind::Koszul => Kind::Koszul,
                ResolveKind::Tate => Kind::Tate,
                ResolveKind::Minimal => Kind::Minimal,
            };
            job(Command::Resolve { kind }, common)
        }
        Sub::Hh { common, hkr } => job(Command::Hh { hkr }, common),
        Sub::Hcoh { common, hkr } => job(Command::Hcoh { hkr }, common),
        Sub::Deviations { common } => job(Command::Deviations, common),
        Sub::Closed { common, p } => {
            let p = if p.is_empty() { vec![1, 2] } else { p };
            job(Command::Closed { p }, common)
        }
        Sub::SmoothCheck {
            common,
            direction,
            interval_override,
        } => {
            let mut j = job(Command::SmoothCheck { directions: directions(direction) }, common);
            j.interval_override = interval_override;
            j
        }
        Sub::Oracle { common, direction } => job(Command::Oracle { directions: directions(direction) }, common),
        Sub::Corpus { verify, format: f } => {
            let mut j = JobSpec::new(Command::Corpus { verify });
            j.format = format(f);
            j
        }
    };
    match run(&spec) {
        Ok(report) => {
            print!("{}", report.render(spec.format));
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
