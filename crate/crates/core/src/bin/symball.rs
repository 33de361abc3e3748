use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use symball::harness::{self, campaign, CampaignConfig, Format};

#[derive(Parser)]
#[command(name = "symball", version, about = "Symplectic spectra, Williamson forms and projections of symplectic balls")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Symplectic spectrum of an SPD matrix and whether M + iJ is PSD.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
    },
    /// Williamson normal form M = S^T D S.
    Williamson {
        #[arg(long)]
        input: PathBuf,
    },
    /// Project S(B(R)) onto the first n_A degrees of freedom, or onto a
    /// complex subspace.
    Project {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        na: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Spanning vectors of a complex subspace.
        #[arg(long)]
        subspace: Option<PathBuf>,
    },
    /// Run the randomized verification campaign.
    Verify {
        /// Single number of degrees of freedom (default: 1, 2 and 3).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = campaign::DEFAULT_CASES)]
        cases: usize,
        #[arg(long, default_value_t = campaign::DEFAULT_SPREAD)]
        spread: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Boundary samples per containment test.
        #[arg(long, default_value_t = campaign::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Write a random symplectic matrix.
    GenSp {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    let result = match cli.command {
        Command::Spectrum { input } => harness::spectrum(&input, format),
        Command::Williamson { input } => harness::williamson_cmd(&input, format),
        Command::Project { input, na, radius, subspace } => {
            harness::project(&input, na, radius, subspace.as_deref(), format)
        }
        Command::Verify { n, cases, spread, seed, samples } => {
            let ns = n.map_or_else(|| campaign::DEFAULT_NS.to_vec(), |n| vec![n]);
            harness::verify(&CampaignConfig { ns, cases, spread, seed, samples }, format)
        }
        Command::GenSp { n, spread, seed, out } => harness::gen_sp(n, spread, seed, out.as_deref()),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("symball: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
