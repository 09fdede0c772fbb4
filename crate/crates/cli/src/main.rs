//! `hoterm`: command-line driver for the termination prover.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hoterm::criteria::{Precedence, Technique};
use hoterm::prover::{
    emit, prove_bytes, render_pfp, render_sdps, OutputFormat, ProverConfig, EXIT_INPUT_ERROR,
};

/// Step bound used when `--disprove` is given without a value.
const DEFAULT_DISPROVE_STEPS: &str = "10";

#[derive(Parser, Debug)]
#[command(
    name = "hoterm",
    version,
    about = "Termination prover for higher-order rewrite systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a `.hrs` file. Exit status: 0 terminating, 1 nonterminating, 2 maybe, 3 input error.
    Prove(ProveArgs),
}

#[derive(Args, Debug)]
struct ProveArgs {
    /// Problem file in the `.hrs` format.
    file: PathBuf,
    /// Print the safe sets and the plain function-passing check.
    #[arg(long)]
    pfp: bool,
    /// Print the static dependency pairs.
    #[arg(long)]
    sdp: bool,
    /// Write the dependency graph in DOT format to this file.
    #[arg(long, value_name = "FILE")]
    graph_out: Option<PathBuf>,
    /// Print the proof as JSON (same as `--format json`).
    #[arg(long, conflicts_with = "format")]
    json: bool,
    /// Output format: text, json or dot.
    #[arg(long, value_name = "FORMAT")]
    format: Option<String>,
    /// Search for a loop when termination is not proven.
    #[arg(long, value_name = "STEPS", num_args = 0..=1, default_missing_value = DEFAULT_DISPROVE_STEPS)]
    disprove: Option<usize>,
    /// Longest position sequence tried for projections.
    #[arg(long, value_name = "N")]
    max_pi_depth: Option<usize>,
    /// Techniques in the order they are tried, comma separated (subterm, redpair).
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    techniques: Option<Vec<Technique>>,
    /// Path order precedence, highest first, comma separated; `auto` searches.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    precedence: Option<Vec<String>>,
    /// TOML file with `techniques`, `max_pi_depth`, `precedence` and `disprove`.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

fn load_config(path: &Path) -> Result<ProverConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn build_config(args: &ProveArgs) -> Result<ProverConfig, String> {
    let mut config = match &args.config {
        Some(path) => load_config(path)?,
        None => ProverConfig::default(),
    };
    if let Some(n) = args.max_pi_depth {
        config.analysis.max_pi_depth = n;
    }
    if let Some(t) = &args.techniques {
        config.analysis.techniques = t.clone();
    }
    if let Some(p) = &args.precedence {
        config.analysis.precedence = match p.as_slice() {
            [one] if one == "auto" => Precedence::Auto,
            list => Precedence::Explicit(list.iter().map(|s| s.trim().to_string()).collect()),
        };
    }
    if args.disprove.is_some() {
        config.disprove = args.disprove;
    }
    Ok(config)
}

fn run(args: &ProveArgs) -> Result<i32, String> {
    let config = build_config(args)?;
    let format = match (&args.format, args.json) {
        (_, true) => OutputFormat::Json,
        (Some(f), false) => f.parse().map_err(|e| format!("{e}"))?,
        (None, false) => OutputFormat::Text,
    };
    let bytes = fs::read(&args.file).map_err(|e| format!("{}: {e}", args.file.display()))?;
    let analysis =
        prove_bytes(&bytes, &config).map_err(|e| format!("{}: {e}", args.file.display()))?;

    if let Some(path) = &args.graph_out {
        let dot = emit(&analysis, OutputFormat::Dot).map_err(|e| e.to_string())?;
        fs::write(path, dot).map_err(|e| format!("{}: {e}", path.display()))?;
    }

    let output = if (args.pfp || args.sdp) && format == OutputFormat::Text {
        let proof = analysis.proof_object();
        let mut out = String::new();
        if args.pfp {
            out.push_str(&render_pfp(&proof));
        }
        if args.sdp {
            out.push_str(&render_sdps(&proof));
        }
        out.push_str(&format!("Verdict: {}\n", analysis.verdict.label()));
        out
    } else {
        emit(&analysis, format).map_err(|e| e.to_string())?
    };
    print!("{output}");
    Ok(analysis.verdict.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Prove(args) = cli.command;
    let code = match run(&args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("hoterm: {message}");
            EXIT_INPUT_ERROR
        }
    };
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> ProveArgs {
        let mut argv = vec!["hoterm", "prove", "x.hrs"];
        argv.extend_from_slice(extra);
        let Command::Prove(a) = Cli::parse_from(argv).command;
        a
    }

    #[test]
    fn bare_disprove_uses_default_bound() {
        assert_eq!(args(&["--disprove"]).disprove, Some(10));
        assert_eq!(args(&["--disprove", "25"]).disprove, Some(25));
        assert_eq!(args(&[]).disprove, None);
    }

    #[test]
    fn lists_split_on_commas() {
        let a = args(&[
            "--techniques",
            "redpair,subterm",
            "--precedence",
            "mul,add,s",
        ]);
        let c = build_config(&a).unwrap();
        assert_eq!(
            c.analysis.techniques,
            vec![Technique::Redpair, Technique::Subterm]
        );
        assert_eq!(
            c.analysis.precedence,
            Precedence::Explicit(vec!["mul".into(), "add".into(), "s".into()])
        );
    }

    #[test]
    fn auto_precedence_keyword() {
        let c = build_config(&args(&["--precedence", "auto"])).unwrap();
        assert_eq!(c.analysis.precedence, Precedence::Auto);
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
