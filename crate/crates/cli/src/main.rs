use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pohozaev_core::par::ExecMode;
use pohozaev_core::report::{emit, run, Command, Format, RunConfig, RunError};
use pohozaev_core::scalar::ExactScalar;
use pohozaev_core::suite::{build_named, NamedId, Params, SuiteError};

/// Exact and numerical checks of the bubble identities behind the Pohozaev bounds.
#[derive(Debug, Parser)]
#[command(name = "pohozaev", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run every suite, or the items of one lemma id.
    Verify {
        #[arg(long, conflicts_with = "lemma", required_unless_present = "lemma")]
        all: bool,
        #[arg(long)]
        lemma: Option<String>,
        /// Keep only items of this dimension.
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the I_m^alpha table.
    Table {
        #[arg(long, required = true)]
        integrals: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Sign of the n = 8 bracket over a grid of b values.
    ScanB {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        grid: Vec<ExactScalar>,
        #[command(flatten)]
        common: Common,
    },
    /// Flat Pohozaev identity for the bubble on a half ball.
    Pohozaev {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Print the closed form of a named function as profile text.
    DumpProfile {
        id: String,
        #[arg(long)]
        n: u32,
        /// Free constants as name=value, e.g. a1=3/2.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, ExactScalar)>,
    },
}

fn parse_param(s: &str) -> Result<(String, ExactScalar), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    Ok((k.trim().to_string(), v.parse().map_err(|e| format!("{e}"))?))
}

#[derive(Debug, Args)]
struct Common {
    /// Free constant of the n = 8 radial part.
    #[arg(long, default_value = "-2", allow_hyphen_values = true)]
    b: ExactScalar,
    /// Truncation radii for the n = 6 regressions.
    #[arg(long = "delta", value_delimiter = ',', default_value = "1/100,1/1000,1/10000")]
    deltas: Vec<ExactScalar>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// json, csv or text.
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    output: Option<String>,
    #[arg(long, env = "POHOZAEV_PRECISION_BITS", default_value_t = 53)]
    precision_bits: u32,
    /// Evaluate suite items one after another.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn apply(self, command: Command, n: Option<u32>) -> Result<RunConfig, RunError> {
        let mut c = RunConfig::new(command);
        c.n = n;
        c.b = self.b;
        c.deltas = self.deltas;
        c.tol = self.tol;
        c.seed = self.seed;
        c.format = self.format.parse::<Format>()?;
        c.output = self.output;
        c.precision_bits = self.precision_bits;
        c.exec = if self.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
        Ok(c)
    }
}

fn dump(id: &str, n: u32, params: Vec<(String, ExactScalar)>) -> Result<i32, RunError> {
    let usage = |e: SuiteError| RunError::Usage(e.to_string());
    let id: NamedId = id.parse().map_err(usage)?;
    let f = build_named(id, n, &params.into_iter().collect::<Params>()).map_err(usage)?;
    write_out(None, f.to_string().as_bytes())?;
    Ok(0)
}

fn config(cli: Cli) -> Result<RunConfig, RunError> {
    match cli.command {
        Cmd::DumpProfile { .. } => unreachable!("handled before configuration"),
        Cmd::Verify { all, lemma, n, common } => {
            let cmd = match (all, lemma) {
                (_, Some(id)) => Command::VerifyLemma { id },
                _ => Command::VerifyAll,
            };
            common.apply(cmd, n)
        }
        Cmd::Table { common, .. } => common.apply(Command::TableIntegrals, None),
        Cmd::ScanB { grid, common } => common.apply(Command::ScanB { grid }, None),
        Cmd::Pohozaev { n, r, common } => common.apply(Command::Pohozaev { n, r }, None),
    }
}

fn write_out(path: Option<&str>, bytes: &[u8]) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Io(e.to_string());
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(io),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(io)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Cmd::DumpProfile { id, n, params } => dump(&id, n, params),
        _ => config(cli).and_then(|c| {
            let outcome = run(&c)?;
            let bytes = emit(&outcome.document, c.format)?;
            write_out(c.output.as_deref(), &bytes)?;
            Ok(outcome.exit_code)
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pohozaev: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
