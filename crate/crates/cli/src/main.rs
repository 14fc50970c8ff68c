//! `qec`: inspect stabilizer codes and run seeded logical-error-rate simulations.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qec_core::code::{DistanceResult, StabilizerCode};
use qec_core::decoders::{build_lookup, Decoder, DecoderKind};
use qec_core::library;
use qec_core::montecarlo::{self, CycleMode, SimulationReport};
use qec_core::pauli::{enumerate_up_to, Letter};
use qec_core::{NoiseModel, QecError};

#[derive(Parser, Debug)]
#[command(name = "qec", version, about = "Stabilizer code tables, decoders and Monte Carlo sweeps")]
struct Cli {
    /// Worker threads for simulations (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Built-in code catalogue.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Check every structural property of a code.
    Validate { code: String },
    /// Tab-separated error/syndrome rows, by weight then lexicographic order.
    SyndromeTable {
        code: String,
        #[arg(long, default_value_t = 1)]
        max_weight: usize,
        #[arg(long, default_value_t = 0)]
        min_weight: usize,
        /// Restrict errors to these letters, e.g. `X` or `XZ`.
        #[arg(long, default_value = "XYZ")]
        letters: String,
    },
    /// Exhaustive distance search.
    Distance {
        code: String,
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Export a minimum-weight lookup table as JSON.
    Lookup {
        code: String,
        #[arg(long)]
        max_weight: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Logical error rate at one rate or over a grid.
    Simulate(SimulateArgs),
    /// Surface-code threshold crossing scan.
    Threshold(ThresholdArgs),
}

#[derive(Subcommand, Debug)]
enum CodesAction {
    /// One line per built-in code: name, n, k, d, generator count.
    List,
    /// Full code description as JSON.
    Show { code: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NoiseKind {
    #[value(name = "iid_x")]
    IidX,
    #[value(name = "iid_xz")]
    IidXz,
    Depolarizing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    p_start: Option<f64>,
    #[arg(long)]
    p_end: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Space grid points evenly in log p.
    #[arg(long)]
    log_grid: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Built-in name or path to a code JSON file.
    #[arg(long)]
    code: String,
    #[arg(long, value_parser = parse_decoder, default_value = "lookup")]
    decoder: DecoderKind,
    #[arg(long, value_enum, default_value_t = NoiseKind::IidX)]
    noise: NoiseKind,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    px: Option<f64>,
    #[arg(long)]
    pz: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Discard trials with a nonzero syndrome instead of decoding.
    #[arg(long)]
    post_select: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    /// Comma-separated surface code distances.
    #[arg(long, value_delimiter = ',', default_values_t = [3, 5])]
    lambdas: Vec<usize>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_decoder(s: &str) -> Result<DecoderKind, String> {
    s.parse().map_err(|e: QecError| e.to_string())
}

/// A failure with its exit status and greppable code.
struct Failure {
    exit: u8,
    code: &'static str,
    message: String,
}

impl Failure {
    fn config(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            exit: 2,
            code,
            message: message.into(),
        }
    }
}

impl From<QecError> for Failure {
    fn from(e: QecError) -> Self {
        let (exit, code) = match &e {
            QecError::UnknownCode(_) => (2, "E_UNKNOWN_CODE"),
            QecError::Config(_) => (2, "E_CONFIG"),
            QecError::Probability(_) => (2, "E_PROBABILITY"),
            QecError::Parse { .. } | QecError::Serde(_) => (2, "E_PARSE"),
            QecError::SurfaceTooSmall(_) => (2, "E_CONFIG"),
            QecError::NoLayout(_) => (2, "E_DECODER_MISMATCH"),
            QecError::LookupTooLarge(_) => (2, "E_LOOKUP_TOO_LARGE"),
            QecError::InvalidCode(_) => (2, "E_INVALID_CODE"),
            QecError::NoCrossing(..) => (3, "E_NO_CROSSING"),
            QecError::InstanceTooLarge { .. } => (3, "E_INSTANCE_TOO_LARGE"),
            _ => (3, "E_RUNTIME"),
        };
        Self {
            exit,
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn load_code(name: &str) -> CliResult<StabilizerCode> {
    if name.ends_with(".json") {
        let text = fs::read_to_string(name).map_err(|e| Failure::config("E_IO", format!("{name}: {e}")))?;
        Ok(StabilizerCode::from_json(&text)?)
    } else {
        Ok(library::by_name(name)?)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            exit: 3,
            code: "E_IO",
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure {
                    exit: 3,
                    code: "E_IO",
                    message: e.to_string(),
                })
        }
    }
}

fn parse_letters(text: &str) -> CliResult<Vec<Letter>> {
    text.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            other => Err(Failure::config("E_CONFIG", format!("unknown Pauli letter {other:?}"))),
        })
        .collect()
}

fn codes_list() -> String {
    let mut out = String::from("name\tn\tk\td\tm\n");
    for code in library::all_builtin() {
        let d = code.declared_distance().map_or_else(|| "-".to_string(), |d| d.to_string());
        out.push_str(&format!("{}\t{}\t{}\t{d}\t{}\n", code.name(), code.n(), code.k(), code.m()));
    }
    out
}

fn syndrome_table(code: &StabilizerCode, min_weight: usize, max_weight: usize, letters: &[Letter]) -> String {
    let mut out = String::from("error\tsyndrome\n");
    for e in enumerate_up_to(code.n(), max_weight, letters).filter(|e| e.weight() >= min_weight) {
        let s = code.syndrome(&e).expect("enumerated errors match the code size");
        out.push_str(&format!("{}\t{s}\n", e.to_sparse_string()));
    }
    out
}

fn grid(args: &GridArgs) -> CliResult<Option<Vec<f64>>> {
    match (args.p_start, args.p_end, args.steps) {
        (None, None, None) if !args.log_grid => Ok(None),
        (Some(start), Some(end), Some(steps)) => Ok(Some(montecarlo::p_grid(start, end, steps, args.log_grid)?)),
        _ => Err(Failure::config(
            "E_CONFIG",
            "a grid needs all of --p-start, --p-end and --steps",
        )),
    }
}

/// Validated simulation settings.
struct RunConfig {
    code: StabilizerCode,
    decoder: Decoder,
    noise: NoiseModel,
    /// Explicit points; `None` means a single point at the model's own rates.
    grid: Option<Vec<f64>>,
    trials: u64,
    seed: u64,
    mode: CycleMode,
}

impl RunConfig {
    fn from_args(args: &SimulateArgs) -> CliResult<Self> {
        let code = load_code(&args.code)?;
        if args.decoder == DecoderKind::Mwpm && code.layout().is_none() {
            return Err(Failure::config(
                "E_DECODER_MISMATCH",
                format!("mwpm needs a surface code, {} has no lattice layout", code.name()),
            ));
        }
        if args.trials == 0 {
            return Err(Failure::config("E_CONFIG", "--trials must be at least 1"));
        }
        let grid = grid(&args.grid)?;
        let rate = |explicit: Option<f64>| -> CliResult<f64> {
            explicit.or(args.p).or(grid.as_ref().map(|g| g[0])).ok_or_else(|| {
                Failure::config("E_CONFIG", "give --p (or --px/--pz), or a --p-start/--p-end/--steps grid")
            })
        };
        let noise = match args.noise {
            NoiseKind::IidX => NoiseModel::iid_x(rate(args.px)?)?,
            NoiseKind::IidXz => NoiseModel::iid_xz(rate(args.px)?, rate(args.pz)?)?,
            NoiseKind::Depolarizing => NoiseModel::depolarizing(rate(None)?)?,
        };
        let decoder = Decoder::build(args.decoder, &code)?;
        Ok(Self {
            code,
            decoder,
            noise,
            grid,
            trials: args.trials,
            seed: args.seed,
            mode: if args.post_select {
                CycleMode::PostSelect
            } else {
                CycleMode::Correct
            },
        })
    }

    fn run(&self) -> CliResult<SimulationReport> {
        match &self.grid {
            Some(ps) => Ok(montecarlo::sweep(
                &self.code,
                &self.decoder,
                &self.noise,
                ps,
                self.trials,
                self.seed,
                self.mode,
            )?),
            None => {
                let start = std::time::Instant::now();
                let p = match self.noise {
                    NoiseModel::IidX { p } | NoiseModel::Depolarizing { p } => p,
                    NoiseModel::IidXz { px, .. } => px,
                };
                let point = montecarlo::estimate_logical_rate(
                    &self.code,
                    &self.decoder,
                    &self.noise,
                    self.trials,
                    montecarlo::derive_seed(self.seed, 0),
                    self.mode,
                    p,
                )?;
                Ok(SimulationReport {
                    code: self.code.name().to_string(),
                    decoder: self.decoder.kind().name().to_string(),
                    noise: self.noise.to_string(),
                    mode: self.mode,
                    seed: self.seed,
                    points: vec![point],
                    wall_time_s: start.elapsed().as_secs_f64(),
                    version: montecarlo::version_string(),
                })
            }
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Codes { action } => match action {
            CodesAction::List => emit(&None, &codes_list()),
            CodesAction::Show { code } => emit(&None, &(load_code(&code)?.to_json() + "\n")),
        },
        Command::Validate { code } => {
            let report = load_code(&code)?.validate();
            if report.is_valid() {
                emit(&None, &format!("{report}\n"))
            } else {
                let reasons: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
                Err(Failure {
                    exit: 3,
                    code: "E_INVALID_CODE",
                    message: format!("{}: {}", report.code, reasons.join("; ")),
                })
            }
        }
        Command::SyndromeTable {
            code,
            max_weight,
            min_weight,
            letters,
        } => {
            let code = load_code(&code)?;
            let letters = parse_letters(&letters)?;
            emit(&None, &syndrome_table(&code, min_weight, max_weight, &letters))
        }
        Command::Distance { code, max_weight } => {
            let code = load_code(&code)?;
            let text = match code.distance(max_weight.unwrap_or(code.n())) {
                DistanceResult::Found(d) => format!("{}\td={d}\n", code.name()),
                DistanceResult::GreaterThan(w) => format!("{}\td>{w}\n", code.name()),
            };
            emit(&None, &text)
        }
        Command::Lookup { code, max_weight, out } => {
            let code = load_code(&code)?;
            let table = build_lookup(&code, max_weight.unwrap_or(code.n()))?;
            emit(&out, &(table.to_json() + "\n"))
        }
        Command::Simulate(args) => {
            let config = RunConfig::from_args(&args)?;
            let report = config.run()?;
            let text = match args.output.format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json() + "\n",
            };
            emit(&args.output.out, &text)
        }
        Command::Threshold(args) => {
            let ps = grid(&args.grid)?
                .ok_or_else(|| Failure::config("E_CONFIG", "threshold needs --p-start, --p-end and --steps"))?;
            if args.trials == 0 {
                return Err(Failure::config("E_CONFIG", "--trials must be at least 1"));
            }
            let scan = montecarlo::threshold_scan(&args.lambdas, &ps, args.trials, args.seed)?;
            match args.output.format {
                Format::Csv => {
                    eprintln!("threshold {:.5} +- {:.5}", scan.threshold, scan.sigma);
                    emit(&args.output.out, &scan.to_csv())
                }
                Format::Json => emit(&args.output.out, &(scan.to_json() + "\n")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            eprintln!("error[E_USAGE]: {first}");
            return ExitCode::from(2);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error[E_CONFIG]: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error[E_RUNTIME]: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.code, f.message.replace('\n', " "));
            ExitCode::from(f.exit)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_filter() {
        assert_eq!(parse_letters("xz").ok(), Some(vec![Letter::X, Letter::Z]));
        assert!(parse_letters("XQ").is_err());
    }

    #[test]
    fn partial_grid_is_rejected() {
        let g = GridArgs {
            p_start: Some(0.1),
            p_end: None,
            steps: Some(3),
            log_grid: false,
        };
        assert_eq!(grid(&g).err().map(|f| f.exit), Some(2));
        let none = GridArgs {
            p_start: None,
            p_end: None,
            steps: None,
            log_grid: false,
        };
        assert!(matches!(grid(&none), Ok(None)));
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(Failure::from(QecError::UnknownCode("x".into())).exit, 2);
        assert_eq!(Failure::from(QecError::NoCrossing(3, 5)).code, "E_NO_CROSSING");
        assert_eq!(Failure::from(QecError::NoCrossing(3, 5)).exit, 3);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
