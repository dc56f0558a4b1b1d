//! Argument parsing and dispatch for the `nlof` binary.
//!
//! Kept in a library so tests can drive [`parse_args`] and [`execute`]
//! without spawning processes.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use neighbor_lof::dataset::{
    generate_synthetic, load_csv, save_csv, CsvOptions, Dataset, LabelColumn, SyntheticSpec,
    SyntheticVariant,
};
use neighbor_lof::harness::{
    emit_reports, format_summary_table, run_sweep, KRange, OutputFormat, PipelineOptions,
    PipelineSpec,
};
use neighbor_lof::method::MethodTag;
use neighbor_lof::Error;
use thiserror::Error as ThisError;

/// Exit status for bad command lines.
pub const EXIT_USAGE: u8 = 1;
/// Exit status for problems with the data or its parameters.
pub const EXIT_DATA: u8 = 2;

#[derive(Debug, ThisError)]
pub enum CliError {
    /// Bad command line; the message names the offending token.
    #[error("{0}")]
    Usage(String),
    /// `--help` / `--version`; the text goes to stdout and the exit is clean.
    #[error("{0}")]
    Info(String),
    #[error(transparent)]
    Data(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Info(_) => ExitCode::SUCCESS,
            Self::Usage(_) => ExitCode::from(EXIT_USAGE),
            Self::Data(_) | Self::Io(_) => ExitCode::from(EXIT_DATA),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Generate,
    Run,
    Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv {
        path: PathBuf,
        label: Option<LabelColumn>,
        options: CsvOptions,
    },
    Synthetic(SyntheticSpec),
}

/// A validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub subcommand: Subcommand,
    pub source: DataSource,
    /// Empty for `generate`.
    pub methods: Vec<MethodTag>,
    pub k_range: KRange,
    /// Output directory (`run`/`sweep`) or CSV file (`generate`).
    pub out: Option<PathBuf>,
    pub formats: Vec<OutputFormat>,
    pub normalize: bool,
    pub threads: Option<usize>,
    /// How `generate` writes its CSV.
    pub write_options: CsvOptions,
}

#[derive(Debug, Parser)]
#[command(
    name = "nlof",
    version,
    about = "Neighbor-based local outlier detection experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, ClapSubcommand)]
enum Command {
    /// Write a seeded synthetic dataset to CSV.
    Generate {
        /// data1, data2 or data3.
        #[arg(long, value_name = "VARIANT")]
        synthetic: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Destination CSV file.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Write an `x0,..,label` header row.
        #[arg(long)]
        header: bool,
        #[arg(long, default_value = ",", value_name = "CHAR")]
        delimiter: String,
    },
    /// Evaluate one method over a single k or a k range.
    Run {
        #[command(flatten)]
        source: SourceArgs,
        /// Method tag such as fp-knn-ss.
        #[arg(long, value_name = "TAG")]
        method: String,
        /// `k`, `a..b` or `a..b:stride` (inclusive).
        #[arg(long, value_name = "K")]
        k: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a list of methods over a k range.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated tags, or `all` for the 20-method grid.
        #[arg(long, default_value = "all", value_name = "TAGS")]
        methods: String,
        #[arg(long, default_value = "5..50", value_name = "K")]
        k: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Input CSV, one point per row.
    #[arg(long, value_name = "FILE", conflicts_with = "synthetic")]
    csv: Option<PathBuf>,
    /// Label column: `last`, a zero-based index, or a header name.
    #[arg(long, value_name = "COLUMN", requires = "csv")]
    label: Option<String>,
    /// The CSV has a header row.
    #[arg(long, requires = "csv")]
    header: bool,
    #[arg(long, default_value = ",", value_name = "CHAR")]
    delimiter: String,
    /// data1, data2 or data3.
    #[arg(long, value_name = "VARIANT")]
    synthetic: Option<String>,
    #[arg(long, default_value_t = 7, requires = "synthetic")]
    seed: u64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Min-max scale features to [0, 1] first.
    #[arg(long)]
    normalize: bool,
    /// Report directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma-separated: csv, json.
    #[arg(long, default_value = "csv", value_name = "FORMATS")]
    format: String,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

/// Parses the tokens after the program name.
pub fn parse_args<I, S>(argv: I) -> Result<CliConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let tokens =
        std::iter::once(std::ffi::OsString::from("nlof")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(tokens).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                CliError::Info(e.render().to_string())
            }
            _ => CliError::Usage(e.render().to_string()),
        }
    })?;

    match cli.command {
        Command::Generate {
            synthetic,
            seed,
            out,
            header,
            delimiter,
        } => Ok(CliConfig {
            subcommand: Subcommand::Generate,
            source: DataSource::Synthetic(SyntheticSpec::new(parse_variant(&synthetic)?, seed)),
            methods: Vec::new(),
            k_range: KRange::default(),
            out: Some(out),
            formats: Vec::new(),
            normalize: false,
            threads: None,
            write_options: CsvOptions {
                delimiter: parse_delimiter(&delimiter)?,
                has_header: header,
            },
        }),
        Command::Run {
            source,
            method,
            k,
            output,
        } => build(
            Subcommand::Run,
            source,
            vec![parse_tag(&method)?],
            &k,
            output,
        ),
        Command::Sweep {
            source,
            methods,
            k,
            output,
        } => build(Subcommand::Sweep, source, parse_tags(&methods)?, &k, output),
    }
}

fn build(
    subcommand: Subcommand,
    source: SourceArgs,
    methods: Vec<MethodTag>,
    k: &str,
    output: OutputArgs,
) -> Result<CliConfig, CliError> {
    let k_range: KRange = k.parse().map_err(|_| {
        CliError::Usage(format!(
            "invalid --k value `{k}`; expected k, a..b or a..b:stride"
        ))
    })?;
    let formats = output
        .format
        .split(',')
        .map(|t| {
            t.trim().parse::<OutputFormat>().map_err(|_| {
                CliError::Usage(format!(
                    "unknown format `{}`; expected csv or json",
                    t.trim()
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if output.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(CliConfig {
        subcommand,
        source: parse_source(source)?,
        methods,
        k_range,
        out: output.out,
        formats,
        normalize: output.normalize,
        threads: output.threads,
        write_options: CsvOptions::default(),
    })
}

fn parse_source(args: SourceArgs) -> Result<DataSource, CliError> {
    match (args.csv, args.synthetic) {
        (Some(path), None) => {
            let label = args
                .label
                .as_deref()
                .map(LabelColumn::parse)
                .ok_or_else(|| {
                    CliError::Usage("--csv needs --label to name the 0/1 label column".into())
                })?;
            Ok(DataSource::Csv {
                path,
                label: Some(label),
                options: CsvOptions {
                    delimiter: parse_delimiter(&args.delimiter)?,
                    has_header: args.header,
                },
            })
        }
        (None, Some(v)) => Ok(DataSource::Synthetic(SyntheticSpec::new(
            parse_variant(&v)?,
            args.seed,
        ))),
        (None, None) => Err(CliError::Usage(
            "no dataset: pass --csv FILE or --synthetic VARIANT".into(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--csv and --synthetic are mutually exclusive".into(),
        )),
    }
}

fn parse_variant(token: &str) -> Result<SyntheticVariant, CliError> {
    token.parse().map_err(|_| {
        CliError::Usage(format!(
            "unknown synthetic variant `{token}`; expected data1, data2 or data3"
        ))
    })
}

fn parse_delimiter(token: &str) -> Result<u8, CliError> {
    match token {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        t if t.len() == 1 && t.is_ascii() => Ok(t.as_bytes()[0]),
        t => Err(CliError::Usage(format!(
            "invalid delimiter `{t}`; expected a single ASCII character"
        ))),
    }
}

fn parse_tag(token: &str) -> Result<MethodTag, CliError> {
    token.parse().map_err(|e| match e {
        Error::MethodTag { token: bad, .. } => CliError::Usage(format!(
            "invalid method tag `{token}`: unknown token `{bad}`; valid tags: {}",
            valid_tags()
        )),
        other => CliError::Usage(other.to_string()),
    })
}

fn valid_tags() -> String {
    MethodTag::all()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_tags(list: &str) -> Result<Vec<MethodTag>, CliError> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(MethodTag::all());
    }
    let mut tags = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let tag = parse_tag(token)?;
        if !tags.contains(&tag) {
            tags.push(tag);
        }
    }
    if tags.is_empty() {
        return Err(CliError::Usage("--methods is empty".into()));
    }
    Ok(tags)
}

fn load(source: &DataSource) -> Result<Dataset, Error> {
    match source {
        DataSource::Csv {
            path,
            label,
            options,
        } => load_csv(path, label.as_ref(), *options),
        DataSource::Synthetic(spec) => Ok(generate_synthetic(*spec)),
    }
}

/// Runs a parsed command. The summary table (or a one-line note for
/// `generate`) goes to `stdout`; failed cells are reported on stderr.
pub fn execute(config: &CliConfig, stdout: &mut impl Write) -> Result<(), CliError> {
    let dataset = load(&config.source)?;
    if config.subcommand == Subcommand::Generate {
        let path = config.out.as_ref().expect("generate always has --out");
        save_csv(&dataset, path, config.write_options)?;
        writeln!(
            stdout,
            "wrote {} rows ({} outliers) to {}",
            dataset.len(),
            dataset.n_outliers().unwrap_or(0),
            path.display()
        )?;
        return Ok(());
    }

    let max = dataset.len() - 1;
    if config.k_range.end() > max {
        return Err(Error::KOutOfRange {
            k: config.k_range.end(),
            max,
        }
        .into());
    }
    let specs: Vec<PipelineSpec> = config
        .methods
        .iter()
        .map(|&tag| PipelineSpec::new(tag, config.k_range))
        .collect();
    let options = PipelineOptions {
        normalize: config.normalize,
        threads: config.threads,
    };
    let result = run_sweep(&dataset, &specs, &options)?;
    write!(stdout, "{}", format_summary_table(&result))?;
    if let Some(dir) = &config.out {
        emit_reports(&result, dir, &config.formats)?;
    }

    let failed: Vec<_> = result
        .cells
        .iter()
        .filter_map(|c| c.outcome.as_ref().err().map(|e| (c.method_tag, c.k, e)))
        .collect();
    if let Some(&(tag, k, first)) = failed.first() {
        for (tag, k, e) in &failed {
            eprintln!("{tag} k={k}: {e}");
        }
        return Err(CliError::Data(Error::InvalidArgument(format!(
            "{} of {} cells failed (first: {tag} k={k}: {first})",
            failed.len(),
            result.cells.len()
        ))));
    }
    Ok(())
}
