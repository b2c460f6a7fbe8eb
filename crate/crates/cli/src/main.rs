//! `pabed` command-line interface.

mod output;

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pabed_core::ingest::{self, IngestOptions, Mode};
use pabed_core::query::{self, MeasureRef, DEFAULT_MEASURE};
use pabed_core::store::Catalog;
use pabed_core::{AcademicYearId, Error};
use pabed_server::{Server, ServerConfig, DEFAULT_MAX_UPLOAD_BYTES};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "pabed", version, about = "Enrollment analytics over year-keyed CSV tables")]
struct Cli {
    /// Catalog directory holding `<year>.pbed` snapshots.
    #[arg(long, global = true, env = "PABED_CATALOG", default_value = "catalog")]
    catalog: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest a CSV file as the table for one academic year.
    Ingest(IngestArgs),
    /// List ingested years.
    List(FormatArg),
    /// Show the inferred schema of a year's table.
    Schema {
        #[arg(long)]
        year: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Compare a column's total between two academic years.
    Compare {
        #[arg(long)]
        year1: String,
        #[arg(long)]
        year2: String,
        #[arg(long, default_value = DEFAULT_MEASURE)]
        column: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Per-year totals for every ingested year in a range.
    Trend {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value = DEFAULT_MEASURE)]
        column: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Args)]
struct IngestArgs {
    file: PathBuf,
    /// Defaults to the file name stem, e.g. `1996_97.csv`.
    #[arg(long)]
    year: Option<String>,
    /// Fail on unparsable cells and short rows instead of nulling them.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: String,
    /// Bearer token required for uploads.
    #[arg(long, env = "PABED_TOKEN", hide_env_values = true)]
    token: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_UPLOAD_BYTES, value_parser = clap::value_parser!(u64).range(1..))]
    max_upload_bytes: u64,
    /// Origin allowed to call the API cross-site (e.g. a dashboard dev server).
    #[arg(long)]
    cors_origin: Option<String>,
    /// Static dashboard files served for non-API paths.
    #[arg(long)]
    assets: Option<PathBuf>,
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s.as_bytes() {
        [b] if b.is_ascii() && !matches!(b, b'"' | b'\r' | b'\n') => Ok(*b),
        _ => Err("delimiter must be a single ASCII character".into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.code());
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Ingest(args) => {
            let year = match &args.year {
                Some(label) => AcademicYearId::parse(label)?,
                None => year_from_file(&args.file)?,
            };
            let options = IngestOptions {
                delimiter: args.delimiter,
                mode: if args.strict { Mode::Strict } else { Mode::Lenient },
                ..Default::default()
            };
            let file = File::open(&args.file)?;
            let (table, report) = ingest::ingest(BufReader::new(file), year, &options)?;
            Catalog::open(&cli.catalog)?.publish(table)?;
            output::ingest_report(&mut out, &report, args.format.format)?;
        }
        Command::List(fmt) => {
            let catalog = Catalog::open(&cli.catalog)?;
            output::datasets(&mut out, &catalog.list(), fmt.format)?;
        }
        Command::Schema { year, format } => {
            let catalog = Catalog::open(&cli.catalog)?;
            let table = catalog.lookup_label(&year)?;
            output::schema(&mut out, &table.schema_report(), format.format)?;
        }
        Command::Compare {
            year1,
            year2,
            column,
            format,
        } => {
            let (year1, year2) = (AcademicYearId::parse(&year1)?, AcademicYearId::parse(&year2)?);
            let catalog = Catalog::open(&cli.catalog)?;
            let result = query::compare_years(&catalog, year1, year2, &MeasureRef::new(column))?;
            output::comparison(&mut out, &result, format.format)?;
        }
        Command::Trend {
            from,
            to,
            column,
            format,
        } => {
            let (from, to) = (AcademicYearId::parse(&from)?, AcademicYearId::parse(&to)?);
            let catalog = Catalog::open(&cli.catalog)?;
            let series = query::trend_series(&catalog, from, to, &MeasureRef::new(column))?;
            output::trend(&mut out, &series, format.format)?;
        }
        Command::Serve(args) => serve(cli.catalog, args)?,
    }
    out.flush()?;
    Ok(())
}

/// Year from a file name such as `1996_97.csv`.
fn year_from_file(path: &Path) -> Result<AcademicYearId, Error> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    AcademicYearId::parse(stem).map_err(|_| Error::MalformedYear {
        label: stem.to_owned(),
        reason: "no --year given and the file name is not a year label",
    })
}

fn serve(catalog: PathBuf, args: ServeArgs) -> Result<(), Error> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(io::stderr)
        .init();
    let config = ServerConfig {
        bind_address: args.bind,
        catalog_root: catalog,
        auth_token: args.token.filter(|t| !t.is_empty()),
        max_upload_bytes: args.max_upload_bytes,
        cors_origin: args.cors_origin,
        assets_dir: args.assets,
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let server = Server::bind(&config).await?;
        eprintln!("listening on http://{}", server.local_addr()?);
        server.run().await?;
        Ok(())
    })
}
