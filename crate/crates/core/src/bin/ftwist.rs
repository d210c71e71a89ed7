use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ftwist::cli_report::{
    analyze, parse, render_text, write_curve_file, AnalyzeOptions, CurveFile, FileCache, Report, EXIT_FAILURE,
    EXIT_INPUT, EXIT_INTERNAL, EXIT_OK,
};
use ftwist::gf_core::{field_of_order, RatField};
use ftwist::selmer_global::HbarOverride;
use ftwist::tate_local::PlaceStore;
use ftwist::weierstrass::{find_semistable_ordinary_examples, WeierstrassModel};

#[derive(Parser)]
#[command(name = "ftwist", version, about = "Frobenius twists of elliptic curves over F_q(t)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze every curve and lambda block of a curve file and print the report.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the JSON report to this path.
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Like analyze, but only report failures; exit 1 if there are any.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for semistable ordinary non-isotrivial models and print a curve file.
    Search {
        /// Order of the constant field.
        #[arg(long, default_value_t = 2)]
        q: u64,
        /// Degree bound on the polynomial coefficients.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 5)]
        limit: usize,
        /// Number of candidates to examine at most.
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Quotient counts for Λ-modules, from a curve file or from flags.
    Lambda {
        file: Option<PathBuf>,
        #[arg(long)]
        p: Option<u32>,
        /// Comma-separated μ-exponents.
        #[arg(long)]
        exponents: Option<String>,
        /// Semicolon-separated generators in x (and y).
        #[arg(long)]
        generators: Option<String>,
        #[arg(long, default_value_t = 1)]
        d: u8,
        /// Specialization direction "c1,c2" for two-variable modules.
        #[arg(long)]
        direction: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long)]
    series_degree: Option<usize>,
    #[arg(long)]
    scan_degree_bound: Option<u32>,
    #[arg(long)]
    no_cache: bool,
    #[arg(long, default_value = ".ftwist-cache")]
    cache: PathBuf,
    /// Record the wall-clock time in the report.
    #[arg(long)]
    timestamps: bool,
    /// ℏ value to use for every curve lacking its own override.
    #[arg(long, requires = "hbar_justification")]
    hbar_override: Option<i64>,
    #[arg(long)]
    hbar_justification: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

struct Failure(i32, String);

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INPUT, e.to_string())
}

fn read_file(path: &Path) -> Result<(Vec<u8>, CurveFile), Failure> {
    let bytes = std::fs::read(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| input_err(format!("{}: not UTF-8", path.display())))?;
    let file = parse(text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    Ok((bytes, file))
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

fn run_report(path: &Path, run: &RunArgs) -> Result<Report, Failure> {
    let (bytes, file) = read_file(path)?;
    let opts = AnalyzeOptions {
        series_degree: run.series_degree,
        scan_degree_bound: run.scan_degree_bound,
        timestamp: run.timestamps.then(timestamp),
        hbar_override: run.hbar_override.map(|value| HbarOverride {
            value,
            justification: run.hbar_justification.clone().unwrap_or_default(),
        }),
    };
    if run.no_cache {
        return Ok(analyze(&file, &bytes, &opts, None));
    }
    let cache = FileCache::open(&run.cache).map_err(|e| input_err(format!("{}: {e}", run.cache.display())))?;
    let report = analyze(&file, &bytes, &opts, Some(&cache as &dyn PlaceStore));
    let fresh = cache.fresh_count();
    cache
        .flush()
        .map_err(|e| Failure(EXIT_INTERNAL, format!("writing {}: {e}", run.cache.display())))?;
    eprintln!(
        "cache {}: {} hits, {} new entries, {} corrupt lines ignored",
        run.cache.display(),
        cache.hits(),
        fresh,
        cache.rejected
    );
    Ok(report)
}

fn emit(report: &Report, format: Format) -> Result<(), Failure> {
    let text = match format {
        Format::Text => render_text(report),
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
    };
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))
}

fn status_of(report: &Report) -> i32 {
    if report.has_internal_error() {
        EXIT_INTERNAL
    } else {
        EXIT_OK
    }
}

fn lambda_text(
    p: Option<u32>,
    exponents: Option<String>,
    generators: Option<String>,
    d: u8,
    direction: Option<String>,
) -> Result<String, Failure> {
    let (Some(p), Some(e), Some(g)) = (p, exponents, generators) else {
        return Err(input_err("lambda needs a file or all of --p, --exponents, --generators"));
    };
    let mut s = format!("p = {p}\n[lambda cli]\nd = {d}\nexponents = {e}\ngenerators = {g}\n");
    if let Some(dir) = direction {
        s.push_str(&format!("direction = {dir}\n"));
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.cmd {
        Cmd::Analyze {
            file,
            run,
            format,
            json_out,
        } => {
            let report = run_report(&file, &run)?;
            if let Some(path) = json_out {
                let json = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
                std::fs::write(&path, json).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            }
            emit(&report, format)?;
            Ok(status_of(&report))
        }
        Cmd::Verify { file, run } => {
            let report = run_report(&file, &run)?;
            let failures = report.failures();
            for f in &failures {
                eprintln!("{f}");
            }
            if report.has_internal_error() {
                return Ok(EXIT_INTERNAL);
            }
            println!(
                "{}: {} curves, {} lambda blocks, {} failures",
                file.display(),
                report.curves.len(),
                report.lambdas.len(),
                failures.len()
            );
            Ok(if failures.is_empty() { EXIT_OK } else { EXIT_FAILURE })
        }
        Cmd::Search {
            q,
            max_degree,
            limit,
            budget,
        } => {
            let k = RatField::new(field_of_order(q).map_err(input_err)?);
            let res = find_semistable_ordinary_examples(&k, max_degree, limit, budget).map_err(input_err)?;
            let mut models = Vec::new();
            for (i, c) in res.curves.iter().enumerate() {
                let text = format!("p = {}\nq = {q}\n[curve c]\n{}", k.fq().p(), coeff_lines(c));
                let f = parse(&text).map_err(|e| Failure(EXIT_INTERNAL, format!("re-reading {c}: {e}")))?;
                let m: WeierstrassModel = f.curves[0].model.clone();
                models.push((format!("s{}", i + 1), m));
            }
            let mut out = write_curve_file(&k, &models);
            out.push_str(&format!(
                "\n# examined {} candidates{}\n",
                res.examined,
                if res.exhausted { ", budget exhausted" } else { "" }
            ));
            print!("{out}");
            Ok(EXIT_OK)
        }
        Cmd::Lambda {
            file,
            p,
            exponents,
            generators,
            d,
            direction,
            format,
        } => {
            let (bytes, mut parsed) = match file {
                Some(path) => read_file(&path)?,
                None => {
                    let text = lambda_text(p, exponents, generators, d, direction)?;
                    let f = parse(&text).map_err(input_err)?;
                    (text.into_bytes(), f)
                }
            };
            parsed.curves.clear();
            let report = analyze(&parsed, &bytes, &AnalyzeOptions::default(), None);
            emit(&report, format)?;
            Ok(if report.lambdas.iter().all(|l| l.pass) { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

/// "[a1,...,a6]" as key = value lines.
fn coeff_lines(c: &str) -> String {
    let inner = c.trim_start_matches('[').trim_end_matches(']');
    ["a1", "a2", "a3", "a4", "a6"]
        .iter()
        .zip(inner.split(','))
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(c)) => c,
        Ok(Err(Failure(c, msg))) => {
            eprintln!("ftwist: {msg}");
            c
        }
        Err(_) => EXIT_INTERNAL,
    };
    ExitCode::from(code as u8)
}
