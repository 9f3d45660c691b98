//! `prodrec`: compute divisor-sum sequences, expand product specs, and verify
//! the identity catalog.
//!
//! Exit codes: 0 when everything requested holds, 1 when an identity (or a
//! recurrence/expansion comparison) fails, 2 on usage or configuration errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prodrec::catalog::{self, IdentityReport};
use prodrec::divisor::{
    a_direct, delta_m_prefix, partition_prefix, q_regular_prefix, rr_sum_side, sigma_rm_table,
    sigma_table, square_indicator, triangular, triangular_indicator,
};
use prodrec::product::builtin;
use prodrec::scalar::format_rational;
use prodrec::{coeffs_via_expansion, coeffs_via_recurrence, ProductSpec, RationalSeries};

#[derive(Parser)]
#[command(
    name = "prodrec",
    version,
    about = "Exact product-to-recurrence engine and identity checker"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named sequence as `n,value` rows.
    Compute {
        /// sigma, sigma_odd, sigma_even, sigma_rm(r,m), s, t, T, a, partition,
        /// q_regular(p), rr1, rr2, delta(m)
        name: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coefficients of a product spec.
    Expand {
        /// ProductSpec JSON file.
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        spec: Option<PathBuf>,
        /// Built-in spec: gauss, jacobi, ramanujan, rr1, rr2, p_regular(p), delta(m), square_quotient.
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, value_enum, default_value_t = Algo::Both)]
        algo: Algo,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run identity checks and write a JSON report.
    Verify {
        /// Identity ids, or `all`.
        #[arg(default_value = "all")]
        ids: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List identity ids and built-in specs.
    Catalog {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value_t = 100)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Algo {
    Recurrence,
    Expansion,
    Both,
}

/// Failure modes that map to exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

#[derive(Serialize)]
struct Row {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct SequenceOutput<'a> {
    sequence: &'a str,
    order: usize,
    rows: &'a [Row],
}

#[derive(Serialize)]
struct ExpandOutput<'a> {
    spec: &'a str,
    order: usize,
    algorithm: Algo,
    coefficients: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_mismatch: Option<usize>,
}

#[derive(Serialize)]
struct CatalogEntry {
    id: String,
    expected: &'static str,
}

#[derive(Serialize)]
struct CatalogOutput {
    identities: Vec<CatalogEntry>,
    specs: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Compute { name, output } => {
            let rows = compute_rows(&name, output.order)?;
            let text = match output.format {
                Format::Csv => rows_to_csv(&rows),
                Format::Json => to_json(&SequenceOutput {
                    sequence: &name,
                    order: output.order,
                    rows: &rows,
                })?,
            };
            emit(&output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Expand {
            spec,
            builtin,
            algo,
            output,
        } => expand(spec, builtin, algo, &output),
        Command::Verify { ids, output } => verify(ids, &output),
        Command::Catalog { output } => {
            let mut identities: Vec<CatalogEntry> = catalog::standard_ids()
                .into_iter()
                .map(|id| CatalogEntry {
                    id,
                    expected: "holds",
                })
                .collect();
            identities.extend(catalog::negative_ids().into_iter().map(|id| CatalogEntry {
                id,
                expected: "fails",
            }));
            let specs = builtin::standard_names();
            let text = match output.format {
                Format::Json => to_json(&CatalogOutput { identities, specs })?,
                Format::Csv => {
                    let mut s = String::from("id,expected\n");
                    for e in &identities {
                        s.push_str(&format!("{},{}\n", e.id, e.expected));
                    }
                    s
                }
            };
            emit(&output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn rows_from(start: usize, values: impl IntoIterator<Item = impl ToString>) -> Vec<Row> {
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| Row {
            n: start + i,
            value: v.to_string(),
        })
        .collect()
}

fn parse_args(name: &str) -> Option<(&str, Vec<&str>)> {
    let open = name.find('(')?;
    let inner = name.strip_suffix(')')?;
    Some((
        &name[..open],
        inner[open + 1..].split(',').map(str::trim).collect(),
    ))
}

fn parse_u64(raw: &str, what: &str) -> CliResult<u64> {
    raw.parse()
        .map_err(|_| UsageError(format!("invalid {what} `{raw}`")))
}

fn compute_rows(name: &str, order: usize) -> CliResult<Vec<Row>> {
    let upto = 0..=order as u64;
    if let Some((head, args)) = parse_args(name) {
        return match (head, args.as_slice()) {
            ("sigma_rm", [r, m]) => {
                let (r, m) = (parse_u64(r, "residue")?, parse_u64(m, "modulus")?);
                Ok(rows_from(
                    1,
                    sigma_rm_table(r, m, order)?.into_iter().skip(1),
                ))
            }
            ("q_regular", [p]) => Ok(rows_from(
                0,
                q_regular_prefix(parse_u64(p, "p")?, order)?.terms,
            )),
            ("delta", [m]) => Ok(rows_from(
                0,
                delta_m_prefix(parse_u64(m, "m")?, order)?.terms,
            )),
            _ => Err(UsageError(format!("unknown sequence `{name}`"))),
        };
    }
    let rows = match name {
        "sigma" => rows_from(1, sigma_table(order).into_iter().skip(1)),
        "sigma_odd" => rows_from(1, sigma_rm_table(1, 2, order)?.into_iter().skip(1)),
        "sigma_even" => rows_from(1, sigma_rm_table(0, 2, order)?.into_iter().skip(1)),
        "s" => rows_from(0, upto.map(square_indicator)),
        "t" => rows_from(0, upto.map(triangular_indicator)),
        "T" => rows_from(0, upto.map(triangular)),
        "a" => rows_from(0, upto.map(a_direct)),
        "partition" => rows_from(0, partition_prefix(order).terms),
        "rr1" => rows_from(0, rr_sum_side(1, order)?.terms),
        "rr2" => rows_from(0, rr_sum_side(2, order)?.terms),
        _ => return Err(UsageError(format!("unknown sequence `{name}`"))),
    };
    Ok(rows)
}

fn rows_to_csv(rows: &[Row]) -> String {
    let mut s = String::from("n,value\n");
    for r in rows {
        s.push_str(&format!("{},{}\n", r.n, r.value));
    }
    s
}

fn series_strings(s: &RationalSeries) -> Vec<String> {
    s.coeffs().iter().map(format_rational).collect()
}

fn expand(
    spec_path: Option<PathBuf>,
    builtin_name: Option<String>,
    algo: Algo,
    output: &OutputArgs,
) -> CliResult<ExitCode> {
    let (label, spec) = match (spec_path, builtin_name) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let spec = ProductSpec::from_json(&text)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            (path.display().to_string(), spec)
        }
        (None, Some(name)) => (name.clone(), builtin::by_name(&name)?),
        (None, None) => return Err(UsageError("expand needs --spec or --builtin".into())),
    };
    let order = output.order;
    let (coeffs, agree, first_mismatch) = match algo {
        Algo::Recurrence => (coeffs_via_recurrence(&spec, order)?, None, None),
        Algo::Expansion => (coeffs_via_expansion(&spec, order)?, None, None),
        Algo::Both => {
            let expansion = coeffs_via_expansion(&spec, order)?;
            let recurrence = coeffs_via_recurrence(&spec, order)?;
            let mismatch = recurrence
                .coeffs()
                .iter()
                .zip(expansion.coeffs())
                .position(|(a, b)| a != b);
            (recurrence, Some(mismatch.is_none()), mismatch)
        }
    };
    let text = match output.format {
        Format::Json => to_json(&ExpandOutput {
            spec: &label,
            order,
            algorithm: algo,
            coefficients: series_strings(&coeffs),
            agree,
            first_mismatch,
        })?,
        Format::Csv => rows_to_csv(&rows_from(0, series_strings(&coeffs))),
    };
    emit(output, &text)?;
    if let Some(agree) = agree {
        eprintln!("agree={agree}");
        if !agree {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(ids: Vec<String>, output: &OutputArgs) -> CliResult<ExitCode> {
    let ids = if ids.iter().any(|id| id == "all") {
        catalog::standard_ids()
    } else {
        ids
    };
    let reports = catalog::run_many(&ids, output.order)?;
    for r in &reports {
        match &r.first_failure {
            None => eprintln!("PASS {} (N={})", r.identity_id, r.order_checked),
            Some(f) => eprintln!(
                "FAIL {} (N={}) at n={}: lhs={} rhs={}",
                r.identity_id, r.order_checked, f.n, f.lhs, f.rhs
            ),
        }
    }
    let text = match output.format {
        Format::Json => to_json(&reports)?,
        Format::Csv => reports_to_csv(&reports),
    };
    emit(output, &text)?;
    Ok(if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn reports_to_csv(reports: &[IdentityReport]) -> String {
    let mut s = String::from("identity,N,passed,n,lhs,rhs\n");
    for r in reports {
        let (n, lhs, rhs) = match &r.first_failure {
            Some(f) => (f.n.to_string(), f.lhs.clone(), f.rhs.clone()),
            None => Default::default(),
        };
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.identity_id, r.order_checked, r.passed, n, lhs, rhs
        ));
    }
    s
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(output: &OutputArgs, text: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
