// A closed pipe (e.g. `| head`) is not an error worth panicking over.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

mod example;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dioph::sample::random_unimodular;
use dioph::solution::{Coefficients, MStrategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use report::{build_report, parse_int, recheck, strategy_name, Options, Report, VerifyDocument};

#[derive(Parser)]
#[command(
    name = "dioph",
    version,
    about = "Bases, presentations and quotients for a1*X1 + ... + an*Xn = 0"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    All,
    GreedyMinimal,
}

impl From<Strategy> for MStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::All => MStrategy::All,
            Strategy::GreedyMinimal => MStrategy::GreedyMinimal,
        }
    }
}

#[derive(Args)]
struct Input {
    /// Coefficients a1 ... an
    #[arg(allow_negative_numbers = true)]
    coefficients: Vec<String>,
    /// Read coefficients from a file, one per line; `#` starts a comment
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Strategy::All)]
    m_strategy: Strategy,
    /// Index (1-based) whose coefficient certifies the basis
    #[arg(long)]
    pivot: Option<usize>,
    /// Half-width of the box used by the enumeration check
    #[arg(long, default_value_t = 2)]
    bound: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Certified basis of the solution module
    Solve {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Generators, relations and their verification
    Present {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// W/S, S/S_i, S/U_i, the d-chain and the C matrix
    Structure {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        /// Only report S/S_i and S/U_i for this index
        #[arg(long = "i")]
        index: Option<usize>,
    },
    /// Run every check on the given coefficients or on random ones
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 1000)]
        max_coeff: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Re-verify a JSON report written by an earlier run
        #[arg(long, conflicts_with_all = ["coefficients", "file"])]
        report: Option<PathBuf>,
    },
    /// Replay the worked example 12X1 + 4X2 + 2X3 + 3X4 = 0 against stored goldens
    Example,
}

fn read_coefficients(input: &Input) -> Result<Option<Coefficients>> {
    let mut raw = input.coefficients.clone();
    if let Some(path) = &input.file {
        raw.extend(read_file(path)?);
    }
    if raw.is_empty() {
        return Ok(None);
    }
    let a = raw
        .iter()
        .map(|s| parse_int(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(Coefficients::new(a)?))
}

fn read_file(path: &Path) -> Result<Vec<String>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

fn required(input: &Input) -> Result<Coefficients> {
    read_coefficients(input)?.context("no coefficients given")
}

fn options(common: &Common, only_i: Option<usize>) -> Options {
    Options {
        strategy: common.m_strategy.into(),
        pivot: common.pivot,
        only_i,
        bound: common.bound,
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    out!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn vector(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

fn matrix(rows: &[Vec<String>]) -> String {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>width$}")).collect();
            format!("  [{}]", cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn print_failed_checks(r: &Report) {
    for k in r.checks.iter().filter(|k| !k.pass) {
        out!("FAIL {}: {} ({})", k.name, k.paper_ref, k.detail);
    }
}

fn print_solve(r: &Report) {
    out!("coefficients: {}", vector(&r.coefficients));
    out!("M: {:?}  pivot: {}", r.m, r.pivot);
    out!("basis:");
    for (k, v) in r.basis.iter().enumerate() {
        out!("  z{} = {}", k + 2, vector(v));
    }
    out!("w-coordinates (columns):\n{}", matrix(&r.w_coordinates));
    out!("det = {} = ±a_{}", r.det, r.pivot);
}

fn print_present(r: &Report) {
    let p = &r.presentation;
    out!("coefficients: {}", vector(&r.coefficients));
    out!("M: {:?}", r.m);
    let pairs: Vec<String> = p.pairs.iter().map(|(i, j)| format!("({i},{j})")).collect();
    let triples: Vec<String> = p
        .triples
        .iter()
        .map(|(i, j, k)| format!("({i},{j},{k})"))
        .collect();
    out!("generators v(i,j), d = {}: {}", p.d, pairs.join(" "));
    out!("relations, e = {}: {}", p.e, triples.join(" "));
    if p.e > 0 {
        out!("relation matrix:\n{}", matrix(&p.relation_matrix));
    }
    out!(
        "rank {}, Smith diagonal {}",
        p.rank,
        vector(&p.snf_diagonal)
    );
    out!(
        "defining relations: {}",
        if p.verified {
            "verified"
        } else {
            "NOT verified"
        }
    );
}

fn quotient(q: &report::QuotientJson) -> String {
    if q.text == q.elementary {
        q.text.clone()
    } else {
        format!("{} = {}", q.elementary, q.text)
    }
}

fn print_structure(r: &Report) {
    out!("coefficients: {}", vector(&r.coefficients));
    out!(
        "W/S = {}   (pivot {})",
        quotient(&r.quotients.w_mod_s),
        r.pivot
    );
    for q in &r.quotients.s_mod_si {
        out!("S/S_{} = {}", q.i, quotient(&q.quotient));
    }
    for q in &r.quotients.s_mod_ui {
        out!("S/U_{} = {}", q.i, quotient(&q.quotient));
    }
    if let Some(d) = &r.d_chain {
        out!("d-chain: {}", vector(d));
    }
    if let Some(cm) = &r.c_matrix {
        out!("C = A^-1 D:\n{}", matrix(&cm.rows));
        out!(
            "gcd(C_ii, C_jj) | C_ij: {}",
            if cm.divisibility { "yes" } else { "NO" }
        );
    }
}

fn verify(
    input: &Input,
    common: &Common,
    count: usize,
    max_n: usize,
    max_coeff: i64,
    seed: u64,
    format: Format,
) -> Result<bool> {
    let opts = options(common, None);
    let vectors = match read_coefficients(input)? {
        Some(c) => vec![c],
        None => {
            if max_n < 2 || max_coeff < 1 {
                bail!("--max-n must be at least 2 and --max-coeff at least 1");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let n = rng.gen_range(2..=max_n);
                    random_unimodular(&mut rng, n, max_coeff)
                })
                .collect()
        }
    };
    let instances = vectors
        .iter()
        .map(|c| build_report(c, &opts, Some(seed)))
        .collect::<Result<Vec<_>>>()?;
    let doc = VerifyDocument {
        seed: Some(seed.to_string()),
        m_strategy: strategy_name(opts.strategy).to_string(),
        bound: opts.bound,
        passed: instances.iter().all(Report::passed),
        instances,
    };
    emit_verify(&doc, format)?;
    Ok(doc.passed)
}

fn emit_verify(doc: &VerifyDocument, format: Format) -> Result<()> {
    if format == Format::Json {
        return print_json(doc);
    }
    out!("seed: {}", doc.seed.as_deref().unwrap_or("none"));
    let mut failed = 0;
    for r in &doc.instances {
        let bad = r.checks.iter().filter(|k| !k.pass).count();
        out!(
            "{}: {} of {} checks passed",
            vector(&r.coefficients),
            r.checks.len() - bad,
            r.checks.len()
        );
        print_failed_checks(r);
        failed += usize::from(bad > 0);
    }
    out!("{} instances, {} failed", doc.instances.len(), failed);
    Ok(())
}

fn reverify(path: &Path, format: Format) -> Result<bool> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let old: VerifyDocument = if value.get("instances").is_some() {
        serde_json::from_value(value)?
    } else {
        let r: Report = serde_json::from_value(value)?;
        VerifyDocument {
            seed: r.seed.clone(),
            m_strategy: r.m_strategy.clone(),
            bound: r.bound,
            passed: r.passed(),
            instances: vec![r],
        }
    };
    let instances = old
        .instances
        .iter()
        .map(recheck)
        .collect::<Result<Vec<_>>>()?;
    let doc = VerifyDocument {
        passed: instances.iter().all(Report::passed),
        instances,
        ..old
    };
    emit_verify(&doc, format)?;
    Ok(doc.passed)
}

fn example(format: Format) -> Result<bool> {
    let displays = example::replay()?;
    let ok = displays.iter().all(|d| d.matches);
    if format == Format::Json {
        print_json(&serde_json::json!({"seed": null, "passed": ok, "displays": displays}))?;
    } else {
        out!("12X1 + 4X2 + 2X3 + 3X4 = 0");
        for d in &displays {
            if d.matches {
                out!("  {:<18} ok  {}", d.name, d.computed);
            } else {
                out!(
                    "  {:<18} MISMATCH expected {} computed {}",
                    d.name,
                    d.expected,
                    d.computed
                );
            }
        }
    }
    Ok(ok)
}

fn single(
    input: &Input,
    common: &Common,
    only_i: Option<usize>,
    format: Format,
    text: fn(&Report),
) -> Result<bool> {
    let c = required(input)?;
    let r = build_report(&c, &options(common, only_i), None)?;
    if format == Format::Json {
        print_json(&r)?;
    } else {
        text(&r);
        print_failed_checks(&r);
    }
    Ok(r.passed())
}

fn run(cli: Cli) -> Result<bool> {
    let format = cli.format;
    match cli.command {
        Command::Solve { input, common } => single(&input, &common, None, format, print_solve),
        Command::Present { input, common } => single(&input, &common, None, format, print_present),
        Command::Structure {
            input,
            common,
            index,
        } => single(&input, &common, index, format, print_structure),
        Command::Verify {
            input,
            common,
            count,
            max_n,
            max_coeff,
            seed,
            report,
        } => match report {
            Some(path) => reverify(&path, format),
            None => verify(&input, &common, count, max_n, max_coeff, seed, format),
        },
        Command::Example => example(format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
