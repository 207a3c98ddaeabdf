use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use ztwo_cli::cache::CachedOracle;
use ztwo_cli::records::{ClassGroupRecord, ClassifyRecord, PredictionRecord, WitnessRecord};
use ztwo_cli::scan::{scan, JsonScanRow, SCAN_MAX};
use ztwo_cli::verify::{self, Suite};
use ztwo_core::arith::factor_squarefree;
use ztwo_core::classifier::{classify, exponent_r_corollary_with, predict_with, Family, Tower};
use ztwo_core::diophantine::SearchBounds;
use ztwo_core::qforms::Discriminant;
use ztwo_core::symbols::{jacobi, quartic_2_reciprocal, quartic_residue};
use ztwo_core::{ClassGroupOracle, Error, OddSquarefree};

const EXIT_INVALID: u8 = 1;
const EXIT_NO_PREDICTION: u8 = 2;
const EXIT_VIOLATIONS: u8 = 3;

/// 2-class groups of cyclotomic Z_2-towers over Q(sqrt(d), i) and Q(sqrt(-d)).
#[derive(Parser, Debug)]
#[command(name = "ztwo", version, about)]
struct Cli {
    /// JSON-lines file caching class group computations.
    #[arg(long, global = true, env = "ZTWO_CACHE")]
    cache: Option<PathBuf>,

    /// Bound on the largest free variable in the representation searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    search_bound: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Place d in its family.
    Classify {
        d: String,
        #[arg(long)]
        json: bool,
    },
    /// Predict the 2-class group of layer n.
    Predict {
        d: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value_t = TowerArg::Both)]
        tower: TowerArg,
        #[arg(long)]
        json: bool,
    },
    /// One row per odd squarefree d in [min, max].
    Scan {
        #[arg(long, default_value_t = 3)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Class group of an imaginary quadratic discriminant.
    #[command(allow_negative_numbers = true)]
    Classgroup {
        discriminant: i64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a residue symbol.
    #[command(group(ArgGroup::new("which").required(true).args(["jacobi", "quartic", "quartic2"])))]
    #[command(allow_negative_numbers = true)]
    Symbol {
        /// Jacobi symbol (a/n).
        #[arg(long, num_args = 2, value_names = ["A", "N"])]
        jacobi: Option<Vec<i64>>,
        /// Quartic residue symbol (a/p)_4.
        #[arg(long, num_args = 2, value_names = ["A", "P"])]
        quartic: Option<Vec<i64>>,
        /// The rational quartic symbol (p/2)_4.
        #[arg(long, value_name = "P")]
        quartic2: Option<i64>,
    },
    /// Print the representation the residue criterion for d is evaluated on.
    Witness { d: String },
    /// Run consistency suites; exits 3 on any violation.
    Verify {
        #[arg(long, default_value_t = 5000)]
        max: u64,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TowerArg {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "K", alias = "k")]
    K,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Corollary,
    Oracle,
    Williams,
    Symbols,
    All,
}

/// Failure carrying the process exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedFamily(_) => Failure(EXIT_NO_PREDICTION, e.to_string()),
            _ => Failure(EXIT_INVALID, e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(EXIT_INVALID, e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure(EXIT_INVALID, e.to_string())
    }
}

fn parse_d(s: &str) -> Result<OddSquarefree, Failure> {
    let d: u64 = s.parse().map_err(|_| Failure(EXIT_INVALID, format!("{s:?} is not a positive integer")))?;
    Ok(factor_squarefree(d)?)
}

fn json_line<T: serde::Serialize>(out: &mut impl Write, value: &T) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(value).expect("records serialize"))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let oracle = match &cli.cache {
        Some(path) => CachedOracle::open(path)
            .map_err(|e| Failure(EXIT_INVALID, format!("cannot open cache {}: {e}", path.display())))?,
        None => CachedOracle::in_memory(),
    };
    let bounds = SearchBounds { max_value: cli.search_bound, ..SearchBounds::default() };
    let stdout = io::stdout();
    let mut out = stdout.lock();

    match cli.command {
        Command::Classify { d, json } => {
            let tag = classify(&parse_d(&d)?)?;
            if json {
                json_line(&mut out, &ClassifyRecord::from(&tag))?;
            } else {
                writeln!(out, "{tag}")?;
            }
        }
        Command::Predict { d, n, tower, json } => {
            let d = parse_d(&d)?;
            let tag = classify(&d)?;
            if !tag.family.has_exponent() {
                let why = match tag.family {
                    Family::C7 => {
                        "the 2-class groups of the L tower are cyclic and non-trivial, but no order formula is known"
                    }
                    _ => "d belongs to no family with a prediction",
                };
                return Err(Failure(EXIT_NO_PREDICTION, format!("{} ({}): {why}", d, tag.family)));
            }
            let towers: &[Tower] = match tower {
                TowerArg::L => &[Tower::L],
                TowerArg::K => &[Tower::K],
                TowerArg::Both => &[Tower::L, Tower::K],
            };
            for &t in towers {
                let p = predict_with(&d, n, t, &oracle)?;
                if json {
                    json_line(&mut out, &PredictionRecord::from(&p))?;
                } else {
                    let r = p.r.map_or("?".to_string(), |r| r.to_string());
                    writeln!(out, "{}: {}  (n={}, r={r} from oracle; {})", t, p.shape, p.n, p.theorem)?;
                }
            }
        }
        Command::Scan { min, max, family, format } => {
            if min > max || max > SCAN_MAX {
                return Err(Failure(EXIT_INVALID, format!("need min <= max <= {SCAN_MAX}, got [{min}, {max}]")));
            }
            let family = family.map(|f| f.parse::<Family>()).transpose()?;
            let rows = scan(min, max, family, &bounds, &oracle);
            match format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    if rows.is_empty() {
                        w.write_record(ztwo_cli::scan::CSV_HEADER)?;
                    }
                    for row in &rows {
                        w.serialize(row)?;
                    }
                    w.flush()?;
                }
                Format::Json => {
                    for row in &rows {
                        json_line(&mut out, &JsonScanRow::new(row))?;
                    }
                }
            }
        }
        Command::Classgroup { discriminant, json } => {
            let d = Discriminant::fundamental(discriminant)?;
            let g = oracle.class_group(&d)?;
            if json {
                json_line(&mut out, &ClassGroupRecord::from(&g))?;
            } else {
                let divs: Vec<String> = g.divisors.iter().map(u64::to_string).collect();
                writeln!(
                    out,
                    "D={} h={} divisors=[{}] h2={} two_rank={}",
                    g.discriminant,
                    g.h,
                    divs.join(","),
                    g.h2,
                    g.two_rank
                )?;
            }
        }
        Command::Symbol { jacobi: j, quartic, quartic2 } => {
            let modulus =
                |m: i64| u64::try_from(m).map_err(|_| Failure(EXIT_INVALID, format!("modulus {m} must be positive")));
            let value = if let Some(v) = j {
                jacobi(v[0], modulus(v[1])?)?
            } else if let Some(v) = quartic {
                quartic_residue(v[0], modulus(v[1])?)?
            } else {
                quartic_2_reciprocal(modulus(quartic2.expect("clap enforces one of the flags"))?)?
            };
            writeln!(out, "{value}")?;
        }
        Command::Witness { d } => {
            let tag = classify(&parse_d(&d)?)?;
            if !tag.family.has_exponent() {
                return Err(Failure(
                    EXIT_NO_PREDICTION,
                    format!("{} ({}) has no residue criterion", tag.d, tag.family),
                ));
            }
            let outcome = exponent_r_corollary_with(&tag, &bounds)?;
            json_line(&mut out, &WitnessRecord::new(&tag, &outcome))?;
        }
        Command::Verify { max, suite } => {
            let suites: Vec<Suite> = match suite {
                SuiteArg::Corollary => vec![Suite::Corollary],
                SuiteArg::Oracle => vec![Suite::Oracle],
                SuiteArg::Williams => vec![Suite::Williams],
                SuiteArg::Symbols => vec![Suite::Symbols],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let mut total = 0;
            for s in suites {
                let record = verify::run(s, max, &bounds, &oracle);
                total += record.violations.len();
                json_line(&mut out, &record)?;
            }
            if total > 0 {
                return Err(Failure(EXIT_VIOLATIONS, format!("{total} violations")));
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
