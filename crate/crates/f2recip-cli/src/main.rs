//! Command-line front end: series generation and inversion, the identity
//! verification suite, density reports, Beatty tables, reference-sequence
//! checks, and the random reciprocal experiment.
//!
//! Data goes to standard output (or `--out`); diagnostics go to the error
//! stream. Exit codes: 0 success, 1 verification failure or runtime
//! error, 2 usage error.

use std::error::Error;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use f2recip::analysis::{self, IdentityId};
use f2recip::beatty::{self, BeattyKind};
use f2recip::format;
use f2recip::oeis::{self, OeisClient};
use f2recip::seq::{self, SequenceKind};

#[derive(Parser)]
#[command(
    name = "f2recip",
    version,
    about = "Truncated power series over GF(2): reciprocal sets, identity checks, densities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesFormat {
    /// Binary: magic, little-endian precision, packed coefficient words.
    F2s1,
    /// Text: one decimal exponent per line, ascending.
    Indices,
}

#[derive(Clone)]
enum VerifyTarget {
    All,
    Tag(String),
}

fn parse_sequence_kind(s: &str) -> Result<SequenceKind, String> {
    SequenceKind::from_cli_name(s).ok_or_else(|| {
        let names: Vec<&str> = SequenceKind::ALL.iter().map(|k| k.cli_name()).collect();
        format!("unknown sequence {s:?}; expected one of: {}", names.join(", "))
    })
}

fn parse_beatty_kind(s: &str) -> Result<BeattyKind, String> {
    BeattyKind::from_cli_name(s).ok_or_else(|| {
        let names: Vec<&str> = BeattyKind::ALL.iter().map(|k| k.cli_name()).collect();
        format!("unknown Beatty kind {s:?}; expected one of: {}", names.join(", "))
    })
}

fn parse_verify_target(s: &str) -> Result<VerifyTarget, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(VerifyTarget::All);
    }
    let canonical = s.to_uppercase();
    if IdentityId::TAGS.contains(&canonical.as_str()) {
        Ok(VerifyTarget::Tag(canonical))
    } else {
        Err(format!(
            "unknown target {s:?}; expected `all` or one of: {}",
            IdentityId::TAGS.join(", ")
        ))
    }
}

fn parse_a_number(s: &str) -> Result<String, String> {
    let digits = s.strip_prefix('A').unwrap_or("");
    if (6..=7).contains(&digits.len()) && digits.bytes().all(|b| b.is_ascii_digit()) {
        Ok(s.to_string())
    } else {
        Err(format!("{s:?} is not of the form A followed by 6-7 digits"))
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err("inclusion probability must be strictly between 0 and 1".to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named series at the given precision.
    Gen {
        /// squares | odd-squares | triangular | pentagonal | sigma |
        /// sigma-bar | partitions | distinct-product
        #[arg(value_parser = parse_sequence_kind)]
        kind: SequenceKind,
        /// Number of coefficients to compute.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1 << 32))]
        precision: u64,
        #[arg(long, value_enum, default_value = "indices")]
        format: SeriesFormat,
        /// Write to this path instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a binary series from standard input and emit its reciprocal.
    Invert {
        #[arg(long, value_enum, default_value = "indices")]
        format: SeriesFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check identities: one `TAG,N,PASS|FAIL[,exponent]` line per check.
    Verify {
        /// `all`, or a single identity tag such as L3_SIGMA_DECOMP.
        #[arg(value_parser = parse_verify_target)]
        target: VerifyTarget,
        /// Series precision for the identity checks (minimum 16).
        #[arg(long, default_value_t = 65536, value_parser = clap::value_parser!(u64).range(16..=1 << 32))]
        precision: u64,
        /// Exponent for the T12_GK_EVEN family; must be odd.
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cumulative density of a named series at power-of-two checkpoints,
    /// split by residue class (CSV).
    Density {
        #[arg(value_parser = parse_sequence_kind)]
        kind: SequenceKind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=1 << 32))]
        precision: u64,
        /// Residue classes to split the counts by.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=4096))]
        modulus: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Beatty sequence tables as CSV `k,kind,value`.
    Beatty {
        /// Number of terms per kind.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..=1 << 40))]
        count: u64,
        /// Restrict to one kind: w | alpha | beta | gamma | delta | epsilon.
        #[arg(long, value_parser = parse_beatty_kind)]
        kind: Option<BeattyKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare generated sequences against reference b-files (CSV).
    #[command(name = "oeis-check")]
    OeisCheck {
        /// Sequence identifiers; defaults to all fourteen known ones.
        #[arg(value_parser = parse_a_number)]
        a_numbers: Vec<String>,
        /// Directory for cached b-files.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Allow fetching missing b-files from oeis.org.
        #[arg(long)]
        fetch: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Densities of reciprocals of random sets (CSV `trial,density`).
    #[command(name = "recip-experiment")]
    RecipExperiment {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..=100_000))]
        trials: u64,
        /// Probability that each positive exponent joins the random set.
        #[arg(long, default_value_t = 0.5, value_parser = parse_probability)]
        rho: f64,
        #[arg(long, default_value_t = 65536, value_parser = clap::value_parser!(u64).range(1..=1 << 32))]
        precision: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Reports a post-parse usage problem the way clap reports parse errors.
fn usage_error(message: &str) -> ! {
    eprintln!("error: {message}");
    std::process::exit(2);
}

fn sink(out: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Runs one subcommand; `Ok(false)` means a verification-style failure
/// that was already reported in the data stream.
fn run(command: Command) -> Result<bool, Box<dyn Error>> {
    match command {
        Command::Gen {
            kind,
            precision,
            format,
            out,
        } => {
            let series = seq::generate(kind, precision as usize);
            let mut w = sink(out.as_ref())?;
            match format {
                SeriesFormat::F2s1 => format::write_f2s1(&series, &mut w)?,
                SeriesFormat::Indices => format::write_indices(&series, &mut w)?,
            }
            w.flush()?;
            Ok(true)
        }
        Command::Invert { format, out } => {
            let series = format::read_f2s1(&mut io::stdin().lock())?;
            let inverse = series.inverse()?;
            let mut w = sink(out.as_ref())?;
            match format {
                SeriesFormat::F2s1 => format::write_f2s1(&inverse, &mut w)?,
                SeriesFormat::Indices => format::write_indices(&inverse, &mut w)?,
            }
            w.flush()?;
            Ok(true)
        }
        Command::Verify {
            target,
            precision,
            k,
            out,
        } => {
            if k % 2 == 0 {
                usage_error(&format!("--k must be odd, got {k}"));
            }
            let mut w = sink(out.as_ref())?;
            let ok = match target {
                VerifyTarget::All => run_full_verification(precision as usize, &mut w)?,
                VerifyTarget::Tag(tag) => {
                    let identity = IdentityId::from_tag(&tag, k)
                        .unwrap_or_else(|| usage_error(&format!("unusable target {tag}")));
                    let outcome = analysis::verify(identity, precision as usize)?;
                    writeln!(w, "{outcome}")?;
                    outcome.holds
                }
            };
            w.flush()?;
            Ok(ok)
        }
        Command::Density {
            kind,
            precision,
            modulus,
            out,
        } => {
            let precision = precision as usize;
            let series = seq::generate(kind, precision);
            let checkpoints = analysis::default_checkpoints(precision);
            let report = analysis::density_report(&series, modulus as usize, &checkpoints)?;
            let mut w = sink(out.as_ref())?;
            write!(w, "{}", report.to_csv())?;
            w.flush()?;
            Ok(true)
        }
        Command::Beatty { count, kind, out } => {
            let kinds: Vec<BeattyKind> = match kind {
                Some(k) => vec![k],
                None => BeattyKind::ALL.to_vec(),
            };
            let mut w = sink(out.as_ref())?;
            writeln!(w, "k,kind,value")?;
            for kind in kinds {
                for k in 1..=count {
                    let value = beatty::beatty_term(kind, k)?;
                    writeln!(w, "{k},{},{value}", kind.cli_name())?;
                }
            }
            w.flush()?;
            Ok(true)
        }
        Command::OeisCheck {
            a_numbers,
            cache_dir,
            fetch,
            out,
        } => {
            let cache_dir =
                cache_dir.unwrap_or_else(|| std::env::temp_dir().join("f2recip-oeis"));
            let client = OeisClient::new(cache_dir).with_network(fetch);
            let a_numbers = if a_numbers.is_empty() {
                oeis::known_a_numbers().iter().map(|s| s.to_string()).collect()
            } else {
                a_numbers
            };
            let mut w = sink(out.as_ref())?;
            writeln!(w, "a_number,matched,first_mismatch_index")?;
            let mut ok = true;
            for a_number in &a_numbers {
                match oeis::check_sequence(&client, a_number) {
                    Ok(result) => {
                        writeln!(w, "{result}")?;
                        ok &= result.matches();
                    }
                    Err(e) => {
                        eprintln!("{a_number}: {e}");
                        ok = false;
                    }
                }
            }
            w.flush()?;
            Ok(ok)
        }
        Command::RecipExperiment {
            trials,
            rho,
            precision,
            seed,
            out,
        } => {
            let densities = analysis::random_reciprocal_experiment(
                trials as usize,
                rho,
                precision as usize,
                seed,
            );
            let mut w = sink(out.as_ref())?;
            writeln!(w, "trial,density")?;
            for (i, density) in densities.iter().enumerate() {
                writeln!(w, "{},{density:.8}", i + 1)?;
            }
            w.flush()?;
            let mean = densities.iter().sum::<f64>() / densities.len() as f64;
            eprintln!("mean density over {} trials: {mean:.8}", densities.len());
            Ok(true)
        }
    }
}

/// The full sweep behind `verify all`: the identity catalog, the Beatty
/// index formulas, the exact-integer recurrences, the class-3
/// characterization, and the two informational iterated-index lines.
/// A failing group does not stop later groups.
fn run_full_verification(precision: usize, w: &mut dyn Write) -> Result<bool, Box<dyn Error>> {
    let mut ok = true;

    for identity in IdentityId::catalog() {
        let outcome = analysis::verify(identity, precision)?;
        writeln!(w, "{outcome}")?;
        ok &= outcome.holds;
    }

    for check in beatty::verify_beatty_props(1000) {
        writeln!(w, "{check}")?;
        ok &= check.holds;
    }

    for check in seq::verify_pentagonal_recurrences(2000) {
        writeln!(w, "{check}")?;
        ok &= check.holds;
    }

    let characterization = analysis::sigma3_characterization_check(precision.min(1 << 20));
    writeln!(w, "{characterization}")?;
    ok &= characterization.holds;

    // Informational: which closed form the iterated index operator
    // matches is a recorded finding, not a pass/fail criterion.
    for line in beatty::ll_sigma_comparison(1000)?.report_lines() {
        writeln!(w, "{line}")?;
    }

    Ok(ok)
}
