use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cyclic_bisectors::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};
use cyclic_bisectors::coord::format_rational;
use cyclic_bisectors::geometry::occupancy_word;
use cyclic_bisectors::enumeration::{count_bracelets, count_words, enumerate_words};
use cyclic_bisectors::montecarlo::{trial_rng, EstimatorResult};
use cyclic_bisectors::random_points::{estimate, sample_uniform_config, Statistic};
use cyclic_bisectors::realization::realize;
use cyclic_bisectors::uniform_sampler::{lln_clt_experiment, SampleKind, WordSampler, DEFAULT_C_GRID};
use cyclic_bisectors::{Error, Word};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bisectors", version, about = "Occupancy words of perpendicular-bisector arrangements on a circle")]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Word,
    Bracelet,
    Points,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StatArg {
    H2,
    L0,
    L1,
    L2,
    Le,
    Pb,
}

impl From<StatArg> for Statistic {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::H2 => Statistic::H2,
            StatArg::L0 => Statistic::L0,
            StatArg::L1 => Statistic::L1,
            StatArg::L2 => Statistic::L2,
            StatArg::Le => Statistic::Le,
            StatArg::Pb => Statistic::Pb,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signature and realizability of words (read from stdin when none are given).
    Check { words: Vec<String> },
    /// Exact rational points whose occupancy word is a rotation of WORD.
    Realize { word: String },
    /// All realizable words for one n, one per line.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Numbers of realizable words and bracelets for n in a range `a..b` (inclusive).
    Count {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Uniform realizable words or bracelets, or uniform point configurations.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value = "word")]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo estimate for uniform points, against its exact value.
    Estimate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        stat: StatArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Prefix letter statistics of uniform realizable words.
    Stats {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Comma-separated positions c in [0, 1].
        #[arg(long, value_delimiter = ',')]
        c_grid: Option<Vec<f64>>,
        /// Sample uniform bracelets instead of uniform words.
        #[arg(long)]
        bracelets: bool,
    },
    /// Runs the acceptance criteria and reports one line per criterion.
    Verify {
        /// Comma-separated criterion numbers; all by default.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
        /// Multiplier on Monte Carlo trial counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = AcceptanceConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

enum Failure {
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bound = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad bound {t:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (bound(a)?, bound(b.trim_start_matches('='))?),
        None => (bound(s)?, bound(s)?),
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.trim().parse().map_err(|e: Error| Failure::Invalid(format!("{s:?}: {e}")))
}

fn check_json(w: &Word) -> Value {
    let b = w.canonical_bracelet();
    json!({
        "word": w,
        "n": w.n(),
        "signature": w.signature().to_string(),
        "realizable": w.is_realizable(),
        "folded": w.fold().to_string(),
        "bracelet": b.canonical_word,
        "orbit_size": b.orbit_size,
    })
}

fn line(out: &mut String, v: &Value) {
    writeln!(out, "{v}").expect("writing to a string");
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn estimate_output(r: &EstimatorResult, format: Format) -> String {
    let v = serde_json::to_value(r).expect("serializable");
    match format {
        Format::Json => format!("{v}\n"),
        Format::Csv => {
            const FIELDS: [&str; 9] =
                ["statistic", "n", "estimate", "std_error", "trials", "seed", "target", "target_exact", "z"];
            let row: Vec<String> = FIELDS.iter().map(|f| csv_field(&v[*f])).collect();
            format!("{}\n{}\n", FIELDS.join(","), row.join(","))
        }
    }
}

/// Output text and whether verification (if any) went as expected.
fn run(command: Command) -> Result<(String, bool), Failure> {
    let mut out = String::new();
    let mut verified = true;
    match command {
        Command::Check { words } => {
            let words = if words.is_empty() {
                let mut input = String::new();
                io::stdin()
                    .read_to_string(&mut input)
                    .map_err(|e| Failure::Invalid(format!("cannot read stdin: {e}")))?;
                input.lines().filter(|l| !l.trim().is_empty()).map(str::to_string).collect()
            } else {
                words
            };
            for s in &words {
                line(&mut out, &check_json(&parse_word(s)?));
            }
        }
        Command::Realize { word } => {
            let w = parse_word(&word)?;
            let r = realize(&w)?;
            let positions: Vec<String> = r.config.positions().iter().map(format_rational).collect();
            let v = json!({
                "word": w,
                "offset": r.offset,
                "occupancy_word": occupancy_word(&r.config)?,
                "positions": positions,
                "plan": r.plan.to_json(),
            });
            line(&mut out, &v);
        }
        Command::Enumerate { n } => {
            for w in enumerate_words(n)? {
                writeln!(out, "{w}").expect("writing to a string");
            }
        }
        Command::Count { n, format } => {
            if let Format::Csv = format {
                out.push_str("n,words,bracelets\n");
            }
            for k in n {
                let (words, bracelets) = (count_words(k)?, count_bracelets(k)?);
                match format {
                    Format::Csv => writeln!(out, "{k},{words},{bracelets}").expect("writing to a string"),
                    Format::Json => line(&mut out, &json!({"n": k, "words": words.to_string(), "bracelets": bracelets})),
                }
            }
        }
        Command::Sample { n, count, kind, seed } => {
            let sampler = match kind {
                Kind::Points => None,
                _ => Some(WordSampler::new(n)?),
            };
            for i in 0..count {
                let rng = &mut trial_rng(seed, i);
                let v = match (kind, &sampler) {
                    (Kind::Word, Some(s)) => {
                        let w = s.sample_word(rng);
                        json!({"word": w, "signature": w.signature().to_string()})
                    }
                    (Kind::Bracelet, Some(s)) => {
                        let (b, _, attempts) = s.sample_bracelet(rng);
                        json!({"bracelet": b.canonical_word, "orbit_size": b.orbit_size, "attempts": attempts})
                    }
                    _ => {
                        let c = sample_uniform_config(n, rng)?;
                        let w = occupancy_word(&c)?;
                        json!({"positions": c.positions(), "word": w})
                    }
                };
                line(&mut out, &v);
            }
        }
        Command::Estimate { n, stat, trials, seed, workers, format } => {
            let r = estimate(stat.into(), n, trials, seed, workers)?;
            out = estimate_output(&r, format);
        }
        Command::Stats { n, trials, seed, workers, c_grid, bracelets } => {
            let grid = c_grid.unwrap_or_else(|| DEFAULT_C_GRID.to_vec());
            let kind = if bracelets { SampleKind::Bracelet } else { SampleKind::Word };
            let r = lln_clt_experiment(n, trials, &grid, seed, workers, kind)?;
            line(&mut out, &serde_json::to_value(&r).expect("serializable"));
        }
        Command::Verify { criteria, scale, seed, workers, format } => {
            if scale.is_nan() || scale <= 0.0 {
                return Err(Failure::Invalid(format!("scale must be positive, got {scale}")));
            }
            let ids = criteria.unwrap_or_else(|| CRITERIA.to_vec());
            if let Some(id) = ids.iter().find(|id| !CRITERIA.contains(id)) {
                return Err(Failure::Invalid(format!("no acceptance criterion {id}")));
            }
            let config = AcceptanceConfig { seed, workers, scale };
            for id in ids {
                let report = run_criterion(id, &config)?;
                verified &= report.as_expected();
                match format {
                    Format::Csv => writeln!(out, "{}", report.line()).expect("writing to a string"),
                    Format::Json => line(&mut out, &serde_json::to_value(&report).expect("serializable")),
                }
            }
        }
    }
    Ok((out, verified))
}

fn emit_stdout(s: &str) {
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(s.as_bytes());
    let _ = stdout.flush();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok((text, verified)) => {
            match cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => emit_stdout(&text),
            }
            if verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(2)
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
