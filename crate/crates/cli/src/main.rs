//! Command-line surface: sequence generation, complexity and repetition
//! measurements, approximation records, classification reports, and the
//! built-in verification suites. Outputs are deterministic for a fixed
//! `(spec, flags, seed)`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_words::classify::{classify, independence_report, ClassifyOptions};
use padic_words::complexity;
use padic_words::generators::{
    spec::parse_ratio, verify_st_identity, SequenceSpec, Stream,
};
use padic_words::padic::{
    best_rational_approximations, liouville_check, periodic_value, PadicDigits,
};
use padic_words::quadratic::QuadraticIrrational;
use padic_words::repetition::{dio_lower_bound, repetition_scan};
use padic_words::words::FiniteWord;

const BUILTIN_SPECS: &[(&str, &str)] = &[
    ("thue-morse", include_str!("../assets/thue_morse.json")),
    ("fibonacci-word", include_str!("../assets/fibonacci_word.json")),
    ("period-doubling", include_str!("../assets/period_doubling.json")),
    ("golden-sturmian", include_str!("../assets/golden_sturmian.json")),
];

#[derive(Parser)]
#[command(
    name = "padicwords",
    about = "exact digit sequences, their regularity measurements, and p-adic approximation reports",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Built-in spec name (thue-morse, fibonacci-word, period-doubling,
    /// golden-sturmian) or a path to a spec JSON file.
    #[arg(long)]
    spec: String,
    /// Output directory; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first digits of a sequence.
    Generate {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        length: usize,
    },
    /// Subword complexity profile with the family bound (CSV: n,p_n,bound,pass).
    Complexity {
        #[command(flatten)]
        common: CommonOpts,
        /// Window (prefix length) the profile is measured on.
        #[arg(long, default_value_t = 4096)]
        window: usize,
        #[arg(long = "n-max", default_value_t = 64)]
        n_max: usize,
    },
    /// Constructive repetition triples with the independent checker (JSON rows).
    Repetitions {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long = "n-from", default_value_t = 2)]
        n_from: usize,
        #[arg(long = "n-to", default_value_t = 64)]
        n_to: usize,
        /// Complexity slope; measured on a prefix when omitted.
        #[arg(long)]
        kappa: Option<u64>,
    },
    /// Repetition-exponent evidence over a ladder of prefix lengths.
    Dio {
        #[command(flatten)]
        common: CommonOpts,
        /// Comma-separated strictly increasing prefix lengths.
        #[arg(long, value_delimiter = ',', default_values_t = vec![100usize, 1000, 10000])]
        ladder: Vec<usize>,
    },
    /// Best rational approximants per precision level (JSON lines).
    Approx {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        prime: u64,
        /// Deepest precision level.
        #[arg(long, default_value_t = 16)]
        precision: u32,
        /// Height cap for the search.
        #[arg(long = "height-cap", default_value_t = 1000)]
        height_cap: u64,
    },
    /// Full classification report.
    Classify {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        prime: u64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![100usize, 1000, 10000])]
        ladder: Vec<usize>,
    },
    /// Contrast a certified-bounded-slope spec against a declared-unbounded one.
    Independence {
        /// Built-in name or path (quadratic slope).
        #[arg(long = "spec-a")]
        spec_a: String,
        /// Built-in name or path (declared-unbounded slope).
        #[arg(long = "spec-b")]
        spec_b: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![100usize, 1000, 10000])]
        ladder: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Built-in verification suites; exit 0 = pass, 1 = fail, 2 = error.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Beatty-indicator/Sturmian identity on exact quadratic data.
    St {
        /// Quadratic slope a,b,c,d meaning (a + b sqrt(d))/c; random when omitted.
        #[arg(long)]
        theta: Option<String>,
        /// Exact rational intercept "num/den".
        #[arg(long, default_value = "0")]
        rho: String,
        #[arg(long, default_value_t = 10_000)]
        terms: u64,
        /// Number of random (theta, rho) pairs when --theta is omitted.
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Height bound H(periodic value) <= p^(|U|+|V|) on random digit blocks.
    Height {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degree-1 lower bound |a-b|_p >= (4 H(a) H(b))^-1 on random pairs.
    Liouville {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Single prime; {2, 3, 5} when omitted.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Constructive repetition triples re-verified by the independent checker.
    Repetition {
        #[arg(long)]
        spec: String,
        #[arg(long = "n-from", default_value_t = 2)]
        n_from: usize,
        #[arg(long = "n-to", default_value_t = 64)]
        n_to: usize,
        #[arg(long)]
        kappa: Option<u64>,
    },
}

fn load_spec(name_or_path: &str) -> Result<SequenceSpec> {
    let text = match BUILTIN_SPECS.iter().find(|(n, _)| *n == name_or_path) {
        Some((_, text)) => (*text).to_string(),
        None => std::fs::read_to_string(name_or_path)
            .with_context(|| format!("reading spec file {name_or_path}"))?,
    };
    Ok(SequenceSpec::from_json(&text)?)
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        bail!("{p} is not prime");
    }
    Ok(())
}

fn check_ladder(ladder: &[usize]) -> Result<()> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
        bail!("ladder must be nonempty and strictly increasing");
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, file_name: &str, payload: &str) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = Path::new(dir).join(file_name);
            std::fs::write(&path, payload)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{payload}"),
    }
    Ok(())
}

/// Measure the complexity slope on a prefix long enough for the scan range.
/// Sequences without linear complexity make this diverge, so give up after a
/// few rounds and ask for an explicit value.
fn measured_kappa(stream: &mut Stream, n_to: usize) -> Result<u64> {
    let mut kappa = 2u64;
    for _ in 0..8 {
        let prefix = stream.prefix((kappa as usize + 1) * n_to)?;
        let profile = complexity::profile(&prefix, n_to)?;
        let report = complexity::complexity_kappa(&profile, 1, n_to)?;
        if report.kappa <= kappa {
            return Ok(kappa);
        }
        kappa = report.kappa;
    }
    bail!(
        "complexity does not stabilize below {kappa} * n on the examined windows; \
         the sequence may not have linear complexity - pass --kappa explicitly"
    );
}

fn family_for(spec: &SequenceSpec, stream_alphabet: u32) -> complexity::Family {
    match spec {
        SequenceSpec::Automaton { k, states, .. } => {
            complexity::Family::Automatic { k: *k as u64, d: *states as u64 }
        }
        SequenceSpec::Morphic { images, .. } => {
            let width = images.iter().map(|w| w.len()).max().unwrap_or(1) as u64;
            if images.iter().all(|w| w.len() == images[0].len()) {
                complexity::Family::Automatic { k: width, d: images.len() as u64 }
            } else {
                complexity::Family::PrimitiveMorphic { width, alphabet: images.len() as u64 }
            }
        }
        SequenceSpec::Sturmian { .. } | SequenceSpec::Indicator { .. } => {
            let _ = stream_alphabet;
            complexity::Family::Sturmian
        }
    }
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate { common, length } => {
            let spec = load_spec(&common.spec)?;
            let mut stream = spec.build()?;
            let word = stream.prefix(length)?;
            let payload = match common.format {
                Format::Json => format!("{}\n", serde_json::to_string(word.symbols())?),
                Format::Csv | Format::Text => format!("{word}\n"),
            };
            emit(&common.out, "digits.txt", &payload)?;
            Ok(0)
        }
        Command::Complexity { common, window, n_max } => {
            let spec = load_spec(&common.spec)?;
            let mut stream = spec.build()?;
            let prefix = stream.prefix(window)?;
            let profile = complexity::profile(&prefix, n_max)?;
            let family = family_for(&spec, stream.alphabet_size());
            let report = complexity::check_complexity_bound(family, &profile)?;
            let payload = match common.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
                Format::Csv | Format::Text => report.to_csv(),
            };
            emit(&common.out, "complexity.csv", &payload)?;
            Ok(if report.all_pass { 0 } else { 1 })
        }
        Command::Repetitions { common, n_from, n_to, kappa } => {
            let spec = load_spec(&common.spec)?;
            let mut stream = spec.build()?;
            let kappa = match kappa {
                Some(k) => k.max(2),
                None => measured_kappa(&mut stream, n_to)?,
            };
            let rows = repetition_scan(&mut stream, n_from, n_to, kappa)?;
            let mut payload = String::new();
            let mut all_ok = true;
            for row in &rows {
                writeln!(payload, "{}", serde_json::to_string(row)?)?;
                all_ok &= row.report.as_ref().map(|r| r.checks.all()).unwrap_or(false);
            }
            emit(&common.out, "repetitions.jsonl", &payload)?;
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Dio { common, ladder } => {
            check_ladder(&ladder)?;
            let spec = load_spec(&common.spec)?;
            let mut stream = spec.build()?;
            let est = dio_lower_bound(&mut stream, &ladder)?;
            let mut payload = String::new();
            match common.format {
                Format::Text => {
                    writeln!(payload, "certified repetition-exponent evidence: {}", est.bound)?;
                    for rung in &est.rungs {
                        writeln!(
                            payload,
                            "  prefix {:>9}: best ratio {} (|UV^w| = {}, |UV| = {})",
                            rung.prefix_len,
                            rung.triple.ratio(),
                            rung.triple.total_len(),
                            rung.triple.head.len() + rung.triple.block.len(),
                        )?;
                    }
                }
                Format::Json | Format::Csv => {
                    let rungs: Vec<serde_json::Value> = est
                        .rungs
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "prefix_len": r.prefix_len,
                                "ratio": r.triple.ratio().to_string(),
                                "u_len": r.triple.head.len(),
                                "v_len": r.triple.block.len(),
                                "w": r.triple.exponent.to_string(),
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "bound": est.bound.to_string(),
                        "chain_len": est.chain.len(),
                        "rungs": rungs,
                    });
                    writeln!(payload, "{}", serde_json::to_string_pretty(&doc)?)?;
                }
            }
            emit(&common.out, "dio.json", &payload)?;
            Ok(0)
        }
        Command::Approx { common, prime, precision, height_cap } => {
            check_prime(prime)?;
            let spec = load_spec(&common.spec)?;
            let stream = spec.build()?;
            let structural =
                matches!(spec, SequenceSpec::Sturmian { .. } | SequenceSpec::Indicator { .. });
            let digits = PadicDigits::new(prime, stream)?;
            let mut digits =
                if structural { digits.with_nonperiodic_certificate() } else { digits };
            let records =
                best_rational_approximations(&mut digits, precision, &BigUint::from(height_cap))?;
            let mut payload = String::new();
            for rec in &records {
                writeln!(payload, "{}", rec.to_json_line(prime))?;
            }
            emit(&common.out, "approx.jsonl", &payload)?;
            Ok(0)
        }
        Command::Classify { common, prime, ladder } => {
            check_prime(prime)?;
            check_ladder(&ladder)?;
            let spec = load_spec(&common.spec)?;
            let report = classify(&spec, prime, &ClassifyOptions::new(ladder))?;
            let payload = match common.format {
                Format::Json | Format::Csv => format!("{}\n", report.to_json()),
                Format::Text => report.to_text(),
            };
            emit(&common.out, "classify.json", &payload)?;
            Ok(if report.sanity_all_pass() { 0 } else { 1 })
        }
        Command::Independence { spec_a, spec_b, prime, ladder, out, format } => {
            check_prime(prime)?;
            check_ladder(&ladder)?;
            let a = load_spec(&spec_a)?;
            let b = load_spec(&spec_b)?;
            let report = independence_report(&a, &b, prime, &ClassifyOptions::new(ladder))?;
            let payload = match format {
                Format::Json | Format::Csv => format!("{}\n", report.to_json()),
                Format::Text => report.to_text(),
            };
            emit(&out, "independence.json", &payload)?;
            Ok(0)
        }
        Command::Verify { which } => run_verify(which),
    }
}

fn run_verify(which: VerifyCommand) -> Result<i32> {
    match which {
        VerifyCommand::St { theta, rho, terms, count, seed } => {
            let rho = parse_ratio(&rho)?;
            let cases: Vec<(QuadraticIrrational, BigRational)> = match theta {
                Some(text) => {
                    let parts: Vec<i64> = text
                        .split(',')
                        .map(|t| t.trim().parse().map_err(|_| anyhow!("bad theta component {t}")))
                        .collect::<Result<_>>()?;
                    if parts.len() != 4 {
                        bail!("--theta needs four integers a,b,c,d");
                    }
                    vec![(QuadraticIrrational::new(parts[0], parts[1], parts[2], parts[3])?, rho)]
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut cases = Vec::new();
                    while cases.len() < count {
                        let d = [2i64, 3, 5, 6, 7, 10, 11, 13][rng.random_range(0..8)];
                        let a = rng.random_range(-6i64..=10);
                        let b = rng.random_range(1i64..=4);
                        let c = rng.random_range(1i64..=4);
                        let Ok(theta) = QuadraticIrrational::new(a, b, c, d) else { continue };
                        if theta.cmp_rational(&BigRational::one()) != std::cmp::Ordering::Greater {
                            continue;
                        }
                        let rho = BigRational::new(
                            BigInt::from(rng.random_range(-20i64..=20)),
                            BigInt::from(rng.random_range(1i64..=12)),
                        );
                        cases.push((theta, rho));
                    }
                    cases
                }
            };
            for (i, (theta, rho)) in cases.iter().enumerate() {
                let v = verify_st_identity(theta, rho, terms)?;
                if !v.holds {
                    println!("fail: case {i} at {:?}", v.first_failure);
                    return Ok(1);
                }
            }
            println!("pass: {} case(s), {terms} terms each", cases.len());
            Ok(0)
        }
        VerifyCommand::Height { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let p = [2u64, 3, 5, 7][rng.random_range(0..4)];
                let r = rng.random_range(0usize..=6);
                let s = rng.random_range(1usize..=6);
                let head = FiniteWord::new(
                    (0..r).map(|_| rng.random_range(0..p) as u32).collect(),
                    p as u32,
                )?;
                let block = FiniteWord::new(
                    (0..s).map(|_| rng.random_range(0..p) as u32).collect(),
                    p as u32,
                )?;
                let alpha = periodic_value(&head, &block, p)?;
                let bound = num_traits::Pow::pow(&BigUint::from(p), (r + s) as u64);
                if alpha.height() > bound {
                    println!("fail: H({alpha}) > {p}^{}", r + s);
                    return Ok(1);
                }
            }
            println!("pass: {trials} trials");
            Ok(0)
        }
        VerifyCommand::Liouville { trials, seed, prime } => {
            let primes = match prime {
                Some(p) => {
                    check_prime(p)?;
                    vec![p]
                }
                None => vec![2, 3, 5],
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for p in primes {
                for _ in 0..trials {
                    let mut draw = || -> Result<padic_words::padic::ExactRational> {
                        Ok(padic_words::padic::ExactRational::new(
                            BigInt::from(rng.random_range(-3000i64..=3000)),
                            BigInt::from(rng.random_range(1i64..=1500)),
                        )?)
                    };
                    let a = draw()?;
                    let b = draw()?;
                    if a == b {
                        continue;
                    }
                    if !liouville_check(&a, &b, p)? {
                        println!("fail: |{a} - {b}|_{p} below the degree-1 bound");
                        return Ok(1);
                    }
                }
            }
            println!("pass: {trials} trials per prime");
            Ok(0)
        }
        VerifyCommand::Repetition { spec, n_from, n_to, kappa } => {
            let spec = load_spec(&spec)?;
            let mut stream = spec.build()?;
            let kappa = match kappa {
                Some(k) => k.max(2),
                None => measured_kappa(&mut stream, n_to)?,
            };
            let rows = repetition_scan(&mut stream, n_from, n_to, kappa)?;
            let mut fails = 0usize;
            for row in &rows {
                match &row.report {
                    Some(rep) if rep.checks.all() => {}
                    Some(rep) => {
                        println!("fail: n = {} checks {:?}", row.n, rep.checks);
                        fails += 1;
                    }
                    None => {
                        println!("fail: n = {} infeasible ({})", row.n, row.error.as_deref().unwrap_or(""));
                        fails += 1;
                    }
                }
            }
            if fails == 0 {
                println!("pass: n in [{n_from}, {n_to}], kappa = {kappa}");
                Ok(0)
            } else {
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
