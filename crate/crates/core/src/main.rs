use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use stbc_forge::construct::{self as c, ConstructError};
use stbc_forge::design::{gram, Classification};
use stbc_forge::io::{self, Format};
use stbc_forge::metrics::{self, Constellation, DesignMetrics};
use stbc_forge::sim::{self, Constraint, SimConfig};
use stbc_forge::Design;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable capping simulator worker threads.
const THREADS_ENV: &str = "STBC_FORGE_THREADS";

#[derive(Parser)]
#[command(
    name = "stbc-forge",
    version,
    about = "Construct, verify and simulate complex orthogonal designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a design from one of the construction families.
    Generate {
        #[command(flatten)]
        spec: FamilySpec,
        #[arg(long, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a design file: classification, Gram identity and, for
    /// single-atom designs, the local characterisation.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Rate, delay, zero fraction, duplicate counts and per-antenna PAPR.
    Metrics {
        #[command(flatten)]
        source: DesignSource,
        #[arg(long, default_value = "qpsk")]
        constellation: String,
    },
    /// Zero fractions by weight of the pairing mask, counted and closed form.
    Table1 {
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 7)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo symbol error rate over a Rayleigh block-fading link.
    Simulate {
        #[command(flatten)]
        source: DesignSource,
        #[arg(long, default_value = "avg")]
        constraint: ConstraintArg,
        /// SNR grid in dB as `start:step:stop`.
        #[arg(long)]
        snr: String,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "qpsk")]
        constellation: String,
        #[arg(long, default_value_t = 1)]
        n_rx: usize,
        /// Worker threads; `STBC_FORGE_THREADS` caps this.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Square COD G_a truncated to the first N columns.
    Square,
    /// The column-selected square design of order N−1 (transposes to N antennas).
    Tilde,
    /// Maximal-rate COD for N antennas via the transpose of the selected design.
    Maximal,
    /// Maximal-rate COD for N antennas via the direct construction.
    Hprime,
    /// Halved-delay COD for N = 4m antennas.
    Hat4m,
    /// The CIS base design for N antennas with rows paired under the mask.
    Paired,
    /// Coordinate-interleaved scaled COD for N antennas.
    Cis,
}

#[derive(Args)]
struct FamilySpec {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    antennas: usize,
    /// Pairing mask for `paired` and `cis`.
    #[arg(long, default_value_t = 1)]
    l: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DesignSourceGroup {
    #[arg(long)]
    design: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
}

#[derive(Args)]
struct DesignSource {
    #[command(flatten)]
    which: DesignSourceGroup,
    #[arg(long, requires = "family")]
    antennas: Option<usize>,
    #[arg(long, default_value_t = 1, requires = "family")]
    l: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
    Latex,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
            FormatArg::Latex => Format::Latex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstraintArg {
    Peak,
    Avg,
}

/// Failure split by exit code: bad input is 2, a failed check or run is 1.
enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome = Result<ExitCode, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn build(family: Family, antennas: usize, l: u64) -> Result<Design, ConstructError> {
    let order = |t: usize| -> Result<u32, ConstructError> {
        if t < 2 {
            return Err(ConstructError::InvalidAntennas(format!(
                "{t} antennas; need at least 2"
            )));
        }
        u32::try_from(t - 1).map_err(|_| ConstructError::InvalidAntennas(format!("{t} antennas")))
    };
    match family {
        Family::Square => {
            if antennas == 0 {
                return Err(ConstructError::InvalidAntennas("0 antennas".into()));
            }
            let a = antennas.next_power_of_two().trailing_zeros();
            c::truncated_square(a, antennas)
        }
        Family::Tilde => c::build_tilde(order(antennas)?),
        Family::Maximal => c::transpose_to_maximal(&c::build_tilde::<BigInt>(order(antennas)?)?),
        Family::Hprime => c::h_prime(order(antennas)?),
        Family::Hat4m => {
            if antennas == 0 || !antennas.is_multiple_of(4) {
                return Err(ConstructError::InvalidAntennas(format!(
                    "{antennas} antennas; need a positive multiple of 4"
                )));
            }
            c::hat_4m((antennas / 4) as u32)
        }
        Family::Paired => c::cis_base(antennas)?.pair_rows(l).map(|(d, _)| d),
        Family::Cis => c::cis_code(antennas, l),
    }
}

fn load(src: &DesignSource) -> Result<Design, Failure> {
    match (&src.which.design, src.which.family) {
        (Some(path), _) => io::read_design(path).map_err(usage),
        (None, Some(family)) => {
            let antennas = src
                .antennas
                .ok_or_else(|| usage("--family needs --antennas"))?;
            build(family, antennas, src.l).map_err(usage)
        }
        (None, None) => Err(usage("give --design or --family")),
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| runtime(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn constellation(name: &str) -> Result<Constellation, Failure> {
    Constellation::by_name(name)
        .ok_or_else(|| usage(format!("unknown constellation `{name}` (qpsk, qam16)")))
}

fn verify(path: &Path) -> Outcome {
    let d: Design = io::read_design(path).map_err(usage)?;
    let [p, n, k] = d.size();
    let class = d.classify();
    println!("size: [{p},{n},{k}]");
    println!("classification: {class}");
    if class == Classification::NotOrthogonal {
        let g = gram(&d);
        let bad = (0..n * n).find(|&i| {
            let (u, v) = (i / n, i % n);
            if u == v {
                !g[i].is_energy(k)
            } else {
                !g[i].is_zero()
            }
        });
        match bad {
            Some(i) => println!("gram: FAIL at ({}, {})", i / n, i % n),
            None => println!("gram: FAIL"),
        }
    } else {
        println!("gram: G^H G = (sum |x_i|^2) I");
    }
    match d.check_cod_characterization() {
        Ok(None) => println!("characterization: holds"),
        Ok(Some(v)) => println!("characterization: violated, {v}"),
        Err(_) => println!("characterization: not applicable (entries are not unit atoms)"),
    }
    Ok(if class == Classification::NotOrthogonal {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn show_metrics(d: &Design, cname: &str) -> Outcome {
    let cons = constellation(cname)?;
    let m = DesignMetrics::compute(d, Some(&cons)).map_err(runtime)?;
    let [p, n, k] = d.size();
    println!("size: [{p},{n},{k}]");
    println!("classification: {}", d.classify());
    println!("rate: {}", m.rate);
    println!("delay: {}", m.delay);
    println!(
        "zero_fraction: {} ({})",
        m.zero_fraction,
        metrics::to_decimal4(&m.zero_fraction)
    );
    let dups: Vec<String> = m.duplicate_counts.iter().map(ToString::to_string).collect();
    println!("duplicate_counts: {}", dups.join(","));
    if let Some(papr) = m.per_antenna_papr {
        for (j, v) in papr.iter().enumerate() {
            println!("papr[{j}] ({}): {v} ({:.4})", cons.name(), v.to_f64());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn table1(n_min: u32, n_max: u32, out: Option<&Path>) -> Outcome {
    if n_min < 1 || n_min > n_max {
        return Err(usage(format!(
            "need 1 <= n-min <= n-max, got {n_min}..{n_max}"
        )));
    }
    let rows = metrics::table1(n_min, n_max).map_err(runtime)?;
    let mut csv = String::from("n,w_l,fraction_counted,fraction_formula,match\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            r.w,
            metrics::to_decimal4(&r.counted),
            metrics::to_decimal4(&r.formula),
            r.matches()
        ));
    }
    emit(out, &csv)?;
    Ok(if rows.iter().all(|r| r.matches()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// `--threads` capped by the environment variable; `None` uses rayon's default.
fn workers(requested: Option<usize>) -> Result<Option<usize>, Failure> {
    let cap = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("{THREADS_ENV}={v} is not a count")))?,
        ),
        Err(_) => None,
    };
    let w = match (requested, cap) {
        (Some(r), Some(c)) => Some(r.min(c)),
        (r, c) => r.or(c),
    };
    if w == Some(0) {
        return Err(usage("thread count must be positive"));
    }
    Ok(w)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    source: &DesignSource,
    constraint: ConstraintArg,
    snr: &str,
    trials: u64,
    seed: u64,
    cname: &str,
    n_rx: usize,
    threads: Option<usize>,
    out: Option<&Path>,
) -> Outcome {
    let design = load(source)?;
    let snr_db = sim::parse_snr_grid(snr)
        .ok_or_else(|| usage(format!("bad --snr `{snr}`; expected start:step:stop")))?;
    let cfg = SimConfig {
        design,
        constellation: constellation(cname)?,
        n_rx,
        snr_db,
        constraint: match constraint {
            ConstraintArg::Peak => Constraint::Peak,
            ConstraintArg::Avg => Constraint::Average,
        },
        trials,
        seed,
        workers: workers(threads)?,
    };
    let result = sim::run(&cfg).map_err(|e| match e {
        sim::SimError::NoTrials | sim::SimError::EmptyGrid | sim::SimError::NoReceiver => usage(e),
        e => runtime(e),
    })?;
    for i in result.non_monotone_points() {
        eprintln!(
            "note: SER rises at {} dB; more trials would separate the points",
            result.points[i].snr_db
        );
    }
    emit(out, &result.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Generate { spec, format, out } => {
            let d = build(spec.family, spec.antennas, spec.l).map_err(usage)?;
            emit(out.as_deref(), &io::export(&d, format.into()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input } => verify(&input),
        Command::Metrics {
            source,
            constellation,
        } => show_metrics(&load(&source)?, &constellation),
        Command::Table1 { n_min, n_max, out } => table1(n_min, n_max, out.as_deref()),
        Command::Simulate {
            source,
            constraint,
            snr,
            trials,
            seed,
            constellation,
            n_rx,
            threads,
            out,
        } => simulate(
            &source,
            constraint,
            &snr,
            trials,
            seed,
            &constellation,
            n_rx,
            threads,
            out.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on malformed arguments
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
