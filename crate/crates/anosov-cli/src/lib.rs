//! The `anosovtype` command line: argument parsing, dispatch and report formatting.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 input error,
//! 3 budget exhausted or undecided.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anosov_plane::cycles::{analyze, compare, CycleWord, GeometricTypeWithCycles, Verdict};
use anosov_plane::paths::{is_word_in, word_end};
use anosov_plane::render::{patch_record, patch_svg};
use anosov_plane::{develop, Budget, PlaneError};
use anosov_type::geomtype::validate;
use anosov_type::{
    all_equivalences, entropy, equivalence_class, periodic_word_count, transition_matrix, GeometricType, RawType,
};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "anosovtype", version, about = "Geometric types of Markov partitions: equivalence, symbolic data, development and cycle invariants")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Maximum number of developed rectangles.
    #[arg(long, global = true, default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
    pub budget_rects: u32,
    /// Maximum |scale exponent| of a developed rectangle.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(i32).range(1..))]
    pub budget_scale: i32,
    /// Cap on chain lengths in crossing and germ searches.
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    pub depth: u32,
    /// Decimal digits in rendered numbers.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: u32,
    /// Also write an SVG picture of the patch here (`develop` only).
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn budget(&self) -> Budget {
        Budget { max_rects: self.budget_rects as usize, max_scale_exp: self.budget_scale }
    }

    fn depth(&self) -> usize {
        self.depth as usize
    }

    fn precision(&self) -> usize {
        self.precision as usize
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a geometric type file.
    Validate { file: PathBuf },
    /// Decide whether two types are equivalent and report a witness.
    Equiv { a: PathBuf, b: PathBuf },
    /// List every type equivalent to the given one.
    Class { file: PathBuf },
    /// Transition matrix, periodic word counts and entropy enclosure.
    Sft {
        file: PathBuf,
        /// Largest period whose word count is reported.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        max_period: u32,
    },
    /// Develop a finite patch of the Markovian family.
    Develop { file: PathBuf },
    /// Compute the geometric type with cycles.
    Cycles {
        file: PathBuf,
        /// Shift the cycles of an orbit by powers of its generator, as `ORBIT=K`.
        #[arg(long = "shift", value_parser = parse_shift)]
        shifts: Vec<(usize, i32)>,
    },
    /// Compare two geometric types with cycles.
    Compare { a: PathBuf, b: PathBuf },
}

fn parse_shift(s: &str) -> Result<(usize, i32), String> {
    let (o, k) = s.split_once('=').ok_or_else(|| format!("expected ORBIT=K, got {s:?}"))?;
    let o = o.trim().parse().map_err(|e| format!("bad orbit index: {e}"))?;
    let k = k.trim().parse().map_err(|e| format!("bad shift: {e}"))?;
    Ok((o, k))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Budget(_) => "budget",
        }
    }
}

impl From<PlaneError> for CliError {
    fn from(e: PlaneError) -> Self {
        match e {
            PlaneError::BudgetExhausted { .. }
            | PlaneError::DepthExceeded
            | PlaneError::FrontierIncomplete(_)
            | PlaneError::NotMatched
            | PlaneError::Inconsistent(_) => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_raw(path: &Path) -> Result<RawType, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_type(path: &Path) -> Result<GeometricType, CliError> {
    validate(&read_raw(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Load a type with cycles; words are brought to canonical rotation and checked to be closed.
pub fn read_cycles(path: &Path) -> Result<GeometricTypeWithCycles, CliError> {
    let gc: GeometricTypeWithCycles =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut cycles = std::collections::BTreeSet::new();
    for c in &gc.cycles {
        let start = c.0.first().map(|s| s.rect).ok_or_else(|| CliError::Input("empty cycle word".into()))?;
        if !is_word_in(&gc.g, start, &c.0) || word_end(&gc.g, start, &c.0) != start {
            return Err(CliError::Input(format!("{}: cycle is not a closed path in the type", path.display())));
        }
        cycles.insert(CycleWord::canonical(&c.0));
    }
    Ok(GeometricTypeWithCycles { g: gc.g, cycles })
}

struct Report {
    body: Value,
    code: i32,
}

fn validate_cmd(file: &Path) -> Result<Report, CliError> {
    let raw = read_raw(file)?;
    Ok(match validate(&raw) {
        Ok(g) => Report {
            body: json!({ "valid": true, "n": g.n(), "handles": g.handle_count(), "orientation_positive": g.is_orientation_positive() }),
            code: EXIT_OK,
        },
        Err(e) => Report { body: json!({ "valid": false, "error": e.to_string() }), code: EXIT_NEGATIVE },
    })
}

fn equiv_cmd(a: &Path, b: &Path) -> Result<Report, CliError> {
    let (ga, gb) = (read_type(a)?, read_type(b)?);
    let w = all_equivalences(&ga, &gb).into_iter().next();
    let code = if w.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Report { body: json!({ "equivalent": w.is_some(), "witness": w }), code })
}

fn class_cmd(file: &Path) -> Result<Report, CliError> {
    let members: Vec<RawType> = equivalence_class(&read_type(file)?).iter().map(GeometricType::to_raw).collect();
    Ok(Report { body: json!({ "size": members.len(), "members": members }), code: EXIT_OK })
}

fn sft_cmd(file: &Path, max_period: u32, cfg: &RunConfig) -> Result<Report, CliError> {
    let g = read_type(file)?;
    let m = transition_matrix(&g);
    let irreducible = m.is_irreducible();
    let mut counts = serde_json::Map::new();
    for k in 1..=max_period {
        let c = periodic_word_count(&m, k);
        let v = u64::try_from(&c).map(Value::from).unwrap_or_else(|_| Value::from(c.to_string()));
        counts.insert(k.to_string(), v);
    }
    let entropy = if irreducible {
        let tol = BigRational::new(1.into(), BigInt::from(10u32).pow(cfg.precision));
        let e = entropy(&m, &tol).map_err(|e| CliError::Input(e.to_string()))?;
        let (lo, hi) = e.to_decimal(cfg.precision() + 1);
        json!({ "lo": lo, "hi": hi })
    } else {
        Value::Null
    };
    Ok(Report { body: json!({ "matrix": m, "irreducible": irreducible, "entropy": entropy, "counts": counts }), code: EXIT_OK })
}

fn develop_cmd(file: &Path, cfg: &RunConfig) -> Result<Report, CliError> {
    let p = develop(&read_type(file)?, cfg.budget())?;
    if let Some(svg) = &cfg.svg {
        fs::write(svg, patch_svg(&p, cfg.precision())).map_err(|e| CliError::Input(format!("{}: {e}", svg.display())))?;
    }
    let body = serde_json::to_value(patch_record(&p, cfg.precision())).expect("serializable");
    Ok(Report { body, code: EXIT_OK })
}

#[derive(Serialize)]
struct OrbitInfo {
    period: i32,
    point: [String; 2],
}

fn cycles_cmd(file: &Path, shifts: &[(usize, i32)], cfg: &RunConfig) -> Result<Report, CliError> {
    let g = read_type(file)?;
    let shifts: BTreeMap<usize, i32> = shifts.iter().copied().collect();
    let a = analyze(&g, cfg.budget(), cfg.depth(), &shifts)?;
    if let Some(&bad) = shifts.keys().find(|&&o| o >= a.orbits.len()) {
        return Err(CliError::Input(format!("no orbit {bad}; {} detected", a.orbits.len())));
    }
    let orbits: Vec<OrbitInfo> = a
        .orbits
        .iter()
        .map(|o| OrbitInfo {
            period: o.period(),
            point: [o.point.0.to_decimal(cfg.precision()), o.point.1.to_decimal(cfg.precision())],
        })
        .collect();
    let mut body = serde_json::to_value(&a.cycles).expect("serializable");
    body["normal_form"] = json!("rotation-minimal");
    body["orbits"] = json!(orbits);
    Ok(Report { body, code: EXIT_OK })
}

fn compare_cmd(a: &Path, b: &Path, cfg: &RunConfig) -> Result<Report, CliError> {
    let (ca, cb) = (read_cycles(a)?, read_cycles(b)?);
    let c = compare(&ca, &cb, cfg.budget(), cfg.depth());
    let offsets: BTreeMap<String, i32> = c.offsets.iter().enumerate().map(|(i, &k)| (i.to_string(), k)).collect();
    let code = match c.verdict {
        Verdict::OrbitEquivalent | Verdict::EquivalentUpToSurgeries => EXIT_OK,
        Verdict::NotEquivalent => EXIT_NEGATIVE,
        Verdict::Unknown => EXIT_BUDGET,
    };
    let body = json!({ "verdict": c.verdict, "offsets": offsets, "witness": c.witness, "diagnostics": c.diagnostics });
    Ok(Report { body, code })
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Validate { file } => validate_cmd(file),
        Command::Equiv { a, b } => equiv_cmd(a, b),
        Command::Class { file } => class_cmd(file),
        Command::Sft { file, max_period } => sft_cmd(file, *max_period, cfg),
        Command::Develop { file } => develop_cmd(file, cfg),
        Command::Cycles { file, shifts } => cycles_cmd(file, shifts, cfg),
        Command::Compare { a, b } => compare_cmd(a, b, cfg),
    }
}

/// Run with the given arguments (program name first); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.body).expect("serializable") + "\n";
            let written = match &cli.config.out {
                Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => report.code,
                Err(e) => {
                    let _ = writeln!(err, "{}", json!({ "error": "io", "message": e }));
                    EXIT_INPUT
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.kind(), "message": e.to_string() }));
            e.exit_code()
        }
    }
}

/// Size the global worker pool from `ANOSOVTYPE_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("ANOSOVTYPE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
