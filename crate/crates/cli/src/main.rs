//! Command-line front end: generate and inspect code sets, run scenarios
//! and preset sweeps, and validate the exact algebraic invariants.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use overcode::codes::{
    cross_correlation, generate_overloaded_set, is_hadamard, min_correlation_bound, ovsf_matrix,
    ExtraCount, OverloadedCodeSet,
};
use overcode::engine::{
    hadamard_baseline_scenario, preset_sweep, run_scenario, BerReport, LabeledSweep, Preset,
    ScenarioConfig, ScenarioMode, SweepPoint, UserSpec,
};
use overcode::phy::{ChannelConfig, FecConfig, ModulationScheme, SnrReference};
use overcode::tree::{CodeTree, NodeAddress, TrafficClass};

const SEED_ENV: &str = "OVERCODE_SEED";

#[derive(Parser)]
#[command(name = "overcode", version, about = "Partly overloaded CDMA spreading simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an overloaded code set and its cross-correlation matrix.
    Codes {
        /// Spreading factor (power of two).
        #[arg(long)]
        sf: usize,
        /// Number of extra sequences to generate, or "all".
        #[arg(long, default_value = "all")]
        extras: String,
    },
    /// Run one scenario from a config file.
    Run {
        /// Scenario config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Override a top-level config field, e.g. --set snr_db=12.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a standard figure sweep on the default scenario.
    Sweep {
        /// One of fig4, fig5, fig6, fig7.
        #[arg(long)]
        preset: Preset,
        /// Optional base config replacing the built-in defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the exact-arithmetic invariants; exits 1 on any violation.
    Validate,
}

#[derive(Args)]
struct OutputArgs {
    /// Seed override (wins over OVERCODE_SEED and the config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file (default: standard output).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker thread count (default: hardware parallelism); results do not
    /// depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// The on-disk scenario schema. Spreading codes are not listed: users get
/// codes in file order from the allocation policy of their class.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    sf: usize,
    iterations: u64,
    packet_bits: usize,
    snr_db: f64,
    snr_reference: SnrReference,
    seed: u64,
    modulation: ModulationScheme,
    fec: FecConfig,
    users: Vec<FileUser>,
    mode: ScenarioMode,
}

#[derive(Debug, Serialize, Deserialize)]
struct FileUser {
    class: TrafficClass,
    sending_probability: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Codes { sf, extras } => {
            print!("{}", codes_report(sf, &extras)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config, overrides, output } => {
            let cfg = scenario_from_file(&config, &overrides, output.seed)?;
            let report = with_workers(output.workers, || run_scenario(&cfg))
                .map_err(|e| e.to_string())?;
            let text = match output.format {
                Format::Csv => report_csv(None, None, &report),
                Format::Json => to_json(&report)?,
            };
            write_output(&output.output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { preset, config, output } => {
            let base = match config {
                Some(path) => scenario_from_file(&path, &[], output.seed)?,
                None => {
                    let mut cfg = overcode::engine::default_scenario();
                    if let Some(seed) = resolve_seed(output.seed, cfg.seed) {
                        cfg.seed = seed;
                    }
                    cfg
                }
            };
            let sweeps = with_workers(output.workers, || preset_sweep(preset, &base))
                .map_err(|e| e.to_string())?;
            let text = match output.format {
                Format::Csv => sweep_csv(&sweeps),
                Format::Json => to_json(&sweeps)?,
            };
            write_output(&output.output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate => {
            if validate() {
                println!("all invariants hold");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("validation failed");
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}

fn with_workers<T>(workers: Option<usize>, body: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match workers {
        None => body(),
        Some(count) => rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build()
            .expect("thread pool")
            .install(body),
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------- codes --

fn codes_report(sf: usize, extras: &str) -> Result<String, String> {
    let count = match extras {
        "all" => ExtraCount::All,
        k => ExtraCount::Count(
            k.parse::<usize>()
                .map_err(|_| format!("--extras takes \"all\" or a number, got {k:?}"))?,
        ),
    };
    let set = generate_overloaded_set(sf, count).map_err(|e| e.to_string())?;
    let mut out = set.to_text();
    out.push_str("\ncross-correlation matrix:\n");
    out.push_str(&correlation_matrix(&set));
    Ok(out)
}

fn correlation_matrix(set: &OverloadedCodeSet) -> String {
    let all: Vec<_> = set.all_sequences().collect();
    let mut out = String::new();
    for a in &all {
        let row: Vec<String> = all
            .iter()
            .map(|b| cross_correlation(a, b).expect("equal lengths").to_string())
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

// ------------------------------------------------------------ run/sweep --

fn scenario_from_file(
    path: &PathBuf,
    overrides: &[String],
    seed_flag: Option<u64>,
) -> Result<ScenarioConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    apply_overrides(&mut value, overrides)?;
    let file: FileConfig =
        serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
    let seed = resolve_seed(seed_flag, file.seed).unwrap_or(file.seed);
    scenario_from_config(file, seed)
}

/// Flag beats environment, environment beats the file value.
fn resolve_seed(flag: Option<u64>, _file: u64) -> Option<u64> {
    if flag.is_some() {
        return flag;
    }
    std::env::var(SEED_ENV).ok().and_then(|v| v.parse().ok())
}

fn apply_overrides(value: &mut serde_json::Value, overrides: &[String]) -> Result<(), String> {
    let object = value
        .as_object_mut()
        .ok_or_else(|| "config root is not an object".to_string())?;
    for entry in overrides {
        let (key, raw) = entry
            .split_once('=')
            .ok_or_else(|| format!("override {entry:?} is not KEY=VALUE"))?;
        if !object.contains_key(key) {
            return Err(format!("unknown config field {key:?}"));
        }
        // Interpret the value as JSON when possible, else as a bare string.
        let parsed = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        object.insert(key.to_string(), parsed);
    }
    Ok(())
}

fn scenario_from_config(file: FileConfig, seed: u64) -> Result<ScenarioConfig, String> {
    if !file.sf.is_power_of_two() {
        return Err(format!("sf {} is not a power of two", file.sf));
    }
    let mut tree = CodeTree::new(file.sf.trailing_zeros()).map_err(|e| e.to_string())?;
    let users = file
        .users
        .iter()
        .enumerate()
        .map(|(id, user)| {
            let code = tree.allocate(user.class, file.sf).map_err(|e| e.to_string())?;
            Ok(UserSpec {
                id: id as u64,
                class: user.class,
                sending_probability: user.sending_probability,
                code,
                fec: file.fec,
                modulation: file.modulation,
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let cfg = ScenarioConfig {
        sf: file.sf,
        users,
        channel: ChannelConfig { snr_db: file.snr_db, snr_reference: file.snr_reference },
        iterations: file.iterations,
        packet_bits: file.packet_bits,
        seed,
        mode: ScenarioMode::Proposed,
    };
    cfg.validate().map_err(|e| e.to_string())?;
    match file.mode {
        ScenarioMode::Proposed => Ok(cfg),
        ScenarioMode::HadamardBaseline => {
            hadamard_baseline_scenario(&cfg).map_err(|e| e.to_string())
        }
    }
}

const CSV_HEADER: &str = "sweep_value,class,transmitted_bits,bit_errors,ber,stderr,ber_paper_norm\n";

fn csv_float(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Class rows of one report; `sweep_value` is empty for plain runs and
/// `prefix` labels multi-scenario sweeps.
fn report_rows(
    out: &mut String,
    sweep_value: Option<f64>,
    prefix: Option<&str>,
    class_name: impl Fn(TrafficClass) -> String,
    report: &BerReport,
) {
    let value = sweep_value.map(|v| v.to_string()).unwrap_or_default();
    for class in &report.per_class {
        let name = match prefix {
            Some(p) => format!("{p}/{}", class_name(class.class)),
            None => class_name(class.class),
        };
        let _ = writeln!(
            out,
            "{value},{name},{},{},{},{},{}",
            class.transmitted_bits,
            class.bit_errors,
            csv_float(class.ber),
            csv_float(class.stderr),
            class.ber_paper_norm,
        );
    }
}

fn report_csv(sweep_value: Option<f64>, prefix: Option<&str>, report: &BerReport) -> String {
    let mut out = String::from(CSV_HEADER);
    report_rows(&mut out, sweep_value, prefix, |c| c.as_str().to_string(), report);
    out
}

fn sweep_csv(sweeps: &[LabeledSweep]) -> String {
    let mut out = String::from(CSV_HEADER);
    let labelled = sweeps.len() > 1;
    for sweep in sweeps {
        let prefix = labelled.then_some(sweep.label.as_str());
        for SweepPoint { value, report, baseline } in &sweep.points {
            report_rows(&mut out, Some(*value), prefix, |c| c.as_str().to_string(), report);
            if let Some(baseline) = baseline {
                report_rows(&mut out, Some(*value), prefix, |_| "baseline".to_string(), baseline);
            }
        }
    }
    out
}

// ------------------------------------------------------------- validate --

fn validate() -> bool {
    let mut all = true;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {name}", if ok { "ok" } else { "FAILED" });
        all &= ok;
    };

    // Hadamard identity in integer arithmetic.
    let mut hadamard = true;
    for n in 1..=6u32 {
        let matrix = ovsf_matrix(n).unwrap();
        hadamard &= is_hadamard(matrix.rows()).unwrap();
    }
    check("Hadamard identity (n 1..6)", hadamard);

    // Extras: orthogonal to the upper half, interfering below.
    let mut extras_ok = true;
    for sf in [4usize, 8, 16] {
        let set = generate_overloaded_set(sf, ExtraCount::All).unwrap();
        for extra in set.extras() {
            extras_ok &= set.upper().iter().all(|u| cross_correlation(extra, u).unwrap() == 0);
            extras_ok &=
                set.lower_base().iter().any(|l| cross_correlation(extra, l).unwrap() != 0);
        }
    }
    check("extras partition orthogonality (sf 4..16)", extras_ok);

    // Correlation bound: each extra meets the sqrt(N) minimum against the
    // full Hadamard matrix (exactly, for sf with an even exponent).
    let mut bound_ok = true;
    for sf in [4usize, 16] {
        let bound = min_correlation_bound(sf).unwrap();
        let set = generate_overloaded_set(sf, ExtraCount::All).unwrap();
        let matrix = ovsf_matrix(sf.trailing_zeros()).unwrap();
        for extra in set.extras() {
            bound_ok &=
                overcode::codes::max_cross_correlation(extra, &matrix).unwrap() >= bound as i64;
        }
    }
    check("sqrt(N) correlation bound", bound_ok);

    // Tree orthogonality agrees with the structural mother-code rule.
    let mut tree_ok = true;
    for max_layer in 2..=4u32 {
        let tree = CodeTree::new(max_layer).unwrap();
        let mut nodes = Vec::new();
        for layer in 0..=max_layer {
            for index in 0..(1u32 << layer) {
                nodes.push(NodeAddress::new(layer, index, 0));
            }
        }
        for a in &nodes {
            for b in &nodes {
                let numeric = tree.are_orthogonal(a, b).unwrap();
                let structural = !(a == b || overcode::tree::is_mother(a, b).unwrap());
                tree_ok &= numeric == structural;
            }
        }
    }
    check("tree orthogonality vs mother-code rule", tree_ok);

    all
}
