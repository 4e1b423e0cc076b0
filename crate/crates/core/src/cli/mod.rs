//! Command-line front end of the `mgimpact` binary.
//!
//! Exit codes: 0 on success, 1 for usage and configuration errors, 2 for
//! numerical or measurement failures.

mod presets;
mod settings;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ensemble::{collapse_metric, config_hash, git_style_hash, run_ensemble, EnsembleConfig, EnsembleResult};
use crate::error::{Error, Result};
use crate::game::GameConfig;
use crate::metaorder::MetaOrderSpec;
use crate::replica::{critical_ns, permanent_impact_theory, saturation_shift, theory, ReplicaSolution};

pub use presets::{
    impact_config, impact_curves, scaled, slope_config, ExperimentPreset, Scaled, PRESET_BURN_IN_PER_PATTERN,
    PRESET_PATTERNS, PRESET_REALIZATIONS, SLOPE_DURATION_PER_PATTERN, SLOPE_NS_GRID, SLOPE_REALIZATIONS,
};
pub use settings::FileSettings;

#[derive(Debug, Parser)]
#[command(name = "mgimpact", version, about = "Meta-order impact in the grand-canonical Minority Game")]
struct Cli {
    /// Master seed of every ensemble.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// INI file with [run], [game], [metaorder] and [ensemble] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replica-symmetric solution at (n_s, n_p).
    Solve {
        #[arg(long)]
        ns: f64,
        #[arg(long, default_value_t = 1.0)]
        np: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Critical speculator density n_s*(n_p).
    Critical {
        #[arg(long, default_value_t = 1.0)]
        np: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Replica prediction on a grid of n_s up to the transition.
    Phase {
        #[arg(long, default_value_t = 1.0)]
        np: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// One ensemble with explicit parameters.
    Simulate(SimulateArgs),
    /// Impact curves of a published figure.
    Impact {
        #[arg(long, value_enum)]
        preset: ExperimentPreset,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        realizations: Option<u64>,
    },
    /// Saturation slope against n_s.
    SlopeVsNs {
        #[arg(long, value_enum, default_value_t = ExperimentPreset::Fig3)]
        preset: ExperimentPreset,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        realizations: Option<u64>,
    },
    /// Linear-response collapse of the h in {1, 2, 4} curves.
    Collapse {
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        realizations: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    patterns: Option<usize>,
    #[arg(long)]
    ns: Option<f64>,
    #[arg(long)]
    np: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// Meta-order duration T in steps.
    #[arg(long)]
    duration: Option<u64>,
    #[arg(long)]
    start: Option<u64>,
    #[arg(long)]
    realizations: Option<u64>,
    #[arg(long)]
    t_max: Option<u64>,
    #[arg(long)]
    baseline_window: Option<u64>,
    #[arg(long)]
    burn_in: Option<u64>,
    /// Measure the baseline on a copy of the relaxed game.
    #[arg(long)]
    twin_baseline: Option<bool>,
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_config() || matches!(e, Error::Io(_)) {
        1
    } else {
        2
    }
}

struct Globals {
    seed: u64,
    workers: Option<usize>,
    out_dir: PathBuf,
    file: FileSettings,
}

impl Globals {
    fn apply(&self, mut c: EnsembleConfig) -> EnsembleConfig {
        if let Some(w) = self.workers {
            c.workers = w;
        }
        c
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let file = match &cli.config {
        Some(p) => FileSettings::load(p)?,
        None => FileSettings::default(),
    };
    let g = Globals {
        seed: file.pick(cli.seed, "run.seed", 0)?,
        workers: match cli.workers {
            Some(w) => Some(w),
            None => file.get("run.workers")?,
        },
        out_dir: file.out_dir(cli.out_dir),
        file,
    };
    match cli.command {
        Command::Solve { ns, np, format } => solve(ns, np, format, out),
        Command::Critical { np, format } => critical(np, format, out),
        Command::Phase { np, points } => phase(np, points, &g, out),
        Command::Simulate(args) => simulate(args, &g, out),
        Command::Impact { preset, scale, realizations } => impact(preset, scale, realizations, &g, out),
        Command::SlopeVsNs { preset, scale, realizations } => slope_vs_ns(preset, scale, realizations, &g, out),
        Command::Collapse { scale, realizations } => collapse(scale, realizations, &g, out),
    }
}

const THEORY_HEADER: [&str; 6] = ["ns", "np", "zeta", "chi", "H_per_Ns", "ns_star"];

fn theory_row(s: &ReplicaSolution, ns_star: f64) -> [String; 6] {
    [s.n_s, s.n_p, s.zeta, s.chi, s.h_per_ns, ns_star].map(|v| format!("{v}"))
}

/// CSV writer preceded by a `# config_hash=...` line.
fn hashed_csv<W: Write>(mut w: W, hash: &str) -> Result<csv::Writer<W>> {
    writeln!(w, "# config_hash={hash}")?;
    Ok(csv::Writer::from_writer(w))
}

fn inputs_hash<T: Serialize>(inputs: &T) -> String {
    git_style_hash(&serde_json::to_vec(inputs).expect("inputs serialize"))
}

#[derive(Serialize)]
struct SolveOutput {
    #[serde(flatten)]
    solution: ReplicaSolution,
    ns_star: f64,
}

fn solve(ns: f64, np: f64, format: Format, out: &mut dyn Write) -> Result<()> {
    let solution = theory(ns, np)?;
    let ns_star = critical_ns(np)?.n_s;
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&SolveOutput { solution, ns_star })?)?,
        Format::Csv => {
            let mut w = hashed_csv(&mut *out, &inputs_hash(&("solve", ns, np)))?;
            w.write_record(THEORY_HEADER)?;
            w.write_record(theory_row(&solution, ns_star))?;
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CriticalOutput {
    n_p: f64,
    ns_star: f64,
    zeta: f64,
    /// `(n_s/2) Erf(zeta/sqrt2) - 1`
    residual_divergence: f64,
    /// `n_s F(zeta) - 1/zeta^2 + n_p`
    residual_saddle: f64,
}

fn critical(np: f64, format: Format, out: &mut dyn Write) -> Result<()> {
    let c = critical_ns(np)?;
    let (r1, r2) = c.residuals();
    match format {
        Format::Json => {
            let o = CriticalOutput { n_p: np, ns_star: c.n_s, zeta: c.zeta, residual_divergence: r1, residual_saddle: r2 };
            writeln!(out, "{}", serde_json::to_string_pretty(&o)?)?;
        }
        Format::Csv => {
            let mut w = hashed_csv(&mut *out, &inputs_hash(&("critical", np)))?;
            w.write_record(THEORY_HEADER)?;
            w.write_record([c.n_s, np, c.zeta, f64::INFINITY, 0.0, c.n_s].map(|v| format!("{v}")))?;
            w.flush()?;
        }
    }
    Ok(())
}

fn phase(np: f64, points: usize, g: &Globals, out: &mut dyn Write) -> Result<()> {
    if points < 2 {
        return Err(Error::Config("phase needs at least two points".into()));
    }
    let c = critical_ns(np)?;
    let dir = g.out_dir.join("phase");
    fs::create_dir_all(&dir)?;
    let path = dir.join("theory.csv");
    let mut w = hashed_csv(File::create(&path)?, &inputs_hash(&("phase", np, points)))?;
    w.write_record(THEORY_HEADER)?;
    for k in 1..points {
        let ns = c.n_s * k as f64 / points as f64;
        w.write_record(theory_row(&theory(ns, np)?, c.n_s))?;
    }
    w.write_record([c.n_s, np, c.zeta, f64::INFINITY, 0.0, c.n_s].map(|v| format!("{v}")))?;
    w.flush()?;
    writeln!(out, "wrote {} ({} rows), n_s* = {}", path.display(), points, c.n_s)?;
    Ok(())
}

fn simulate(a: SimulateArgs, g: &Globals, out: &mut dyn Write) -> Result<()> {
    let f = &g.file;
    let patterns: usize = f.pick(a.patterns, "game.patterns", 128)?;
    let p = patterns as u64;
    let mut game = GameConfig::new(patterns, f.pick(a.ns, "game.n_s", 1.0)?, f.pick(a.np, "game.n_p", 1.0)?)
        .with_seed(g.seed);
    game.burn_in_steps = f.pick(a.burn_in, "game.burn_in", game.burn_in_steps)?;
    let mut spec = MetaOrderSpec::new(f.pick(a.h, "metaorder.h", 1.0)?, f.pick(a.duration, "metaorder.duration", 5 * p)?);
    spec.start = f.pick(a.start, "metaorder.start", 0)?;
    let base = EnsembleConfig::new(game, spec, f.pick(a.realizations, "ensemble.realizations", 100)?);
    let config = EnsembleConfig {
        t_max: f.pick(a.t_max, "ensemble.t_max", base.t_max)?,
        baseline_window: f.pick(a.baseline_window, "ensemble.baseline_window", base.baseline_window)?,
        baseline_on_twin: f.pick(a.twin_baseline, "ensemble.twin_baseline", false)?,
        ..base
    };
    let res = run_ensemble(&g.apply(config))?;
    let dir = g.out_dir.join("simulate");
    let manifest = res.write_dir(&dir)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&manifest.summaries)?)?;
    Ok(())
}

fn realizations_or(flag: Option<u64>, default: u64) -> u64 {
    flag.unwrap_or(default)
}

fn write_curves(results: &[(String, EnsembleResult)], dir: &Path) -> Result<String> {
    let mut hashes = String::new();
    for (label, res) in results {
        res.write_dir(&dir.join(label))?;
        hashes.push_str(&config_hash(&res.config));
    }
    Ok(git_style_hash(hashes.as_bytes()))
}

fn run_curves(curves: Vec<(String, EnsembleConfig)>, g: &Globals) -> Result<Vec<(String, EnsembleResult)>> {
    curves
        .into_iter()
        .map(|(label, c)| {
            log::info!("running {label}");
            Ok((label, run_ensemble(&g.apply(c))?))
        })
        .collect()
}

fn estimate_cells(o: &crate::ensemble::Outcome) -> [String; 2] {
    match o.estimate() {
        Some(e) => [format!("{}", e.value), format!("{}", e.stderr)],
        None => [String::new(), String::new()],
    }
}

fn impact(
    preset: ExperimentPreset,
    scale: f64,
    realizations: Option<u64>,
    g: &Globals,
    out: &mut dyn Write,
) -> Result<()> {
    let s = scaled(scale, PRESET_REALIZATIONS)?;
    let s = Scaled { realizations: realizations_or(realizations, s.realizations), ..s };
    let results = run_curves(impact_curves(preset, s, g.seed)?, g)?;
    let dir = g.out_dir.join(preset.name());
    let hash = write_curves(&results, &dir)?;
    let mut w = hashed_csv(File::create(dir.join("summary.csv"))?, &hash)?;
    w.write_record([
        "label",
        "ns",
        "h",
        "delta_star",
        "delta_star_stderr",
        "delta_star_theory",
        "slope",
        "slope_stderr",
        "ratio",
        "ratio_stderr",
    ])?;
    for (label, r) in &results {
        let c = &r.config;
        let predicted = match theory(c.game.n_s, c.game.n_p) {
            Ok(t) => permanent_impact_theory(c.metaorder.h, c.metaorder.duration, c.game.patterns, t.chi),
            Err(Error::SymmetricPhase { .. }) => 0.0,
            Err(e) => return Err(e),
        };
        let mut row = vec![label.clone(), format!("{}", c.game.n_s), format!("{}", c.metaorder.h)];
        row.extend(estimate_cells(&r.summaries.permanent_impact));
        row.push(format!("{predicted}"));
        row.extend(estimate_cells(&r.summaries.saturation_slope));
        row.extend(estimate_cells(&r.summaries.execution_cost_ratio));
        w.write_record(&row)?;
        writeln!(out, "{label}: {}", serde_json::to_string(&r.summaries)?)?;
    }
    w.flush()?;
    writeln!(out, "wrote {}", dir.display())?;
    Ok(())
}

fn slope_vs_ns(
    preset: ExperimentPreset,
    scale: f64,
    realizations: Option<u64>,
    g: &Globals,
    out: &mut dyn Write,
) -> Result<()> {
    if preset != ExperimentPreset::Fig3 {
        return Err(Error::Config(format!("slope-vs-ns supports preset fig3, not {}", preset.name())));
    }
    let s = scaled(scale, SLOPE_REALIZATIONS)?;
    let n = realizations_or(realizations, s.realizations);
    let curves = SLOPE_NS_GRID
        .iter()
        .enumerate()
        .map(|(k, &ns)| {
            let mut c = slope_config(s.patterns, ns, n, g.seed);
            c.game.stream = (k as u64) << 32;
            (format!("ns={ns}"), c)
        })
        .collect();
    let results = run_curves(curves, g)?;
    let dir = g.out_dir.join(preset.name());
    fs::create_dir_all(&dir)?;
    let hash = git_style_hash(results.iter().map(|(_, r)| config_hash(&r.config)).collect::<String>().as_bytes());
    let mut w = hashed_csv(File::create(dir.join("slope_vs_ns.csv"))?, &hash)?;
    w.write_record(["ns", "slope_over_h", "stderr", "theory"])?;
    for (_, r) in &results {
        let ns = r.config.game.n_s;
        let predicted = match theory(ns, r.config.game.n_p) {
            Ok(t) => saturation_shift(1.0, t.chi),
            Err(Error::SymmetricPhase { .. }) => 0.0,
            Err(e) => return Err(e),
        };
        let cells = estimate_cells(&r.summaries.saturation_slope);
        w.write_record([format!("{ns}"), cells[0].clone(), cells[1].clone(), format!("{predicted}")])?;
        writeln!(out, "n_s = {ns}: slope/h = {} +- {} (theory {predicted:.4})", cells[0], cells[1])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CollapseOutput {
    metric: f64,
    collapsed: bool,
}

fn collapse(scale: f64, realizations: Option<u64>, g: &Globals, out: &mut dyn Write) -> Result<()> {
    let s = scaled(scale, PRESET_REALIZATIONS)?;
    let s = Scaled { realizations: realizations_or(realizations, s.realizations), ..s };
    let results = run_curves(impact_curves(ExperimentPreset::Fig2, s, g.seed)?, g)?;
    write_curves(&results, &g.out_dir.join("collapse"))?;
    let series: Vec<_> = results.iter().map(|(_, r)| &r.series).collect();
    let metric = collapse_metric(&series)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&CollapseOutput { metric, collapsed: metric <= 3.0 })?)?;
    Ok(())
}
