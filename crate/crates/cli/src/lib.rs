//! Command-line front end for `hyperepp`: cavity presets, device
//! performance, protocol runs, figure data and the self-check suite.

mod config;
mod output;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use hyperepp::analytics::{
    figure_data, swap_performance, swap_performance_balanced, Figure, Grid, QndPerformance,
    SwapAmplitudes, Table,
};
use hyperepp::cavity::{CavityParams, InteractionMode, ReflectionPair};
use hyperepp::protocol::run_epp;
use hyperepp::validation::{circuit_qnd_performance, circuit_swap_performance, run_validation};

pub use config::FileConfig;
pub use output::{emit_csv, plot_svg, write_csv};

/// Environment variable naming the directory for outputs without `--output`.
pub const OUTPUT_DIR_VAR: &str = "HYPEREPP_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config keys or argument values.
    Usage(String),
    /// Well-formed request that cannot be carried out.
    Failure(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failure(e) => write!(f, "{e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hyperepp::Error> for CliError {
    fn from(e: hyperepp::Error) -> Self {
        match e {
            hyperepp::Error::Argument(m) => CliError::Usage(m),
            e @ hyperepp::Error::Domain(_) => CliError::Failure(e.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperepp",
    version,
    about = "Hyperentanglement purification with NV-cavity parity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection coefficients of a cavity unit.
    Reflection {
        #[command(flatten)]
        cavity: CavityArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Fidelities and efficiencies of the parity checks.
    Qnd {
        #[command(flatten)]
        cavity: CavityArgs,
        /// Simulate the circuits instead of evaluating the closed forms.
        #[arg(long)]
        circuit: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Fidelity and efficiency of the polarization SWAP.
    Swap {
        #[command(flatten)]
        cavity: CavityArgs,
        /// Real input amplitudes α1 β1 α2 β2 (each pair is normalized);
        /// balanced inputs when omitted.
        #[arg(long, num_args = 4, value_names = ["A1", "B1", "A2", "B2"], allow_negative_numbers = true)]
        amplitudes: Option<Vec<f64>>,
        #[arg(long)]
        circuit: bool,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Runs purification rounds on the bit-flip ensemble.
    Epp {
        #[command(flatten)]
        cavity: CavityArgs,
        /// Initial fidelities in the P, F and S DOFs.
        #[arg(long = "F", num_args = 3, value_names = ["F1", "F2", "F3"])]
        fidelities: Option<Vec<f64>>,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Regenerates the data behind a figure.
    Figure {
        /// fig8a, fig8b, fig10, fig10-eta, fig11, fig11-eta, fig12, fig12-eta
        name: String,
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        stop: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Runs the circuit-versus-closed-form checks.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// CSV path, or `-` for standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// [g, κ, γ]/2π = [0.30, 26, 0.0004] GHz, resonant.
    Barclay,
    /// r = 1, r0 = −1.
    Ideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ideal,
    Realistic,
}

impl From<Mode> for InteractionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Ideal => InteractionMode::Ideal,
            Mode::Realistic => InteractionMode::Realistic,
        }
    }
}

/// Cavity parameters, quoted as X/2π in GHz. Explicit values override the
/// preset's.
#[derive(Debug, Clone, Default, Args)]
pub struct CavityArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Cavity detuning (ω_c − ω_p)/2π.
    #[arg(long, allow_negative_numbers = true)]
    pub delta_c: Option<f64>,
    /// NV detuning (ω₀ − ω_p)/2π.
    #[arg(long = "delta-0", allow_negative_numbers = true)]
    pub delta_0: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct IoArgs {
    /// Flat TOML file of flag values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV path, or `-` for standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also render the table as an SVG line plot.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true)
        .map_err(|_| CliError::Usage(format!("invalid {key} '{value}' in config")))
}

/// Resolved cavity: the reflection pair and, for non-ideal presets, the
/// parameters as X/2π in GHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cavity {
    pub per_two_pi: Option<[f64; 5]>,
    pub refl: ReflectionPair,
}

impl CavityArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<Cavity, CliError> {
        let preset = match (self.preset, &file.preset) {
            (Some(p), _) => p,
            (None, Some(s)) => parse_enum("preset", s)?,
            (None, None) => Preset::Barclay,
        };
        let given = [
            self.g.or(file.g),
            self.kappa.or(file.kappa),
            self.gamma.or(file.gamma),
            self.delta_c.or(file.delta_c),
            self.delta_0.or(file.delta_0),
        ];
        match preset {
            Preset::Ideal if given.iter().any(Option::is_some) => Err(CliError::Usage(
                "the ideal preset takes no cavity parameters".into(),
            )),
            Preset::Ideal => Ok(Cavity {
                per_two_pi: None,
                refl: ReflectionPair::ideal(),
            }),
            Preset::Barclay => {
                let base = [0.30, 26.0, 0.0004, 0.0, 0.0];
                let p: [f64; 5] = std::array::from_fn(|k| given[k].unwrap_or(base[k]));
                let params = CavityParams::from_per_two_pi(p[0], p[1], p[2], p[3], p[4])?;
                Ok(Cavity {
                    per_two_pi: Some(p),
                    refl: ReflectionPair::from_params(&params)?,
                })
            }
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    path.map_or_else(|| Ok(FileConfig::default()), FileConfig::load)
}

/// Where a command's CSV goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

fn destination(flag: Option<&PathBuf>, file: &FileConfig, stem: &str) -> Destination {
    match flag.or(file.output.as_ref()) {
        Some(p) if p.as_os_str() == "-" => Destination::Stdout,
        Some(p) => Destination::File(p.clone()),
        None => {
            let dir =
                std::env::var_os(OUTPUT_DIR_VAR).map_or_else(|| PathBuf::from("."), PathBuf::from);
            Destination::File(dir.join(format!("{stem}.csv")))
        }
    }
}

/// Result of one invocation: the table, where it goes and the summary line.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub destination: Destination,
    pub plot: Option<(PathBuf, String)>,
    pub summary: String,
    /// Extra diagnostic lines.
    pub details: Vec<String>,
    /// Optional leading text column: header and one name per row.
    pub row_names: Option<(String, Vec<String>)>,
    /// False when the command ran but its checks did not hold.
    pub ok: bool,
}

impl Report {
    /// Writes the CSV (and plot), then prints the summary to standard output,
    /// or to standard error when standard output carries the CSV.
    pub fn emit(&self) -> Result<(), CliError> {
        let names = self
            .row_names
            .as_ref()
            .map(|(h, n)| (h.as_str(), n.as_slice()));
        match &self.destination {
            Destination::Stdout => {
                let stdout = std::io::stdout();
                output::write_rows(&self.table, names, stdout.lock())?;
            }
            Destination::File(p) => output::emit_rows(&self.table, names, p)?,
        }
        if let Some((path, title)) = &self.plot {
            plot_svg(&self.table, title, path)?;
        }
        let written = match &self.destination {
            Destination::Stdout => String::new(),
            Destination::File(p) => format!(" -> {}", p.display()),
        };
        let line = format!("{}{written}", self.summary);
        let mut err = std::io::stderr().lock();
        for d in &self.details {
            writeln!(err, "{d}").map_err(anyhow::Error::from)?;
        }
        if self.destination == Destination::Stdout {
            writeln!(err, "{line}").map_err(anyhow::Error::from)?;
        } else {
            println!("{line}");
        }
        Ok(())
    }
}

fn table(columns: &[&str], rows: Vec<Vec<f64>>) -> Table {
    let mut t = Table::new(columns.iter().map(|c| c.to_string()).collect());
    t.rows = rows;
    t
}

fn refl_columns(refl: &ReflectionPair) -> [f64; 4] {
    [refl.r.re, refl.r.im, refl.r0.re, refl.r0.im]
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

fn finish(table: Table, io: &IoArgs, file: &FileConfig, stem: &str, summary: String) -> Report {
    let plot = io
        .plot
        .clone()
        .or_else(|| file.plot.clone())
        .map(|p| (p, stem.to_string()));
    Report {
        table,
        destination: destination(io.output.as_ref(), file, stem),
        plot,
        summary,
        details: Vec::new(),
        row_names: None,
        ok: true,
    }
}

/// Executes a parsed command line without writing anything.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Reflection { cavity, io } => {
            let file = load_config(io.config.as_deref())?;
            let c = cavity.resolve(&file)?;
            let params = c.per_two_pi.unwrap_or([f64::NAN; 5]);
            let coop = params[0] / (params[1] * params[2]).sqrt();
            let mut row = params.to_vec();
            row.push(coop);
            row.extend(refl_columns(&c.refl));
            let t = table(
                &[
                    "g",
                    "kappa",
                    "gamma",
                    "delta_c",
                    "delta_0",
                    "g_over_sqrt_kappa_gamma",
                    "r_re",
                    "r_im",
                    "r0_re",
                    "r0_im",
                ],
                vec![row],
            );
            Ok(finish(
                t,
                io,
                &file,
                "reflection",
                format!("reflection: {}", c.refl),
            ))
        }
        Command::Qnd {
            cavity,
            circuit,
            io,
        } => {
            let file = load_config(io.config.as_deref())?;
            let c = cavity.resolve(&file)?;
            let q = if *circuit || file.circuit == Some(true) {
                circuit_qnd_performance(&c.refl)?
            } else {
                QndPerformance::evaluate(&c.refl)?
            };
            let mut columns: Vec<String> = [
                "r_re", "r_im", "r0_re", "r0_im", "F_P1", "F_P2", "eta_P1", "eta_P2",
            ]
            .map(String::from)
            .to_vec();
            columns.extend((1..=8).map(|k| format!("F_S{k}")));
            columns.extend((1..=8).map(|k| format!("eta_S{k}")));
            let mut row = refl_columns(&c.refl).to_vec();
            row.extend(q.f_p.iter().chain(&q.eta_p).chain(&q.f_s).chain(&q.eta_s));
            let mut t = Table::new(columns);
            t.rows.push(row);
            let summary = format!(
                "qnd: F_P1 = {}, F_P2 = {}, eta_P1 = {}, F_S1 = {}, eta_S1 = {}",
                pct(q.f_p[0]),
                pct(q.f_p[1]),
                pct(q.eta_p[0]),
                pct(q.f_s[0]),
                pct(q.eta_s[0])
            );
            Ok(finish(t, io, &file, "qnd", summary))
        }
        Command::Swap {
            cavity,
            amplitudes,
            circuit,
            io,
        } => {
            let file = load_config(io.config.as_deref())?;
            let c = cavity.resolve(&file)?;
            let amps = match amplitudes.as_ref().or(file.amplitudes.as_ref()) {
                None => SwapAmplitudes::balanced(),
                Some(v) if v.len() == 4 => {
                    let pair = |a: f64, b: f64| -> Result<(Complex64, Complex64), CliError> {
                        let n = a.hypot(b);
                        if n == 0.0 || !n.is_finite() {
                            return Err(CliError::Usage(
                                "each amplitude pair needs a non-zero finite norm".into(),
                            ));
                        }
                        Ok((Complex64::new(a / n, 0.0), Complex64::new(b / n, 0.0)))
                    };
                    let (a1, b1) = pair(v[0], v[1])?;
                    let (a2, b2) = pair(v[2], v[3])?;
                    SwapAmplitudes::new(a1, b1, a2, b2)?
                }
                Some(v) => {
                    return Err(CliError::Usage(format!(
                        "amplitudes need 4 values, got {}",
                        v.len()
                    )))
                }
            };
            let s = if *circuit || file.circuit == Some(true) {
                circuit_swap_performance(&c.refl, &amps)?
            } else if amplitudes.is_none() && file.amplitudes.is_none() {
                swap_performance_balanced(&c.refl)?
            } else {
                swap_performance(&c.refl, &amps)?
            };
            let mut row = refl_columns(&c.refl).to_vec();
            row.extend([s.f_swap, s.eta_swap]);
            let t = table(
                &["r_re", "r_im", "r0_re", "r0_im", "F_SWAP", "eta_SWAP"],
                vec![row],
            );
            let summary = format!(
                "swap: F_SWAP = {}, eta_SWAP = {}",
                pct(s.f_swap),
                pct(s.eta_swap)
            );
            Ok(finish(t, io, &file, "swap", summary))
        }
        Command::Epp {
            cavity,
            fidelities,
            rounds,
            mode,
            io,
        } => {
            let file = load_config(io.config.as_deref())?;
            let fs = fidelities
                .clone()
                .or(file.fidelities.clone())
                .unwrap_or_else(|| vec![0.8; 3]);
            if fs.len() != 3 {
                return Err(CliError::Usage(format!(
                    "F needs 3 values, got {}",
                    fs.len()
                )));
            }
            let rounds = rounds.or(file.rounds).unwrap_or(1);
            let mode = match (mode, &file.mode) {
                (Some(m), _) => *m,
                (None, Some(s)) => parse_enum("mode", s)?,
                (None, None) => Mode::Ideal,
            };
            let refl = match mode {
                Mode::Ideal => ReflectionPair::ideal(),
                Mode::Realistic => cavity.resolve(&file)?.refl,
            };
            let report = run_epp(fs[0], fs[1], fs[2], rounds, mode.into(), &refl)?;
            let mut summary = format!(
                "epp: {} mode, {rounds} round(s) from ({}, {}, {}), F' = {:.6}",
                InteractionMode::from(mode).name(),
                fs[0],
                fs[1],
                fs[2],
                report.final_fidelity()
            );
            if let Some(first) = report.rounds.first() {
                summary.push_str(&format!(", Y1 = {:.6}, Y2 = {:.6}", first.y1, first.y2));
            }
            Ok(finish(report.table(), io, &file, "epp", summary))
        }
        Command::Figure {
            name,
            start,
            stop,
            points,
            io,
        } => {
            let file = load_config(io.config.as_deref())?;
            let figure = Figure::parse(name).ok_or_else(|| {
                let known: Vec<&str> = Figure::ALL.iter().map(|f| f.name()).collect();
                CliError::Usage(format!(
                    "unknown figure '{name}' (expected one of {})",
                    known.join(", ")
                ))
            })?;
            let d = figure.default_grid();
            let grid = Grid::new(
                start.or(file.start).unwrap_or(d.start),
                stop.or(file.stop).unwrap_or(d.stop),
                points.or(file.points).unwrap_or(d.points),
            )?;
            let t = figure_data(figure, &grid)?;
            let summary = format!("figure {}: {} points", figure.name(), t.rows.len());
            Ok(finish(t, io, &file, figure.name(), summary))
        }
        Command::Validate { config, output } => {
            let file = load_config(config.as_deref())?;
            let report = run_validation()?;
            let rows = report
                .checks
                .iter()
                .map(|c| vec![c.max_error, c.tolerance, if c.passed() { 1.0 } else { 0.0 }])
                .collect();
            let t = table(&["max_error", "tolerance", "passed"], rows);
            let names = report.checks.iter().map(|c| c.name.clone()).collect();
            let passed = report.checks.iter().filter(|c| c.passed()).count();
            let summary = format!(
                "validate: {passed}/{} checks passed, {} printed entries flagged",
                report.checks.len(),
                report.flags.len()
            );
            Ok(Report {
                table: t,
                destination: destination(output.as_ref(), &file, "validate"),
                plot: None,
                summary,
                details: report.to_string().lines().map(String::from).collect(),
                row_names: Some(("check".to_string(), names)),
                ok: report.passed(),
            })
        }
    }
}

/// Runs `cli` and writes its outputs.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let report = execute(cli)?;
    report.emit()?;
    if report.ok {
        Ok(())
    } else {
        Err(CliError::Failure(anyhow::anyhow!(
            "validation checks failed"
        )))
    }
}
