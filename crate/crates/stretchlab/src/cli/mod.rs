//! Command-line front end: spectra, wavefunctions, 2D grids and adiabatic
//! diagnostics as CSV/JSON/SVG, plus the self-validation suite.

mod commands;
mod preset;
mod table;
pub mod validate;

pub use preset::Preset;
pub use table::{format_number, Cell, Table};

use crate::potentials::PiecewisePotential;
use crate::{Error, Result};
use clap::{Parser, ValueEnum};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const MIN_RESOLUTION: usize = 401;
const MAX_SWEEP_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Energies over a sweep of stretch lengths.
    Spectrum,
    /// Sampled eigenfunctions at one stretch length.
    Wavefunctions,
    /// Stretched 2D ground state on a square grid.
    Grid2d,
    /// Validity margin of the waveguide ansatz along y.
    Adiabatic,
    /// Run the invariant suite and emit a JSON report.
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "stretchlab", version, about = "Stretching potentials and flat-plateau bound states")]
#[command(allow_negative_numbers = true)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Built-in parameter set (fig3..fig7, waveguide, waveguide-harmonic, or a descriptive alias).
    #[arg(long, conflicts_with = "potential")]
    pub preset: Option<String>,
    /// Piecewise potential as JSON.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// lo:hi:step of the (first) stretch length, or of y for `adiabatic`.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    /// lo:hi:step of the second stretch length.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep2: Option<String>,
    /// Stretch length(s) for `wavefunctions` and `grid2d`, as `L` or `L1,L2`.
    #[arg(long)]
    pub at: Option<String>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Grid points per axis.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub l_in: Option<f64>,
    #[arg(long)]
    pub l_fin: Option<f64>,
    #[arg(long)]
    pub y_in: Option<f64>,
    #[arg(long)]
    pub y_fin: Option<f64>,
    /// Longitudinal wave number.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, hide = true, default_value_t = 0.0)]
    pub perturb_plateau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Preset(Preset),
    Potential(PiecewisePotential),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub l_in: f64,
    pub l_fin: f64,
    pub y_in: f64,
    pub y_fin: f64,
    pub k: f64,
}

/// Validated command configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub source: Option<Source>,
    pub sweep: Vec<f64>,
    pub sweep2: Vec<f64>,
    pub at: (f64, f64),
    pub levels: usize,
    pub resolution: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub profile: Profile,
    pub perturb_plateau: f64,
}

/// Inclusive `lo:hi:step` grid, snapped to 12 decimals so that 0.15 prints as 0.15.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("sweep {text:?} must be lo:hi:step with lo <= hi, step > 0"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let [lo, hi, step] = parts[..] else { return Err(bad()) };
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && step.is_finite() && lo <= hi) {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > MAX_SWEEP_POINTS {
        return Err(Error::InvalidParameter(format!("sweep {text:?} has {count} points")));
    }
    Ok((0..count)
        .map(|i| ((lo + step * i as f64) * 1e12).round() / 1e12)
        .collect())
}

fn sweep_from(range: (f64, f64, f64)) -> Vec<f64> {
    parse_sweep(&format!("{}:{}:{}", range.0, range.1, range.2)).expect("preset sweeps are valid")
}

fn parse_at(text: &str) -> Result<(f64, f64)> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("--at {text:?} must be L or L1,L2")))?;
    match vals[..] {
        [l] => Ok((l, 0.0)),
        [l1, l2] => Ok((l1, l2)),
        _ => Err(Error::InvalidParameter(format!("--at {text:?} must be L or L1,L2"))),
    }
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<RunConfig> {
        let source = match (&args.preset, &args.potential) {
            (Some(name), _) => Some(Source::Preset(name.parse()?)),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
                Some(Source::Potential(PiecewisePotential::from_json(&text)?))
            }
            (None, None) => match args.command {
                Command::Grid2d => Some(Source::Preset(Preset::Grid2d)),
                Command::Adiabatic => Some(Source::Preset(Preset::Waveguide)),
                Command::Validate => None,
                _ => return Err(Error::InvalidParameter("--preset or --potential is required".into())),
            },
        };
        let preset = match &source {
            Some(Source::Preset(p)) => Some(*p),
            _ => None,
        };
        let wants = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} does not apply to {:?}", args.command)))
            }
        };
        match args.command {
            Command::Spectrum | Command::Wavefunctions => wants(
                preset.is_none_or(|p| p.geometry(0.0, 0.0).is_ok()),
                "this preset",
            )?,
            Command::Grid2d => wants(preset == Some(Preset::Grid2d), "this source")?,
            Command::Adiabatic => wants(
                matches!(preset, Some(Preset::Waveguide | Preset::WaveguideHarmonic)),
                "this source",
            )?,
            Command::Validate => {}
        }

        let profile = Profile {
            l_in: args.l_in.unwrap_or(0.2),
            l_fin: args.l_fin.unwrap_or(0.28),
            y_in: args.y_in.unwrap_or(0.0),
            y_fin: args.y_fin.unwrap_or(3.0),
            k: args.k.unwrap_or(1.0),
        };
        if args.command != Command::Adiabatic
            && [args.l_in, args.l_fin, args.y_in, args.y_fin, args.k].iter().any(Option::is_some)
        {
            wants(false, "--l-in/--l-fin/--y-in/--y-fin/--k")?;
        }

        let sweep = match (&args.sweep, args.command) {
            (Some(s), Command::Spectrum | Command::Adiabatic) => parse_sweep(s)?,
            (Some(_), _) => return Err(wants(false, "--sweep").unwrap_err()),
            (None, Command::Adiabatic) => {
                let pad = 1.0;
                let lo = profile.y_in - pad;
                let hi = profile.y_fin + pad;
                sweep_from((lo, hi, (hi - lo) / 100.0))
            }
            (None, Command::Spectrum) => preset.and_then(Preset::default_sweep).map(sweep_from).unwrap_or_default(),
            (None, _) => Vec::new(),
        };
        if matches!(source, Some(Source::Potential(_))) && args.sweep.is_some() {
            wants(false, "--sweep with --potential")?;
        }
        let two = preset.is_some_and(Preset::is_two_parameter);
        let sweep2 = match &args.sweep2 {
            Some(s) if two && args.command == Command::Spectrum => parse_sweep(s)?,
            Some(_) => return Err(wants(false, "--sweep2").unwrap_err()),
            None if two => preset.and_then(Preset::default_sweep2).map(sweep_from).unwrap_or_default(),
            None => Vec::new(),
        };

        let at = match &args.at {
            Some(t) if matches!(args.command, Command::Wavefunctions | Command::Grid2d) => parse_at(t)?,
            Some(_) => return Err(wants(false, "--at").unwrap_err()),
            None => preset.map(Preset::default_at).unwrap_or((0.0, 0.0)),
        };

        let levels = args.levels.unwrap_or_else(|| preset.map_or(4, Preset::default_levels));
        if levels == 0 {
            return Err(Error::InvalidParameter("--levels must be at least 1".into()));
        }
        let (default_res, floor) = match args.command {
            Command::Grid2d => (201, 5),
            Command::Wavefunctions => (801, MIN_RESOLUTION),
            _ => (4001, MIN_RESOLUTION),
        };
        let resolution = args.resolution.unwrap_or(default_res);
        if resolution < floor {
            return Err(Error::InvalidParameter(format!("--resolution must be at least {floor}")));
        }
        if args.format == Format::Svg && (two && args.command == Command::Spectrum || args.command == Command::Validate) {
            wants(false, "svg output")?;
        }
        if !args.perturb_plateau.is_finite() {
            return Err(Error::InvalidParameter("plateau perturbation must be finite".into()));
        }
        Ok(RunConfig {
            command: args.command,
            source,
            sweep,
            sweep2,
            at,
            levels,
            resolution,
            format: args.format,
            out: args.out.clone(),
            profile,
            perturb_plateau: args.perturb_plateau,
        })
    }
}

/// Exit status for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    match e.root() {
        Error::InvalidParameter(_) | Error::InvalidPotential(_) | Error::Json(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

fn threads_from_env() -> Result<usize> {
    match std::env::var("STRETCHLAB_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::InvalidParameter(format!("STRETCHLAB_THREADS={s:?} must be a positive integer"))),
        },
    }
}

/// Writes `text` to `out`, or stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Runs a validated configuration and returns the exit status.
pub fn execute(cfg: &RunConfig) -> Result<i32> {
    commands::execute(cfg)
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = threads_from_env()
        .and_then(|n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Internal(e.to_string()))
        })
        .and_then(|pool| {
            let cfg = RunConfig::from_args(&args)?;
            pool.install(|| execute(&cfg))
        });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("stretchlab: {e}");
            exit_code(&e)
        }
    }
}
