//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::entropy::EntropyKind;
use crate::report::{run, ExitStatus, Mode, RunConfig, RunError};
use crate::sweep::{IndexPolicy, DEFAULT_GRID, DEFAULT_JUMP_TOLERANCE};
use crate::threshold::Connectivity;

#[derive(Parser, Debug)]
#[command(
    name = "entropic-threshold",
    version,
    about = "Bi-level thresholding by Shannon, Tsallis or Kaniadakis entropy maximization"
)]
pub struct Cli {
    /// Input image (binary PGM, or PNG)
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = ModeArg::Single)]
    pub mode: ModeArg,

    /// Entropy functional (single and sweep mode)
    #[arg(long, value_enum)]
    pub entropy: Option<EntropyArg>,

    /// Entropic index q or κ (single mode)
    #[arg(long, allow_hyphen_values = true)]
    pub index: Option<f64>,

    /// Comma-separated index grid, e.g. 0.1,0.5,0.9
    #[arg(long, conflicts_with = "grid_default", allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Use the built-in 13-point grid from 0.01 to 0.99
    #[arg(long)]
    pub grid_default: bool,

    /// Neighborhood for counting edge pixels: 4 or 8
    #[arg(long, default_value_t = 4)]
    pub connectivity: u8,

    /// Write the bi-level image here (best row in sweep/compare mode)
    #[arg(long)]
    pub out_image: Option<PathBuf>,

    /// Write the CSV report here instead of standard output
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Threshold change, in gray levels, above which a transition is reported
    #[arg(long, default_value_t = DEFAULT_JUMP_TOLERANCE)]
    pub jump_tolerance: u32,

    /// Accept q > 1 and |κ| >= 1
    #[arg(long)]
    pub allow_extended_index: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Single,
    Sweep,
    Compare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EntropyArg {
    Shannon,
    Tsallis,
    Kaniadakis,
}

/// Parses a comma-separated list of indices. Values keep the exact
/// decimal the user typed.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, RunError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| RunError::Usage(format!("invalid grid entry {item:?}")))
        })
        .collect()
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, RunError> {
        let mode = match self.mode {
            ModeArg::Single => Mode::Single,
            ModeArg::Sweep => Mode::Sweep,
            ModeArg::Compare => Mode::Compare,
        };
        if mode == Mode::Single && (self.grid.is_some() || self.grid_default) {
            return Err(RunError::Usage(
                "single mode takes --index, not a grid".into(),
            ));
        }
        let grid = match &self.grid {
            Some(s) => parse_grid(s)?,
            None => DEFAULT_GRID.to_vec(),
        };
        let connectivity = Connectivity::try_from(self.connectivity)
            .map_err(|e| RunError::Usage(e.to_string()))?;
        Ok(RunConfig {
            input_path: self.input,
            mode,
            entropy: self.entropy.map(|e| match e {
                EntropyArg::Shannon => EntropyKind::Shannon,
                EntropyArg::Tsallis => EntropyKind::Tsallis,
                EntropyArg::Kaniadakis => EntropyKind::Kaniadakis,
            }),
            index: self.index,
            grid,
            connectivity,
            policy: if self.allow_extended_index {
                IndexPolicy::Extended
            } else {
                IndexPolicy::UnitInterval
            },
            output_image_path: self.out_image,
            report_path: self.report,
            jump_tolerance: self.jump_tolerance,
        })
    }
}

/// Parses `args`, runs, and returns the process exit code. Errors are
/// reported on `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitStatus::Success.code(),
                _ => ExitStatus::Usage.code(),
            };
        }
    };
    let result = cli.into_config().and_then(|config| run(&config, out, err));
    match result {
        Ok(()) => ExitStatus::Success.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status().code()
        }
    }
}
