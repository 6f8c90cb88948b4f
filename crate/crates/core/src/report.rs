//! Run orchestration and the CSV report format.
//!
//! A report has one row per entropic index. Paired (compare-mode) reports
//! use the header
//!
//! ```text
//! index,threshold_tsallis,edges_tsallis,threshold_kaniadakis,edges_kaniadakis
//! ```
//!
//! and single-functional reports keep only the `index` column and the pair
//! for their functional. Indices are printed with the shortest decimal that
//! parses back to the same value, so a grid entry typed as `0.99` is written
//! as `0.99`.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::entropy::{EntropyFunctional, EntropyKind};
use crate::error::{Error, Result};
use crate::imaging::{build_histogram, load_image, write_atomic, write_bilevel, GrayImage};
use crate::sweep::{
    detect_transitions, select_best, sweep, IndexPolicy, SweepKind, SweepOptions, SweepRow,
    SweepTable, DEFAULT_GRID, DEFAULT_JUMP_TOLERANCE,
};
use crate::threshold::{binarize, edge_pixel_count, optimize_threshold, Connectivity};

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Input = 2,
    Infeasible = 3,
    Output = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read input: {0}")]
    Input(#[source] Error),
    #[error("{0}")]
    Infeasible(#[source] Error),
    #[error("cannot write output: {0}")]
    Output(#[source] Error),
}

impl RunError {
    pub fn status(&self) -> ExitStatus {
        match self {
            RunError::Usage(_) => ExitStatus::Usage,
            RunError::Input(_) => ExitStatus::Input,
            RunError::Infeasible(_) => ExitStatus::Infeasible,
            RunError::Output(_) => ExitStatus::Output,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// One functional at one index.
    Single,
    /// One functional over an index grid.
    Sweep,
    /// Tsallis and Kaniadakis over the same grid.
    Compare,
}

/// Everything a run needs. Ties in the threshold search always go to the
/// smallest gray level, and ties between sweep rows to the smallest index.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub mode: Mode,
    /// Functional for single and sweep mode.
    pub entropy: Option<EntropyKind>,
    /// Entropic index for single mode.
    pub index: Option<f64>,
    /// Index grid for sweep and compare mode.
    pub grid: Vec<f64>,
    pub connectivity: Connectivity,
    pub policy: IndexPolicy,
    pub output_image_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub jump_tolerance: u32,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>, mode: Mode) -> Self {
        Self {
            input_path: input_path.into(),
            mode,
            entropy: None,
            index: None,
            grid: DEFAULT_GRID.to_vec(),
            connectivity: Connectivity::Four,
            policy: IndexPolicy::UnitInterval,
            output_image_path: None,
            report_path: None,
            jump_tolerance: DEFAULT_JUMP_TOLERANCE,
        }
    }

    fn single_functional(&self) -> Result<EntropyFunctional, RunError> {
        let usage = |m: &str| RunError::Usage(m.into());
        match (self.entropy, self.index) {
            (None, _) => Err(usage("single mode needs --entropy")),
            (Some(EntropyKind::Shannon), None) => Ok(EntropyFunctional::Shannon),
            (Some(EntropyKind::Shannon), Some(_)) => Err(usage("shannon entropy takes no --index")),
            (Some(_), None) => Err(usage("single mode needs --index")),
            (Some(kind), Some(x)) => self
                .policy
                .functional(sweep_kind(kind)?, x)
                .map_err(|e| RunError::Usage(e.to_string())),
        }
    }

    fn check_grid(&self, kinds: &[SweepKind]) -> Result<(), RunError> {
        if self.grid.is_empty() {
            return Err(RunError::Usage("index grid is empty".into()));
        }
        let mut sorted = self.grid.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(RunError::Usage(format!("duplicate grid index {}", w[0])));
        }
        for &kind in kinds {
            for &x in &self.grid {
                self.policy
                    .functional(kind, x)
                    .map_err(|e| RunError::Usage(e.to_string()))?;
            }
        }
        Ok(())
    }
}

fn sweep_kind(kind: EntropyKind) -> Result<SweepKind, RunError> {
    match kind {
        EntropyKind::Tsallis => Ok(SweepKind::Tsallis),
        EntropyKind::Kaniadakis => Ok(SweepKind::Kaniadakis),
        EntropyKind::Shannon => Err(RunError::Usage(
            "shannon entropy has no index to sweep".into(),
        )),
    }
}

fn infeasible_or_input(e: Error) -> RunError {
    match e {
        Error::Infeasible => RunError::Infeasible(e),
        other => RunError::Input(other),
    }
}

/// Runs the configured pipeline.
///
/// Human-readable lines go to `out`. A CSV report goes to the report path
/// when one is configured and to `out` otherwise, in which case the summary
/// lines are sent to `err` so `out` stays machine-readable. All arguments
/// and the input are checked before anything is written.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), RunError> {
    match config.mode {
        Mode::Single => {
            let f = config.single_functional()?;
            let img = load_image(&config.input_path).map_err(RunError::Input)?;
            run_single(config, &img, &f, out)
        }
        Mode::Sweep => {
            let kind = sweep_kind(
                config
                    .entropy
                    .ok_or_else(|| RunError::Usage("sweep mode needs --entropy".into()))?,
            )?;
            if config.index.is_some() {
                return Err(RunError::Usage(
                    "sweep mode takes --grid, not --index".into(),
                ));
            }
            config.check_grid(&[kind])?;
            let img = load_image(&config.input_path).map_err(RunError::Input)?;
            let table = sweep(&img, kind, &config.grid, sweep_options(config))
                .map_err(infeasible_or_input)?;
            finish_sweep(config, &img, ReportTables::Single(&table), out, err)
        }
        Mode::Compare => {
            if config.entropy.is_some() || config.index.is_some() {
                return Err(RunError::Usage(
                    "compare mode always runs tsallis and kaniadakis; drop --entropy/--index"
                        .into(),
                ));
            }
            config.check_grid(&[SweepKind::Tsallis, SweepKind::Kaniadakis])?;
            let img = load_image(&config.input_path).map_err(RunError::Input)?;
            let opts = sweep_options(config);
            let tsallis =
                sweep(&img, SweepKind::Tsallis, &config.grid, opts).map_err(infeasible_or_input)?;
            let kaniadakis = sweep(&img, SweepKind::Kaniadakis, &config.grid, opts)
                .map_err(infeasible_or_input)?;
            let tables = ReportTables::Paired {
                tsallis: &tsallis,
                kaniadakis: &kaniadakis,
            };
            finish_sweep(config, &img, tables, out, err)
        }
    }
}

fn sweep_options(config: &RunConfig) -> SweepOptions {
    SweepOptions {
        connectivity: config.connectivity,
        policy: config.policy,
    }
}

fn run_single(
    config: &RunConfig,
    img: &GrayImage,
    f: &EntropyFunctional,
    out: &mut dyn Write,
) -> Result<(), RunError> {
    let hist = build_histogram(img);
    let best = optimize_threshold(&hist, f).map_err(infeasible_or_input)?;
    let bilevel = binarize(img, best.threshold);
    let edges = edge_pixel_count(&bilevel, config.connectivity);
    if let Some(path) = &config.output_image_path {
        write_bilevel(&bilevel, path).map_err(RunError::Output)?;
    }
    let index = f.index().map(|x| format!(" index={x}")).unwrap_or_default();
    writeln!(
        out,
        "{}{index} threshold={} total_entropy={} edge_pixels={edges}",
        f.kind(),
        best.threshold,
        best.total_entropy
    )
    .map_err(|e| RunError::Output(Error::io("<stdout>", e)))
}

fn finish_sweep(
    config: &RunConfig,
    img: &GrayImage,
    tables: ReportTables<'_>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), RunError> {
    let csv = render_csv(tables).map_err(RunError::Output)?;
    let stdout_err = |e| RunError::Output(Error::io("<stdout>", e));
    let summary: &mut dyn Write = match &config.report_path {
        Some(path) => {
            write_atomic(path, csv.as_bytes()).map_err(RunError::Output)?;
            out
        }
        None => {
            out.write_all(csv.as_bytes()).map_err(stdout_err)?;
            err
        }
    };

    let mut best: Option<(SweepKind, SweepRow)> = None;
    for table in tables.tables() {
        let row = select_best(table).map_err(RunError::Output)?;
        writeln!(
            summary,
            "best {}: index={} threshold={} edge_pixels={}",
            table.kind(),
            row.index,
            row.threshold,
            row.edge_pixels
        )
        .map_err(stdout_err)?;
        if best.is_none_or(|(_, b)| row.edge_pixels > b.edge_pixels) {
            best = Some((table.kind(), row));
        }
        for jump in detect_transitions(table, config.jump_tolerance).jumps {
            writeln!(
                summary,
                "warning: {} threshold jumps from {} to {} between indices {} and {}",
                table.kind(),
                jump.threshold_before,
                jump.threshold_after,
                jump.index_before,
                jump.index_after
            )
            .map_err(stdout_err)?;
        }
    }
    if let (Some(path), Some((_, row))) = (&config.output_image_path, best) {
        write_bilevel(&binarize(img, row.threshold), path).map_err(RunError::Output)?;
    }
    Ok(())
}

/// The tables that go into one report.
#[derive(Clone, Copy, Debug)]
pub enum ReportTables<'a> {
    Single(&'a SweepTable),
    Paired {
        tsallis: &'a SweepTable,
        kaniadakis: &'a SweepTable,
    },
}

impl<'a> ReportTables<'a> {
    fn tables(self) -> Vec<&'a SweepTable> {
        match self {
            ReportTables::Single(t) => vec![t],
            ReportTables::Paired {
                tsallis,
                kaniadakis,
            } => vec![tsallis, kaniadakis],
        }
    }
}

fn column_names(kind: SweepKind) -> [&'static str; 2] {
    match kind {
        SweepKind::Tsallis => ["threshold_tsallis", "edges_tsallis"],
        SweepKind::Kaniadakis => ["threshold_kaniadakis", "edges_kaniadakis"],
    }
}

/// Renders the report as CSV text.
pub fn render_csv(tables: ReportTables<'_>) -> Result<String> {
    if let ReportTables::Paired {
        tsallis,
        kaniadakis,
    } = tables
    {
        if tsallis.kind() != SweepKind::Tsallis || kaniadakis.kind() != SweepKind::Kaniadakis {
            return Err(Error::InvalidTable(
                "paired report needs a tsallis and a kaniadakis table".into(),
            ));
        }
        if !tsallis.indices().eq(kaniadakis.indices()) {
            return Err(Error::GridMismatch);
        }
    }
    let tables = tables.tables();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index"];
    for t in &tables {
        header.extend(column_names(t.kind()));
    }
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..tables[0].len() {
        let mut record = vec![tables[0].rows()[i].index.to_string()];
        for t in &tables {
            let r = t.rows()[i];
            record.push(r.threshold.to_string());
            record.push(r.edge_pixels.to_string());
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

/// Writes the report to `path`. Nothing is written if the tables are inconsistent.
pub fn emit_csv(tables: ReportTables<'_>, path: impl AsRef<Path>) -> Result<()> {
    let text = render_csv(tables)?;
    write_atomic(path.as_ref(), text.as_bytes())
}

/// Tables recovered from a CSV report.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedReport {
    pub tsallis: Option<SweepTable>,
    pub kaniadakis: Option<SweepTable>,
}

/// Parses a report produced by [`render_csv`].
pub fn parse_csv(text: &str) -> Result<ParsedReport> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_owned)
        .collect();
    let kinds: Vec<SweepKind> = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["index", "threshold_tsallis", "edges_tsallis"] => vec![SweepKind::Tsallis],
        ["index", "threshold_kaniadakis", "edges_kaniadakis"] => vec![SweepKind::Kaniadakis],
        ["index", "threshold_tsallis", "edges_tsallis", "threshold_kaniadakis", "edges_kaniadakis"] =>
        {
            vec![SweepKind::Tsallis, SweepKind::Kaniadakis]
        }
        _ => return Err(Error::Csv(format!("unrecognized header {header:?}"))),
    };
    let mut rows: Vec<Vec<SweepRow>> = vec![Vec::new(); kinds.len()];
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let field = |i: usize| record.get(i).unwrap_or_default();
        let index: f64 = parse_field(field(0), "index")?;
        for (k, rows) in rows.iter_mut().enumerate() {
            rows.push(SweepRow {
                index,
                threshold: parse_field(field(1 + 2 * k), "threshold")?,
                edge_pixels: parse_field(field(2 + 2 * k), "edge count")?,
            });
        }
    }
    let mut report = ParsedReport {
        tsallis: None,
        kaniadakis: None,
    };
    for (kind, rows) in kinds.into_iter().zip(rows) {
        let table = SweepTable::new(kind, rows)?;
        match kind {
            SweepKind::Tsallis => report.tsallis = Some(table),
            SweepKind::Kaniadakis => report.kaniadakis = Some(table),
        }
    }
    Ok(report)
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Csv(format!("invalid {what} {s:?}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}
