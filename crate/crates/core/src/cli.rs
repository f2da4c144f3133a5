//! Command-line front end. [`run_cli`] is what the binary calls; it writes to
//! the given streams and returns the process exit code: 0 on success, 2 when a
//! method's hypotheses do not hold for the input, 1 for any other error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::closed_form::{interior_values, two_miner_values};
use crate::error::{Error, Result};
use crate::exact::exact_values;
use crate::game::{power_ratios, Method, OceanicGame, ValueProfile};
use crate::io::{load_game, load_snapshot, Cell, GameFile, Table, OCEAN_ROW};
use crate::montecarlo::{mc_values, McConfig};
use crate::oracle::convergence_report;
use crate::scenarios::{
    crystallization_sweep, default_crystallization_grid, default_entry_grid, entrant_ratio_check,
    entry_sweep, snapshot_analysis, SweepResult,
};

#[derive(Debug, Parser)]
#[command(
    name = "oceanic",
    version,
    about = "Values and power ratios for oceanic mining games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Interior,
    Exact,
    Mc,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Values and ratios of every player in a game file (.json, or .csv snapshot)
    Values {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        partitions: u32,
        /// Quota used when the game file is a snapshot
        #[arg(long, default_value_t = 0.5)]
        quota: f64,
        #[command(flatten)]
        output: Output,
    },
    /// A single miner forming out of the ocean
    Crystallize {
        #[arg(long, default_value_t = 100.0)]
        total: f64,
        #[arg(long, default_value_t = 99)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        quota: f64,
        #[command(flatten)]
        output: Output,
    },
    /// New resources entering as one miner or as ocean
    Entry {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        w_max: f64,
        #[arg(long, default_value_t = 60)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Ratios for a snapshot of pool shares
    Snapshot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        quota: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Convergence of finite games with n ocean atoms
    Oracle {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Entrant ratio against the base ocean ratio
    #[command(name = "check-1b", alias = "entrant-ratio")]
    Check1b {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        w: f64,
        #[command(flatten)]
        output: Output,
    },
}

struct Report {
    game: Option<OceanicGame>,
    method: Option<Method>,
    values: Value,
    ratios: Value,
    table: Table,
    diagnostics: Vec<String>,
}

impl Report {
    fn table(table: Table) -> Self {
        Self {
            game: None,
            method: None,
            values: Value::Null,
            ratios: Value::Null,
            table,
            diagnostics: Vec::new(),
        }
    }

    fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        match format {
            Format::Csv => self.table.write_csv(out),
            Format::Json => {
                let doc = json!({
                    "game": self.game.as_ref().map(GameFile::from_game),
                    "method": self.method.map(|m| m.as_str()),
                    "values": self.values,
                    "ratios": self.ratios,
                    "rows": self.table.to_json_rows(),
                });
                let text =
                    serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(out, "{text}")?;
                Ok(())
            }
        }
    }
}

fn values_report(game: OceanicGame, method: MethodArg, mc: McConfig) -> Result<Report> {
    let norm = game.normalize();
    let profile: ValueProfile = match method {
        MethodArg::Closed => two_miner_values(&norm)?,
        MethodArg::Interior => interior_values(&norm)?,
        MethodArg::Exact => exact_values(&norm)?,
        MethodArg::Mc => mc_values(&norm, &mc),
    };
    let ratios = power_ratios(&norm, &profile);
    let stderr = profile.stderr.clone();
    let mut header = vec!["entity", "weight", "value", "ratio"];
    if stderr.is_some() {
        header.push("stderr");
    }
    let mut table = Table::new(header);
    for i in 0..game.len() {
        let mut row: Vec<Cell> = vec![
            game.label(i).into(),
            game.majors()[i].into(),
            profile.major_values[i].into(),
            ratios.major_ratios[i].into(),
        ];
        if let Some(se) = &stderr {
            row.push(se[i].into());
        }
        table.push(row);
    }
    if let Some(ocean_ratio) = ratios.ocean_ratio {
        let mut row: Vec<Cell> = vec![
            OCEAN_ROW.into(),
            game.ocean().into(),
            profile.ocean_value.into(),
            ocean_ratio.into(),
        ];
        if let Some(se) = &stderr {
            row.push(se[game.len()].into());
        }
        table.push(row);
    }
    let mut diagnostics = vec![format!("method: {}", profile.method)];
    if method == MethodArg::Mc {
        diagnostics.push(format!(
            "samples: {}, seed: {}, partitions: {}",
            mc.samples(),
            mc.seed(),
            mc.partitions()
        ));
    }
    Ok(Report {
        values: json!({
            "majors": profile.major_values,
            "ocean": profile.ocean_value,
            "stderr": stderr,
        }),
        ratios: json!({
            "majors": ratios.major_ratios,
            "ocean": ratios.ocean_ratio,
        }),
        game: Some(game),
        method: Some(profile.method),
        table,
        diagnostics,
    })
}

fn method_cell(m: Option<Method>) -> Cell {
    m.map(|m| m.as_str()).unwrap_or("").into()
}

fn crystallize_report(total: f64, steps: usize, quota: f64) -> Result<Report> {
    let grid = default_crystallization_grid(quota, steps);
    let sweep = crystallization_sweep(total, &grid, quota)?;
    let mut table = Table::new(["r1", "r1_weight", "phi_1", "Phi", "v_1", "v_oc", "method"]);
    for row in &sweep.rows {
        table.push(vec![
            row.parameter.into(),
            (row.parameter * total).into(),
            row.values[0].into(),
            row.values[1].into(),
            row.ratios[0].into(),
            row.ratios[1].into(),
            method_cell(row.method),
        ]);
    }
    Ok(sweep_report(sweep, table))
}

fn sweep_report(sweep: SweepResult, table: Table) -> Report {
    let mut report = Report::table(table);
    report
        .diagnostics
        .push(format!("{}: {}", sweep.scenario, sweep.grid));
    report.game = sweep.base;
    report
}

fn sign_cell(x: f64) -> Cell {
    if x.is_nan() {
        "".into()
    } else if x > 0.0 {
        "+".into()
    } else if x < 0.0 {
        "-".into()
    } else {
        "0".into()
    }
}

fn entry_report(base: OceanicGame, w_max: f64, steps: usize) -> Result<Report> {
    if steps == 0 {
        return Err(Error::Parse("steps: must be >= 1".into()));
    }
    let unit = base.total();
    let grid = default_entry_grid(w_max, steps);
    let sweep = entry_sweep(&base, &grid)?;
    let mut table = Table::new([
        "w",
        "w_share",
        "v_plus",
        "v_oc_o",
        "diff_sign",
        "method",
        "interior",
        "note",
    ]);
    for row in &sweep.rows {
        let w = row.parameter;
        table.push(vec![
            w.into(),
            (w / (unit + w)).into(),
            row.ratios[0].into(),
            row.ratios[1].into(),
            sign_cell(row.ratios[0] - row.ratios[1]),
            method_cell(row.method),
            row.in_hypothesis.into(),
            row.note.clone().unwrap_or_default().into(),
        ]);
    }
    let outside = sweep.rows.iter().filter(|r| !r.in_hypothesis).count();
    let mut report = sweep_report(sweep, table);
    if outside > 0 {
        report
            .diagnostics
            .push(format!("{outside} rows outside the interior case"));
    }
    Ok(report)
}

fn snapshot_report(path: &std::path::Path, quota: f64) -> Result<Report> {
    let snap = load_snapshot(path)?;
    let sweep = snapshot_analysis(&snap.rows, snap.ocean, quota)?;
    let shares: Vec<f64> = sweep
        .rows
        .iter()
        .map(|row| {
            let name = row.label.as_deref().unwrap_or_default();
            snap.rows
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, s)| *s)
                .unwrap_or_else(|| snap.ocean_share())
        })
        .collect();
    let mut table = Table::new(["rank", "entity", "share", "value", "ratio", "inversion"]);
    for (row, share) in sweep.rows.iter().zip(shares) {
        table.push(vec![
            Cell::Int(row.parameter as i64),
            row.label.clone().unwrap_or_default().into(),
            share.into(),
            row.values[0].into(),
            row.ratios[0].into(),
            row.inversion.into(),
        ]);
    }
    let inversions = sweep.inversions();
    let method = sweep.rows.first().and_then(|r| r.method);
    let mut report = sweep_report(sweep, table);
    report.method = method;
    report.diagnostics.push(format!("inversions: {inversions}"));
    Ok(report)
}

fn oracle_report(game: OceanicGame, ns: &[usize]) -> Result<Report> {
    let rows = convergence_report(&game, ns)?;
    let mut header = vec!["n".to_string(), "max_gap".into(), "ocean_gap".into()];
    header.extend((0..game.len()).map(|i| format!("gap_{}", game.label(i))));
    let mut table = Table::new(header);
    for row in &rows {
        let mut cells = vec![
            Cell::Int(row.n as i64),
            row.max_gap.into(),
            row.ocean_gap.into(),
        ];
        cells.extend(row.major_gaps.iter().map(|&g| Cell::Num(g)));
        table.push(cells);
    }
    let mut report = Report::table(table);
    report.game = Some(game);
    report.method = Some(Method::Oracle);
    Ok(report)
}

fn check_report(base: OceanicGame, w: f64) -> Result<Report> {
    let check = entrant_ratio_check(&base, w)?;
    let mut table = Table::new(["w", "v_plus", "v_oc_base", "gap", "entrant_game_interior"]);
    table.push(vec![
        w.into(),
        check.v_plus.into(),
        check.v_oc_base.into(),
        check.gap.into(),
        check.entrant_game_interior.into(),
    ]);
    let mut report = Report::table(table);
    report.game = Some(base);
    report.method = Some(Method::Exact);
    if !check.entrant_game_interior {
        report
            .diagnostics
            .push("the game with the entrant is outside the interior case".into());
    }
    Ok(report)
}

fn dispatch(cmd: Command) -> Result<(Report, Format)> {
    match cmd {
        Command::Values {
            game,
            method,
            samples,
            seed,
            partitions,
            quota,
            output,
        } => {
            let mc = McConfig::new(samples, seed)?.with_partitions(partitions);
            let game = load_game(&game, quota)?;
            Ok((values_report(game, method, mc)?, output.format))
        }
        Command::Crystallize {
            total,
            steps,
            quota,
            output,
        } => Ok((crystallize_report(total, steps, quota)?, output.format)),
        Command::Entry {
            game,
            w_max,
            steps,
            output,
        } => Ok((
            entry_report(load_game(&game, 0.5)?, w_max, steps)?,
            output.format,
        )),
        Command::Snapshot { csv, quota, output } => {
            Ok((snapshot_report(&csv, quota)?, output.format))
        }
        Command::Oracle { game, n, output } => {
            Ok((oracle_report(load_game(&game, 0.5)?, &n)?, output.format))
        }
        Command::Check1b { game, w, output } => {
            Ok((check_report(load_game(&game, 0.5)?, w)?, output.format))
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = dispatch(cli.command).and_then(|(report, format)| {
        report.write(format, out)?;
        for line in &report.diagnostics {
            let _ = writeln!(err, "{line}");
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_method_hypothesis() {
                2
            } else {
                1
            }
        }
    }
}
