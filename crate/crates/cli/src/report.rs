use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::Args;
use domrt::suites::{Suite, SuiteReport};

use crate::settings::Settings;
use crate::{emit, Status};

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A suite id, `all`, or `list` to print the ids.
    #[arg(long)]
    suite: Option<String>,
    /// Check rows as CSV [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
    /// CDF overlay data as CSV.
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
}

pub fn run(args: ReportArgs, mut cfg: Settings) -> Result<Status> {
    let id: String = cfg.req("suite", args.suite)?;
    let suites: Vec<Suite> = match id.as_str() {
        "list" => {
            let mut buf = Vec::new();
            for s in Suite::ALL {
                writeln!(buf, "{}\t{}", s.id(), s.description())?;
            }
            emit(args.out.as_deref(), &buf)?;
            return Ok(Status::Ok);
        }
        "all" => Suite::ALL.to_vec(),
        other => vec![other.parse()?],
    };

    let mut merged = SuiteReport {
        suite: suites[0],
        rows: Vec::new(),
        overlay: Vec::new(),
    };
    let mut summary = Vec::new();
    for &suite in &suites {
        let start = Instant::now();
        let mut report = suite.run()?;
        summary.push(format!(
            "{:<16} {} {:>5} checks {:>3} failed {:>7.1}s",
            suite.id(),
            if report.passed() { "PASS" } else { "FAIL" },
            report.rows.len(),
            report.failures().count(),
            start.elapsed().as_secs_f64()
        ));
        if suites.len() > 1 {
            // Several suites share one overlay file.
            for p in &mut report.overlay {
                p.series = format!("{}/{}", suite.id(), p.series);
            }
        }
        merged.rows.append(&mut report.rows);
        merged.overlay.append(&mut report.overlay);
    }

    let mut rows = Vec::new();
    cfg.echo(&mut rows)?;
    merged.write_rows_csv(&mut rows)?;
    emit(args.out.as_deref(), &rows)?;
    if let Some(plot) = &args.plot {
        let mut overlay = Vec::new();
        cfg.echo(&mut overlay)?;
        merged.write_overlay_csv(&mut overlay)?;
        emit(Some(plot), &overlay)?;
    }
    for line in &summary {
        eprintln!("{line}");
    }
    Ok(if merged.passed() {
        Status::Ok
    } else {
        Status::Refuted
    })
}
