//! Report JSON, field CSVs and the gnuplot script.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use intertwine::propagate::Snapshots;

use crate::error::CliError;
use crate::scenario::Outcome;

pub const CSV_HEADER: &str = "x,t,re,im";

/// Seventeen significant digits, enough to round-trip an `f64`.
fn num(v: f64) -> String {
    // adding zero folds −0 into +0
    format!("{:.16e}", v + 0.0)
}

/// Rows over time, then space; every `stride`-th snapshot.
pub fn field_csv(s: &Snapshots, stride: usize) -> String {
    let mut out = String::with_capacity(s.len() / stride.max(1) * s.field(0).values().len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in (0..s.len()).step_by(stride.max(1)) {
        let f = s.field(k);
        let t = num(s.t(k));
        for (x, z) in f.grid().points().zip(f.values()) {
            let _ = writeln!(out, "{},{t},{},{}", num(x), num(z.re), num(z.im));
        }
    }
    out
}

fn plot_script(scenario: &str, csvs: &[&str]) -> String {
    let mut out = format!(
        "# {scenario}: |psi|^2 of every recorded snapshot, coloured by time.\n\
         set datafile separator ','\n\
         set key top right\n\
         set xlabel 'x'\n\
         set ylabel '|psi|^2'\n\
         set cblabel 't'\n"
    );
    if csvs.is_empty() {
        out.push_str("# no fields were produced for this scenario\n");
        return out;
    }
    let plots: Vec<String> = csvs
        .iter()
        .map(|c| format!("'{c}' skip 1 using 1:($3**2 + $4**2):2 with points pt 7 ps 0.2 palette title '{c}'"))
        .collect();
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

fn write(path: PathBuf, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::write(&path, contents).map_err(|source| CliError::Write { path: path.display().to_string(), source })?;
    written.push(path);
    Ok(())
}

/// Writes every artifact of a run into `dir`; returns the paths written.
pub fn write_outcome(dir: &Path, scenario: &str, outcome: &Outcome, stride: usize) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.display().to_string(), source })?;
    let mut written = Vec::new();
    write(dir.join("report.json"), &(outcome.report.to_json() + "\n"), &mut written)?;
    let mut csvs = Vec::new();
    for (name, snaps) in [("source.csv", &outcome.source), ("image.csv", &outcome.image)] {
        if let Some(s) = snaps {
            write(dir.join(name), &field_csv(s, stride), &mut written)?;
            csvs.push(name);
        }
    }
    write(dir.join("plot.gp"), &plot_script(scenario, &csvs), &mut written)?;
    Ok(written)
}
