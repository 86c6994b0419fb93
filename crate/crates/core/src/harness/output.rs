//! CSV trial tables, JSON summaries and two-column plot data.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::experiments::{ControlReport, ExperimentOutput, PairingReport, TrialRecord};
use crate::error::Result;

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(std::io::Error::from)?;
    for r in rows {
        w.serialize(r).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

/// Whitespace-separated `x y` lines under a `#` header.
pub fn write_plot(path: &Path, header: &str, points: &[(f64, f64)]) -> Result<()> {
    let mut s = format!("# {header}\n");
    for (x, y) in points {
        s.push_str(&format!("{x} {y}\n"));
    }
    fs::write(path, s)?;
    Ok(())
}

fn ratio_points(records: &[TrialRecord], experiment: &str, points: usize) -> Vec<(f64, f64)> {
    records.iter().filter(|r| r.experiment == experiment && r.points == points).filter_map(|r| r.ratio.map(|y| (r.trial as f64, y))).collect()
}

/// `<name>_trials.csv`, `<name>_summary.json` and one `<experiment>_<points>.dat` per mesh.
pub fn emit_experiment(dir: &Path, name: &str, out: &ExperimentOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = vec![dir.join(format!("{name}_trials.csv")), dir.join(format!("{name}_summary.json"))];
    write_csv(&files[0], &out.records)?;
    write_json(&files[1], &out.summaries)?;
    for s in &out.summaries {
        for m in &s.meshes {
            let f = dir.join(format!("{}_{}.dat", s.experiment, m.points));
            write_plot(&f, &format!("trial ratio  ({}, h = {}, {} points)", s.quantity, s.degree, m.points), &ratio_points(&out.records, &s.experiment, m.points))?;
            files.push(f);
        }
    }
    Ok(files)
}

pub fn emit_control(dir: &Path, report: &ControlReport) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = vec![dir.join("degree_one_control.csv"), dir.join("degree_one_control.json")];
    write_csv(&files[0], &report.rows)?;
    write_json(&files[1], report)?;
    let mut meshes: Vec<usize> = report.rows.iter().map(|r| r.points).collect();
    meshes.dedup();
    for p in meshes {
        let f = dir.join(format!("degree_one_control_{p}.dat"));
        let pts: Vec<(f64, f64)> = report.rows.iter().filter(|r| r.points == p).map(|r| (r.k as f64, r.ratio)).collect();
        write_plot(&f, &format!("k ratio  ({p} points)"), &pts)?;
        files.push(f);
    }
    Ok(files)
}

pub fn emit_pairing(dir: &Path, report: &PairingReport) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let files = vec![dir.join("pairing.csv"), dir.join("pairing.json"), dir.join("pairing.dat")];
    write_csv(&files[0], &report.rows)?;
    write_json(&files[1], report)?;
    let pts: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.closed, r.control)).collect();
    write_plot(&files[2], "closed control", &pts)?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_and_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.dat");
        write_plot(&p, "x y", &[(1.0, 2.5), (2.0, 3.0)]).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "# x y\n1 2.5\n2 3\n");
        #[derive(Serialize)]
        struct Row {
            k: usize,
            v: Option<f64>,
        }
        let c = dir.path().join("a.csv");
        write_csv(&c, &[Row { k: 1, v: Some(0.5) }, Row { k: 2, v: None }]).unwrap();
        assert_eq!(fs::read_to_string(&c).unwrap(), "k,v\n1,0.5\n2,\n");
    }
}
