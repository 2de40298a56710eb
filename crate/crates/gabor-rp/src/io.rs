//! CSV side files: window samples, signals, Zak grids, profiles and trial
//! tables.

use std::path::Path;

use gabor_rp_core::zak::{SignalGrid, ZakGrid};
use gabor_rp_core::{Complex64, PeriodizationProfile, TrialRecord};

use crate::error::{CliError, Result};

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv { path: path.to_path_buf(), source }
}

fn data_err(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Data { path: path.to_path_buf(), message: message.into() }
}

/// Reads rows under the given header, parsing every cell as `f64`.
fn read_columns(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(csv_err(path))?;
    let found: Vec<String> = reader.headers().map_err(csv_err(path))?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(data_err(path, format!("expected header {}, found {}", header.join(","), found.join(","))));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let row = record
            .iter()
            .map(|cell| cell.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| data_err(path, format!("row {}: non-numeric cell", line + 2)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(data_err(path, "no data rows"));
    }
    Ok(rows)
}

/// Uniform step of a sorted abscissa, checked to relative accuracy 1e-9.
fn uniform_step(path: &Path, ts: &[f64]) -> Result<f64> {
    if ts.len() < 2 {
        return Err(data_err(path, "need at least two samples"));
    }
    let step = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
    if step.is_nan() || step <= 0.0 {
        return Err(data_err(path, "abscissae must be increasing"));
    }
    for (i, t) in ts.iter().enumerate() {
        if (t - (ts[0] + i as f64 * step)).abs() > 1e-9 * step.max(1.0) {
            return Err(data_err(path, format!("abscissa {t} breaks the uniform step {step}")));
        }
    }
    Ok(step)
}

/// `(start, step, samples)` from a `t,value` file.
pub fn read_window_samples(path: &Path) -> Result<(f64, f64, Vec<f64>)> {
    let rows = read_columns(path, &["t", "value"])?;
    let ts: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let step = uniform_step(path, &ts)?;
    Ok((ts[0], step, rows.iter().map(|r| r[1]).collect()))
}

/// Reads a `t,re,im` file on the lattice `t = n/Nt`. The signal is placed in
/// the smallest symmetric grid `[−H, H)` containing it.
pub fn read_signal(path: &Path) -> Result<SignalGrid> {
    let rows = read_columns(path, &["t", "re", "im"])?;
    let ts: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let step = uniform_step(path, &ts)?;
    let nt = (1.0 / step).round();
    if nt < 2.0 || (nt * step - 1.0).abs() > 1e-9 {
        return Err(data_err(path, format!("step {step} is not 1/Nt for an integer Nt ≥ 2")));
    }
    let first = ts[0] * nt;
    if (first - first.round()).abs() > 1e-6 {
        return Err(data_err(path, format!("first abscissa {} is off the lattice 1/{nt}", ts[0])));
    }
    let nt = nt as usize;
    let first = first.round() as i64;
    let last = first + rows.len() as i64;
    let h = (-first).max(last).max(1) as usize;
    let h = h.div_ceil(nt);
    let mut grid = SignalGrid::zeros(nt, h)?;
    let origin = (h * nt) as i64;
    for (i, r) in rows.iter().enumerate() {
        grid.samples[(origin + first + i as i64) as usize] = Complex64::new(r[1], r[2]);
    }
    Ok(grid)
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(csv_err(path))
}

fn finish(path: &Path, mut w: csv::Writer<std::fs::File>) -> Result<()> {
    w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write_signal(path: &Path, f: &SignalGrid) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "re", "im"]).map_err(csv_err(path))?;
    for (n, v) in f.samples.iter().enumerate() {
        w.write_record([f.time(n).to_string(), v.re.to_string(), v.im.to_string()]).map_err(csv_err(path))?;
    }
    finish(path, w)
}

pub fn write_zak(path: &Path, z: &ZakGrid) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "xi", "re", "im"]).map_err(csv_err(path))?;
    for j in 0..z.nt {
        for s in 0..z.nxi {
            let v = z.get(j, s);
            let t = j as f64 / z.nt as f64;
            let xi = s as f64 / z.nxi as f64;
            w.write_record([t.to_string(), xi.to_string(), v.re.to_string(), v.im.to_string()])
                .map_err(csv_err(path))?;
        }
    }
    finish(path, w)
}

pub fn write_profile(path: &Path, p: &PeriodizationProfile) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["xi", "phi"]).map_err(csv_err(path))?;
    for (x, v) in p.points.iter().zip(&p.values) {
        w.write_record([x.to_string(), v.to_string()]).map_err(csv_err(path))?;
    }
    finish(path, w)
}

pub fn write_trials(path: &Path, records: &[TrialRecord]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["trial", "seed", "min", "max", "pass"]).map_err(csv_err(path))?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.min_over_m.to_string(),
            r.max_over_m.to_string(),
            r.pass.to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    finish(path, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_csv(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn signal_round_trip() {
        let f = SignalGrid::from_fn(8, 2, |t| Complex64::new(t.cos(), t * 0.5)).unwrap();
        let file = tempfile::NamedTempFile::new().unwrap();
        write_signal(file.path(), &f).unwrap();
        assert_eq!(read_signal(file.path()).unwrap(), f);
    }

    #[test]
    fn partial_signal_is_embedded() {
        let file = temp_csv("t,re,im\n0.5,1,0\n0.75,2,0\n1.0,3,-1\n");
        let g = read_signal(file.path()).unwrap();
        assert_eq!((g.nt, g.half_width), (4, 2));
        assert_eq!(g.samples[8 + 2], Complex64::new(1.0, 0.0));
        assert_eq!(g.samples[8 + 4], Complex64::new(3.0, -1.0));
        assert_eq!(g.norm_sq(), 15.0 / 4.0);
    }

    #[test]
    fn rejects_bad_files() {
        for body in ["t,value\n0,1\n", "x,re,im\n0,1,0\n1,1,0\n", "t,re,im\n0,1,0\n0.3,1,0\n", "t,re,im\n0,1,0\n0.5,a,0\n"] {
            let file = temp_csv(body);
            assert!(read_signal(file.path()).is_err(), "{body}");
        }
        let file = temp_csv("t,value\n0,1\n0.5,1\n1.5,1\n");
        assert!(read_window_samples(file.path()).is_err());
    }
}
