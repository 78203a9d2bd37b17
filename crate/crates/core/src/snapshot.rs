//! CSV snapshots of a running simulation.
//!
//! A snapshot is a pair of files sharing a prefix: `PREFIX.points.csv` with
//! columns `x,h,m,b,level,frozen` and `PREFIX.averages.csv` with columns
//! `x_center,h_avg,m_avg,case_tag`. Floats carry 17 significant digits, which
//! is lossless for binary64.

use std::path::{Path, PathBuf};

use crate::driver::Simulation;
use crate::error::{Result, SweError};
use crate::reconstruction::CaseTag;
use crate::state::ConservedPair;

pub const POINTS_HEADER: [&str; 6] = ["x", "h", "m", "b", "level", "frozen"];
pub const AVERAGES_HEADER: [&str; 4] = ["x_center", "h_avg", "m_avg", "case_tag"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRow {
    pub x: f64,
    pub h: f64,
    pub m: f64,
    pub b: f64,
    pub level: f64,
    pub frozen: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageRow {
    pub x_center: f64,
    pub h_avg: f64,
    pub m_avg: f64,
    pub case_tag: CaseTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub points: Vec<PointRow>,
    pub averages: Vec<AverageRow>,
}

/// Decimal form with 17 significant digits; zero is written as `0`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn points_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".points.csv")
}

pub fn averages_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".averages.csv")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

impl Snapshot {
    pub fn from_simulation(sim: &Simulation) -> Self {
        let grid = sim.grid();
        let st = sim.state();
        let bottom = sim.bottom();
        let points = st
            .pts
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let b = bottom.interface_value(j as isize);
                PointRow { x: grid.interface(j as isize), h: q.h(), m: q.m(), b, level: q.h() + b, frozen: st.frozen[j].is_some() }
            })
            .collect();
        let recons = sim.reconstructions();
        let averages = st
            .avg
            .iter()
            .enumerate()
            .map(|(i, q)| AverageRow {
                x_center: grid.center(i as isize),
                h_avg: q.h(),
                m_avg: q.m(),
                case_tag: recons[i + 1].tag(),
            })
            .collect();
        Snapshot { points, averages }
    }

    /// Point values as states.
    pub fn point_states(&self) -> Result<Vec<ConservedPair>> {
        self.points.iter().map(|p| ConservedPair::new(p.h, p.m)).collect()
    }

    /// Cell averages as states.
    pub fn average_states(&self) -> Result<Vec<ConservedPair>> {
        self.averages.iter().map(|a| ConservedPair::new(a.h_avg, a.m_avg)).collect()
    }

    /// Writes both files and returns their paths.
    pub fn write(&self, prefix: &Path) -> Result<(PathBuf, PathBuf)> {
        let pp = points_path(prefix);
        let mut w = csv::Writer::from_path(&pp).map_err(|e| SweError::csv(&pp, e))?;
        w.write_record(POINTS_HEADER).map_err(|e| SweError::csv(&pp, e))?;
        for p in &self.points {
            let frozen = if p.frozen { "1" } else { "0" };
            w.write_record([
                format_float(p.x),
                format_float(p.h),
                format_float(p.m),
                format_float(p.b),
                format_float(p.level),
                frozen.to_string(),
            ])
            .map_err(|e| SweError::csv(&pp, e))?;
        }
        w.flush().map_err(|e| SweError::io(&pp, e))?;

        let ap = averages_path(prefix);
        let mut w = csv::Writer::from_path(&ap).map_err(|e| SweError::csv(&ap, e))?;
        w.write_record(AVERAGES_HEADER).map_err(|e| SweError::csv(&ap, e))?;
        for a in &self.averages {
            w.write_record([
                format_float(a.x_center),
                format_float(a.h_avg),
                format_float(a.m_avg),
                a.case_tag.name().to_string(),
            ])
            .map_err(|e| SweError::csv(&ap, e))?;
        }
        w.flush().map_err(|e| SweError::io(&ap, e))?;
        Ok((pp, ap))
    }

    pub fn read(prefix: &Path) -> Result<Self> {
        let pp = points_path(prefix);
        let points = read_rows(&pp, &POINTS_HEADER, |f| {
            Some(PointRow {
                x: f[0].parse().ok()?,
                h: f[1].parse().ok()?,
                m: f[2].parse().ok()?,
                b: f[3].parse().ok()?,
                level: f[4].parse().ok()?,
                frozen: match f[5] {
                    "0" => false,
                    "1" => true,
                    _ => return None,
                },
            })
        })?;
        let ap = averages_path(prefix);
        let averages = read_rows(&ap, &AVERAGES_HEADER, |f| {
            Some(AverageRow {
                x_center: f[0].parse().ok()?,
                h_avg: f[1].parse().ok()?,
                m_avg: f[2].parse().ok()?,
                case_tag: CaseTag::parse(f[3])?,
            })
        })?;
        Ok(Snapshot { points, averages })
    }
}

fn read_rows<T>(path: &Path, header: &[&str], parse: impl Fn(&[&str]) -> Option<T>) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| SweError::csv(path, e))?;
    let found = reader.headers().map_err(|e| SweError::csv(path, e))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(SweError::InvalidInput(format!(
            "{}: expected header {}, found {}",
            path.display(),
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| SweError::csv(path, e))?;
        let fields: Vec<&str> = rec.iter().collect();
        let row = parse(&fields).ok_or_else(|| {
            SweError::InvalidInput(format!("{}: malformed row {}", path.display(), k + 2))
        })?;
        rows.push(row);
    }
    Ok(rows)
}
