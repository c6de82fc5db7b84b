//! Data file writers. Floats use Rust's shortest round-trip formatting, so
//! output is locale independent and re-parses to the same bits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::{Format, Manifest};
use crate::dist::PhotonDistribution;
use crate::dynamics::{CapacityScan, ModeSpectrum, TimeSeries};
use crate::error::{Error, Result};

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// `gamma_t,s_value,intensity`, one row per time point.
pub fn write_csv(series: &TimeSeries, intensity: &TimeSeries, path: &Path) -> Result<()> {
    if series.times != intensity.times || series.values.len() != series.times.len() {
        return Err(Error::param("intensity", "series are not aligned"));
    }
    let mut w = create(path)?;
    w.write_all(b"gamma_t,s_value,intensity\n")?;
    for ((t, s), i) in series.times.iter().zip(&series.values).zip(&intensity.values) {
        writeln!(w, "{t:?},{s:?},{i:?}")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SeriesFile<'a> {
    label: crate::dynamics::SeriesLabel,
    gamma_t: &'a [f64],
    s_value: &'a [f64],
    intensity: &'a [f64],
}

pub(super) fn write_series_json(series: &TimeSeries, intensity: &TimeSeries, path: &Path) -> Result<()> {
    if series.times != intensity.times {
        return Err(Error::param("intensity", "series are not aligned"));
    }
    write_json(
        &SeriesFile {
            label: series.label,
            gamma_t: &series.times,
            s_value: &series.values,
            intensity: &intensity.values,
        },
        path,
    )
}

pub(super) fn write_dist(d: &PhotonDistribution, format: Format, path: &Path) -> Result<()> {
    match format {
        Format::Json => write_json(d, path),
        Format::Csv => {
            let mut w = create(path)?;
            w.write_all(b"n,probability\n")?;
            for (n, p) in d.probs.iter().enumerate() {
                writeln!(w, "{n},{p:?}")?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub(super) fn write_spectrum(s: &ModeSpectrum, format: Format, path: &Path) -> Result<()> {
    match format {
        Format::Json => write_json(s, path),
        Format::Csv => {
            let mut w = create(path)?;
            w.write_all(b"n,j,jp,omega,amplitude\n")?;
            for t in &s.terms {
                writeln!(w, "{},{},{},{:?},{:?}", t.n, t.j, t.jp, t.omega, t.amplitude)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub(super) fn write_scan(s: &CapacityScan, format: Format, path: &Path) -> Result<()> {
    match format {
        Format::Json => write_json(s, path),
        Format::Csv => {
            let mut w = create(path)?;
            w.write_all(b"nbar,max_s4,fit\n")?;
            for &(nbar, peak) in &s.points {
                writeln!(w, "{nbar:?},{peak:?},{:?}", s.predict(nbar))?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    write_json(manifest, path)
}
