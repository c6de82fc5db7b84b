//! The `tcsim` command-line front end.
//!
//! A [`RunConfig`] selects one of six commands. [`run`] executes it on a
//! worker pool of the requested size and writes the data file at
//! `config.out`, a JSON manifest next to it and, optionally, an SVG chart.
//! Data files depend only on the configuration, never on the worker count.

mod args;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dist::{make_distribution, DistSpec, PhotonDistribution, TailPolicy};
use crate::dynamics::{
    capacity_scan, evaluate, intensity, mode_spectrum, uniform_times, CapacityScan, ModeSpectrum,
    ScanOptions, SeriesLabel, SpectrumOptions, TimeSeries,
};
use crate::error::{Error, Result};
use crate::reference::{build_joint, evolve_photon_number, Tlm};
use crate::spectral::{Mode, SpectralCache};
use crate::sum::neumaier_sum;

pub use args::{main_with_args, Args};
pub use output::{write_csv, write_manifest};
pub use svg::polyline_chart;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// S1 and intensity, all molecules up.
    Emit,
    /// S4 and intensity, all molecules down.
    Absorb,
    /// The truncated photon-number distribution.
    Dist,
    /// The (omega, amplitude) terms of S1 or S4.
    Spectrum,
    /// Dense-Hamiltonian cross-check of emit or absorb.
    Oracle,
    /// Peak absorption over a list of coherent means, with a quadratic fit.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "defaults::n_tlm")]
    pub n_tlm: u32,
    #[serde(default = "defaults::dist")]
    pub dist: DistSpec,
    /// Detuning in units of the coupling.
    #[serde(default)]
    pub beta: f64,
    /// Observable for `spectrum` and `oracle`.
    #[serde(default = "defaults::mode")]
    pub mode: Mode,
    #[serde(default = "defaults::t_max")]
    pub t_max: f64,
    #[serde(default = "defaults::t_steps")]
    pub t_steps: usize,
    #[serde(default = "defaults::tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "defaults::out")]
    pub out: PathBuf,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub plot: bool,
    /// Worker count; 0 picks one per available core.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub amp_floor: Option<f64>,
    /// Coherent means for `scan`.
    #[serde(default = "defaults::nbars")]
    pub nbars: Vec<f64>,
}

mod defaults {
    use super::*;
    pub fn n_tlm() -> u32 {
        1
    }
    pub fn dist() -> DistSpec {
        DistSpec::coherent(1.0)
    }
    pub fn mode() -> Mode {
        Mode::Emission
    }
    pub fn t_max() -> f64 {
        100.0
    }
    pub fn t_steps() -> usize {
        2000
    }
    pub fn tail_tol() -> f64 {
        1e-12
    }
    pub fn out() -> PathBuf {
        PathBuf::from("tcsim-out.csv")
    }
    pub fn nbars() -> Vec<f64> {
        vec![20.0, 40.0, 60.0, 80.0, 100.0, 120.0]
    }
}

impl RunConfig {
    /// Defaults for `command`.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n_tlm: defaults::n_tlm(),
            dist: defaults::dist(),
            beta: 0.0,
            mode: defaults::mode(),
            t_max: defaults::t_max(),
            t_steps: defaults::t_steps(),
            tail_tol: defaults::tail_tol(),
            out: defaults::out(),
            format: Format::Csv,
            plot: false,
            threads: 0,
            amp_floor: None,
            nbars: defaults::nbars(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::param("config", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_tlm == 0 {
            return Err(Error::param("n_tlm", "must be at least 1"));
        }
        if !self.beta.is_finite() {
            return Err(Error::param("beta", "must be finite"));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::param("t_max", "must be positive and finite"));
        }
        if self.t_steps < 2 {
            return Err(Error::param("t_steps", "must be at least 2"));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::param("tail_tol", "must lie in (0, 1)"));
        }
        if let Some(f) = self.amp_floor {
            if !(f >= 0.0) || !f.is_finite() {
                return Err(Error::param("amp_floor", "must be non-negative and finite"));
            }
        }
        if self.command == Command::Scan {
            if self.nbars.is_empty() {
                return Err(Error::param("nbars", "must not be empty"));
            }
            if self.nbars.iter().any(|n| !(*n >= 0.0) || !n.is_finite()) {
                return Err(Error::param("nbars", "must be non-negative and finite"));
            }
        }
        if self.out.as_os_str().is_empty() {
            return Err(Error::param("out", "must not be empty"));
        }
        self.dist.validate()
    }

    pub fn manifest_path(&self) -> PathBuf {
        sibling(&self.out, "manifest.json")
    }

    pub fn plot_path(&self) -> PathBuf {
        sibling(&self.out, "svg")
    }
}

fn sibling(out: &Path, ext: &str) -> PathBuf {
    out.with_extension(ext)
}

/// Run metadata written next to the data file.
///
/// Fields are only ever added, never renamed or removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub engine: String,
    pub version: String,
    pub config: RunConfig,
    pub workers: usize,
    pub wall_time_s: f64,
    /// Series are in photon-number units; the `|gamma/mu|^2` prefactor of the
    /// field correlation is left out.
    pub units: String,
    pub n_max: Option<usize>,
    pub tail_mass: Option<f64>,
    /// Mean photon number of the truncated distribution.
    pub nbar: Option<f64>,
    pub amp_floor: Option<f64>,
    pub dropped_mass: Option<f64>,
    pub n_terms: Option<usize>,
    pub oracle_max_deviation: Option<f64>,
    pub capacity_scan: Option<CapacityScan>,
    pub outputs: Vec<PathBuf>,
}

/// Result of a successful [`run`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
}

/// Payload of one command, before it is written out.
enum Payload {
    Series { s: TimeSeries, intensity: TimeSeries },
    Dist(PhotonDistribution),
    Spectrum(ModeSpectrum),
    Scan(CapacityScan),
}

/// Executes `config` and writes its artifacts.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::param("threads", e.to_string()))?;
    let workers = pool.current_num_threads();
    let mut manifest = Manifest {
        engine: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        workers,
        wall_time_s: 0.0,
        units: "photon number (|gamma/mu|^2 not applied)".to_string(),
        n_max: None,
        tail_mass: None,
        nbar: None,
        amp_floor: None,
        dropped_mass: None,
        n_terms: None,
        oracle_max_deviation: None,
        capacity_scan: None,
        outputs: Vec::new(),
    };
    let payload = pool.install(|| compute(config, &mut manifest))?;

    let mut outputs = vec![config.out.clone()];
    match &payload {
        Payload::Series { s, intensity } => match config.format {
            Format::Csv => write_csv(s, intensity, &config.out)?,
            Format::Json => output::write_series_json(s, intensity, &config.out)?,
        },
        Payload::Dist(d) => output::write_dist(d, config.format, &config.out)?,
        Payload::Spectrum(s) => output::write_spectrum(s, config.format, &config.out)?,
        Payload::Scan(s) => output::write_scan(s, config.format, &config.out)?,
    }
    if config.plot {
        let chart = match &payload {
            Payload::Series { s, .. } => {
                let name = match s.label {
                    SeriesLabel::S1 => "S1",
                    SeriesLabel::S4 => "S4",
                    SeriesLabel::Intensity => "intensity",
                };
                polyline_chart(&s.times, &s.values, "γt", name)
            }
            Payload::Dist(d) => {
                let n: Vec<f64> = (0..d.probs.len()).map(|k| k as f64).collect();
                polyline_chart(&n, &d.probs, "n", "probability")
            }
            Payload::Spectrum(s) => {
                let w: Vec<f64> = s.terms.iter().map(|t| t.omega).collect();
                let a: Vec<f64> = s.terms.iter().map(|t| t.amplitude).collect();
                polyline_chart(&w, &a, "omega", "amplitude")
            }
            Payload::Scan(s) => {
                let (x, y): (Vec<f64>, Vec<f64>) = s.points.iter().copied().unzip();
                polyline_chart(&x, &y, "nbar", "max S4")
            }
        };
        std::fs::write(config.plot_path(), chart)?;
        outputs.push(config.plot_path());
    }
    manifest.outputs = outputs;
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    let manifest_path = config.manifest_path();
    write_manifest(&manifest, &manifest_path)?;
    Ok(RunReport {
        manifest,
        manifest_path,
    })
}

fn truncated_mean(d: &PhotonDistribution) -> f64 {
    neumaier_sum(d.probs.iter().enumerate().map(|(n, p)| n as f64 * p))
}

fn compute(config: &RunConfig, manifest: &mut Manifest) -> Result<Payload> {
    if config.command == Command::Scan {
        let cache = SpectralCache::new();
        let opts = ScanOptions {
            detuning: config.beta,
            tail: TailPolicy::with_tol(config.tail_tol),
            cache: Some(&cache),
        };
        let scan = capacity_scan(config.n_tlm, &config.nbars, config.t_max, config.t_steps, &opts)?;
        manifest.capacity_scan = Some(scan.clone());
        return Ok(Payload::Scan(scan));
    }

    let dist = make_distribution(&config.dist, &TailPolicy::with_tol(config.tail_tol))?;
    let nbar = truncated_mean(&dist);
    manifest.n_max = Some(dist.n_max());
    manifest.tail_mass = Some(dist.tail_mass);
    manifest.nbar = Some(nbar);
    if config.command == Command::Dist {
        return Ok(Payload::Dist(dist));
    }

    let mode = match config.command {
        Command::Emit => Mode::Emission,
        Command::Absorb => Mode::Absorption,
        _ => config.mode,
    };
    let opts = SpectrumOptions {
        amp_floor: config.amp_floor,
        cache: None,
    };
    let spectrum = mode_spectrum(&dist, config.n_tlm, config.beta, mode, &opts)?;
    manifest.amp_floor = Some(spectrum.amp_floor);
    manifest.dropped_mass = Some(spectrum.dropped_mass);
    manifest.n_terms = Some(spectrum.terms.len());
    if config.command == Command::Spectrum {
        return Ok(Payload::Spectrum(spectrum));
    }

    let times = uniform_times(config.t_max, config.t_steps);
    let s = evaluate(&spectrum, &times)?;
    if config.command == Command::Oracle {
        let (tlm, reach) = match mode {
            Mode::Emission => (Tlm::Up, u64::from(config.n_tlm)),
            Mode::Absorption => (Tlm::Down, 0),
        };
        let sys = build_joint(config.n_tlm, dist.n_max() as u64 + reach, config.beta)?;
        let dense = evolve_photon_number(&sys, &dist, tlm, &times)?;
        let spectral = intensity(&s, nbar)?;
        manifest.oracle_max_deviation = Some(
            dense
                .values
                .iter()
                .zip(&spectral.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
        let values = dense
            .values
            .iter()
            .map(|n| match mode {
                Mode::Emission => n - nbar,
                Mode::Absorption => nbar - n,
            })
            .collect();
        let s_dense = TimeSeries {
            times: times.clone(),
            values,
            label: s.label,
        };
        return Ok(Payload::Series {
            s: s_dense,
            intensity: dense,
        });
    }
    let i = intensity(&s, nbar)?;
    Ok(Payload::Series { s, intensity: i })
}
