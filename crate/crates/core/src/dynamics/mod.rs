//! Time evolution of the field intensity for all-up and all-down molecules.
//!
//! Both observables are exact finite sums of `amplitude * sin^2(omega * gamma t)`
//! over eigenvalue pairs of the invariant blocks, one block per initial
//! photon number:
//!
//! * emission (all molecules up), `S1 = <n>(t) - nbar`, uses the block that
//!   starts at photon number `n` and climbs to `n + N`;
//! * absorption (all molecules down), `S4 = nbar - <n>(t)`, uses the block
//!   that ends at `n` and reaches down to `max(0, n - N)`.
//!
//! A [`ModeSpectrum`] holds the `(omega, amplitude)` terms; [`evaluate`] turns
//! it into a [`TimeSeries`].

pub mod analysis;
mod eval;
mod scan;
mod single;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::PhotonDistribution;
use crate::error::{Error, Result};
use crate::spectral::{EigenSystem, Mode, SpectralCache};

pub use eval::evaluate;
pub use scan::{capacity_scan, fit_quadratic, CapacityScan, ScanOptions};
pub use analysis::{envelope_regularity, running_amplitude, Regularity};
pub use single::{s1_single_tlm_closed, s1_windowed};

/// Eigenvalue pairs closer than this are treated as degenerate.
const DEGENERATE_GAP: f64 = 1e-13;

/// One `amplitude * sin^2(omega t)` contribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTerm {
    /// Initial photon number whose block produced the term.
    pub n: u64,
    pub j: u32,
    pub jp: u32,
    pub omega: f64,
    pub amplitude: f64,
}

/// Exact spectral representation of `S1` or `S4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    /// Sorted by `(n, j, jp)`.
    pub terms: Vec<SpectrumTerm>,
    pub n_tlm: u32,
    pub mode: Mode,
    pub detuning: f64,
    pub dist_digest: String,
    /// Terms with `|amplitude|` below this were dropped.
    pub amp_floor: f64,
    /// Sum of `|amplitude|` over dropped terms.
    pub dropped_mass: f64,
}

impl ModeSpectrum {
    /// Direct evaluation at a single time.
    pub fn value_at(&self, t: f64) -> f64 {
        crate::sum::neumaier_sum(
            self.terms
                .iter()
                .map(|term| term.amplitude * (term.omega * t).sin().powi(2)),
        )
    }

    pub fn label(&self) -> SeriesLabel {
        match self.mode {
            Mode::Emission => SeriesLabel::S1,
            Mode::Absorption => SeriesLabel::S4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesLabel {
    S1,
    S4,
    #[serde(rename = "intensity")]
    Intensity,
}

/// Observable sampled on a `gamma t` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub label: SeriesLabel,
}

impl TimeSeries {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `n` points evenly spaced on `[0, t_max]`.
pub fn uniform_times(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let dt = t_max / (n - 1) as f64;
            (0..n).map(|k| k as f64 * dt).collect()
        }
    }
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::param("times", "must be finite"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("times", "must be strictly increasing"));
    }
    Ok(())
}

/// Spectrum construction settings.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpectrumOptions<'a> {
    /// Defaults to `1e-16 * N`.
    pub amp_floor: Option<f64>,
    pub cache: Option<&'a SpectralCache>,
}

/// Pair terms of one block for unit initial weight, as `(j, jp, omega, amplitude)`.
pub(crate) fn block_terms(eig: &EigenSystem, mode: Mode) -> Vec<(u32, u32, f64, f64)> {
    let dim = eig.dim();
    if dim < 2 {
        return Vec::new();
    }
    // row holding the initial state, and photons gained (emission) or lost
    // (absorption) at each row
    let (start, shift): (usize, Box<dyn Fn(usize) -> f64>) = match mode {
        Mode::Emission => (0, Box::new(|k| k as f64)),
        Mode::Absorption => (dim - 1, Box::new(move |k| (dim - 1 - k) as f64)),
    };
    let weights: Vec<f64> = (0..dim).map(|k| shift(k)).collect();
    let mut out: Vec<(u32, u32, f64, f64)> = Vec::with_capacity(dim * (dim - 1) / 2);
    // all degenerate pairs of a block fold into one zero-frequency term
    let mut degenerate: Option<usize> = None;
    for j in 0..dim {
        let vj = eig.vector(j);
        let wj: Vec<f64> = vj.iter().zip(&weights).map(|(a, w)| a * w).collect();
        for jp in j + 1..dim {
            let vjp = eig.vector(jp);
            let moment: f64 = wj.iter().zip(vjp).map(|(a, b)| a * b).sum();
            let amplitude = -4.0 * vj[start] * vjp[start] * moment;
            let gap = (eig.q[jp] - eig.q[j]).abs();
            if gap >= DEGENERATE_GAP {
                out.push((j as u32, jp as u32, gap / 2.0, amplitude));
            } else if let Some(idx) = degenerate {
                out[idx].3 += amplitude;
            } else {
                degenerate = Some(out.len());
                out.push((j as u32, jp as u32, 0.0, amplitude));
            }
        }
    }
    out
}

pub(crate) fn block_eigensystem(
    cache: Option<&SpectralCache>,
    n_tlm: u32,
    n: u64,
    detuning: f64,
    mode: Mode,
) -> Result<std::sync::Arc<EigenSystem>> {
    match cache {
        Some(c) => c.get(n_tlm, n, detuning, mode),
        None => {
            let block = match mode {
                Mode::Emission => crate::spectral::emission_block(n_tlm, n, detuning)?,
                Mode::Absorption => crate::spectral::absorption_block(n_tlm, n, detuning)?,
            };
            Ok(std::sync::Arc::new(crate::spectral::diagonalize(&block)?))
        }
    }
}

/// Builds the spectrum of `S1` (emission) or `S4` (absorption).
///
/// Blocks are diagonalized in parallel on the current rayon pool; the term
/// order does not depend on the pool size.
pub fn mode_spectrum(
    dist: &PhotonDistribution,
    n_tlm: u32,
    detuning: f64,
    mode: Mode,
    opts: &SpectrumOptions<'_>,
) -> Result<ModeSpectrum> {
    if n_tlm == 0 {
        return Err(Error::param("n_tlm", "must be positive"));
    }
    if !detuning.is_finite() {
        return Err(Error::param("beta", "detuning must be finite"));
    }
    let amp_floor = opts.amp_floor.unwrap_or(1e-16 * f64::from(n_tlm));
    if !(amp_floor >= 0.0) {
        return Err(Error::param("amp_floor", "must be non-negative"));
    }

    let per_block: Vec<(Vec<SpectrumTerm>, f64)> = dist
        .probs
        .par_iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(n, &p)| {
            let eig = block_eigensystem(opts.cache, n_tlm, n as u64, detuning, mode)?;
            let mut kept = Vec::new();
            let mut dropped = 0.0;
            for (j, jp, omega, unit) in block_terms(&eig, mode) {
                let amplitude = p * unit;
                if amplitude.abs() < amp_floor {
                    dropped += amplitude.abs();
                } else {
                    kept.push(SpectrumTerm {
                        n: n as u64,
                        j,
                        jp,
                        omega,
                        amplitude,
                    });
                }
            }
            Ok((kept, dropped))
        })
        .collect::<Result<_>>()?;

    let mut terms = Vec::with_capacity(per_block.iter().map(|(t, _)| t.len()).sum());
    let mut dropped_mass = crate::sum::Neumaier::new();
    for (t, d) in per_block {
        terms.extend(t);
        dropped_mass.add(d);
    }
    Ok(ModeSpectrum {
        terms,
        n_tlm,
        mode,
        detuning,
        dist_digest: dist.digest(),
        amp_floor,
        dropped_mass: dropped_mass.value(),
    })
}

/// Spectrum of `S1`, all molecules initially up.
pub fn emission_spectrum(dist: &PhotonDistribution, n_tlm: u32, detuning: f64) -> Result<ModeSpectrum> {
    mode_spectrum(dist, n_tlm, detuning, Mode::Emission, &SpectrumOptions::default())
}

/// Spectrum of `S4`, all molecules initially down.
pub fn absorption_spectrum(dist: &PhotonDistribution, n_tlm: u32, detuning: f64) -> Result<ModeSpectrum> {
    mode_spectrum(dist, n_tlm, detuning, Mode::Absorption, &SpectrumOptions::default())
}

/// Field intensity in photon-number units: `nbar + S1` or `nbar - S4`.
///
/// A negative absorption intensity beyond `1e-9` signals an upstream
/// numerical fault and is reported as an invariant violation.
pub fn intensity(series: &TimeSeries, nbar: f64) -> Result<TimeSeries> {
    let values: Vec<f64> = match series.label {
        SeriesLabel::S1 => series.values.iter().map(|s| nbar + s).collect(),
        SeriesLabel::S4 => series.values.iter().map(|s| nbar - s).collect(),
        SeriesLabel::Intensity => {
            return Err(Error::param("series", "expected an S1 or S4 series"))
        }
    };
    if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| **v < -1e-9) {
        return Err(Error::Invariant(format!(
            "negative intensity {v:e} at gamma t = {}",
            series.times[k]
        )));
    }
    Ok(TimeSeries {
        times: series.times.clone(),
        values,
        label: SeriesLabel::Intensity,
    })
}
