//! Peak absorption as a function of the coherent mean photon number.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::sin2_series;
use super::{block_eigensystem, block_terms, uniform_times};
use crate::dist::{make_distribution, DistSpec, PhotonDistribution, TailPolicy};
use crate::error::{Error, Result};
use crate::spectral::{Mode, SpectralCache};
use crate::sum::Neumaier;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityScan {
    /// `(nbar, max_t S4)` in input order.
    pub points: Vec<(f64, f64)>,
    /// `max_s4 ~ c0 + c1 nbar + c2 nbar^2`.
    pub fit: (f64, f64, f64),
    pub residual_rms: f64,
}

impl CapacityScan {
    pub fn predict(&self, nbar: f64) -> f64 {
        let (c0, c1, c2) = self.fit;
        c0 + nbar * (c1 + nbar * c2)
    }

    pub fn mean_max_s4(&self) -> f64 {
        self.points.iter().map(|p| p.1).sum::<f64>() / self.points.len() as f64
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions<'a> {
    pub detuning: f64,
    pub tail: TailPolicy,
    pub cache: Option<&'a SpectralCache>,
}

impl Default for ScanOptions<'_> {
    fn default() -> Self {
        Self {
            detuning: 0.0,
            tail: TailPolicy::default(),
            cache: None,
        }
    }
}

/// Maximum of `S4` over a uniform grid on `[0, t_max]` for each coherent
/// mean in `nbars`, plus a least-squares quadratic through the maxima.
///
/// Each absorption block is evaluated once for unit initial weight and then
/// shared by every distribution that populates it.
pub fn capacity_scan(
    n_tlm: u32,
    nbars: &[f64],
    t_max: f64,
    t_steps: usize,
    opts: &ScanOptions<'_>,
) -> Result<CapacityScan> {
    if n_tlm == 0 {
        return Err(Error::param("n_tlm", "must be positive"));
    }
    if nbars.is_empty() {
        return Err(Error::param("nbars", "must not be empty"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::param("t_max", "must be positive and finite"));
    }
    if t_steps < 2 {
        return Err(Error::param("t_steps", "must be at least 2"));
    }
    let dists: Vec<PhotonDistribution> = nbars
        .iter()
        .map(|&nbar| make_distribution(&DistSpec::coherent(nbar), &opts.tail))
        .collect::<Result<_>>()?;
    let times = uniform_times(t_max, t_steps);

    let occupied: Vec<usize> = dists
        .iter()
        .flat_map(|d| d.probs.iter().enumerate().filter(|(n, p)| *n > 0 && **p > 0.0).map(|(n, _)| n))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let unit: Vec<Vec<f64>> = occupied
        .par_iter()
        .map(|&n| {
            let eig = block_eigensystem(opts.cache, n_tlm, n as u64, opts.detuning, Mode::Absorption)?;
            let terms: Vec<(f64, f64)> = block_terms(&eig, Mode::Absorption)
                .into_iter()
                .map(|(_, _, omega, amp)| (omega, amp))
                .collect();
            Ok(sin2_series(&terms, &times))
        })
        .collect::<Result<_>>()?;

    let points: Vec<(f64, f64)> = nbars
        .iter()
        .zip(&dists)
        .map(|(&nbar, d)| {
            let mut peak = 0.0f64;
            for k in 0..times.len() {
                let mut acc = Neumaier::new();
                for (series, &n) in unit.iter().zip(&occupied) {
                    if let Some(&p) = d.probs.get(n) {
                        acc.add(p * series[k]);
                    }
                }
                peak = peak.max(acc.value());
            }
            (nbar, peak)
        })
        .collect();

    let (fit, residual_rms) = fit_quadratic(&points)?;
    Ok(CapacityScan {
        points,
        fit,
        residual_rms,
    })
}

/// Least-squares `y ~ c0 + c1 x + c2 x^2` and the RMS residual.
///
/// With fewer than three distinct abscissae the minimum-norm solution is
/// returned.
pub fn fit_quadratic(points: &[(f64, f64)]) -> Result<((f64, f64, f64), f64)> {
    if points.is_empty() {
        return Err(Error::param("points", "must not be empty"));
    }
    let a = DMatrix::from_fn(points.len(), 3, |i, j| points[i].0.powi(j as i32));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let c = a
        .clone()
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::numerical("quadratic fit", e))?;
    let resid = &a * &c - &y;
    let rms = (resid.norm_squared() / points.len() as f64).sqrt();
    Ok(((c[0], c[1], c[2]), rms))
}
