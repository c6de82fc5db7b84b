//! Time-grid evaluation of `sum amplitude * sin^2(omega t)`.
//!
//! Times are processed in fixed-size chunks. When a chunk is evenly spaced,
//! `cos(2 omega t)` is advanced by complex rotation from an exact seed at the
//! chunk start, which replaces two transcendental calls per term and point by
//! a handful of multiplies. The chunking depends only on the time grid, never
//! on the worker count, so results are bitwise reproducible.

use rayon::prelude::*;

use super::{check_times, ModeSpectrum, TimeSeries};
use crate::error::Result;
use crate::sum::Neumaier;

const CHUNK: usize = 64;

/// Evaluates a spectrum on a strictly increasing time grid.
pub fn evaluate(spectrum: &ModeSpectrum, times: &[f64]) -> Result<TimeSeries> {
    check_times(times)?;
    let terms: Vec<(f64, f64)> = spectrum
        .terms
        .iter()
        .map(|t| (t.omega, t.amplitude))
        .collect();
    Ok(TimeSeries {
        times: times.to_vec(),
        values: sin2_series(&terms, times),
        label: spectrum.label(),
    })
}

/// `sum_i amp_i * sin^2(omega_i t)` for each `t`, in term order.
pub(crate) fn sin2_series(terms: &[(f64, f64)], times: &[f64]) -> Vec<f64> {
    let chunks: Vec<&[f64]> = times.chunks(CHUNK).collect();
    chunks
        .par_iter()
        .flat_map_iter(|chunk| eval_chunk(terms, chunk))
        .collect()
}

fn uniform_step(chunk: &[f64]) -> Option<f64> {
    if chunk.len() < 3 {
        return None;
    }
    let dt = (chunk[chunk.len() - 1] - chunk[0]) / (chunk.len() - 1) as f64;
    let tol = 1e-12 * chunk[chunk.len() - 1].abs().max(dt);
    chunk
        .iter()
        .enumerate()
        .all(|(k, &t)| (t - (chunk[0] + k as f64 * dt)).abs() <= tol)
        .then_some(dt)
}

fn eval_chunk(terms: &[(f64, f64)], chunk: &[f64]) -> Vec<f64> {
    let mut acc = vec![Neumaier::new(); chunk.len()];
    match uniform_step(chunk) {
        Some(dt) => {
            let t0 = chunk[0];
            for &(omega, amp) in terms {
                let half = 0.5 * amp;
                let (mut s, mut c) = (2.0 * omega * t0).sin_cos();
                let (ds, dc) = (2.0 * omega * dt).sin_cos();
                for a in acc.iter_mut() {
                    // sin^2 x = (1 - cos 2x) / 2
                    a.add(half * (1.0 - c));
                    let next_c = c * dc - s * ds;
                    s = s * dc + c * ds;
                    c = next_c;
                }
            }
        }
        None => {
            for &(omega, amp) in terms {
                for (a, &t) in acc.iter_mut().zip(chunk) {
                    a.add(amp * (omega * t).sin().powi(2));
                }
            }
        }
    }
    acc.iter().map(Neumaier::value).collect()
}
