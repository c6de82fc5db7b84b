//! Envelope and regularity measures for oscillating series.
//!
//! The oscillation envelope at `t` is the largest `|S - center|` over the
//! centered window `[t - w/2, t + w/2]`. Collapse and revival show up as
//! dips and peaks of this envelope; the spacing between its prominent peaks
//! measures how regular the rise and fall is.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::TimeSeries;
use crate::error::{Error, Result};

/// Sliding-window maximum of `|values - center|`.
pub fn running_amplitude(times: &[f64], values: &[f64], center: f64, width: f64) -> Result<Vec<f64>> {
    if times.len() != values.len() {
        return Err(Error::param("values", "length differs from times"));
    }
    if !(width >= 0.0) {
        return Err(Error::param("width", "must be non-negative"));
    }
    let half = width / 2.0;
    let dev: Vec<f64> = values.iter().map(|v| (v - center).abs()).collect();
    let mut out = Vec::with_capacity(dev.len());
    // indices with decreasing deviation
    let mut window: VecDeque<usize> = VecDeque::new();
    let mut hi = 0;
    for &t in times {
        while hi < times.len() && times[hi] <= t + half {
            while window.back().is_some_and(|&b| dev[b] <= dev[hi]) {
                window.pop_back();
            }
            window.push_back(hi);
            hi += 1;
        }
        while window.front().is_some_and(|&f| times[f] < t - half) {
            window.pop_front();
        }
        out.push(window.front().map_or(0.0, |&f| dev[f]));
    }
    Ok(out)
}

/// Interior local maxima whose topographic prominence is at least
/// `min_prominence`. A flat top counts once, at its left edge.
pub fn prominent_peaks(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] && prominence(values, i, j) >= min_prominence {
                peaks.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

fn prominence(values: &[f64], left: usize, right: usize) -> f64 {
    let top = values[left];
    let mut left_min = top;
    for &v in values[..left].iter().rev() {
        if v > top {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = top;
    for &v in &values[right + 1..] {
        if v > top {
            break;
        }
        right_min = right_min.min(v);
    }
    top - left_min.max(right_min)
}

/// Peak spacing statistics of a series' oscillation envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    /// Times of the prominent envelope peaks.
    pub peak_times: Vec<f64>,
    /// Population standard deviation over mean of consecutive spacings;
    /// `NaN` with fewer than three peaks.
    pub spacing_cv: f64,
}

/// Envelope of `|S - mean(S)|` with window `width`, peaks at least
/// `prominence_frac` of the envelope range, and their spacing variation.
pub fn envelope_regularity(series: &TimeSeries, width: f64, prominence_frac: f64) -> Result<Regularity> {
    if series.values.is_empty() {
        return Err(Error::param("series", "must not be empty"));
    }
    let mean = crate::sum::neumaier_sum(series.values.iter().copied()) / series.values.len() as f64;
    let env = running_amplitude(&series.times, &series.values, mean, width)?;
    let (lo, hi) = env
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let peak_times: Vec<f64> = prominent_peaks(&env, prominence_frac * (hi - lo))
        .into_iter()
        .map(|k| series.times[k])
        .collect();
    let spacing: Vec<f64> = peak_times.windows(2).map(|w| w[1] - w[0]).collect();
    let spacing_cv = if spacing.len() < 2 {
        f64::NAN
    } else {
        let m = spacing.iter().sum::<f64>() / spacing.len() as f64;
        let var = spacing.iter().map(|s| (s - m).powi(2)).sum::<f64>() / spacing.len() as f64;
        var.sqrt() / m
    };
    Ok(Regularity {
        peak_times,
        spacing_cv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{uniform_times, SeriesLabel};

    #[test]
    fn running_amplitude_matches_brute_force() {
        let times = uniform_times(10.0, 301);
        let values: Vec<f64> = times.iter().map(|t| (3.1 * t).sin() * (0.4 * t).cos()).collect();
        let fast = running_amplitude(&times, &values, 0.1, 1.3).unwrap();
        for (i, &t) in times.iter().enumerate() {
            let slow = times
                .iter()
                .zip(&values)
                .filter(|(s, _)| (*s - t).abs() <= 0.65)
                .map(|(_, v)| (v - 0.1).abs())
                .fold(0.0, f64::max);
            assert_eq!(fast[i], slow);
        }
    }

    #[test]
    fn prominence_filters_ripples() {
        let v = [0.0, 5.0, 4.0, 4.5, 0.0, 3.0, 3.0, 1.0, 0.0];
        assert_eq!(prominent_peaks(&v, 0.0), vec![1, 3, 5]);
        assert_eq!(prominent_peaks(&v, 1.0), vec![1, 5]);
        assert_eq!(prominent_peaks(&v, 4.0), vec![1]);
    }

    #[test]
    fn beating_signal_is_regular() {
        let times = uniform_times(200.0, 8001);
        let values: Vec<f64> = times
            .iter()
            .map(|t| (5.0 * t).sin() * (0.1 * t).cos().powi(8))
            .collect();
        let series = TimeSeries {
            times,
            values,
            label: SeriesLabel::S4,
        };
        let r = envelope_regularity(&series, 2.0, 0.25).unwrap();
        assert!(r.peak_times.len() >= 5);
        assert!(r.spacing_cv < 0.02, "{r:?}");
    }
}
