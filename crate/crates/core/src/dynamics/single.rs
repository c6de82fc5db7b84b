//! Single-molecule resonance formula and its windowed approximation.

use super::{check_times, SeriesLabel, TimeSeries};
use crate::dist::PhotonDistribution;
use crate::error::{Error, Result};
use crate::sum::Neumaier;

fn rabi_sum(weights: &[(f64, f64)], times: &[f64]) -> Vec<f64> {
    times
        .iter()
        .map(|&t| {
            let mut acc = Neumaier::new();
            for &(omega, p) in weights {
                acc.add(p * (omega * t).sin().powi(2));
            }
            acc.value()
        })
        .collect()
}

fn s1_over(dist: &PhotonDistribution, range: std::ops::RangeInclusive<usize>, times: &[f64]) -> TimeSeries {
    let weights: Vec<(f64, f64)> = range
        .filter_map(|n| {
            let p = *dist.probs.get(n)?;
            (p > 0.0).then(|| (((n + 1) as f64).sqrt(), p))
        })
        .collect();
    TimeSeries {
        times: times.to_vec(),
        values: rabi_sum(&weights, times),
        label: SeriesLabel::S1,
    }
}

/// `S1(t) = sum_n p_n sin^2(sqrt(n + 1) t)` for one resonant molecule,
/// evaluated term by term with no spectral machinery.
pub fn s1_single_tlm_closed(dist: &PhotonDistribution, times: &[f64]) -> Result<TimeSeries> {
    check_times(times)?;
    Ok(s1_over(dist, 0..=dist.n_max(), times))
}

/// The single-molecule sum restricted to photon numbers within
/// `width_sigmas` standard deviations of the mean.
pub fn s1_windowed(dist: &PhotonDistribution, times: &[f64], width_sigmas: f64) -> Result<TimeSeries> {
    check_times(times)?;
    if !(width_sigmas >= 0.0) || !width_sigmas.is_finite() {
        return Err(Error::param("width_sigmas", "must be a non-negative finite number"));
    }
    let half = width_sigmas * dist.var_closed.max(0.0).sqrt();
    let slack = 1e-9 * dist.mean_closed.abs().max(1.0);
    let lo = (dist.mean_closed - half - slack).ceil().max(0.0) as usize;
    let hi = (dist.mean_closed + half + slack).floor();
    if hi < 0.0 || (hi as usize) < lo {
        return Err(Error::param(
            "width_sigmas",
            format!("window around mean {} contains no photon number", dist.mean_closed),
        ));
    }
    Ok(s1_over(dist, lo..=hi as usize, times))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{make_distribution, DistSpec, TailPolicy};
    use crate::dynamics::uniform_times;

    #[test]
    fn vacuum_is_plain_rabi() {
        let times = uniform_times(10.0, 101);
        let s = s1_single_tlm_closed(&PhotonDistribution::number_state(0), &times).unwrap();
        for (t, v) in times.iter().zip(&s.values) {
            assert!((v - t.sin().powi(2)).abs() < 1e-15);
        }
        assert_eq!(s.values[0], 0.0);
    }

    #[test]
    fn wide_window_is_the_full_sum() {
        let d = make_distribution(&DistSpec::coherent(4.0), &TailPolicy::default()).unwrap();
        let times = uniform_times(20.0, 200);
        let full = s1_single_tlm_closed(&d, &times).unwrap();
        let wide = s1_windowed(&d, &times, 100.0).unwrap();
        assert_eq!(full.values, wide.values);
    }

    #[test]
    fn number_state_window_of_any_width() {
        let d = PhotonDistribution::number_state(7);
        let times = uniform_times(5.0, 30);
        let full = s1_single_tlm_closed(&d, &times).unwrap();
        for w in [0.0, 0.5, 3.0] {
            assert_eq!(s1_windowed(&d, &times, w).unwrap().values, full.values);
        }
    }

    #[test]
    fn one_sigma_window_tracks_the_full_sum() {
        let d = make_distribution(&DistSpec::coherent(100.0), &TailPolicy::default()).unwrap();
        let times = uniform_times(20.0, 2000);
        let full = s1_single_tlm_closed(&d, &times).unwrap();
        let win = s1_windowed(&d, &times, 1.0).unwrap();
        let dev = full
            .values
            .iter()
            .zip(&win.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev < 0.35, "deviation {dev}");
    }

    #[test]
    fn empty_window_and_bad_width_are_rejected() {
        let d = make_distribution(&DistSpec::coherent(2.5), &TailPolicy::default()).unwrap();
        let times = [0.0, 1.0];
        // sd = 1.58, so 0.1 sigma around 2.5 holds no integer
        assert!(matches!(s1_windowed(&d, &times, 0.1), Err(Error::Parameter { .. })));
        assert!(s1_windowed(&d, &times, -1.0).is_err());
        assert!(s1_windowed(&d, &times, f64::NAN).is_err());
    }
}
