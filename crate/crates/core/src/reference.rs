//! Brute-force validator: dense evolution in the truncated joint space
//! `|n> (x) |r = N/2, m>`.
//!
//! The Hamiltonian is assembled from the ladder operators directly and
//! diagonalized as one dense matrix, with no use of the block decomposition.
//! It uses the same scaled convention as the blocks: coupling
//! `<n+1, m-1| a^+ R_- |n, m>` and diagonal `-n * beta`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::dist::PhotonDistribution;
use crate::dynamics::{SeriesLabel, TimeSeries};
use crate::error::{Error, Result};
use crate::spectral::TcBlock;
use crate::sum::Neumaier;

/// Largest joint dimension accepted.
pub const MAX_JOINT_DIM: usize = 40_000;
const LEAKAGE_TOL: f64 = 1e-10;

/// Initial state of every molecule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tlm {
    Up,
    Down,
}

#[derive(Debug, Clone)]
pub struct JointSystem {
    pub n_tlm: u32,
    pub n_max: u64,
    pub beta: f64,
    /// Row-major-indexed dense Hamiltonian; row of `(n, m)` is [`Self::index`].
    pub h: DMatrix<f64>,
    eigen: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl JointSystem {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Row of photon number `n` and doubled projection `two_m`.
    pub fn index(&self, n: u64, two_m: i64) -> usize {
        let levels = self.n_tlm as usize + 1;
        n as usize * levels + ((two_m + i64::from(self.n_tlm)) / 2) as usize
    }

    /// `(n, two_m)` of a row.
    pub fn state(&self, row: usize) -> (u64, i64) {
        let levels = self.n_tlm as usize + 1;
        let n = (row / levels) as u64;
        let two_m = 2 * (row % levels) as i64 - i64::from(self.n_tlm);
        (n, two_m)
    }

    /// Doubled excitation number `2c = 2n + 2m`, conserved by `H`.
    fn two_c(&self, row: usize) -> i64 {
        let (n, two_m) = self.state(row);
        2 * n as i64 + two_m
    }

    /// The sub-matrix of one `c` sector, rows in increasing photon number.
    pub fn sector(&self, two_c: i64) -> DMatrix<f64> {
        let rows: Vec<usize> = (0..self.dim()).filter(|&r| self.two_c(r) == two_c).collect();
        DMatrix::from_fn(rows.len(), rows.len(), |i, j| self.h[(rows[i], rows[j])])
    }

    /// Largest deviation between a sector of `H` and the matching block.
    pub fn block_mismatch(&self, block: &TcBlock) -> f64 {
        let sector = self.sector(block.c.doubled());
        let dense = block.to_dense();
        let n = block.dim();
        if sector.nrows() != n {
            return f64::INFINITY;
        }
        (0..n * n)
            .map(|k| (sector[(k / n, k % n)] - dense[k]).abs())
            .fold(0.0, f64::max)
    }
}

/// Assembles and diagonalizes the joint Hamiltonian.
pub fn build_joint(n_tlm: u32, n_max: u64, beta: f64) -> Result<JointSystem> {
    if n_tlm == 0 {
        return Err(Error::param("n_tlm", "must be positive"));
    }
    if !beta.is_finite() {
        return Err(Error::param("beta", "detuning must be finite"));
    }
    let levels = n_tlm as usize + 1;
    let dim = (n_max as usize)
        .checked_add(1)
        .and_then(|f| f.checked_mul(levels))
        .filter(|&d| d <= MAX_JOINT_DIM)
        .ok_or_else(|| {
            Error::param(
                "n_max",
                format!("joint dimension (n_max + 1)(N + 1) exceeds {MAX_JOINT_DIM}"),
            )
        })?;

    let two_r = i64::from(n_tlm);
    let mut h = DMatrix::zeros(dim, dim);
    let sys_index = |n: u64, two_m: i64| n as usize * levels + ((two_m + two_r) / 2) as usize;
    for n in 0..=n_max {
        for two_m in (-two_r..=two_r).step_by(2) {
            let row = sys_index(n, two_m);
            h[(row, row)] = if beta == 0.0 { 0.0 } else { -(n as f64) * beta };
            // a^+ R_- : |n, m> -> |n + 1, m - 1>
            if n < n_max && two_m > -two_r {
                let ladder = ((two_r + two_m) * (two_r - two_m + 2)) as f64 / 4.0;
                let v = ((n + 1) as f64).sqrt() * ladder.sqrt();
                let col = sys_index(n + 1, two_m - 2);
                h[(row, col)] = v;
                h[(col, row)] = v;
            }
        }
    }

    let eigen = SymmetricEigen::new(h.clone());
    let sys = JointSystem {
        n_tlm,
        n_max,
        beta,
        h,
        eigen,
    };
    for i in 0..dim {
        for j in 0..dim {
            if sys.h[(i, j)] != 0.0 && sys.two_c(i) != sys.two_c(j) {
                return Err(Error::Invariant(format!(
                    "joint Hamiltonian couples different excitation sectors at ({i}, {j})"
                )));
            }
        }
    }
    Ok(sys)
}

/// Mean photon number `<a^+ a>(t)` for the product initial state `rho_f (x) |all tlm>`.
///
/// Each populated `|n>` evolves independently; field levels that would need
/// photons above `n_max` are rejected up front, and any population found
/// outside the initial excitation sector is reported as leakage.
pub fn evolve_photon_number(
    sys: &JointSystem,
    dist: &PhotonDistribution,
    tlm: Tlm,
    times: &[f64],
) -> Result<TimeSeries> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::param("times", "must be finite"));
    }
    let two_r = i64::from(sys.n_tlm);
    let (two_m0, reach) = match tlm {
        Tlm::Up => (two_r, u64::from(sys.n_tlm)),
        Tlm::Down => (-two_r, 0),
    };
    let dim = sys.dim();
    let v = &sys.eigen.eigenvectors;
    let e = &sys.eigen.eigenvalues;
    let photons: Vec<f64> = (0..dim).map(|r| sys.state(r).0 as f64).collect();

    let mut per_state: Vec<(f64, Vec<f64>)> = Vec::new();
    for (n, &p) in dist.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        if n as u64 + reach > sys.n_max {
            return Err(Error::param(
                "n_max",
                format!("photon number {n} needs n_max >= {}", n as u64 + reach),
            ));
        }
        let start = sys.index(n as u64, two_m0);
        let sector = sys.two_c(start);
        let overlap: Vec<f64> = (0..dim).map(|j| v[(start, j)]).collect();
        let mut series = Vec::with_capacity(times.len());
        for &t in times {
            let phases: Vec<(f64, f64)> = (0..dim)
                .map(|j| {
                    let (s, c) = (-e[j] * t).sin_cos();
                    (overlap[j] * c, overlap[j] * s)
                })
                .collect();
            let mut mean = Neumaier::new();
            let mut norm = Neumaier::new();
            let mut outside = 0.0;
            for row in 0..dim {
                let (mut re, mut im) = (0.0, 0.0);
                for (j, &(pc, ps)) in phases.iter().enumerate() {
                    re += v[(row, j)] * pc;
                    im += v[(row, j)] * ps;
                }
                let pop = re * re + im * im;
                norm.add(pop);
                if sys.two_c(row) == sector {
                    mean.add(photons[row] * pop);
                } else {
                    outside += pop;
                }
            }
            if outside > LEAKAGE_TOL || (norm.value() - 1.0).abs() > LEAKAGE_TOL {
                return Err(Error::numerical(
                    "reference evolution",
                    format!(
                        "norm {} with {outside:e} outside the initial sector at t = {t}",
                        norm.value()
                    ),
                ));
            }
            series.push(mean.value());
        }
        per_state.push((p, series));
    }

    let values = (0..times.len())
        .map(|k| {
            let mut acc = Neumaier::new();
            for (p, s) in &per_state {
                acc.add(p * s[k]);
            }
            acc.value()
        })
        .collect();
    Ok(TimeSeries {
        times: times.to_vec(),
        values,
        label: SeriesLabel::Intensity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{absorption_block, emission_block};

    #[test]
    fn two_level_single_mode() {
        let sys = build_joint(1, 1, 0.0).unwrap();
        assert_eq!(sys.dim(), 4);
        let nonzero: Vec<f64> = sys.h.iter().copied().filter(|v| *v != 0.0).collect();
        assert_eq!(nonzero, vec![1.0, 1.0]);
    }

    #[test]
    fn sectors_match_blocks() {
        for beta in [0.0, 0.7, -2.0] {
            let sys = build_joint(3, 12, beta).unwrap();
            for n in 0..=9 {
                assert!(sys.block_mismatch(&emission_block(3, n, beta).unwrap()) < 1e-14);
                assert!(sys.block_mismatch(&absorption_block(3, n, beta).unwrap()) < 1e-14);
            }
        }
    }

    #[test]
    fn resonant_trace_vanishes() {
        let sys = build_joint(2, 6, 0.0).unwrap();
        for two_c in -2..=14 {
            assert_eq!(sys.sector(two_c).trace(), 0.0);
        }
    }

    #[test]
    fn vacuum_rabi_oscillation() {
        let sys = build_joint(1, 2, 0.0).unwrap();
        let times: Vec<f64> = (0..40).map(|k| 0.1 * k as f64).collect();
        let s = evolve_photon_number(&sys, &PhotonDistribution::number_state(0), Tlm::Up, &times).unwrap();
        for (t, v) in times.iter().zip(&s.values) {
            assert!((v - t.sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_with_molecules_down_stays_dark() {
        let sys = build_joint(4, 3, 0.5).unwrap();
        let s = evolve_photon_number(&sys, &PhotonDistribution::number_state(0), Tlm::Down, &[0.0, 1.0, 7.0]).unwrap();
        assert!(s.values.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn two_molecule_vacuum_frequencies() {
        // sector |0, up up>, |1, m=0>, |2, down down>: eigenvalues 0, +-sqrt(6)
        let sys = build_joint(2, 2, 0.0).unwrap();
        let mut q: Vec<f64> = sys.sector(2).symmetric_eigenvalues().iter().copied().collect();
        q.sort_by(f64::total_cmp);
        assert!((q[0] + 6f64.sqrt()).abs() < 1e-13 && q[1].abs() < 1e-13 && (q[2] - 6f64.sqrt()).abs() < 1e-13);
        let times: Vec<f64> = (0..30).map(|k| 0.2 * k as f64).collect();
        let s = evolve_photon_number(&sys, &PhotonDistribution::number_state(0), Tlm::Up, &times).unwrap();
        for (t, v) in times.iter().zip(&s.values) {
            let (sn, cs) = (6f64.sqrt() * t).sin_cos();
            let want = sn * sn / 3.0 + 4.0 / 9.0 * (1.0 - cs).powi(2);
            assert!((v - want).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn size_guard_and_truncation() {
        assert!(matches!(build_joint(199, 200, 0.0), Err(Error::Parameter { .. })));
        let sys = build_joint(2, 3, 0.0).unwrap();
        let d = PhotonDistribution::number_state(2);
        assert!(evolve_photon_number(&sys, &d, Tlm::Up, &[0.0]).is_err());
        assert!(evolve_photon_number(&sys, &d, Tlm::Down, &[0.0]).is_ok());
    }
}
