//! Invariant blocks of the N-molecule single-mode Hamiltonian.
//!
//! For the fully symmetric cooperation sector `r = N/2` the Hamiltonian
//! conserves `c = n + m` (photon number plus collective spin projection), so
//! it splits into independent tridiagonal blocks spanned by `|n>|r, c - n>`.
//! Each block is stored in the scaled form `M = (c - H) / |kappa|`, whose
//! eigenvalues are the effective eigenvalues `q` and whose time argument is
//! the dimensionless `gamma t`.

mod cache;
mod tql;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cache::SpectralCache;

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub const fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Which initial molecular state a block (or spectrum) describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// All molecules initially up: stimulated emission.
    Emission,
    /// All molecules initially down: stimulated absorption.
    Absorption,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Emission => f.write_str("emission"),
            Mode::Absorption => f.write_str("absorption"),
        }
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Multiplicity `P(r)` of the cooperation-number-`r` sector of `N` molecules.
///
/// `two_r` is `2r`. Evaluated exactly as `N!(2r+1) / ((N/2+r+1)!(N/2-r)!)`.
pub fn multiplicity(n_tlm: u32, two_r: u32) -> Result<BigRational> {
    if n_tlm == 0 {
        return Err(Error::param("n_tlm", "must be positive"));
    }
    if two_r > n_tlm || (n_tlm - two_r) % 2 != 0 {
        return Err(Error::param(
            "r",
            format!("2r = {two_r} incompatible with N = {n_tlm}"),
        ));
    }
    let n = u64::from(n_tlm);
    let tr = u64::from(two_r);
    let num = factorial(n) * BigInt::from(tr + 1);
    let den = factorial((n + tr) / 2 + 1) * factorial((n - tr) / 2);
    Ok(BigRational::new(num, den))
}

/// All sector multiplicities for `N` molecules.
#[derive(Debug, Clone)]
pub struct MultiplicityTable {
    pub n_tlm: u32,
    pub values: BTreeMap<HalfInt, BigRational>,
}

impl MultiplicityTable {
    pub fn new(n_tlm: u32) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut two_r = n_tlm as i64;
        while two_r >= 0 {
            values.insert(
                HalfInt::from_doubled(two_r),
                multiplicity(n_tlm, two_r as u32)?,
            );
            two_r -= 2;
        }
        Ok(Self { n_tlm, values })
    }

    /// `sum_r P(r) (2r + 1)`, which counts all `2^N` product states.
    pub fn state_count(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |acc, (r, p)| {
            acc + p * BigRational::from_integer(BigInt::from(r.doubled() + 1))
        })
    }
}

/// One invariant `(r = N/2, c)` block in scaled form.
#[derive(Debug, Clone, PartialEq)]
pub struct TcBlock {
    pub n_tlm: u32,
    pub r: HalfInt,
    pub c: HalfInt,
    /// Photon number of basis row 0.
    pub n_min: u64,
    pub diag: Vec<f64>,
    /// `offdiag[k]` couples photon numbers `n_min + k` and `n_min + k + 1`.
    pub offdiag: Vec<f64>,
    pub detuning: f64,
}

impl TcBlock {
    /// Builds the fully symmetric block with conserved quantum number `c`.
    pub fn new(n_tlm: u32, c: HalfInt, detuning: f64) -> Result<Self> {
        if n_tlm == 0 {
            return Err(Error::param("n_tlm", "must be positive"));
        }
        if !detuning.is_finite() {
            return Err(Error::param("beta", "detuning must be finite"));
        }
        let two_r = i64::from(n_tlm);
        let two_c = c.doubled();
        if (two_c - two_r).rem_euclid(2) != 0 {
            return Err(Error::param("c", format!("c = {c} and r = N/2 differ by a non-integer")));
        }
        if two_c + two_r < 0 {
            return Err(Error::param("c", format!("c = {c} below -r")));
        }
        let n_min = ((two_c - two_r) / 2).max(0) as u64;
        let dim = (two_r.min((two_c + two_r) / 2) + 1) as usize;

        let diag = (0..dim)
            .map(|k| -((n_min + k as u64) as f64) * detuning)
            .map(|v| if v == 0.0 { 0.0 } else { v })
            .collect();
        let offdiag = (0..dim.saturating_sub(1))
            .map(|k| {
                let photons = n_min + k as u64 + 1;
                // doubled spin projection of the higher-photon state
                let two_m = two_c - 2 * photons as i64;
                let ladder = ((two_r - two_m) * (two_r + two_m + 2)) as f64 / 4.0;
                (photons as f64).sqrt() * ladder.sqrt()
            })
            .collect();

        Ok(Self {
            n_tlm,
            r: HalfInt::from_doubled(two_r),
            c,
            n_min,
            diag,
            offdiag,
            detuning,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Photon number of basis row `k`.
    pub fn photons(&self, k: usize) -> u64 {
        self.n_min + k as u64
    }

    fn describe(&self) -> String {
        format!(
            "block(N = {}, c = {}, beta = {})",
            self.n_tlm, self.c, self.detuning
        )
    }

    /// Dense row-major copy, mostly for tests and diagnostics.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut m = vec![0.0; n * n];
        for k in 0..n {
            m[k * n + k] = self.diag[k];
        }
        for (k, &v) in self.offdiag.iter().enumerate() {
            m[k * n + k + 1] = v;
            m[(k + 1) * n + k] = v;
        }
        m
    }
}

/// Block reached from `|n>` with all molecules up.
pub fn emission_block(n_tlm: u32, n: u64, detuning: f64) -> Result<TcBlock> {
    let c = HalfInt::from_doubled(2 * n as i64 + i64::from(n_tlm));
    TcBlock::new(n_tlm, c, detuning)
}

/// Block reached from `|n>` with all molecules down.
pub fn absorption_block(n_tlm: u32, n: u64, detuning: f64) -> Result<TcBlock> {
    let c = HalfInt::from_doubled(2 * n as i64 - i64::from(n_tlm));
    TcBlock::new(n_tlm, c, detuning)
}

/// Sorted eigenvalues and orthonormal eigenvectors of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub n_min: u64,
    /// Ascending effective eigenvalues.
    pub q: Vec<f64>,
    /// Column-major `dim x dim`; column `j` is the eigenvector of `q[j]`.
    vectors: Vec<f64>,
}

/// Eigenvector components below this are treated as zero when fixing signs.
const SIGN_THRESHOLD: f64 = 1e-12;

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Eigenvector `j`, indexed by `photon number - n_min`.
    pub fn vector(&self, j: usize) -> &[f64] {
        let n = self.dim();
        &self.vectors[j * n..(j + 1) * n]
    }

    /// Component `A_{n_min + k}^j`.
    pub fn component(&self, k: usize, j: usize) -> f64 {
        self.vectors[j * self.dim() + k]
    }

    /// `max |A^T A - I|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            let vi = self.vector(i);
            for j in i..n {
                let dot: f64 = vi.iter().zip(self.vector(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max |A A^T - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for k in 0..n {
            for kp in k..n {
                let s: f64 = (0..n).map(|j| self.component(k, j) * self.component(kp, j)).sum();
                let target = if k == kp { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition of a block.
///
/// Eigenvalues come back ascending; every eigenvector has its first
/// non-negligible component positive. Fails if QL does not converge or the
/// eigenvectors lose orthonormality beyond `1e-12 * dim`.
pub fn diagonalize(block: &TcBlock) -> Result<EigenSystem> {
    let n = block.dim();
    let mut d = block.diag.clone();
    let mut e = block.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql::tql2(&mut d, &mut e, &mut z).map_err(|idx| {
        Error::numerical(
            block.describe(),
            format!("QL iteration did not converge for eigenvalue {idx}"),
        )
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let q: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &j in &order {
        let col = &z[j * n..(j + 1) * n];
        let flip = col
            .iter()
            .find(|v| v.abs() > SIGN_THRESHOLD)
            .is_some_and(|v| *v < 0.0);
        vectors.extend(col.iter().map(|&v| if flip { -v } else { v }));
    }

    let eig = EigenSystem {
        n_min: block.n_min,
        q,
        vectors,
    };
    if eig.q.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical(block.describe(), "non-finite eigenvalue"));
    }
    let residual = eig.orthonormality_residual();
    if !(residual < 1e-12 * n as f64) {
        return Err(Error::numerical(
            block.describe(),
            format!("orthonormality residual {residual:e} exceeds {:e}", 1e-12 * n as f64),
        ));
    }
    Ok(eig)
}
