use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{absorption_block, diagonalize, emission_block, EigenSystem, Mode};
use crate::error::Result;

type Key = (u32, u64, u64, Mode);

/// Read-through cache of block eigensystems keyed by `(N, n, beta, mode)`.
///
/// Safe for concurrent use; a racing insert simply overwrites an identical
/// entry.
#[derive(Debug, Default)]
pub struct SpectralCache {
    map: RwLock<HashMap<Key, Arc<EigenSystem>>>,
}

impl SpectralCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eigensystem of the block reached from photon number `n` in `mode`.
    pub fn get(&self, n_tlm: u32, n: u64, detuning: f64, mode: Mode) -> Result<Arc<EigenSystem>> {
        let key = (n_tlm, n, detuning.to_bits(), mode);
        if let Some(hit) = self.map.read().expect("cache lock poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let block = match mode {
            Mode::Emission => emission_block(n_tlm, n, detuning)?,
            Mode::Absorption => absorption_block(n_tlm, n, detuning)?,
        };
        let eig = Arc::new(diagonalize(&block)?);
        self.map
            .write()
            .expect("cache lock poisoned")
            .insert(key, Arc::clone(&eig));
        Ok(eig)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
