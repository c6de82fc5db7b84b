//! Peak absorption against field strength, with a quadratic fit.

use tavis_cummings::dynamics::{capacity_scan, ScanOptions};
use tavis_cummings::spectral::SpectralCache;

fn main() -> tavis_cummings::Result<()> {
    let cache = SpectralCache::new();
    let opts = ScanOptions {
        cache: Some(&cache),
        ..ScanOptions::default()
    };
    let n_tlm = 40;
    let nbars: Vec<f64> = (1..=8).map(|k| 10.0 * k as f64).collect();
    let scan = capacity_scan(n_tlm, &nbars, 100.0, 2000, &opts)?;
    println!("N = {n_tlm}, {} blocks diagonalized", cache.len());
    for &(nbar, peak) in &scan.points {
        println!("  nbar {nbar:>5.1}: max S4 {peak:>7.3}  fit {:>7.3}", scan.predict(nbar));
    }
    let (c0, c1, c2) = scan.fit;
    println!("fit c0 {c0:.4} c1 {c1:.4} c2 {c2:.6}, residual rms {:.4}", scan.residual_rms);
    Ok(())
}
