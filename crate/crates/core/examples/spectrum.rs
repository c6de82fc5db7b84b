//! Eigen-decomposition of one invariant block and the pair terms it feeds.

use tavis_cummings::dist::PhotonDistribution;
use tavis_cummings::dynamics::emission_spectrum;
use tavis_cummings::spectral::{diagonalize, emission_block, MultiplicityTable};

fn main() -> tavis_cummings::Result<()> {
    let block = emission_block(4, 2, 0.5)?;
    let eig = diagonalize(&block)?;
    println!("N = 4, n = 2, detuning 0.5: dim {}", block.dim());
    for (j, q) in eig.q.iter().enumerate() {
        println!("  q[{j}] = {q:+.6}  vector {:?}", eig.vector(j).iter().map(|a| format!("{a:+.4}")).collect::<Vec<_>>());
    }
    println!("  orthonormality residual {:.1e}", eig.orthonormality_residual());

    let table = MultiplicityTable::new(4)?;
    for (r, p) in &table.values {
        println!("  P(r = {}) = {p}", r.to_f64());
    }

    let s = emission_spectrum(&PhotonDistribution::number_state(2), 4, 0.5)?;
    println!("S1 terms for |2>:");
    for t in &s.terms {
        println!("  omega {:.6}  amplitude {:+.6}", t.omega, t.amplitude);
    }
    Ok(())
}
