//! Spectral series against brute-force evolution in the joint field-molecule space.

use tavis_cummings::dist::{make_distribution, DistKind, DistSpec, TailPolicy};
use tavis_cummings::dynamics::{absorption_spectrum, emission_spectrum, evaluate, intensity, uniform_times};
use tavis_cummings::reference::{build_joint, evolve_photon_number, Tlm};

fn main() -> tavis_cummings::Result<()> {
    let times = uniform_times(30.0, 300);
    for (spec, n_tlm, detuning) in [
        (DistSpec::coherent(4.0), 3, 0.0),
        (DistSpec::thermal(2.0), 5, 1.0),
        (DistSpec::default_for(DistKind::SqueezedCoherent), 4, -0.5),
    ] {
        let d = make_distribution(&spec, &TailPolicy::with_tol(1e-10))?;
        let nbar: f64 = d.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        let sys = build_joint(n_tlm, d.n_max() as u64 + u64::from(n_tlm), detuning)?;
        for (tlm, spectrum) in [
            (Tlm::Up, emission_spectrum(&d, n_tlm, detuning)?),
            (Tlm::Down, absorption_spectrum(&d, n_tlm, detuning)?),
        ] {
            let ours = intensity(&evaluate(&spectrum, &times)?, nbar)?;
            let dense = evolve_photon_number(&sys, &d, tlm, &times)?;
            let diff = ours.values.iter().zip(&dense.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            println!("{:<45} N = {n_tlm} {tlm:?}: joint dim {}, max |diff| {diff:.1e}", spec.label(), sys.dim());
        }
    }
    Ok(())
}
