//! Stimulated emission from N excited molecules into a coherent field.

use tavis_cummings::dist::{make_distribution, DistSpec, TailPolicy};
use tavis_cummings::dynamics::{emission_spectrum, evaluate, intensity, uniform_times};

fn main() -> tavis_cummings::Result<()> {
    let d = make_distribution(&DistSpec::coherent(20.0), &TailPolicy::default())?;
    let nbar: f64 = d.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let times = uniform_times(50.0, 2000);
    for (n_tlm, detuning) in [(1, 0.0), (10, 0.0), (10, 2.0)] {
        let spectrum = emission_spectrum(&d, n_tlm, detuning)?;
        let s1 = evaluate(&spectrum, &times)?;
        let field = intensity(&s1, nbar)?;
        let mean = s1.values.iter().sum::<f64>() / s1.values.len() as f64;
        println!(
            "N = {n_tlm:>2}, detuning {detuning}: {} terms, max S1 {:.3}, mean S1 {mean:.3}, peak intensity {:.3}",
            spectrum.terms.len(),
            s1.max(),
            field.max()
        );
    }
    Ok(())
}
