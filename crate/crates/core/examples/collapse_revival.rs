//! Collapse and revival of single-molecule Rabi oscillations, with the
//! windowed approximation alongside.

use tavis_cummings::dist::{make_distribution, DistSpec, TailPolicy};
use tavis_cummings::dynamics::{running_amplitude, s1_single_tlm_closed, s1_windowed, uniform_times};

fn main() -> tavis_cummings::Result<()> {
    let d = make_distribution(&DistSpec::coherent(25.0), &TailPolicy::default())?;
    let times = uniform_times(60.0, 6001);
    let s1 = s1_single_tlm_closed(&d, &times)?;
    let env = running_amplitude(&times, &s1.values, 0.5, 2.0)?;
    let approx = s1_windowed(&d, &times, 2.0)?;
    let worst = s1.values.iter().zip(&approx.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("revival expected near gamma t = {:.1}", 2.0 * std::f64::consts::PI * 5.0);
    for t in (0..=60).step_by(4) {
        let k = t * 100;
        let bar = "#".repeat((env[k] * 80.0).round() as usize);
        println!("gamma t = {t:>2}  amplitude {:.3} {bar}", env[k]);
    }
    println!("2-sigma window: max deviation {worst:.3}");
    Ok(())
}
