//! Rise-and-fall regularity of absorption versus emission in a thermal field.

use tavis_cummings::dist::{make_distribution, DistSpec, TailPolicy};
use tavis_cummings::dynamics::{absorption_spectrum, emission_spectrum, envelope_regularity, evaluate, uniform_times};

fn main() -> tavis_cummings::Result<()> {
    let d = make_distribution(&DistSpec::thermal(1.0), &TailPolicy::default())?;
    let times = uniform_times(400.0, 8001);
    for (name, spectrum) in [
        ("absorption S4", absorption_spectrum(&d, 50, 0.0)?),
        ("emission S1", emission_spectrum(&d, 50, 0.0)?),
    ] {
        let series = evaluate(&spectrum, &times)?;
        let r = envelope_regularity(&series, 2.0, 0.25)?;
        let peaks: Vec<String> = r.peak_times.iter().map(|t| format!("{t:.1}")).collect();
        println!("{name}: spacing CV {:.3}, envelope peaks at [{}]", r.spacing_cv, peaks.join(", "));
    }
    Ok(())
}
