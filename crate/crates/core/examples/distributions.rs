//! All twelve field families: truncation, moments and the operator oracle.

use tavis_cummings::dist::{
    closed_form_moments, empirical_moments, gaussian_fock_oracle, guard_band, make_distribution, DistKind,
    DistSpec, TailPolicy,
};

fn main() -> tavis_cummings::Result<()> {
    let policy = TailPolicy::default();
    println!("{:<70} {:>6} {:>12} {:>12} {:>10}", "state", "n_max", "mean", "variance", "oracle");
    for kind in DistKind::ALL {
        let spec = DistSpec::default_for(kind);
        let d = make_distribution(&spec, &policy)?;
        let (m, v) = empirical_moments(&d);
        let (mc, vc) = closed_form_moments(&spec);
        assert!((m - mc).abs() < 1e-8 * mc.max(1.0) && (v - vc).abs() < 1e-8 * vc.max(1.0));
        let dim = d.n_max() + 1 + guard_band(&spec, d.n_max());
        let oracle = gaussian_fock_oracle(&spec, dim)?;
        let diff = d.probs.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{:<70} {:>6} {m:>12.6} {v:>12.6} {diff:>10.1e}", spec.label(), d.n_max());
    }
    Ok(())
}
