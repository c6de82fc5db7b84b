//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --release --test acceptance`.

use std::path::Path;
use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};
use tavis_cummings::cli::{run, Command, RunConfig};
use tavis_cummings::dist::{
    closed_form_moments, empirical_moments, gaussian_fock_oracle, guard_band, make_distribution, DistKind,
    DistSpec, PhotonDistribution, TailPolicy,
};
use tavis_cummings::dynamics::{
    absorption_spectrum, capacity_scan, emission_spectrum, envelope_regularity, evaluate, intensity,
    running_amplitude, s1_single_tlm_closed, uniform_times, ScanOptions, TimeSeries,
};
use tavis_cummings::reference::{build_joint, evolve_photon_number, Tlm};
use tavis_cummings::spectral::{absorption_block, diagonalize, emission_block, MultiplicityTable, SpectralCache};

type Outcome = Result<String, String>;

fn dist(spec: DistSpec) -> PhotonDistribution {
    make_distribution(&spec, &TailPolicy::default()).expect("distribution")
}

fn truncated_mean(d: &PhotonDistribution) -> f64 {
    d.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn within(pass: bool, detail: String) -> Outcome {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn single_molecule_closed_form() -> Outcome {
    let times = uniform_times(50.0, 2000);
    let mut specs: Vec<DistSpec> = [1.0, 5.0, 10.0].into_iter().map(DistSpec::coherent).collect();
    specs.extend(DistKind::ALL.iter().filter(|&&k| k != DistKind::Coherent).map(|&k| DistSpec::default_for(k)));
    let mut worst = 0.0f64;
    for spec in &specs {
        let d = dist(*spec);
        let spectral = evaluate(&emission_spectrum(&d, 1, 0.0).unwrap(), &times).unwrap();
        let direct = s1_single_tlm_closed(&d, &times).unwrap();
        worst = worst.max(max_diff(&spectral.values, &direct.values));
    }
    within(worst < 1e-10, format!("{} fields, max |diff| = {worst:.2e} (< 1e-10)", specs.len()))
}

fn dense_oracle() -> Outcome {
    let times = uniform_times(30.0, 200);
    let d = dist(DistSpec::coherent(4.0));
    let nbar = truncated_mean(&d);
    let mut worst = 0.0f64;
    for n_tlm in 1..=3u32 {
        for beta in [0.0, 1.0] {
            let sys = build_joint(n_tlm, d.n_max() as u64 + u64::from(n_tlm), beta).unwrap();
            for (tlm, spectrum) in [
                (Tlm::Up, emission_spectrum(&d, n_tlm, beta).unwrap()),
                (Tlm::Down, absorption_spectrum(&d, n_tlm, beta).unwrap()),
            ] {
                let ours = intensity(&evaluate(&spectrum, &times).unwrap(), nbar).unwrap();
                let dense = evolve_photon_number(&sys, &d, tlm, &times).unwrap();
                worst = worst.max(max_diff(&ours.values, &dense.values));
            }
        }
    }
    within(worst < 1e-8, format!("12 runs, max |diff| = {worst:.2e} (< 1e-8)"))
}

fn collapse_and_revival() -> Outcome {
    let d = dist(DistSpec::coherent(25.0));
    let times = uniform_times(40.0, 4001);
    let s1 = evaluate(&emission_spectrum(&d, 1, 0.0).unwrap(), &times).unwrap();
    let env = running_amplitude(&times, &s1.values, 0.5, 2.0).unwrap();
    let at = |t: f64| times.iter().position(|&s| s >= t - 1e-12).unwrap();
    let collapsed = env[at(8.0)];
    let t_rev = 2.0 * std::f64::consts::PI * 5.0;
    let revival = env[at(0.9 * t_rev)..=at(1.1 * t_rev)].iter().copied().fold(0.0, f64::max);
    within(
        collapsed < 0.1 && revival > 0.25,
        format!("amplitude {collapsed:.2e} at γt=8 (< 0.1), {revival:.3} in revival window (> 0.25)"),
    )
}

fn absorption_capacity() -> Outcome {
    let d = dist(DistSpec::coherent(100.0));
    let times = uniform_times(200.0, 4000);
    let s4 = evaluate(&absorption_spectrum(&d, 100, 0.0).unwrap(), &times).unwrap();
    let max = s4.max();
    let mean = s4.values.iter().sum::<f64>() / s4.values.len() as f64;
    within(
        (50.0..=70.0).contains(&max),
        format!("max S4 = {max:.2} (want [50, 70]); time-averaged S4 = {mean:.2}"),
    )
}

fn quadratic_fit() -> Outcome {
    let cache = SpectralCache::new();
    let opts = ScanOptions {
        cache: Some(&cache),
        ..ScanOptions::default()
    };
    let nbars = [20.0, 40.0, 60.0, 80.0, 100.0, 120.0];
    let scan = capacity_scan(100, &nbars, 200.0, 4000, &opts).unwrap();
    let (_, c1, c2) = scan.fit;
    let rms_limit = 0.02 * scan.mean_max_s4();
    let small_c2 = c2.abs() * 120.0 < 0.1 * c1.abs();
    let maxima: Vec<String> = scan.points.iter().map(|(_, m)| format!("{m:.2}")).collect();
    within(
        scan.residual_rms < rms_limit && small_c2,
        format!(
            "maxima [{}], rms {:.3} (want < {rms_limit:.3}), |c2|·120 = {:.3} (want < {:.3})",
            maxima.join(", "),
            scan.residual_rms,
            c2.abs() * 120.0,
            0.1 * c1.abs()
        ),
    )
}

fn rise_and_fall() -> Outcome {
    let d = dist(DistSpec::thermal(1.0));
    let times = uniform_times(400.0, 8001);
    let s4 = evaluate(&absorption_spectrum(&d, 50, 0.0).unwrap(), &times).unwrap();
    let s1 = evaluate(&emission_spectrum(&d, 50, 0.0).unwrap(), &times).unwrap();
    let cv4 = envelope_regularity(&s4, 2.0, 0.25).unwrap().spacing_cv;
    let cv1 = envelope_regularity(&s1, 2.0, 0.25).unwrap().spacing_cv;
    within(
        cv4 < 0.25 && cv1 >= 2.0 * cv4,
        format!("CV(S4) = {cv4:.3} (< 0.25), CV(S1) = {cv1:.3} (≥ 2·CV(S4))"),
    )
}

fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn distribution_suite() -> Outcome {
    let mut problems = Vec::new();
    let mut worst_moment = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let corner = |kind| {
        let mut s = DistSpec::default_for(kind);
        if s.beta != 0.0 {
            s.beta = 6.0;
        }
        if s.n_thermal != 0.0 {
            s.n_thermal = 5.0;
        }
        if s.r != 0.0 {
            s.r = 1.2;
        }
        if s.psi != 0.0 {
            s.psi = -2.0;
        }
        if s.fock_l != 0 {
            s.fock_l = 7;
        }
        s
    };
    for kind in DistKind::ALL {
        for spec in [DistSpec::default_for(kind), corner(kind)] {
            let d = dist(spec);
            let (m, v) = empirical_moments(&d);
            let (mc, vc) = closed_form_moments(&spec);
            let err = rel(m, mc).max(rel(v, vc));
            worst_moment = worst_moment.max(err);
            if err >= 1e-6 {
                problems.push(format!("moments of {}", spec.label()));
            }
            let dim = d.n_max() + 1 + guard_band(&spec, d.n_max());
            let oracle = gaussian_fock_oracle(&spec, dim).unwrap();
            let diff = max_diff(&d.probs, &oracle);
            worst_oracle = worst_oracle.max(diff);
            if diff >= 1e-8 {
                problems.push(format!("oracle for {}", spec.label()));
            }
        }
    }
    for r in [0.4, 1.3] {
        let sv = dist(DistSpec { r, ..DistSpec::new(DistKind::SqueezedVacuum) });
        let sf = dist(DistSpec { r, fock_l: 3, ..DistSpec::new(DistKind::SqueezedFock) });
        let odd_sv = sv.probs.iter().skip(1).step_by(2).any(|&p| p != 0.0);
        let wrong_sf = sf.probs.iter().enumerate().any(|(n, &p)| n % 2 == 0 && p != 0.0);
        if odd_sv || wrong_sf {
            problems.push(format!("parity at r = {r}"));
        }
    }
    let same = |a: DistSpec, b: DistSpec| {
        let (da, db) = (dist(a), dist(b));
        da.probs.len() == db.probs.len() && max_diff(&da.probs, &db.probs) < 1e-12
    };
    let limits = [
        (DistSpec { fock_l: 3, ..DistSpec::new(DistKind::SqueezedFock) }, DistSpec::fock(3)),
        (DistSpec { beta: 2.0, psi: 0.5, ..DistSpec::new(DistKind::SqueezedCoherent) }, DistSpec::coherent(4.0)),
        (DistSpec { n_thermal: 1.5, ..DistSpec::new(DistKind::SqueezedThermal) }, DistSpec::thermal(1.5)),
        (DistSpec { fock_l: 4, ..DistSpec::new(DistKind::DisplacedFock) }, DistSpec::fock(4)),
        (DistSpec { beta: 2.0, ..DistSpec::new(DistKind::MixedCoherentThermal) }, DistSpec::coherent(4.0)),
        (
            DistSpec { r: 0.6, ..DistSpec::new(DistKind::SqueezedThermal) },
            DistSpec { r: 0.6, ..DistSpec::new(DistKind::SqueezedVacuum) },
        ),
        (
            DistSpec { r: 0.6, n_thermal: 1.0, ..DistSpec::new(DistKind::DisplacedSqueezedThermal) },
            DistSpec { r: 0.6, n_thermal: 1.0, ..DistSpec::new(DistKind::SqueezedThermal) },
        ),
    ];
    for (a, b) in limits {
        if !same(a, b) {
            problems.push(format!("limit {} → {}", a.label(), b.label()));
        }
    }
    let detail = format!("moment rel err ≤ {worst_moment:.1e}, oracle |diff| ≤ {worst_oracle:.1e}, parity and limits checked");
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; failures: {}", problems.join("; ")))
    }
}

fn cli_outputs(dir: &Path, threads: usize) -> Vec<Vec<u8>> {
    [Command::Emit, Command::Absorb, Command::Spectrum]
        .into_iter()
        .map(|command| {
            let c = RunConfig {
                n_tlm: 8,
                dist: DistSpec::thermal(3.0),
                beta: 0.25,
                t_steps: 1000,
                threads,
                out: dir.join(format!("{command:?}-{threads}.csv")),
                ..RunConfig::new(command)
            };
            run(&c).unwrap();
            std::fs::read(&c.out).unwrap()
        })
        .collect()
}

fn invariant_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7c5);
    let mut problems = Vec::new();
    for _ in 0..500 {
        let n_tlm = rng.gen_range(1..=50);
        let n = rng.gen_range(0..=200);
        let beta = rng.gen_range(-10.0..10.0);
        let block = if rng.gen() {
            emission_block(n_tlm, n, beta).unwrap()
        } else {
            absorption_block(n_tlm, n, beta).unwrap()
        };
        let eig = diagonalize(&block).unwrap();
        let dim = block.dim() as f64;
        let scale = block.diag.iter().chain(&block.offdiag).fold(1.0f64, |m, v| m.max(v.abs()));
        let trace: f64 = block.diag.iter().sum();
        let sum: f64 = eig.q.iter().sum();
        if eig.orthonormality_residual() >= 1e-12 * dim
            || eig.completeness_residual() >= 1e-12 * dim
            || (trace - sum).abs() >= 1e-12 * scale * dim
        {
            problems.push(format!("block N={n_tlm} n={n} β={beta:.3}"));
        }
    }
    for n_tlm in 1..=20u32 {
        let count = MultiplicityTable::new(n_tlm).unwrap().state_count();
        if count != num_rational::BigRational::from_integer(num_bigint::BigInt::from(1u64 << n_tlm)) {
            problems.push(format!("multiplicity sum for N={n_tlm}"));
        }
    }
    for _ in 0..40 {
        let n_tlm = rng.gen_range(1..=20u32);
        let nbar = rng.gen_range(0.0..25.0);
        let spec = if rng.gen() { DistSpec::coherent(nbar) } else { DistSpec::thermal(nbar) };
        let d = dist(spec);
        let beta = rng.gen_range(-3.0..3.0);
        let times = uniform_times(rng.gen_range(1.0..60.0), 200);
        let s1: TimeSeries = evaluate(&emission_spectrum(&d, n_tlm, beta).unwrap(), &times).unwrap();
        let s4 = evaluate(&absorption_spectrum(&d, n_tlm, beta).unwrap(), &times).unwrap();
        let n = f64::from(n_tlm);
        let cap = n.min(d.n_max() as f64);
        let ok = s1.values[0] == 0.0
            && s4.values[0] == 0.0
            && s1.values.iter().all(|&v| (-1e-9..=n + 1e-9).contains(&v))
            && s4.values.iter().all(|&v| (-1e-9..=cap + 1e-9).contains(&v));
        if !ok {
            problems.push(format!("bounds N={n_tlm} {}", spec.label()));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let one = cli_outputs(dir.path(), 1);
    if one != cli_outputs(dir.path(), 4) || one != cli_outputs(dir.path(), 0) {
        problems.push("CLI outputs differ across worker counts".into());
    }
    let detail = "500 blocks, multiplicity N ≤ 20, 40 randomized runs, CLI threads 1/4/auto".to_string();
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; failures: {}", problems.join("; ")))
    }
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 8] = [
        ("1 single-molecule closed form", 5.0, single_molecule_closed_form),
        ("2 dense-Hamiltonian oracle", 30.0, dense_oracle),
        ("3 collapse and revival", f64::INFINITY, collapse_and_revival),
        ("4 absorption capacity", 120.0, absorption_capacity),
        ("5 quadratic fit of peak absorption", f64::INFINITY, quadratic_fit),
        ("6 rise-and-fall regularity", 60.0, rise_and_fall),
        ("7 distribution suite", 60.0, distribution_suite),
        ("8 invariant suite", 60.0, invariant_suite),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(d) if secs < budget => (true, d),
            Ok(d) => (false, format!("{d}; took {secs:.1} s, budget {budget} s")),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!("{} criterion {name}: {detail} [{secs:.2} s]", if pass { "PASS" } else { "FAIL" });
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
