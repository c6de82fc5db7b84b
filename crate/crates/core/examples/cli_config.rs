//! Driving the command-line engine from code: a config, its JSON form, and
//! the manifest written next to the data.

use tavis_cummings::cli::{run, Command, Format, RunConfig};
use tavis_cummings::dist::{DistKind, DistSpec};

fn main() -> tavis_cummings::Result<()> {
    let dir = std::env::temp_dir().join("tcsim-example");
    std::fs::create_dir_all(&dir)?;
    let config = RunConfig {
        n_tlm: 6,
        dist: DistSpec {
            r: 0.8,
            ..DistSpec::new(DistKind::SqueezedVacuum)
        },
        t_max: 40.0,
        t_steps: 800,
        format: Format::Json,
        plot: true,
        out: dir.join("squeezed-emit.json"),
        ..RunConfig::new(Command::Emit)
    };
    println!("{}", config.to_json());
    let report = run(&config)?;
    println!("wrote {:?}", report.manifest.outputs);
    println!("manifest {}", report.manifest_path.display());
    println!(
        "n_max {:?}, tail mass {:?}, {} terms, {} worker(s), {:.3} s",
        report.manifest.n_max,
        report.manifest.tail_mass,
        report.manifest.n_terms.unwrap_or(0),
        report.manifest.workers,
        report.manifest.wall_time_s
    );
    Ok(())
}
