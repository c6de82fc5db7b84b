//! Flag parsing. A JSON config file may supply any field; flags override it.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use super::{run, Command, Format, RunConfig};
use crate::dist::{DistKind, DistSpec};
use crate::error::{Error, Result};
use crate::spectral::Mode;

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    match s {
        "emission" | "emit" | "up" => Ok(Mode::Emission),
        "absorption" | "absorb" | "down" => Ok(Mode::Absorption),
        _ => Err(format!("unknown mode `{s}` (expected emission or absorption)")),
    }
}

/// Exact emission and absorption dynamics of N two-level molecules in one field mode.
#[derive(Debug, Parser)]
#[command(name = "tcsim", version)]
pub struct Args {
    /// What to compute; may instead come from --config.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON run configuration; flags given alongside override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of two-level molecules N.
    #[arg(long, short = 'N')]
    pub n_tlm: Option<u32>,
    /// Photon distribution family, e.g. coherent, thermal, squeezed-vacuum.
    #[arg(long, value_parser = |s: &str| s.parse::<DistKind>())]
    pub kind: Option<DistKind>,
    /// Displacement amplitude |beta| of the field state (coherent mean = beta^2).
    #[arg(long, allow_negative_numbers = true)]
    pub dist_beta: Option<f64>,
    /// Mean thermal photon number.
    #[arg(long)]
    pub n_thermal: Option<f64>,
    /// Squeeze magnitude r.
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeeze phase psi in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub psi: Option<f64>,
    /// Number-state label l.
    #[arg(long)]
    pub fock_l: Option<u32>,
    /// Detuning in units of the coupling.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Observable for `spectrum` and `oracle`: emission or absorption.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// End of the gamma*t grid.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of grid points, including both ends.
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// Largest probability mass left beyond the truncation.
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Data file; the manifest and plot are written alongside it.
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write an SVG chart.
    #[arg(long)]
    pub plot: bool,
    /// Worker threads; 0 uses every available core.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Drop spectrum terms with smaller |amplitude|.
    #[arg(long)]
    pub amp_floor: Option<f64>,
    /// Comma-separated coherent means for `scan`.
    #[arg(long, value_delimiter = ',')]
    pub nbars: Option<Vec<f64>>,
}

impl Args {
    /// Merges the optional config file with the flags.
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let mut value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| Error::param("config", e.to_string()))?;
                // a command flag may complete a file that leaves it out
                if let (Some(c), Some(obj)) = (self.command, value.as_object_mut()) {
                    obj.insert("command".into(), serde_json::to_value(c)?);
                }
                serde_json::from_value(value).map_err(|e| Error::param("config", e.to_string()))?
            }
            None => RunConfig::new(
                self.command
                    .ok_or_else(|| Error::param("command", "missing (give it as an argument or in --config)"))?,
            ),
        };

        if let Some(kind) = self.kind {
            if kind != cfg.dist.kind {
                cfg.dist = DistSpec::new(kind);
            }
        }
        let d = &mut cfg.dist;
        set(&mut d.beta, self.dist_beta);
        set(&mut d.n_thermal, self.n_thermal);
        set(&mut d.r, self.r);
        set(&mut d.psi, self.psi);
        set(&mut d.fock_l, self.fock_l);
        set(&mut cfg.n_tlm, self.n_tlm);
        set(&mut cfg.beta, self.beta);
        set(&mut cfg.mode, self.mode);
        set(&mut cfg.t_max, self.t_max);
        set(&mut cfg.t_steps, self.t_steps);
        set(&mut cfg.tail_tol, self.tail_tol);
        set(&mut cfg.out, self.out);
        set(&mut cfg.format, self.format);
        set(&mut cfg.threads, self.threads);
        set(&mut cfg.nbars, self.nbars);
        if self.amp_floor.is_some() {
            cfg.amp_floor = self.amp_floor;
        }
        cfg.plot |= self.plot;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match args.into_config().and_then(|cfg| run(&cfg)) {
        Ok(report) => {
            for path in &report.manifest.outputs {
                println!("{}", path.display());
            }
            println!("{}", report.manifest_path.display());
            0
        }
        Err(e) => {
            eprintln!("tcsim: {e}");
            e.exit_code()
        }
    }
}
