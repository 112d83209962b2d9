//! Run configuration from `key = value` files and command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use psbar_core::amplitude::MIN_REPLICATES;
use psbar_core::states::PsLevel;
use psbar_core::xsec::MIN_THETA_ORDER;

use crate::grid::parse_values;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sdcs,
    Tcs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub states: Vec<PsLevel>,
    pub energies_ev: Vec<f64>,
    pub mu: Vec<f64>,
    pub angles_deg: Vec<f64>,
    /// Points per amplitude, over all replicates.
    pub samples: u64,
    pub seed: u64,
    pub replicates: usize,
    /// Gauss–Legendre order of the TCS angular rule.
    pub n_theta: usize,
    /// Rows above this relative error are marked `low_accuracy`.
    pub target_rel_err: f64,
    /// H̄⁺ positron affinity override (eV).
    pub affinity_ev: Option<f64>,
    pub m_resolved: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub gnuplot: bool,
    pub threads: Option<usize>,
}

/// Where a bad setting came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File { path: PathBuf, line: usize },
    CommandLine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub origin: Source,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.origin {
            Source::File { path, line } => write!(f, "{}:{line}: field '{}': {}", path.display(), self.field, self.message),
            Source::CommandLine => write!(f, "--{}: {}", self.field.replace('_', "-"), self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        RunConfig {
            mode,
            states: Vec::new(),
            energies_ev: Vec::new(),
            mu: vec![0.0],
            angles_deg: parse_values("0:180:19").expect("default angle grid"),
            samples: 1_000_000,
            seed: 1,
            replicates: 16,
            n_theta: 16,
            target_rel_err: 0.1,
            affinity_ev: None,
            m_resolved: false,
            format: Format::Csv,
            out: None,
            gnuplot: false,
            threads: None,
        }
    }

    /// Applies one setting. Keys use underscores; dashes are accepted too.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "state" | "states" => {
                self.states = value
                    .split(',')
                    .map(|s| s.parse::<PsLevel>().map_err(|e| e.to_string()))
                    .collect::<Result<_, _>>()?;
            }
            "energy_ev" | "energies_ev" => {
                let v = parse_values(value)?;
                if let Some(e) = v.iter().find(|&&e| e <= 0.0) {
                    return Err(format!("energy {e} eV must be positive"));
                }
                self.energies_ev = v;
            }
            "mu" | "mus" => {
                let v = parse_values(value)?;
                if let Some(m) = v.iter().find(|&&m| m < 0.0) {
                    return Err(format!("screening parameter {m} must be non-negative"));
                }
                self.mu = v;
            }
            "angles" | "angles_deg" => {
                let v = parse_values(value)?;
                if let Some(a) = v.iter().find(|&&a| !(0.0..=180.0).contains(&a)) {
                    return Err(format!("angle {a} outside [0, 180] degrees"));
                }
                self.angles_deg = v;
            }
            "samples" => self.samples = parse_int(value)?,
            "seed" => self.seed = parse_int(value)?,
            "replicates" => {
                self.replicates = parse_int(value)?;
                if self.replicates < MIN_REPLICATES {
                    return Err(format!("need at least {MIN_REPLICATES} replicates"));
                }
            }
            "n_theta" => {
                self.n_theta = parse_int(value)?;
                if self.n_theta < MIN_THETA_ORDER {
                    return Err(format!("need at least {MIN_THETA_ORDER} angular nodes"));
                }
            }
            "target_rel_err" => {
                let t: f64 = value.parse().map_err(|_| format!("'{value}' is not a number"))?;
                if !(t > 0.0 && t < 1.0) {
                    return Err(format!("{t} not in (0, 1)"));
                }
                self.target_rel_err = t;
            }
            "affinity_ev" | "eps_hplus_ev" | "eps_hplus_override" => {
                let a: f64 = value.parse().map_err(|_| format!("'{value}' is not a number"))?;
                if !a.is_finite() {
                    return Err("affinity must be finite".into());
                }
                self.affinity_ev = Some(a);
            }
            "m_resolved" => self.m_resolved = parse_bool(value)?,
            "format" => self.format = value.parse()?,
            "out" | "output" => self.out = Some(PathBuf::from(value)),
            "gnuplot" => self.gnuplot = parse_bool(value)?,
            "threads" => {
                let n: usize = parse_int(value)?;
                if n == 0 {
                    return Err("thread count must be positive".into());
                }
                self.threads = Some(n);
            }
            other => return Err(format!("unknown setting '{other}'")),
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = Source::File { path: path.to_path_buf(), line: i + 1 };
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError { origin, field: line.to_string(), message: "expected key = value".into() });
            };
            self.set(key, value)
                .map_err(|message| ConfigError { origin, field: key.trim().to_string(), message })?;
        }
        Ok(())
    }

    /// Applies a command-line setting.
    pub fn apply_flag(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.set(key, value)
            .map_err(|message| ConfigError { origin: Source::CommandLine, field: key.to_string(), message })
    }

    /// Checks the settings that have no default.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let missing = |field: &str| ConfigError {
            origin: Source::CommandLine,
            field: field.to_string(),
            message: "required (flag or config file)".into(),
        };
        if self.states.is_empty() {
            return Err(missing("state"));
        }
        if self.energies_ev.is_empty() {
            return Err(missing("energy_ev"));
        }
        if self.mu.is_empty() {
            return Err(missing("mu"));
        }
        if self.mode == Mode::Sdcs && self.angles_deg.is_empty() {
            return Err(missing("angles"));
        }
        Ok(())
    }
}

fn parse_int<T: FromStr>(s: &str) -> Result<T, String> {
    s.replace('_', "").parse().map_err(|_| format!("'{s}' is not a non-negative integer"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("'{s}' is not a boolean")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_settings_and_diagnostics() {
        let mut c = RunConfig::new(Mode::Tcs);
        let text = "# sweep\nstate = 1s, 2p\nenergy_ev = 8:50:22  # eV\n\nmu = 0,0.05,0.1\nsamples = 200_000\n";
        c.apply_file(Path::new("run.cfg"), text).unwrap();
        assert_eq!(c.states, vec![PsLevel::S1, PsLevel::P2]);
        assert_eq!(c.energies_ev.len(), 22);
        assert_eq!(c.mu, vec![0.0, 0.05, 0.1]);
        assert_eq!(c.samples, 200_000);

        let err = c.apply_file(Path::new("run.cfg"), "state = 1s\nmu = -0.1\n").unwrap_err();
        assert_eq!(err.origin, Source::File { path: "run.cfg".into(), line: 2 });
        assert_eq!(err.field, "mu");
        assert!(err.to_string().starts_with("run.cfg:2: field 'mu'"));

        let err = c.apply_file(Path::new("x.cfg"), "\n\nbogus = 1\n").unwrap_err();
        assert_eq!(err.origin, Source::File { path: "x.cfg".into(), line: 3 });
        let err = c.apply_file(Path::new("x.cfg"), "state 1s\n").unwrap_err();
        assert!(err.message.contains("key = value"));
    }

    #[test]
    fn flags_override_and_validate() {
        let mut c = RunConfig::new(Mode::Sdcs);
        assert!(c.validate().is_err());
        c.apply_flag("state", "3s").unwrap();
        c.apply_flag("energy-ev", "1").unwrap();
        c.validate().unwrap();
        assert_eq!(c.angles_deg.len(), 19);
        assert!(c.apply_flag("replicates", "4").is_err());
        assert!(c.apply_flag("n-theta", "2").is_err());
        assert!(c.apply_flag("state", "4f").is_err());
        assert!(c.apply_flag("angles", "0:200:3").is_err());
        assert!(c.apply_flag("target-rel-err", "1.5").is_err());
        let err = c.apply_flag("threads", "0").unwrap_err();
        assert!(err.to_string().starts_with("--threads"));
    }
}
