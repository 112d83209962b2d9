//! Grid enumeration and evaluation.

use rayon::prelude::*;

use psbar_core::amplitude::IntegrationSpec;
use psbar_core::qmc::derive_seed;
use psbar_core::states::{eps_hplus_from_affinity, Kinematics, PsLevel, ScreeningConfig};
use psbar_core::xsec::{sdcs, sdcs_resolved, tcs_detailed, CrossSectionRecord};
use psbar_core::Error;

use crate::config::{Mode, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    BelowThreshold,
    LowAccuracy,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::BelowThreshold => "below_threshold",
            Status::LowAccuracy => "low_accuracy",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(Status::Ok),
            "below_threshold" => Some(Status::BelowThreshold),
            "low_accuracy" => Some(Status::LowAccuracy),
            _ => None,
        }
    }
}

/// One output row. `value` and `std_err` are absent below threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub state: PsLevel,
    /// Magnetic substate of an m-resolved row.
    pub m: Option<i32>,
    pub e_i_ev: f64,
    pub mu: f64,
    pub theta_deg: Option<f64>,
    pub value: Option<f64>,
    pub std_err: Option<f64>,
    pub status: Status,
}

impl Record {
    /// `1s`, or `2p:m=-1` for an m-resolved row.
    pub fn state_label(&self) -> String {
        match self.m {
            None => self.state.label().to_string(),
            Some(m) => format!("{}:m={m}", self.state.label()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    /// Position in the (state, E, μ, θ) ordering; selects the point's seed.
    pub index: u64,
    pub state: PsLevel,
    pub e_i_ev: f64,
    pub mu: f64,
    pub theta_deg: Option<f64>,
}

impl std::fmt::Display for GridPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "state {} E_i {} eV mu {}", self.state, self.e_i_ev, self.mu)?;
        if let Some(t) = self.theta_deg {
            write!(f, " theta {t} deg")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{point}: {error}")]
    Point { point: GridPoint, error: Error },
}

pub fn grid_points(cfg: &RunConfig) -> Vec<GridPoint> {
    let angles: Vec<Option<f64>> = match cfg.mode {
        Mode::Sdcs => cfg.angles_deg.iter().map(|&a| Some(a)).collect(),
        Mode::Tcs => vec![None],
    };
    let mut points = Vec::new();
    for &state in &cfg.states {
        for &e_i_ev in &cfg.energies_ev {
            for &mu in &cfg.mu {
                for &theta_deg in &angles {
                    let index = points.len() as u64;
                    points.push(GridPoint { index, state, e_i_ev, mu, theta_deg });
                }
            }
        }
    }
    points
}

/// Evaluates the whole grid. Rows come back in grid order whatever the
/// thread count, and each point's seed depends only on its index.
pub fn run(cfg: &RunConfig) -> Result<Vec<Record>, RunError> {
    let points = grid_points(cfg);
    let rows: Vec<Result<Vec<Record>, RunError>> = points
        .par_iter()
        .map(|p| evaluate(cfg, p).map_err(|error| RunError::Point { point: *p, error }))
        .collect();
    let mut out = Vec::with_capacity(points.len());
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

fn evaluate(cfg: &RunConfig, p: &GridPoint) -> Result<Vec<Record>, Error> {
    let screen = ScreeningConfig::new(p.mu)?;
    let spec = IntegrationSpec {
        replicates: cfg.replicates,
        target_rel_err: cfg.target_rel_err,
        ..IntegrationSpec::quasi(cfg.samples, derive_seed(cfg.seed, p.index))
    };
    let eps_hplus = cfg.affinity_ev.map(eps_hplus_from_affinity);
    let below = || Record {
        state: p.state,
        m: None,
        e_i_ev: p.e_i_ev,
        mu: p.mu,
        theta_deg: p.theta_deg,
        value: None,
        std_err: None,
        status: Status::BelowThreshold,
    };
    let result = match p.theta_deg {
        Some(theta) => Kinematics::new(p.e_i_ev, p.state, theta.to_radians(), eps_hplus).and_then(|kin| {
            if cfg.m_resolved && p.state == PsLevel::P2 {
                let resolved = sdcs_resolved(&kin, p.state, &screen, &spec)?;
                let mut rows = vec![sdcs(&kin, p.state, &screen, &spec)?];
                rows.extend(resolved);
                Ok(rows)
            } else {
                Ok(vec![sdcs(&kin, p.state, &screen, &spec)?])
            }
        }),
        None => tcs_detailed(p.e_i_ev, p.state, &screen, &spec, cfg.n_theta, eps_hplus).map(|t| vec![t.record]),
    };
    match result {
        Ok(rows) => Ok(rows.iter().map(|r| to_record(r, p, cfg.target_rel_err)).collect()),
        Err(Error::BelowThreshold { .. }) => Ok(vec![below()]),
        Err(e) => Err(e),
    }
}

fn to_record(r: &CrossSectionRecord, p: &GridPoint, target: f64) -> Record {
    let status = if r.std_err <= target * r.value { Status::Ok } else { Status::LowAccuracy };
    Record {
        state: r.level,
        m: r.m,
        e_i_ev: p.e_i_ev,
        mu: p.mu,
        theta_deg: p.theta_deg,
        value: Some(r.value),
        std_err: Some(r.std_err),
        status,
    }
}
