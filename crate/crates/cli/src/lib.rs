//! Scenario runner for the A_n SYZ checks: each scenario produces a list of
//! named checks and some CSV tables.

pub mod config;
pub mod report;
pub mod scenarios;

use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Result};

pub use config::RunConfig;
pub use report::{Check, Report, Status, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Walls,
    Psi,
    Areas,
    Diagram,
    ObservationA,
    Singular,
    Collision,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::Walls,
        Scenario::Psi,
        Scenario::Areas,
        Scenario::Diagram,
        Scenario::ObservationA,
        Scenario::Singular,
        Scenario::Collision,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Walls => "walls",
            Scenario::Psi => "psi",
            Scenario::Areas => "areas",
            Scenario::Diagram => "diagram",
            Scenario::ObservationA => "observation-a",
            Scenario::Singular => "singular",
            Scenario::Collision => "collision",
        }
    }
}

impl FromStr for Scenario {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match Scenario::ALL.iter().find(|sc| sc.name() == s) {
            Some(&sc) => Ok(sc),
            None => bail!(
                "unknown scenario {s:?}; expected one of {}",
                Scenario::ALL.map(Scenario::name).join(", ")
            ),
        }
    }
}

pub struct Outputs {
    pub report: Report,
    pub tables: Vec<Table>,
}

impl Outputs {
    pub fn write(&self, dir: &Path) -> Result<()> {
        self.report.write(dir)?;
        for t in &self.tables {
            t.write(dir)?;
        }
        Ok(())
    }
}

/// Runs the scenario named in `cfg`.
pub fn run_scenario(cfg: &RunConfig) -> Result<Outputs> {
    let name = match &cfg.scenario {
        Some(s) => s.as_str(),
        None => bail!("no scenario given"),
    };
    run(name.parse()?, cfg)
}

pub fn run(scenario: Scenario, cfg: &RunConfig) -> Result<Outputs> {
    cfg.validate()?;
    let p = cfg.params.build()?;
    let (checks, tables) = match scenario {
        Scenario::Walls => scenarios::walls::run(cfg, &p),
        Scenario::Psi => scenarios::psi::run(cfg, &p),
        Scenario::Areas => scenarios::areas::run(cfg, &p),
        Scenario::Diagram => scenarios::diagram::run(cfg, &p),
        Scenario::ObservationA => scenarios::observation_a::run(cfg, &p),
        Scenario::Singular => scenarios::singular::run(cfg, &p),
        Scenario::Collision => scenarios::collision::run(cfg, &p),
    };
    Ok(Outputs {
        report: Report::new(scenario.name(), cfg.seed, checks),
        tables,
    })
}
