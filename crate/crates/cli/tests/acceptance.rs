//! Acceptance suite: one line per criterion, with runtime against its budget.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use syz_cli::config::{Precision, RunConfig};
use syz_cli::{run, Check, Scenario};

const SEED: u64 = 20_240_601;

struct Criterion {
    id: u8,
    title: &'static str,
    scenario: Scenario,
    /// Check name and the tolerance it must carry.
    checks: &'static [(&'static str, f64)],
    budget_s: Option<f64>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "psi quadrature vs Monte-Carlo, monotone in r, psi >= r^2/2",
        scenario: Scenario::Psi,
        checks: &[("psi-vs-mc", 1.0), ("psi-increasing-in-r", 0.0), ("psi-lower-bound", 0.0)],
        budget_s: Some(60.0),
    },
    Criterion {
        id: 2,
        title: "disk areas: beta_k = psi(0, r_k), subsets agree, delta_k = s",
        scenario: Scenario::Areas,
        checks: &[("beta-area-equals-psi", 1e-6), ("beta-subset-areas-agree", 1e-6), ("delta-area-equals-s", 1e-8)],
        budget_s: Some(120.0),
    },
    Criterion {
        id: 3,
        title: "class algebra: solver round trip, monodromy, transport",
        scenario: Scenario::Walls,
        checks: &[("class-solver-round-trip", 0.0), ("monodromy-loop", 0.0), ("transport-preserves-intersections", 0.0)],
        budget_s: Some(1.0),
    },
    Criterion {
        id: 4,
        title: "superpotential gluing on wall overlaps",
        scenario: Scenario::Walls,
        checks: &[("superpotential-gluing", 0.0)],
        budget_s: Some(5.0),
    },
    Criterion {
        id: 5,
        title: "commutative diagram F g = j pi_0^dual",
        scenario: Scenario::Diagram,
        checks: &[("diagram-commutes", 1e-7)],
        budget_s: Some(60.0),
    },
    Criterion {
        id: 6,
        title: "divisor images and matching-sphere images",
        scenario: Scenario::ObservationA,
        checks: &[
            ("divisor-image-D1", 1e-6),
            ("sphere-image-1", 0.0),
            ("divisor-image-D2", 1e-6),
            ("sphere-image-2", 0.0),
        ],
        budget_s: Some(60.0),
    },
    Criterion {
        id: 7,
        title: "singular locus is exactly the corners",
        scenario: Scenario::Singular,
        checks: &[("singular-at-corners", 0.0), ("smooth-off-corners", 0.0)],
        budget_s: Some(30.0),
    },
    Criterion {
        id: 8,
        title: "collision: degenerate F, half-twist t0 and 3 -> 2 -> 3",
        scenario: Scenario::Collision,
        checks: &[("degenerate-f-matches", 0.0), ("twist-collision-time", 1e-6), ("twist-count-transition", 0.0)],
        budget_s: Some(120.0),
    },
    Criterion {
        id: 9,
        title: "injectivity of g and j",
        scenario: Scenario::Diagram,
        checks: &[("g-injective", 0.0), ("j-round-trip", 1e-6)],
        budget_s: None,
    },
];

fn config() -> RunConfig {
    RunConfig {
        seed: SEED,
        precision: Precision {
            quad_tol: 1e-8,
            psi_match_tol: 1e-7,
            ..Precision::default()
        },
        ..RunConfig::default()
    }
}

fn main() -> ExitCode {
    let cfg = config();
    let mut by_scenario: HashMap<&'static str, HashMap<String, Check>> = HashMap::new();
    let mut all_pass = true;

    for c in CRITERIA {
        let name = c.scenario.name();
        if !by_scenario.contains_key(name) {
            let start = Instant::now();
            let checks = match run(c.scenario, &cfg) {
                Ok(out) => out.report.checks.into_iter().map(|k| (k.name.clone(), k)).collect(),
                Err(e) => {
                    println!("scenario {name} could not start: {e:#}");
                    HashMap::new()
                }
            };
            eprintln!("[scenario {name} finished in {:.1}s]", start.elapsed().as_secs_f64());
            by_scenario.insert(name, checks);
        }
        let results = &by_scenario[name];

        let mut pass = true;
        let mut runtime = 0.0;
        let mut notes = Vec::new();
        for &(check, tol) in c.checks {
            match results.get(check) {
                Some(k) => {
                    runtime += k.runtime;
                    if k.tolerance != tol {
                        pass = false;
                        notes.push(format!("{check}: tolerance {} differs from required {tol}", k.tolerance));
                    }
                    if !k.passed() {
                        pass = false;
                        let measured = k.measured.map_or("-".into(), |m| format!("{m:e}"));
                        notes.push(format!("{check}: measured {measured} (tol {tol:e}) {}", k.detail.clone().unwrap_or_default()));
                    }
                }
                None => {
                    pass = false;
                    notes.push(format!("{check}: missing"));
                }
            }
        }
        let budget = match c.budget_s {
            Some(b) => {
                if runtime > b {
                    pass = false;
                    notes.push(format!("runtime {runtime:.2}s exceeds {b}s"));
                }
                format!("budget {b}s")
            }
            None => "no budget".into(),
        };
        all_pass &= pass;
        println!(
            "criterion {}: {} | {} | {:.2}s ({budget})",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            runtime
        );
        for note in notes {
            println!("    {note}");
        }
    }

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
