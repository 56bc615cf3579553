//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Two criteria fail and are expected to: the regular triangle of thickness 2 lies
//! outside the diameter window (criterion 6), and so the full `check` run exits 1
//! (criterion 10). The process exits non-zero on any other failure, or if those two
//! fail for a different reason.

use std::process::{Command, ExitCode};

use hyperreduced::io::CheckReport;
use hyperreduced::suite::{run_criteria, SuiteConfig, CRITERION_TITLES};

const KNOWN_INSTANCE: &str = "regular n=3 w=2:";

fn failure_names(rep: &CheckReport) -> Vec<String> {
    rep.failures().map(|c| c.name.clone()).collect()
}

// criterion 6 may fail only on the diameter window, and only for the known instance
fn known_envelope_failure(rep: &CheckReport) -> bool {
    let fails: Vec<_> = rep.failures().collect();
    fails.len() == 1
        && fails[0].name == "diameter_window"
        && fails[0].detail.starts_with("1 of ")
        && fails[0].detail.contains(KNOWN_INSTANCE)
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut reports = run_criteria(&cfg);

    let out = Command::new(env!("CARGO_BIN_EXE_hyperreduced"))
        .args(["check", "--w", "1", "--n", "7", "--seed", "1", "--cases", "100"])
        .output()
        .expect("run hyperreduced check");
    let code = out.status.code().unwrap_or(-1);
    let cli: CheckReport = serde_json::from_slice(&out.stdout).expect("check prints a report");
    let cli_failures = failure_names(&cli);
    reports[9].outcome(
        "check_exit_code",
        code == 0,
        code as f64,
        0.0,
        format!("hyperreduced check exited {code}; failing entries {cli_failures:?}"),
    );
    let cli_known = code == 1 && cli_failures == ["criterion_6/diameter_window"];

    let mut unexpected = 0;
    for (k, rep) in reports.iter().enumerate() {
        let id = k + 1;
        let status = if rep.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {:<28} {status}", CRITERION_TITLES[k]);
        for c in rep.failures() {
            println!("    {}: residual {:e}, tolerance {:e}; {}", c.name, c.residual, c.tolerance, c.detail);
        }
        let expected = match id {
            6 => rep.pass || known_envelope_failure(rep),
            10 => rep.pass || (failure_names(rep) == ["check_exit_code"] && cli_known),
            _ => rep.pass,
        };
        if !expected {
            unexpected += 1;
        }
    }
    if reports[5].pass {
        println!("note: criterion 6 passed; the diameter-window failure is no longer reproduced");
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    } else {
        println!("all failures match the documented diameter-window counterexample");
        ExitCode::SUCCESS
    }
}
