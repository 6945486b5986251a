//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use catlab::verify::{self, Check, ToleranceProfile, DEFAULT_SEED};

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
    let detail = checks
        .iter()
        .map(|c| format!("{} = {}", c.id, c.ours))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome {
        pass: failed.is_empty() && !checks.is_empty(),
        detail: if failed.is_empty() {
            detail
        } else {
            format!("failed {}; {detail}", failed.join(", "))
        },
    }
}

fn timed(limit: Duration, elapsed: Duration, mut outcome: Outcome) -> Outcome {
    outcome.detail = format!("{}; {:.2}s (limit {}s)", outcome.detail, elapsed.as_secs_f64(), limit.as_secs());
    outcome.pass &= elapsed < limit;
    outcome
}

fn report(number: u32, name: &str, outcome: Result<Outcome, String>) -> bool {
    match outcome {
        Ok(o) => {
            println!("criterion {number:>2} {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
            o.pass
        }
        Err(e) => {
            println!("criterion {number:>2} {name}: FAIL (error: {e})");
            false
        }
    }
}

fn verify_bytes(threads: &str, json: &std::path::Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let output = Command::new(env!("CARGO_BIN_EXE_catlab"))
        .args(["verify", "--suite", "paper7", "--threads", threads, "--json"])
        .arg(json)
        .env_remove("CATLAB_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !output.status.success() {
        return Err(format!("verify exited with {:?}", output.status.code()));
    }
    let report = std::fs::read(json).map_err(|e| e.to_string())?;
    Ok((output.stdout, report))
}

fn main() -> ExitCode {
    let seed = DEFAULT_SEED;
    let profile = ToleranceProfile::Default;
    let err = |e: catlab::CliError| e.to_string();
    let mut all = true;

    let start = Instant::now();
    let large = verify::large_run(seed, Some(1));
    let large_elapsed = start.elapsed();
    let large = match large {
        Ok(run) => run,
        Err(e) => {
            println!("criterion  1 hoover reproduction: FAIL (error: {e})");
            return ExitCode::FAILURE;
        }
    };
    let distance = match verify::distance_run(seed, None) {
        Ok(run) => run,
        Err(e) => {
            println!("criterion  3 wiener reproduction: FAIL (error: {e})");
            return ExitCode::FAILURE;
        }
    };

    all &= report(
        1,
        "hoover reproduction",
        verify::hoover_checks(&large, profile)
            .map(|c| timed(Duration::from_secs(30), large_elapsed, from_checks(&c[..1])))
            .map_err(err),
    );
    all &= report(2, "zagreb clt", verify::clt_checks(&large).map(|c| from_checks(&c)).map_err(err));
    all &= report(
        3,
        "wiener reproduction",
        verify::wiener_checks(&distance, profile).map(|c| from_checks(&c)).map_err(err),
    );
    all &= report(
        4,
        "hyper-wiener reproduction",
        verify::hyper_wiener_checks(&distance, profile).map(|c| from_checks(&c)).map_err(err),
    );
    all &= report(
        5,
        "randic mean",
        verify::randic_checks(&large, profile).map(|c| from_checks(&c)).map_err(err),
    );

    let start = Instant::now();
    let oracle = verify::oracle_equivalence_checks();
    let oracle_elapsed = start.elapsed();
    all &= report(
        6,
        "oracle equivalence",
        oracle
            .map(|c| timed(Duration::from_secs(10), oracle_elapsed, from_checks(&c)))
            .map_err(err),
    );
    all &= report(
        7,
        "formula and bfs cross-validation",
        verify::bfs_checks(seed).map(|c| from_checks(&c)).map_err(err),
    );
    all &= report(
        8,
        "martingale identity",
        verify::martingale_check(seed).map(|c| from_checks(&[c])).map_err(err),
    );
    all &= report(
        9,
        "super-martingale inequality",
        verify::supermartingale_check(seed).map(|c| from_checks(&[c])).map_err(err),
    );
    all &= report(
        10,
        "gini evaluator and degree gini band",
        verify::gini_limit_check()
            .and_then(|limit| Ok(vec![limit, verify::degree_gini_check(&large)?]))
            .map(|c| from_checks(&c))
            .map_err(err),
    );

    let determinism = (|| -> Result<Outcome, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let runs = [
            verify_bytes("1", &dir.path().join("a.json"))?,
            verify_bytes("4", &dir.path().join("b.json"))?,
            verify_bytes("1", &dir.path().join("c.json"))?,
        ];
        let same = runs.windows(2).all(|w| w[0] == w[1]);
        Ok(Outcome {
            pass: same,
            detail: format!(
                "3 runs, threads 1/4/1, {} table bytes, {} report bytes, identical = {same}",
                runs[0].0.len(),
                runs[0].1.len()
            ),
        })
    })();
    all &= report(11, "determinism", determinism);

    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
