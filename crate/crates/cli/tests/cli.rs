use std::process::{Command, Output};

use recip_core::engine::VerificationReport;

fn recip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recip")).args(args).env("RECIP_THREADS", "1").output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn equal_primes_are_rejected_naming_the_field() {
    let o = recip(&["verify", "reciprocity", "--p", "2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("`q`") && err.contains("EqualPrimes"), "{err}");
}

#[test]
fn spectral_point_outside_half_plane_is_rejected() {
    let o = recip(&["verify", "sieve", "--s", "1.2+0.1i"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`s`"), "{}", stderr(&o));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "suites = [\"gamma\"]\n[gamma]\nrel_toll = 1e-3\n").unwrap();
    let o = recip(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rel_toll"), "{}", stderr(&o));
}

#[test]
fn tabulate_tau_gives_one_row_per_n() {
    let o = recip(&["tabulate", "tau", "--nmax", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,tau,lambda");
    assert_eq!(lines.len(), 101);
    assert_eq!(lines[1], "1,1,1.0000000000000000e0");
    assert!(lines[2].starts_with("2,-24,"));
    assert!(lines[100].starts_with("100,37534859200,"));
}

#[test]
fn compute_commands_print_both_sides() {
    let o = recip(&["compute", "mellin", "--function", "gauss13", "--u", "1+2i"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("closed form") && text.contains("quadrature"));
    let gap: f64 = text.lines().last().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(gap < 1e-8);

    let o = recip(&["compute", "kloosterman", "--m", "1", "--n", "1", "--c", "5"]);
    // 2 + 2 cos(4 pi/5) = (3 - sqrt 5)/2
    assert!(stdout(&o).starts_with("S(1,1;5) = 3.8196601125010"), "{}", stdout(&o));
    let o = recip(&["compute", "phi-cap", "--s", "1.5", "--x", "2"]);
    assert!(o.status.success() && stdout(&o).starts_with("Phi(2) = "));
}

#[test]
fn config_schedules_three_suites_and_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let json = dir.path().join("out.json");
    std::fs::write(&cfg, "suites = [\"kloo-lemmas\", \"hecke\", \"gamma\"]\n\n[kloo-lemmas]\ncmax = 40\n").unwrap();
    let o = recip(&["verify", "--config", cfg.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), stderr(&o));
    let text = std::fs::read_to_string(&json).unwrap();
    let reports: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
    let ids: Vec<&str> = reports.iter().map(|r| r.identity.as_str()).collect();
    assert_eq!(
        ids,
        [
            "kloo-lemma-clause-1",
            "kloo-lemma-clause-2",
            "kloo-lemma-clause-3",
            "hecke-relation",
            "hecke-prime-power",
            "deligne-bound",
            "gamma-reflection",
            "gamma-recurrence"
        ]
    );
    assert!(reports.iter().all(|r| r.pass && r.is_consistent()));
    // re-serialising the parsed reports reproduces the file exactly
    assert_eq!(serde_json::to_string_pretty(&reports).unwrap() + "\n", text);
    let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
    for (r, v) in reports.iter().zip(raw.as_array().unwrap()) {
        assert_eq!(v["rel_gap"].as_f64().unwrap().to_bits(), r.rel_gap.to_bits());
        assert!(v["lhs"]["re"].is_number() && v["lhs"]["im"].is_number());
    }
}

#[test]
fn failing_tolerance_exits_one() {
    // no tolerance is met by a zero threshold once rounding is present
    let o = recip(&["verify", "gamma", "--rel-tol", "0"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn sabotage_flips_reciprocity_to_fail() {
    let args = ["verify", "reciprocity", "--p", "3", "--q", "2", "--cmax", "300", "--mn-cap", "200000", "--dual-mn-cap", "2000000"];
    let honest = recip(&args);
    assert_eq!(honest.status.code(), Some(0), "{}", stdout(&honest));
    let mut sabotaged = args.to_vec();
    sabotaged.push("--sabotage");
    let o = recip(&sabotaged);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn default_matrix_passes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("all.json");
    let o = recip(&["verify", "all", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let reports: Vec<VerificationReport> = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(reports.len() >= 14, "{}", reports.len());
    assert!(reports.iter().all(|r| r.pass && r.is_consistent()));
    // primitives come before the composite identities
    let first_composite = reports.iter().position(|r| r.identity == "sieve").unwrap();
    assert!(reports[..first_composite].iter().all(|r| !["ng-s", "reciprocity"].contains(&r.identity.as_str())));
    assert_eq!(reports.last().unwrap().identity, "reciprocity");
}
