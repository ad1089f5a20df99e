use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hetnet"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().env_remove("HETNET_SEED").args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn outage_csv_shape() {
    let cfg = config("three_tier_mixed_alpha.toml");
    let o = run(&["outage", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "tau_db,tau_linear,outage_tier1,outage_tier2,outage_tier3,outage_network"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 31);
    assert!(rows[0].starts_with("-1.00000000e1,1.00000000e-1,"));
    assert!(rows[30].starts_with("2.00000000e1,1.00000000e2,"));
    assert!(!text.contains('\r'));
    for row in rows {
        for field in row.split(',') {
            let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 9, "{field}");
        }
    }
}

#[test]
fn custom_grid_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let cfg = config("two_tier_equal_alpha.toml");
    let o = run(&[
        "outage",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--tau-min-db",
        "0",
        "--tau-max-db",
        "0",
        "--tau-steps",
        "1",
        "--quad-rel-tol",
        "1e-10",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(
        text,
        "tau_db,tau_linear,outage_tier1,outage_tier2,outage_network\n\
         0.00000000e0,1.00000000e0,4.39900846e-1,4.39900846e-1,4.39900846e-1\n"
    );
}

#[test]
fn rate_and_assoc_tables() {
    let cfg = config("two_tier_equal_alpha.toml");
    let o = run(&["rate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("metric,tier1,tier2,network\n"));
    let rate_row = text.lines().find(|l| l.starts_with("ergodic_rate_nats")).unwrap();
    let vals: Vec<&str> = rate_row.split(',').skip(1).collect();
    assert!(vals.iter().all(|v| *v == vals[0]), "{rate_row}");
    assert!(text.contains("min_throughput_tier"));

    let o = run(&["assoc", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("tier,assoc_prob,cell_load\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn bias_sweep_has_interior_maximum() {
    let cfg = config("macro_pico_sweep.toml");
    let o = run(&["rate", "--config", cfg.to_str().unwrap(), "--sweep", "bias", "--sweep-steps", "11"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("bias_db_tier2,user_throughput_nats_tier1,user_throughput_nats_tier2,user_throughput_nats_network\n"));
    let q: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    let best = q.iter().cloned().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
    assert!(best > 0 && best < q.len() - 1);
}

#[test]
fn simulate_is_deterministic_and_seed_flag_beats_env() {
    let cfg = config("macro_pico_biased.toml");
    let args = ["simulate", "--config", cfg.to_str().unwrap(), "--replications", "500", "--tau-steps", "7"];
    let a = bin().args(args).args(["--seed", "9"]).env("HETNET_SEED", "1").output().unwrap();
    let b = bin().args(args).env("HETNET_SEED", "9").output().unwrap();
    let c = bin().args(args).args(["--seed", "9", "--threads", "2"]).output().unwrap();
    let d = bin().args(args).args(["--seed", "10"]).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_ne!(a.stdout, d.stdout);
    let text = stdout(&a);
    assert!(text.starts_with(
        "tau_db,tau_linear,outage_tier1,outage_tier2,outage_network,mc_outage_network,mc_std_err\n"
    ));
    assert!(String::from_utf8(a.stderr).unwrap().contains("seed=9"));
}

#[test]
fn samples_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.csv");
    let cfg = config("single_tier.toml");
    let o = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--replications",
        "50",
        "--samples-out",
        samples.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(samples).unwrap().lines().count(), 51);
}

#[test]
fn compare_passes_on_matching_model() {
    let cfg = config("two_tier_equal_alpha.toml");
    let o = run(&["compare", "--config", cfg.to_str().unwrap(), "--replications", "50000", "--seed", "4"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.ends_with("overall: PASS\n"));
}

#[test]
fn compare_fails_on_mismatched_pair() {
    let cfg = config("two_tier_equal_alpha.toml");
    let other = config("macro_pico_biased.toml");
    let o = run(&[
        "compare",
        "--config",
        cfg.to_str().unwrap(),
        "--sim-config",
        other.to_str().unwrap(),
        "--replications",
        "5000",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL") && text.contains("at tau ="));
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    std::fs::write(&empty, "noise_dbm = -104.0\nl0_db = -38.5\n").unwrap();
    let o = run(&["assoc", "--config", empty.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("config"));

    let missing = dir.path().join("nope.toml");
    assert!(!run(&["outage", "--config", missing.to_str().unwrap()]).status.success());

    let cfg = config("single_tier.toml");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--replications", "0"]);
    assert!(!o.status.success());
    let o = run(&["outage", "--config", cfg.to_str().unwrap(), "--tau-steps", "0"]);
    assert!(!o.status.success());
    assert!(!run(&["frobnicate"]).status.success());
}
