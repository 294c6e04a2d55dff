use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fundnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fundnet"))
        .args(args)
        .env_remove("FUNDNET_OUT_DIR")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn generate(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut args = vec!["generate", "--funds", "500", "--assets", "200", "--seed", "7", "-q", "--out", p(&out)];
    args.extend_from_slice(extra);
    let o = fundnet(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

fn read(path: PathBuf) -> String {
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn data_rows(text: &str) -> usize {
    text.lines().count() - 1
}

#[test]
fn generate_then_metrics() {
    let t = tempfile::tempdir().unwrap();
    let m1 = generate(t.path(), "m1", &[]);
    assert!(m1.join("2024-01").join("holdings.csv").is_file());
    let manifest: serde_json::Value = serde_json::from_str(&read(m1.join("manifest.json"))).unwrap();
    assert_eq!(manifest["config"]["seed"], 7);
    let out = t.path().join("metrics");
    let o = fundnet(&["metrics", p(&m1), "-q", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(data_rows(&read(out.join("centrality.csv"))), 500);
    assert_eq!(data_rows(&read(out.join("centrality_bipartite.csv"))), 700);
    assert!(read(out.join("centrality.csv")).starts_with("node_id,degree_in,degree_out,closeness,betweenness,eigenvector\n"));
    let hist = read(out.join("histogram.csv"));
    let total: usize = hist.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 500);
    let summary: serde_json::Value = serde_json::from_str(&read(out.join("summary.json"))).unwrap();
    assert_eq!(summary["cross_holdings"]["mean_degree"], 4.34);
    assert!(summary["assortativity"]["administrator"].is_number());
    assert!(!out.join("stability.csv").exists());
}

#[test]
fn invalid_flags_exit_2() {
    let t = tempfile::tempdir().unwrap();
    let o = fundnet(&["generate", "--funds", "0", "--out", p(&t.path().join("x"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--funds"), "{}", stderr(&o));
    let o = fundnet(&["generate", "--funds", "3", "--cross-degree", "4.34", "--out", p(&t.path().join("y"))]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn refuses_to_overwrite_without_force() {
    let t = tempfile::tempdir().unwrap();
    let m1 = generate(t.path(), "m1", &[]);
    let before = read(m1.join("2024-01").join("funds.csv"));
    let o = fundnet(&["generate", "--funds", "500", "--assets", "200", "--seed", "7", "--out", p(&m1)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("--force"));
    generate(t.path(), "m1", &["--force"]);
    assert_eq!(read(m1.join("2024-01").join("funds.csv")), before);
}

#[test]
fn identical_series_is_fully_stable() {
    let t = tempfile::tempdir().unwrap();
    let m1 = generate(t.path(), "m1", &[]);
    let m2 = generate(t.path(), "m2", &[]);
    let out = t.path().join("stab");
    let o = fundnet(&["metrics", "--series", p(&m1), p(&m2), "-q", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = read(out.join("stability.csv"));
    assert_eq!(text, "period_a,period_b,node_jaccard,edge_jaccard\n2024-01,2024-01,1,1\n");
}

#[test]
fn churned_series_stability() {
    let t = tempfile::tempdir().unwrap();
    let m = generate(t.path(), "m", &["--periods", "4", "--churn", "0.1"]);
    let out = t.path().join("stab");
    let o = fundnet(&["metrics", "--series", p(&m), "-q", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = read(out.join("stability.csv"));
    assert_eq!(data_rows(&text), 3);
    for line in text.lines().skip(1) {
        let edge: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((edge - 0.9 / 1.1).abs() < 0.01, "{line}");
    }
}

fn write_fixture(dir: &Path, overfull: bool) {
    fs::create_dir_all(dir).unwrap();
    let funds = ["A0", "A1", "A2", "B0", "B1", "B2"];
    let mut f = String::from("fund_id,class,administrator,open_ended\n");
    for id in funds {
        f.push_str(&format!("{id},fi,adm{},1\n", &id[..1]));
    }
    fs::write(dir.join("funds.csv"), f).unwrap();
    fs::write(dir.join("assets.csv"), "asset_id,class,price\nX,equity,1\n").unwrap();
    let edges = [
        ("A0", "A1"), ("A1", "A2"), ("A2", "A0"), ("A0", "A2"),
        ("B0", "B1"), ("B1", "B2"), ("B2", "B0"), ("B0", "B2"),
        ("A0", "B0"), ("B0", "A0"),
    ];
    let mut c = String::from("investor_fund_id,investee_fund_id,fraction\n");
    for (i, j) in edges {
        c.push_str(&format!("{i},{j},0.1\n"));
    }
    if overfull {
        c.push_str("B1,A1,0.95\n");
    }
    fs::write(dir.join("crossholdings.csv"), c).unwrap();
    let mut h = String::from("fund_id,asset_id,value\n");
    for id in funds {
        h.push_str(&format!("{id},X,10\n"));
    }
    fs::write(dir.join("holdings.csv"), h).unwrap();
}

#[test]
fn assortativity_keyed_by_label() {
    let t = tempfile::tempdir().unwrap();
    let snap = t.path().join("fixture");
    write_fixture(&snap, false);
    let out = t.path().join("m");
    let o = fundnet(&["metrics", p(&snap), "--assortativity-by", "administrator", "-q", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_str(&read(out.join("summary.json"))).unwrap();
    let r = summary["assortativity"]["administrator"].as_f64().unwrap();
    assert!((r - 0.6).abs() < 1e-12, "{r}");
    assert!(summary["assortativity"].get("class").is_none());
}

#[test]
fn validation_failure_exits_4() {
    let t = tempfile::tempdir().unwrap();
    let snap = t.path().join("fixture");
    write_fixture(&snap, true);
    let o = fundnet(&["metrics", p(&snap), "--out", p(&t.path().join("m"))]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("fully internalized"), "{}", stderr(&o));
}

fn summary_line(text: &str) -> String {
    text.lines().nth(1).unwrap().to_string()
}

#[test]
fn simulate_outcomes() {
    let t = tempfile::tempdir().unwrap();
    let m1 = generate(t.path(), "m1", &[]);

    let calm = t.path().join("calm");
    let o = fundnet(&["simulate", p(&m1), "--eta", "0.999", "-q", "--out", p(&calm)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let row = summary_line(&read(calm.join("summary.csv")));
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!((cells[4], cells[5], cells[6]), ("0", "0", "1"));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), read(calm.join("summary.csv")));

    let melt = t.path().join("melt");
    let o = fundnet(&[
        "simulate", p(&m1), "--shock-assets", "GOV1", "--eta", "0.3", "--crit-rate", "0.7", "--omega", "0.3",
        "--beta-rate", "0.1", "-q", "--out", p(&melt),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let result: serde_json::Value = serde_json::from_str(&read(melt.join("cascade.json"))).unwrap();
    let final_failures = result["final_failures"].as_u64().unwrap() as f64;
    assert!(final_failures >= 0.95 * result["open_funds"].as_u64().unwrap() as f64, "{final_failures}");
    assert_eq!(result["termination_reason"], "converged");
    assert_eq!(result["trajectory"].as_array().unwrap().len() as u64, result["iterations"].as_u64().unwrap() + 1);

    let o = fundnet(&["simulate", p(&m1), "--shock-assets", "GOV1,NOPE", "--out", p(&t.path().join("bad"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("NOPE"));
    let o = fundnet(&["simulate", p(&m1), "--eta", "1.5", "--out", p(&t.path().join("bad2"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn sweep_matches_simulate_and_orders_grid() {
    let t = tempfile::tempdir().unwrap();
    let m1 = generate(t.path(), "m1", &[]);
    let sim = t.path().join("sim");
    let flags = ["--eta", "0.5", "--crit-rate", "0.8", "--beta-rate", "0.2", "--omega", "0.1"];
    let mut args = vec!["simulate", p(&m1), "-q", "--out", p(&sim)];
    args.extend_from_slice(&flags);
    assert_eq!(code(&fundnet(&args)), 0);
    let one = t.path().join("one");
    let mut args = vec!["sweep", p(&m1), "-q", "--out", p(&one)];
    args.extend_from_slice(&flags);
    assert_eq!(code(&fundnet(&args)), 0);
    assert_eq!(read(one.join("sweep.csv")), read(sim.join("summary.csv")));

    let grid = t.path().join("grid");
    let o = fundnet(&[
        "sweep", p(&m1), "--eta", "0.9,0.7,0.5", "--crit-rate", "0.6,0.8", "--heatmap", "eta,crit_rate,final_failures",
        "--jobs", "3", "-q", "--out", p(&grid),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = read(grid.join("sweep.csv"));
    let keys: Vec<String> = csv.lines().skip(1).map(|l| l.split(',').take(2).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(keys, ["0.9,0.6", "0.9,0.8", "0.7,0.6", "0.7,0.8", "0.5,0.6", "0.5,0.8"]);
    let heat = read(grid.join("heatmap_final_failures.csv"));
    assert_eq!(heat.lines().count(), 3);
    assert!(heat.lines().all(|l| l.split(',').count() == 4));
    let manifest: serde_json::Value = serde_json::from_str(&read(grid.join("manifest.json"))).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["grid_points"], 6);

    let serial = t.path().join("serial");
    let o = fundnet(&["sweep", p(&m1), "--eta", "0.9,0.7,0.5", "--crit-rate", "0.6,0.8", "--jobs", "1", "-q", "--out", p(&serial)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(serial.join("sweep.csv")).unwrap(), fs::read(grid.join("sweep.csv")).unwrap());

    let o = fundnet(&[
        "sweep", p(&m1), "--eta", "0.9,0.7", "--omega", "0.1,0.2", "--heatmap", "eta,crit_rate,final_failures",
        "--out", p(&t.path().join("bad")),
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn out_dir_from_environment() {
    let t = tempfile::tempdir().unwrap();
    let target = t.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_fundnet"))
        .args(["generate", "--funds", "30", "--assets", "40", "-q"])
        .env("FUNDNET_OUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(target.join("2024-01").join("funds.csv").is_file());
}
