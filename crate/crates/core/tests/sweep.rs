mod common;

use common::{random_market, rng};
use fundnet_core::contagion::{run_cascade, ScenarioConfig};
use fundnet_core::ingest::{generate_market, GeneratorConfig};
use fundnet_core::sweep::{heatmap_export, run_sweep, SweepError, SweepSpec};
use rand::Rng;

fn base() -> ScenarioConfig {
    ScenarioConfig { shocked_assets: vec!["A0".into()], ..ScenarioConfig::default() }
}

fn spec(eta: &[f64], crit: &[f64], beta: &[f64], omega: &[f64], jobs: usize) -> SweepSpec {
    SweepSpec {
        base: base(),
        eta_values: eta.to_vec(),
        crit_values: crit.to_vec(),
        beta_values: beta.to_vec(),
        omega_values: omega.to_vec(),
        jobs,
        solver: "auto".into(),
    }
}

#[test]
fn single_point_matches_run_cascade() {
    let s = random_market(&mut rng(1), 10, 4, 0.8);
    let r = run_sweep(&s, &SweepSpec::single(base())).unwrap();
    let direct = run_cascade(&s, &base()).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.to_csv(), direct.summary_csv());
}

#[test]
fn tiny_shock_gives_zero_rows() {
    let s = random_market(&mut rng(2), 10, 4, 0.8);
    let r = run_sweep(&s, &spec(&[0.999], &[0.5, 0.7], &[0.1], &[0.0, 0.3], 2)).unwrap();
    assert!(r.rows.iter().all(|row| row.final_failures == Some(0)));
}

#[test]
fn canonical_order_and_error_rows() {
    let s = random_market(&mut rng(3), 8, 4, 0.8);
    let r = run_sweep(&s, &spec(&[0.9, 1.5, 0.5], &[0.6, 0.8], &[0.1], &[0.3], 3)).unwrap();
    let order: Vec<(f64, f64)> = r.rows.iter().map(|x| (x.eta, x.crit_rate)).collect();
    assert_eq!(order, vec![(0.9, 0.6), (0.9, 0.8), (1.5, 0.6), (1.5, 0.8), (0.5, 0.6), (0.5, 0.8)]);
    assert_eq!(r.error_count(), 2);
    assert!(r.rows[2].error.as_deref().unwrap().contains("eta"));
    let line = r.to_csv().lines().nth(3).unwrap().to_string();
    assert!(line.starts_with("1.5,0.6,0.1,0.3,,,,,"), "{line}");
}

#[test]
fn parallelism_does_not_change_output() {
    let s = generate_market(&GeneratorConfig { n_funds: 200, n_assets: 80, seed: 5, ..Default::default() }).unwrap();
    let mut sp = spec(&[0.2, 0.5, 0.8], &[0.6, 0.9], &[0.0, 0.5], &[0.0, 0.3, 0.6], 1);
    sp.base.shocked_assets.clear();
    let one = run_sweep(&s, &sp).unwrap().to_csv();
    for jobs in [2, 4, 7] {
        sp.jobs = jobs;
        assert_eq!(run_sweep(&s, &sp).unwrap().to_csv(), one);
    }
}

#[test]
fn rows_equal_independent_runs() {
    let s = random_market(&mut rng(6), 10, 5, 0.8);
    let grid: Vec<f64> = (1..10).map(|k| k as f64 / 10.0).collect();
    let r = run_sweep(&s, &spec(&grid, &grid, &grid[..3], &grid[..3], 4)).unwrap();
    let mut g = rng(7);
    for _ in 0..10 {
        let row = &r.rows[g.random_range(0..r.rows.len())];
        let cfg = ScenarioConfig { eta: row.eta, crit_rate: row.crit_rate, beta_rate: row.beta_rate, omega: row.omega, ..base() };
        let direct = run_cascade(&s, &cfg).unwrap();
        assert_eq!(row.final_failures, Some(direct.final_failures));
        assert_eq!(row.iterations, Some(direct.iterations));
        assert_eq!(row.total_value_lost, Some(direct.total_value_lost));
    }
}

#[test]
fn heatmap_rearranges_rows() {
    let s = random_market(&mut rng(8), 10, 4, 0.8);
    let r = run_sweep(&s, &spec(&[0.9, 0.7, 0.5], &[0.6, 0.8], &[0.1], &[0.3], 2)).unwrap();
    let h = heatmap_export(&r, "eta", "crit_rate", "final_failures").unwrap();
    assert_eq!(h.cells.len(), 2);
    assert_eq!(h.cells[0].len(), 3);
    for row in &r.rows {
        let c = h.x_values.iter().position(|&x| x == row.eta).unwrap();
        let k = h.y_values.iter().position(|&y| y == row.crit_rate).unwrap();
        assert_eq!(h.cells[k][c], row.final_failures.map(|v| v as f64));
    }
    let csv = h.to_csv();
    assert!(csv.starts_with("crit_rate\\eta,0.9,0.7,0.5\n0.6,"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn heatmap_errors() {
    let s = random_market(&mut rng(9), 6, 3, 0.8);
    let r = run_sweep(&s, &spec(&[0.9, 0.5], &[0.6, 0.8], &[0.1, 0.2], &[0.3], 2)).unwrap();
    assert!(matches!(heatmap_export(&r, "eta", "crit_rate", "final_failures"), Err(SweepError::AmbiguousCell { .. })));
    assert!(matches!(heatmap_export(&r, "eta", "gamma", "final_failures"), Err(SweepError::UnknownParameter(_))));
    assert!(matches!(heatmap_export(&r, "eta", "crit_rate", "wealth"), Err(SweepError::UnknownParameter(_))));
    assert!(matches!(heatmap_export(&r, "eta", "omega", "final_failures"), Err(SweepError::DegenerateAxis(_))));
}

#[test]
fn empty_axis_is_rejected() {
    let s = random_market(&mut rng(10), 4, 2, 0.8);
    assert!(matches!(run_sweep(&s, &spec(&[], &[0.5], &[0.1], &[0.3], 1)), Err(SweepError::EmptyAxis("eta"))));
}
