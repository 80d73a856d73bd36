//! End-to-end harness tests: sweep execution, CSV output, resume behavior
//! and grouped summaries.

use std::fs;
use std::path::Path;

use sdanet::harness::{run_sweep, CalibrationCache};
use sdanet::*;

fn small_config(model: ModelKind, out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::desk_default(model);
    cfg.spaces = vec![SpaceFamily::Uniform, SpaceFamily::Lognormal];
    cfg.dims = vec![2];
    cfg.n = vec![40, 80];
    cfg.alpha = vec![4.0];
    cfg.target_mean_degree = 6.0;
    cfg.p_rewire = vec![0.0, 0.5];
    cfg.spaces_per_cell = Some(1);
    cfg.graphs_per_space = Some(2);
    cfg.master_seed = 11;
    cfg.output_dir = out.to_path_buf();
    cfg
}

/// CSV body with the wall-time column blanked out.
fn body_modulo_wall_time(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    let mut lines: Vec<String> = Vec::new();
    for line in text.lines() {
        let mut cells: Vec<&str> = line.split(',').collect();
        if let Some(last) = cells.last_mut() {
            *last = "";
        }
        lines.push(cells.join(","));
    }
    lines.join("\n")
}

#[test]
fn sweep_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(ModelKind::Sda, dir.path());
    cfg.spaces = vec![SpaceFamily::Uniform];
    cfg.n = vec![40];
    cfg.p_rewire = vec![0.0];
    cfg.spaces_per_cell = Some(1);
    cfg.graphs_per_space = Some(1);
    let outcome = run_sweep(&cfg, false).unwrap();
    assert_eq!(outcome.total_runs, 1);
    assert_eq!(outcome.executed, 1);
    assert_eq!(outcome.failed, 0);
    let text = fs::read_to_string(&outcome.csv_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "header plus one data row:\n{text}");
    assert!(lines[0].starts_with("run_id,model,space,"));
    assert!(lines[1].contains(",ok,"));
}

#[test]
fn sweep_is_deterministic_modulo_wall_time() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let out_a = run_sweep(&small_config(ModelKind::Sda, dir_a.path()), false).unwrap();
    let out_b = run_sweep(&small_config(ModelKind::Sda, dir_b.path()), false).unwrap();
    assert_eq!(
        body_modulo_wall_time(&out_a.csv_path),
        body_modulo_wall_time(&out_b.csv_path)
    );
}

#[test]
fn sweep_row_count_matches_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(ModelKind::Sda, dir.path());
    let grid = expand_grid(&cfg).unwrap();
    let outcome = run_sweep(&cfg, false).unwrap();
    assert_eq!(outcome.total_runs, grid.len());
    let text = fs::read_to_string(&outcome.csv_path).unwrap();
    assert_eq!(text.lines().count(), grid.len() + 1);
    // Row order matches descriptor order.
    let ids_in_csv: Vec<String> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    let ids_in_grid: Vec<String> = grid.iter().map(|d| d.run_id.clone()).collect();
    assert_eq!(ids_in_csv, ids_in_grid);
}

#[test]
fn sweep_resume_skips_completed_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(ModelKind::Sda, dir.path());
    let first = run_sweep(&cfg, false).unwrap();
    assert_eq!(first.skipped, 0);
    let before = fs::read_to_string(&first.csv_path).unwrap();

    // Resuming a finished sweep executes nothing and appends nothing.
    let second = run_sweep(&cfg, true).unwrap();
    assert_eq!(second.executed, 0);
    assert_eq!(second.skipped, first.total_runs);
    let after = fs::read_to_string(&second.csv_path).unwrap();
    assert_eq!(before, after);

    // Truncate to simulate an interrupted sweep: keep header + 3 rows.
    let kept: Vec<&str> = before.lines().take(4).collect();
    fs::write(&first.csv_path, format!("{}\n", kept.join("\n"))).unwrap();
    let third = run_sweep(&cfg, true).unwrap();
    assert_eq!(third.skipped, 3);
    assert_eq!(third.executed, first.total_runs - 3);
    let resumed = fs::read_to_string(&first.csv_path).unwrap();
    assert_eq!(resumed.lines().count(), first.total_runs + 1);
    // No duplicate run ids.
    let mut ids: Vec<&str> = resumed
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    let total = ids.len();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), total);
}

#[test]
fn sdc_sweep_runs_and_reports_families() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(ModelKind::Sdc, dir.path());
    cfg.degree_families = vec![DegreeFamily::Poisson, DegreeFamily::NegativeBinomial];
    cfg.p_rewire = vec![0.01];
    cfg.n = vec![60];
    let outcome = run_sweep(&cfg, false).unwrap();
    assert_eq!(outcome.failed, 0);
    let text = fs::read_to_string(&outcome.csv_path).unwrap();
    assert!(text.contains(",poisson,"));
    assert!(text.contains(",negative_binomial,"));
}

#[test]
fn failed_runs_preserve_row_counts() {
    // Target mean degree beyond N - 1 cannot be calibrated; every run must
    // appear as a failed row rather than aborting the sweep.
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(ModelKind::Sda, dir.path());
    cfg.n = vec![40];
    cfg.target_mean_degree = 100.0;
    let outcome = run_sweep(&cfg, false).unwrap();
    assert_eq!(outcome.failed, outcome.total_runs);
    let text = fs::read_to_string(&outcome.csv_path).unwrap();
    assert_eq!(text.lines().count(), outcome.total_runs + 1);
    for line in text.lines().skip(1) {
        assert!(line.contains(",failed,"), "row not flagged failed: {line}");
    }

    // Summaries count the failures per group and leave metric cells empty.
    let table = summarize_csv(&outcome.csv_path, &["space".to_string()], 10, 0).unwrap();
    let n_runs_idx = table.header.iter().position(|h| h == "n_runs").unwrap();
    let n_failed_idx = table.header.iter().position(|h| h == "n_failed").unwrap();
    let mean_idx = table
        .header
        .iter()
        .position(|h| h == "mean_degree_mean")
        .unwrap();
    for row in &table.rows {
        assert_eq!(row[n_runs_idx], row[n_failed_idx]);
        assert!(row[mean_idx].is_empty());
    }
}

#[test]
fn sweep_rejects_unwritable_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    // A plain file where the output directory should go.
    let blocker = dir.path().join("occupied");
    fs::write(&blocker, "not a directory").unwrap();
    let mut cfg = small_config(ModelKind::Sda, &blocker);
    cfg.n = vec![40];
    assert!(run_sweep(&cfg, false).is_err());
}

#[test]
fn config_validation_rejects_empty_lists() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(ModelKind::Sda, dir.path());
    cfg.alpha = vec![];
    assert!(cfg.validate().is_err());
    assert!(expand_grid(&cfg).is_err());
    let mut cfg = small_config(ModelKind::Sda, dir.path());
    cfg.spaces_per_cell = Some(0);
    assert!(cfg.validate().is_err());
    let mut cfg = small_config(ModelKind::Sda, dir.path());
    cfg.p_rewire = vec![1.5];
    assert!(cfg.validate().is_err());
}

#[test]
fn summarize_groups_and_bootstraps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(ModelKind::Sda, dir.path());
    let outcome = run_sweep(&cfg, false).unwrap();
    let keys = vec!["space".to_string(), "n".to_string()];
    let table = summarize_csv(&outcome.csv_path, &keys, 50, 7).unwrap();
    assert_eq!(table.header[0], "space");
    assert_eq!(table.header[1], "n");
    // 2 spaces x 2 sizes.
    assert_eq!(table.rows.len(), 4);
    let mean_idx = table
        .header
        .iter()
        .position(|h| h == "mean_degree_mean")
        .unwrap();
    let lo_idx = table
        .header
        .iter()
        .position(|h| h == "mean_degree_boot_min")
        .unwrap();
    let hi_idx = table
        .header
        .iter()
        .position(|h| h == "mean_degree_boot_max")
        .unwrap();
    for row in &table.rows {
        let mean: f64 = row[mean_idx].parse().unwrap();
        let lo: f64 = row[lo_idx].parse().unwrap();
        let hi: f64 = row[hi_idx].parse().unwrap();
        assert!(lo <= mean && mean <= hi);
    }
    // Unknown group keys are rejected.
    assert!(summarize_csv(&outcome.csv_path, &["bogus".to_string()], 10, 0).is_err());
}

#[test]
fn summarize_single_row_group_has_degenerate_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(ModelKind::Sda, dir.path());
    cfg.spaces = vec![SpaceFamily::Uniform];
    cfg.n = vec![40];
    cfg.p_rewire = vec![0.0];
    cfg.graphs_per_space = Some(1);
    let outcome = run_sweep(&cfg, false).unwrap();
    let table = summarize_csv(&outcome.csv_path, &["space".to_string()], 30, 0).unwrap();
    assert_eq!(table.rows.len(), 1);
    let mean_idx = table
        .header
        .iter()
        .position(|h| h == "clustering_mean")
        .unwrap();
    let row = &table.rows[0];
    // One value: bounds collapse onto the mean.
    assert_eq!(row[mean_idx], row[mean_idx + 1]);
    assert_eq!(row[mean_idx], row[mean_idx + 2]);
}

#[test]
fn summarize_reports_small_world_fit_per_parent_group() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(ModelKind::Sda, dir.path());
    cfg.spaces = vec![SpaceFamily::Uniform];
    cfg.n = vec![40, 80, 160, 320];
    cfg.p_rewire = vec![0.05];
    cfg.target_mean_degree = 6.0;
    cfg.graphs_per_space = Some(2);
    let outcome = run_sweep(&cfg, false).unwrap();
    let keys = vec!["space".to_string(), "n".to_string()];
    let table = summarize_csv(&outcome.csv_path, &keys, 50, 3).unwrap();
    let fit_idx = table
        .header
        .iter()
        .position(|h| h == "small_world_fit")
        .unwrap();
    // All four size rows of the (uniform) parent group share the same fit.
    let fits: Vec<&String> = table.rows.iter().map(|r| &r[fit_idx]).collect();
    assert_eq!(table.rows.len(), 4);
    assert!(!fits[0].is_empty());
    assert!(fits.iter().all(|f| *f == fits[0]));
    let fit: f64 = fits[0].parse().unwrap();
    assert!(
        fit > 0.9,
        "rewired sparse graphs should scale near ln N, fit = {fit}"
    );
}

#[test]
fn run_one_sda_hits_target_mean_degree() {
    let mut cfg = ExperimentConfig::desk_default(ModelKind::Sda);
    cfg.spaces = vec![SpaceFamily::Uniform];
    cfg.dims = vec![2];
    cfg.n = vec![1000];
    cfg.alpha = vec![8.0];
    cfg.p_rewire = vec![0.0];
    cfg.spaces_per_cell = Some(1);
    cfg.graphs_per_space = Some(1);
    let grid = expand_grid(&cfg).unwrap();
    let record = run_one(&grid[0]);
    assert!(record.is_ok(), "{:?}", record.error);
    let metrics = record.metrics.unwrap();
    assert!(
        (27.0..=33.0).contains(&metrics.mean_degree),
        "mean degree {}",
        metrics.mean_degree
    );
}

#[test]
fn run_one_matches_cached_execution() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(ModelKind::Sda, dir.path());
    let grid = expand_grid(&cfg).unwrap();
    let cache = CalibrationCache::default();
    for desc in grid.iter().take(4) {
        let plain = run_one(desc);
        let cached = sdanet::harness::run_one_with_cache(desc, Some(&cache));
        assert_eq!(plain.b, cached.b);
        assert_eq!(plain.metrics, cached.metrics);
    }
}

#[test]
fn space_export_round_trips_through_edge_list() {
    // The generate-style pipeline: space -> graph -> edge list file.
    let space = sample_space(&SpaceSpec::new(SpaceFamily::GaussianClusters, 3, 50, 5)).unwrap();
    let provider =
        build_distance_provider(space, Metric::Manhattan, ProviderMode::OnDemand).unwrap();
    let b = calibrate_b(&provider, 4.0, 6.0).unwrap();
    let probs = probability_matrix(&provider, &SdaParams::new(4.0, b).unwrap()).unwrap();
    let g = sample_graph(&probs, 17);
    let mut buf = Vec::new();
    sdanet::io::write_edge_list(
        &mut buf,
        &g,
        &sdanet::io::EdgeListMeta {
            alpha: Some(4.0),
            b: Some(b),
            seed: Some(17),
        },
    )
    .unwrap();
    let (g2, meta) = sdanet::io::read_edge_list(std::io::BufReader::new(&buf[..])).unwrap();
    assert_eq!(g, g2);
    assert_eq!(meta.b, Some(b));
}
