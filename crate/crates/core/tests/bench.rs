use eqcol_core::bench::*;
use eqcol_core::separation::Strategy;

fn config(strategies: &[usize]) -> BenchConfig {
    BenchConfig {
        strategies: strategies.iter().map(|&i| Strategy::standard(i).unwrap()).collect(),
        rounds: 5,
        ..Default::default()
    }
}

#[test]
fn empty_battery_writes_only_the_header() {
    let rows = run_benchmark(&[], &config(&[1, 4]));
    assert!(rows.is_empty());
    let mut out = Vec::new();
    write_csv(&rows, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), CSV_HEADER.join(",") + "\n");
}

#[test]
fn one_row_per_instance_and_strategy() {
    let instances = random_battery(12, &[50.0], 1..=2).unwrap();
    let rows = run_benchmark(&instances, &config(&[1, 4]));
    assert_eq!(rows.len(), 4);
    let order: Vec<(&str, &str)> = rows.iter().map(|r| (r.instance.as_str(), r.strategy.as_str())).collect();
    assert_eq!(order, [("r12_d50_s1", "S1"), ("r12_d50_s1", "S4"), ("r12_d50_s2", "S1"), ("r12_d50_s2", "S4")]);
    assert!(rows.iter().all(|r| r.error.is_none() && r.impr >= 0));

    let mut out = Vec::new();
    write_csv(&rows, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // Header, four rows and one average per strategy.
    assert_eq!(lines.len(), 1 + 4 + 2);
    assert!(lines[5].starts_with("avg,12,50.0,S1,"));
    assert!(lines.iter().all(|l| l.split(',').count() == CSV_HEADER.len()));
}

#[test]
fn averages_are_means_per_density_and_strategy() {
    let mk = |density, strategy: &str, impr| BenchRow {
        instance: "x".into(),
        n: 5,
        density: Some(density),
        strategy: strategy.into(),
        impr,
        time: 1.0,
        cuts: 2,
        solved: impr > 0,
        nodes: 0,
        total_time: 1.0,
        error: None,
    };
    let rows = vec![mk(30.0, "S1", 1), mk(30.0, "S1", 2), mk(50.0, "S1", 4)];
    let avg = averages(&rows);
    assert_eq!(avg.len(), 2);
    assert_eq!((avg[0].impr, avg[0].count, avg[0].solved), (1.5, 2, 1.0));
    assert_eq!(avg[1].impr, 4.0);
}

#[test]
fn json_mirror_round_trips() {
    let instances = random_battery(10, &[30.0], [7]).unwrap();
    let rows = run_benchmark(&instances, &config(&[2]));
    let v: serde_json::Value = serde_json::from_str(&to_json(&rows).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["averages"][0]["strategy"], "S2");
}

#[test]
fn solve_mode_reports_nodes_and_solutions() {
    let instances = random_battery(8, &[50.0], 1..=3).unwrap();
    let cfg = BenchConfig { solve: true, ..config(&[4]) };
    for r in run_benchmark(&instances, &cfg) {
        assert!(r.solved, "{r:?}");
    }
}
