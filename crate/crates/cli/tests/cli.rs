use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_eqcol");

fn eqcol(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solves_fixtures() {
    for (name, chi) in [("k33", 2), ("c5", 3), ("fig1", 5), ("fig2", 3)] {
        let o = eqcol(&["solve", &format!("fixture:{name}")]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with(&format!("chi_eq {chi}\n")), "{name}: {}", stdout(&o));
    }
}

#[test]
fn solve_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (json, coloring, cuts) = (dir.path().join("r.json"), dir.path().join("c.txt"), dir.path().join("cuts.txt"));
    let o = eqcol(&[
        "solve",
        "random:9,50,4",
        "--strategy",
        "S7",
        "--json",
        json.to_str().unwrap(),
        "--coloring",
        coloring.to_str().unwrap(),
        "--cuts",
        cuts.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["status"], "optimal");
    let chi = report["chi_eq"].as_u64().unwrap() as usize;
    let colors: Vec<usize> =
        std::fs::read_to_string(&coloring).unwrap().lines().map(|l| l.split(' ').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(colors.len(), 9);
    assert_eq!(colors.iter().max(), Some(&chi));
    assert!(cuts.exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.col");
    std::fs::write(&bad, "p edge 3 2\ne 1 2\ne 1 4\n").unwrap();
    let o = eqcol(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(eqcol(&["solve", "random:8,120,1"]).status.code(), Some(3));
    assert_eq!(eqcol(&["solve", "fixture:petersen"]).status.code(), Some(3));
    assert_eq!(eqcol(&["solve", "random:8,50"]).status.code(), Some(3));

    let o = eqcol(&["solve", "random:40,50,9", "--strategy", "none", "--rounds", "0", "--node-limit", "1"]);
    assert_eq!(o.status.code(), Some(4), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("time limit"));
}

#[test]
fn gen_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.col");
    let o = eqcol(&["gen", "--n", "8", "--density", "40", "--seed", "3", "-o", file.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("c random graph n=8"));
    let g = eqcol_core::io::parse_dimacs(&text).unwrap();
    assert_eq!(g, eqcol_core::io::random_graph(8, 40.0, 3).unwrap());
    let expected = eqcol_core::coloring::oracle(&g).chi_eq;
    let o = eqcol(&["solve", file.to_str().unwrap()]);
    assert!(stdout(&o).starts_with(&format!("chi_eq {expected}\n")));
}

#[test]
fn cutloop_prints_a_monotone_trajectory() {
    let o = eqcol(&["cutloop", "random:20,50,2", "--rounds", "5", "--strategy", "S7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lbs: Vec<f64> = out
        .lines()
        .skip_while(|l| !l.starts_with("round"))
        .skip(1)
        .take(6)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(lbs.len(), 6);
    assert!(lbs.windows(2).all(|w| w[1] >= w[0]));
    assert!(out.contains("impr "));
}

#[test]
fn verify_classifies_rows() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.txt");
    std::fs::write(
        &rows,
        "# two valid rows\n\
         block n=5 u=2 j=3 :: +1 x2_3 +1 x2_4 +1 x2_5 -1 w3 <= 0\n\
         clique n=5 j=1 Q=1,2 :: +1 x1_1 +1 x2_1 -1 w1 <= 0\n",
    )
    .unwrap();
    let o = eqcol(&["verify", "fixture:c5", "--cuts", rows.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("dimension: Full path, dim 21, rank 22"));
    assert!(out.contains("\tvalid-face\t20/21"));
    assert!(out.contains("\tfacet-verified\t21/21"));

    let o = eqcol(&["verify", "fixture:c5", "--no-dimension", "--cut", "clique n=5 j=1 Q=1,2 :: +1 x1_1 +1 x2_1 -1 w1 <= -1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\tinvalid\t"));

    std::fs::write(&rows, "block n=5 u=2 j=3 :: +1 x2_3\n").unwrap();
    let o = eqcol(&["verify", "fixture:c5", "--cuts", rows.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, json) = (dir.path().join("b.csv"), dir.path().join("b.json"));
    let o = eqcol(&[
        "bench",
        "--n",
        "10",
        "--densities",
        "30,70",
        "--seeds",
        "1..2",
        "--strategies",
        "S1,S4",
        "--rounds",
        "5",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,n,density,strategy,impr,time,cuts,solved,nodes,total_time,error");
    // 2 densities × 2 seeds × 2 strategies, then 4 averages.
    assert_eq!(lines.len(), 1 + 8 + 4);
    assert_eq!(lines.iter().filter(|l| l.starts_with("avg,")).count(), 4);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
}

#[test]
fn bench_with_empty_battery_prints_the_header() {
    let o = eqcol(&["bench", "--n", "0", "--strategies", "S1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "instance,n,density,strategy,impr,time,cuts,solved,nodes,total_time,error\n");
}

#[test]
fn external_engine_matches_embedded() {
    for spec in ["fixture:fig1", "random:9,40,11", "random:10,60,5"] {
        let embedded = eqcol(&["solve", spec]);
        let external = eqcol(&["solve", spec, "--engine", BIN, "--lp-arg", "lp-solve"]);
        assert!(external.status.success(), "{}", String::from_utf8_lossy(&external.stderr));
        assert_eq!(stdout(&embedded).lines().next(), stdout(&external).lines().next(), "{spec}");
    }
    let o = eqcol(&["solve", "fixture:fig1", "--engine", "/nonexistent/solver"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot run"));
}
