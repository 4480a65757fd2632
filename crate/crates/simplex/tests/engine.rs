use eqcol_simplex::{format, solve, DualSimplex, EngineOptions, LpSolver, Problem, Row, Sense, Status};
use proptest::prelude::*;

const TOL: f64 = 1e-7;

fn reference(p: &Problem) -> Result<f64, minilp::Error> {
    let mut m = minilp::Problem::new(minilp::OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..p.num_cols()).map(|c| m.add_var(p.cost[c], (p.lower[c], p.upper[c]))).collect();
    for row in &p.rows {
        let expr: Vec<_> = row.coeffs.iter().map(|&(c, a)| (vars[c], a)).collect();
        let op = match row.sense {
            Sense::Le => minilp::ComparisonOp::Le,
            Sense::Ge => minilp::ComparisonOp::Ge,
            Sense::Eq => minilp::ComparisonOp::Eq,
        };
        m.add_constraint(&expr[..], op, row.rhs);
    }
    m.solve().map(|s| s.objective())
}

fn small() -> Problem {
    // max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y in [0, 10]
    let mut p = Problem::with_columns(vec![-1.0, -1.0], vec![0.0; 2], vec![10.0; 2]);
    p.add_row(Row::new(vec![(0, 1.0), (1, 2.0)], Sense::Le, 4.0));
    p.add_row(Row::new(vec![(0, 3.0), (1, 1.0)], Sense::Le, 6.0));
    p
}

#[test]
fn solves_textbook_instance() {
    let s = solve(&small()).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective + 2.8).abs() < TOL, "{}", s.objective);
    assert!((s.values[0] - 1.6).abs() < TOL && (s.values[1] - 1.2).abs() < TOL);
}

#[test]
fn detects_infeasibility() {
    let mut p = Problem::with_columns(vec![1.0, 1.0], vec![0.0; 2], vec![1.0; 2]);
    p.add_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 3.0));
    assert_eq!(solve(&p).unwrap().status, Status::Infeasible);
}

#[test]
fn detects_unboundedness() {
    let mut p = Problem::with_columns(vec![-1.0, 0.0], vec![0.0; 2], vec![f64::INFINITY; 2]);
    p.add_row(Row::new(vec![(0, 1.0), (1, -1.0)], Sense::Le, 1.0));
    assert_eq!(solve(&p).unwrap().status, Status::Unbounded);
}

#[test]
fn handles_free_columns_and_equalities() {
    // min x - y  s.t. x + y = 2, x - y >= -4, x, y free
    let inf = f64::INFINITY;
    let mut p = Problem::with_columns(vec![1.0, -1.0], vec![-inf; 2], vec![inf; 2]);
    p.add_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 2.0));
    p.add_row(Row::new(vec![(0, 1.0), (1, -1.0)], Sense::Ge, -4.0));
    let s = solve(&p).unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective + 4.0).abs() < TOL);
    assert!(p.max_violation(&s.values) < TOL);
}

#[test]
fn deferred_rows_are_enforced_only_when_needed() {
    let mut p = small();
    p.add_row(Row::new(vec![(0, 1.0)], Sense::Le, 1.0).deferred());
    p.add_row(Row::new(vec![(1, 1.0)], Sense::Le, 100.0).deferred());
    let mut e = DualSimplex::new(&p, EngineOptions::default()).unwrap();
    assert_eq!(e.active_rows(), 2);
    let s = e.solve().unwrap();
    assert_eq!(s.status, Status::Optimal);
    assert!((s.objective + 2.5).abs() < TOL, "{}", s.objective);
    assert_eq!(e.active_rows(), 3, "only the violated pooled row should enter");
    assert!(p.max_violation(&s.values) < TOL);
}

#[test]
fn warm_start_matches_cold_solve() {
    let mut p = small();
    let mut e = DualSimplex::new(&p, EngineOptions::default()).unwrap();
    e.solve().unwrap();
    let cut = Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Le, 2.5);
    e.add_rows(std::slice::from_ref(&cut)).unwrap();
    p.add_row(cut);
    let warm = e.solve().unwrap();
    let cold = solve(&p).unwrap();
    assert!((warm.objective - cold.objective).abs() < TOL);

    e.set_bounds(1, 0.0, 0.5);
    p.upper[1] = 0.5;
    let warm = e.solve().unwrap();
    let cold = solve(&p).unwrap();
    assert!((warm.objective - cold.objective).abs() < TOL);
    assert!((warm.objective + 7.0 / 3.0).abs() < TOL, "{}", warm.objective);

    e.set_bounds(1, 0.0, 10.0);
    p.upper[1] = 10.0;
    assert!((e.solve().unwrap().objective - solve(&p).unwrap().objective).abs() < TOL);
}

#[test]
fn format_round_trips() {
    let mut p = small();
    p.names = vec!["x".into(), "y".into()];
    p.upper[1] = f64::INFINITY;
    p.add_row(Row::new(vec![(1, 0.1)], Sense::Ge, -1.0 / 3.0).deferred());
    let text = format::write_problem(&p);
    assert!(text.starts_with(format::HEADER));
    assert_eq!(format::read_problem(&text).unwrap(), p);

    let s = solve(&p).unwrap();
    assert_eq!(format::read_solution(&format::write_solution(&s)).unwrap(), s);
}

#[test]
fn format_errors_carry_line_numbers() {
    let text = "# eqcol lp v1\ncols 1\nrows 1\ncol 0 0 1 1\nrow 0 <= 1 1 3:1\nend\n";
    match format::read_problem(text) {
        Err(eqcol_simplex::LpError::Format { line, .. }) => assert_eq!(line, 5),
        other => panic!("expected format error, got {other:?}"),
    }
    assert!(format::read_problem("cols 1\ncol 0 0 1 x\nend\n").is_err());
    assert!(format::read_problem("cols 1\ncol 0 0 1 1\n").is_err());
}

fn arb_problem() -> impl Strategy<Value = Problem> {
    (2usize..7, 1usize..9).prop_flat_map(|(n, m)| {
        let cols = prop::collection::vec((-5i32..6, 1i32..5), n);
        let rows = prop::collection::vec((prop::collection::vec(-3i32..4, n), 0u8..3, -4i32..12, any::<bool>()), m);
        (cols, rows).prop_map(move |(cols, rows)| {
            let mut p = Problem::with_columns(
                cols.iter().map(|c| c.0 as f64).collect(),
                vec![0.0; n],
                cols.iter().map(|c| c.1 as f64).collect(),
            );
            for (coeffs, sense, rhs, deferred) in rows {
                let sense = [Sense::Le, Sense::Ge, Sense::Eq][sense as usize];
                let coeffs: Vec<_> = coeffs.iter().enumerate().filter(|(_, &a)| a != 0).map(|(c, &a)| (c, a as f64)).collect();
                let mut row = Row::new(coeffs, sense, rhs as f64);
                row.deferred = deferred;
                p.add_row(row);
            }
            p
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn agrees_with_reference_solver(p in arb_problem()) {
        let ours = solve(&p).unwrap();
        match reference(&p) {
            Ok(obj) => {
                prop_assert_eq!(ours.status, Status::Optimal);
                prop_assert!((ours.objective - obj).abs() < 1e-6, "ours {} reference {}", ours.objective, obj);
                prop_assert!(p.max_violation(&ours.values) < 1e-7);
            }
            Err(minilp::Error::Infeasible) => prop_assert_eq!(ours.status, Status::Infeasible),
            Err(minilp::Error::Unbounded) => prop_assert_eq!(ours.status, Status::Unbounded),
        }
    }

    #[test]
    fn incremental_rows_match_cold_solves(p in arb_problem(), split in 0usize..8) {
        let split = split.min(p.rows.len());
        let mut head = p.clone();
        let tail = head.rows.split_off(split);
        let mut e = DualSimplex::new(&head, EngineOptions { reinvert_every: 7, ..Default::default() }).unwrap();
        e.solve().unwrap();
        e.add_rows(&tail).unwrap();
        let warm = e.solve().unwrap();
        let cold = solve(&p).unwrap();
        prop_assert_eq!(warm.status, cold.status);
        if cold.status == Status::Optimal {
            prop_assert!((warm.objective - cold.objective).abs() < 1e-6);
        }
    }
}
