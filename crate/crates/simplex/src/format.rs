//! Line-oriented text formats for problems and solutions.
//!
//! ```text
//! # eqcol lp v1
//! cols 2
//! rows 1
//! col 0 0 1 -1 x1
//! col 1 0 inf -1
//! row 0 <= 3 2 0:1 1:2
//! end
//! ```
//!
//! A solution is `status <s>`, `objective <v>`, one `value <col> <x>` per
//! column and `end`. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::problem::{LpError, Problem, Row, Sense, Solution, Status};

pub const HEADER: &str = "# eqcol lp v1";

fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        // `{:?}` round-trips f64 exactly.
        format!("{v:?}")
    }
}

fn err(line: usize, msg: impl Into<String>) -> LpError {
    LpError::Format { line, msg: msg.into() }
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<f64, LpError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    match tok {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => tok.parse().map_err(|_| err(line, format!("bad {what} `{tok}`"))),
    }
}

fn parse_idx(tok: Option<&str>, line: usize, what: &str) -> Result<usize, LpError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("bad {what} `{tok}`")))
}

pub fn write_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "cols {}", p.num_cols());
    let _ = writeln!(out, "rows {}", p.rows.len());
    for c in 0..p.num_cols() {
        let _ = write!(out, "col {c} {} {} {}", num(p.lower[c]), num(p.upper[c]), num(p.cost[c]));
        if let Some(name) = p.names.get(c) {
            let _ = write!(out, " {name}");
        }
        out.push('\n');
    }
    for (i, row) in p.rows.iter().enumerate() {
        let _ = write!(out, "row {i} {} {} {}", row.sense, num(row.rhs), row.coeffs.len());
        for &(c, a) in &row.coeffs {
            let _ = write!(out, " {c}:{}", num(a));
        }
        if row.deferred {
            out.push_str(" lazy");
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn read_problem(text: &str) -> Result<Problem, LpError> {
    let mut cols: Option<usize> = None;
    let mut nrows: Option<usize> = None;
    let mut p = Problem::default();
    let mut names: Vec<Option<String>> = Vec::new();
    let mut seen_cols: Vec<bool> = Vec::new();
    let mut ended = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if ended {
            return Err(err(line, "content after `end`"));
        }
        let mut toks = s.split_whitespace();
        match toks.next().unwrap() {
            "cols" => {
                let n = parse_idx(toks.next(), line, "column count")?;
                cols = Some(n);
                p.cost = vec![0.0; n];
                p.lower = vec![0.0; n];
                p.upper = vec![f64::INFINITY; n];
                names = vec![None; n];
                seen_cols = vec![false; n];
            }
            "rows" => nrows = Some(parse_idx(toks.next(), line, "row count")?),
            "col" => {
                let n = cols.ok_or_else(|| err(line, "`col` before `cols`"))?;
                let c = parse_idx(toks.next(), line, "column index")?;
                if c >= n {
                    return Err(err(line, format!("column {c} out of range")));
                }
                p.lower[c] = parse_num(toks.next(), line, "lower bound")?;
                p.upper[c] = parse_num(toks.next(), line, "upper bound")?;
                p.cost[c] = parse_num(toks.next(), line, "cost")?;
                names[c] = toks.next().map(str::to_string);
                seen_cols[c] = true;
            }
            "row" => {
                let n = cols.ok_or_else(|| err(line, "`row` before `cols`"))?;
                let i = parse_idx(toks.next(), line, "row index")?;
                if i != p.rows.len() {
                    return Err(err(line, format!("expected row {}, found {i}", p.rows.len())));
                }
                let sense = match toks.next() {
                    Some("<=") => Sense::Le,
                    Some(">=") => Sense::Ge,
                    Some("=") => Sense::Eq,
                    other => return Err(err(line, format!("bad sense {other:?}"))),
                };
                let rhs = parse_num(toks.next(), line, "right-hand side")?;
                let k = parse_idx(toks.next(), line, "term count")?;
                let mut coeffs = Vec::with_capacity(k);
                for _ in 0..k {
                    let tok = toks.next().ok_or_else(|| err(line, "missing term"))?;
                    let (c, a) = tok.split_once(':').ok_or_else(|| err(line, format!("bad term `{tok}`")))?;
                    let c: usize = c.parse().map_err(|_| err(line, format!("bad term `{tok}`")))?;
                    if c >= n {
                        return Err(err(line, format!("column {c} out of range")));
                    }
                    coeffs.push((c, parse_num(Some(a), line, "coefficient")?));
                }
                let mut row = Row::new(coeffs, sense, rhs);
                match toks.next() {
                    None => {}
                    Some("lazy") => row.deferred = true,
                    Some(t) => return Err(err(line, format!("unexpected `{t}`"))),
                }
                p.rows.push(row);
            }
            "end" => ended = true,
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    let last = text.lines().count();
    if !ended {
        return Err(err(last, "missing `end`"));
    }
    let n = cols.ok_or_else(|| err(last, "missing `cols`"))?;
    if let Some(c) = seen_cols.iter().position(|s| !s) {
        return Err(err(last, format!("column {c} never declared")));
    }
    if let Some(m) = nrows {
        if m != p.rows.len() {
            return Err(err(last, format!("declared {m} rows, found {}", p.rows.len())));
        }
    }
    if names.iter().all(Option::is_some) && n > 0 {
        p.names = names.into_iter().map(Option::unwrap).collect();
    }
    Ok(p)
}

pub fn write_solution(s: &Solution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status {}", s.status);
    let _ = writeln!(out, "objective {}", num(s.objective));
    let _ = writeln!(out, "iterations {}", s.iterations);
    for (c, v) in s.values.iter().enumerate() {
        let _ = writeln!(out, "value {c} {}", num(*v));
    }
    out.push_str("end\n");
    out
}

pub fn read_solution(text: &str) -> Result<Solution, LpError> {
    let mut status = None;
    let mut objective = None;
    let mut iterations = 0;
    let mut values = Vec::new();
    let mut ended = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut toks = s.split_whitespace();
        match toks.next().unwrap() {
            "status" => {
                status = Some(match toks.next() {
                    Some("optimal") => Status::Optimal,
                    Some("infeasible") => Status::Infeasible,
                    Some("unbounded") => Status::Unbounded,
                    Some("iteration-limit") => Status::IterationLimit,
                    other => return Err(err(line, format!("bad status {other:?}"))),
                })
            }
            "objective" => objective = Some(parse_num(toks.next(), line, "objective")?),
            "iterations" => iterations = parse_idx(toks.next(), line, "iteration count")?,
            "value" => {
                let c = parse_idx(toks.next(), line, "column index")?;
                if c != values.len() {
                    return Err(err(line, format!("expected value {}, found {c}", values.len())));
                }
                values.push(parse_num(toks.next(), line, "value")?);
            }
            "end" => ended = true,
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    let last = text.lines().count();
    if !ended {
        return Err(err(last, "missing `end`"));
    }
    Ok(Solution {
        status: status.ok_or_else(|| err(last, "missing `status`"))?,
        objective: objective.ok_or_else(|| err(last, "missing `objective`"))?,
        values,
        iterations,
    })
}
