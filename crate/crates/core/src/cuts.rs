//! Valid inequalities over the full `n`-color space.
//!
//! Every [`CutRow`] is kept in canonical form `Σ a·var ≤ rhs` with integer
//! coefficients, variables sorted (`x` before `w`, lexicographic) and right-hand
//! `w` terms already moved to the left.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use eqcol_simplex::{Row, Sense};

use crate::coloring::{for_each_partition, BinaryPoint, EqColoring, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{FracPoint, Layout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize, usize),
    W(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(v, j) => write!(f, "x{v}_{j}"),
            Var::W(j) => write!(f, "w{j}"),
        }
    }
}

impl FromStr for Var {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad variable {s:?}");
        if let Some(rest) = s.strip_prefix('x') {
            let (v, j) = rest.split_once('_').ok_or_else(bad)?;
            Ok(Var::X(v.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?))
        } else if let Some(rest) = s.strip_prefix('w') {
            Ok(Var::W(rest.parse().map_err(|_| bad())?))
        } else {
            Err(bad())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Nonneg,
    Clique,
    TwoRank,
    Rank,
    Block,
    SColor,
    Subneighborhood,
    OutsideNeighborhood,
    CliqueNeighborhood,
    Custom,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Nonneg,
        Family::Clique,
        Family::TwoRank,
        Family::Rank,
        Family::Block,
        Family::SColor,
        Family::Subneighborhood,
        Family::OutsideNeighborhood,
        Family::CliqueNeighborhood,
        Family::Custom,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Nonneg => "nonneg",
            Family::Clique => "clique",
            Family::TwoRank => "2rank",
            Family::Rank => "rank",
            Family::Block => "block",
            Family::SColor => "scolor",
            Family::Subneighborhood => "subnbhd",
            Family::OutsideNeighborhood => "outnbhd",
            Family::CliqueNeighborhood => "cliquenbhd",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL.into_iter().find(|f| f.tag() == s).ok_or_else(|| format!("unknown family {s:?}"))
    }
}

/// Parameters a row was generated from. Only the fields meaningful for the
/// family are set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Params {
    pub u: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<usize>,
    pub chi: Option<usize>,
    pub s: Vec<usize>,
    pub q: Vec<usize>,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let mut parts = Vec::new();
        for (key, val) in [("u", self.u), ("j", self.j), ("k", self.k), ("alpha", self.alpha), ("chi", self.chi)] {
            if let Some(val) = val {
                parts.push(format!("{key}={val}"));
            }
        }
        if !self.s.is_empty() {
            parts.push(format!("S={}", list(&self.s)));
        }
        if !self.q.is_empty() {
            parts.push(format!("Q={}", list(&self.q)));
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutRow {
    pub family: Family,
    pub params: Params,
    pub n: usize,
    pub terms: Vec<(Var, i64)>,
    pub rhs: i64,
}

/// Coefficients on `w_l` of `Σ_{l=from}^{n} f(l)(w_l − w_{l+1})` with
/// `w_{n+1} = 0`.
fn telescope(from: usize, n: usize, f: impl Fn(usize) -> i64) -> Vec<(Var, i64)> {
    (from..=n).map(|l| (Var::W(l), if l == from { f(l) } else { f(l) - f(l - 1) })).collect()
}

fn neg(terms: Vec<(Var, i64)>) -> impl Iterator<Item = (Var, i64)> {
    terms.into_iter().map(|(v, a)| (v, -a))
}

fn sorted_set(s: &[usize]) -> Vec<usize> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

fn check_vertices(n: usize, vs: &[usize]) -> Result<()> {
    match vs.iter().find(|&&v| v == 0 || v > n) {
        Some(&v) => Err(Error::VertexOutOfRange { vertex: v, n }),
        None => Ok(()),
    }
}

fn check_color(n: usize, j: usize, max: usize) -> Result<()> {
    if j == 0 || j > max || j > n {
        Err(Error::InvalidCut(format!("color {j} outside 1..={}", max.min(n))))
    } else {
        Ok(())
    }
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

impl CutRow {
    /// Builds a row in canonical form: duplicate variables merged, zero terms
    /// dropped, variables sorted.
    pub fn canonical(family: Family, params: Params, n: usize, terms: impl IntoIterator<Item = (Var, i64)>, rhs: i64) -> Self {
        let mut merged: BTreeMap<Var, i64> = BTreeMap::new();
        for (v, a) in terms {
            *merged.entry(v).or_default() += a;
        }
        let terms = merged.into_iter().filter(|&(_, a)| a != 0).collect();
        CutRow { family, params, n, terms, rhs }
    }

    pub fn coefficient(&self, var: Var) -> i64 {
        self.terms.iter().find(|(v, _)| *v == var).map_or(0, |&(_, a)| a)
    }

    /// `lhs − rhs` at a 0/1 point of the full space.
    pub fn slack_binary(&self, p: &BinaryPoint) -> i64 {
        let lhs: i64 = self
            .terms
            .iter()
            .map(|&(v, a)| {
                a * match v {
                    Var::X(u, j) => p.x(u, j) as i64,
                    Var::W(j) => p.w(j) as i64,
                }
            })
            .sum();
        lhs - self.rhs
    }

    /// `lhs − rhs` at the point encoding `c`; positive means violated.
    pub fn slack_coloring(&self, c: &EqColoring) -> i64 {
        let colors = c.colors();
        let k = c.k();
        let lhs: i64 = self
            .terms
            .iter()
            .map(|&(v, a)| match v {
                Var::X(u, j) if colors[u - 1] == j => a,
                Var::W(j) if j <= k => a,
                _ => 0,
            })
            .sum();
        lhs - self.rhs
    }

    /// `lhs − rhs` at a fractional point of the model; variables outside the
    /// model's color range read as zero.
    pub fn violation(&self, p: &FracPoint) -> f64 {
        self.violation_with(|v, j| p.x(v, j), |j| p.w(j))
    }

    pub fn violation_with(&self, x: impl Fn(usize, usize) -> f64, w: impl Fn(usize) -> f64) -> f64 {
        let lhs: f64 = self
            .terms
            .iter()
            .map(|&(v, a)| {
                a as f64
                    * match v {
                        Var::X(u, j) => x(u, j),
                        Var::W(j) => w(j),
                    }
            })
            .sum();
        lhs - self.rhs as f64
    }

    /// Restricts the row to the model's variables: `x_vj` with `j > ub` or
    /// `j > v` and `w_j` with `j > ub` are fixed to zero and vanish, `w_j` with
    /// `j ≤ lb` is fixed to one and moves into the right-hand side.
    pub fn project(&self, layout: &Layout) -> ProjectedRow {
        let mut coeffs = Vec::new();
        let mut rhs = self.rhs;
        for &(v, a) in &self.terms {
            match v {
                Var::X(u, j) if !layout.x_fixed_zero(u, j) => coeffs.push((layout.x_col(u, j).unwrap(), a)),
                Var::W(j) if j <= layout.ub => {
                    if layout.w_fixed_one(j) {
                        rhs -= a;
                    } else {
                        coeffs.push((layout.w_col(j).unwrap(), a));
                    }
                }
                _ => {}
            }
        }
        coeffs.sort_unstable();
        ProjectedRow { coeffs, rhs }
    }

    /// Renames vertices (`perm[old - 1] = new`) in terms and parameters.
    pub fn relabel(&self, perm: &[usize]) -> CutRow {
        let map = |v: usize| perm[v - 1];
        let mut params = self.params.clone();
        params.u = params.u.map(map);
        params.s = sorted_set(&params.s.iter().map(|&v| map(v)).collect::<Vec<_>>());
        params.q = sorted_set(&params.q.iter().map(|&v| map(v)).collect::<Vec<_>>());
        let terms = self.terms.iter().map(|&(v, a)| match v {
            Var::X(u, j) => (Var::X(map(u), j), a),
            w => (w, a),
        });
        CutRow::canonical(self.family, params, self.n, terms, self.rhs)
    }

    /// Same row with a different right-hand side (used to build invalid
    /// rows in tests).
    pub fn with_rhs(&self, rhs: i64) -> CutRow {
        CutRow { rhs, ..self.clone() }
    }

    pub fn parse(text: &str) -> Result<CutRow> {
        let err = |msg: String| Error::Parse { line: 1, msg };
        let (head, body) = text.split_once("::").ok_or_else(|| err("missing '::' separator".into()))?;
        let mut head_tokens = head.split_whitespace();
        let family: Family = head_tokens.next().ok_or_else(|| err("missing family".into()))?.parse().map_err(err)?;
        let mut n = None;
        let mut params = Params::default();
        for tok in head_tokens {
            let (key, val) = tok.split_once('=').ok_or_else(|| err(format!("bad parameter {tok:?}")))?;
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad number in {tok:?}")));
            let list = |s: &str| s.split(',').map(num).collect::<Result<Vec<_>>>();
            match key {
                "n" => n = Some(num(val)?),
                "u" => params.u = Some(num(val)?),
                "j" => params.j = Some(num(val)?),
                "k" => params.k = Some(num(val)?),
                "alpha" => params.alpha = Some(num(val)?),
                "chi" => params.chi = Some(num(val)?),
                "S" => params.s = list(val)?,
                "Q" => params.q = list(val)?,
                _ => return Err(err(format!("unknown parameter {key:?}"))),
            }
        }
        let n = n.ok_or_else(|| err("missing n=".into()))?;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let at = tokens.iter().position(|&t| t == "<=").ok_or_else(|| err("missing '<='".into()))?;
        if at % 2 != 0 || tokens.len() != at + 2 {
            return Err(err("malformed row body".into()));
        }
        let mut terms = Vec::new();
        for pair in tokens[..at].chunks(2) {
            let a: i64 = pair[0].parse().map_err(|_| err(format!("bad coefficient {:?}", pair[0])))?;
            let v: Var = pair[1].parse().map_err(err)?;
            terms.push((v, a));
        }
        let rhs: i64 = tokens[at + 1].parse().map_err(|_| err(format!("bad rhs {:?}", tokens[at + 1])))?;
        Ok(CutRow::canonical(family, params, n, terms, rhs))
    }
}

impl fmt::Display for CutRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.family, self.n)?;
        let p = self.params.to_string();
        if !p.is_empty() {
            write!(f, " {p}")?;
        }
        f.write_str(" ::")?;
        for (v, a) in &self.terms {
            write!(f, " {a:+} {v}")?;
        }
        write!(f, " <= {}", self.rhs)
    }
}

/// A row restricted to model columns. Serves as the deduplication key.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectedRow {
    pub coeffs: Vec<(usize, i64)>,
    pub rhs: i64,
}

impl ProjectedRow {
    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_lp_row(&self) -> Row {
        Row::new(self.coeffs.iter().map(|&(c, a)| (c, a as f64)).collect(), Sense::Le, self.rhs as f64)
    }

    pub fn violation(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(c, a)| a as f64 * values[c]).sum::<f64>() - self.rhs as f64
    }
}

/// `−x_vj ≤ 0`.
pub fn nonneg_row(v: usize, j: usize, n: usize) -> Result<CutRow> {
    check_vertices(n, &[v])?;
    check_color(n, j, n)?;
    let params = Params { u: Some(v), j: Some(j), ..Params::default() };
    Ok(CutRow::canonical(Family::Nonneg, params, n, [(Var::X(v, j), -1)], 0))
}

/// `(v,j)`-block: `Σ_{k=j}^{n} x_vk ≤ w_j`.
pub fn block_cut(v: usize, j: usize, n: usize) -> Result<CutRow> {
    check_vertices(n, &[v])?;
    check_color(n, j, n)?;
    let params = Params { u: Some(v), j: Some(j), ..Params::default() };
    let terms = (j..=n).map(|k| (Var::X(v, k), 1)).chain([(Var::W(j), -1)]);
    Ok(CutRow::canonical(Family::Block, params, n, terms, 0))
}

/// `(Q,j)`-clique: `Σ_{v∈Q} x_vj ≤ w_j`.
pub fn clique_cut(g: &Graph, q: &[usize], j: usize) -> Result<CutRow> {
    let n = g.n();
    let q = sorted_set(q);
    check_vertices(n, &q)?;
    check_color(n, j, n)?;
    if q.is_empty() || !g.is_clique(&q) {
        return Err(Error::InvalidCut(format!("{q:?} is not a clique")));
    }
    let terms: Vec<_> = q.iter().map(|&v| (Var::X(v, j), 1)).chain([(Var::W(j), -1)]).collect();
    let params = Params { j: Some(j), q, ..Params::default() };
    Ok(CutRow::canonical(Family::Clique, params, n, terms, 0))
}

/// `(S,j)`-rank with `α = α(S)`:
/// `Σ_{S} x_vj + Σ_{V} Σ_{k=n−α+1}^{n−1} x_vk ≤ α w_j + w_{n−α+1} − w_n`.
pub fn rank_cut(s: &[usize], j: usize, alpha: usize, n: usize) -> Result<CutRow> {
    let s = sorted_set(s);
    check_vertices(n, &s)?;
    if alpha == 0 || alpha > n || j == 0 || j + alpha > n {
        return Err(Error::InvalidCut(format!("rank row needs 1 ≤ j ≤ n − α, got j = {j}, α = {alpha}")));
    }
    let mut terms: Vec<(Var, i64)> = s.iter().map(|&v| (Var::X(v, j), 1)).collect();
    for v in 1..=n {
        terms.extend((n - alpha + 1..n).map(|k| (Var::X(v, k), 1)));
    }
    terms.extend([(Var::W(j), -(alpha as i64)), (Var::W(n - alpha + 1), -1), (Var::W(n), 1)]);
    let params = Params { j: Some(j), alpha: Some(alpha), s, ..Params::default() };
    Ok(CutRow::canonical(Family::Rank, params, n, terms, 0))
}

/// `(S,Q,j)`-2-rank: `Σ_{S∖Q} x_vj + 2 Σ_{Q} x_vj ≤ 2 w_j`.
pub fn two_rank_cut(s: &[usize], q: &[usize], j: usize, n: usize) -> Result<CutRow> {
    let (s, q) = (sorted_set(s), sorted_set(q));
    check_vertices(n, &s)?;
    check_color(n, j, n - 1)?;
    if let Some(v) = q.iter().find(|v| !s.contains(v)) {
        return Err(Error::InvalidCut(format!("Q vertex {v} not in S")));
    }
    let terms: Vec<_> = s.iter().map(|&v| (Var::X(v, j), if q.contains(&v) { 2 } else { 1 })).chain([(Var::W(j), -2)]).collect();
    let params = Params { j: Some(j), s, q, ..Params::default() };
    Ok(CutRow::canonical(Family::TwoRank, params, n, terms, 0))
}

/// `(u,j,S)`-subneighborhood with `γ_k = min{⌈n/χ⌉, ⌈n/k⌉, α}`:
/// `γ_j x_uj + Σ_S x_vj + Σ_{k>j} (γ_j − γ_k) x_uk ≤ γ_j w_j`.
///
/// With `χ = χ_eq` and `α = α(S)` this is the exact row; a lower bound on
/// `χ_eq` and an upper bound on `α(S)` give the weaker row used in separation.
pub fn subneighborhood_cut(g: &Graph, u: usize, j: usize, s: &[usize], alpha: usize, chi: usize) -> Result<CutRow> {
    let n = g.n();
    let s = sorted_set(s);
    check_vertices(n, &[u])?;
    check_vertices(n, &s)?;
    check_color(n, j, n - 1)?;
    if let Some(v) = s.iter().find(|&&v| !g.has_edge(u, v)) {
        return Err(Error::InvalidCut(format!("vertex {v} of S is not a neighbor of {u}")));
    }
    if alpha == 0 || chi == 0 {
        return Err(Error::InvalidCut("subneighborhood row needs α ≥ 1 and χ ≥ 1".into()));
    }
    let gamma = |k: usize| div_ceil(n, chi).min(div_ceil(n, k)).min(alpha) as i64;
    let gj = gamma(j);
    let mut terms = vec![(Var::X(u, j), gj), (Var::W(j), -gj)];
    terms.extend(s.iter().map(|&v| (Var::X(v, j), 1)));
    terms.extend((j + 1..=n).map(|k| (Var::X(u, k), gj - gamma(k))));
    let params = Params { u: Some(u), j: Some(j), alpha: Some(alpha), chi: Some(chi), s, ..Params::default() };
    Ok(CutRow::canonical(Family::Subneighborhood, params, n, terms, 0))
}

/// `(u,j)`-outside-neighborhood with `t = max{j, χ}` and
/// `b_k = ⌊n/t⌋ − ⌊n/k⌋`:
/// `(⌊n/t⌋ − 1) x_uj − Σ_{V∖N[u]} x_vj + Σ_{k>t} b_k x_uk ≤ Σ_{k>t} b_k (w_k − w_{k+1})`.
pub fn outside_neighborhood_cut(g: &Graph, u: usize, j: usize, chi: usize) -> Result<CutRow> {
    let n = g.n();
    check_vertices(n, &[u])?;
    if j == 0 || j > n / 2 {
        return Err(Error::InvalidCut(format!("outside-neighborhood row needs 1 ≤ j ≤ ⌊n/2⌋, got {j}")));
    }
    if chi == 0 {
        return Err(Error::InvalidCut("χ must be positive".into()));
    }
    let t = j.max(chi);
    let b = |k: usize| if k <= t { 0 } else { (n / t - n / k) as i64 };
    let mut terms = vec![(Var::X(u, j), (n / t) as i64 - 1)];
    terms.extend(g.vertices().filter(|&v| v != u && !g.has_edge(u, v)).map(|v| (Var::X(v, j), -1)));
    terms.extend((t + 1..=n).map(|k| (Var::X(u, k), b(k))));
    if t < n {
        terms.extend(neg(telescope(t + 1, n, b)));
    }
    let params = Params { u: Some(u), j: Some(j), chi: Some(chi), ..Params::default() };
    Ok(CutRow::canonical(Family::OutsideNeighborhood, params, n, terms, 0))
}

/// `(u,j,k,Q)`-clique-neighborhood; `alpha` stands for `α(N(u))` (or an
/// upper bound on it) in the coefficients `b_ul`.
pub fn clique_neighborhood_cut(g: &Graph, u: usize, j: usize, k: usize, q: &[usize], alpha: usize) -> Result<CutRow> {
    let n = g.n();
    let q = sorted_set(q);
    check_vertices(n, &[u])?;
    check_vertices(n, &q)?;
    if q.is_empty() || !g.is_clique(&q) {
        return Err(Error::InvalidCut(format!("{q:?} is not a clique")));
    }
    if q.iter().any(|&v| v == u || g.has_edge(u, v)) {
        return Err(Error::InvalidCut(format!("{q:?} meets N[{u}]")));
    }
    if k < 3 || k > alpha + 1 {
        return Err(Error::InvalidCut(format!("clique-neighborhood row needs 3 ≤ k ≤ α + 1, got k = {k}, α = {alpha}")));
    }
    if j == 0 || j + 1 > div_ceil(n, k - 1) {
        return Err(Error::InvalidCut(format!("clique-neighborhood row needs 1 ≤ j ≤ ⌈n/(k−1)⌉ − 1, got {j}")));
    }
    let ki = k as i64;
    let b = |l: usize| -> i64 {
        if l < div_ceil(n, k) {
            div_ceil(n, l).min(alpha + 1) as i64
        } else if l + 2 <= n {
            ki
        } else {
            ki + 1
        }
    };
    let mut terms = vec![(Var::X(u, j), ki - 1), (Var::X(u, n - 1), ki - 1), (Var::X(u, n), ki - 1)];
    terms.extend((div_ceil(n, k - 1)..=n.saturating_sub(2)).map(|l| (Var::X(u, l), ki - div_ceil(n, l) as i64)));
    terms.extend(g.neighbors(u).iter().chain(&q).map(|&v| (Var::X(v, j), 1)));
    for v in g.vertices().filter(|&v| v != u) {
        terms.extend([(Var::X(v, n - 1), 1), (Var::X(v, n), 1)]);
    }
    terms.extend(neg(telescope(j, n, b)));
    let params = Params { u: Some(u), j: Some(j), k: Some(k), alpha: Some(alpha), q, ..Params::default() };
    Ok(CutRow::canonical(Family::CliqueNeighborhood, params, n, terms, 0))
}

/// `b_Sk = d ⌊n/k⌋ + min{d, n − k⌊n/k⌋}` with `d = |S ∩ {1..k}|`.
pub fn s_color_bound(s: &[usize], k: usize, n: usize) -> i64 {
    let d = s.iter().filter(|&&j| j <= k).count();
    (d * (n / k) + d.min(n - k * (n / k))) as i64
}

/// `S`-color: `Σ_{j∈S} Σ_v x_vj ≤ Σ_k b_Sk (w_k − w_{k+1})`.
pub fn s_color_cut(s: &[usize], n: usize) -> Result<CutRow> {
    let s = sorted_set(s);
    if s.is_empty() {
        return Err(Error::InvalidCut("S-color row needs a non-empty color set".into()));
    }
    if let Some(&j) = s.iter().find(|&&j| j == 0 || j > n) {
        return Err(Error::InvalidCut(format!("color {j} outside 1..={n}")));
    }
    let mut terms: Vec<(Var, i64)> = Vec::new();
    for &j in &s {
        terms.extend((1..=n).map(|v| (Var::X(v, j), 1)));
    }
    terms.extend(neg(telescope(1, n, |k| s_color_bound(&s, k, n))));
    let params = Params { s, ..Params::default() };
    Ok(CutRow::canonical(Family::SColor, params, n, terms, 0))
}

/// The value of a row over the labelings of one unordered partition:
/// `slack(π) = Σ_i cost[i][π(i)] + constant`, where `π` assigns class `i` to
/// color `π(i) + 1`. The `w` part only depends on the number of classes.
#[derive(Clone, Debug)]
pub struct LabelingCosts {
    pub cost: Vec<Vec<i64>>,
    pub constant: i64,
}

impl LabelingCosts {
    pub fn new(row: &CutRow, c: &EqColoring) -> Self {
        let k = c.k();
        let mut xc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        let mut constant = -row.rhs;
        for &(v, a) in &row.terms {
            match v {
                Var::X(u, j) => {
                    xc.insert((u, j), a);
                }
                Var::W(j) if j <= k => constant += a,
                Var::W(_) => {}
            }
        }
        let cost = c
            .classes()
            .iter()
            .map(|class| (1..=k).map(|j| class.iter().map(|&v| xc.get(&(v, j)).copied().unwrap_or(0)).sum()).collect())
            .collect();
        LabelingCosts { cost, constant }
    }

    pub fn k(&self) -> usize {
        self.cost.len()
    }

    /// `best[mask]`: optimum over the classes `popcount(mask)..k` placed on
    /// the colors outside `mask`, maximizing (`sign = 1`) or minimizing
    /// (`sign = −1`).
    fn table(&self, sign: i64) -> Vec<i64> {
        let k = self.k();
        let full = (1usize << k) - 1;
        let mut best = vec![i64::MIN; full + 1];
        best[full] = 0;
        for mask in (0..full).rev() {
            let i = mask.count_ones() as usize;
            for j in (0..k).filter(|&j| mask & (1 << j) == 0) {
                let next = best[mask | (1 << j)];
                if next != i64::MIN {
                    best[mask] = best[mask].max(next + sign * self.cost[i][j]);
                }
            }
        }
        best
    }

    pub fn max(&self) -> i64 {
        self.table(1)[0] + self.constant
    }

    pub fn min(&self) -> i64 {
        -self.table(-1)[0] + self.constant
    }

    /// Slack of one labeling; `perm[i]` is the 0-based color of class `i`.
    pub fn slack(&self, perm: &[usize]) -> i64 {
        perm.iter().enumerate().map(|(i, &j)| self.cost[i][j]).sum::<i64>() + self.constant
    }

    /// Visits every labeling of maximum slack.
    pub fn for_each_optimal(&self, mut f: impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        fn go(
            costs: &LabelingCosts,
            best: &[i64],
            mask: usize,
            perm: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            let i = perm.len();
            if i == costs.k() {
                return f(perm);
            }
            for j in (0..costs.k()).filter(|&j| mask & (1 << j) == 0) {
                let next = best[mask | (1 << j)];
                if next != i64::MIN && next + costs.cost[i][j] == best[mask] {
                    perm.push(j);
                    go(costs, best, mask | (1 << j), perm, f)?;
                    perm.pop();
                }
            }
            ControlFlow::Continue(())
        }
        let best = self.table(1);
        go(self, &best, 0, &mut Vec::with_capacity(self.k()), &mut f)
    }

    /// A labeling of maximum slack, choosing uniformly among optimal colors
    /// at every step via `pick(count)`.
    pub fn sample_max(&self, mut pick: impl FnMut(usize) -> usize) -> Vec<usize> {
        let best = self.table(1);
        let k = self.k();
        let mut mask = 0usize;
        let mut perm = Vec::with_capacity(k);
        for i in 0..k {
            let options: Vec<usize> = (0..k)
                .filter(|&j| mask & (1 << j) == 0)
                .filter(|&j| {
                    let next = best[mask | (1 << j)];
                    next != i64::MIN && next + self.cost[i][j] == best[mask]
                })
                .collect();
            let j = options[pick(options.len())];
            perm.push(j);
            mask |= 1 << j;
        }
        perm
    }
}

/// Exact validity checker over all labeled equitable colorings of a small
/// graph. The unordered partitions are enumerated once; for each partition the
/// worst labeling is found by a max-weight assignment of classes to colors
/// (the `w` part of a row depends only on the number of classes).
pub struct ValidityOracle {
    n: usize,
    partitions: Vec<EqColoring>,
}

impl ValidityOracle {
    pub fn new(g: &Graph) -> Result<Self> {
        if g.n() > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!("validity oracle needs n ≤ {ENUMERATION_LIMIT}, got {}", g.n())));
        }
        let mut partitions = Vec::new();
        for k in 1..=g.n() {
            for_each_partition(g, k, |c| {
                partitions.push(c.clone());
                ControlFlow::Continue(())
            });
        }
        Ok(ValidityOracle { n: g.n(), partitions })
    }

    pub fn partitions(&self) -> &[EqColoring] {
        &self.partitions
    }

    /// Largest `lhs − rhs` over all labelings of `c`.
    pub fn max_slack(&self, row: &CutRow, c: &EqColoring) -> i64 {
        LabelingCosts::new(row, c).max()
    }

    /// Largest `lhs − rhs` over every 0/1 point of the polytope.
    pub fn worst_slack(&self, row: &CutRow) -> i64 {
        self.partitions.iter().map(|c| self.max_slack(row, c)).max().unwrap_or(i64::MIN)
    }

    pub fn is_valid(&self, row: &CutRow) -> bool {
        row.n == self.n && self.worst_slack(row) <= 0
    }
}

/// Whether `row` holds at every equitable coloring of `g` (exact, `n ≤ 8`).
pub fn validate_against_oracle(g: &Graph, row: &CutRow) -> Result<bool> {
    Ok(ValidityOracle::new(g)?.is_valid(row))
}
