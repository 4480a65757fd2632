//! Machine checks on the polytope of equitable colorings: its dimension, the
//! affinely independent family behind it, and face dimensions of cut rows.
//!
//! Ranks are exact. Points are 0/1 vectors homogenized as `(1, x, w)`, so the
//! linear rank of a point set is its affine dimension plus one.

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::coloring::{
    for_each_labeled, for_each_partition, oracle, random_eqcol, BinaryPoint, EqColoring, OracleResult, ENUMERATION_LIMIT,
};
use crate::cuts::{CutRow, LabelingCosts};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Incremental exact rank of a set of 0/1 vectors.
///
/// The span is kept in reduced row echelon form over the rationals. An integer
/// basis of its orthogonal complement is cached alongside, so membership of a
/// new 0/1 vector is a handful of integer sums over its support; only vectors
/// that enlarge the span touch rational arithmetic.
#[derive(Clone, Debug)]
pub struct AffineRank {
    len: usize,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    /// `None` when some complement vector does not fit in `i128`.
    annihilator: Option<Vec<Vec<i128>>>,
}

impl AffineRank {
    pub fn new(len: usize) -> Self {
        let identity = (0..len).map(|i| (0..len).map(|t| i128::from(t == i)).collect()).collect();
        AffineRank { len, rows: Vec::new(), pivots: Vec::new(), annihilator: Some(identity) }
    }

    /// Rank accumulator for homogenized points of an `n`-vertex graph.
    pub fn for_graph(n: usize) -> Self {
        AffineRank::new(1 + n * n + n)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, support: &[usize]) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.len];
        for &i in support {
            v[i] = BigRational::one();
        }
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            }
        }
        v
    }

    /// Whether the 0/1 vector with ones at `support` lies in the span.
    pub fn contains_support(&self, support: &[usize]) -> bool {
        if self.rows.len() == self.len {
            return true;
        }
        if let Some(ann) = &self.annihilator {
            let mut exact = true;
            for a in ann {
                let mut s: i128 = 0;
                for &i in support {
                    match s.checked_add(a[i]) {
                        Some(t) => s = t,
                        None => {
                            exact = false;
                            break;
                        }
                    }
                }
                if !exact {
                    break;
                }
                if s != 0 {
                    return false;
                }
            }
            if exact {
                return true;
            }
        }
        self.reduce(support).iter().all(Zero::is_zero)
    }

    /// Adds the vector; returns whether the rank grew.
    pub fn insert_support(&mut self, support: &[usize]) -> bool {
        if self.contains_support(support) {
            return false;
        }
        let mut v = self.reduce(support);
        let Some(p) = v.iter().position(|a| !a.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for a in v.iter_mut() {
            *a /= &lead;
        }
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        self.annihilator = self.complement();
        true
    }

    /// Integer basis of `{a : r·a = 0 for every row r}`, one vector per
    /// non-pivot column.
    fn complement(&self) -> Option<Vec<Vec<i128>>> {
        let mut is_pivot = vec![false; self.len];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.len).filter(|&f| !is_pivot[f]) {
            let mut a = vec![BigRational::zero(); self.len];
            a[f] = BigRational::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                a[p] = -row[f].clone();
            }
            let lcm = a.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<BigInt> = a.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
            let gcd = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let mut small = Vec::with_capacity(self.len);
            for x in ints {
                small.push((x / &gcd).to_i128()?);
            }
            out.push(small);
        }
        Some(out)
    }
}

/// A family of colorings with its affine rank.
#[derive(Clone, Debug)]
pub struct AffineFamily {
    pub colorings: Vec<EqColoring>,
    rank: AffineRank,
}

impl AffineFamily {
    pub fn new(n: usize) -> Self {
        AffineFamily { colorings: Vec::new(), rank: AffineRank::for_graph(n) }
    }

    pub fn push(&mut self, c: EqColoring) {
        self.rank.insert_support(&c.to_binary().support());
        self.colorings.push(c);
    }

    pub fn len(&self) -> usize {
        self.colorings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colorings.is_empty()
    }

    /// Affine rank: the number of affinely independent members.
    pub fn rank(&self) -> usize {
        self.rank.rank()
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.len()
    }
}

/// `n² − (χ_eq + |S| + 1)` from oracle values.
pub fn dimension_from(n: usize, o: &OracleResult) -> usize {
    (n * n).saturating_sub(o.chi_eq + o.skip_set.len() + 1)
}

pub fn ecp_dimension(g: &Graph) -> usize {
    dimension_from(g.n(), &oracle(g))
}

/// Whether `p` satisfies the minimal equation system: assignment rows,
/// `w_j = 1` for `j ≤ χ_eq`, `w_j = w_{j+1}` on the skip set and
/// `Σ_v x_vn = w_n`.
pub fn satisfies_equations(p: &BinaryPoint, o: &OracleResult) -> bool {
    let n = p.n;
    (1..=n).all(|v| (1..=n).map(|j| p.x(v, j) as usize).sum::<usize>() == 1)
        && (1..=o.chi_eq.min(n)).all(|j| p.w(j) == 1)
        && o.skip_set.iter().all(|&j| p.w(j) == p.w(j + 1))
        && (1..=n).map(|v| p.x(v, n) as usize).sum::<usize>() == p.w(n) as usize
}

/// The affinely independent family spanning the polytope: an `(n−1)`-eqcol
/// `c` whose class `n−1` is the first non-adjacent pair `{u1, u2}`, the swaps
/// `swap_{n−1,j}(c)`, `c' = intro(c, u1)`, the swaps `swap_{n,j,j'}(c')` and
/// `swap_{n,j}(c')`, and one `k`-eqcol for every admitted `k ∈ [χ_eq, n−2]`.
pub fn independent_family(g: &Graph) -> Result<AffineFamily> {
    independent_family_with(g, &oracle(g))
}

pub fn independent_family_with(g: &Graph, o: &OracleResult) -> Result<AffineFamily> {
    let n = g.n();
    if !g.meets_standing_assumptions() {
        return Err(Error::Assumptions("needs n ≥ 5, an edge, no universal vertex and no K_{n−1}".into()));
    }
    if o.chi_eq < 2 || o.chi_eq + 2 > n {
        return Err(Error::Assumptions(format!("needs 2 ≤ χ_eq ≤ n − 2, got χ_eq = {}", o.chi_eq)));
    }
    let (u1, u2) = g
        .vertices()
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .find(|&(u, v)| !g.has_edge(u, v))
        .ok_or_else(|| Error::Assumptions("graph is complete".into()))?;
    let mut classes: Vec<Vec<usize>> = g.vertices().filter(|&v| v != u1 && v != u2).map(|v| vec![v]).collect();
    classes.push(vec![u1, u2]);
    let c = EqColoring::new(n, classes)?;
    let cp = c.intro(u1)?;

    let mut fam = AffineFamily::new(n);
    fam.push(c.clone());
    for j in 1..=n - 2 {
        fam.push(c.swap(&[n - 1, j])?);
    }
    fam.push(cp.clone());
    for j in 1..n {
        for jp in (1..n).filter(|&jp| jp != j) {
            fam.push(cp.swap(&[n, j, jp])?);
        }
    }
    for j in 1..n {
        fam.push(cp.swap(&[n, j])?);
    }
    for k in o.chi_eq..=n - 2 {
        if let Some(w) = o.witnesses.get(k).and_then(Option::as_ref) {
            fam.push(w.clone());
        }
    }
    for c in &fam.colorings {
        if !c.is_equitable(g)? {
            return Err(Error::InvalidColoring(format!("family member {:?} is not equitable", c.colors())));
        }
    }
    Ok(fam)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimensionPath {
    /// Every labeled equitable coloring enumerated.
    Full,
    /// The explicit family plus sampled colorings.
    Family,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub path: DimensionPath,
    pub dim_ecp: usize,
    pub rank: usize,
    pub points: usize,
    pub equations_hold: bool,
}

impl DimensionReport {
    pub fn holds(&self) -> bool {
        self.equations_hold && self.rank == self.dim_ecp + 1
    }
}

/// Colorings drawn per admitted `k` on the family path.
pub const DIMENSION_SAMPLES: usize = 20;

/// Checks that the affine hull of the equitable colorings has the claimed
/// dimension and that every point satisfies the minimal equation system.
pub fn verify_dimension(g: &Graph) -> Result<DimensionReport> {
    let o = oracle(g);
    let n = g.n();
    let dim_ecp = dimension_from(n, &o);
    if n <= ENUMERATION_LIMIT {
        let mut rank = AffineRank::for_graph(n);
        let mut points = 0;
        let mut equations_hold = true;
        for_each_labeled(g, |c| {
            let p = c.to_binary();
            points += 1;
            equations_hold &= satisfies_equations(&p, &o);
            rank.insert_support(&p.support());
            ControlFlow::Continue(())
        })?;
        return Ok(DimensionReport { path: DimensionPath::Full, dim_ecp, rank: rank.rank(), points, equations_hold });
    }
    let fam = independent_family_with(g, &o)?;
    let mut equations_hold = fam.colorings.iter().all(|c| satisfies_equations(&c.to_binary(), &o));
    let mut points = fam.len();
    let mut rng = SplitMix64::seed_from_u64(0x5eed);
    for k in (1..=n).filter(|&k| o.admits(k)) {
        for _ in 0..DIMENSION_SAMPLES {
            if let Some(c) = random_eqcol(g, k, &mut rng, 100_000) {
                let mut perm: Vec<usize> = (0..k).collect();
                perm.shuffle(&mut rng);
                equations_hold &= satisfies_equations(&c.relabel_colors(&perm).to_binary(), &o);
                points += 1;
            }
        }
    }
    Ok(DimensionReport { path: DimensionPath::Family, dim_ecp, rank: fam.rank(), points, equations_hold })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceStatus {
    Invalid,
    ValidFace,
    FacetVerified,
    /// The point budget ran out before the rank reached the facet target;
    /// inconclusive, not a refutation.
    RankBoundReached,
}

impl fmt::Display for FaceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceStatus::Invalid => "invalid",
            FaceStatus::ValidFace => "valid-face",
            FaceStatus::FacetVerified => "facet-verified",
            FaceStatus::RankBoundReached => "rank-bound-reached",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceVerdict {
    pub status: FaceStatus,
    /// Rank of the face points found; the face has dimension `rank − 1`.
    pub rank: usize,
    pub dim_ecp: usize,
    /// Face points generated (including repeats of the span).
    pub generated: usize,
    /// Whether every equitable coloring was examined.
    pub exhaustive: bool,
    /// Whether some coloring satisfies the row strictly.
    pub off_face: bool,
    /// A coloring violating the row, when invalid.
    #[serde(skip)]
    pub violator: Option<EqColoring>,
}

impl FaceVerdict {
    pub fn report(&self, graph_id: &str, row: &CutRow) -> String {
        format!("{graph_id}\t{row}\t{}\t{}/{}", self.status, self.rank, self.dim_ecp)
    }
}

/// Largest `n` for which faces are examined; partitions are enumerated in
/// full, labelings are sampled above [`ENUMERATION_LIMIT`].
pub const FACE_LIMIT: usize = 12;
pub const PARTITION_CAP: usize = 2_000_000;
/// Random transpositions tried around every sampled face point.
const SWAP_TRIES: usize = 4;

pub fn default_effort(dim_ecp: usize) -> usize {
    50 * dim_ecp
}

/// Classifies the face of `row`. On `n ≤ 8` every labeled coloring is
/// examined and the verdict is exact; up to [`FACE_LIMIT`] all partitions are
/// checked for validity and face points are sampled until `effort` points
/// (default `50·dim`) have been generated.
pub fn verify_face(g: &Graph, row: &CutRow, effort: Option<usize>) -> Result<FaceVerdict> {
    verify_face_with(g, &oracle(g), row, effort)
}

pub fn verify_face_with(g: &Graph, o: &OracleResult, row: &CutRow, effort: Option<usize>) -> Result<FaceVerdict> {
    let n = g.n();
    if row.n != n {
        return Err(Error::InvalidCut(format!("row is over {} vertices, graph has {n}", row.n)));
    }
    if n > FACE_LIMIT {
        return Err(Error::TooLarge(format!("face verification needs n ≤ {FACE_LIMIT}, got {n}")));
    }
    let dim_ecp = dimension_from(n, o);
    let mut verdict = FaceVerdict {
        status: FaceStatus::ValidFace,
        rank: 0,
        dim_ecp,
        generated: 0,
        exhaustive: n <= ENUMERATION_LIMIT,
        off_face: false,
        violator: None,
    };

    let mut tight: Vec<(EqColoring, LabelingCosts)> = Vec::new();
    let mut seen = 0usize;
    let mut capped = false;
    for k in (1..=n).filter(|&k| o.admits(k)) {
        for_each_partition(g, k, |c| {
            seen += 1;
            if seen > PARTITION_CAP {
                capped = true;
                return ControlFlow::Break(());
            }
            let costs = LabelingCosts::new(row, c);
            let max = costs.max();
            if max > 0 {
                let perm = costs.sample_max(|_| 0);
                verdict.violator = Some(c.relabel_colors(&perm));
                return ControlFlow::Break(());
            }
            if costs.min() < 0 {
                verdict.off_face = true;
            }
            if max == 0 {
                tight.push((c.clone(), costs));
            }
            ControlFlow::Continue(())
        });
        if verdict.violator.is_some() || capped {
            break;
        }
    }
    if verdict.violator.is_some() {
        verdict.status = FaceStatus::Invalid;
        return Ok(verdict);
    }
    verdict.exhaustive &= !capped;

    let mut rank = AffineRank::for_graph(n);
    let done = |rank: &AffineRank, off: bool| off && rank.rank() >= dim_ecp;
    if verdict.exhaustive {
        for (c, costs) in &tight {
            let flow = costs.for_each_optimal(|perm| {
                verdict.generated += 1;
                rank.insert_support(&c.relabel_colors(perm).to_binary().support());
                if done(&rank, verdict.off_face) {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if flow.is_break() {
                break;
            }
        }
    } else {
        // Round-robin over the number of colors so that the few partitions
        // with many classes are not drowned out by the numerous middle ones.
        let budget = effort.unwrap_or_else(|| default_effort(dim_ecp));
        let mut rng = SplitMix64::seed_from_u64(0xface_5eed);
        let mut strata: Vec<Vec<(EqColoring, LabelingCosts)>> = vec![Vec::new(); n + 1];
        for (c, costs) in tight {
            strata[c.k()].push((c, costs));
        }
        strata.retain(|s| !s.is_empty());
        for s in &mut strata {
            s.shuffle(&mut rng);
        }
        let mut round = 0;
        'rounds: while !strata.is_empty() {
            for s in &strata {
                if verdict.generated >= budget || done(&rank, verdict.off_face) {
                    break 'rounds;
                }
                let (c, costs) = &s[round % s.len()];
                let mut perm = costs.sample_max(|m| rng.random_range(0..m));
                verdict.generated += 1;
                rank.insert_support(&c.relabel_colors(&perm).to_binary().support());
                let k = perm.len();
                for _ in 0..SWAP_TRIES.min(k * (k - 1) / 2) {
                    let (a, b) = (rng.random_range(0..k), rng.random_range(0..k));
                    if a == b {
                        continue;
                    }
                    perm.swap(a, b);
                    if costs.slack(&perm) == 0 {
                        verdict.generated += 1;
                        rank.insert_support(&c.relabel_colors(&perm).to_binary().support());
                    } else {
                        perm.swap(a, b);
                    }
                }
            }
            round += 1;
        }
    }
    verdict.rank = rank.rank();
    verdict.status = if verdict.off_face && verdict.rank == dim_ecp {
        FaceStatus::FacetVerified
    } else if verdict.exhaustive {
        FaceStatus::ValidFace
    } else {
        FaceStatus::RankBoundReached
    };
    Ok(verdict)
}

/// Rank of the face points of `row` found under `effort`.
pub fn face_rank(g: &Graph, row: &CutRow, effort: Option<usize>) -> Result<usize> {
    Ok(verify_face(g, row, effort)?.rank)
}

/// Whether two rows define faces of equal dimension (exact for `n ≤ 8`).
pub fn face_dims_equal(g: &Graph, a: &CutRow, b: &CutRow, effort: Option<usize>) -> Result<bool> {
    let o = oracle(g);
    Ok(verify_face_with(g, &o, a, effort)?.rank == verify_face_with(g, &o, b, effort)?.rank)
}

/// The labeled equitable colorings lying on the face of `row` (`n ≤ 8`).
pub fn face_points(g: &Graph, row: &CutRow) -> Result<Vec<EqColoring>> {
    let mut out = Vec::new();
    for_each_labeled(g, |c| {
        if row.slack_coloring(c) == 0 {
            out.push(c.clone());
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Membership of `c` in the face of the `(u,j)`-outside-neighborhood row
/// built with `chi`, by the combinatorial characterization.
pub fn on_outside_neighborhood_face(g: &Graph, u: usize, j: usize, chi: usize, c: &EqColoring) -> bool {
    let n = g.n();
    let r = c.k();
    if r < j {
        return true;
    }
    let cj = c.class(j);
    let cu = c.color_of(u);
    if cu == j {
        return cj.len() == n / r;
    }
    if !cj.iter().all(|&v| g.has_edge(u, v)) {
        return false;
    }
    n / r >= n / j.max(chi) || cu > n / (n / r + 1)
}

/// Membership of `c` in the face of the `(u,j,k,Q)`-clique-neighborhood row
/// built with `alpha`, by the combinatorial characterization. For `r ≥ n − 1`
/// and `c(u) ∈ {j, n−1, n}` the class-`j` count is taken over `N(u) ∪ Q`,
/// not `Q` alone: a neighbor of `u` colored `j` contributes to the row.
pub fn on_clique_neighborhood_face(g: &Graph, u: usize, j: usize, k: usize, q: &[usize], alpha: usize, c: &EqColoring) -> bool {
    let n = g.n();
    let r = c.k();
    if r < j {
        return true;
    }
    let cu = c.color_of(u);
    let in_nq = |v: &&usize| g.has_edge(u, **v) || q.contains(v);
    let cj_q = c.class(j).iter().filter(|v| q.contains(v)).count();
    let cj_nq = c.class(j).iter().filter(in_nq).count();
    let size = |l: usize| if l <= r { c.class(l).len() } else { 0 };
    if r < n.div_ceil(k) {
        if cu == j {
            cj_q == 1 && k == alpha + 1
        } else {
            cj_nq == n.div_ceil(r).min(alpha + 1)
        }
    } else if r + 2 <= n {
        if cu == j {
            cj_q == 1
        } else {
            let rc = n.div_ceil(r);
            cj_nq == rc && (r < n.div_ceil(k - 1) || cu >= n.div_ceil(rc))
        }
    } else if cu == j || cu + 1 >= n {
        let others = |l: usize| size(l) - usize::from(l <= r && cu == l);
        // With `u` on color `n − 1` or `n`, neighbors of `u` on color `j`
        // count as well; with `u` on `j` the two counts coincide.
        cj_nq + others(n - 1) + others(n) == 2
    } else {
        cu >= n.div_ceil(2) && cj_nq + size(n - 1) + size(n) == 3
    }
}
