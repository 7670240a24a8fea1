//! Piecewise-linear paths, root operators and the folded-path classifiers.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alcove::Alcove;
use crate::coweight::{q_string, qi, Coweight, Q};
use crate::rootsys::RootSystem;
use crate::weyl::{
    chain_reachable, ell_lambda, find_chain, in_local_orbit, orbit_leq, share_chamber, ChainError,
    ChamberDatum, Chain,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("a path needs at least one segment")]
    Empty,
    #[error("durations must be positive and sum to 1")]
    BadDurations,
    #[error("expected {expected} coordinates, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("root operators need a path starting at 0")]
    NotNormalized,
    #[error("the constant path has no root operators")]
    Degenerate,
    #[error("not a {0}-path")]
    NotLambdaPath(String),
    #[error("{0} is not a dominant element of P∨")]
    BadType(String),
    #[error("invalid decomposition: {0}")]
    BadDecomposition(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub direction: Coweight,
    #[serde(with = "q_string")]
    pub duration: Q,
}

/// `π(t) = base + ∫ π'`, constant speed on each segment, total time 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PLPath {
    pub base: Coweight,
    pub segments: Vec<Segment>,
}

/// A bend of a path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Breakpoint {
    #[serde(with = "q_string")]
    pub time: Q,
    pub point: Coweight,
    pub incoming: Coweight,
    pub outgoing: Coweight,
}

impl PLPath {
    /// Validates durations and merges equal adjacent directions.
    pub fn new(base: Coweight, segments: Vec<Segment>) -> Result<Self, PathError> {
        if segments.is_empty() {
            return Err(PathError::Empty);
        }
        let n = base.rank();
        let mut total = Q::zero();
        for s in &segments {
            if s.direction.rank() != n {
                return Err(PathError::RankMismatch { expected: n, got: s.direction.rank() });
            }
            if !s.duration.is_positive() {
                return Err(PathError::BadDurations);
            }
            total += s.duration;
        }
        if total != Q::one() {
            return Err(PathError::BadDurations);
        }
        Ok(Self::canonical(base, segments))
    }

    fn canonical(base: Coweight, segments: Vec<Segment>) -> Self {
        let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
        for s in segments {
            match out.last_mut() {
                Some(last) if last.direction == s.direction => last.duration += s.duration,
                _ => out.push(s),
            }
        }
        PLPath { base, segments: out }
    }

    /// `π_λ(t) = tλ`.
    pub fn straight(lambda: &Coweight) -> Self {
        PLPath {
            base: Coweight::zero(lambda.rank()),
            segments: vec![Segment { direction: lambda.clone(), duration: Q::one() }],
        }
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn is_degenerate(&self) -> bool {
        self.segments.iter().all(|s| s.direction.is_zero())
    }

    /// Segment boundary times `0 = t_0 < … < t_m = 1`.
    pub fn times(&self) -> Vec<Q> {
        let mut t = Q::zero();
        let mut out = vec![t];
        for s in &self.segments {
            t += s.duration;
            out.push(t);
        }
        out
    }

    /// Positions at [`Self::times`].
    pub fn points(&self) -> Vec<Coweight> {
        let mut x = self.base.clone();
        let mut out = vec![x.clone()];
        for s in &self.segments {
            x = x.add_scaled(&s.direction, s.duration);
            out.push(x.clone());
        }
        out
    }

    pub fn endpoint(&self) -> Coweight {
        self.points().pop().expect("nonempty")
    }

    pub fn position(&self, t: Q) -> Coweight {
        let mut x = self.base.clone();
        let mut start = Q::zero();
        for s in &self.segments {
            if t <= start + s.duration {
                return x.add_scaled(&s.direction, t - start);
            }
            x = x.add_scaled(&s.direction, s.duration);
            start += s.duration;
        }
        x
    }

    pub fn breakpoints(&self) -> Vec<Breakpoint> {
        let times = self.times();
        let points = self.points();
        (1..self.segments.len())
            .map(|j| Breakpoint {
                time: times[j],
                point: points[j].clone(),
                incoming: self.segments[j - 1].direction.clone(),
                outgoing: self.segments[j].direction.clone(),
            })
            .collect()
    }

    /// Common dominant projection of the directions, if they share one orbit.
    pub fn type_vector(&self, rs: &RootSystem) -> Option<Coweight> {
        let t = rs.dominant_projection(&self.segments[0].direction);
        self.segments[1..]
            .iter()
            .all(|s| rs.dominant_projection(&s.direction) == t)
            .then_some(t)
    }

    pub fn is_lambda_path(&self, rs: &RootSystem, lambda: &Coweight) -> bool {
        self.type_vector(rs).as_ref() == Some(lambda)
    }

    pub fn translate(&self, v: &Coweight) -> PLPath {
        PLPath { base: &self.base + v, segments: self.segments.clone() }
    }

    /// `t ↦ n·π(t)`.
    pub fn dilate(&self, n: i64) -> PLPath {
        let c = qi(n);
        PLPath {
            base: self.base.scale(c),
            segments: self
                .segments
                .iter()
                .map(|s| Segment { direction: s.direction.scale(c), duration: s.duration })
                .collect(),
        }
    }

    /// Applies `d ↦ r_β d` to the directions on `[t0, t1]`.
    pub fn reflect_interval(&self, rs: &RootSystem, beta: usize, t0: Q, t1: Q) -> PLPath {
        let mut out = Vec::new();
        let mut start = Q::zero();
        for s in &self.segments {
            let end = start + s.duration;
            let cuts = [start, t0.max(start).min(end), t1.max(start).min(end), end];
            for w in cuts.windows(2) {
                if w[1] > w[0] {
                    let inside = w[0] >= t0 && w[1] <= t1;
                    let d = if inside { rs.reflect(beta, &s.direction) } else { s.direction.clone() };
                    out.push(Segment { direction: d, duration: w[1] - w[0] });
                }
            }
            start = end;
        }
        Self::canonical(self.base.clone(), out)
    }

    /// Values of `α_i ∘ π` at the segment boundaries.
    fn alpha_profile(&self, i: usize) -> Vec<Q> {
        self.points().iter().map(|p| p[i]).collect()
    }

    fn check_operable(&self) -> Result<(), PathError> {
        if !self.base.is_zero() {
            return Err(PathError::NotNormalized);
        }
        if self.is_degenerate() {
            return Err(PathError::Degenerate);
        }
        Ok(())
    }

    /// `Q = min(α_i∘π([0,1]) ∩ ℤ)`, the least integer value attained.
    pub fn q_value(&self, i: usize) -> i64 {
        let m = self.alpha_profile(i).into_iter().min().expect("nonempty");
        m.ceil().to_integer()
    }

    /// Integer part of `α_i(π(1)) − Q`.
    pub fn p_value(&self, i: usize) -> i64 {
        let end = *self.alpha_profile(i).last().expect("nonempty");
        (end - qi(self.q_value(i))).floor().to_integer()
    }

    pub fn f_op(&self, rs: &RootSystem, i: usize) -> Result<Option<PLPath>, PathError> {
        self.check_operable()?;
        let q = qi(self.q_value(i));
        if self.p_value(i) < 1 {
            return Ok(None);
        }
        let times = self.times();
        let h = self.alpha_profile(i);
        let p = last_hit(&times, &h, q, Q::zero(), Q::one()).expect("Q is attained");
        let x = first_hit(&times, &h, q + Q::one(), p, Q::one()).expect("P ≥ 1");
        Ok(Some(self.reflect_interval(rs, rs.simple_root_index(i), p, x)))
    }

    pub fn e_op(&self, rs: &RootSystem, i: usize) -> Result<Option<PLPath>, PathError> {
        self.check_operable()?;
        let q = qi(self.q_value(i));
        if !q.is_negative() {
            return Ok(None);
        }
        let times = self.times();
        let h = self.alpha_profile(i);
        let qt = first_hit(&times, &h, q, Q::zero(), Q::one()).expect("Q is attained");
        let y = last_hit(&times, &h, q + Q::one(), Q::zero(), qt).expect("0 is attained first");
        Ok(Some(self.reflect_interval(rs, rs.simple_root_index(i), y, qt)))
    }
}

/// Times in `[lo, hi]` where a piecewise-linear profile equals `v`, as the
/// sub-intervals of each segment restricted to the window.
fn hits(times: &[Q], h: &[Q], v: Q, lo: Q, hi: Q) -> Vec<(Q, Q)> {
    let mut out = Vec::new();
    for k in 0..times.len() - 1 {
        let (t0, t1, a, b) = (times[k], times[k + 1], h[k], h[k + 1]);
        let set = if a == b {
            (a == v).then_some((t0, t1))
        } else if (a - v) * (b - v) <= Q::zero() {
            let t = t0 + (v - a) / (b - a) * (t1 - t0);
            Some((t, t))
        } else {
            None
        };
        if let Some((s, e)) = set {
            let (s, e) = (s.max(lo), e.min(hi));
            if s <= e {
                out.push((s, e));
            }
        }
    }
    out
}

fn first_hit(times: &[Q], h: &[Q], v: Q, lo: Q, hi: Q) -> Option<Q> {
    hits(times, h, v, lo, hi).into_iter().map(|(s, _)| s).min()
}

fn last_hit(times: &[Q], h: &[Q], v: Q, lo: Q, hi: Q) -> Option<Q> {
    hits(times, h, v, lo, hi).into_iter().map(|(_, e)| e).max()
}

fn check_type(rs: &RootSystem, lambda: &Coweight) -> Result<(), PathError> {
    if lambda.rank() != rs.rank() {
        return Err(PathError::RankMismatch { expected: rs.rank(), got: lambda.rank() });
    }
    if !lambda.is_integral() || !lambda.is_dominant() {
        return Err(PathError::BadType(lambda.to_string()));
    }
    Ok(())
}

/// Closure of `π_λ` under the operators `f_α`, sorted.
pub fn generate_ls(rs: &RootSystem, lambda: &Coweight) -> Result<Vec<PLPath>, PathError> {
    check_type(rs, lambda)?;
    let start = PLPath::straight(lambda);
    if lambda.is_zero() {
        return Ok(vec![start]);
    }
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for i in 0..rs.rank() {
            if let Some(q) = p.f_op(rs, i)? {
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// One step `σ_{j,i} = r_β σ_{j,i-1}` of an `a_j`-chain, recorded by `σ_{j,i}(λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LsStep {
    pub root: usize,
    pub sigma: Coweight,
    pub ell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BreakpointChain {
    #[serde(with = "q_string")]
    pub time: Q,
    pub from: Coweight,
    pub steps: Vec<LsStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LsCertificate {
    pub breakpoints: Vec<BreakpointChain>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LsOptions {
    /// Require `π_0 ∈ P∨`.
    pub check_base: bool,
    /// Require `ℓ_λ` to drop by exactly one per step.
    pub graded: bool,
}

impl Default for LsOptions {
    fn default() -> Self {
        LsOptions { check_base: true, graded: true }
    }
}

/// Searches an `a`-chain from `from` down to `to` in the orbit poset.
fn a_chain(rs: &RootSystem, from: &Coweight, to: &Coweight, a: Q, graded: bool) -> Option<Vec<LsStep>> {
    let mut parent: HashMap<Coweight, Option<(Coweight, usize)>> = HashMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(cur) = queue.pop_front() {
        if cur == *to {
            let mut steps = Vec::new();
            let mut v = cur;
            while let Some(Some((prev, b))) = parent.get(&v).cloned() {
                steps.push(LsStep { root: b, sigma: v.clone(), ell: ell_lambda(rs, &v) });
                v = prev;
            }
            steps.reverse();
            return Some(steps);
        }
        let ell = ell_lambda(rs, &cur);
        for b in 0..rs.num_positive_roots() {
            let next = rs.reflect(b, &cur);
            if next == cur || parent.contains_key(&next) {
                continue;
            }
            if !(a * rs.pair(b, &next)).is_integer() {
                continue;
            }
            if graded && ell_lambda(rs, &next) + 1 != ell {
                continue;
            }
            if !orbit_leq(rs, &next, &cur) {
                continue;
            }
            parent.insert(next.clone(), Some((cur.clone(), b)));
            queue.push_back(next);
        }
    }
    None
}

/// Certificate for the LS axioms, or `None` if some axiom fails.
pub fn ls_certificate(
    rs: &RootSystem,
    path: &PLPath,
    lambda: &Coweight,
    opts: LsOptions,
) -> Result<Option<LsCertificate>, PathError> {
    check_type(rs, lambda)?;
    if !path.is_lambda_path(rs, lambda) {
        return Err(PathError::NotLambdaPath(lambda.to_string()));
    }
    if opts.check_base && !path.base.is_integral() {
        return Ok(None);
    }
    let mut breakpoints = Vec::new();
    for bp in path.breakpoints() {
        match a_chain(rs, &bp.incoming, &bp.outgoing, bp.time, opts.graded) {
            Some(steps) => breakpoints.push(BreakpointChain { time: bp.time, from: bp.incoming, steps }),
            None => return Ok(None),
        }
    }
    Ok(Some(LsCertificate { breakpoints }))
}

pub fn is_ls(rs: &RootSystem, path: &PLPath, lambda: &Coweight) -> Result<bool, PathError> {
    Ok(ls_certificate(rs, path, lambda, LsOptions::default())?.is_some())
}

/// Reference chamber for folding conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoldReference {
    /// The antidominant chamber `−C^v`.
    NegDominant,
    /// The local chamber at each bend containing the directions toward the alcove.
    Alcove(Alcove),
}

impl FoldReference {
    pub fn chamber_at(&self, rs: &RootSystem, x: &Coweight) -> ChamberDatum {
        match self {
            FoldReference::NegDominant => ChamberDatum::neg_dominant(rs),
            FoldReference::Alcove(a) => ChamberDatum::toward_point(x, &a.centroid(rs)),
        }
    }
}

fn check_lambda_path(rs: &RootSystem, path: &PLPath) -> Result<Coweight, PathError> {
    path.type_vector(rs)
        .ok_or_else(|| PathError::NotLambdaPath("single-orbit".into()))
}

/// Chains certifying the Hecke condition at each bend; `None` where none exists.
pub fn hecke_chains(rs: &RootSystem, path: &PLPath, reference: &FoldReference) -> Result<Vec<Option<Chain>>, PathError> {
    check_lambda_path(rs, path)?;
    path.breakpoints()
        .iter()
        .map(|bp| {
            let ch = reference.chamber_at(rs, &bp.point);
            Ok(find_chain(rs, &bp.incoming, &bp.outgoing, &ch, Some(&bp.point))?)
        })
        .collect()
}

pub fn is_hecke(rs: &RootSystem, path: &PLPath, reference: &FoldReference) -> Result<bool, PathError> {
    Ok(hecke_chains(rs, path, reference)?.iter().all(Option::is_some))
}

/// Every bend admits a `W^v`-chain relative to `−C^v`.
pub fn is_positively_folded(rs: &RootSystem, path: &PLPath) -> Result<bool, PathError> {
    check_lambda_path(rs, path)?;
    let ch = ChamberDatum::neg_dominant(rs);
    for bp in path.breakpoints() {
        if find_chain(rs, &bp.incoming, &bp.outgoing, &ch, None)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every outgoing direction lies in `W_{π(t)}` applied to the incoming one.
pub fn is_billiard(rs: &RootSystem, path: &PLPath) -> bool {
    path.breakpoints()
        .iter()
        .all(|bp| in_local_orbit(rs, &bp.incoming, &bp.outgoing, &bp.point))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathClasses {
    pub billiard: bool,
    pub positively_folded: bool,
    pub hecke: bool,
    pub ls: bool,
}

pub fn classify(rs: &RootSystem, path: &PLPath) -> Result<PathClasses, PathError> {
    let lambda = check_lambda_path(rs, path)?;
    let ls = lambda.is_integral() && is_ls(rs, path, &lambda)?;
    Ok(PathClasses {
        billiard: is_billiard(rs, path),
        positively_folded: is_positively_folded(rs, path)?,
        hecke: is_hecke(rs, path, &FoldReference::NegDominant)?,
        ls,
    })
}

/// Number of pairs `(wall, t)` with `t < 1` where the path leaves the wall
/// toward its positive side: per segment, the integers in `[β(start), β(end))`
/// for each `β > 0` increasing along it.
pub fn load_bearing_count(rs: &RootSystem, path: &PLPath) -> i64 {
    let pts = path.points();
    let mut n = 0;
    for (j, s) in path.segments.iter().enumerate() {
        for b in 0..rs.num_positive_roots() {
            if rs.pair(b, &s.direction).is_positive() {
                n += rs.pair(b, &pts[j + 1]).ceil().to_integer() - rs.pair(b, &pts[j]).ceil().to_integer();
            }
        }
    }
    n
}

/// `pr_{C^v} ∘ π`, cut where the path meets walls through the origin.
pub fn fold_dominant(rs: &RootSystem, path: &PLPath) -> PLPath {
    let pts = path.points();
    let mut out = Vec::new();
    for (j, s) in path.segments.iter().enumerate() {
        let x = &pts[j];
        let mut cuts = vec![Q::zero(), s.duration];
        for b in 0..rs.num_positive_roots() {
            let slope = rs.pair(b, &s.direction);
            if !slope.is_zero() {
                let t = -rs.pair(b, x) / slope;
                if t.is_positive() && t < s.duration {
                    cuts.push(t);
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let mid = x.add_scaled(&s.direction, (w[0] + w[1]) / qi(2));
            let (_, word) = rs.dominant_with_word(&mid);
            let d = word.iter().fold(s.direction.clone(), |d, &i| rs.reflect_simple(i, &d));
            out.push(Segment { direction: d, duration: w[1] - w[0] });
        }
    }
    PLPath::canonical(rs.dominant_projection(&path.base), out)
}

/// The coarse-fold upgrade: a Hecke path whose bends and start are special
/// vertices is LS. Returns `None` when those hypotheses fail.
pub fn coarse_ls_upgrade(rs: &RootSystem, path: &PLPath) -> Result<Option<LsCertificate>, PathError> {
    let lambda = check_lambda_path(rs, path)?;
    if !is_hecke(rs, path, &FoldReference::NegDominant)? {
        return Err(PathError::Invariant("input is not Hecke".into()));
    }
    let special = path.base.is_integral() && path.breakpoints().iter().all(|bp| bp.point.is_integral());
    if !special || !lambda.is_integral() {
        return Ok(None);
    }
    match ls_certificate(rs, path, &lambda, LsOptions::default())? {
        Some(c) => Ok(Some(c)),
        None => Err(PathError::Invariant("Hecke path with special folds is not LS".into())),
    }
}

/// A random `λ`-path from `0`: either a perturbed LS path (its tail reflected
/// at a random time) or a free sequence of orbit directions.
pub fn random_folded_path<R: Rng>(rs: &RootSystem, lambda: &Coweight, ls: &[PLPath], rng: &mut R) -> PLPath {
    let orbit = rs.orbit(lambda);
    let den = rng.gen_range(1..=6i64);
    if !ls.is_empty() && rng.gen_bool(0.6) {
        let mut p = ls[rng.gen_range(0..ls.len())].clone();
        for _ in 0..rng.gen_range(1..=2) {
            let t = Q::new(rng.gen_range(1..den.max(2) * 2), den.max(2) * 2);
            if t >= Q::one() {
                continue;
            }
            let b = rng.gen_range(0..rs.num_positive_roots());
            p = p.reflect_interval(rs, b, t, Q::one());
        }
        return p;
    }
    let m = rng.gen_range(1..=3usize);
    let mut cuts: Vec<Q> = (0..m - 1).map(|_| Q::new(rng.gen_range(1..den.max(2)), den.max(2))).collect();
    cuts.push(Q::zero());
    cuts.push(Q::one());
    cuts.sort();
    cuts.dedup();
    let segments = cuts
        .windows(2)
        .map(|w| Segment { direction: orbit[rng.gen_range(0..orbit.len())].clone(), duration: w[1] - w[0] })
        .collect();
    PLPath::canonical(Coweight::zero(rs.rank()), segments)
}

/// A bend that is billiard and positively folded but admits no chain inside `W_x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeGap {
    pub lambda: Coweight,
    pub point: Coweight,
    pub incoming: Coweight,
    pub outgoing: Coweight,
}

impl HeckeGap {
    /// Two-segment path bending at `point` at time 1/2.
    pub fn path(&self) -> PLPath {
        let half = Q::new(1, 2);
        PLPath::canonical(
            self.point.add_scaled(&self.incoming, -half),
            vec![
                Segment { direction: self.incoming.clone(), duration: half },
                Segment { direction: self.outgoing.clone(), duration: half },
            ],
        )
    }
}

/// Scans bend points with coordinates in `(1/den)ℤ ∩ [-1, 1]` and the given types.
pub fn find_hecke_gap(rs: &RootSystem, lambdas: &[Coweight], den: i64) -> Option<HeckeGap> {
    let n = rs.rank();
    let neg = ChamberDatum::neg_dominant(rs);
    let grid: Vec<Q> = (-den..=den).map(|a| Q::new(a, den)).collect();
    let mut idx = vec![0usize; n];
    loop {
        let x = Coweight(idx.iter().map(|&k| grid[k]).collect());
        for lambda in lambdas {
            let orbit = rs.orbit(lambda);
            for from in &orbit {
                for to in &orbit {
                    if from == to || !in_local_orbit(rs, from, to, &x) {
                        continue;
                    }
                    let folded = find_chain(rs, from, to, &neg, None).ok().flatten().is_some();
                    let hecke = find_chain(rs, from, to, &neg, Some(&x)).ok().flatten().is_some();
                    if folded && !hecke {
                        return Some(HeckeGap {
                            lambda: lambda.clone(),
                            point: x,
                            incoming: from.clone(),
                            outgoing: to.clone(),
                        });
                    }
                }
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Concatenation `p_1 ⋆ ⋯ ⋆ p_l` with `p_i` of type `η_i ∈ ℕϖ_i∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeneralizedPath {
    pub types: Vec<Coweight>,
    pub factors: Vec<PLPath>,
}

/// `η = Σ η_i ϖ_i∨` split into its nonzero fundamental pieces.
pub fn fundamental_decomposition(rs: &RootSystem, eta: &Coweight) -> Result<Vec<Coweight>, PathError> {
    check_type(rs, eta)?;
    Ok((0..rs.rank())
        .filter(|&i| !eta[i].is_zero())
        .map(|i| rs.fundamental_coweight(i).scale(eta[i]))
        .collect())
}

fn check_decomposition(rs: &RootSystem, eta: &Coweight, types: &[Coweight]) -> Result<(), PathError> {
    check_type(rs, eta)?;
    let mut sum = Coweight::zero(rs.rank());
    for t in types {
        check_type(rs, t)?;
        let support: Vec<usize> = (0..rs.rank()).filter(|&i| !t[i].is_zero()).collect();
        if support.len() != 1 {
            return Err(PathError::BadDecomposition(format!("{t} is not a positive multiple of a fundamental coweight")));
        }
        sum = &sum + t;
    }
    if sum != *eta {
        return Err(PathError::BadDecomposition(format!("pieces sum to {sum}, not {eta}")));
    }
    Ok(())
}

impl GeneralizedPath {
    pub fn new(rs: &RootSystem, types: Vec<Coweight>, factors: Vec<PLPath>) -> Result<Self, PathError> {
        if types.len() != factors.len() || types.is_empty() {
            return Err(PathError::BadDecomposition("one factor per piece".into()));
        }
        for (k, (t, f)) in types.iter().zip(&factors).enumerate() {
            if !f.is_lambda_path(rs, t) {
                return Err(PathError::NotLambdaPath(t.to_string()));
            }
            if k > 0 && f.base != factors[k - 1].endpoint() {
                return Err(PathError::BadDecomposition("factors are not concatenated".into()));
            }
        }
        Ok(GeneralizedPath { types, factors })
    }

    /// `π_η = π_{η_1} ⋆ ⋯ ⋆ π_{η_l}`.
    pub fn straight(rs: &RootSystem, eta: &Coweight, types: &[Coweight]) -> Result<Self, PathError> {
        check_decomposition(rs, eta, types)?;
        let mut x = Coweight::zero(rs.rank());
        let mut factors = Vec::new();
        for t in types {
            factors.push(PLPath::straight(t).translate(&x));
            x = &x + t;
        }
        Ok(GeneralizedPath { types: types.to_vec(), factors })
    }

    pub fn endpoint(&self) -> Coweight {
        self.factors.last().expect("nonempty").endpoint()
    }

    /// The concatenation reparametrized on `[0,1]`, each factor taking time `1/l`.
    pub fn concatenated(&self) -> PLPath {
        let l = qi(self.factors.len() as i64);
        let segments = self
            .factors
            .iter()
            .flat_map(|f| f.segments.iter())
            .map(|s| Segment { direction: s.direction.scale(l), duration: s.duration / l })
            .collect();
        PLPath::canonical(self.factors[0].base.clone(), segments)
    }

    /// Inverse of [`Self::concatenated`].
    pub fn split(rs: &RootSystem, path: &PLPath, types: &[Coweight]) -> Result<Self, PathError> {
        let l = qi(types.len() as i64);
        let mut factors = Vec::new();
        let mut base = path.base.clone();
        for k in 0..types.len() {
            let (t0, t1) = (qi(k as i64) / l, qi(k as i64 + 1) / l);
            let mut segs = Vec::new();
            let mut start = Q::zero();
            for s in &path.segments {
                let end = start + s.duration;
                let (a, b) = (start.max(t0), end.min(t1));
                if a < b {
                    segs.push(Segment { direction: s.direction.scale(Q::one() / l), duration: (b - a) * l });
                }
                start = end;
            }
            let f = PLPath::new(base, segs)?;
            base = f.endpoint();
            factors.push(f);
        }
        GeneralizedPath::new(rs, types.to_vec(), factors)
    }

    /// Junction points `p_i(0)`, `i ≥ 2`, with `(p_{i-1})'_-` and `(p_i)'_+` there.
    pub fn junctions(&self) -> Vec<Breakpoint> {
        (1..self.factors.len())
            .map(|k| Breakpoint {
                time: qi(k as i64) / qi(self.factors.len() as i64),
                point: self.factors[k].base.clone(),
                incoming: self.factors[k - 1].segments.last().expect("nonempty").direction.clone(),
                outgoing: self.factors[k].segments[0].direction.clone(),
            })
            .collect()
    }
}

/// Some `ξ` reachable from the incoming direction by a local chain shares a
/// closed chamber with the outgoing direction.
pub fn junction_ok(rs: &RootSystem, bp: &Breakpoint, reference: &FoldReference) -> bool {
    let ch = reference.chamber_at(rs, &bp.point);
    chain_reachable(rs, &bp.incoming, &ch, Some(&bp.point))
        .iter()
        .any(|xi| share_chamber(rs, xi, &bp.outgoing))
}

pub fn is_generalized_ls(rs: &RootSystem, g: &GeneralizedPath) -> Result<bool, PathError> {
    if !g.factors[0].base.is_integral() {
        return Ok(false);
    }
    let opts = LsOptions { check_base: false, graded: true };
    for (t, f) in g.types.iter().zip(&g.factors) {
        if ls_certificate(rs, f, t, opts)?.is_none() {
            return Ok(false);
        }
    }
    Ok(g.junctions().iter().all(|bp| junction_ok(rs, bp, &FoldReference::NegDominant)))
}

pub fn is_generalized_hecke(rs: &RootSystem, g: &GeneralizedPath, reference: &FoldReference) -> Result<bool, PathError> {
    for f in &g.factors {
        if !is_hecke(rs, f, reference)? {
            return Ok(false);
        }
    }
    Ok(g.junctions().iter().all(|bp| junction_ok(rs, bp, reference)))
}

/// Closure of `π_η` under the root operators acting on the concatenation.
pub fn generate_generalized_ls(rs: &RootSystem, eta: &Coweight, types: &[Coweight]) -> Result<Vec<GeneralizedPath>, PathError> {
    let start = GeneralizedPath::straight(rs, eta, types)?;
    if eta.is_zero() {
        return Ok(vec![start]);
    }
    let start = start.concatenated();
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for i in 0..rs.rank() {
            if let Some(q) = p.f_op(rs, i)? {
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
    }
    seen.iter().map(|p| GeneralizedPath::split(rs, p, types)).collect()
}

/// `pr_{C^v}` applied to a generalized path.
pub fn fold_dominant_generalized(rs: &RootSystem, g: &GeneralizedPath) -> Result<GeneralizedPath, PathError> {
    GeneralizedPath::split(rs, &fold_dominant(rs, &g.concatenated()), &g.types)
}

pub fn dilate_generalized(g: &GeneralizedPath, n: i64) -> GeneralizedPath {
    GeneralizedPath {
        types: g.types.iter().map(|t| t.scale(qi(n))).collect(),
        factors: g.factors.iter().map(|f| f.dilate(n)).collect(),
    }
}

/// Whether `shift + π(t) ∈ C^v` for all `t`, checked at the breakpoints.
pub fn stays_dominant(path: &PLPath, shift: &Coweight) -> bool {
    path.points().iter().all(|p| (p + shift).is_dominant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coweight::qr;

    fn a1() -> RootSystem {
        RootSystem::from_str_type("A1").unwrap()
    }

    fn path(base: &[i64], segs: &[(&[i64], Q)]) -> PLPath {
        PLPath::new(
            Coweight::from_ints(base),
            segs.iter().map(|(d, t)| Segment { direction: Coweight::from_ints(d), duration: *t }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_merge_and_validation() {
        let p = path(&[0], &[(&[2], qr(1, 3)), (&[2], qr(2, 3))]);
        assert_eq!(p, PLPath::straight(&Coweight::from_ints(&[2])));
        let bad = PLPath::new(
            Coweight::from_ints(&[0]),
            vec![Segment { direction: Coweight::from_ints(&[2]), duration: qr(1, 2) }],
        );
        assert_eq!(bad, Err(PathError::BadDurations));
    }

    #[test]
    fn a1_operators() {
        let rs = a1();
        let s = PLPath::straight(&Coweight::from_ints(&[2]));
        let f1 = s.f_op(&rs, 0).unwrap().unwrap();
        assert_eq!(f1, path(&[0], &[(&[-2], qr(1, 2)), (&[2], qr(1, 2))]));
        assert_eq!(f1.endpoint(), Coweight::from_ints(&[0]));
        let f2 = f1.f_op(&rs, 0).unwrap().unwrap();
        assert_eq!(f2, PLPath::straight(&Coweight::from_ints(&[-2])));
        assert_eq!(f2.f_op(&rs, 0).unwrap(), None);
        assert_eq!(f1.e_op(&rs, 0).unwrap().unwrap(), s);
        assert_eq!(s.e_op(&rs, 0).unwrap(), None);
        assert_eq!(s.translate(&Coweight::from_ints(&[1])).f_op(&rs, 0), Err(PathError::NotNormalized));
        let zero = PLPath::straight(&Coweight::from_ints(&[0]));
        assert!(zero.is_degenerate());
        assert_eq!(zero.f_op(&rs, 0), Err(PathError::Degenerate));
    }

    #[test]
    fn ls_axioms_a1() {
        let rs = a1();
        let lam = Coweight::from_ints(&[2]);
        let bend = |t: Q| path(&[0], &[(&[-2], t), (&[2], Q::one() - t)]);
        assert!(is_ls(&rs, &bend(qr(1, 2)), &lam).unwrap());
        assert!(!is_ls(&rs, &bend(qr(1, 3)), &lam).unwrap());
        assert!(is_hecke(&rs, &bend(qr(1, 2)), &FoldReference::NegDominant).unwrap());
        assert!(!is_hecke(&rs, &bend(qr(1, 3)), &FoldReference::NegDominant).unwrap());
        assert!(!is_billiard(&rs, &bend(qr(1, 3))));
        assert!(is_positively_folded(&rs, &bend(qr(1, 3))).unwrap());
        let up = path(&[0], &[(&[2], qr(1, 2)), (&[-2], qr(1, 2))]);
        assert!(!is_ls(&rs, &up, &lam).unwrap());
        assert!(!is_positively_folded(&rs, &up).unwrap());
        assert!(matches!(is_ls(&rs, &up, &Coweight::from_ints(&[4])), Err(PathError::NotLambdaPath(_))));
    }

    #[test]
    fn generation_sizes() {
        let rs = a1();
        assert_eq!(generate_ls(&rs, &Coweight::from_ints(&[2])).unwrap().len(), 3);
        let a2 = RootSystem::from_str_type("A2").unwrap();
        let all = generate_ls(&a2, &Coweight::from_ints(&[1, 1])).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|p| p.endpoint().is_zero()).count(), 2);
        assert_eq!(generate_ls(&a2, &Coweight::from_ints(&[0, 0])).unwrap().len(), 1);
    }

    #[test]
    fn folding_and_dilation() {
        let rs = a1();
        let p = PLPath::straight(&Coweight::from_ints(&[-2]));
        assert_eq!(fold_dominant(&rs, &p), PLPath::straight(&Coweight::from_ints(&[2])));
        let q = path(&[1], &[(&[-2], Q::one())]);
        assert_eq!(fold_dominant(&rs, &q), path(&[1], &[(&[-2], qr(1, 2)), (&[2], qr(1, 2))]));
        assert_eq!(p.dilate(3).endpoint(), Coweight::from_ints(&[-6]));
        assert_eq!(p.dilate(1), p);
    }

    #[test]
    fn coarse_upgrade() {
        let rs = a1();
        let s = PLPath::straight(&Coweight::from_ints(&[2]));
        assert!(coarse_ls_upgrade(&rs, &s).unwrap().is_some());
        let up = path(&[0], &[(&[2], qr(1, 2)), (&[-2], qr(1, 2))]);
        assert!(coarse_ls_upgrade(&rs, &up).is_err());
        let g2 = RootSystem::from_str_type("G2").unwrap();
        // Bend on a wall through a non-special vertex.
        let lam = Coweight::from_ints(&[1, 0]);
        let v = Coweight(vec![qi(0), qr(1, 2)]);
        let orbit = g2.orbit(&lam);
        let neg = ChamberDatum::neg_dominant(&g2);
        let mut found = false;
        for a in &orbit {
            for b in &orbit {
                if a != b && find_chain(&g2, a, b, &neg, Some(&v)).unwrap().is_some() {
                    let gap = HeckeGap { lambda: lam.clone(), point: v.clone(), incoming: a.clone(), outgoing: b.clone() };
                    let p = gap.path();
                    assert!(is_hecke(&g2, &p, &FoldReference::NegDominant).unwrap());
                    assert_eq!(coarse_ls_upgrade(&g2, &p).unwrap(), None);
                    found = true;
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn generalized_straight_is_ls() {
        let a2 = RootSystem::from_str_type("A2").unwrap();
        let eta = Coweight::from_ints(&[1, 1]);
        let types = fundamental_decomposition(&a2, &eta).unwrap();
        let g = GeneralizedPath::straight(&a2, &eta, &types).unwrap();
        assert!(is_generalized_ls(&a2, &g).unwrap());
        assert_eq!(GeneralizedPath::split(&a2, &g.concatenated(), &types).unwrap(), g);
        let bad = GeneralizedPath::straight(&a2, &eta, &[Coweight::from_ints(&[1, 1])]);
        assert!(matches!(bad, Err(PathError::BadDecomposition(_))));
    }
}
